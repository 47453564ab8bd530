//! Sparse multivariate integer polynomials in `y_1..y_k` (0-based indices internally).

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, i64>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], 1)
    }

    pub fn monomial(exps: Vec<u32>, coeff: i64) -> Self {
        let mut p = Poly::zero(exps.len());
        p.add_term(exps, coeff);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, 1)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exps: Vec<u32>, coeff: i64) {
        debug_assert_eq!(exps.len(), self.nvars);
        if coeff == 0 {
            return;
        }
        let slot = self.terms.entry(exps.clone()).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.terms.remove(&exps);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, i64)> + '_ {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, c: i64) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Exchange the variables `i` and `j`.
    pub fn swap(&self, i: usize, j: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e.swap(i, j);
            out.add_term(e, *c);
        }
        out
    }

    pub fn is_symmetric_in(&self, i: usize, j: usize) -> bool {
        self.swap(i, j) == *self
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Exact quotient by `y_i - y_j`; fails when the division leaves a remainder.
    pub fn div_by_difference(&self, i: usize, j: usize) -> Result<Poly> {
        // Group by the exponent vector with y_i removed, then synthetic division in y_i
        // at the root y_i = y_j.
        let mut groups: BTreeMap<Vec<u32>, BTreeMap<u32, i64>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let k = rest[i];
            rest[i] = 0;
            *groups.entry(rest).or_default().entry(k).or_insert(0) += c;
        }
        let mut quot = Poly::zero(self.nvars);
        let mut remainder = Poly::zero(self.nvars);
        for (rest, coeffs) in groups {
            let top = *coeffs.keys().next_back().unwrap();
            // q_{k-1} = c_k + y_j q_k, accumulated as polynomials in y_j.
            let mut carry: BTreeMap<u32, i64> = BTreeMap::new();
            for k in (0..=top).rev() {
                let mut cur: BTreeMap<u32, i64> = carry.iter().map(|(d, v)| (d + 1, *v)).collect();
                if let Some(v) = coeffs.get(&k) {
                    *cur.entry(0).or_insert(0) += v;
                }
                if k == 0 {
                    for (d, v) in &cur {
                        let mut e = rest.clone();
                        e[j] += d;
                        remainder.add_term(e, *v);
                    }
                } else {
                    for (d, v) in &cur {
                        let mut e = rest.clone();
                        e[j] += d;
                        e[i] = k - 1;
                        quot.add_term(e, *v);
                    }
                }
                carry = cur;
            }
        }
        if !remainder.is_zero() {
            return Err(Error::Internal(format!(
                "inexact division by y_{} - y_{}",
                i + 1,
                j + 1
            )));
        }
        Ok(quot)
    }

    /// Divided difference `(f - s_i f)/(y_i - y_{i+1})`, `i` 0-based.
    pub fn demazure(&self, i: usize) -> Poly {
        self.sub(&self.swap(i, i + 1))
            .div_by_difference(i, i + 1)
            .expect("f - s_i f is divisible by y_i - y_{i+1}")
    }

    pub fn elementary(nvars: usize, vars: &[usize], k: usize) -> Poly {
        let mut out = Poly::zero(nvars);
        for subset in subsets(vars, k) {
            let mut e = vec![0; nvars];
            for v in subset {
                e[v] = 1;
            }
            out.add_term(e, 1);
        }
        out
    }

    /// Complete homogeneous symmetric polynomial `h_k` in the listed variables.
    pub fn complete(nvars: usize, vars: &[usize], k: u32) -> Poly {
        let mut out = Poly::zero(nvars);
        let mut stack = vec![(0usize, k, vec![0u32; nvars])];
        while let Some((pos, left, e)) = stack.pop() {
            if pos == vars.len() {
                if left == 0 {
                    out.add_term(e, 1);
                }
                continue;
            }
            for take in 0..=left {
                let mut e2 = e.clone();
                e2[vars[pos]] += take;
                stack.push((pos + 1, left - take, e2));
            }
        }
        out
    }
}

pub(crate) fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (idx, &first) in items.iter().enumerate() {
        for mut rest in subsets(&items[idx + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " {} ", if *c < 0 { "-" } else { "+" })?;
            } else if *c < 0 {
                write!(f, "-")?;
            }
            first = false;
            let mag = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| if a == 1 { format!("y{}", i + 1) } else { format!("y{}^{}", i + 1, a) })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(n: usize, exps: &[u32]) -> Poly {
        let mut e = exps.to_vec();
        e.resize(n, 0);
        Poly::monomial(e, 1)
    }

    #[test]
    fn demazure_examples() {
        assert_eq!(y(2, &[1]).demazure(0), Poly::one(2));
        assert!(y(2, &[1, 1]).demazure(0).is_zero());
        assert_eq!(y(2, &[2]).demazure(0), y(2, &[1]).add(&y(2, &[0, 1])));
    }

    #[test]
    fn demazure_times_difference_recovers_antisymmetric_part() {
        let f = y(3, &[3, 1, 2]).add(&y(3, &[0, 4, 1]).scale(-2)).add(&y(3, &[2, 2, 0]));
        for i in 0..2 {
            let d = f.demazure(i);
            let diff = Poly::var(3, i).sub(&Poly::var(3, i + 1));
            assert_eq!(d.mul(&diff), f.sub(&f.swap(i, i + 1)));
        }
    }

    #[test]
    fn inexact_division_is_rejected() {
        assert!(y(2, &[1]).div_by_difference(0, 1).is_err());
    }

    #[test]
    fn complete_and_elementary_counts() {
        let h = Poly::complete(3, &[0, 1, 2], 2);
        assert_eq!(h.terms().count(), 6);
        let e = Poly::elementary(3, &[0, 1, 2], 2);
        assert_eq!(e.terms().count(), 3);
    }
}
