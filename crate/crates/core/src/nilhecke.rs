//! Cyclotomic nilHecke algebras `NH_n^l` over `F_p`, realized faithfully on the
//! polynomial quotient `F_p[y_1..y_n]/(h_{l-n+1}, ..., h_l)`.
//!
//! Elements are coordinate vectors over the monomial basis `y^a psi_w`
//! (`a_i <= l - i`, `w` in `S_n`). Products go through the matrix realization;
//! the differential is computed on symbolic lifts.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::coeff::Field;
use crate::combinatorics::{factorial, binomial, Permutation};
use crate::error::{ensure, Error, Result};
use crate::linalg::{axpy, Matrix, Subspace};
use crate::poly::Poly;

pub type Coords = Vec<u32>;

/// A generator letter: `Y(i)` is `y_{i+1}`, `Psi(i)` is `psi_{i+1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Letter {
    Y(usize),
    Psi(usize),
}

impl Letter {
    pub fn degree(self) -> i64 {
        match self {
            Letter::Y(_) => 2,
            Letter::Psi(_) => -2,
        }
    }
}

/// Formal integer combination of letter sequences; a lift to the affine algebra.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct NHWord {
    pub terms: Vec<(i64, Vec<Letter>)>,
}

impl NHWord {
    pub fn letters(letters: Vec<Letter>) -> Self {
        NHWord { terms: vec![(1, letters)] }
    }

    pub fn one() -> Self {
        Self::letters(vec![])
    }

    pub fn monomial(exps: &[u32], psi_word: &[usize]) -> Self {
        let mut letters = Vec::new();
        for (i, &a) in exps.iter().enumerate() {
            letters.extend(std::iter::repeat_n(Letter::Y(i), a as usize));
        }
        letters.extend(psi_word.iter().map(|&i| Letter::Psi(i)));
        Self::letters(letters)
    }

    pub fn from_poly(p: &Poly) -> Self {
        NHWord {
            terms: p
                .terms()
                .map(|(e, c)| {
                    let w = NHWord::monomial(e, &[]);
                    (c, w.terms[0].1.clone())
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        NHWord { terms: self.terms.iter().map(|(k, w)| (k * c, w.clone())).collect() }
    }

    pub fn add(&self, o: &NHWord) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        NHWord { terms }
    }

    pub fn mul(&self, o: &NHWord) -> Self {
        let mut terms = Vec::new();
        for (c1, w1) in &self.terms {
            for (c2, w2) in &o.terms {
                let mut w = w1.clone();
                w.extend(w2.iter().copied());
                terms.push((c1 * c2, w));
            }
        }
        NHWord { terms }
    }

    /// The anti-automorphism reversing every letter sequence.
    pub fn star(&self) -> Self {
        NHWord {
            terms: self
                .terms
                .iter()
                .map(|(c, w)| (*c, w.iter().rev().copied().collect()))
                .collect(),
        }
    }

    /// Leibniz expansion of `d(y_i) = y_i^2`, `d(psi_i) = -y_i psi_i - psi_i y_{i+1}`.
    pub fn differential(&self) -> Self {
        let mut terms = Vec::new();
        for (c, w) in &self.terms {
            for (t, &letter) in w.iter().enumerate() {
                let pre = &w[..t];
                let suf = &w[t + 1..];
                let mut push = |coeff: i64, mid: &[Letter]| {
                    let mut v = pre.to_vec();
                    v.extend_from_slice(mid);
                    v.extend_from_slice(suf);
                    terms.push((c * coeff, v));
                };
                match letter {
                    Letter::Y(i) => push(1, &[Letter::Y(i), Letter::Y(i)]),
                    Letter::Psi(i) => {
                        push(-1, &[Letter::Y(i), Letter::Psi(i)]);
                        push(-1, &[Letter::Psi(i), Letter::Y(i + 1)]);
                    }
                }
            }
        }
        NHWord { terms }
    }

    /// Largest strand index touched, plus one.
    pub fn strands(&self) -> usize {
        self.terms
            .iter()
            .flat_map(|(_, w)| w.iter())
            .map(|l| match *l {
                Letter::Y(i) => i + 1,
                Letter::Psi(i) => i + 2,
            })
            .max()
            .unwrap_or(0)
    }

    /// Shift every strand index by `k`.
    pub fn shifted(&self, k: usize) -> Self {
        NHWord {
            terms: self
                .terms
                .iter()
                .map(|(c, w)| {
                    let w = w
                        .iter()
                        .map(|l| match *l {
                            Letter::Y(i) => Letter::Y(i + k),
                            Letter::Psi(i) => Letter::Psi(i + k),
                        })
                        .collect();
                    (*c, w)
                })
                .collect(),
        }
    }
}

impl fmt::Display for NHWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, w)| {
                let body: Vec<String> = w
                    .iter()
                    .map(|l| match l {
                        Letter::Y(i) => format!("y{}", i + 1),
                        Letter::Psi(i) => format!("psi{}", i + 1),
                    })
                    .collect();
                let body = if body.is_empty() { "1".to_string() } else { body.join("*") };
                if *c == 1 {
                    body
                } else {
                    format!("{c}*{body}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for NHWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NHWord({self})")
    }
}

/// Standard monomials `y^a` with `a_i <= l - i` span the quotient.
#[derive(Clone, Debug)]
pub struct PolyQuotient {
    pub n: usize,
    pub l: usize,
    pub field: Field,
    monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl PolyQuotient {
    pub fn new(n: usize, l: usize, field: Field) -> Self {
        let mut monomials = vec![vec![]];
        for i in 0..n {
            let bound = (l - i - 1) as u32;
            monomials = monomials
                .into_iter()
                .flat_map(|m: Vec<u32>| {
                    (0..=bound).map(move |a| {
                        let mut m2 = m.clone();
                        m2.push(a);
                        m2
                    })
                })
                .collect();
        }
        monomials.sort_by_key(|m| (m.iter().sum::<u32>(), m.clone()));
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        PolyQuotient { n, l, field, monomials, index }
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    pub fn monomial_degree(&self, k: usize) -> i64 {
        2 * self.monomials[k].iter().sum::<u32>() as i64
    }

    /// Normal form of `y^exps` in the standard basis. Uses
    /// `h_{l-i+1}(y_1..y_i)` (which lies in the ideal) to rewrite `y_i^{l-i+1}`,
    /// always at the largest offending index.
    pub fn normal_form(&self, exps: &[u32], memo: &mut HashMap<Vec<u32>, Vec<(usize, u32)>>) -> Vec<(usize, u32)> {
        if let Some(&k) = self.index.get(exps) {
            return vec![(k, 1)];
        }
        if let Some(v) = memo.get(exps) {
            return v.clone();
        }
        let f = self.field;
        let i = (0..self.n).rev().find(|&i| exps[i] as usize > self.l - i - 1).unwrap();
        let k = (self.l - i) as u32;
        let mut rest = exps.to_vec();
        rest[i] -= k;
        let vars: Vec<usize> = (0..=i).collect();
        let h = Poly::complete(self.n, &vars, k);
        let mut acc: BTreeMap<usize, u32> = BTreeMap::new();
        for (e, c) in h.terms() {
            if e[i] == k {
                continue;
            }
            let m: Vec<u32> = e.iter().zip(&rest).map(|(a, b)| a + b).collect();
            let coeff = f.neg(f.from_i64(c));
            for (idx, v) in self.normal_form(&m, memo) {
                let slot = acc.entry(idx).or_insert(0);
                *slot = f.add(*slot, f.mul(coeff, v));
            }
        }
        let out: Vec<(usize, u32)> = acc.into_iter().filter(|(_, v)| *v != 0).collect();
        memo.insert(exps.to_vec(), out.clone());
        out
    }

    pub fn reduce(&self, p: &Poly) -> Vec<u32> {
        let f = self.field;
        let mut memo = HashMap::new();
        let mut out = vec![0u32; self.dim()];
        for (e, c) in p.terms() {
            let cf = f.from_i64(c);
            for (idx, v) in self.normal_form(e, &mut memo) {
                out[idx] = f.add(out[idx], f.mul(cf, v));
            }
        }
        out
    }

    fn multiplication_matrix(&self, i: usize, memo: &mut HashMap<Vec<u32>, Vec<(usize, u32)>>) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for (col, mono) in self.monomials.iter().enumerate() {
            let mut e = mono.clone();
            e[i] += 1;
            for (row, v) in self.normal_form(&e, memo) {
                m.set(row, col, v);
            }
        }
        m
    }

    fn demazure_matrix(&self, i: usize, memo: &mut HashMap<Vec<u32>, Vec<(usize, u32)>>) -> Matrix {
        let f = self.field;
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for (col, mono) in self.monomials.iter().enumerate() {
            let img = Poly::monomial(mono.clone(), 1).demazure(i);
            for (e, c) in img.terms() {
                let cf = f.from_i64(c);
                for (row, v) in self.normal_form(e, memo) {
                    m.set(row, col, f.add(m.get(row, col), f.mul(cf, v)));
                }
            }
        }
        m
    }
}

/// Label of a basis element `y^exps psi_perm`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BasisLabel {
    pub exps: Vec<u32>,
    pub perm: Permutation,
    pub psi_word: Vec<usize>,
}

impl BasisLabel {
    pub fn degree(&self) -> i64 {
        2 * self.exps.iter().sum::<u32>() as i64 - 2 * self.psi_word.len() as i64
    }

    pub fn word(&self) -> NHWord {
        NHWord::monomial(&self.exps, &self.psi_word)
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &a) in self.exps.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(format!("y{}", i + 1)),
                _ => parts.push(format!("y{}^{}", i + 1, a)),
            }
        }
        for &i in &self.psi_word {
            parts.push(format!("psi{}", i + 1));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// An element of `NH_n^l` with an optional symbolic lift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NHElement {
    pub coords: Coords,
    pub word: Option<NHWord>,
}

/// Concrete faithful realization of `NH_n^l`.
pub struct NHRep {
    pub n: usize,
    pub l: usize,
    field: Field,
    quotient: PolyQuotient,
    y_mats: Vec<Matrix>,
    psi_mats: Vec<Matrix>,
    labels: Vec<BasisLabel>,
    degrees: Vec<i64>,
    basis_mats: Vec<Matrix>,
    solver: Subspace,
    right_gens: OnceLock<Vec<Matrix>>,
    diff: OnceLock<Matrix>,
    star: OnceLock<Matrix>,
}

impl fmt::Debug for NHRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NHRep(n={}, l={}, p={}, dim={})", self.n, self.l, self.field.modulus(), self.dim())
    }
}

/// `(n!)^2 C(l, n)`.
pub fn expected_dimension(n: usize, l: usize) -> usize {
    (factorial(n) * factorial(n) * binomial(l as i64, n as i64)) as usize
}

impl NHRep {
    pub fn build(n: usize, l: usize, p: u32) -> Result<NHRep> {
        if n > l {
            return Err(Error::Param(format!("n = {n} exceeds l = {l}")));
        }
        let field = Field::new(p)?;
        let quotient = PolyQuotient::new(n, l, field);
        let mut memo = HashMap::new();
        let y_mats: Vec<Matrix> = (0..n).map(|i| quotient.multiplication_matrix(i, &mut memo)).collect();
        let psi_mats: Vec<Matrix> =
            (0..n.saturating_sub(1)).map(|i| quotient.demazure_matrix(i, &mut memo)).collect();
        let rep = Self::assemble(n, l, field, quotient, y_mats, psi_mats)?;
        rep.check_relations()?;
        Ok(rep)
    }

    /// Assemble the basis and solver from generator matrices.
    pub(crate) fn assemble(
        n: usize,
        l: usize,
        field: Field,
        quotient: PolyQuotient,
        y_mats: Vec<Matrix>,
        psi_mats: Vec<Matrix>,
    ) -> Result<NHRep> {
        let d = quotient.dim();
        let mut exps_list: Vec<Vec<u32>> = quotient.monomials().to_vec();
        exps_list.sort();
        let perms = Permutation::all(n);
        let mut labels = Vec::new();
        let mut basis_mats = Vec::new();
        let psi_perm_mats: Vec<Matrix> = perms
            .iter()
            .map(|w| {
                w.reduced_word()
                    .iter()
                    .fold(Matrix::identity(d), |acc, &i| acc.mul(&psi_mats[i], field))
            })
            .collect();
        for exps in &exps_list {
            let ym = exps.iter().enumerate().fold(Matrix::identity(d), |acc, (i, &a)| {
                acc.mul(&y_mats[i].pow(a, field), field)
            });
            for (w, pm) in perms.iter().zip(&psi_perm_mats) {
                labels.push(BasisLabel { exps: exps.clone(), perm: w.clone(), psi_word: w.reduced_word() });
                basis_mats.push(ym.mul(pm, field));
            }
        }
        let mut solver = Subspace::new(d * d, field);
        for m in &basis_mats {
            ensure(solver.insert(&m.data), || {
                format!("monomial basis of NH_{n}^{l} is linearly dependent")
            })?;
        }
        ensure(labels.len() == expected_dimension(n, l), || {
            format!("basis size {} differs from (n!)^2 C(l,n)", labels.len())
        })?;
        let degrees = labels.iter().map(|b| b.degree()).collect();
        Ok(NHRep {
            n,
            l,
            field,
            quotient,
            y_mats,
            psi_mats,
            labels,
            degrees,
            basis_mats,
            solver,
            right_gens: OnceLock::new(),
            diff: OnceLock::new(),
            star: OnceLock::new(),
        })
    }

    /// Rebuild from stored generator matrices, re-verifying every relation.
    pub(crate) fn from_generators(
        n: usize,
        l: usize,
        p: u32,
        y_mats: Vec<Matrix>,
        psi_mats: Vec<Matrix>,
        diff: Option<Matrix>,
    ) -> Result<NHRep> {
        let field = Field::new(p)?;
        let quotient = PolyQuotient::new(n, l, field);
        let d = quotient.dim();
        ensure(
            y_mats.len() == n
                && psi_mats.len() == n.saturating_sub(1)
                && y_mats.iter().chain(&psi_mats).all(|m| m.rows == d && m.cols == d),
            || "stored generator matrices have the wrong shape".into(),
        )?;
        let rep = Self::assemble(n, l, field, quotient, y_mats, psi_mats)?;
        rep.check_relations()?;
        if let Some(m) = diff {
            ensure(m.rows == rep.dim() && m.cols == rep.dim(), || "stored differential has the wrong shape".into())?;
            let _ = rep.diff.set(m);
        }
        Ok(rep)
    }

    /// Every defining relation as a matrix identity, plus closure of the basis span.
    pub fn check_relations(&self) -> Result<()> {
        let f = self.field;
        let d = self.quotient.dim();
        let id = Matrix::identity(d);
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                ensure(
                    self.y_mats[i].mul(&self.y_mats[j], f) == self.y_mats[j].mul(&self.y_mats[i], f),
                    || format!("y_{} y_{} do not commute", i + 1, j + 1),
                )?;
            }
        }
        if n > 0 {
            ensure(self.y_mats[0].pow(self.l as u32, f).is_zero(), || "y_1^l is nonzero".into())?;
        }
        for i in 0..n.saturating_sub(1) {
            let (y, y1, s) = (&self.y_mats[i], &self.y_mats[i + 1], &self.psi_mats[i]);
            ensure(y.mul(s, f).sub(&s.mul(y1, f), f) == id, || format!("y_i psi_i - psi_i y_(i+1) != 1 at i={}", i + 1))?;
            ensure(s.mul(y, f).sub(&y1.mul(s, f), f) == id, || format!("psi_i y_i - y_(i+1) psi_i != 1 at i={}", i + 1))?;
            ensure(s.mul(s, f).is_zero(), || format!("psi_{}^2 != 0", i + 1))?;
            for j in 0..n {
                if j != i && j != i + 1 {
                    ensure(s.mul(&self.y_mats[j], f) == self.y_mats[j].mul(s, f), || {
                        format!("psi_{} does not commute with y_{}", i + 1, j + 1)
                    })?;
                }
            }
            for j in 0..n.saturating_sub(1) {
                let t = &self.psi_mats[j];
                if j + 1 < i || i + 1 < j {
                    ensure(s.mul(t, f) == t.mul(s, f), || format!("psi_{} psi_{} do not commute", i + 1, j + 1))?;
                }
                if j == i + 1 {
                    ensure(s.mul(t, f).mul(s, f) == t.mul(s, f).mul(t, f), || format!("braid relation fails at {}", i + 1))?;
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.modulus()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn quotient(&self) -> &PolyQuotient {
        &self.quotient
    }

    pub fn y_matrix(&self, i: usize) -> &Matrix {
        &self.y_mats[i]
    }

    pub fn psi_matrix(&self, i: usize) -> &Matrix {
        &self.psi_mats[i]
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn degree(&self, k: usize) -> i64 {
        self.degrees[k]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn basis_matrix(&self, k: usize) -> &Matrix {
        &self.basis_mats[k]
    }

    pub fn zero(&self) -> Coords {
        vec![0; self.dim()]
    }

    pub fn unit(&self, k: usize) -> Coords {
        let mut v = self.zero();
        v[k] = 1;
        v
    }

    pub fn one(&self) -> Coords {
        self.coords_of(&Matrix::identity(self.quotient.dim()))
    }

    pub fn eval_letters(&self, letters: &[Letter]) -> Matrix {
        let f = self.field;
        let d = self.quotient.dim();
        letters.iter().fold(Matrix::identity(d), |acc, l| match *l {
            Letter::Y(i) => acc.mul(&self.y_mats[i], f),
            Letter::Psi(i) => acc.mul(&self.psi_mats[i], f),
        })
    }

    pub fn eval_word(&self, w: &NHWord) -> Matrix {
        let f = self.field;
        let d = self.quotient.dim();
        let mut acc = Matrix::zeros(d, d);
        for (c, letters) in &w.terms {
            let cf = f.from_i64(*c);
            if cf == 0 {
                continue;
            }
            acc = acc.add(&self.eval_letters(letters).scale(cf, f), f);
        }
        acc
    }

    pub fn word_coords(&self, w: &NHWord) -> Result<Coords> {
        if w.strands() > self.n {
            return Err(Error::Param(format!("word {w} uses more than {} strands", self.n)));
        }
        Ok(self.coords_of(&self.eval_word(w)))
    }

    pub fn element_from_word(&self, w: &NHWord) -> Result<NHElement> {
        Ok(NHElement { coords: self.word_coords(w)?, word: Some(w.clone()) })
    }

    pub fn to_matrix(&self, x: &[u32]) -> Matrix {
        let f = self.field;
        let d = self.quotient.dim();
        let mut acc = vec![0u32; d * d];
        for (k, &c) in x.iter().enumerate() {
            if c != 0 {
                axpy(&mut acc, c, &self.basis_mats[k].data, f);
            }
        }
        Matrix { rows: d, cols: d, data: acc }
    }

    /// Coordinates of a matrix known to lie in the algebra.
    pub fn coords_of(&self, m: &Matrix) -> Coords {
        self.solver.coords_unchecked(&m.data)
    }

    pub fn coords_checked(&self, m: &Matrix) -> Option<Coords> {
        self.solver.coords(&m.data)
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Coords {
        self.coords_of(&self.to_matrix(x).mul(&self.to_matrix(y), self.field))
    }

    pub fn add(&self, x: &[u32], y: &[u32]) -> Coords {
        x.iter().zip(y).map(|(&a, &b)| self.field.add(a, b)).collect()
    }

    pub fn sub(&self, x: &[u32], y: &[u32]) -> Coords {
        x.iter().zip(y).map(|(&a, &b)| self.field.sub(a, b)).collect()
    }

    pub fn scale(&self, c: i64, x: &[u32]) -> Coords {
        let cf = self.field.from_i64(c);
        x.iter().map(|&a| self.field.mul(a, cf)).collect()
    }

    pub fn y(&self, i: usize) -> Coords {
        self.coords_of(&self.y_mats[i])
    }

    pub fn psi(&self, i: usize) -> Coords {
        self.coords_of(&self.psi_mats[i])
    }

    pub fn monomial(&self, exps: &[u32]) -> Coords {
        let mut e = exps.to_vec();
        e.resize(self.n, 0);
        self.word_coords(&NHWord::monomial(&e, &[])).expect("monomial in range")
    }

    pub fn psi_perm(&self, w: &Permutation) -> Coords {
        self.word_coords(&NHWord::monomial(&[], &w.reduced_word())).expect("word in range")
    }

    pub fn poly(&self, p: &Poly) -> Coords {
        self.word_coords(&NHWord::from_poly(p)).expect("polynomial in range")
    }

    /// Right multiplication by the generators: indices `0..n` are `y_i`,
    /// then `n..2n-1` are `psi_i`. Row `k` holds the coordinates of `B_k * g`.
    pub fn right_generator_matrices(&self) -> &[Matrix] {
        self.right_gens.get_or_init(|| {
            let f = self.field;
            let gens: Vec<&Matrix> = self.y_mats.iter().chain(self.psi_mats.iter()).collect();
            gens.iter()
                .map(|g| {
                    let rows: Vec<Vec<u32>> =
                        self.basis_mats.iter().map(|b| self.coords_of(&b.mul(g, f))).collect();
                    Matrix::from_rows(&rows, self.dim())
                })
                .collect()
        })
    }

    pub fn generator_letters(&self) -> Vec<Letter> {
        (0..self.n).map(Letter::Y).chain((0..self.n.saturating_sub(1)).map(Letter::Psi)).collect()
    }

    /// `x * g` for the generator with the given index (see `right_generator_matrices`).
    pub fn right_mul_generator(&self, x: &[u32], g: usize) -> Coords {
        self.right_generator_matrices()[g].vec_mul(x, self.field)
    }

    /// Matrix of the differential on the basis: row `k` holds `d(B_k)`, computed by
    /// Leibniz on the canonical lift `y^a psi_{i_1} ... psi_{i_r}`.
    pub fn differential_matrix(&self) -> &Matrix {
        self.diff.get_or_init(|| {
            let rows: Vec<Vec<u32>> = self
                .labels
                .iter()
                .map(|b| self.coords_of(&self.eval_word(&b.word().differential())))
                .collect();
            Matrix::from_rows(&rows, self.dim())
        })
    }

    pub fn differential(&self, x: &[u32]) -> Coords {
        self.differential_matrix().vec_mul(x, self.field)
    }

    pub fn differential_element(&self, x: &NHElement) -> NHElement {
        match &x.word {
            Some(w) => {
                let dw = w.differential();
                NHElement { coords: self.coords_of(&self.eval_word(&dw)), word: Some(dw) }
            }
            None => NHElement { coords: self.differential(&x.coords), word: None },
        }
    }

    /// The anti-automorphism `*` on coordinates; row `k` holds `B_k^*`.
    pub fn star_matrix(&self) -> &Matrix {
        self.star.get_or_init(|| {
            let rows: Vec<Vec<u32>> = self
                .labels
                .iter()
                .map(|b| self.coords_of(&self.eval_word(&b.word().star())))
                .collect();
            Matrix::from_rows(&rows, self.dim())
        })
    }

    pub fn star(&self, x: &[u32]) -> Coords {
        self.star_matrix().vec_mul(x, self.field)
    }

    /// Split into homogeneous components keyed by degree.
    pub fn homogeneous_components(&self, x: &[u32]) -> BTreeMap<i64, Coords> {
        let mut out: BTreeMap<i64, Coords> = BTreeMap::new();
        for (k, &c) in x.iter().enumerate() {
            if c != 0 {
                out.entry(self.degrees[k]).or_insert_with(|| self.zero())[k] = c;
            }
        }
        out
    }

    /// The degree of a nonzero homogeneous element.
    pub fn homogeneous_degree(&self, x: &[u32]) -> Option<i64> {
        let comps = self.homogeneous_components(x);
        if comps.len() == 1 {
            comps.keys().next().copied()
        } else {
            None
        }
    }

    /// `d^p = 0` as an operator on the algebra.
    pub fn verify_dp_zero(&self) -> bool {
        self.differential_matrix().pow(self.p(), self.field).is_zero()
    }

    /// Images of the basis of `self` inside `big` under the strand-prefix embedding.
    pub fn embedding_into(&self, big: &NHRep) -> Result<Matrix> {
        if big.n < self.n || big.l != self.l || big.p() != self.p() {
            return Err(Error::Param(format!("cannot embed {self:?} into {big:?}")));
        }
        let rows: Vec<Vec<u32>> = self
            .labels
            .iter()
            .map(|b| big.word_coords(&b.word()))
            .collect::<Result<_>>()?;
        Ok(Matrix::from_rows(&rows, big.dim()))
    }

    pub fn format_element(&self, x: &[u32]) -> String {
        let parts: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| {
                let c = self.field.lift(c);
                match c {
                    1 => self.labels[k].to_string(),
                    -1 => format!("-{}", self.labels[k]),
                    _ => format!("{c}*{}", self.labels[k]),
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// `[(coefficient, label)]` term list for JSON output.
    pub fn element_json(&self, x: &[u32]) -> serde_json::Value {
        serde_json::Value::Array(
            x.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(k, &c)| serde_json::json!([self.field.lift(c), self.labels[k].to_string()]))
                .collect(),
        )
    }

    pub fn generator_mats(&self) -> (&[Matrix], &[Matrix]) {
        (&self.y_mats, &self.psi_mats)
    }
}

// Idempotents and distinguished elements.

/// `psi_{w_0}` on strands `offset..offset+k`.
pub fn psi_longest_word(k: usize, offset: usize) -> NHWord {
    NHWord::monomial(&[], &Permutation::longest(k).reduced_word()).shifted(offset)
}

/// `e_k = y_1^{k-1} ... y_k^0 psi_{w_0}` on strands `offset..offset+k`.
pub fn e_block_word(k: usize, offset: usize) -> NHWord {
    let exps: Vec<u32> = (0..k).map(|i| (k - 1 - i) as u32).collect();
    let mut w = NHWord::monomial(&exps, &[]).shifted(offset);
    w = w.mul(&psi_longest_word(k, offset));
    w
}

/// Sign-corrected `e'_k = (-1)^{k(k-1)/2} psi_{w_0} y_1^0 ... y_k^{k-1}`.
pub fn e_prime_block_word(k: usize, offset: usize) -> NHWord {
    let exps: Vec<u32> = (0..k).map(|i| i as u32).collect();
    let sign = if (k * k.saturating_sub(1) / 2).is_multiple_of(2) { 1 } else { -1 };
    psi_longest_word(k, offset).mul(&NHWord::monomial(&exps, &[]).shifted(offset)).scale(sign)
}

/// `e_i = e_{i_1} (x) ... (x) e_{i_r}` placed side by side.
pub fn composition_idempotent_word(comp: &[usize]) -> NHWord {
    let mut offset = 0;
    let mut w = NHWord::one();
    for &k in comp {
        w = w.mul(&e_block_word(k, offset));
        offset += k;
    }
    w
}

pub fn idempotent_e(rep: &NHRep, comp: &[usize]) -> Result<NHElement> {
    if comp.iter().sum::<usize>() != rep.n {
        return Err(Error::Param(format!("composition {comp:?} does not sum to {}", rep.n)));
    }
    rep.element_from_word(&composition_idempotent_word(comp))
}

/// `e'_k` on the strands `offset..offset+k`.
pub fn idempotent_e_prime(rep: &NHRep, k: usize, offset: usize) -> Result<NHElement> {
    rep.element_from_word(&e_prime_block_word(k, offset))
}

/// `e^star_{(1^m, a)}`: the sign-corrected `e'_a` on the last `a` strands.
pub fn e_star_word(m: usize, a: usize) -> NHWord {
    e_prime_block_word(a, m)
}

/// `psi_{a,b} = prod_{k=b..1} (psi_k psi_{k+1} ... psi_{k+a-1})`, the longest minimal
/// coset representative of `S_{a+b} / (S_a x S_b)` (length `ab`).
pub fn psi_ab_word(a: usize, b: usize, offset: usize) -> NHWord {
    let mut letters = Vec::new();
    for k in (1..=b).rev() {
        for j in k..k + a {
            letters.push(j - 1);
        }
    }
    NHWord::monomial(&[], &letters).shifted(offset)
}

/// `e^mu_{(a,b)} = (-1)^{|hat mu|} pi_mu(y_1..y_a) e_{(a,b)} psi_{a,b} e_{a+b} pi_{hat mu}(y_{a+1}..y_{a+b})`.
pub fn general_idempotent_word(mu: &crate::combinatorics::BoxPartition) -> Result<NHWord> {
    use crate::combinatorics::{complement_partition, schur_poly};
    let (a, b) = (mu.rows, mu.cols);
    let n = a + b;
    let hat = complement_partition(mu);
    let left = schur_poly(mu, n, &(0..a).collect::<Vec<_>>())?;
    let right = schur_poly(&hat, n, &(a..n).collect::<Vec<_>>())?;
    let sign = if hat.size().is_multiple_of(2) { 1 } else { -1 };
    Ok(NHWord::from_poly(&left)
        .mul(&composition_idempotent_word(&[a, b]))
        .mul(&psi_ab_word(a, b, 0))
        .mul(&e_block_word(n, 0))
        .mul(&NHWord::from_poly(&right))
        .scale(sign))
}

pub fn is_idempotent(rep: &NHRep, x: &[u32]) -> bool {
    rep.mul(x, x) == x
}

/// `sum_i c_i y_{offset+i}` for the given coefficients.
pub fn linear_y(rep: &NHRep, coeffs: &[(usize, i64)]) -> Coords {
    let mut acc = rep.zero();
    for &(i, c) in coeffs {
        acc = rep.add(&acc, &rep.scale(c, &rep.y(i)));
    }
    acc
}

// Cellular structure.

/// Which permutation a tableau contributes to `psi_t`: the one carrying the
/// standard filling to `t`, or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TableauPerm {
    Direct,
    Inverse,
}

/// The convention for which `{psi_th : t in Tab^lambda(mu)}` spans `y^lambda NH`.
pub const TABLEAU_PERM: TableauPerm = TableauPerm::Inverse;

pub fn tableau_permutation(t: &crate::combinatorics::Tableau, conv: TableauPerm) -> Permutation {
    match conv {
        TableauPerm::Direct => t.perm.clone(),
        TableauPerm::Inverse => t.perm.inverse(),
    }
}

/// `psi_h^* y^mu psi_t` as a word.
pub fn cellular_word(
    mu: &crate::combinatorics::Multipartition,
    h: &crate::combinatorics::Tableau,
    t: &crate::combinatorics::Tableau,
    conv: TableauPerm,
) -> NHWord {
    let wh = tableau_permutation(h, conv).reduced_word();
    let wt = tableau_permutation(t, conv).reduced_word();
    let left = NHWord::monomial(&[], &wh).star();
    left.mul(&NHWord::monomial(&mu.y_exponents(), &[])).mul(&NHWord::monomial(&[], &wt))
}

#[derive(Clone, Debug)]
pub struct CellularElement {
    pub shape: crate::combinatorics::Multipartition,
    pub h: crate::combinatorics::Tableau,
    pub t: crate::combinatorics::Tableau,
    pub coords: Coords,
}

pub fn cellular_basis_with(rep: &NHRep, conv: TableauPerm) -> Result<Vec<CellularElement>> {
    use crate::combinatorics::{enumerate_multipartitions, tableaux};
    let mut out = Vec::new();
    let mut span = Subspace::new(rep.dim(), rep.field());
    for mu in enumerate_multipartitions(rep.n, rep.l)? {
        let tabs = tableaux(&mu);
        for h in &tabs {
            for t in &tabs {
                let coords = rep.word_coords(&cellular_word(&mu, h, t, conv))?;
                ensure(span.insert(&coords), || format!("cellular element ({mu}, {h:?}, {t:?}) is dependent"))?;
                out.push(CellularElement { shape: mu.clone(), h: h.clone(), t: t.clone(), coords });
            }
        }
    }
    ensure(out.len() == rep.dim(), || "cellular basis has the wrong size".into())?;
    Ok(out)
}

pub fn cellular_basis(rep: &NHRep) -> Result<Vec<CellularElement>> {
    cellular_basis_with(rep, TABLEAU_PERM)
}

/// `(NH)^{>mu}`: the span of cellular elements of shapes strictly dominating `mu`.
pub fn cell_ideal(
    rep: &NHRep,
    cells: &[CellularElement],
    mu: &crate::combinatorics::Multipartition,
) -> Result<Subspace> {
    use crate::combinatorics::dominance_lt;
    let mut span = Subspace::new(rep.dim(), rep.field());
    for c in cells {
        if dominance_lt(mu, &c.shape)? {
            span.insert(&c.coords);
        }
    }
    Ok(span)
}

/// Whether a subspace is closed under the differential.
pub fn is_differential_stable(rep: &NHRep, span: &Subspace) -> bool {
    span.basis().iter().all(|v| span.contains(&rep.differential(v)))
}

/// Whether a subspace is a two-sided ideal (closed under left and right generators).
pub fn is_two_sided_ideal(rep: &NHRep, span: &Subspace) -> bool {
    let f = rep.field();
    let gens: Vec<Matrix> = {
        let (ys, psis) = rep.generator_mats();
        ys.iter().chain(psis.iter()).cloned().collect()
    };
    span.basis().iter().all(|v| {
        let m = rep.to_matrix(v);
        gens.iter().all(|g| {
            span.contains(&rep.coords_of(&g.mul(&m, f))) && span.contains(&rep.coords_of(&m.mul(g, f)))
        })
    })
}

// Trace.

/// A homogeneous symmetric trace, stored as its values on the basis.
#[derive(Clone, Debug)]
pub struct Trace {
    pub values: Vec<u32>,
    pub degree: i64,
    pub gram_rank: usize,
}

impl Trace {
    pub fn eval(&self, x: &[u32], f: Field) -> u32 {
        x.iter().zip(&self.values).fold(0, |acc, (&a, &b)| f.mul_add(acc, a, b))
    }
}

/// Solve for the trace of degree `-2n(l-n)`: unknowns are its values on the basis
/// elements of degree `2n(l-n)`, constraints are `tau(b g) = tau(g b)` for basis
/// elements `b` and generators `g`. Normalized to 1 on the first basis element where it
/// is nonzero, and certified by the rank of the Gram matrix `tau(b_i b_j)`.
pub fn trace_functional(rep: &NHRep) -> Result<Trace> {
    let f = rep.field();
    let top = 2 * (rep.n * (rep.l - rep.n)) as i64;
    let support: Vec<usize> = (0..rep.dim()).filter(|&k| rep.degree(k) == top).collect();
    let index: HashMap<usize, usize> = support.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let (ys, psis) = rep.generator_mats();
    let gens: Vec<(&Matrix, i64)> =
        ys.iter().map(|g| (g, 2)).chain(psis.iter().map(|g| (g, -2))).collect();
    let mut rows = Vec::new();
    for (k, b) in rep.basis_mats.iter().enumerate() {
        for (g, dg) in &gens {
            if rep.degree(k) + dg != top {
                continue;
            }
            let comm = rep.coords_of(&b.mul(g, f).sub(&g.mul(b, f), f));
            let mut row = vec![0u32; support.len()];
            for (j, &c) in comm.iter().enumerate() {
                if c != 0 {
                    row[index[&j]] = c;
                }
            }
            rows.push(row);
        }
    }
    let system = Matrix::from_rows(&rows, support.len());
    let kernel = if rows.is_empty() {
        (0..support.len()).map(|i| {
            let mut v = vec![0; support.len()];
            v[i] = 1;
            v
        }).collect()
    } else {
        system.kernel(f)
    };
    ensure(!kernel.is_empty(), || "no symmetric trace of the expected degree".into())?;
    let sol = &kernel[0];
    let lead = sol.iter().position(|&x| x != 0).unwrap();
    let inv = f.inv(sol[lead]);
    let mut values = vec![0u32; rep.dim()];
    for (i, &k) in support.iter().enumerate() {
        values[k] = f.mul(sol[i], inv);
    }
    let gram_rank = gram_matrix(rep, &values).rank(f);
    ensure(gram_rank == rep.dim(), || format!("trace is degenerate: Gram rank {gram_rank} < {}", rep.dim()))?;
    Ok(Trace { values, degree: -top, gram_rank })
}

/// `G[i][j] = tau(B_i B_j)`, computed without forming the products: the trace is
/// a linear functional on matrices, `tau(X) = sum_{r,c} W[r][c] X[r][c]`, so
/// `tau(B_i B_j) = <B_i^T W, B_j>` entrywise.
pub fn gram_matrix(rep: &NHRep, values: &[u32]) -> Matrix {
    let f = rep.field();
    let d = rep.quotient.dim();
    // W = sum_k values[k] * (coordinate functional k), read off from the solver.
    let mut w = vec![0u32; d * d];
    for (pos, lin) in rep.solver.coordinate_functionals() {
        let v = lin.iter().zip(values).fold(0u32, |acc, (&a, &b)| f.mul_add(acc, a, b));
        w[pos] = f.add(w[pos], v);
    }
    let wm = Matrix { rows: d, cols: d, data: w };
    let rows: Vec<Vec<u32>> = rep
        .basis_mats
        .iter()
        .map(|bi| {
            let u = bi.transpose().mul(&wm, f);
            rep.basis_mats
                .iter()
                .map(|bj| u.data.iter().zip(&bj.data).fold(0u32, |acc, (&a, &b)| f.mul_add(acc, a, b)))
                .collect()
        })
        .collect();
    Matrix::from_rows(&rows, rep.dim())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_dimensions() {
        assert_eq!(NHRep::build(0, 3, 3).unwrap().dim(), 1);
        assert_eq!(NHRep::build(1, 3, 3).unwrap().dim(), 3);
        assert_eq!(NHRep::build(2, 3, 3).unwrap().dim(), 12);
        assert_eq!(NHRep::build(2, 2, 2).unwrap().dim(), 4);
    }

    #[test]
    fn defining_relations_from_words() {
        let rep = NHRep::build(2, 3, 3).unwrap();
        let psi_sq = rep.word_coords(&NHWord::letters(vec![Letter::Psi(0), Letter::Psi(0)])).unwrap();
        assert_eq!(psi_sq, rep.zero());
        let rel = NHWord::letters(vec![Letter::Y(0), Letter::Psi(0)])
            .add(&NHWord::letters(vec![Letter::Psi(0), Letter::Y(1)]).scale(-1));
        assert_eq!(rep.word_coords(&rel).unwrap(), rep.one());
        let cyc = NHWord::letters(vec![Letter::Y(0); 3]);
        assert_eq!(rep.word_coords(&cyc).unwrap(), rep.zero());
    }

    #[test]
    fn differential_examples() {
        let rep = NHRep::build(2, 3, 3).unwrap();
        assert_eq!(rep.differential(&rep.one()), rep.zero());
        let e2 = idempotent_e(&rep, &[2]).unwrap();
        let expect = rep.scale(-1, &rep.mul(&e2.coords, &rep.y(1)));
        assert_eq!(rep.differential(&e2.coords), expect);
        let dpsi = rep.differential(&rep.psi(0));
        let expect = rep.sub(
            &rep.scale(-1, &rep.mul(&rep.y(0), &rep.psi(0))),
            &rep.mul(&rep.psi(0), &rep.y(1)),
        );
        assert_eq!(dpsi, expect);
    }

    #[test]
    fn e2_is_y1_psi1() {
        let rep = NHRep::build(2, 3, 5).unwrap();
        let e2 = idempotent_e(&rep, &[2]).unwrap().coords;
        assert_eq!(e2, rep.mul(&rep.y(0), &rep.psi(0)));
        assert!(is_idempotent(&rep, &e2));
        assert_eq!(idempotent_e(&rep, &[1, 1]).unwrap().coords, rep.one());
    }

    #[test]
    fn dp_zero_small() {
        for (n, l, p) in [(1, 3, 3), (2, 3, 3), (2, 2, 2)] {
            assert!(NHRep::build(n, l, p).unwrap().verify_dp_zero());
        }
    }

    #[test]
    fn e_prime_differential() {
        for (n, l) in [(2, 3), (3, 3), (2, 4), (3, 4)] {
            let rep = NHRep::build(n, l, 5).unwrap();
            let e = idempotent_e_prime(&rep, n, 0).unwrap().coords;
            assert!(is_idempotent(&rep, &e));
            let coeffs: Vec<(usize, i64)> = (0..n).map(|i| (i, -((n - 1 - i) as i64))).collect();
            let expect = rep.mul(&linear_y(&rep, &coeffs), &e);
            assert_eq!(rep.differential(&e), expect, "n={n} l={l}");
        }
    }

    #[test]
    fn e_differential() {
        for (n, l) in [(2, 3), (3, 3), (3, 4)] {
            let rep = NHRep::build(n, l, 5).unwrap();
            let e = idempotent_e(&rep, &[n]).unwrap().coords;
            let coeffs: Vec<(usize, i64)> = (0..n).map(|i| (i, -(i as i64))).collect();
            assert_eq!(rep.differential(&e), rep.mul(&e, &linear_y(&rep, &coeffs)), "n={n} l={l}");
        }
    }

    #[test]
    fn cellular_basis_and_ideals() {
        use crate::combinatorics::enumerate_multipartitions;
        for (n, l) in [(1, 3), (2, 3), (2, 4), (3, 3)] {
            let rep = NHRep::build(n, l, 3).unwrap();
            let cells = cellular_basis(&rep).unwrap();
            assert_eq!(cells.len(), expected_dimension(n, l));
            for mu in enumerate_multipartitions(n, l).unwrap() {
                let ideal = cell_ideal(&rep, &cells, &mu).unwrap();
                assert!(is_two_sided_ideal(&rep, &ideal), "{mu}");
                assert!(is_differential_stable(&rep, &ideal), "{mu}");
            }
        }
    }

    #[test]
    fn star_is_an_antiinvolution() {
        let rep = NHRep::build(2, 3, 5).unwrap();
        let (a, b) = (rep.mul(&rep.y(0), &rep.psi(0)), rep.mul(&rep.psi(0), &rep.y(1)));
        assert_eq!(rep.star(&rep.mul(&a, &b)), rep.mul(&rep.star(&b), &rep.star(&a)));
        assert_eq!(rep.star(&rep.star(&a)), a);
    }

    #[test]
    fn trace_is_symmetric_and_nondegenerate() {
        for (n, l) in [(1, 2), (2, 3), (2, 4), (3, 4)] {
            let rep = NHRep::build(n, l, 3).unwrap();
            let tr = trace_functional(&rep).unwrap();
            let f = rep.field();
            assert_eq!(tr.degree, -2 * (n * (l - n)) as i64);
            assert_eq!(tr.gram_rank, rep.dim());
            for i in 0..rep.dim().min(12) {
                for j in 0..rep.dim().min(12) {
                    let (x, y) = (rep.unit(i), rep.unit(j));
                    assert_eq!(tr.eval(&rep.mul(&x, &y), f), tr.eval(&rep.mul(&y, &x), f));
                }
            }
        }
    }

    #[test]
    fn too_many_strands_is_an_error() {
        assert!(NHRep::build(4, 3, 3).is_err());
    }

    proptest::proptest! {
        #![proptest_config(proptest::test_runner::Config::with_cases(64))]

        #[test]
        fn leibniz_on_random_elements(seed_a in proptest::collection::vec(0u32..3, 12), seed_b in proptest::collection::vec(0u32..3, 12)) {
            let rep = NHRep::build(2, 3, 3).unwrap();
            let (a, b) = (seed_a, seed_b);
            let lhs = rep.differential(&rep.mul(&a, &b));
            let rhs = rep.add(&rep.mul(&rep.differential(&a), &b), &rep.mul(&a, &rep.differential(&b)));
            proptest::prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn star_reverses_products(seed_a in proptest::collection::vec(0u32..5, 12), seed_b in proptest::collection::vec(0u32..5, 12)) {
            let rep = NHRep::build(2, 3, 5).unwrap();
            let lhs = rep.star(&rep.mul(&seed_a, &seed_b));
            let rhs = rep.mul(&rep.star(&seed_b), &rep.star(&seed_a));
            proptest::prop_assert_eq!(lhs, rhs);
        }
    }
}

