//! Multipartitions with one-box components, dominance, tableaux, permutations,
//! Schur polynomials and complementary box partitions.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// A 0/1 vector of length `l`; the ones mark the boxes `j_1 < ... < j_n` (1-based).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Multipartition {
    entries: Vec<u8>,
}

impl Multipartition {
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        if entries.iter().any(|&e| e > 1) {
            return Err(Error::Param(format!("entries must be 0 or 1: {entries:?}")));
        }
        Ok(Multipartition { entries })
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn l(&self) -> usize {
        self.entries.len()
    }

    pub fn n(&self) -> usize {
        self.entries.iter().filter(|&&e| e == 1).count()
    }

    /// Box positions `j_1 < ... < j_n`, 1-based.
    pub fn boxes(&self) -> Vec<usize> {
        self.entries.iter().enumerate().filter(|(_, &e)| e == 1).map(|(i, _)| i + 1).collect()
    }

    pub fn box_sum(&self) -> i64 {
        self.boxes().iter().sum::<usize>() as i64
    }

    pub fn prefix_sums(&self) -> Vec<usize> {
        self.entries
            .iter()
            .scan(0usize, |acc, &e| {
                *acc += e as usize;
                Some(*acc)
            })
            .collect()
    }

    /// All ones on the left: the dominance maximum.
    pub fn maximal(n: usize, l: usize) -> Self {
        let mut e = vec![0; l];
        e[..n].iter_mut().for_each(|x| *x = 1);
        Multipartition { entries: e }
    }

    /// All ones on the right: the dominance minimum.
    pub fn minimal(n: usize, l: usize) -> Self {
        let mut e = vec![0; l];
        e[l - n..].iter_mut().for_each(|x| *x = 1);
        Multipartition { entries: e }
    }

    /// The exponent vector of `y^mu = prod_k y_k^{l - j_k}`.
    pub fn y_exponents(&self) -> Vec<u32> {
        let l = self.l();
        self.boxes().iter().map(|j| (l - j) as u32).collect()
    }

    /// The grading shift `-n l + sum j_k` carried by `G(lambda)`.
    pub fn g_shift(&self) -> i64 {
        -((self.n() * self.l()) as i64) + self.box_sum()
    }
}

impl fmt::Display for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Multipartition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let entries: std::result::Result<Vec<u8>, _> =
            s.split(',').map(|t| t.trim().parse::<u8>()).collect();
        let entries = entries.map_err(|_| Error::Param(format!("bad multipartition '{s}'")))?;
        Multipartition::new(entries)
    }
}

/// All `C(l, n)` multipartitions, largest first in a total order refining dominance
/// (lexicographic with `1` before `0`).
pub fn enumerate_multipartitions(n: usize, l: usize) -> Result<Vec<Multipartition>> {
    if n > l {
        return Err(Error::Param(format!("n = {n} exceeds l = {l}")));
    }
    let mut out: Vec<Multipartition> = crate::poly::subsets(&(0..l).collect::<Vec<_>>(), n)
        .into_iter()
        .map(|s| {
            let mut e = vec![0u8; l];
            for i in s {
                e[i] = 1;
            }
            Multipartition { entries: e }
        })
        .collect();
    out.sort_by(|a, b| b.entries.cmp(&a.entries));
    Ok(out)
}

/// `lambda <= mu` in dominance: every prefix sum of `mu` is at least that of `lambda`.
pub fn dominance_leq(lambda: &Multipartition, mu: &Multipartition) -> Result<bool> {
    if lambda.l() != mu.l() || lambda.n() != mu.n() {
        return Err(Error::Param(format!("shape mismatch: {lambda} vs {mu}")));
    }
    Ok(lambda.prefix_sums().iter().zip(mu.prefix_sums()).all(|(a, b)| *a <= b))
}

pub fn dominance_lt(lambda: &Multipartition, mu: &Multipartition) -> Result<bool> {
    Ok(lambda != mu && dominance_leq(lambda, mu)?)
}

/// `lambda = (0^a 1^b 0^c 1^d)` with `a + b = r`, `c + d = s`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwoBlockShape {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl TwoBlockShape {
    pub fn new(a: usize, b: usize, c: usize, d: usize) -> Self {
        TwoBlockShape { a, b, c, d }
    }

    pub fn r(&self) -> usize {
        self.a + self.b
    }

    pub fn s(&self) -> usize {
        self.c + self.d
    }

    pub fn l(&self) -> usize {
        self.r() + self.s()
    }

    pub fn n(&self) -> usize {
        self.b + self.d
    }

    pub fn multipartition(&self) -> Multipartition {
        let mut e = Vec::with_capacity(self.l());
        e.extend(std::iter::repeat_n(0, self.a));
        e.extend(std::iter::repeat_n(1, self.b));
        e.extend(std::iter::repeat_n(0, self.c));
        e.extend(std::iter::repeat_n(1, self.d));
        Multipartition { entries: e }
    }

    /// Recover the shape of a multipartition relative to the split `l = r + s`.
    pub fn from_multipartition(mu: &Multipartition, r: usize) -> Option<Self> {
        let (left, right) = mu.entries.split_at(r.min(mu.l()));
        let split = |part: &[u8]| -> Option<(usize, usize)> {
            let zeros = part.iter().take_while(|&&e| e == 0).count();
            if part[zeros..].iter().all(|&e| e == 1) {
                Some((zeros, part.len() - zeros))
            } else {
                None
            }
        };
        let (a, b) = split(left)?;
        let (c, d) = split(right)?;
        Some(TwoBlockShape { a, b, c, d })
    }
}

impl fmt::Display for TwoBlockShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for TwoBlockShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0^{}1^{}0^{}1^{}", self.a, self.b, self.c, self.d)
    }
}

/// The set `P_n^{r,s}`, listed in the dominance-refining total order.
pub fn two_block_shapes(n: usize, r: usize, s: usize) -> Vec<TwoBlockShape> {
    let mut out: Vec<TwoBlockShape> = (0..=r.min(n))
        .filter(|&b| n - b <= s)
        .map(|b| {
            let d = n - b;
            TwoBlockShape { a: r - b, b, c: s - d, d }
        })
        .collect();
    out.sort_by(|x, y| y.multipartition().entries.cmp(&x.multipartition().entries));
    out
}

/// Permutation of `{0..n-1}` in one-line notation; composition `(u*v)(x) = u(v(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::Param(format!("not a permutation: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Simple transposition `s_i` swapping `i` and `i+1` (0-based).
    pub fn simple(n: usize, i: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(i, i + 1);
        p
    }

    pub fn from_word(n: usize, word: &[usize]) -> Self {
        word.iter().fold(Self::identity(n), |acc, &i| acc.compose(&Self::simple(n, i)))
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { images: inv }
    }

    /// Coxeter length: the number of inversions.
    pub fn length(&self) -> usize {
        let n = self.images.len();
        (0..n).map(|i| (i + 1..n).filter(|&j| self.images[i] > self.images[j]).count()).sum()
    }

    /// Lexicographically least reduced word `i_1 ... i_r` with `w = s_{i_1} ... s_{i_r}`.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.clone();
        let mut word = Vec::with_capacity(self.length());
        while w.length() > 0 {
            let inv = w.inverse();
            // s_i is a left descent iff w^{-1}(i) > w^{-1}(i+1).
            let i = (0..w.size() - 1).find(|&i| inv.images[i] > inv.images[i + 1]).unwrap();
            word.push(i);
            w = Self::simple(w.size(), i).compose(&w);
        }
        word
    }

    pub fn longest(n: usize) -> Self {
        Permutation { images: (0..n).rev().collect() }
    }

    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        permute(&mut cur, 0, &mut out);
        out.sort();
        out
    }
}

fn permute(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Permutation>) {
    if k == cur.len() {
        out.push(Permutation { images: cur.clone() });
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permute(cur, k + 1, out);
        cur.swap(k, i);
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one: Vec<String> = self.images.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", one.join(" "))
    }
}

/// A bijection from the boxes of `shape` to `{1..n}`: the `k`-th box gets label `w(k)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tableau {
    pub shape: Multipartition,
    pub perm: Permutation,
}

impl Tableau {
    pub fn standard(shape: &Multipartition) -> Self {
        Tableau { shape: shape.clone(), perm: Permutation::identity(shape.n()) }
    }

    /// Label placed in the box at 1-based position `j`.
    pub fn label_at(&self, j: usize) -> Option<usize> {
        self.shape.boxes().iter().position(|&b| b == j).map(|k| self.perm.apply(k) + 1)
    }

    pub fn degree(&self) -> i64 {
        let n = self.shape.n() as i64;
        let l = self.shape.l() as i64;
        n * l - self.shape.box_sum() - 2 * self.perm.length() as i64
    }

    /// The multipartition of boxes whose labels are at most `k`.
    pub fn restrict(&self, k: usize) -> Multipartition {
        let mut e = vec![0u8; self.shape.l()];
        for (idx, &j) in self.shape.boxes().iter().enumerate() {
            if self.perm.apply(idx) < k {
                e[j - 1] = 1;
            }
        }
        Multipartition { entries: e }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .shape
            .boxes()
            .iter()
            .enumerate()
            .map(|(k, j)| (j.to_string(), serde_json::Value::from(self.perm.apply(k) + 1)))
            .collect();
        serde_json::Value::Object(map)
    }
}

impl fmt::Debug for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T[{} | {:?}]", self.shape, self.perm)
    }
}

/// All `n!` tableaux of a shape, the standard one first.
pub fn tableaux(mu: &Multipartition) -> Vec<Tableau> {
    Permutation::all(mu.n()).into_iter().map(|perm| Tableau { shape: mu.clone(), perm }).collect()
}

/// `h >= t`: every restriction `h|k` dominates `t|k`.
pub fn tab_geq(h: &Tableau, t: &Tableau) -> bool {
    let n = h.shape.n();
    assert_eq!(n, t.shape.n(), "tableaux of different sizes");
    (1..=n).all(|k| dominance_leq(&t.restrict(k), &h.restrict(k)).unwrap_or(false))
}

/// `Tab^lambda(mu) = { t in Tab(mu) : t >= t^lambda }`.
pub fn tab_lambda(lambda: &Multipartition, mu: &Multipartition) -> Vec<Tableau> {
    let base = Tableau::standard(lambda);
    tableaux(mu).into_iter().filter(|t| tab_geq(t, &base)).collect()
}

/// Weakly decreasing partition fitting inside an `rows x cols` box.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BoxPartition {
    pub parts: Vec<usize>,
    pub rows: usize,
    pub cols: usize,
}

impl BoxPartition {
    pub fn new(mut parts: Vec<usize>, rows: usize, cols: usize) -> Result<Self> {
        if parts.len() > rows {
            return Err(Error::Param(format!("{parts:?} has more than {rows} rows")));
        }
        parts.resize(rows, 0);
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.first().is_some_and(|&p| p > cols) {
            return Err(Error::Param(format!("{parts:?} does not fit a {rows}x{cols} box")));
        }
        Ok(BoxPartition { parts, rows, cols })
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// All partitions in the box, in lexicographically decreasing order.
    pub fn all(rows: usize, cols: usize) -> Vec<BoxPartition> {
        fn rec(rows: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == rows {
                out.push(cur.clone());
                return;
            }
            for v in (0..=cap).rev() {
                cur.push(v);
                rec(rows, v, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(rows, cols, &mut Vec::new(), &mut out);
        out.into_iter().map(|parts| BoxPartition { parts, rows, cols }).collect()
    }
}

/// The complementary partition in the transposed `cols x rows` box:
/// `hat_j = #{ i : cols - mu_{rows+1-i} >= j }`.
pub fn complement_partition(mu: &BoxPartition) -> BoxPartition {
    let comp: Vec<usize> = mu.parts.iter().rev().map(|&m| mu.cols - m).collect();
    let parts = (1..=mu.cols).map(|j| comp.iter().filter(|&&c| c >= j).count()).collect();
    BoxPartition { parts, rows: mu.cols, cols: mu.rows }
}

/// Schur polynomial `s_mu` in the listed variables via the bialternant
/// `det(y_i^{mu_j + k - j}) / prod_{i<j}(y_i - y_j)` with exact division.
pub fn schur_poly(mu: &BoxPartition, nvars: usize, vars: &[usize]) -> Result<Poly> {
    let k = vars.len();
    if mu.parts.iter().filter(|&&p| p > 0).count() > k {
        return Ok(Poly::zero(nvars));
    }
    let mut parts = mu.parts.clone();
    parts.resize(k, 0);
    let exps: Vec<u32> = (0..k).map(|j| (parts[j] + k - 1 - j) as u32).collect();
    let mut det = Poly::zero(nvars);
    for sigma in Permutation::all(k) {
        let sign = if sigma.length() % 2 == 0 { 1 } else { -1 };
        let mut e = vec![0u32; nvars];
        for (row, &v) in vars.iter().enumerate() {
            e[v] += exps[sigma.apply(row)];
        }
        det.add_term(e, sign);
    }
    for i in 0..k {
        for j in i + 1..k {
            det = det.div_by_difference(vars[i], vars[j])?;
        }
    }
    Ok(det)
}

/// Binomial coefficient over `u64`, zero outside range.
pub fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Deterministic total order: lexicographic with `1` before `0`.
pub fn total_order_cmp(x: &Multipartition, y: &Multipartition) -> Ordering {
    y.entries.cmp(&x.entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(s: &str) -> Multipartition {
        s.parse().unwrap()
    }

    #[test]
    fn enumerate_two_three() {
        let list = enumerate_multipartitions(2, 3).unwrap();
        assert_eq!(list, vec![mp("1,1,0"), mp("1,0,1"), mp("0,1,1")]);
        assert_eq!(enumerate_multipartitions(0, 4).unwrap(), vec![mp("0,0,0,0")]);
        assert_eq!(enumerate_multipartitions(3, 3).unwrap(), vec![mp("1,1,1")]);
        assert!(enumerate_multipartitions(4, 3).is_err());
    }

    #[test]
    fn dominance_examples() {
        let x = mp("0,1,1,0");
        let y = mp("1,0,0,1");
        let z = mp("0,1,0,1");
        assert!(!dominance_leq(&x, &y).unwrap() && !dominance_leq(&y, &x).unwrap());
        assert!(dominance_leq(&z, &x).unwrap() && dominance_leq(&z, &y).unwrap());
        assert!(dominance_leq(&x, &x).unwrap());
        assert!(dominance_leq(&x, &mp("1,1,0")).is_err());
    }

    #[test]
    fn degrees_of_two_tableaux() {
        let mu = mp("1,1,0");
        let tabs = tableaux(&mu);
        assert_eq!(tabs.len(), 2);
        assert_eq!(tabs[0].degree(), 3);
        assert_eq!(tabs[1].degree(), 1);
    }

    #[test]
    fn reduced_words_are_reduced_and_least() {
        for n in 1..=4 {
            for w in Permutation::all(n) {
                let word = w.reduced_word();
                assert_eq!(word.len(), w.length());
                assert_eq!(Permutation::from_word(n, &word), w);
            }
        }
        assert_eq!(Permutation::longest(3).reduced_word(), vec![0, 1, 0]);
    }

    #[test]
    fn tab_lambda_maximal_is_everything() {
        // The standard tableau is maximal, so only it survives; the pairs (t, h)
        // with h in Tab(lambda) still number n!.
        let lam = Multipartition::maximal(2, 4);
        let only = tab_lambda(&lam, &lam);
        assert_eq!(only, vec![Tableau::standard(&lam)]);
        assert_eq!(only.len() * tableaux(&lam).len(), 2);
        let zeta = mp("0,1,1");
        let total: usize = enumerate_multipartitions(2, 3)
            .unwrap()
            .iter()
            .map(|mu| tab_lambda(&zeta, mu).len())
            .sum();
        assert_eq!(total, 4);
        // Nothing of shape (0,1,1) dominates the maximal standard tableau.
        assert!(tab_lambda(&mp("1,1,0"), &zeta).is_empty());
    }

    #[test]
    fn complements() {
        let full = BoxPartition::new(vec![3, 3], 2, 3).unwrap();
        assert_eq!(complement_partition(&full).parts, vec![0, 0, 0]);
        let empty = BoxPartition::new(vec![], 2, 3).unwrap();
        assert_eq!(complement_partition(&empty).parts, vec![2, 2, 2]);
        let z = BoxPartition::new(vec![0], 1, 1).unwrap();
        assert_eq!(complement_partition(&z).parts, vec![1]);
    }

    #[test]
    fn schur_special_cases() {
        let vars = [0, 1, 2];
        let col = BoxPartition::new(vec![1, 1], 3, 2).unwrap();
        assert_eq!(schur_poly(&col, 3, &vars).unwrap(), Poly::elementary(3, &vars, 2));
        let empty = BoxPartition::new(vec![], 3, 2).unwrap();
        assert_eq!(schur_poly(&empty, 3, &vars).unwrap(), Poly::one(3));
        let rect = BoxPartition::new(vec![2, 2, 2], 3, 2).unwrap();
        assert_eq!(schur_poly(&rect, 3, &vars).unwrap(), Poly::monomial(vec![2, 2, 2], 1));
    }

    #[test]
    fn two_block_round_trip() {
        for shape in two_block_shapes(2, 2, 2) {
            let mu = shape.multipartition();
            assert_eq!(TwoBlockShape::from_multipartition(&mu, 2), Some(shape));
        }
        assert_eq!(TwoBlockShape::from_multipartition(&mp("1,0,1"), 2), None);
    }

    proptest::proptest! {
        #[test]
        fn permutation_group_laws(n in 1usize..6, i in 0usize..720, j in 0usize..720) {
            let all = Permutation::all(n);
            let (u, v) = (&all[i % all.len()], &all[j % all.len()]);
            proptest::prop_assert_eq!(u.compose(&u.inverse()), Permutation::identity(n));
            proptest::prop_assert_eq!(Permutation::from_word(n, &u.reduced_word()), u.clone());
            proptest::prop_assert_eq!(u.reduced_word().len(), u.length());
            proptest::prop_assert!(u.compose(v).length() <= u.length() + v.length());
        }

        #[test]
        fn dominance_is_a_partial_order(l in 1usize..6, n in 0usize..6, i in 0usize..64, j in 0usize..64) {
            if n <= l {
                let all = enumerate_multipartitions(n, l).unwrap();
                let (a, b) = (&all[i % all.len()], &all[j % all.len()]);
                proptest::prop_assert!(dominance_leq(a, a).unwrap());
                if dominance_leq(a, b).unwrap() && dominance_leq(b, a).unwrap() {
                    proptest::prop_assert_eq!(a, b);
                }
            }
        }

        #[test]
        fn two_block_shapes_have_weight_n(r in 0usize..5, s in 0usize..5, n in 0usize..9) {
            if n <= r + s {
                for sh in two_block_shapes(n, r, s) {
                    proptest::prop_assert_eq!(sh.n(), n);
                    proptest::prop_assert_eq!((sh.r(), sh.s()), (r, s));
                    proptest::prop_assert_eq!(TwoBlockShape::from_multipartition(&sh.multipartition(), r), Some(sh));
                }
            }
        }
    }
}
