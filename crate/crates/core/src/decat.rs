//! The decategorified side: Weyl modules `V_l`, the tensor product `V_r (x) V_s` with
//! its canonical basis, and the comparison with the `E`/`F` action on the `Y(lambda)`.
//!
//! Matrices act on column vectors: entry `[i][j]` is the coefficient of basis vector `i`
//! in the image of basis vector `j`.

use serde::Serialize;

use crate::cache::RepStore;
use crate::catsl2::{ef_char_decomposition, monomial_ratio, y_modules, Generator, HomTable};
use crate::coeff::{op_reduce, quantum_binom, LaurentPoly};
use crate::combinatorics::{two_block_shapes, TwoBlockShape};
use crate::error::{Error, Result};

pub type LMatrix = Vec<Vec<LaurentPoly>>;

pub fn zero_matrix(rows: usize, cols: usize) -> LMatrix {
    vec![vec![LaurentPoly::zero(); cols]; rows]
}

pub fn identity_matrix(n: usize) -> LMatrix {
    let mut m = zero_matrix(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = LaurentPoly::one();
    }
    m
}

pub fn mat_mul(a: &LMatrix, b: &LMatrix) -> LMatrix {
    let (n, k) = (a.len(), b.len());
    let m = b.first().map_or(0, |r| r.len());
    let mut out = zero_matrix(n, m);
    for i in 0..n {
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[t][j].is_zero() {
                    out[i][j] += &(&a[i][t] * &b[t][j]);
                }
            }
        }
    }
    out
}

pub fn mat_add(a: &LMatrix, b: &LMatrix) -> LMatrix {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u + v).collect()).collect()
}

pub fn mat_sub(a: &LMatrix, b: &LMatrix) -> LMatrix {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u - v).collect()).collect()
}

fn mat_scale(a: &LMatrix, c: &LaurentPoly) -> LMatrix {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

pub fn mat_vec(a: &LMatrix, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(LaurentPoly::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

/// Kronecker product; basis `i (x) j` has index `i * dim(b) + j`.
pub fn kron(a: &LMatrix, b: &LMatrix) -> LMatrix {
    let (ra, rb) = (a.len(), b.len());
    let (ca, cb) = (a.first().map_or(0, |r| r.len()), b.first().map_or(0, |r| r.len()));
    let mut out = zero_matrix(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            if a[i][j].is_zero() {
                continue;
            }
            for k in 0..rb {
                for m in 0..cb {
                    if !b[k][m].is_zero() {
                        out[i * rb + k][j * cb + m] = &a[i][j] * &b[k][m];
                    }
                }
            }
        }
    }
    out
}

/// `V_l` with `F v_i = [i+1] v_{i+1}`, `E v_i = [l-i+1] v_{i-1}`, `K v_i = q^{l-2i} v_i`.
#[derive(Clone, Debug)]
pub struct WeylModule {
    pub l: usize,
    pub e: LMatrix,
    pub f: LMatrix,
    /// Weight `l - 2i` of `v_i`.
    pub weights: Vec<i64>,
}

pub fn weyl_module(l: usize) -> WeylModule {
    WeylModule {
        l,
        e: weyl_e_divided(l, 1),
        f: weyl_f_divided(l, 1),
        weights: (0..=l).map(|i| l as i64 - 2 * i as i64).collect(),
    }
}

/// `E^(t) v_i = [l-i+t choose t] v_{i-t}`.
pub fn weyl_e_divided(l: usize, t: usize) -> LMatrix {
    let mut m = zero_matrix(l + 1, l + 1);
    for i in t..=l {
        m[i - t][i] = quantum_binom((l - i + t) as i64, t as i64).expect("in range");
    }
    m
}

/// `F^(t) v_i = [i+t choose t] v_{i+t}`.
pub fn weyl_f_divided(l: usize, t: usize) -> LMatrix {
    let mut m = zero_matrix(l + 1, l + 1);
    for i in 0..=l {
        if i + t <= l {
            m[i + t][i] = quantum_binom((i + t) as i64, t as i64).expect("in range");
        }
    }
    m
}

/// `K^j` on `V_l`.
pub fn weyl_k_power(l: usize, j: i64) -> LMatrix {
    let mut m = zero_matrix(l + 1, l + 1);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = LaurentPoly::monomial(1, j * (l as i64 - 2 * i as i64));
    }
    m
}

/// `V_r (x) V_s` with the standard basis `v_i (x) v_j` at index `i (s+1) + j`.
#[derive(Clone, Debug)]
pub struct TensorModel {
    pub r: usize,
    pub s: usize,
    /// `Delta(E) = K^{-1} (x) E + E (x) 1`.
    pub e: LMatrix,
    /// `Delta(F) = 1 (x) F + F (x) K`.
    pub f: LMatrix,
    pub weights: Vec<i64>,
}

pub fn tensor_index(s: usize, i: usize, j: usize) -> usize {
    i * (s + 1) + j
}

pub fn tensor_model(r: usize, s: usize) -> TensorModel {
    let (vr, vs) = (weyl_module(r), weyl_module(s));
    let e = mat_add(&kron(&weyl_k_power(r, -1), &vs.e), &kron(&vr.e, &identity_matrix(s + 1)));
    let f = mat_add(&kron(&identity_matrix(r + 1), &vs.f), &kron(&vr.f, &weyl_k_power(s, 1)));
    let mut weights = Vec::new();
    for wi in &vr.weights {
        for wj in &vs.weights {
            weights.push(wi + wj);
        }
    }
    TensorModel { r, s, e, f, weights }
}

/// `Delta(E^(t)) = sum_j q^{-j(t-j)} E^(t-j) K^{-j} (x) E^(j)`.
pub fn tensor_e_divided(r: usize, s: usize, t: usize) -> LMatrix {
    let mut acc = zero_matrix((r + 1) * (s + 1), (r + 1) * (s + 1));
    for j in 0..=t {
        let left = mat_mul(&weyl_e_divided(r, t - j), &weyl_k_power(r, -(j as i64)));
        let term = kron(&left, &weyl_e_divided(s, j));
        acc = mat_add(&acc, &mat_scale(&term, &LaurentPoly::monomial(1, -((j * (t - j)) as i64))));
    }
    acc
}

/// `Delta(F^(t)) = sum_j q^{-j(t-j)} F^(t-j) (x) F^(j) K^{t-j}`.
pub fn tensor_f_divided(r: usize, s: usize, t: usize) -> LMatrix {
    let mut acc = zero_matrix((r + 1) * (s + 1), (r + 1) * (s + 1));
    for j in 0..=t {
        let right = mat_mul(&weyl_f_divided(s, j), &weyl_k_power(s, (t - j) as i64));
        let term = kron(&weyl_f_divided(r, t - j), &right);
        acc = mat_add(&acc, &mat_scale(&term, &LaurentPoly::monomial(1, -((j * (t - j)) as i64))));
    }
    acc
}

fn check_bd(r: usize, s: usize, b: usize, d: usize) -> Result<()> {
    if b > r || d > s {
        return Err(Error::Param(format!("(b, d) = ({b}, {d}) outside 0..={r} x 0..={s}")));
    }
    Ok(())
}

/// `v_b <> v_d` from the closed formulas (`a = r - b`, `c = s - d`).
pub fn canonical_closed(r: usize, s: usize, b: usize, d: usize) -> Result<Vec<LaurentPoly>> {
    check_bd(r, s, b, d)?;
    let (a, c) = (r - b, s - d);
    let mut v = vec![LaurentPoly::zero(); (r + 1) * (s + 1)];
    if b <= c {
        for j in 0..=d.min(r - b) {
            let coeff = quantum_binom((b + j) as i64, j as i64)?.shift((j * (j + c)) as i64);
            v[tensor_index(s, b + j, d - j)] = coeff;
        }
    } else {
        for j in 0..=a.min(d) {
            let coeff = quantum_binom((c + j) as i64, j as i64)?.shift((j * (j + b)) as i64);
            v[tensor_index(s, b + j, d - j)] = coeff;
        }
    }
    Ok(v)
}

/// `v_b <> v_d` as `F^(d) E^(a) (v_r (x) v_0)` when `b <= c`, else `E^(a) F^(d) (v_r (x) v_0)`.
pub fn canonical_via_divided_powers(r: usize, s: usize, b: usize, d: usize) -> Result<Vec<LaurentPoly>> {
    check_bd(r, s, b, d)?;
    let (a, c) = (r - b, s - d);
    let mut v = vec![LaurentPoly::zero(); (r + 1) * (s + 1)];
    v[tensor_index(s, r, 0)] = LaurentPoly::one();
    let (e, f) = (tensor_e_divided(r, s, a), tensor_f_divided(r, s, d));
    Ok(if b <= c { mat_vec(&f, &mat_vec(&e, &v)) } else { mat_vec(&e, &mat_vec(&f, &v)) })
}

/// Both operator orders, for the boundary `b = c` where the two branches overlap.
pub fn canonical_both_orders(r: usize, s: usize, b: usize, d: usize) -> Result<(Vec<LaurentPoly>, Vec<LaurentPoly>)> {
    check_bd(r, s, b, d)?;
    let a = r - b;
    let mut v = vec![LaurentPoly::zero(); (r + 1) * (s + 1)];
    v[tensor_index(s, r, 0)] = LaurentPoly::one();
    let (e, f) = (tensor_e_divided(r, s, a), tensor_f_divided(r, s, d));
    Ok((mat_vec(&f, &mat_vec(&e, &v)), mat_vec(&e, &mat_vec(&f, &v))))
}

/// The canonical basis of `V_r (x) V_s` and the `E`, `F` matrices in it.
#[derive(Clone, Debug)]
pub struct CanonicalBasis {
    pub r: usize,
    pub s: usize,
    /// `(b, d)` for each column, ordered by `(b, d)` lexicographically.
    pub labels: Vec<(usize, usize)>,
    /// Columns are `v_b <> v_d` in the standard basis.
    pub transition: LMatrix,
    pub e: LMatrix,
    pub f: LMatrix,
}

impl CanonicalBasis {
    pub fn index(&self, b: usize, d: usize) -> usize {
        tensor_index(self.s, b, d)
    }

    /// Coordinates of a standard-basis vector in the canonical basis. The column of
    /// `(b, d)` is `v_b (x) v_d` plus terms with larger first index, so elimination by
    /// increasing `b` is exact over `Z[q, q^-1]`.
    pub fn coordinates(&self, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
        let mut rest = v.to_vec();
        let mut x = vec![LaurentPoly::zero(); v.len()];
        for b in 0..=self.r {
            for d in 0..=self.s {
                let k = self.index(b, d);
                let c = rest[k].clone();
                if c.is_zero() {
                    continue;
                }
                for (i, row) in self.transition.iter().enumerate() {
                    if !row[k].is_zero() {
                        rest[i] = &rest[i] - &(&c * &row[k]);
                    }
                }
                x[k] = c;
            }
        }
        debug_assert!(rest.iter().all(|t| t.is_zero()));
        x
    }

    fn in_canonical(&self, m: &LMatrix) -> LMatrix {
        let n = self.labels.len();
        let mut out = zero_matrix(n, n);
        for k in 0..n {
            let col: Vec<LaurentPoly> = self.transition.iter().map(|row| row[k].clone()).collect();
            let image = self.coordinates(&mat_vec(m, &col));
            for (i, c) in image.into_iter().enumerate() {
                out[i][k] = c;
            }
        }
        out
    }

    /// Whether every transition entry lies in `N[q]` and the matrix is unitriangular.
    pub fn is_positive_unitriangular(&self) -> bool {
        let n = self.labels.len();
        (0..n).all(|i| {
            (0..n).all(|k| {
                let c = &self.transition[i][k];
                let (bi, _) = self.labels[i];
                let (bk, _) = self.labels[k];
                let shape_ok = if i == k { *c == LaurentPoly::one() } else { c.is_zero() || bi > bk };
                shape_ok && c.has_nonneg_coeffs() && c.min_exp().is_none_or(|e| e >= 0)
            })
        })
    }
}

pub fn canonical_basis(r: usize, s: usize) -> Result<CanonicalBasis> {
    let model = tensor_model(r, s);
    let n = (r + 1) * (s + 1);
    let mut labels = Vec::with_capacity(n);
    let mut transition = zero_matrix(n, n);
    for b in 0..=r {
        for d in 0..=s {
            labels.push((b, d));
            let col = canonical_closed(r, s, b, d)?;
            let k = tensor_index(s, b, d);
            for (i, c) in col.into_iter().enumerate() {
                transition[i][k] = c;
            }
        }
    }
    let mut cb = CanonicalBasis { r, s, labels, transition, e: vec![], f: vec![] };
    cb.e = cb.in_canonical(&model.e);
    cb.f = cb.in_canonical(&model.f);
    Ok(cb)
}

/// `(b, d)` labelling the canonical basis vector matched with `Y(0^a 1^b 0^c 1^d)`.
pub fn canonical_label(shape: &TwoBlockShape) -> (usize, usize) {
    (shape.b, shape.d)
}

/// Comparison on one weight space (`n` ones), for `E` and `F` out of it.
#[derive(Clone, Debug, Serialize)]
pub struct WeightVerdict {
    pub n: usize,
    /// `[Y(lambda)] <-> q^{t_n} v_b <> v_d` on this weight.
    pub normalization: i64,
    pub f_match: bool,
    pub e_match: bool,
    pub op_match: bool,
    pub mismatch: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub r: usize,
    pub s: usize,
    pub p: u32,
    pub weights: Vec<WeightVerdict>,
}

impl CompareReport {
    pub fn holds(&self) -> bool {
        self.weights.iter().all(|w| w.f_match && w.e_match && w.op_match)
    }
}

/// `m[mu][lambda]`: multiplicity of `Y(mu)` in `G Y(lambda)`, for `lambda` of weight `n`.
fn categorical_block(
    store: &RepStore,
    r: usize,
    s: usize,
    n: usize,
    op: Generator,
    p: u32,
    tables: &[HomTable],
) -> Result<Vec<Vec<LaurentPoly>>> {
    let target = match op {
        Generator::E => n.checked_sub(1),
        Generator::F => (n < r + s).then_some(n + 1),
    };
    let Some(target) = target else { return Ok(vec![]) };
    let cols = &tables[n].ys;
    let rows = &tables[target].ys;
    let mut block = vec![vec![LaurentPoly::zero(); cols.len()]; rows.len()];
    for (j, y) in cols.iter().enumerate() {
        let dec = ef_char_decomposition(store, r, s, &y.shape, op, p, Some(&tables[target]))?;
        for (i, mu) in rows.iter().enumerate() {
            if let Some(m) = dec.get(&mu.shape) {
                block[i][j] = m.clone();
            }
        }
    }
    Ok(block)
}

fn algebraic_block(cb: &CanonicalBasis, op: Generator, from: &[TwoBlockShape], to: &[TwoBlockShape]) -> LMatrix {
    let m = match op {
        Generator::E => &cb.e,
        Generator::F => &cb.f,
    };
    to.iter()
        .map(|mu| {
            let (bi, di) = canonical_label(mu);
            from.iter()
                .map(|la| {
                    let (bj, dj) = canonical_label(la);
                    m[cb.index(bi, di)][cb.index(bj, dj)].clone()
                })
                .collect()
        })
        .collect()
}

/// Compares the categorical `E`/`F` multiplicities on `{Y(lambda)}` with the action on
/// the canonical basis. One power `q^{t_n}` per weight is fitted on the minimal shape's
/// `F` column; every other entry, including all of `E`, must then agree exactly over
/// `Z[q, q^-1]` and after reduction to `O_p`.
pub fn decat_compare(store: &RepStore, r: usize, s: usize, p: u32) -> Result<CompareReport> {
    let top = r + s;
    let cb = canonical_basis(r, s)?;
    let shapes: Vec<Vec<TwoBlockShape>> = (0..=top).map(|n| two_block_shapes(n, r, s)).collect();
    let tables: Vec<HomTable> =
        (0..=top).map(|n| HomTable::new(y_modules(store, n, r, s, p)?)).collect::<Result<_>>()?;
    let mut f_blocks = Vec::new();
    let mut e_blocks = Vec::new();
    for n in 0..=top {
        f_blocks.push(categorical_block(store, r, s, n, Generator::F, p, &tables)?);
        e_blocks.push(categorical_block(store, r, s, n, Generator::E, p, &tables)?);
    }
    // Fit t_{n+1} - t_n on the minimal shape (last in the order).
    let mut t = vec![0i64; top + 1];
    for n in 0..top {
        let alg = algebraic_block(&cb, Generator::F, &shapes[n], &shapes[n + 1]);
        let j = shapes[n].len() - 1;
        let fitted = (0..shapes[n + 1].len())
            .find(|&i| !alg[i][j].is_zero() || !f_blocks[n][i][j].is_zero())
            .and_then(|i| monomial_ratio(&f_blocks[n][i][j], &alg[i][j]));
        t[n + 1] = t[n] - fitted.unwrap_or(0);
    }
    let mut weights = Vec::new();
    for n in 0..=top {
        let mut mismatch = None;
        let mut check = |op: Generator, to: usize, block: &Vec<Vec<LaurentPoly>>| -> (bool, bool) {
            let alg = algebraic_block(&cb, op, &shapes[n], &shapes[to]);
            let shift = t[n] - t[to];
            let mut exact = true;
            let mut reduced = true;
            for (i, row) in alg.iter().enumerate() {
                for (j, a) in row.iter().enumerate() {
                    let want = a.shift(shift);
                    if block[i][j] != want {
                        exact = false;
                        mismatch.get_or_insert_with(|| {
                            format!(
                                "{op:?} on {}: Y({}) has {} but expected {want}",
                                shapes[n][j], shapes[to][i], block[i][j]
                            )
                        });
                    }
                    if op_reduce(&block[i][j], p) != op_reduce(&want, p) {
                        reduced = false;
                    }
                }
            }
            (exact, reduced)
        };
        let (f_match, f_op) = if n < top { check(Generator::F, n + 1, &f_blocks[n]) } else { (true, true) };
        let (e_match, e_op) = if n > 0 { check(Generator::E, n - 1, &e_blocks[n]) } else { (true, true) };
        weights.push(WeightVerdict { n, normalization: t[n], f_match, e_match, op_match: f_op && e_op, mismatch });
    }
    Ok(CompareReport { r, s, p, weights })
}

/// `[m]` with sign: `[-m] = -[m]`.
pub fn signed_quantum_int(m: i64) -> LaurentPoly {
    let v = crate::coeff::quantum_int(m);
    if m < 0 {
        -v
    } else {
        v
    }
}

/// `EF - FE` is `[weight]` on every standard basis vector of a model given by `(e, f, weights)`.
pub fn commutator_is_weight(e: &LMatrix, f: &LMatrix, weights: &[i64]) -> bool {
    let c = mat_sub(&mat_mul(e, f), &mat_mul(f, e));
    c.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, x)| {
            if i == j {
                *x == signed_quantum_int(weights[i])
            } else {
                x.is_zero()
            }
        })
    })
}

fn is_laurent_positive(m: &LMatrix) -> bool {
    m.iter().flatten().all(|x| x.has_nonneg_coeffs())
}

impl CanonicalBasis {
    /// `E`, `F` structure constants lie in `N[q, q^-1]`.
    pub fn structure_constants_positive(&self) -> bool {
        is_laurent_positive(&self.e) && is_laurent_positive(&self.f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(e: i64) -> LaurentPoly {
        LaurentPoly::monomial(1, e)
    }

    #[test]
    fn weyl_l1_example() {
        let v = weyl_module(1);
        assert_eq!(v.f[1][0], LaurentPoly::one());
        assert_eq!(v.e[0][1], LaurentPoly::one());
        assert!(v.e[1][0].is_zero() && v.e[0][0].is_zero());
    }

    #[test]
    fn weyl_commutator_up_to_six() {
        for l in 0..=6 {
            let v = weyl_module(l);
            assert!(commutator_is_weight(&v.e, &v.f, &v.weights), "l = {l}");
        }
    }

    #[test]
    fn weyl_divided_powers_are_powers_over_factorials() {
        for l in 0..=5 {
            let v = weyl_module(l);
            let mut ep = identity_matrix(l + 1);
            let mut fp = identity_matrix(l + 1);
            for t in 1..=l {
                ep = mat_mul(&ep, &v.e);
                fp = mat_mul(&fp, &v.f);
                let fact = crate::coeff::quantum_factorial(t as u32);
                assert_eq!(ep, mat_scale(&weyl_e_divided(l, t), &fact));
                assert_eq!(fp, mat_scale(&weyl_f_divided(l, t), &fact));
            }
        }
    }

    #[test]
    fn tensor_commutator_and_reduction() {
        for r in 0..=3 {
            for s in 0..=3 {
                let t = tensor_model(r, s);
                assert!(commutator_is_weight(&t.e, &t.f, &t.weights), "({r},{s})");
                let c = mat_sub(&mat_mul(&t.e, &t.f), &mat_mul(&t.f, &t.e));
                for p in [2, 3, 5] {
                    for (i, w) in t.weights.iter().enumerate() {
                        assert_eq!(op_reduce(&c[i][i], p), op_reduce(&signed_quantum_int(*w), p));
                    }
                }
            }
        }
    }

    #[test]
    fn divided_comultiplication_at_one_is_comultiplication() {
        for r in 0..=3 {
            for s in 0..=3 {
                let t = tensor_model(r, s);
                assert_eq!(tensor_e_divided(r, s, 1), t.e);
                assert_eq!(tensor_f_divided(r, s, 1), t.f);
            }
        }
    }

    #[test]
    fn coassociativity_on_three_factors() {
        // (Delta (x) 1) Delta(E) and (1 (x) Delta) Delta(E) on V_1 (x) V_2 (x) V_1.
        let (a, b, c) = (1usize, 2usize, 1usize);
        let id = |l: usize| identity_matrix(l + 1);
        let kinv = |l: usize| weyl_k_power(l, -1);
        let left_first = {
            let ab = tensor_model(a, b);
            let mut kab = zero_matrix((a + 1) * (b + 1), (a + 1) * (b + 1));
            for (i, w) in ab.weights.iter().enumerate() {
                kab[i][i] = q(-w);
            }
            mat_add(&kron(&kab, &weyl_module(c).e), &kron(&ab.e, &id(c)))
        };
        let right_first = {
            let bc = tensor_model(b, c);
            mat_add(&kron(&kinv(a), &bc.e), &kron(&weyl_module(a).e, &identity_matrix((b + 1) * (c + 1))))
        };
        assert_eq!(left_first, right_first);
    }

    #[test]
    fn canonical_one_one_example() {
        let v = canonical_closed(1, 1, 0, 1).unwrap();
        assert_eq!(v[tensor_index(1, 0, 1)], LaurentPoly::one());
        assert_eq!(v[tensor_index(1, 1, 0)], q(1));
        assert!(v[tensor_index(1, 0, 0)].is_zero() && v[tensor_index(1, 1, 1)].is_zero());
    }

    #[test]
    fn canonical_single_term_when_d_zero() {
        for r in 0..=3 {
            for s in 0..=3 {
                for b in 0..=r.min(s) {
                    let v = canonical_closed(r, s, b, 0).unwrap();
                    for (i, x) in v.iter().enumerate() {
                        let want = if i == tensor_index(s, b, 0) { LaurentPoly::one() } else { LaurentPoly::zero() };
                        assert_eq!(*x, want);
                    }
                }
            }
        }
    }

    #[test]
    fn both_constructions_agree() {
        for r in 0..=4 {
            for s in 0..=4 {
                for b in 0..=r {
                    for d in 0..=s {
                        let closed = canonical_closed(r, s, b, d).unwrap();
                        let dp = canonical_via_divided_powers(r, s, b, d).unwrap();
                        assert_eq!(closed, dp, "({r},{s}) b={b} d={d}");
                        if b == s - d {
                            let (fe, ef) = canonical_both_orders(r, s, b, d).unwrap();
                            assert_eq!(fe, ef);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn top_vector_is_fixed() {
        for (r, s) in [(2, 1), (3, 2), (0, 3)] {
            let v = canonical_via_divided_powers(r, s, r, 0).unwrap();
            assert_eq!(v[tensor_index(s, r, 0)], LaurentPoly::one());
            assert_eq!(v.iter().filter(|x| !x.is_zero()).count(), 1);
        }
    }

    #[test]
    fn transition_positive_and_structure_constants_positive() {
        for r in 0..=4 {
            for s in 0..=4 {
                let cb = canonical_basis(r, s).unwrap();
                assert!(cb.is_positive_unitriangular(), "({r},{s})");
                assert!(cb.structure_constants_positive(), "({r},{s})");
            }
        }
    }

    #[test]
    fn canonical_basis_on_weyl_module_is_standard() {
        for l in 0..=4 {
            let cb = canonical_basis(l, 0).unwrap();
            let v = weyl_module(l);
            assert_eq!(cb.transition, identity_matrix(l + 1));
            assert_eq!(cb.e, v.e);
            assert_eq!(cb.f, v.f);
        }
    }

    #[test]
    fn out_of_range_labels_rejected() {
        assert!(canonical_closed(2, 1, 3, 0).is_err());
        assert!(canonical_via_divided_powers(2, 1, 0, 2).is_err());
    }

    #[test]
    fn compare_two_one() {
        let store = RepStore::in_memory();
        let rep = decat_compare(&store, 2, 1, 3).unwrap();
        assert_eq!(rep.weights.len(), 4);
        assert!(rep.holds(), "{:?}", rep.weights);
    }

    #[test]
    fn compare_weyl_module() {
        let store = RepStore::in_memory();
        for l in 1..=3 {
            let rep = decat_compare(&store, l, 0, 3).unwrap();
            assert!(rep.holds(), "l = {l}: {:?}", rep.weights);
        }
    }

    #[test]
    fn e_vanishes_on_top_weight() {
        let cb = canonical_basis(2, 1).unwrap();
        let top = cb.index(0, 0);
        assert!(cb.e.iter().all(|row| row[top].is_zero()));
    }

    proptest! {
        #[test]
        fn coordinates_invert_transition(r in 0usize..4, s in 0usize..4, seed in any::<u64>()) {
            let cb = canonical_basis(r, s).unwrap();
            let n = (r + 1) * (s + 1);
            let x: Vec<LaurentPoly> = (0..n)
                .map(|i| LaurentPoly::monomial(((seed >> (i % 60)) & 3) as i64 - 1, (i as i64 % 3) - 1))
                .collect();
            let v = mat_vec(&cb.transition, &x);
            prop_assert_eq!(cb.coordinates(&v), x);
        }
    }
}
