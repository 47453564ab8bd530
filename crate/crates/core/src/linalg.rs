//! Dense linear algebra over `F_p`.

use crate::coeff::Field;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u32>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, o: &Matrix, f: Field) -> Matrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let p = f.modulus() as u64;
        let mut out = vec![0u64; self.rows * o.cols];
        for i in 0..self.rows {
            let orow = &mut out[i * o.cols..(i + 1) * o.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let brow = &o.data[k * o.cols..(k + 1) * o.cols];
                for (slot, &b) in orow.iter_mut().zip(brow) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
        }
        Matrix { rows: self.rows, cols: o.cols, data: out.into_iter().map(|x| x as u32).collect() }
    }

    pub fn add(&self, o: &Matrix, f: Field) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, o: &Matrix, f: Field) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: u32, f: Field) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[u32], f: Field) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = f.modulus() as u64;
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u64;
                for (a, b) in self.row(r).iter().zip(v) {
                    acc = (acc + *a as u64 * *b as u64) % p;
                }
                acc as u32
            })
            .collect()
    }

    /// `v^T M` for a row vector `v`.
    pub fn vec_mul(&self, v: &[u32], f: Field) -> Vec<u32> {
        assert_eq!(v.len(), self.rows);
        let p = f.modulus() as u64;
        let mut acc = vec![0u64; self.cols];
        for (r, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (slot, &b) in acc.iter_mut().zip(self.row(r)) {
                *slot = (*slot + a as u64 * b as u64) % p;
            }
        }
        acc.into_iter().map(|x| x as u32).collect()
    }

    pub fn pow(&self, k: u32, f: Field) -> Matrix {
        let mut out = Matrix::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self, f);
        }
        out
    }

    pub fn rank(&self, f: Field) -> usize {
        let rows: Vec<Vec<u32>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        rank_of_rows(&rows, self.cols, f)
    }

    /// Basis of `{ x : M x = 0 }`.
    pub fn kernel(&self, f: Field) -> Vec<Vec<u32>> {
        let (rref, pivots) = rref(self, f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![0u32; self.cols];
                x[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = f.neg(rref.get(r, fc));
                }
                x
            })
            .collect()
    }

    /// Basis of `{ x : x^T M = 0 }`.
    pub fn left_kernel(&self, f: Field) -> Vec<Vec<u32>> {
        self.transpose().kernel(f)
    }

    pub fn inverse(&self, f: Field) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let (red, pivots) = rref(&aug, f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c));
            }
        }
        Some(inv)
    }
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &Matrix, f: Field) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(pr) = (row..a.rows).find(|&r| a.get(r, col) != 0) else { continue };
        if pr != row {
            for c in 0..a.cols {
                let t = a.get(row, c);
                a.set(row, c, a.get(pr, c));
                a.set(pr, c, t);
            }
        }
        let inv = f.inv(a.get(row, col));
        for c in col..a.cols {
            a.set(row, c, f.mul(a.get(row, c), inv));
        }
        let prow: Vec<u32> = a.row(row).to_vec();
        for r in 0..a.rows {
            if r == row {
                continue;
            }
            let factor = a.get(r, col);
            if factor == 0 {
                continue;
            }
            let neg = f.neg(factor);
            let start = r * a.cols;
            for (x, &pc) in a.data[start + col..start + a.cols].iter_mut().zip(&prow[col..]) {
                *x = f.mul_add(*x, neg, pc);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

pub fn rank_of_rows(rows: &[Vec<u32>], cols: usize, f: Field) -> usize {
    let mut s = Subspace::new(cols, f);
    for r in rows {
        s.insert(r);
    }
    s.dim()
}

/// `y += c * x`.
#[inline]
pub fn axpy(y: &mut [u32], c: u32, x: &[u32], f: Field) {
    if c == 0 {
        return;
    }
    let p = f.modulus() as u64;
    for (a, &b) in y.iter_mut().zip(x) {
        if b != 0 {
            *a = ((*a as u64 + c as u64 * b as u64) % p) as u32;
        }
    }
}

pub fn is_zero_vec(v: &[u32]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Row-sparse matrix; `vec_mul` is the row-vector product `v * M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<(usize, u32)>>,
}

impl SparseMatrix {
    pub fn from_rows(rows: &[Vec<u32>], cols: usize) -> Self {
        let entries = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (i, v)).collect())
            .collect();
        SparseMatrix { rows: rows.len(), cols, entries }
    }

    pub fn from_dense(m: &Matrix) -> Self {
        let rows: Vec<Vec<u32>> = (0..m.rows).map(|r| m.row(r).to_vec()).collect();
        Self::from_rows(&rows, m.cols)
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for (r, row) in self.entries.iter().enumerate() {
            for &(c, v) in row {
                m.set(r, c, v);
            }
        }
        m
    }

    pub fn vec_mul(&self, v: &[u32], f: Field) -> Vec<u32> {
        let mut out = vec![0u32; self.cols];
        for (i, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(j, x) in &self.entries[i] {
                out[j] = f.mul_add(out[j], c, x);
            }
        }
        out
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(|r| r.len()).sum()
    }
}

/// Incrementally built subspace of `F_p^dim`. Keeps the inserted vectors as the
/// user-facing basis together with a fully reduced echelon form and the change of basis,
/// so membership and coordinate queries are single passes.
#[derive(Clone, Debug)]
pub struct Subspace {
    dim_ambient: usize,
    field: Field,
    basis: Vec<Vec<u32>>,
    echelon: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    /// `echelon[i] = sum_j transform[i][j] * basis[j]`.
    transform: Vec<Vec<u32>>,
}

impl Subspace {
    pub fn new(dim_ambient: usize, field: Field) -> Self {
        Subspace { dim_ambient, field, basis: vec![], echelon: vec![], pivots: vec![], transform: vec![] }
    }

    pub fn from_vectors<'a, I: IntoIterator<Item = &'a Vec<u32>>>(dim: usize, f: Field, vs: I) -> Self {
        let mut s = Subspace::new(dim, f);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim_ambient
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after elimination against the echelon rows, with the
    /// coefficients used (in echelon coordinates).
    fn reduce(&self, v: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let f = self.field;
        let mut r = v.to_vec();
        let mut used = vec![0u32; self.echelon.len()];
        for (i, (row, &pc)) in self.echelon.iter().zip(&self.pivots).enumerate() {
            let c = r[pc];
            if c != 0 {
                used[i] = c;
                axpy(&mut r, f.neg(c), row, f);
            }
        }
        (r, used)
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        is_zero_vec(&self.reduce(v).0)
    }

    /// Adds `v` when independent; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.dim_ambient);
        let f = self.field;
        let (mut r, used) = self.reduce(v);
        let Some(pc) = r.iter().position(|&x| x != 0) else { return false };
        let k = self.basis.len();
        // r = v - sum used_i echelon_i, expressed in the basis.
        let mut t = vec![0u32; k + 1];
        t[k] = 1;
        for (i, &c) in used.iter().enumerate() {
            if c != 0 {
                for (j, &tj) in self.transform[i].iter().enumerate() {
                    t[j] = f.sub(t[j], f.mul(c, tj));
                }
            }
        }
        let inv = f.inv(r[pc]);
        r.iter_mut().for_each(|x| *x = f.mul(*x, inv));
        t.iter_mut().for_each(|x| *x = f.mul(*x, inv));
        for row in self.transform.iter_mut() {
            row.push(0);
        }
        for i in 0..self.echelon.len() {
            let c = self.echelon[i][pc];
            if c != 0 {
                let neg = f.neg(c);
                axpy(&mut self.echelon[i], neg, &r, f);
                axpy(&mut self.transform[i], neg, &t, f);
            }
        }
        self.basis.push(v.to_vec());
        self.echelon.push(r);
        self.pivots.push(pc);
        self.transform.push(t);
        true
    }

    /// Coordinates of `v` in the inserted basis, or `None` when `v` is outside.
    pub fn coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        let f = self.field;
        let (r, used) = self.reduce(v);
        if !is_zero_vec(&r) {
            return None;
        }
        let mut c = vec![0u32; self.basis.len()];
        for (i, &u) in used.iter().enumerate() {
            axpy(&mut c, u, &self.transform[i], f);
        }
        Some(c)
    }

    /// For vectors known to lie in the span, `coords(v) = sum_i v[pos_i] * lin_i`
    /// (the echelon form is fully reduced, so each pivot entry is read off directly).
    pub fn coordinate_functionals(&self) -> impl Iterator<Item = (usize, &Vec<u32>)> + '_ {
        self.pivots.iter().copied().zip(self.transform.iter())
    }

    /// Coordinates of a vector assumed to lie in the span; skips the membership check.
    pub fn coords_unchecked(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut c = vec![0u32; self.basis.len()];
        for (&pc, t) in self.pivots.iter().zip(&self.transform) {
            if v[pc] != 0 {
                axpy(&mut c, v[pc], t, f);
            }
        }
        c
    }

    /// Canonical representative of `v` modulo the span (zero at every pivot).
    pub fn residue(&self, v: &[u32]) -> Vec<u32> {
        self.reduce(v).0
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn equals(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Field {
        Field::new(5).unwrap()
    }

    #[test]
    fn kernel_and_rank() {
        let f = f5();
        // The second row is twice the first modulo 5.
        let m = Matrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 1]], 3);
        assert_eq!(m.rank(f), 1);
        let k = m.kernel(f);
        assert_eq!(k.len(), 2);
        assert!(k.iter().all(|v| is_zero_vec(&m.mul_vec(v, f))));
        let m = Matrix::from_rows(&[vec![1, 2, 3], vec![0, 1, 1]], 3);
        assert_eq!(m.rank(f), 2);
        let k = m.kernel(f);
        assert_eq!(k.len(), 1);
        assert!(is_zero_vec(&m.mul_vec(&k[0], f)));
    }

    #[test]
    fn inverse_round_trip() {
        let f = f5();
        let m = Matrix::from_rows(&[vec![1, 2], vec![3, 4]], 2);
        let inv = m.inverse(f).unwrap();
        assert_eq!(m.mul(&inv, f), Matrix::identity(2));
        let sing = Matrix::from_rows(&[vec![1, 2], vec![2, 4]], 2);
        assert!(sing.inverse(f).is_none());
    }

    #[test]
    fn subspace_coordinates() {
        let f = f5();
        let vs = [vec![1, 1, 0, 0], vec![0, 1, 1, 0], vec![1, 2, 1, 0]];
        let mut s = Subspace::new(4, f);
        assert!(s.insert(&vs[0]));
        assert!(s.insert(&vs[1]));
        assert!(!s.insert(&vs[2]));
        let target = vec![3, 0, 2, 0];
        let c = s.coords(&target).unwrap();
        let mut back = vec![0; 4];
        for (ci, v) in c.iter().zip(s.basis()) {
            axpy(&mut back, *ci, v, f);
        }
        assert_eq!(back, target);
        assert!(s.coords(&[0, 0, 0, 1]).is_none());
    }
}
