//! Graded Hom spaces between modules and the endomorphism algebras built from them.
//!
//! Maps are stored as matrices `F` of size `dim M x dim N` in row convention:
//! `f(m_j) = sum_k F[j][k] n_k`, so `f(v) = v F`, `f o g` has matrix `G F`, and
//! the induced differential is `dF = F D_N - D_M F`.

use std::collections::{BTreeMap, HashMap};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};

use crate::cache::RepStore;
use crate::coeff::{Field, LaurentPoly};
use crate::combinatorics::{enumerate_multipartitions, two_block_shapes, Multipartition, TwoBlockShape};
use crate::error::{ensure, Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::modules::{g_module, generator_degrees, truncated_g, Module};
use crate::nilhecke::Coords;

/// A module presented by a spanning tree of words in the generators applied to
/// chosen generators. Generators are picked lowest degree first.
/// `(vector, intrinsic degree, parent)`; `parent = (node, generator)` or `None` for a root.
type TreeNode = (Coords, i64, Option<(usize, usize)>);

struct Tree {
    nodes: Vec<TreeNode>,
    /// Row `j`: coordinates of the `j`-th module basis vector in the tree basis.
    to_tree: Matrix,
    /// `(node, generator) -> child` for tree edges.
    edges: HashMap<(usize, usize), usize>,
}

fn unit(d: usize, j: usize) -> Coords {
    let mut v = vec![0u32; d];
    v[j] = 1;
    v
}

fn build_tree(m: &Module) -> Result<Tree> {
    let d = m.dim();
    let f = m.field;
    let ngen = generator_degrees(m.acting).len();
    let gdeg = generator_degrees(m.acting);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by_key(|&j| (m.degrees[j], j));
    let mut span = Subspace::new(d, f);
    let mut nodes: Vec<TreeNode> = Vec::new();
    let mut edges = HashMap::new();
    for &j in &order {
        let e = unit(d, j);
        if span.contains(&e) {
            continue;
        }
        span.insert(&e);
        nodes.push((e, m.degrees[j], None));
        let mut head = nodes.len() - 1;
        while head < nodes.len() {
            for (g, &dg) in gdeg.iter().enumerate().take(ngen) {
                let w = m.act(&nodes[head].0, g);
                if span.insert(&w) {
                    nodes.push((w, nodes[head].1 + dg, Some((head, g))));
                    edges.insert((head, g), nodes.len() - 1);
                }
            }
            head += 1;
        }
    }
    ensure(nodes.len() == d, || "spanning tree does not span".into())?;
    let t = Matrix::from_rows(&nodes.iter().map(|n| n.0.clone()).collect::<Vec<_>>(), d);
    let to_tree = t.inverse(f).ok_or_else(|| Error::Internal("spanning tree is singular".into()))?;
    Ok(Tree { nodes, to_tree, edges })
}

/// A homogeneous module map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomMap {
    pub degree: i64,
    pub matrix: Matrix,
}

#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source_dim: usize,
    pub target_dim: usize,
    pub maps: Vec<HomMap>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.maps.len()
    }

    pub fn graded_dim(&self) -> LaurentPoly {
        let mut c = LaurentPoly::zero();
        for m in &self.maps {
            c.add_term(m.degree, BigInt::from(1));
        }
        c
    }

    pub fn in_degree(&self, k: i64) -> Vec<&HomMap> {
        self.maps.iter().filter(|m| m.degree == k).collect()
    }
}

fn sparse_rows_mul(rows: &[Coords], m: &crate::linalg::SparseMatrix, f: Field) -> Vec<Coords> {
    rows.iter().map(|r| m.vec_mul(r, f)).collect()
}

/// All homogeneous module maps `M -> N`, degree measured in total (shifted) degrees.
pub fn hom_space(src: &Module, tgt: &Module) -> Result<HomSpace> {
    if src.acting != tgt.acting || src.l != tgt.l || src.field != tgt.field {
        return Err(Error::Param(format!("modules over different algebras: {src:?} vs {tgt:?}")));
    }
    let f = src.field;
    let (dm, dn) = (src.dim(), tgt.dim());
    let mut maps = Vec::new();
    if dm == 0 || dn == 0 {
        return Ok(HomSpace { source_dim: dm, target_dim: dn, maps });
    }
    let tree = build_tree(src)?;
    let roots: Vec<usize> = (0..tree.nodes.len()).filter(|&i| tree.nodes[i].2.is_none()).collect();
    let ngen = src.action.len();
    let tgt_deg = tgt.total_degrees();
    let (lo_n, hi_n) = (*tgt_deg.iter().min().unwrap(), *tgt_deg.iter().max().unwrap());
    let src_deg = src.total_degrees();
    let (lo_m, hi_m) = (*src_deg.iter().min().unwrap(), *src_deg.iter().max().unwrap());
    for k in (lo_n - hi_m)..=(hi_n - lo_m) {
        // Unknowns: coefficients of each root's image in the matching degree of N.
        let mut unknown_cols: Vec<(usize, usize)> = Vec::new();
        for (ri, &r) in roots.iter().enumerate() {
            let want = tree.nodes[r].1 + src.shift + k;
            for (j, &dj) in tgt_deg.iter().enumerate() {
                if dj == want {
                    unknown_cols.push((ri, j));
                }
            }
        }
        let u = unknown_cols.len();
        if u == 0 {
            continue;
        }
        // images[i]: U rows of length dn; the image of node i is alpha^T images[i].
        let mut images: Vec<Vec<Coords>> = Vec::with_capacity(tree.nodes.len());
        for (i, node) in tree.nodes.iter().enumerate() {
            let img = match node.2 {
                None => {
                    let ri = roots.iter().position(|&r| r == i).expect("root");
                    unknown_cols
                        .iter()
                        .map(|&(rj, j)| if rj == ri { unit(dn, j) } else { vec![0; dn] })
                        .collect()
                }
                Some((p, g)) => sparse_rows_mul(&images[p], &tgt.action[g], f),
            };
            images.push(img);
        }
        let mut constraints = Subspace::new(u, f);
        'outer: for i in 0..tree.nodes.len() {
            for g in 0..ngen {
                if tree.edges.contains_key(&(i, g)) {
                    continue;
                }
                let v = src.act(&tree.nodes[i].0, g);
                let c = tree.to_tree.vec_mul(&v, f);
                let mut lhs: Vec<Coords> = sparse_rows_mul(&images[i], &tgt.action[g], f);
                for (jn, &cj) in c.iter().enumerate() {
                    if cj == 0 {
                        continue;
                    }
                    let neg = f.neg(cj);
                    for (row, add) in lhs.iter_mut().zip(&images[jn]) {
                        crate::linalg::axpy(row, neg, add, f);
                    }
                }
                for col in 0..dn {
                    let colv: Coords = lhs.iter().map(|r| r[col]).collect();
                    if colv.iter().any(|&x| x != 0) {
                        constraints.insert(&colv);
                        if constraints.dim() == u {
                            break 'outer;
                        }
                    }
                }
            }
        }
        let sols = if constraints.dim() == 0 {
            (0..u).map(|i| unit(u, i)).collect()
        } else {
            Matrix::from_rows(constraints.basis(), u).kernel(f)
        };
        for alpha in sols {
            let node_images: Vec<Coords> = images
                .iter()
                .map(|rows| {
                    let mut out = vec![0u32; dn];
                    for (a, r) in alpha.iter().zip(rows) {
                        if *a != 0 {
                            crate::linalg::axpy(&mut out, *a, r, f);
                        }
                    }
                    out
                })
                .collect();
            let t = Matrix::from_rows(&node_images, dn);
            maps.push(HomMap { degree: k, matrix: tree.to_tree.mul(&t, f) });
        }
    }
    Ok(HomSpace { source_dim: dm, target_dim: dn, maps })
}

/// Whether `F` commutes with the action: `rho_M(x) F = F rho_N(x)` for all generators.
pub fn is_module_map(src: &Module, tgt: &Module, m: &Matrix) -> bool {
    let f = src.field;
    src.action.iter().zip(&tgt.action).all(|(a, b)| a.to_dense().mul(m, f) == m.mul(&b.to_dense(), f))
}

/// `dF = F D_N - D_M F`, when both modules carry a differential.
pub fn map_differential(src: &Module, tgt: &Module, m: &Matrix) -> Option<Matrix> {
    let f = src.field;
    let dm = src.differential_matrix()?.to_dense();
    let dn = tgt.differential_matrix()?.to_dense();
    Some(m.mul(&dn, f).sub(&dm.mul(m, f), f))
}

/// The module map from a cyclic module sending its generator (first basis vector)
/// to `image` (target coordinates), if one exists.
pub fn map_with_generator_image(src: &Module, tgt: &Module, image: &[u32]) -> Result<Option<HomMap>> {
    let f = src.field;
    if src.dim() == 0 {
        return Ok(None);
    }
    let nz: Vec<usize> = (0..image.len()).filter(|&k| image[k] != 0).collect();
    let Some(&k0) = nz.first() else {
        return Ok(Some(HomMap { degree: 0, matrix: Matrix::zeros(src.dim(), tgt.dim()) }));
    };
    let degree = tgt.total_degree(k0) - src.total_degree(0);
    let homs = hom_space(src, tgt)?;
    let cands = homs.in_degree(degree);
    // Solve sum_i c_i F_i[0] = image through the left kernel of [F_i[0]; image].
    let mut rows: Vec<Vec<u32>> = cands.iter().map(|h| h.matrix.row(0).to_vec()).collect();
    rows.push(image.to_vec());
    let ker = Matrix::from_rows(&rows, tgt.dim()).left_kernel(f);
    let Some(sol) = ker.iter().find(|v| v[cands.len()] != 0) else {
        return Ok(None);
    };
    let scale = f.neg(f.inv(sol[cands.len()]));
    let mut m = Matrix::zeros(src.dim(), tgt.dim());
    for (h, &c) in cands.iter().zip(sol.iter()) {
        if c != 0 {
            m = m.add(&h.matrix.scale(f.mul(c, scale), f), f);
        }
    }
    Ok(Some(HomMap { degree, matrix: m }))
}

/// One basis element of an endomorphism algebra: a map `summand source -> summand target`.
#[derive(Clone, Debug)]
pub struct AlgebraBasisElement {
    pub source: usize,
    pub target: usize,
    pub degree: i64,
    pub map: Matrix,
}

/// `END(M_1 + ... + M_k)` with product `a * b = a o b`.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    pub labels: Vec<String>,
    pub field: Field,
    pub basis: Vec<AlgebraBasisElement>,
    /// Basis indices and flattened-map span of each `(source, target)` block.
    blocks: BTreeMap<(usize, usize), (Vec<usize>, Subspace)>,
    /// `products[(i, j)]`: sparse coordinates of `b_i * b_j` (absent when zero or not composable).
    products: HashMap<(usize, usize), Vec<(usize, u32)>>,
    /// Row `i`: coordinates of `d(b_i)`; `None` if some summand has no differential.
    pub diff: Option<Vec<Coords>>,
    /// Identity of each summand.
    pub idempotents: Vec<Coords>,
}

impl GradedAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn zero(&self) -> Coords {
        vec![0; self.dim()]
    }

    pub fn unit_vector(&self, i: usize) -> Coords {
        unit(self.dim(), i)
    }

    pub fn block_indices(&self, source: usize, target: usize) -> &[usize] {
        self.blocks.get(&(source, target)).map(|b| b.0.as_slice()).unwrap_or(&[])
    }

    pub fn block_graded_dim(&self, source: usize, target: usize) -> LaurentPoly {
        let mut c = LaurentPoly::zero();
        for &i in self.block_indices(source, target) {
            c.add_term(self.basis[i].degree, BigInt::from(1));
        }
        c
    }

    pub fn graded_dim(&self) -> LaurentPoly {
        let mut c = LaurentPoly::zero();
        for b in &self.basis {
            c.add_term(b.degree, BigInt::from(1));
        }
        c
    }

    /// Coordinates of a map in the given block.
    pub fn coords_of_map(&self, source: usize, target: usize, m: &Matrix) -> Option<Coords> {
        let (idx, span) = self.blocks.get(&(source, target))?;
        let c = span.coords(&m.data)?;
        let mut out = self.zero();
        for (&i, &x) in idx.iter().zip(&c) {
            out[i] = x;
        }
        Some(out)
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Coords {
        let f = self.field;
        let mut out = self.zero();
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                if let Some(p) = self.products.get(&(i, j)) {
                    let ab = f.mul(a, b);
                    for &(k, c) in p {
                        out[k] = f.mul_add(out[k], ab, c);
                    }
                }
            }
        }
        out
    }

    pub fn differential(&self, x: &[u32]) -> Option<Coords> {
        let d = self.diff.as_ref()?;
        let f = self.field;
        let mut out = self.zero();
        for (i, &a) in x.iter().enumerate() {
            if a != 0 {
                crate::linalg::axpy(&mut out, a, &d[i], f);
            }
        }
        Some(out)
    }

    pub fn add(&self, x: &[u32], y: &[u32]) -> Coords {
        x.iter().zip(y).map(|(&a, &b)| self.field.add(a, b)).collect()
    }

    pub fn sub(&self, x: &[u32], y: &[u32]) -> Coords {
        x.iter().zip(y).map(|(&a, &b)| self.field.sub(a, b)).collect()
    }

    pub fn one(&self) -> Coords {
        self.idempotents.iter().fold(self.zero(), |acc, e| self.add(&acc, e))
    }

    /// `(a b) c = a (b c)` on all composable basis triples.
    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                if self.basis[j].target != self.basis[i].source {
                    continue;
                }
                let ij = self.mul(&self.unit_vector(i), &self.unit_vector(j));
                for k in 0..n {
                    if self.basis[k].target != self.basis[j].source {
                        continue;
                    }
                    let jk = self.mul(&self.unit_vector(j), &self.unit_vector(k));
                    let left = self.mul(&ij, &self.unit_vector(k));
                    let right = self.mul(&self.unit_vector(i), &jk);
                    if left != right {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Leibniz on `samples` random composable basis pairs, deterministic in `seed`.
    pub fn leibniz_holds(&self, samples: usize, seed: u64) -> bool {
        if self.diff.is_none() || self.dim() == 0 {
            return self.diff.is_some();
        }
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let pairs: Vec<(usize, usize)> = (0..self.dim())
            .flat_map(|i| (0..self.dim()).map(move |j| (i, j)))
            .filter(|&(i, j)| self.basis[j].target == self.basis[i].source)
            .collect();
        (0..samples).all(|_| {
            let (i, j) = pairs[rng.gen_range(0..pairs.len())];
            let (a, b) = (self.unit_vector(i), self.unit_vector(j));
            let lhs = self.differential(&self.mul(&a, &b)).unwrap();
            let rhs = self.add(
                &self.mul(&self.differential(&a).unwrap(), &b),
                &self.mul(&a, &self.differential(&b).unwrap()),
            );
            lhs == rhs
        })
    }

    /// `d^p = 0` on the whole algebra.
    pub fn dp_zero(&self) -> bool {
        let Some(d) = &self.diff else { return false };
        let m = Matrix::from_rows(d, self.dim());
        self.dim() == 0 || m.pow(self.field.modulus(), self.field).is_zero()
    }

    /// Supported in degrees `>= 0`, degree 0 spanned by the summand identities, all
    /// of which are closed.
    pub fn is_positive(&self) -> bool {
        if self.basis.iter().any(|b| b.degree < 0) {
            return false;
        }
        let zero_deg = self.basis.iter().filter(|b| b.degree == 0).count();
        let closed = self
            .idempotents
            .iter()
            .all(|e| self.differential(e).map(|d| d.iter().all(|&x| x == 0)).unwrap_or(false));
        zero_deg == self.idempotents.len() && closed
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| {
            (0..self.dim()).all(|j| {
                let (a, b) = (self.unit_vector(i), self.unit_vector(j));
                self.mul(&a, &b) == self.mul(&b, &a)
            })
        })
    }

    /// Graded dimension blocks as `{source, target, graded_dim}` records.
    pub fn blocks_json(&self) -> Vec<serde_json::Value> {
        let k = self.labels.len();
        let mut out = Vec::new();
        for s in 0..k {
            for t in 0..k {
                out.push(serde_json::json!({
                    "source": self.labels[s],
                    "target": self.labels[t],
                    "dim": self.block_indices(s, t).len(),
                    "graded_dim": self.block_graded_dim(s, t).to_json(),
                }));
            }
        }
        out
    }
}

/// `END(M_1 + ... + M_k)` with structure constants and differential.
pub fn end_algebra(summands: &[Module]) -> Result<GradedAlgebra> {
    let field = summands.first().map(|m| m.field).unwrap_or(crate::coeff::Field::new(2)?);
    let k = summands.len();
    let mut basis = Vec::new();
    let mut blocks = BTreeMap::new();
    let mut homs: BTreeMap<(usize, usize), HomSpace> = BTreeMap::new();
    for s in 0..k {
        for t in 0..k {
            homs.insert((s, t), hom_space(&summands[s], &summands[t])?);
        }
    }
    for ((s, t), h) in &homs {
        let mut idx = Vec::new();
        let mut span = Subspace::new(summands[*s].dim() * summands[*t].dim(), field);
        for m in &h.maps {
            ensure(span.insert(&m.matrix.data), || "hom basis is dependent".into())?;
            idx.push(basis.len());
            basis.push(AlgebraBasisElement { source: *s, target: *t, degree: m.degree, map: m.matrix.clone() });
        }
        blocks.insert((*s, *t), (idx, span));
    }
    let mut alg = GradedAlgebra {
        labels: summands.iter().map(|m| m.label.clone()).collect(),
        field,
        basis,
        blocks,
        products: HashMap::new(),
        diff: None,
        idempotents: Vec::new(),
    };
    let n = alg.dim();
    let mut products = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            let (bi, bj) = (&alg.basis[i], &alg.basis[j]);
            if bj.target != bi.source {
                continue;
            }
            let m = bj.map.mul(&bi.map, field);
            if m.is_zero() {
                continue;
            }
            let c = alg
                .coords_of_map(bj.source, bi.target, &m)
                .ok_or_else(|| Error::Internal("composite is not a module map".into()))?;
            products.insert((i, j), c.iter().enumerate().filter(|(_, &x)| x != 0).map(|(k, &x)| (k, x)).collect());
        }
    }
    alg.products = products;
    alg.idempotents = (0..k)
        .map(|s| {
            alg.coords_of_map(s, s, &Matrix::identity(summands[s].dim()))
                .ok_or_else(|| Error::Internal("identity missing from End".into()))
        })
        .collect::<Result<_>>()?;
    if summands.iter().all(|m| m.is_partial_stable()) {
        let diff = alg
            .basis
            .iter()
            .map(|b| {
                let dm = map_differential(&summands[b.source], &summands[b.target], &b.map).expect("stable");
                alg.coords_of_map(b.source, b.target, &dm)
                    .ok_or_else(|| Error::Internal("differential of a map is not a map".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        alg.diff = Some(diff);
    }
    Ok(alg)
}

/// `S_n(l) = END(sum_lambda G(lambda))`, summands in the dominance-refining order.
pub fn schur_algebra(store: &RepStore, n: usize, l: usize, p: u32) -> Result<(Vec<Multipartition>, GradedAlgebra)> {
    let rep = store.get(n, l, p)?;
    let shapes = enumerate_multipartitions(n, l)?;
    let mods = shapes.iter().map(|lam| g_module(&rep, lam)).collect::<Result<Vec<_>>>()?;
    Ok((shapes, end_algebra(&mods)?))
}

/// The summands `e_lambda G(lambda)`, `lambda in P_n^{r,s}`.
pub fn truncated_summands(store: &RepStore, n: usize, r: usize, s: usize, p: u32) -> Result<(Vec<TwoBlockShape>, Vec<Module>)> {
    if n > r + s {
        return Err(Error::Param(format!("n = {n} exceeds r + s = {}", r + s)));
    }
    let rep = store.get(n, r + s, p)?;
    let shapes = two_block_shapes(n, r, s);
    let mods = shapes.iter().map(|sh| truncated_g(&rep, sh)).collect::<Result<Vec<_>>>()?;
    Ok((shapes, mods))
}

/// `S_n(r,s) = END(sum e_lambda G(lambda))`.
pub fn two_tensor_schur(store: &RepStore, n: usize, r: usize, s: usize, p: u32) -> Result<(Vec<TwoBlockShape>, GradedAlgebra)> {
    let (shapes, mods) = truncated_summands(store, n, r, s, p)?;
    Ok((shapes, end_algebra(&mods)?))
}

/// No negative-degree endomorphisms and a one-dimensional degree-0 part.
pub fn indecomposability_certificate(m: &Module) -> Result<bool> {
    let end = hom_space(m, m)?;
    Ok(end.maps.iter().all(|x| x.degree >= 0) && end.in_degree(0).len() == 1)
}

/// Result of the double-centralizer computation.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DoubleCentralizer {
    pub algebra_dim: usize,
    pub centralizer_dim: usize,
    pub action_rank: usize,
}

impl DoubleCentralizer {
    pub fn holds(&self) -> bool {
        self.centralizer_dim == self.algebra_dim && self.action_rank == self.algebra_dim
    }
}

/// `END_{S_n(r,s)}(sum e_lambda G(lambda))` against the right action of `NH_n^l`.
/// A commuting map preserves each summand because the summand identities lie in
/// `S_n(r,s)`, so only block-diagonal unknowns are needed.
pub fn double_centralizer_check(store: &RepStore, n: usize, r: usize, s: usize, p: u32) -> Result<DoubleCentralizer> {
    let (_, mods) = truncated_summands(store, n, r, s, p)?;
    let alg = end_algebra(&mods)?;
    let rep = store.get(n, r + s, p)?;
    let f = rep.field();
    let dims: Vec<usize> = mods.iter().map(|m| m.dim()).collect();
    let offsets: Vec<usize> = dims.iter().scan(0, |acc, &d| {
        let o = *acc;
        *acc += d * d;
        Some(o)
    }).collect();
    let unknowns: usize = dims.iter().map(|d| d * d).sum();
    let var = |lam: usize, i: usize, j: usize| offsets[lam] + i * dims[lam] + j;
    let mut eqs = Subspace::new(unknowns, f);
    for b in &alg.basis {
        let (lam, mu) = (b.source, b.target);
        let a = &b.map;
        // (A Phi_mu - Phi_lam A)[i][j] = 0.
        for i in 0..dims[lam] {
            for j in 0..dims[mu] {
                let mut row = vec![0u32; unknowns];
                for k in 0..dims[mu] {
                    let c = a.get(i, k);
                    if c != 0 {
                        let v = var(mu, k, j);
                        row[v] = f.add(row[v], c);
                    }
                }
                for k in 0..dims[lam] {
                    let c = a.get(k, j);
                    if c != 0 {
                        let v = var(lam, i, k);
                        row[v] = f.sub(row[v], c);
                    }
                }
                if row.iter().any(|&x| x != 0) {
                    eqs.insert(&row);
                }
            }
        }
    }
    let centralizer_dim = unknowns - eqs.dim();
    let mut images = Subspace::new(unknowns, f);
    for k in 0..rep.dim() {
        let bk = rep.unit(k);
        let mut flat = vec![0u32; unknowns];
        for (lam, m) in mods.iter().enumerate() {
            let real = m.realization.as_ref().expect("truncated modules are concrete");
            for (i, v) in real.vectors.iter().enumerate() {
                let c = real
                    .coords(&rep.mul(v, &bk))
                    .ok_or_else(|| Error::Internal("summand not closed under NH".into()))?;
                for (j, &x) in c.iter().enumerate() {
                    flat[var(lam, i, j)] = x;
                }
            }
        }
        ensure(eqs.basis().iter().all(|row| dot(row, &flat, f) == 0), || {
            "NH action does not commute with S_n(r,s)".into()
        })?;
        images.insert(&flat);
    }
    Ok(DoubleCentralizer { algebra_dim: rep.dim(), centralizer_dim, action_rank: images.dim() })
}

fn dot(a: &[u32], b: &[u32], f: Field) -> u32 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.mul_add(acc, x, y))
}

/// `Delta(lambda) = P(lambda) / P^{>lambda}(lambda)` inside `END(sum Y)`, where
/// `P(lambda)` is spanned by the maps out of summand `lambda` and the higher part by
/// maps factoring through summands earlier in the (largest-first) order.
#[derive(Clone, Debug)]
pub struct StandardModule {
    pub index: usize,
    pub projective_dim: usize,
    pub higher_dim: usize,
    /// `P^{>=gamma}(lambda)` dimensions for `gamma` from the top down to `lambda`.
    pub filtration_dims: Vec<usize>,
    pub filtration_dg_stable: bool,
    pub graded_dim: LaurentPoly,
}

impl StandardModule {
    pub fn dim(&self) -> usize {
        self.projective_dim - self.higher_dim
    }
}

/// Span of the maps out of `lambda` that factor through some summand in `through`.
fn factoring_span(alg: &GradedAlgebra, lambda: usize, through: &[usize]) -> Subspace {
    let k = alg.labels.len();
    let mut span = Subspace::new(alg.dim(), alg.field);
    for &g in through {
        for &i in alg.block_indices(lambda, g) {
            let first = alg.unit_vector(i);
            for mu in 0..k {
                for &j in alg.block_indices(g, mu) {
                    span.insert(&alg.mul(&alg.unit_vector(j), &first));
                }
            }
        }
    }
    span
}

pub fn standard_module(alg: &GradedAlgebra, lambda: usize) -> StandardModule {
    let k = alg.labels.len();
    let proj: Vec<usize> = (0..k).flat_map(|mu| alg.block_indices(lambda, mu).to_vec()).collect();
    let higher = factoring_span(alg, lambda, &(0..lambda).collect::<Vec<_>>());
    let mut filtration_dims = Vec::new();
    let mut stable = true;
    for top in 0..=lambda {
        let span = factoring_span(alg, lambda, &(0..=top).collect::<Vec<_>>());
        if alg.diff.is_some() {
            stable &= span.basis().iter().all(|v| span.contains(&alg.differential(v).unwrap()));
        }
        filtration_dims.push(span.dim());
    }
    // Graded dimension of the quotient: per degree, |P_d| - |higher_d|, with the higher
    // part spanned by homogeneous products.
    let mut graded = LaurentPoly::zero();
    for &i in &proj {
        graded.add_term(alg.basis[i].degree, BigInt::from(1));
    }
    // Spanned by products of basis maps, hence by homogeneous vectors.
    for v in higher.basis() {
        let i = v.iter().position(|&x| x != 0).expect("nonzero");
        graded.add_term(alg.basis[i].degree, -BigInt::from(1));
    }
    StandardModule {
        index: lambda,
        projective_dim: proj.len(),
        higher_dim: higher.dim(),
        filtration_dims,
        filtration_dg_stable: stable,
        graded_dim: graded,
    }
}

/// Summary used by the CLI and acceptance checks.
pub fn algebra_summary(alg: &GradedAlgebra) -> serde_json::Value {
    serde_json::json!({
        "total_dim": alg.dim(),
        "graded_dim": alg.graded_dim().to_json(),
        "blocks": alg.blocks_json(),
        "positivity": alg.is_positive(),
        "dp_zero": alg.dp_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilhecke::NHRep;
    use std::sync::Arc;

    fn mp(s: &str) -> Multipartition {
        s.parse().unwrap()
    }

    #[test]
    fn g_endomorphisms_in_two_three() {
        let rep = Arc::new(NHRep::build(2, 3, 3).unwrap());
        let top = g_module(&rep, &mp("1,1,0")).unwrap();
        let bottom = g_module(&rep, &mp("0,1,1")).unwrap();
        assert_eq!(hom_space(&top, &top).unwrap().dim(), 1);
        let end = hom_space(&bottom, &bottom).unwrap();
        assert_eq!(end.dim(), 6);
        for m in &end.maps {
            assert!(is_module_map(&bottom, &bottom, &m.matrix));
        }
    }

    #[test]
    fn hom_to_zero_is_zero() {
        let rep = Arc::new(NHRep::build(2, 3, 3).unwrap());
        let g = g_module(&rep, &mp("1,0,1")).unwrap();
        let z = crate::modules::span_right_ideal(&rep, &rep.zero(), 0).unwrap();
        assert_eq!(hom_space(&g, &z).unwrap().dim(), 0);
        assert_eq!(end_algebra(&[z]).unwrap().dim(), 0);
    }

    #[test]
    fn s1_of_two_has_dimension_five() {
        let store = RepStore::in_memory();
        let (_, alg) = schur_algebra(&store, 1, 2, 3).unwrap();
        assert_eq!(alg.dim(), 5);
        assert!(alg.is_associative());
        assert!(alg.leibniz_holds(50, 1));
        assert!(alg.dp_zero());
    }

    #[test]
    fn s2_of_two_one() {
        let store = RepStore::in_memory();
        let (_, alg) = two_tensor_schur(&store, 2, 2, 1, 3).unwrap();
        assert_eq!(alg.dim(), 11);
        let mut blocks: Vec<usize> = (0..2)
            .flat_map(|s| (0..2).map(move |t| (s, t)))
            .map(|(s, t)| alg.block_indices(s, t).len())
            .collect();
        blocks.sort();
        assert_eq!(blocks, vec![1, 2, 2, 6]);
    }

    #[test]
    fn indecomposability_examples() {
        let rep = Arc::new(NHRep::build(2, 3, 3).unwrap());
        assert!(indecomposability_certificate(&g_module(&rep, &mp("1,1,0")).unwrap()).unwrap());
        assert!(!indecomposability_certificate(&g_module(&rep, &mp("0,1,1")).unwrap()).unwrap());
        let t = truncated_g(&rep, &TwoBlockShape::new(1, 0, 0, 2)).unwrap();
        assert!(indecomposability_certificate(&t).unwrap());
    }

    #[test]
    fn grassmannian_endomorphisms() {
        let store = RepStore::in_memory();
        for l in 1..=4 {
            for n in 0..=l {
                let (shapes, alg) = two_tensor_schur(&store, n, l, 0, 3).unwrap();
                assert_eq!(shapes.len(), 1);
                assert!(alg.is_commutative(), "n={n} l={l}");
                let expected = crate::coeff::quantum_binom(l as i64, n as i64).unwrap().shift((n * (l - n)) as i64);
                assert_eq!(alg.graded_dim(), expected, "n={n} l={l}");
            }
        }
    }

    #[test]
    fn double_centralizer_two_one() {
        let store = RepStore::in_memory();
        for n in 0..=3 {
            assert!(double_centralizer_check(&store, n, 2, 1, 3).unwrap().holds(), "n={n}");
        }
    }

    #[test]
    fn standard_module_of_projective_top() {
        let store = RepStore::in_memory();
        let (_, alg) = two_tensor_schur(&store, 1, 2, 1, 3).unwrap();
        let top = standard_module(&alg, 0);
        assert_eq!(top.higher_dim, 0);
        assert_eq!(top.dim(), top.projective_dim);
    }
}
