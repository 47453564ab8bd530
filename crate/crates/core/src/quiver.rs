//! Path algebras of quivers evaluated in endomorphism algebras: checks that a
//! proposed presentation (arrows plus relations) is exactly right, length by length.
//!
//! An arrow `(a|b)` has left vertex `a` and right vertex `b`; the path
//! `(a|b)(b|c)` is the product in that order. In an endomorphism algebra the arrow
//! `(a|b)` is a map from summand `b` to summand `a`.

use crate::cache::RepStore;
use crate::coeff::Field;
use crate::combinatorics::{Multipartition, TwoBlockShape};
use crate::error::{Error, Result};
use crate::homs::{end_algebra, hom_space, map_with_generator_image, GradedAlgebra};
use crate::modules::{g_module, truncated_g, Module};
use crate::linalg::Subspace;
use crate::nilhecke::Coords;

#[derive(Clone, Debug)]
pub struct Quiver {
    pub vertices: usize,
    /// `(left, right)` per arrow.
    pub arrows: Vec<(usize, usize)>,
}

/// A path: its left vertex (needed for length 0) and arrow sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub left: usize,
    pub right: usize,
    pub arrows: Vec<usize>,
}

/// `sum c_i path_i`, all of one length with common endpoints.
#[derive(Clone, Debug)]
pub struct Relation {
    pub terms: Vec<(i64, Vec<usize>)>,
}

impl Quiver {
    pub fn paths(&self, len: usize) -> Vec<Path> {
        let mut cur: Vec<Path> =
            (0..self.vertices).map(|v| Path { left: v, right: v, arrows: vec![] }).collect();
        for _ in 0..len {
            let mut next = Vec::new();
            for p in &cur {
                for (i, &(a, b)) in self.arrows.iter().enumerate() {
                    if a == p.right {
                        let mut arrows = p.arrows.clone();
                        arrows.push(i);
                        next.push(Path { left: p.left, right: b, arrows });
                    }
                }
            }
            cur = next;
        }
        cur
    }

    fn endpoints(&self, arrows: &[usize]) -> Option<(usize, usize)> {
        let first = *arrows.first()?;
        let mut right = self.arrows[first].1;
        for &x in &arrows[1..] {
            if self.arrows[x].0 != right {
                return None;
            }
            right = self.arrows[x].1;
        }
        Some((self.arrows[first].0, right))
    }

    /// Span of `p r q` over relations `r` and paths `p`, `q` with total length `len`,
    /// as vectors indexed by `self.paths(len)`.
    pub fn ideal_span(&self, relations: &[Relation], len: usize, f: Field) -> Subspace {
        let paths = self.paths(len);
        let index: std::collections::HashMap<Vec<usize>, usize> =
            paths.iter().enumerate().map(|(i, p)| (p.arrows.clone(), i)).collect();
        let mut span = Subspace::new(paths.len(), f);
        for r in relations {
            let m = r.terms[0].1.len();
            if m > len {
                continue;
            }
            let Some((rl, rr)) = self.endpoints(&r.terms[0].1) else { continue };
            for a in 0..=len - m {
                let b = len - m - a;
                for p in self.paths(a).into_iter().filter(|p| p.right == rl) {
                    for q in self.paths(b).into_iter().filter(|q| q.left == rr) {
                        let mut v = vec![0u32; paths.len()];
                        for (c, t) in &r.terms {
                            let word: Vec<usize> =
                                p.arrows.iter().chain(t).chain(&q.arrows).copied().collect();
                            let i = index[&word];
                            v[i] = f.add(v[i], f.from_i64(*c));
                        }
                        span.insert(&v);
                    }
                }
            }
        }
        span
    }
}

/// Images of the vertices (summand identities) and arrows in an algebra.
pub struct Evaluation<'a> {
    pub algebra: &'a GradedAlgebra,
    pub vertex_images: Vec<Coords>,
    pub arrow_images: Vec<Coords>,
}

impl Evaluation<'_> {
    pub fn eval(&self, p: &Path) -> Coords {
        let mut acc = self.vertex_images[p.left].clone();
        for &x in &p.arrows {
            acc = self.algebra.mul(&acc, &self.arrow_images[x]);
        }
        acc
    }

    /// Relations among the paths of length `len` satisfied in the algebra.
    pub fn kernel(&self, q: &Quiver, len: usize) -> Subspace {
        let f = self.algebra.field;
        let paths = q.paths(len);
        let m = crate::linalg::Matrix::from_rows(
            &paths.iter().map(|p| self.eval(p)).collect::<Vec<_>>(),
            self.algebra.dim(),
        );
        Subspace::from_vectors(paths.len(), f, m.left_kernel(f).iter())
    }

    /// Dimension of the span of all paths of length at most `max_len`.
    pub fn image_dim(&self, q: &Quiver, max_len: usize) -> usize {
        let mut span = Subspace::new(self.algebra.dim(), self.algebra.field);
        for len in 0..=max_len {
            for p in q.paths(len) {
                span.insert(&self.eval(&p));
            }
        }
        span.dim()
    }

    /// Smallest length at which every path evaluates to zero.
    pub fn vanishing_length(&self, q: &Quiver, cap: usize) -> Option<usize> {
        (1..=cap).find(|&len| q.paths(len).iter().all(|p| self.eval(p).iter().all(|&x| x == 0)))
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct PresentationReport {
    /// `(length, kernel dim, ideal dim)` for each length checked.
    pub lengths: Vec<(usize, usize, usize)>,
    pub kernels_match: bool,
    pub surjective: bool,
    pub vanishing_length: Option<usize>,
}

impl PresentationReport {
    pub fn holds(&self) -> bool {
        self.kernels_match && self.surjective && self.vanishing_length.is_some()
    }
}

/// `kQ / (relations) -> algebra` is an isomorphism: surjective, and at every length the
/// kernel equals the relation ideal (up to and including the length where all paths vanish).
pub fn check_presentation(q: &Quiver, relations: &[Relation], ev: &Evaluation, cap: usize) -> PresentationReport {
    let f = ev.algebra.field;
    let vanish = ev.vanishing_length(q, cap);
    let top = vanish.unwrap_or(cap);
    let mut lengths = Vec::new();
    let mut ok = true;
    for len in 1..=top {
        let ker = ev.kernel(q, len);
        let ideal = q.ideal_span(relations, len, f);
        ok &= ker.equals(&ideal);
        lengths.push((len, ker.dim(), ideal.dim()));
    }
    PresentationReport {
        lengths,
        kernels_match: ok,
        surjective: ev.image_dim(q, top) == ev.algebra.dim(),
        vanishing_length: vanish,
    }
}

/// Two evaluations of the same quiver define isomorphic algebras: equal kernels at
/// every length up to common vanishing, and both surjective.
pub fn same_presentation(q: &Quiver, a: &Evaluation, b: &Evaluation, cap: usize) -> bool {
    let (Some(va), Some(vb)) = (a.vanishing_length(q, cap), b.vanishing_length(q, cap)) else {
        return false;
    };
    if va != vb {
        return false;
    }
    let kernels = (1..=va).all(|len| a.kernel(q, len).equals(&b.kernel(q, len)));
    kernels && a.image_dim(q, va) == a.algebra.dim() && b.image_dim(q, vb) == b.algebra.dim()
}

/// The quiver of `A_l^!`: vertices `1..l` (stored `0..l-1`), arrows `(i|i+1)` and `(i+1|i)`,
/// listed as `(i|i+1)` for all `i` first.
pub fn zigzag_quiver(l: usize) -> Quiver {
    let mut arrows = Vec::new();
    for i in 0..l.saturating_sub(1) {
        arrows.push((i, i + 1));
    }
    for i in 0..l.saturating_sub(1) {
        arrows.push((i + 1, i));
    }
    Quiver { vertices: l, arrows }
}

/// Index of the arrow `(a|b)` in `zigzag_quiver`.
pub fn zigzag_arrow(l: usize, a: usize, b: usize) -> usize {
    if b == a + 1 {
        a
    } else {
        debug_assert_eq!(a, b + 1);
        (l - 1) + b
    }
}

/// `(i|i-1|i) = (i|i+1|i)` for interior `i`, and `(1|2|1) = 0`.
pub fn zigzag_relations(l: usize) -> Vec<Relation> {
    let mut rels = Vec::new();
    if l >= 2 {
        rels.push(Relation { terms: vec![(1, vec![zigzag_arrow(l, 0, 1), zigzag_arrow(l, 1, 0)])] });
    }
    for i in 1..l.saturating_sub(1) {
        rels.push(Relation {
            terms: vec![
                (1, vec![zigzag_arrow(l, i, i - 1), zigzag_arrow(l, i - 1, i)]),
                (-1, vec![zigzag_arrow(l, i, i + 1), zigzag_arrow(l, i + 1, i)]),
            ],
        });
    }
    rels
}

/// `x = c y` for some scalar `c` (`c = 1` when both vanish); `None` if not proportional.
fn proportion(x: &[u32], y: &[u32], f: Field) -> Option<u32> {
    let Some(k) = y.iter().position(|&v| v != 0) else {
        return x.iter().all(|&v| v == 0).then_some(1);
    };
    let c = f.mul(x[k], f.inv(y[k]));
    x.iter().zip(y).all(|(&a, &b)| a == f.mul(c, b)).then_some(c)
}

fn scaled(v: &[u32], c: u32, f: Field) -> Coords {
    v.iter().map(|&x| f.mul(x, c)).collect()
}

/// The zigzag presentation of `A_l^!` evaluated in an endomorphism algebra.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ZigzagReport {
    pub l: usize,
    /// Degrees of `(i|i+1)` then `(i+1|i)`.
    pub arrow_degrees: Vec<i64>,
    /// `c_i` with `d(i|i+1) = c_i (i|i+1|i|i+1)` for the given arrows; rescaling `(i|i+1)`
    /// by `c_i` makes the identity exact.
    pub up_scalars: Vec<Option<u32>>,
    /// Scalar applied to `(i|i-1)` so that `(i|i-1|i) = (i|i+1|i)`, interior `i` only.
    pub down_scalars: Vec<Option<u32>>,
    /// `d(i+1|i) = 0` for all `i`.
    pub down_closed: bool,
    pub presentation: PresentationReport,
}

impl ZigzagReport {
    /// The relations hold after rescaling arrows, ignoring the differential.
    pub fn algebra_holds(&self) -> bool {
        self.presentation.holds() && self.down_scalars.iter().all(|c| c.is_some())
    }

    /// Relations and differential hold after rescaling arrows.
    pub fn holds(&self) -> bool {
        self.presentation.holds()
            && self.down_closed
            && self.up_scalars.iter().all(|c| c.is_some())
            && self.down_scalars.iter().all(|c| c.is_some())
    }

    /// The presentation and differential hold for the arrows exactly as given.
    pub fn exact(&self) -> bool {
        self.holds() && self.up_scalars.iter().chain(&self.down_scalars).all(|&c| c == Some(1))
    }
}

/// Checks `A_l^!` against `alg` with vertex `i` sent to summand `vertices[i]` and the arrows
/// to `arrows` (indexed as in `zigzag_quiver`). Arrows are rescaled as recorded in the report
/// before the presentation is compared.
pub fn zigzag_report(alg: &GradedAlgebra, vertices: &[usize], arrows: Vec<Coords>) -> ZigzagReport {
    let l = vertices.len();
    let f = alg.field;
    let q = zigzag_quiver(l);
    let mut arrows = arrows;
    let arrow_degrees = arrows
        .iter()
        .map(|a| a.iter().position(|&x| x != 0).map_or(0, |i| alg.basis[i].degree))
        .collect();
    let path = |arrows: &[Coords], seq: &[(usize, usize)]| -> Coords {
        let mut acc = alg.idempotents[vertices[seq[0].0]].clone();
        for &(a, b) in seq {
            acc = alg.mul(&acc, &arrows[zigzag_arrow(l, a, b)]);
        }
        acc
    };
    let mut up_scalars = Vec::new();
    for i in 0..l.saturating_sub(1) {
        let up = zigzag_arrow(l, i, i + 1);
        let c = alg.differential(&arrows[up]).and_then(|d| {
            proportion(&d, &path(&arrows, &[(i, i + 1), (i + 1, i), (i, i + 1)]), f)
        });
        let c = c.filter(|&c| c != 0);
        if let Some(c) = c {
            arrows[up] = scaled(&arrows[up], c, f);
        }
        up_scalars.push(c);
    }
    let mut down_scalars = Vec::new();
    for i in 1..l.saturating_sub(1) {
        let down = zigzag_arrow(l, i, i - 1);
        let lower = path(&arrows, &[(i, i - 1), (i - 1, i)]);
        let upper = path(&arrows, &[(i, i + 1), (i + 1, i)]);
        let c = proportion(&upper, &lower, f).filter(|&c| c != 0);
        if let Some(c) = c {
            arrows[down] = scaled(&arrows[down], c, f);
        }
        down_scalars.push(c);
    }
    let down_closed = (0..l.saturating_sub(1)).all(|i| {
        alg.differential(&arrows[zigzag_arrow(l, i + 1, i)]).is_some_and(|d| d.iter().all(|&x| x == 0))
    });
    let ev = Evaluation {
        algebra: alg,
        vertex_images: vertices.iter().map(|&v| alg.idempotents[v].clone()).collect(),
        arrow_images: arrows,
    };
    let presentation = check_presentation(&q, &zigzag_relations(l), &ev, 4 * l + 4);
    ZigzagReport { l, arrow_degrees, up_scalars, down_scalars, down_closed, presentation }
}

/// The lowest-degree map `source -> target`, when that degree is one-dimensional.
pub fn lowest_map(alg: &GradedAlgebra, source: usize, target: usize) -> Option<Coords> {
    let idx = alg.block_indices(source, target);
    let low = idx.iter().map(|&i| alg.basis[i].degree).min()?;
    let at: Vec<usize> = idx.iter().copied().filter(|&i| alg.basis[i].degree == low).collect();
    (at.len() == 1).then(|| alg.unit_vector(at[0]))
}

/// `G(0^{i-1} 1 0^{l-i})` for vertex `i` (0-based `i-1`).
fn vertex_shape(l: usize, v: usize) -> Result<Multipartition> {
    let mut e = vec![0u8; l];
    e[v] = 1;
    Multipartition::new(e)
}

/// `S_1(l) = END(sum G(0^{i-1} 1 0^{l-i}))` with `(i|i+1)` multiplication by `y_1` and
/// `(i+1|i)` the inclusion `G(i) -> G(i+1)`.
pub fn schur_one_zigzag(store: &RepStore, l: usize, p: u32) -> Result<(GradedAlgebra, ZigzagReport)> {
    let (alg, arrows) = schur_one_arrows(store, l, p)?;
    let report = zigzag_report(&alg, &(0..l).collect::<Vec<_>>(), arrows);
    Ok((alg, report))
}

/// `S_1(l)` and the images of the arrows of `zigzag_quiver(l)`.
pub fn schur_one_arrows(store: &RepStore, l: usize, p: u32) -> Result<(GradedAlgebra, Vec<Coords>)> {
    let rep = store.get(1, l, p)?;
    let mods = (0..l).map(|v| g_module(&rep, &vertex_shape(l, v)?)).collect::<Result<Vec<_>>>()?;
    let alg = end_algebra(&mods)?;
    let q = zigzag_quiver(l);
    let mut arrows = vec![Vec::new(); q.arrows.len()];
    for v in 0..l.saturating_sub(1) {
        let (small, big) = (&mods[v], &mods[v + 1]);
        let gen_small = &small.realization.as_ref().expect("concrete").vectors[0];
        let gen_big = &big.realization.as_ref().expect("concrete").vectors[0];
        let times_y = rep.mul(&rep.y(0), gen_big);
        let images = [
            (v + 1, v, big, small, small.realization.as_ref().unwrap().coords(&times_y)),
            (v, v + 1, small, big, big.realization.as_ref().unwrap().coords(gen_small)),
        ];
        for (s, t, src, tgt, image) in images {
            let image = image.ok_or_else(|| Error::Internal("arrow image outside the target".into()))?;
            let m = map_with_generator_image(src, tgt, &image)?
                .ok_or_else(|| Error::Internal("arrow is not a module map".into()))?;
            let c = alg
                .coords_of_map(s, t, &m.matrix)
                .ok_or_else(|| Error::Internal("arrow is not in END".into()))?;
            arrows[zigzag_arrow(l, t, s)] = c;
        }
    }
    Ok((alg, arrows))
}

/// `END_{NH_2^3}(G(1,1,0) + G(1,0,1) + e_2 G(0,1,1))` with the lowest-degree maps between
/// adjacent summands as arrows.
pub fn a3_from_rank_two(store: &RepStore, p: u32) -> Result<(Vec<Module>, GradedAlgebra, ZigzagReport)> {
    let rep = store.get(2, 3, p)?;
    let mods = vec![
        g_module(&rep, &"1,1,0".parse()?)?,
        g_module(&rep, &"1,0,1".parse()?)?,
        truncated_g(&rep, &TwoBlockShape::new(1, 0, 0, 2))?,
    ];
    let alg = end_algebra(&mods)?;
    let arrows = evaluate_adjacent_lowest(&alg, 3)?;
    let report = zigzag_report(&alg, &[0, 1, 2], arrows);
    Ok((mods, alg, report))
}

fn evaluate_adjacent_lowest(alg: &GradedAlgebra, l: usize) -> Result<Vec<Coords>> {
    let mut arrows = vec![Vec::new(); 2 * (l - 1)];
    for v in 0..l - 1 {
        for (a, b) in [(v, v + 1), (v + 1, v)] {
            arrows[zigzag_arrow(l, a, b)] = lowest_map(alg, b, a)
                .ok_or_else(|| Error::Internal(format!("no unique lowest map {b} -> {a}")))?;
        }
    }
    Ok(arrows)
}

/// `Some(k)` when `a` and `b` are isomorphic with `b = q^k a`, witnessed by an invertible
/// homogeneous map.
pub fn isomorphism_shift(a: &Module, b: &Module) -> Result<Option<i64>> {
    if a.dim() != b.dim() || a.acting != b.acting || a.l != b.l {
        return Ok(None);
    }
    if a.dim() == 0 {
        return Ok(Some(0));
    }
    let h = hom_space(a, b)?;
    Ok(h.maps.iter().find(|m| m.matrix.rank(a.field) == a.dim()).map(|m| m.degree))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_counts() {
        let q = zigzag_quiver(3);
        assert_eq!(q.paths(0).len(), 3);
        assert_eq!(q.paths(1).len(), 4);
        assert_eq!(q.paths(2).len(), 6);
    }

    #[test]
    fn relation_ideal_in_low_length() {
        let q = zigzag_quiver(3);
        let f = Field::new(3).unwrap();
        // Length 2: (1|2|1) and (2|1|2)-(2|3|2).
        assert_eq!(q.ideal_span(&zigzag_relations(3), 2, f).dim(), 2);
    }

    #[test]
    fn schur_one_is_the_zigzag_dual_exactly() {
        let store = RepStore::in_memory();
        for l in [2, 3] {
            for p in [2, 3, 5] {
                let (alg, rep) = schur_one_zigzag(&store, l, p).unwrap();
                assert!(rep.exact(), "l={l} p={p}: {rep:?}");
                // dim S_1(l) = sum_{i,j} min(i, j).
                let expected: usize = (1..=l).flat_map(|i| (1..=l).map(move |j| i.min(j))).sum();
                assert_eq!(alg.dim(), expected);
            }
        }
    }

    #[test]
    fn rank_two_model_satisfies_relations() {
        let store = RepStore::in_memory();
        let (mods, _, rep) = a3_from_rank_two(&store, 3).unwrap();
        assert_eq!(mods.iter().map(|m| m.dim()).collect::<Vec<_>>(), vec![2, 4, 6]);
        assert!(rep.algebra_holds());
    }

    #[test]
    fn missing_relation_is_detected() {
        let store = RepStore::in_memory();
        let (alg, arrows) = schur_one_arrows(&store, 3, 3).unwrap();
        let q = zigzag_quiver(3);
        let ev = Evaluation { algebra: &alg, vertex_images: alg.idempotents.clone(), arrow_images: arrows };
        let full = zigzag_relations(3);
        assert!(check_presentation(&q, &full, &ev, 16).holds());
        assert!(!check_presentation(&q, &full[..1], &ev, 16).holds());
        assert!(!check_presentation(&q, &full[1..], &ev, 16).holds());
    }

    #[test]
    fn isomorphism_shift_detects_shifted_copies() {
        let store = RepStore::in_memory();
        let rep = store.get(1, 3, 3).unwrap();
        let g: Multipartition = "0,1,0".parse().unwrap();
        let m = g_module(&rep, &g).unwrap();
        let shifted = g_module(&rep, &g).unwrap().with_shift(m.shift + 4);
        assert_eq!(isomorphism_shift(&m, &shifted).unwrap(), Some(4));
        let other = g_module(&rep, &"0,0,1".parse().unwrap()).unwrap();
        assert_eq!(isomorphism_shift(&m, &other).unwrap(), None);
    }
}
