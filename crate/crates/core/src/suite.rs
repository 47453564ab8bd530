//! The acceptance suite: thirteen criteria, each a set of named sub-checks with a
//! runtime budget. Shared by the `verify` subcommand and the acceptance test target.

use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::RepStore;
use crate::catsl2::{
    a3_truncation_comparison, basic_two_tensor, double_construction_check, ef_char_decomposition,
    induced_truncation_matches, multiplicity_filtration_check, phi_check, y_modules, Generator,
    HomTable,
};
use crate::coeff::{quantum_binom, quantum_int, LaurentPoly};
use crate::combinatorics::{enumerate_multipartitions, two_block_shapes, TwoBlockShape};
use crate::decat::{canonical_closed, canonical_via_divided_powers, decat_compare};
use crate::error::Result;
use crate::homs::{double_centralizer_check, indecomposability_certificate, standard_module, two_tensor_schur};
use crate::modules::{
    combinatorial_identity_sides, g_module, specht_filtration_check, truncated_dimension, truncated_g, Module,
    SpanOptions,
};
use crate::nilhecke::{
    cell_ideal, cellular_basis, composition_idempotent_word, expected_dimension, idempotent_e, idempotent_e_prime,
    is_differential_stable, is_two_sided_ideal, linear_y, trace_functional, Letter, NHWord,
};
use crate::quiver::schur_one_zigzag;

/// Parameter grid for the algebra-level sweeps.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub max_n: usize,
    pub max_l: usize,
    pub primes: Vec<u32>,
    pub jobs: usize,
    /// Criterion ids, numbers or sub-check ids; empty selects everything.
    pub only: Vec<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_n: 3, max_l: 4, primes: vec![2, 3, 5], jobs: 1, only: Vec::new() }
    }
}

impl SuiteConfig {
    /// `(n, l)` with `0 <= n <= max_n`, `max(n, 1) <= l <= max_l`.
    pub fn sizes(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for n in 0..=self.max_n {
            for l in n.max(1)..=self.max_l {
                out.push((n, l));
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SubCheck {
    pub id: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub number: u8,
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub within_budget: bool,
    pub budget_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    pub checks: Vec<SubCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub struct Ctx<'a> {
    pub store: &'a RepStore,
    pub cfg: &'a SuiteConfig,
    /// Every sub-check runs (the criterion itself was selected).
    whole: bool,
    checks: Vec<SubCheck>,
}

impl Ctx<'_> {
    fn enabled(&self, id: &str) -> bool {
        self.whole || self.cfg.only.iter().any(|t| t == id)
    }

    /// Runs `f` if `id` is selected and records its verdict and detail.
    fn sub(&mut self, id: &str, f: impl FnOnce(&RepStore, &SuiteConfig) -> Result<(bool, Value)>) -> Result<()> {
        if self.enabled(id) {
            let (passed, detail) = f(self.store, self.cfg)?;
            self.checks.push(SubCheck { id: id.to_string(), passed, detail });
        }
        Ok(())
    }
}

type RunFn = fn(&mut Ctx) -> Result<()>;

pub struct Criterion {
    pub number: u8,
    pub id: &'static str,
    pub title: &'static str,
    pub subchecks: &'static [&'static str],
    pub budget: Duration,
    run: RunFn,
}

impl Criterion {
    fn selected(&self, only: &[String]) -> (bool, bool) {
        if only.is_empty() {
            return (true, true);
        }
        let whole = only.iter().any(|t| t == self.id || t == &self.number.to_string());
        let partial = only.iter().any(|t| self.subchecks.contains(&t.as_str()));
        (whole || partial, whole)
    }
}

pub fn criteria() -> Vec<Criterion> {
    let s = Duration::from_secs;
    vec![
        Criterion { number: 1, id: "algebra", title: "nilHecke algebra construction", subchecks: &["dimension", "relations", "cyclotomic"], budget: s(10), run: c1 },
        Criterion { number: 2, id: "pdg", title: "p-DG axioms", subchecks: &["leibniz", "dp-zero", "idempotent-differentials"], budget: s(10), run: c2 },
        Criterion { number: 3, id: "example-two-three", title: "worked example NH_2^3", subchecks: &["g-generators", "zeta-truncation"], budget: s(5), run: c3 },
        Criterion { number: 4, id: "cellular", title: "cellular structure", subchecks: &["cellular-basis", "cell-ideals", "specht-filtration"], budget: s(60), run: c4 },
        Criterion { number: 5, id: "frobenius", title: "symmetric trace", subchecks: &["trace"], budget: s(30), run: c5 },
        Criterion { number: 6, id: "schur", title: "two-tensor Schur algebras", subchecks: &["s2-two-one", "zigzag", "grassmannian"], budget: s(30), run: c6 },
        Criterion { number: 7, id: "truncated-dimension", title: "truncated module dimensions", subchecks: &["truncated-dims", "binomial-identity"], budget: s(10), run: c7 },
        Criterion { number: 8, id: "classification", title: "classification and indecomposability", subchecks: &["y-indecomposable", "double-construction"], budget: s(120), run: c8 },
        Criterion { number: 9, id: "functor-isos", title: "functor isomorphisms", subchecks: &["induced-truncation", "phi"], budget: s(120), run: c9 },
        Criterion { number: 10, id: "efact", title: "E/F decompositions", subchecks: &["ef-forced", "multiplicity-filtration"], budget: s(120), run: c10 },
        Criterion { number: 11, id: "double-centralizer", title: "double centralizer", subchecks: &["centralizer"], budget: s(60), run: c11 },
        Criterion { number: 12, id: "positivity", title: "basic algebra positivity", subchecks: &["basic-positive", "a3-truncations", "standard-modules"], budget: s(60), run: c12 },
        Criterion { number: 13, id: "decategorification", title: "canonical basis comparison", subchecks: &["decat-compare", "canonical-constructions"], budget: s(120), run: c13 },
    ]
}

/// Runs the selected criteria, up to `cfg.jobs` at a time; results in criterion order.
pub fn run_suite(store: &RepStore, cfg: &SuiteConfig, timings: bool) -> Vec<CriterionResult> {
    let all = criteria();
    let chosen: Vec<(&Criterion, bool)> = all
        .iter()
        .filter_map(|c| {
            let (sel, whole) = c.selected(&cfg.only);
            sel.then_some((c, whole))
        })
        .collect();
    let next = Mutex::new(0usize);
    let results: Mutex<Vec<Option<CriterionResult>>> = Mutex::new(vec![None; chosen.len()]);
    std::thread::scope(|scope| {
        for _ in 0..cfg.jobs.max(1).min(chosen.len().max(1)) {
            scope.spawn(|| loop {
                let i = {
                    let mut g = next.lock().expect("queue");
                    let i = *g;
                    *g += 1;
                    i
                };
                let Some(&(c, whole)) = chosen.get(i) else { break };
                let r = run_criterion(store, cfg, c, whole, timings);
                results.lock().expect("results")[i] = Some(r);
            });
        }
    });
    results.into_inner().expect("results").into_iter().map(|r| r.expect("every criterion ran")).collect()
}

fn run_criterion(store: &RepStore, cfg: &SuiteConfig, c: &Criterion, whole: bool, timings: bool) -> CriterionResult {
    let start = Instant::now();
    let mut ctx = Ctx { store, cfg, whole, checks: Vec::new() };
    let outcome = (c.run)(&mut ctx);
    let elapsed = start.elapsed();
    let within_budget = elapsed <= c.budget;
    let error = outcome.err().map(|e| e.to_string());
    let passed = error.is_none() && within_budget && ctx.checks.iter().all(|s| s.passed);
    CriterionResult {
        number: c.number,
        id: c.id,
        title: c.title,
        passed,
        within_budget,
        budget_ms: c.budget.as_millis() as u64,
        elapsed_ms: timings.then_some(elapsed.as_millis() as u64),
        checks: ctx.checks,
        error,
    }
}

/// Collects `(label, ok)` pairs into a verdict listing the failing labels.
fn tally(items: Vec<(String, bool)>) -> (bool, Value) {
    let failures: Vec<&String> = items.iter().filter(|(_, ok)| !ok).map(|(l, _)| l).collect();
    (failures.is_empty(), json!({ "checked": items.len(), "failures": failures }))
}

fn c1(ctx: &mut Ctx) -> Result<()> {
    ctx.sub("dimension", |store, cfg| {
        let mut items = Vec::new();
        for (n, l) in cfg.sizes() {
            for &p in &cfg.primes {
                let rep = store.get(n, l, p)?;
                let fact: usize = (1..=n).product();
                let binom = (0..n).fold(1usize, |acc, i| acc * (l - i) / (i + 1));
                items.push((format!("n={n} l={l} p={p}"), rep.dim() == fact * fact * binom));
            }
        }
        Ok(tally(items))
    })?;
    ctx.sub("relations", |store, cfg| {
        let mut items = Vec::new();
        for (n, l) in cfg.sizes() {
            for &p in &cfg.primes {
                items.push((format!("n={n} l={l} p={p}"), store.get(n, l, p)?.check_relations().is_ok()));
            }
        }
        Ok(tally(items))
    })?;
    ctx.sub("cyclotomic", |store, cfg| {
        let mut items = Vec::new();
        for (n, l) in cfg.sizes().into_iter().filter(|&(n, _)| n > 0) {
            for &p in &cfg.primes {
                let rep = store.get(n, l, p)?;
                let y = rep.y_matrix(0);
                items.push((format!("n={n} l={l} p={p}"), y.pow(l as u32, rep.field()).is_zero()));
            }
        }
        Ok(tally(items))
    })
}

fn random_element(rng: &mut rand::rngs::StdRng, dim: usize, p: u32) -> Vec<u32> {
    (0..dim).map(|_| rng.gen_range(0..p)).collect()
}

fn c2(ctx: &mut Ctx) -> Result<()> {
    ctx.sub("leibniz", |store, cfg| {
        let mut items = Vec::new();
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
        for (n, l) in cfg.sizes() {
            for &p in &cfg.primes {
                let rep = store.get(n, l, p)?;
                let ok = (0..200).all(|_| {
                    let a = random_element(&mut rng, rep.dim(), p);
                    let b = random_element(&mut rng, rep.dim(), p);
                    let lhs = rep.differential(&rep.mul(&a, &b));
                    let rhs = rep.add(&rep.mul(&rep.differential(&a), &b), &rep.mul(&a, &rep.differential(&b)));
                    lhs == rhs
                });
                items.push((format!("n={n} l={l} p={p}"), ok));
            }
        }
        Ok(tally(items))
    })?;
    ctx.sub("dp-zero", |store, cfg| {
        let mut items = Vec::new();
        for (n, l) in cfg.sizes() {
            for &p in &cfg.primes {
                items.push((format!("n={n} l={l} p={p}"), store.get(n, l, p)?.verify_dp_zero()));
            }
        }
        Ok(tally(items))
    })?;
    ctx.sub("idempotent-differentials", |store, cfg| {
        let mut items = Vec::new();
        for (n, l) in cfg.sizes().into_iter().filter(|&(n, _)| n > 0) {
            for &p in &cfg.primes {
                let rep = store.get(n, l, p)?;
                let e = idempotent_e(&rep, &[n])?.coords;
                let ce: Vec<(usize, i64)> = (0..n).map(|i| (i, -(i as i64))).collect();
                let ok_e = rep.differential(&e) == rep.mul(&e, &linear_y(&rep, &ce));
                let ep = idempotent_e_prime(&rep, n, 0)?.coords;
                let cp: Vec<(usize, i64)> = (0..n).map(|i| (i, -((n - 1 - i) as i64))).collect();
                let ok_ep = rep.differential(&ep) == rep.mul(&linear_y(&rep, &cp), &ep);
                items.push((format!("n={n} l={l} p={p}"), ok_e && ok_ep));
            }
        }
        Ok(tally(items))
    })
}

/// The bases listed for `G(1,1,0)`, `G(1,0,1)`, `G(0,1,1)` in `NH_2^3`.
fn listed_generators() -> Vec<(&'static str, Vec<NHWord>)> {
    let m = |e: &[u32], w: &[usize]| NHWord::monomial(e, w);
    let psi_first = |e: &[u32], w: &[usize]| NHWord::letters(vec![Letter::Psi(0)]).mul(&NHWord::monomial(e, w));
    let lambda = vec![m(&[2, 1], &[]), m(&[2, 1], &[0])];
    let mut mu = lambda.clone();
    mu.extend([m(&[2, 0], &[]), m(&[2, 0], &[0])]);
    let mut zeta = mu.clone();
    zeta.extend([psi_first(&[2, 1], &[]), psi_first(&[2, 1], &[0]), m(&[1, 0], &[]), m(&[1, 0], &[0])]);
    vec![("1,1,0", lambda), ("1,0,1", mu), ("0,1,1", zeta)]
}

fn c3(ctx: &mut Ctx) -> Result<()> {
    ctx.sub("g-generators", |store, _| {
        let rep = store.get(2, 3, 3)?;
        let mut items = Vec::new();
        for ((shape, words), dim) in listed_generators().into_iter().zip([2usize, 4, 8]) {
            let g = g_module(&rep, &shape.parse()?)?;
            let real = g.realization.as_ref().expect("concrete");
            let coords: Vec<Vec<u32>> = words.iter().map(|w| rep.word_coords(w)).collect::<Result<_>>()?;
            let inside = coords.iter().all(|c| real.coords(c).is_some());
            let rank = crate::linalg::rank_of_rows(&coords, rep.dim(), rep.field());
            items.push((format!("G({shape})"), g.dim() == dim && inside && rank == dim && words.len() == dim));
        }
        Ok(tally(items))
    })?;
    ctx.sub("zeta-truncation", |store, _| {
        let rep = store.get(2, 3, 3)?;
        let zeta: crate::combinatorics::Multipartition = "0,1,1".parse()?;
        let g = g_module(&rep, &zeta)?;
        let e2 = rep.word_coords(&composition_idempotent_word(&[2]))?;
        let trunc = truncated_g(&rep, &TwoBlockShape::new(1, 0, 0, 2))?;
        let gen = g.realization.as_ref().expect("concrete").vectors[0].clone();
        let complement_gen = rep.sub(&gen, &rep.mul(&e2, &gen));
        let complement = Module::span(&rep, &[complement_gen], g.shift, "(1-e_2)G", SpanOptions::default())?;
        let lambda = g_module(&rep, &"1,1,0".parse()?)?;
        let ok_split = trunc.dim() == 6 && trunc.dim() + complement.dim() == g.dim();
        let ok_char = complement.graded_char() == lambda.graded_char();
        let detail = json!({
            "truncation_dim": trunc.dim(),
            "complement_char": complement.graded_char().to_json(),
            "g_lambda_char": lambda.graded_char().to_json(),
            "truncation_dg_stable": trunc.is_partial_stable(),
        });
        Ok((ok_split && ok_char && trunc.is_partial_stable(), detail))
    })
}

fn c4(ctx: &mut Ctx) -> Result<()> {
    ctx.sub("cellular-basis", |store, cfg| {
        let mut items = Vec::new();
        for (n, l) in cfg.sizes() {
            for &p in &cfg.primes {
                let rep = store.get(n, l, p)?;
                let ok = cellular_basis(&rep).map(|c| c.len() == expected_dimension(n, l)).unwrap_or(false);
                items.push((format!("n={n} l={l} p={p}"), ok));
            }
        }
        Ok(tally(items))
    })?;
    ctx.sub("cell-ideals", |store, cfg| {
        let mut items = Vec::new();
        for (n, l) in cfg.sizes() {
            for &p in &cfg.primes {
                let rep = store.get(n, l, p)?;
                let cells = cellular_basis(&rep)?;
                for mu in enumerate_multipartitions(n, l)? {
                    let ideal = cell_ideal(&rep, &cells, &mu)?;
                    let ok = is_differential_stable(&rep, &ideal) && is_two_sided_ideal(&rep, &ideal);
                    items.push((format!("n={n} l={l} p={p} mu={mu}"), ok));
                }
            }
        }
        Ok(tally(items))
    })?;
    ctx.sub("specht-filtration", |store, cfg| {
        let mut items = Vec::new();
        for (n, l) in cfg.sizes() {
            for &p in &cfg.primes {
                let rep = store.get(n, l, p)?;
                let cells = cellular_basis(&rep)?;
                for lambda in enumerate_multipartitions(n, l)? {
                    let ok = specht_filtration_check(&rep, &cells, &lambda)?.holds();
                    items.push((format!("n={n} l={l} p={p} lambda={lambda}"), ok));
                }
            }
        }
        Ok(tally(items))
    })
}

fn c5(ctx: &mut Ctx) -> Result<()> {
    ctx.sub("trace", |store, cfg| {
        let mut items = Vec::new();
        for (n, l) in cfg.sizes() {
            for &p in &cfg.primes {
                let rep = store.get(n, l, p)?;
                let ok = trace_functional(&rep)
                    .map(|t| t.degree == -2 * (n * (l - n)) as i64 && t.gram_rank == rep.dim())
                    .unwrap_or(false);
                items.push((format!("n={n} l={l} p={p}"), ok));
            }
        }
        Ok(tally(items))
    })
}

fn c6(ctx: &mut Ctx) -> Result<()> {
    ctx.sub("s2-two-one", |store, _| {
        let (_, alg) = two_tensor_schur(store, 2, 2, 1, 3)?;
        let mut blocks: Vec<usize> =
            (0..2).flat_map(|s| (0..2).map(move |t| (s, t))).map(|(s, t)| alg.block_indices(s, t).len()).collect();
        blocks.sort_unstable();
        Ok((alg.dim() == 11 && blocks == [1, 2, 2, 6], json!({ "dim": alg.dim(), "blocks": blocks })))
    })?;
    ctx.sub("zigzag", |store, _| {
        let mut items = Vec::new();
        for l in [2, 3] {
            for p in [2, 3, 5] {
                let (_, report) = schur_one_zigzag(store, l, p)?;
                items.push((format!("l={l} p={p}"), report.exact()));
            }
        }
        Ok(tally(items))
    })?;
    ctx.sub("grassmannian", |store, cfg| {
        let mut items = Vec::new();
        for l in 1..=cfg.max_l {
            for n in 0..=l {
                let (_, alg) = two_tensor_schur(store, n, l, 0, 3)?;
                let poincare = quantum_binom(l as i64, n as i64)?.shift((n * (l - n)) as i64);
                items.push((format!("n={n} l={l}"), alg.is_commutative() && alg.graded_dim() == poincare));
            }
        }
        Ok(tally(items))
    })
}

/// `(a, b, c, d)` with `a + b + c + d <= max_l`.
fn all_shapes(max_l: usize) -> Vec<TwoBlockShape> {
    let mut out = Vec::new();
    for l in 0..=max_l {
        for a in 0..=l {
            for b in 0..=l - a {
                for c in 0..=l - a - b {
                    out.push(TwoBlockShape::new(a, b, c, l - a - b - c));
                }
            }
        }
    }
    out
}

fn c7(ctx: &mut Ctx) -> Result<()> {
    ctx.sub("truncated-dims", |store, cfg| {
        let mut items = Vec::new();
        for sh in all_shapes(cfg.max_l).into_iter().filter(|s| s.l() > 0) {
            let rep = store.get(sh.n(), sh.l(), 3)?;
            let m = truncated_g(&rep, &sh)?;
            let formula = binom(sh.a + sh.b, sh.a) * binom(sh.a + sh.c + sh.d, sh.d) * factorial(sh.b + sh.d);
            items.push((format!("{sh}"), m.dim() as u64 == formula && truncated_dimension(&sh) == formula));
        }
        Ok(tally(items))
    })?;
    ctx.sub("binomial-identity", |_, _| {
        let mut items = Vec::new();
        for a in 0..=4 {
            for b in 0..=4 {
                for c in 0..=4 {
                    for d in 0..=4 {
                        let (lhs, rhs) = combinatorial_identity_sides(&TwoBlockShape::new(a, b, c, d));
                        items.push((format!("{a},{b},{c},{d}"), lhs == rhs));
                    }
                }
            }
        }
        Ok(tally(items))
    })
}

fn binom(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

const CLASSIFICATION_PAIRS: [(usize, usize); 4] = [(2, 1), (1, 2), (2, 2), (3, 1)];

fn c8(ctx: &mut Ctx) -> Result<()> {
    ctx.sub("y-indecomposable", |store, _| {
        let mut items = Vec::new();
        for (r, s) in CLASSIFICATION_PAIRS {
            for n in 0..=r + s {
                for y in y_modules(store, n, r, s, 3)? {
                    let ok = indecomposability_certificate(&y.module)? && y.module.is_partial_stable();
                    items.push((format!("({r},{s}) {}", y.shape), ok));
                }
            }
        }
        Ok(tally(items))
    })?;
    ctx.sub("double-construction", |store, _| {
        let mut items = Vec::new();
        for (r, s) in CLASSIFICATION_PAIRS {
            for n in 0..=r + s {
                for sh in two_block_shapes(n, r, s).into_iter().filter(|sh| sh.b == sh.c) {
                    items.push((format!("({r},{s}) {sh}"), double_construction_check(store, &sh, 3)?.is_some()));
                }
            }
        }
        Ok(tally(items))
    })
}

fn c9(ctx: &mut Ctx) -> Result<()> {
    ctx.sub("induced-truncation", |store, cfg| {
        let mut items = Vec::new();
        for sh in all_shapes(cfg.max_l).into_iter().filter(|s| s.l() > 0) {
            for p in [3, 5] {
                items.push((format!("{sh} p={p}"), induced_truncation_matches(store, &sh, p)?));
            }
        }
        Ok(tally(items))
    })?;
    ctx.sub("phi", |store, cfg| {
        let mut items = Vec::new();
        for a in 0..=cfg.max_l {
            for b in 0..=cfg.max_l - a {
                for rest in 0..=cfg.max_l - a - b {
                    if a + b + rest == 0 {
                        continue;
                    }
                    for p in [3, 5] {
                        let rep = phi_check(store, a, b, rest, p)?;
                        items.push((format!("a={a} b={b} rest={rest} p={p}"), rep.holds()));
                    }
                }
            }
        }
        Ok(tally(items))
    })
}

const EF_PAIRS: [(usize, usize); 6] = [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (1, 3)];

/// The shape obtained by moving one box, if it exists.
fn moved(sh: &TwoBlockShape, da: i64, db: i64, dc: i64, dd: i64) -> Option<TwoBlockShape> {
    let f = |x: usize, dx: i64| usize::try_from(x as i64 + dx).ok();
    Some(TwoBlockShape::new(f(sh.a, da)?, f(sh.b, db)?, f(sh.c, dc)?, f(sh.d, dd)?))
}

/// Checks one decomposition against the case analysis: a forced term, an optional free
/// term in `N[q, q^-1]`, nothing else.
fn ef_case_holds(
    dec: &std::collections::BTreeMap<TwoBlockShape, LaurentPoly>,
    forced: Option<(TwoBlockShape, LaurentPoly)>,
    free: Option<TwoBlockShape>,
) -> bool {
    let forced_ok = match &forced {
        Some((mu, m)) => dec.get(mu) == Some(m),
        None => true,
    };
    let others_ok = dec.iter().all(|(mu, m)| {
        let is_forced = forced.as_ref().is_some_and(|(f, _)| f == mu);
        let is_free = free.as_ref() == Some(mu);
        (is_forced || is_free) && m.has_nonneg_coeffs()
    });
    forced_ok && others_ok
}

fn c10(ctx: &mut Ctx) -> Result<()> {
    ctx.sub("ef-forced", |store, _| {
        let mut items = Vec::new();
        let p = 3;
        for (r, s) in EF_PAIRS {
            let tables: Vec<HomTable> =
                (0..=r + s).map(|n| HomTable::new(y_modules(store, n, r, s, p)?)).collect::<Result<_>>()?;
            for n in 0..=r + s {
                for sh in two_block_shapes(n, r, s) {
                    let (a, d) = (sh.a as i64, sh.d as i64);
                    let e_forced = moved(&sh, 1, -1, 0, 0).map(|mu| (mu, quantum_int(a + 1)));
                    let f_forced = moved(&sh, 0, 0, -1, 1).map(|mu| (mu, quantum_int(d + 1)));
                    let e_free = (sh.b <= sh.c).then(|| moved(&sh, 0, 0, 1, -1)).flatten();
                    let f_free = (sh.b >= sh.c).then(|| moved(&sh, -1, 1, 0, 0)).flatten();
                    let e = if n > 0 {
                        let dec = ef_char_decomposition(store, r, s, &sh, Generator::E, p, Some(&tables[n - 1]))?;
                        ef_case_holds(&dec, e_forced, e_free)
                    } else {
                        true
                    };
                    let f = if n < r + s {
                        let dec = ef_char_decomposition(store, r, s, &sh, Generator::F, p, Some(&tables[n + 1]))?;
                        ef_case_holds(&dec, f_forced, f_free)
                    } else {
                        true
                    };
                    items.push((format!("({r},{s}) {sh}"), e && f));
                }
            }
        }
        Ok(tally(items))
    })?;
    ctx.sub("multiplicity-filtration", |store, _| {
        let mut items = Vec::new();
        for (r, s) in EF_PAIRS {
            for n in 0..=r + s {
                let table = HomTable::new(y_modules(store, n, r, s, 3)?)?;
                for sh in two_block_shapes(n, r, s).into_iter().filter(|sh| sh.b >= sh.c) {
                    let rep = multiplicity_filtration_check(store, &sh, 3, &table)?;
                    items.push((format!("({r},{s}) {sh}"), rep.holds));
                }
            }
        }
        Ok(tally(items))
    })
}

fn c11(ctx: &mut Ctx) -> Result<()> {
    ctx.sub("centralizer", |store, _| {
        let mut items = Vec::new();
        for (r, s) in [(2, 1), (1, 2)] {
            for n in 0..=3 {
                let dc = double_centralizer_check(store, n, r, s, 3)?;
                items.push((format!("({r},{s}) n={n} dim={}", dc.algebra_dim), dc.holds()));
            }
        }
        Ok(tally(items))
    })
}

fn c12(ctx: &mut Ctx) -> Result<()> {
    ctx.sub("basic-positive", |store, _| {
        let mut items = Vec::new();
        for (r, s) in EF_PAIRS {
            for n in 0..=r + s {
                let (_, alg) = basic_two_tensor(store, n, r, s, 3)?;
                items.push((format!("({r},{s}) n={n}"), alg.is_positive() && alg.dp_zero()));
            }
        }
        Ok(tally(items))
    })?;
    ctx.sub("a3-truncations", |store, _| {
        let one = a3_truncation_comparison(store, 1, 3)?;
        let two = a3_truncation_comparison(store, 2, 3)?;
        let ok = one.holds() && two.holds() && one.vertices == [2, 3] && two.vertices == [1, 3];
        Ok((ok, json!({ "n1": one, "n2": two })))
    })?;
    ctx.sub("standard-modules", |store, _| {
        let mut dims = Vec::new();
        let mut projective = Vec::new();
        for n in [1, 2] {
            let (_, alg) = basic_two_tensor(store, n, 2, 1, 3)?;
            let sm: Vec<_> = (0..alg.labels.len()).map(|i| standard_module(&alg, i)).collect();
            dims.push(sm.iter().map(|m| m.dim()).collect::<Vec<_>>());
            projective.push(sm.iter().map(|m| m.projective_dim).collect::<Vec<_>>());
        }
        let ok = dims == [vec![4, 1], vec![2, 2]] && projective[1][1] == 4;
        Ok((ok, json!({ "delta_dims": dims, "projective_dims": projective })))
    })
}

fn c13(ctx: &mut Ctx) -> Result<()> {
    ctx.sub("decat-compare", |store, _| {
        let mut items = Vec::new();
        for (r, s) in [(2, 1), (1, 2), (2, 2)] {
            for p in [3, 5] {
                let rep = decat_compare(store, r, s, p)?;
                items.push((format!("({r},{s}) p={p}"), rep.holds()));
            }
        }
        Ok(tally(items))
    })?;
    ctx.sub("canonical-constructions", |_, _| {
        let mut items = Vec::new();
        for (r, s) in [(2, 1), (1, 2), (2, 2)] {
            for b in 0..=r {
                for d in 0..=s {
                    let ok = canonical_closed(r, s, b, d)? == canonical_via_divided_powers(r, s, b, d)?;
                    items.push((format!("({r},{s}) b={b} d={d}"), ok));
                }
            }
        }
        Ok(tally(items))
    })
}
