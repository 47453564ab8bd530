//! Command-line front end. Reports go to `out` (JSON or text), diagnostics to `err`.
//! Exit status: 0 success, 1 failed check or internal error, 2 usage error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cache::{DiskCache, RepStore};
use crate::catsl2::{functor_decomposition, Generator};
use crate::coeff::LaurentPoly;
use crate::combinatorics::{Multipartition, TwoBlockShape};
use crate::decat::{canonical_basis, decat_compare, LMatrix};
use crate::error::{Error, Result};
use crate::homs::{algebra_summary, schur_algebra, two_tensor_schur, GradedAlgebra};
use crate::modules::{g_module, specht, truncated_g, Module};
use crate::nilhecke::{cellular_basis, expected_dimension, trace_functional};
use crate::suite::{criteria, run_suite, SuiteConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "nilcat", version, about = "Exact computations with p-DG cyclotomic nilHecke algebras")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Cache directory; defaults to $NILCAT_CACHE_DIR, then the user cache directory.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Build everything in memory without touching the disk cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads for independent checks.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// More diagnostics on stderr (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    /// No diagnostics on stderr.
    #[arg(short, long, global = true)]
    pub quiet: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Op {
    E,
    F,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Graded basis and character of G(lambda), its truncation, or a Specht module.
    Basis {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        p: u32,
        /// Multipartition as comma-separated 0/1 entries.
        #[arg(long)]
        lambda: String,
        /// The truncation e_lambda G(lambda) of a two-block shape.
        #[arg(long, conflicts_with = "specht")]
        truncated: bool,
        /// Size of the first block; by default the shape is read off the runs of lambda.
        #[arg(long, requires = "truncated")]
        r: Option<usize>,
        /// The Specht module S^lambda instead of G(lambda).
        #[arg(long)]
        specht: bool,
    },
    /// Summary of NH_n^l: dimension, graded dimension, relations and p-DG checks.
    Algebra {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        p: u32,
        /// Also list the basis labels with degrees.
        #[arg(long)]
        basis: bool,
    },
    /// Quiver Schur algebra S_n(l), or S_n(r,s) when --r and --s are given.
    Schur {
        #[arg(long)]
        n: usize,
        #[arg(long, required_unless_present_all = ["r", "s"])]
        l: Option<usize>,
        #[arg(long, requires = "s")]
        r: Option<usize>,
        #[arg(long, requires = "r")]
        s: Option<usize>,
        #[arg(long)]
        p: u32,
    },
    /// E^(a) or F^(a) applied to Y(lambda), decomposed over the Y(mu).
    Functor {
        #[arg(long, value_enum, ignore_case = true)]
        op: Op,
        #[arg(long, default_value_t = 1)]
        power: usize,
        /// Two-block shape a,b,c,d.
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        p: u32,
    },
    /// Canonical basis of V_r (x) V_s with the E and F matrices in it.
    Canonical {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
    },
    /// Per-weight comparison of the categorical and canonical-basis actions.
    Compare {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        p: u32,
    },
    /// Run the acceptance suite.
    Verify {
        /// Criterion ids, numbers or sub-check ids to run (repeatable or comma-separated).
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        #[arg(long, default_value_t = 4)]
        max_l: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [2u32, 3, 5])]
        primes: Vec<u32>,
        /// Omit wall-clock timings so the report is byte-for-byte reproducible.
        #[arg(long)]
        no_timings: bool,
        /// List the criteria and their sub-check ids without running anything.
        #[arg(long)]
        list: bool,
    },
    /// Inspect or maintain the on-disk cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum CacheAction {
    /// Directory in use.
    Path,
    /// Manifest entries.
    List,
    /// Re-check every blob against its checksum.
    Verify,
    /// Remove every blob and the manifest.
    Clear,
    /// Build and store every NH_n^l on a grid.
    Warm {
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        #[arg(long, default_value_t = 4)]
        max_l: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [2u32, 3, 5])]
        primes: Vec<u32>,
    },
}

/// A command's result in both output formats.
struct Report {
    command: &'static str,
    body: Value,
    text: String,
    /// Exit status 1 without an error (a check ran and failed).
    failed: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let g = &cli.global;
    let result = open_store(g, err).and_then(|store| dispatch(&cli.command, g, &store, err));
    match result {
        Ok(report) => {
            let written = match g.format {
                Format::Json => {
                    let mut doc = json!({ "schema": SCHEMA_VERSION, "command": report.command });
                    if let (Value::Object(d), Value::Object(b)) = (&mut doc, report.body) {
                        d.extend(b);
                    }
                    serde_json::to_string_pretty(&doc).map(|s| s + "\n").unwrap_or_default()
                }
                Format::Text => report.text,
            };
            if out.write_all(written.as_bytes()).is_err() {
                return 1;
            }
            i32::from(report.failed)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Param(_) => 2,
                _ => 1,
            }
        }
    }
}

fn open_store(g: &GlobalOpts, err: &mut dyn Write) -> Result<RepStore> {
    if g.no_cache {
        return Ok(RepStore::in_memory());
    }
    let Some(dir) = g.cache_dir.clone().or_else(DiskCache::default_dir) else {
        return Ok(RepStore::in_memory());
    };
    match DiskCache::open(&dir) {
        Ok(disk) => {
            if g.verbose > 0 && !g.quiet {
                let _ = writeln!(err, "cache: {}", dir.display());
            }
            Ok(RepStore::with_disk(disk))
        }
        Err(e) => {
            if !g.quiet {
                let _ = writeln!(err, "warning: cache disabled ({}): {e}", dir.display());
            }
            Ok(RepStore::in_memory())
        }
    }
}

fn dispatch(cmd: &Command, g: &GlobalOpts, store: &RepStore, err: &mut dyn Write) -> Result<Report> {
    match cmd {
        Command::Basis { n, l, p, lambda, truncated, r, specht } => {
            cmd_basis(store, *n, *l, *p, lambda, *truncated, *r, *specht)
        }
        Command::Algebra { n, l, p, basis } => cmd_algebra(store, *n, *l, *p, *basis),
        Command::Schur { n, l, r, s, p } => cmd_schur(store, *n, *l, *r, *s, *p),
        Command::Functor { op, power, lambda, r, s, p } => cmd_functor(store, *op, *power, lambda, *r, *s, *p),
        Command::Canonical { r, s } => cmd_canonical(*r, *s),
        Command::Compare { r, s, p } => cmd_compare(store, *r, *s, *p),
        Command::Verify { only, max_n, max_l, primes, no_timings, list } => {
            if *list {
                return Ok(cmd_verify_list());
            }
            let cfg = SuiteConfig { max_n: *max_n, max_l: *max_l, primes: primes.clone(), jobs: g.jobs, only: only.clone() };
            cmd_verify(store, &cfg, !no_timings, g, err)
        }
        Command::Cache { action } => cmd_cache(store, action, err, g),
    }
}

fn check_prime(p: u32) -> Result<()> {
    let prime = p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
    if prime {
        Ok(())
    } else {
        Err(Error::Param(format!("p = {p} is not a prime")))
    }
}

fn check_size(n: usize, l: usize) -> Result<()> {
    if n > l {
        return Err(Error::Param(format!("n = {n} exceeds l = {l}")));
    }
    if l == 0 {
        return Err(Error::Param("l must be positive".into()));
    }
    Ok(())
}

fn parse_shape(s: &str) -> Result<TwoBlockShape> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Param(format!("bad shape entry {t:?} in {s:?}"))))
        .collect::<Result<_>>()?;
    match parts[..] {
        [a, b, c, d] => Ok(TwoBlockShape::new(a, b, c, d)),
        _ => Err(Error::Param(format!("shape {s:?} needs four entries a,b,c,d"))),
    }
}

/// Reads `0^a 1^b 0^c 1^d` off the runs of `mu`, taking `r = a + b`.
fn shape_from_runs(mu: &Multipartition) -> Option<TwoBlockShape> {
    let e = mu.entries();
    let run = |from: usize, v: u8| e[from..].iter().take_while(|&&x| x == v).count();
    let a = run(0, 0);
    let b = run(a, 1);
    let c = run(a + b, 0);
    let d = run(a + b + c, 1);
    (a + b + c + d == e.len()).then(|| TwoBlockShape::new(a, b, c, d))
}

fn poly_text(p: &LaurentPoly) -> String {
    p.to_string()
}

fn module_text(m: &Module, out: &mut String) {
    let _ = writeln!(out, "{}  (dim {}, shift {}, acting rank {})", m.label, m.dim(), m.shift, m.acting);
    let _ = writeln!(out, "char: {}", poly_text(&m.graded_char()));
    let doc = m.to_json();
    for b in doc["graded_basis"].as_array().into_iter().flatten() {
        let terms: Vec<String> = b["element"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|t| match t[0].as_i64() {
                Some(1) => t[1].as_str().unwrap_or("").to_string(),
                Some(c) => format!("{c}*{}", t[1].as_str().unwrap_or("")),
                None => t.to_string(),
            })
            .collect();
        let _ = writeln!(out, "  [{}] {}", b["degree"], terms.join(" + "));
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_basis(
    store: &RepStore,
    n: usize,
    l: usize,
    p: u32,
    lambda: &str,
    truncated: bool,
    r: Option<usize>,
    as_specht: bool,
) -> Result<Report> {
    check_prime(p)?;
    check_size(n, l)?;
    let mu: Multipartition = lambda.parse()?;
    if mu.l() != l || mu.n() != n {
        return Err(Error::Param(format!("lambda = {mu} is not in P_{n}^{l}")));
    }
    let rep = store.get(n, l, p)?;
    let (m, kind) = if truncated {
        let shape = match r {
            Some(r) => TwoBlockShape::from_multipartition(&mu, r),
            None => shape_from_runs(&mu),
        }
        .ok_or_else(|| Error::Param(format!("lambda = {mu} is not a two-block shape")))?;
        (truncated_g(&rep, &shape)?, "truncated")
    } else if as_specht {
        let cells = cellular_basis(&rep)?;
        (specht(&rep, &cells, &mu)?, "specht")
    } else {
        (g_module(&rep, &mu)?, "g")
    };
    let mut body = m.to_json();
    body["kind"] = json!(kind);
    body["params"] = json!({ "n": n, "l": l, "p": p, "lambda": mu.to_string() });
    let mut text = String::new();
    module_text(&m, &mut text);
    Ok(Report { command: "basis", body, text, failed: false })
}

fn cmd_algebra(store: &RepStore, n: usize, l: usize, p: u32, list_basis: bool) -> Result<Report> {
    check_prime(p)?;
    check_size(n, l)?;
    let rep = store.get(n, l, p)?;
    let graded = rep.degrees().iter().fold(LaurentPoly::zero(), |acc, &d| acc + LaurentPoly::monomial(1, d));
    let relations = rep.check_relations().is_ok();
    let dp_zero = rep.verify_dp_zero();
    let trace = trace_functional(&rep)?;
    let mut body = json!({
        "params": { "n": n, "l": l, "p": p },
        "dim": rep.dim(),
        "expected_dim": expected_dimension(n, l),
        "graded_dim": graded.to_json(),
        "relations": relations,
        "dp_zero": dp_zero,
        "trace": { "degree": trace.degree, "gram_rank": trace.gram_rank },
    });
    let mut text = format!(
        "NH_{n}^{l} over F_{p}\ndim: {} (expected {})\ngraded dim: {}\nrelations: {}\nd^p = 0: {}\ntrace degree: {} (gram rank {})\n",
        rep.dim(),
        expected_dimension(n, l),
        poly_text(&graded),
        relations,
        dp_zero,
        trace.degree,
        trace.gram_rank
    );
    if list_basis {
        let labels: Vec<Value> =
            rep.labels().iter().enumerate().map(|(k, b)| json!({ "label": b.to_string(), "degree": rep.degree(k) })).collect();
        for (k, b) in rep.labels().iter().enumerate() {
            let _ = writeln!(text, "  [{}] {b}", rep.degree(k));
        }
        body["basis"] = Value::Array(labels);
    }
    let failed = !(relations && dp_zero && rep.dim() == expected_dimension(n, l));
    Ok(Report { command: "algebra", body, text, failed })
}

fn algebra_text(title: &str, alg: &GradedAlgebra) -> String {
    let mut t = format!("{title}\ntotal dim: {}\ngraded dim: {}\n", alg.dim(), poly_text(&alg.graded_dim()));
    let _ = writeln!(t, "positive: {}\nd^p = 0: {}", alg.is_positive(), alg.dp_zero());
    for s in 0..alg.labels.len() {
        for u in 0..alg.labels.len() {
            let gd = alg.block_graded_dim(s, u);
            if !gd.is_zero() {
                let _ = writeln!(t, "  {} -> {}: {}", alg.labels[s], alg.labels[u], poly_text(&gd));
            }
        }
    }
    t
}

fn cmd_schur(store: &RepStore, n: usize, l: Option<usize>, r: Option<usize>, s: Option<usize>, p: u32) -> Result<Report> {
    check_prime(p)?;
    let (alg, params, title) = match (r, s) {
        (Some(r), Some(s)) => {
            if l.is_some_and(|l| l != r + s) {
                return Err(Error::Param("--l must equal r + s".into()));
            }
            check_size(n, r + s)?;
            let (_, alg) = two_tensor_schur(store, n, r, s, p)?;
            (alg, json!({ "n": n, "r": r, "s": s, "p": p }), format!("S_{n}({r},{s}) over F_{p}"))
        }
        _ => {
            let l = l.ok_or_else(|| Error::Param("either --l or both --r and --s are required".into()))?;
            check_size(n, l)?;
            let (_, alg) = schur_algebra(store, n, l, p)?;
            (alg, json!({ "n": n, "l": l, "p": p }), format!("S_{n}({l}) over F_{p}"))
        }
    };
    let mut body = algebra_summary(&alg);
    body["params"] = params;
    body["labels"] = json!(alg.labels);
    Ok(Report { command: "schur", text: algebra_text(&title, &alg), body, failed: false })
}

fn cmd_functor(store: &RepStore, op: Op, power: usize, lambda: &str, r: usize, s: usize, p: u32) -> Result<Report> {
    check_prime(p)?;
    let shape = parse_shape(lambda)?;
    let gen = match op {
        Op::E => Generator::E,
        Op::F => Generator::F,
    };
    let name = format!("{}^({power}) Y({})", if op == Op::E { "E" } else { "F" }, shape.multipartition());
    let params = json!({ "op": gen, "power": power, "lambda": shape.to_string(), "r": r, "s": s, "p": p });
    let Some((image, dec)) = functor_decomposition(store, r, s, &shape, gen, power, p, None)? else {
        let body = json!({ "params": params, "module": Value::Null, "decomposition": [] });
        return Ok(Report { command: "functor", body, text: format!("{name} = 0\n"), failed: false });
    };
    let terms: Vec<Value> = dec
        .iter()
        .map(|(mu, m)| json!({ "shape": mu.to_string(), "multipartition": mu.multipartition().to_string(), "multiplicity": m.to_json() }))
        .collect();
    let module = json!({
        "dim": image.dim(),
        "acting_rank": image.acting,
        "shift": image.shift,
        "char": image.graded_char().to_json(),
    });
    let mut text = format!("{name}: dim {}, char {}\n", image.dim(), poly_text(&image.graded_char()));
    for (mu, m) in &dec {
        let _ = writeln!(text, "  Y({}): {}", mu.multipartition(), poly_text(m));
    }
    let body = json!({ "params": params, "module": module, "decomposition": terms });
    Ok(Report { command: "functor", body, text, failed: false })
}

fn matrix_json(m: &LMatrix) -> Value {
    Value::Array(m.iter().map(|row| Value::Array(row.iter().map(LaurentPoly::to_json).collect())).collect())
}

fn matrix_text(name: &str, m: &LMatrix, out: &mut String) {
    let _ = writeln!(out, "{name}:");
    for (i, row) in m.iter().enumerate() {
        for (j, c) in row.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let _ = writeln!(out, "  [{i},{j}] {}", poly_text(c));
        }
    }
}

fn cmd_canonical(r: usize, s: usize) -> Result<Report> {
    let cb = canonical_basis(r, s)?;
    let labels: Vec<Value> = cb.labels.iter().map(|&(b, d)| json!({ "b": b, "d": d })).collect();
    let body = json!({
        "params": { "r": r, "s": s },
        "labels": labels,
        "transition": matrix_json(&cb.transition),
        "e": matrix_json(&cb.e),
        "f": matrix_json(&cb.f),
        "positive_unitriangular": cb.is_positive_unitriangular(),
    });
    let mut text = format!("canonical basis of V_{r} (x) V_{s}; columns ordered by (b, d): ");
    let _ = writeln!(text, "{}", cb.labels.iter().map(|(b, d)| format!("({b},{d})")).collect::<Vec<_>>().join(" "));
    matrix_text("transition", &cb.transition, &mut text);
    matrix_text("E", &cb.e, &mut text);
    matrix_text("F", &cb.f, &mut text);
    Ok(Report { command: "canonical", body, text, failed: !cb.is_positive_unitriangular() })
}

fn cmd_compare(store: &RepStore, r: usize, s: usize, p: u32) -> Result<Report> {
    check_prime(p)?;
    let rep = decat_compare(store, r, s, p)?;
    let mut text = format!("({r},{s}) at p = {p}: {}\n", if rep.holds() { "match" } else { "MISMATCH" });
    for w in &rep.weights {
        let _ = writeln!(
            text,
            "  n={} normalization={} E={} F={} O_p={}{}",
            w.n,
            w.normalization,
            w.e_match,
            w.f_match,
            w.op_match,
            w.mismatch.as_ref().map(|m| format!(" ({m})")).unwrap_or_default()
        );
    }
    let body = json!({ "params": { "r": r, "s": s, "p": p }, "holds": rep.holds(), "weights": rep.weights });
    Ok(Report { command: "compare", body, text, failed: !rep.holds() })
}

fn cmd_verify_list() -> Report {
    let list: Vec<Value> = criteria()
        .iter()
        .map(|c| json!({ "number": c.number, "id": c.id, "title": c.title, "budget_ms": c.budget.as_millis() as u64, "checks": c.subchecks }))
        .collect();
    let text = criteria()
        .iter()
        .map(|c| format!("{:>2} {:<22} {}\n", c.number, c.id, c.subchecks.join(", ")))
        .collect();
    Report { command: "verify", body: json!({ "criteria": list }), text, failed: false }
}

fn cmd_verify(store: &RepStore, cfg: &SuiteConfig, timings: bool, g: &GlobalOpts, err: &mut dyn Write) -> Result<Report> {
    for t in &cfg.only {
        let known = criteria()
            .iter()
            .any(|c| c.id == t || c.number.to_string() == *t || c.subchecks.contains(&t.as_str()));
        if !known {
            return Err(Error::Param(format!("--only {t:?} matches no criterion or check")));
        }
    }
    for &p in &cfg.primes {
        check_prime(p)?;
    }
    let results = run_suite(store, cfg, timings);
    let mut text = String::new();
    for r in &results {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        let time = r.elapsed_ms.map(|t| format!(" {t} ms")).unwrap_or_default();
        let line = format!("{verdict} {:>2} {}{time}", r.number, r.id);
        let _ = writeln!(text, "{line}");
        for c in &r.checks {
            let _ = writeln!(text, "     {} {}", if c.passed { "ok  " } else { "FAIL" }, c.id);
        }
        if let Some(e) = &r.error {
            let _ = writeln!(text, "     error: {e}");
        }
        if g.verbose > 0 && !g.quiet {
            let _ = writeln!(err, "{line}");
        }
    }
    let passed = results.iter().all(|r| r.passed);
    let _ = writeln!(text, "{}", if passed { "all criteria passed" } else { "some criteria FAILED" });
    let body = json!({ "config": cfg, "passed": passed, "criteria": results });
    Ok(Report { command: "verify", body, text, failed: !passed })
}

fn cmd_cache(store: &RepStore, action: &CacheAction, err: &mut dyn Write, g: &GlobalOpts) -> Result<Report> {
    let disk = store.disk().ok_or_else(|| Error::Param("no cache directory available".into()))?;
    let dir = disk.dir().display().to_string();
    Ok(match action {
        CacheAction::Path => {
            Report { command: "cache", body: json!({ "action": "path", "dir": dir }), text: format!("{dir}\n"), failed: false }
        }
        CacheAction::List => {
            let m = disk.manifest();
            let text = m
                .entries
                .iter()
                .map(|(k, e)| format!("{k}  dim {}  {} bytes  {}\n", e.dim, e.bytes, e.sha256))
                .collect();
            Report { command: "cache", body: json!({ "action": "list", "dir": dir, "manifest": m }), text, failed: false }
        }
        CacheAction::Verify => {
            let rep = disk.verify();
            let text = format!("{} valid, {} invalid\n", rep.valid.len(), rep.invalid.len())
                + &rep.invalid.iter().map(|k| format!("  invalid: {k}\n")).collect::<String>();
            let failed = !rep.invalid.is_empty();
            Report { command: "cache", body: json!({ "action": "verify", "report": rep }), text, failed }
        }
        CacheAction::Clear => {
            let removed = disk.clear()?;
            Report {
                command: "cache",
                body: json!({ "action": "clear", "dir": dir, "removed": removed }),
                text: format!("removed {removed} entries from {dir}\n"),
                failed: false,
            }
        }
        CacheAction::Warm { max_n, max_l, primes } => {
            let cfg = SuiteConfig { max_n: *max_n, max_l: *max_l, primes: primes.clone(), ..SuiteConfig::default() };
            let mut built = Vec::new();
            for (n, l) in cfg.sizes() {
                for &p in &cfg.primes {
                    check_prime(p)?;
                    store.get(n, l, p)?;
                    if g.verbose > 0 && !g.quiet {
                        let _ = writeln!(err, "built NH_{n}^{l} over F_{p}");
                    }
                    built.push(crate::cache::entry_key(n, l, p));
                }
            }
            let text = format!("{} entries in {dir}\n", built.len());
            Report { command: "cache", body: json!({ "action": "warm", "dir": dir, "entries": built }), text, failed: false }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["nilcat", "--no-cache"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn runs_are_parsed_into_shapes() {
        let mu: Multipartition = "0,1,1".parse().unwrap();
        assert_eq!(shape_from_runs(&mu), Some(TwoBlockShape::new(1, 2, 0, 0)));
        let mu: Multipartition = "0,1,0,1".parse().unwrap();
        assert_eq!(shape_from_runs(&mu), Some(TwoBlockShape::new(1, 1, 1, 1)));
        let mu: Multipartition = "1,0,1,0,1".parse().unwrap();
        assert_eq!(shape_from_runs(&mu), None);
    }

    #[test]
    fn prime_validation() {
        assert!(check_prime(2).is_ok());
        assert!(check_prime(7).is_ok());
        assert!(check_prime(1).is_err());
        assert!(check_prime(9).is_err());
    }

    #[test]
    fn trivial_basis_has_one_element() {
        let (code, out, _) = run_capture(&["basis", "--n", "0", "--l", "3", "--p", "3", "--lambda", "0,0,0"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["dim"], 1);
        assert_eq!(v["graded_basis"][0]["degree"], 0);
    }

    #[test]
    fn bad_prime_is_a_usage_error() {
        let (code, out, err) = run_capture(&["algebra", "--n", "1", "--l", "2", "--p", "4"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert!(err.contains("not a prime"));
    }

    #[test]
    fn text_mode_prints_laurent_polynomials() {
        let (code, out, _) = run_capture(&["--format", "text", "algebra", "--n", "1", "--l", "3", "--p", "3"]);
        assert_eq!(code, 0);
        assert!(out.contains("graded dim: q^4 + q^2 + 1"), "{out}");
    }
}
