//! One function per subcommand. Each returns its report and whether every
//! checked invariant held. Indices are printed 1-based.

use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;

use zpdehn_core::anomalous::{
    anomaly_verdict, containment_cascade, continuation_check, product_anomaly_classify,
    AnomalousError, CascadeOutcome, SubgroupSpec,
};
use zpdehn_core::cusplemmas::{
    classify_block, constrained_pair_sweep, dehn_pair_verdict, exhaustive_lemma_sweep,
    tau_block_rank, CuspBlock, CuspLemmaError, TauMode,
};
use zpdehn_core::exactalg::IntMatrix;
use zpdehn_core::heights::{northcott_enumerate, weil_height, AlgebraicNumber, ZPoly};
use zpdehn_core::lattice::{find_multiplicative_relation, siegel_basis, SiegelCalibration};
use zpdehn_core::nzdehn::mp::solve_filling_mp;
use zpdehn_core::nzdehn::{
    cosmetic_scan, difference_collapse_check, read_manifold, sgi_check, solve_filling_with,
    synth_potential, Branch, FillingCoefficient, NZPotential, SolveOptions, SynthConfig,
};

use crate::parse;
use crate::report::{Report, DEFAULT_TRUNCATION};
use crate::{BranchArg, Lemma, Mode, PotentialSource};

type Outcome = Result<(Report, bool)>;

fn tau_mode(m: Mode) -> TauMode {
    match m {
        Mode::OneTau => TauMode::OneTau,
        Mode::TwoTau => TauMode::TwoTau,
    }
}

fn cplx(z: Complex64) -> String {
    format!("{:.15e}{:+.15e}i", z.re + 0.0, z.im + 0.0)
}

/// Key-value results: a `key: value` text line and a csv row.
fn key_values(command: &'static str) -> Report {
    let mut r = Report::new(command);
    r.columns(&["key", "value"]);
    r
}

fn kv(r: &mut Report, key: &str, value: impl ToString) {
    let v = value.to_string();
    r.line(format!("{key}: {v}"));
    r.row(vec![key.to_string(), v]);
}

fn integer_matrix(rows: &[Vec<i64>]) -> Result<IntMatrix> {
    let cols = rows.first().map(Vec::len).context("no rows given")?;
    Ok(IntMatrix::from_rows(cols, rows))
}

pub fn lemma_sweep(
    lemma: Lemma,
    bound: Option<u32>,
    mode: Mode,
    seed: Option<u64>,
    samples: u64,
) -> Outcome {
    let mut r = key_values("lemma-sweep");
    match lemma {
        Lemma::BlockClassify => {
            let bound = bound.unwrap_or(2);
            r.param("lemma", "block-classify")
                .param("mode", tau_mode(mode))
                .param("bound", bound);
            let s = exhaustive_lemma_sweep(bound, tau_mode(mode))?;
            for (k, v) in [
                ("blocks", s.candidates),
                ("rank two", s.rank_two),
                ("proportional", s.proportional),
                ("left-only", s.left_only),
                ("right-only", s.right_only),
                ("no form", s.no_form),
                ("violations", s.violations),
            ] {
                kv(&mut r, k, v);
            }
            for e in &s.examples {
                kv(&mut r, "counterexample", format!("{e:?}"));
            }
            Ok((r, s.violations == 0))
        }
        Lemma::PairConstraint => {
            let Some(seed) = seed else {
                bail!("--seed is required for the pair-constraint sweep")
            };
            let bound = bound.unwrap_or(8);
            r.param("lemma", "pair-constraint")
                .param("bound", bound)
                .param("seed", seed)
                .param("samples", samples);
            let s = constrained_pair_sweep(seed, samples, bound as i64)?;
            for (k, v) in [
                ("pair combinations", s.combinations),
                ("samples", s.samples),
                ("rank two", s.rank_two),
                ("one-shape rank one", s.one_tau_rank_one),
                ("same pair", s.same_pair),
                ("negated pair", s.negated_pair),
                ("two-shape checked", s.two_tau_checked),
                ("violations", s.violations),
            ] {
                kv(&mut r, k, v);
            }
            for e in &s.examples {
                kv(&mut r, "counterexample", e);
            }
            Ok((r, s.violations == 0))
        }
    }
}

pub fn classify(
    rows: &str,
    cusps: Option<usize>,
    copies: usize,
    mode: Option<Mode>,
    coeff: Option<&str>,
) -> Outcome {
    let rows = parse::rows(rows)?;
    let mut r = key_values("classify");
    if let Some(mode) = mode {
        r.param("mode", tau_mode(mode));
        let block = CuspBlock::from_matrix(integer_matrix(&rows)?, tau_mode(mode))?;
        kv(&mut r, "rank", block.rank_q());
        kv(&mut r, "shape rank", tau_block_rank(&block));
        kv(&mut r, "form", classify_block(&block)?);
        if let Some(c) = coeff {
            let c = FillingCoefficient::parse(c)?;
            let [a, b] = c.slopes.as_slice() else {
                bail!("a block takes two slopes p/q,p'/q'")
            };
            match dehn_pair_verdict(&block, (a.p, a.q), (b.p, b.q)) {
                Ok(v) => kv(&mut r, "pair verdict", format!("{v:?}")),
                Err(CuspLemmaError::LemmaViolation(m)) => {
                    kv(&mut r, "violation", &m);
                    return Ok((r, false));
                }
                Err(e) => return Err(e.into()),
            }
        }
        return Ok((r, true));
    }
    let Some(n) = cusps else {
        bail!("--cusps is required unless --mode is given")
    };
    r.param("cusps", n).param("copies", copies);
    let spec = SubgroupSpec::from_rows(n, copies, &rows)?;
    kv(&mut r, "verdict", anomaly_verdict(&spec));
    if let Some(c) = coeff {
        let c = FillingCoefficient::parse(c)?;
        let s: Vec<(i64, i64)> = c.slopes.iter().map(|s| (s.p, s.q)).collect();
        let [p1, p2, q1, q2] = s.as_slice() else {
            bail!("a product spec takes four slopes p1/q1,p2/q2,p1'/q1',p2'/q2'")
        };
        match product_anomaly_classify(&spec, [*p1, *p2], [*q1, *q2]) {
            Ok((wiring, class)) => {
                kv(&mut r, "wiring", format!("{wiring:?}"));
                kv(&mut r, "class", format!("{class:?}"));
            }
            Err(AnomalousError::NotAnomalous) => kv(&mut r, "class", "Isolated"),
            Err(AnomalousError::Lemma(CuspLemmaError::LemmaViolation(m))) => {
                kv(&mut r, "violation", &m);
                return Ok((r, false));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((r, true))
}

fn load(source: &PotentialSource, seed: u64, r: &mut Report) -> Result<NZPotential> {
    if let Some(p) = &source.manifold {
        r.param("manifold", p.display());
        return Ok(read_manifold(p)?);
    }
    let n = source
        .synthetic
        .context("--manifold or --synthetic is required")?;
    r.param("synthetic", n).param("seed", seed);
    Ok(synth_potential(
        seed,
        n,
        DEFAULT_TRUNCATION,
        &SynthConfig::default(),
    )?)
}

pub fn cascade(
    rows: &str,
    cusps: usize,
    manifold: Option<&Path>,
    seed: u64,
    samples: usize,
) -> Outcome {
    let rows = parse::rows(rows)?;
    let mut r = key_values("cascade");
    r.param("cusps", cusps).param("samples", samples);
    let spec = SubgroupSpec::from_rows(cusps, 1, &rows)?;
    kv(&mut r, "verdict", anomaly_verdict(&spec));
    let outcome = match containment_cascade(&spec) {
        Ok(o) => o,
        Err(AnomalousError::CascadeExhausted(m)) => {
            kv(&mut r, "violation", format!("cascade exhausted: {m}"));
            return Ok((r, false));
        }
        Err(e) => return Err(e.into()),
    };
    kv(&mut r, "outcome", outcome);
    if outcome == CascadeOutcome::Isolated {
        return Ok((r, true));
    }
    let source = PotentialSource {
        manifold: manifold.map(Path::to_path_buf),
        synthetic: Some(cusps),
    };
    let pot = load(&source, seed, &mut r)?;
    let rep = continuation_check(&spec, &pot, outcome, samples, seed)?;
    kv(&mut r, "kernel dimension", rep.kernel_dim);
    kv(&mut r, "continuation worst", format!("{:e}", rep.worst));
    kv(
        &mut r,
        "continuation min norm",
        format!("{:e}", rep.min_norm),
    );
    kv(
        &mut r,
        "continuation",
        if rep.holds { "holds" } else { "fails" },
    );
    Ok((r, rep.holds))
}

fn describe(a: &AlgebraicNumber) -> String {
    match a.as_rational() {
        Some(_) => a.to_string(),
        None => format!("root {} of {}", a.root_index() + 1, a.minpoly()),
    }
}

pub fn height(poly: &str, root: usize, power: Option<i32>, precision: u32) -> Outcome {
    if root == 0 {
        bail!("--root is 1-based");
    }
    let mut r = key_values("height");
    r.param("poly", poly)
        .param("root", root)
        .param("precision", precision);
    let mut a = AlgebraicNumber::new(ZPoly::from_i64(&parse::poly(poly)?), root - 1, precision)?;
    if let Some(n) = power {
        r.param("power", n);
        a = a.pow(n)?;
    }
    let h = weil_height(&a)?;
    kv(&mut r, "number", describe(&a));
    kv(&mut r, "degree", a.degree());
    kv(&mut r, "value", cplx(a.to_c64()?));
    kv(&mut r, "height", format!("{:.17e}", h.value));
    kv(&mut r, "error bound", format!("{:e}", h.error_bound));
    Ok((r, true))
}

pub fn northcott(max_height: f64, degree: usize) -> Outcome {
    let mut r = Report::new("northcott");
    r.param("max-height", max_height).param("degree", degree);
    r.columns(&["minpoly", "root", "re", "im", "height"]);
    let all = northcott_enumerate(max_height, degree)?;
    r.line(format!("count: {}", all.len()));
    for a in &all {
        let z = a.to_c64()?;
        let h = weil_height(a)?;
        r.line(format!("{}  {}  h = {:.12}", describe(a), cplx(z), h.value));
        r.row(vec![
            a.minpoly().to_string(),
            (a.root_index() + 1).to_string(),
            format!("{:.15e}", z.re + 0.0),
            format!("{:.15e}", z.im + 0.0),
            format!("{:.15e}", h.value),
        ]);
    }
    Ok((r, true))
}

pub fn siegel(
    forms: Option<&str>,
    calibrate: bool,
    seed: u64,
    count: usize,
    entry_bound: i64,
) -> Outcome {
    let mut r = key_values("siegel");
    let committed = SiegelCalibration::committed();
    if calibrate {
        r.param("seed", seed)
            .param("count", count)
            .param("entry-bound", entry_bound);
        let c = SiegelCalibration::measure(seed, count, entry_bound)?;
        kv(&mut r, "max ratio", c.max_ratio);
        kv(&mut r, "mean ratio", c.mean_ratio);
        kv(&mut r, "threshold", c.threshold);
        kv(&mut r, "lll bound", c.lll_bound);
        kv(&mut r, "json", serde_json::to_string(&c)?);
        return Ok((r, c.max_ratio <= c.lll_bound));
    }
    let rows = parse::rows(forms.context("--forms is required")?)?;
    let m = integer_matrix(&rows)?;
    let (basis, ratio) = siegel_basis(&m)?;
    for (v, n) in basis.vectors.iter().zip(&basis.norms) {
        let s: Vec<String> = v.iter().map(ToString::to_string).collect();
        kv(&mut r, "vector", format!("({}) |b| = {n:.6}", s.join(", ")));
    }
    let exact = basis
        .vectors
        .iter()
        .all(|v| m.apply(v).iter().all(num_traits::Zero::is_zero));
    kv(&mut r, "ratio", format!("{ratio:.6}"));
    kv(&mut r, "calibrated threshold", committed.threshold);
    Ok((r, exact))
}

pub fn multrel(numbers: &str, bound: u64, precision: u32) -> Outcome {
    let mut r = key_values("multrel");
    r.param("bound", bound).param("precision", precision);
    let nums = parse::complex_list(numbers, precision)?;
    match find_multiplicative_relation(&nums, bound)? {
        Some(rel) => {
            let e: Vec<String> = rel.exponents.iter().map(ToString::to_string).collect();
            kv(&mut r, "relation", e.join(" "));
            kv(&mut r, "residual", format!("{:e}", rel.residual));
        }
        None => kv(&mut r, "relation", "none"),
    }
    Ok((r, true))
}

pub fn fill(
    source: &PotentialSource,
    seed: u64,
    coeff: &str,
    branch: BranchArg,
    precision: u32,
) -> Outcome {
    let mut r = Report::new("fill");
    let pot = load(source, seed, &mut r)?;
    let branch = match branch {
        BranchArg::Plus => Branch::Plus,
        BranchArg::Minus => Branch::Minus,
    };
    r.param("coeff", coeff)
        .param("branch", format!("{branch:?}").to_lowercase())
        .param("precision", precision);
    r.columns(&["cusp", "slope", "u", "v", "t", "t_mp"]);
    let c = FillingCoefficient::parse(coeff)?;
    let sol = solve_filling_with(
        &pot,
        &c,
        &SolveOptions {
            branch,
            ..SolveOptions::default()
        },
    )?;
    let mp = solve_filling_mp(&pot, &c, branch, precision)?;
    let digits = (precision as f64 * std::f64::consts::LOG10_2) as usize - 2;
    for (i, s) in c.slopes.iter().enumerate() {
        let t_mp = mp.t[i].to_string_radix(10, Some(digits));
        r.line(format!("cusp {} slope {s}", i + 1));
        r.line(format!("  u = {}", cplx(sol.u[i])));
        r.line(format!("  v = {}", cplx(sol.v[i])));
        r.line(format!("  t = {}", cplx(sol.t[i])));
        r.line(format!("  t ({precision} bits) = {t_mp}"));
        r.row(vec![
            (i + 1).to_string(),
            s.to_string(),
            cplx(sol.u[i]),
            cplx(sol.v[i]),
            cplx(sol.t[i]),
            t_mp,
        ]);
    }
    r.line(format!("residual: {:e}", sol.residual));
    r.line(format!("newton iterations: {}", sol.newton_iters));
    Ok((r, true))
}

pub fn scan(source: &PotentialSource, seed: u64, bound: u64, tol: f64) -> Outcome {
    let mut r = Report::new("scan");
    let pot = load(source, seed, &mut r)?;
    r.param("bound", bound).param("tol", format!("{tol:e}"));
    r.columns(&["a", "b", "distance", "confirmed"]);
    let rep = cosmetic_scan(&pot, bound, tol)?;
    let nontrivial: Vec<_> = rep.nontrivial().collect();
    r.line(format!("fillings: {}", rep.fillings));
    r.line(format!(
        "candidates: {}",
        rep.collisions.iter().filter(|c| !c.trivial).count()
    ));
    r.line(format!("nontrivial collisions: {}", nontrivial.len()));
    for c in nontrivial {
        r.line(format!("  {} ~ {}  distance {:e}", c.a, c.b, c.distance));
        r.row(vec![
            c.a.to_string(),
            c.b.to_string(),
            format!("{:e}", c.distance),
            c.confirmed.to_string(),
        ]);
    }
    Ok((r, true))
}

pub fn sgi(source: &PotentialSource, seed: u64) -> Outcome {
    let mut r = key_values("sgi");
    let pot = load(source, seed, &mut r)?;
    kv(&mut r, "separated", sgi_check(&pot)?);
    kv(
        &mut r,
        "difference collapse",
        difference_collapse_check(&pot)?,
    );
    Ok((r, true))
}
