use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{Command, LemmaMode, Oracle, RunConfig};
use super::output::Csv;
use super::CliError;
use crate::cross::{envelope_slice, member_cross, member_envelope, ClosedForm, CrossPoint, CrossSpec};
use crate::extend::{
    extend_nk, max_principle_check, sample_cross_point, sample_envelope_point, two_constants_bound,
    CrossFunction, ExtendOptions, HartogsExtension,
};
use crate::extremal::{h_closed_form, h_grid_solve};
use crate::geometry::{CPoint, Condenser, Grid};
use crate::lemma_lab::{lemma1_check, lemma2_certify, Lemma1Mode, CLOSED_FORM_TOL, GRID_TOL};

/// Report body, pass/fail verdict and optional CSV payload of one run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub passed: bool,
    pub report: Value,
    pub csv: Option<String>,
}

pub fn run(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    match cfg.command {
        Command::Extremal => extremal(cfg),
        Command::Cross => cross(cfg),
        Command::VerifyLemma1 => verify_lemma1(cfg),
        Command::VerifyLemma2 => verify_lemma2(cfg),
        Command::Extend => extend(cfg),
        Command::Selftest => selftest(cfg),
    }
}

fn first_factor(cfg: &RunConfig) -> Result<Condenser, CliError> {
    Ok(cfg.condensers()?.swap_remove(0))
}

fn extremal(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let c = first_factor(cfg)?;
    let g = Grid::covering(c.d().bbox(), cfg.nx, cfg.ny)?;
    let field = h_grid_solve(&c, &g)?;
    let tol = cfg.tol.unwrap_or(0.02);
    let mut sup_error = 0.0f64;
    let mut nodes = 0usize;
    let mut csv = Csv::new(&["re", "im", "h"]);
    for (_, p, v) in field.present() {
        sup_error = sup_error.max((v - h_closed_form(&c, p)?).abs());
        nodes += 1;
        csv.row(&[p.re, p.im, v]);
    }
    Ok(RunOutcome {
        passed: sup_error <= tol,
        report: json!({
            "grid": {"nx": cfg.nx, "ny": cfg.ny},
            "nodes": nodes,
            "iterations": field.iterations(),
            "residual": field.residual(),
            "sup_error": sup_error,
            "tol": tol,
        }),
        csv: Some(csv.into_string()),
    })
}

fn default_fixed(spec: &CrossSpec, free: usize) -> Vec<CPoint> {
    spec.factors()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != free)
        .map(|(_, c)| {
            let (center, r, big_r) = c.disc_radii().expect("config factors are discs");
            CPoint::new(center.re + 0.5 * (r + big_r), center.im)
        })
        .collect()
}

fn fixed_points(cfg: &RunConfig, spec: &CrossSpec) -> Vec<CPoint> {
    match &cfg.fixed {
        Some(f) => f.iter().map(|&[re, im]| CPoint::new(re, im)).collect(),
        None => default_fixed(spec, cfg.free),
    }
}

fn with_free(fixed: &[CPoint], free: usize, z: CPoint) -> CrossPoint {
    let mut v = fixed.to_vec();
    v.insert(free, z);
    CrossPoint(v)
}

fn cross(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let spec = cfg.spec()?;
    let fixed = fixed_points(cfg, &spec);
    let c = &spec.factors()[cfg.free];
    let g = Grid::covering(c.d().bbox(), cfg.nx, cfg.ny)?;
    let mask = envelope_slice(&spec, &ClosedForm, cfg.free, &fixed, &g)?;
    let mut csv = Csv::new(&["re", "im", "inside"]);
    let (mut in_domain, mut in_envelope, mut in_cross, mut violations) = (0usize, 0usize, 0usize, 0usize);
    for idx in 0..g.len() {
        let p = g.node_at(idx);
        let inside = mask.cells()[idx];
        csv.row(&[p.re, p.im, if inside { 1.0 } else { 0.0 }]);
        if !c.d().contains(p) {
            continue;
        }
        in_domain += 1;
        in_envelope += inside as usize;
        let crossed = member_cross(&with_free(&fixed, cfg.free, p), &spec)?;
        in_cross += crossed as usize;
        if crossed && !inside {
            violations += 1;
        }
    }
    Ok(RunOutcome {
        passed: violations == 0,
        report: json!({
            "n": spec.n(),
            "k": spec.k(),
            "free": cfg.free,
            "fixed": fixed,
            "grid": {"nx": cfg.nx, "ny": cfg.ny},
            "nodes_in_domain": in_domain,
            "inside_envelope": in_envelope,
            "inside_cross": in_cross,
            "nesting_violations": violations,
        }),
        csv: Some(csv.into_string()),
    })
}

fn verify_lemma1(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let c = first_factor(cfg)?;
    let (mode, default_tol) = match cfg.mode {
        LemmaMode::Closed => (
            Lemma1Mode::ClosedForm {
                samples: cfg.samples.unwrap_or(1000),
                seed: cfg.seed,
            },
            CLOSED_FORM_TOL,
        ),
        LemmaMode::Grid => (Lemma1Mode::Grid(Grid::covering(c.d().bbox(), cfg.nx, cfg.ny)?), GRID_TOL),
    };
    let report = lemma1_check(&c, cfg.r, cfg.s, mode)?.with_tolerance(cfg.tol.unwrap_or(default_tol));
    Ok(RunOutcome {
        passed: report.passed,
        report: json!({ "mode": cfg.mode, "r": cfg.r, "s": cfg.s, "report": report }),
        csv: None,
    })
}

fn verify_lemma2(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let h = cfg.h.as_ref().expect("validated");
    let cert = lemma2_certify(h, cfg.k)?;
    let tol = cfg.tol.unwrap_or(1e-12);
    let gap = (cert.upper_bound - cert.value).abs();
    Ok(RunOutcome {
        passed: gap <= tol,
        report: json!({ "certificate": cert, "bound_gap": gap, "tol": tol }),
        csv: None,
    })
}

type OracleFn = fn(&[Complex64], f64) -> Complex64;

fn oracle_fn(o: Oracle) -> OracleFn {
    match o {
        Oracle::InverseSum => |z, shift| 1.0 / (Complex64::new(shift, 0.0) - z.iter().sum::<Complex64>()),
        Oracle::Constant => |_, _| Complex64::new(1.0, 0.0),
        Oracle::Conjugate => |z, _| z[0].conj() + z[1..].iter().sum::<Complex64>(),
        Oracle::Pole => |z, _| 1.0 / (z[z.len() - 1] - 0.5),
    }
}

fn extend(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let spec = cfg.spec()?;
    let shift = cfg.shift.unwrap_or(spec.n() as f64 + 1.0);
    let g = oracle_fn(cfg.oracle);
    let f = CrossFunction::with_sampling(spec.clone(), move |z| g(z, shift), 4096, cfg.seed)?;
    let opts = ExtendOptions {
        m: cfg.m,
        seed: cfg.seed,
        ..ExtendOptions::default()
    };
    let ext = extend_nk(&f, &opts)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n_points = cfg.samples.unwrap_or(100);
    let points = (0..n_points)
        .map(|_| sample_envelope_point(&mut rng, &spec, 0.0, f64::INFINITY))
        .collect::<crate::Result<Vec<_>>>()?;
    let values = ext.eval_many(&points)?;
    let max_error = points
        .iter()
        .zip(&values)
        .map(|(p, v)| {
            let z: Vec<Complex64> = p.coords().iter().map(|c| c.to_complex()).collect();
            (v - g(&z, shift)).norm()
        })
        .fold(0.0, f64::max);

    let hx = HartogsExtension::new(&f, &opts)?;
    let bases: Vec<Vec<CPoint>> = (0..32)
        .map(|_| {
            sample_envelope_point(&mut rng, &spec, 0.0, f64::INFINITY)
                .map(|p| p.coords()[..spec.n() - 1].to_vec())
        })
        .collect::<crate::Result<_>>()?;
    let tc = two_constants_bound(&hx, &bases)?;
    let mp = max_principle_check(&ext, &f, 1000, cfg.seed.wrapping_add(1))?;

    let csv = match cfg.csv_out {
        Some(_) => Some(slice_abs_csv(cfg, &spec, &ext)?),
        None => None,
    };
    let tol = cfg.tol.unwrap_or(1e-5);
    Ok(RunOutcome {
        passed: max_error <= tol,
        report: json!({
            "n": spec.n(),
            "k": spec.k(),
            "m": cfg.m,
            "oracle": cfg.oracle,
            "shift": shift,
            "samples": n_points,
            "sup_cross": mp.sup_cross,
            "sup_envelope": mp.sup_envelope,
            "sup_ratio": mp.ratio,
            "max_error_vs_oracle": max_error,
            "tol": tol,
            "two_constants": tc,
            "levels": ext.levels(),
        }),
        csv,
    })
}

fn slice_abs_csv(cfg: &RunConfig, spec: &CrossSpec, ext: &crate::extend::ExtensionResult) -> Result<String, CliError> {
    let fixed = fixed_points(cfg, spec);
    let c = &spec.factors()[cfg.free];
    let g = Grid::covering(c.d().bbox(), cfg.nx, cfg.ny)?;
    let mask = envelope_slice(spec, &ClosedForm, cfg.free, &fixed, &g)?;
    let points: Vec<CrossPoint> = (0..g.len())
        .filter(|&i| mask.cells()[i])
        .map(|i| with_free(&fixed, cfg.free, g.node_at(i)))
        .collect();
    let values = ext.eval_many(&points)?;
    let mut csv = Csv::new(&["re", "im", "abs"]);
    for (p, v) in points.iter().zip(values) {
        let z = p.coords()[cfg.free];
        csv.row(&[z.re, z.im, v.norm()]);
    }
    Ok(csv.into_string())
}

#[derive(Debug, Serialize)]
struct Suite {
    name: &'static str,
    passed: bool,
    metric: f64,
    tolerance: f64,
    cases: usize,
}

fn suite(name: &'static str, metric: f64, tolerance: f64, cases: usize) -> Suite {
    Suite {
        name,
        passed: metric <= tolerance,
        metric,
        tolerance,
        cases,
    }
}

fn selftest(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let mut suites = Vec::new();
    let disc = Condenser::concentric_discs(CPoint::ORIGIN, 0.2, 1.0)?;

    let g = Grid::covering(disc.d().bbox(), 129, 129)?;
    let field = h_grid_solve(&disc, &g)?;
    let mut err = 0.0f64;
    for (_, p, v) in field.present() {
        err = err.max((v - h_closed_form(&disc, p)?).abs());
    }
    suites.push(suite("solver_fidelity_129", err, 0.04, 1));

    let mut worst = 0.0f64;
    let pairs = [(0.25, 0.75), (0.1, 0.9), (0.4, 0.5)];
    for (r, s) in pairs {
        let rep = lemma1_check(&disc, r, s, Lemma1Mode::ClosedForm { samples: 1000, seed: cfg.seed })?;
        worst = worst.max(rep.max_residual);
    }
    suites.push(suite("sublevel_rescaling_closed_form", worst, CLOSED_FORM_TOL, pairs.len() * 1000));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut gap, mut cases) = (0.0f64, 0usize);
    while cases < 10_000 {
        let n = rng.gen_range(2..=5);
        let k = rng.gen_range(2..=n);
        let h: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        if h.iter().sum::<f64>() >= k as f64 {
            continue;
        }
        let cert = lemma2_certify(&h, k)?;
        gap = gap.max((cert.upper_bound - cert.value).abs());
        cases += 1;
    }
    suites.push(suite("weight_witness", gap, 1e-12, cases));

    let spec = CrossSpec::uniform_discs(3, 2, 0.2, 1.0)?;
    let mut bad = 0usize;
    for _ in 0..1000 {
        let z = sample_cross_point(&mut rng, &spec)?;
        if !member_envelope(&z, &spec, &ClosedForm)? {
            bad += 1;
        }
    }
    suites.push(suite("cross_inside_envelope", bad as f64, 0.0, 1000));

    for (n, k, lo, hi, tol, name) in [
        (2, 1, 0.0, 1.0, 1e-6, "extend_2fold"),
        (3, 2, 1.0, 1.9, 1e-5, "extend_3fold_k2"),
    ] {
        let spec = CrossSpec::uniform_discs(n, k, 0.2, 1.0)?;
        let shift = n as f64 + 1.0;
        let g = move |z: &[Complex64]| 1.0 / (Complex64::new(shift, 0.0) - z.iter().sum::<Complex64>());
        let f = CrossFunction::new(spec.clone(), g)?;
        let ext = extend_nk(&f, &ExtendOptions::default())?;
        let mut err = 0.0f64;
        for _ in 0..20 {
            let z = sample_envelope_point(&mut rng, &spec, lo, hi)?;
            let zc: Vec<Complex64> = z.coords().iter().map(|c| c.to_complex()).collect();
            err = err.max((ext.eval(&z)? - g(&zc)).norm());
        }
        suites.push(suite(name, err, tol, 20));
        if n == 2 {
            let mp = max_principle_check(&ext, &f, 200, cfg.seed)?;
            suites.push(suite("max_principle_2fold", (mp.ratio - 1.0).max(0.0), 1e-4, 200));
        }
    }

    let passed = suites.iter().all(|s| s.passed);
    Ok(RunOutcome {
        passed,
        report: json!({ "suites": suites }),
        csv: None,
    })
}
