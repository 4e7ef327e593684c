//! Holomorphic extension from an (N,k)-cross to its envelope.
//!
//! Only concentric disc factors are supported: Cauchy data are read on the
//! boundary circle of each `A_j`, which must lie inside `A_j` exactly.

mod hartogs;
mod recursion;

pub use hartogs::{hartogs_coeffs, two_constants_bound, HartogsCoeffs, HartogsExtension, TwoConstantsReport};
pub use recursion::LevelStats;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cross::{envelope_sum, ClosedForm, CrossPoint, CrossSpec};
use crate::error::{Error, Result};
use crate::geometry::CPoint;
use crate::sampling::random_in_disc;
use recursion::{Disc, Engine, RIM_SLACK};

pub type Evaluator = Arc<dyn Fn(&[Complex64]) -> Complex64 + Send + Sync>;

/// Samples used to estimate `sup_X |f|` when none is given.
pub const DEFAULT_SUP_SAMPLES: usize = 4096;

/// A function on `X_{N,k}` together with an estimate of its supremum there.
///
/// `eval` refuses points off the cross, so anything built on top of it only
/// ever consumes cross data.
#[derive(Clone)]
pub struct CrossFunction {
    spec: CrossSpec,
    discs: Vec<Disc>,
    evaluator: Evaluator,
    sup_bound: f64,
}

impl fmt::Debug for CrossFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CrossFunction")
            .field("spec", &self.spec)
            .field("sup_bound", &self.sup_bound)
            .finish_non_exhaustive()
    }
}

impl CrossFunction {
    /// Wrap `evaluator` and estimate its supremum with the default sampler.
    pub fn new<F>(spec: CrossSpec, evaluator: F) -> Result<Self>
    where
        F: Fn(&[Complex64]) -> Complex64 + Send + Sync + 'static,
    {
        Self::with_sampling(spec, evaluator, DEFAULT_SUP_SAMPLES, 0)
    }

    pub fn with_sampling<F>(spec: CrossSpec, evaluator: F, samples: usize, seed: u64) -> Result<Self>
    where
        F: Fn(&[Complex64]) -> Complex64 + Send + Sync + 'static,
    {
        let discs = spec
            .factors()
            .iter()
            .map(|c| {
                c.disc_radii()
                    .map(|(center, r, big_r)| Disc {
                        center: center.to_complex(),
                        r,
                        big_r,
                    })
                    .ok_or(Error::UnsupportedGeometry("extension needs concentric disc factors"))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut f = CrossFunction {
            spec,
            discs,
            evaluator: Arc::new(evaluator),
            sup_bound: 0.0,
        };
        f.sup_bound = f.estimate_sup(samples.max(1), seed)?;
        Ok(f)
    }

    /// Replace the sampled supremum by a known value.
    pub fn with_sup_bound(mut self, sup_bound: f64) -> Result<Self> {
        if !(sup_bound > 0.0 && sup_bound.is_finite()) {
            return Err(Error::RangeError(format!("sup bound {sup_bound} must be positive")));
        }
        self.sup_bound = sup_bound;
        Ok(self)
    }

    pub fn spec(&self) -> &CrossSpec {
        &self.spec
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    pub(crate) fn discs(&self) -> &[Disc] {
        &self.discs
    }

    pub fn eval(&self, z: &CrossPoint) -> Result<Complex64> {
        let z: Vec<Complex64> = z.coords().iter().map(|p| p.to_complex()).collect();
        self.eval_complex(&z)
    }

    pub(crate) fn eval_complex(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.discs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.discs.len(),
                got: z.len(),
            });
        }
        let mut full = 0;
        for (d, &w) in self.discs.iter().zip(z) {
            if !d.in_d(w) {
                return Err(Error::OutsideDomain(w.into()));
            }
            if !d.in_a(w) {
                full += 1;
            }
        }
        if full > self.spec.k() {
            return Err(Error::InconsistentInput(format!(
                "evaluation requested off the cross ({full} full coordinates, k = {})",
                self.spec.k()
            )));
        }
        let v = (self.evaluator)(z);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite(format!("f at {z:?}")));
        }
        Ok(v)
    }

    /// Point of `X_{N,k}` with the coordinates of `full` on circles of radius
    /// `R_j (1 - 10⁻⁶)` and the rest on `∂A_j`, at the given angles.
    fn torus_point(&self, full: &[bool], theta: &[f64]) -> Vec<Complex64> {
        self.discs
            .iter()
            .zip(full.iter().zip(theta))
            .map(|(d, (&f, &t))| {
                let rho = if f { d.big_r * (1.0 - 1e-6) } else { d.r };
                d.center + Complex64::from_polar(rho, t)
            })
            .collect()
    }

    /// Maximum modulus lives on the distinguished tori of the patterns, so
    /// sample there and polish the best few angle vectors by pattern search.
    fn estimate_sup(&self, samples: usize, seed: u64) -> Result<f64> {
        let n = self.discs.len();
        let k = self.spec.k();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut starts: Vec<(f64, Vec<bool>, Vec<f64>)> = Vec::with_capacity(samples);
        for _ in 0..samples {
            let mut full = vec![false; n];
            for j in sample(&mut rng, n, k) {
                full[j] = true;
            }
            let theta: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
            let v = self.eval_complex(&self.torus_point(&full, &theta))?.norm();
            starts.push((v, full, theta));
        }
        starts.sort_by(|a, b| b.0.total_cmp(&a.0));
        starts.truncate(8);
        let polished = starts
            .into_par_iter()
            .map(|(v, full, theta)| self.polish(v, &full, theta))
            .collect::<Result<Vec<f64>>>()?;
        Ok(polished.into_iter().fold(0.0, f64::max))
    }

    fn polish(&self, mut best: f64, full: &[bool], mut theta: Vec<f64>) -> Result<f64> {
        let mut step = 0.1;
        let mut budget = 20_000;
        while step > 1e-10 && budget > 0 {
            let mut improved = false;
            for j in 0..theta.len() {
                for dir in [step, -step] {
                    budget -= 1;
                    theta[j] += dir;
                    let v = self.eval_complex(&self.torus_point(full, &theta))?.norm();
                    if v > best {
                        best = v;
                        improved = true;
                        break;
                    }
                    theta[j] -= dir;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        Ok(best)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtendOptions {
    /// Retained series coefficients; a power of two.
    pub m: usize,
    /// Spot-check separate holomorphy of the input before extending.
    pub check_holomorphy: bool,
    pub holomorphy_samples: usize,
    pub seed: u64,
}

impl Default for ExtendOptions {
    fn default() -> Self {
        ExtendOptions {
            m: 64,
            check_holomorphy: true,
            holomorphy_samples: 64,
            seed: 0,
        }
    }
}

impl ExtendOptions {
    pub fn with_m(mut self, m: usize) -> Self {
        self.m = m;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.m < 2 || !self.m.is_power_of_two() {
            return Err(Error::RangeError(format!(
                "truncation M = {} must be a power of two >= 2",
                self.m
            )));
        }
        Ok(())
    }
}

/// `f̂` on `X̂_{N,k}` plus per-depth diagnostics accumulated over all evaluations.
#[derive(Debug)]
pub struct ExtensionResult {
    engine: Engine,
}

impl ExtensionResult {
    pub fn spec(&self) -> &CrossSpec {
        self.engine.function().spec()
    }

    pub fn sup_bound(&self) -> f64 {
        self.engine.function().sup_bound()
    }

    pub fn truncation(&self) -> usize {
        self.engine.truncation()
    }

    /// `f̂(z)`; `OutsideEnvelope` unless `Σ h_j(z_j) < k`.
    pub fn eval(&self, z: &CrossPoint) -> Result<Complex64> {
        let spec = self.spec();
        let h_sum = envelope_sum(z, spec, &ClosedForm)?;
        if h_sum >= spec.k() as f64 {
            return Err(Error::OutsideEnvelope { h_sum, k: spec.k() });
        }
        let zc: Vec<Complex64> = z.coords().iter().map(|p| p.to_complex()).collect();
        let active: Vec<usize> = (0..spec.n()).collect();
        self.engine.ext(&active, spec.k(), &zc, 0)
    }

    pub fn eval_many(&self, zs: &[CrossPoint]) -> Result<Vec<Complex64>> {
        zs.par_iter().map(|z| self.eval(z)).collect()
    }

    /// Geometric tail ratio `(R/r)^{Σh - k}` of the outermost series at `z`.
    pub fn tail_ratio(&self, z: &CrossPoint) -> Result<f64> {
        let spec = self.spec();
        let h_sum = envelope_sum(z, spec, &ClosedForm)?;
        let ratio = spec
            .factors()
            .iter()
            .filter_map(|c| c.disc_radii())
            .map(|(_, r, big_r)| (big_r / r).powf(h_sum - spec.k() as f64))
            .fold(0.0, f64::max);
        Ok(ratio)
    }

    pub fn levels(&self) -> Vec<LevelStats> {
        self.engine.levels()
    }
}

/// Extension for the 2-fold cross `(A_1 × D_2) ∪ (D_1 × A_2)`.
pub fn extend_2fold(f: &CrossFunction, opts: &ExtendOptions) -> Result<ExtensionResult> {
    let spec = f.spec();
    if spec.n() != 2 || spec.k() != 1 {
        return Err(Error::RangeError(format!(
            "2-fold extension needs N = 2, k = 1, got N = {}, k = {}",
            spec.n(),
            spec.k()
        )));
    }
    build(f, opts)
}

/// Extension from `X_{N,k}` to `X̂_{N,k}` for `N <= 4`.
pub fn extend_nk(f: &CrossFunction, opts: &ExtendOptions) -> Result<ExtensionResult> {
    let spec = f.spec();
    if spec.n() > 4 {
        return Err(Error::RecursionBudget(spec.n()));
    }
    if spec.n() == 2 && spec.k() == 1 {
        return extend_2fold(f, opts);
    }
    build(f, opts)
}

fn build(f: &CrossFunction, opts: &ExtendOptions) -> Result<ExtensionResult> {
    let engine = Engine::new(f.clone(), opts)?;
    if opts.check_holomorphy {
        check_separate_holomorphy(f, opts.holomorphy_samples, opts.seed)?;
    }
    Ok(ExtensionResult { engine })
}

/// Residual gate for the discrete Cauchy-Riemann check.
pub const HOLOMORPHY_TOL: f64 = 1e-6;

/// Largest `|∂f/∂z̄_j|` (central differences) over the full coordinates of
/// random cross points; `NotSeparatelyHolomorphic` above `HOLOMORPHY_TOL`.
pub fn check_separate_holomorphy(f: &CrossFunction, samples: usize, seed: u64) -> Result<f64> {
    let n = f.discs.len();
    let k = f.spec.k();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let mut full = vec![false; n];
        for j in sample(&mut rng, n, k) {
            full[j] = true;
        }
        let z: Vec<Complex64> = f
            .discs
            .iter()
            .zip(&full)
            .map(|(d, &fl)| {
                let rho = if fl { 0.98 * d.big_r } else { 0.98 * d.r };
                random_in_disc(&mut rng, d.center.into(), rho).to_complex()
            })
            .collect();
        for j in (0..n).filter(|&j| full[j]) {
            let delta = 1e-5 * f.discs[j].big_r;
            let at = |dz: Complex64| {
                let mut zz = z.clone();
                zz[j] += dz;
                f.eval_complex(&zz)
            };
            let dx = (at(Complex64::new(delta, 0.0))? - at(Complex64::new(-delta, 0.0))?) / (2.0 * delta);
            let dy = (at(Complex64::new(0.0, delta))? - at(Complex64::new(0.0, -delta))?) / (2.0 * delta);
            let dbar = 0.5 * (dx + Complex64::i() * dy);
            let res = dbar.norm();
            if res > HOLOMORPHY_TOL {
                let point: Vec<CPoint> = z.iter().map(|&w| w.into()).collect();
                return Err(Error::NotSeparatelyHolomorphic(format!(
                    "|∂f/∂z̄_{j}| = {res:e} at {point:?}"
                )));
            }
            worst = worst.max(res);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxPrincipleReport {
    pub sup_cross: f64,
    pub sup_envelope: f64,
    pub ratio: f64,
    pub samples: usize,
    pub argmax: Vec<CPoint>,
}

/// Relative slack allowed between the sampled envelope and cross suprema.
pub const MAX_PRINCIPLE_TOL: f64 = 1e-4;

/// Compare the sampled `sup |f̂|` over `X̂_{N,k}` with the cross supremum.
pub fn max_principle_check(
    result: &ExtensionResult,
    f: &CrossFunction,
    samples: usize,
    seed: u64,
) -> Result<MaxPrincipleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..samples)
        .map(|_| sample_envelope_point(&mut rng, f.spec(), 0.0, f64::INFINITY))
        .collect::<Result<Vec<_>>>()?;
    let values = result.eval_many(&points)?;
    let (idx, sup_envelope) = values
        .iter()
        .map(|v| v.norm())
        .enumerate()
        .fold((0, 0.0), |best, (i, v)| if v > best.1 { (i, v) } else { best });
    let sup_cross = f.sup_bound();
    let bound = sup_cross * (1.0 + MAX_PRINCIPLE_TOL);
    let argmax = points.get(idx).map(|p| p.coords().to_vec()).unwrap_or_default();
    if sup_envelope > bound {
        return Err(Error::MaxPrincipleViolated {
            point: argmax,
            value: sup_envelope,
            bound,
        });
    }
    Ok(MaxPrincipleReport {
        sup_cross,
        sup_envelope,
        ratio: sup_envelope / sup_cross,
        samples,
        argmax,
    })
}

/// Uniform point of `X̂_{N,k}` (area measure per factor) with `lo < Σh < hi`.
pub fn sample_envelope_point<R: Rng + ?Sized>(
    rng: &mut R,
    spec: &CrossSpec,
    lo: f64,
    hi: f64,
) -> Result<CrossPoint> {
    let discs: Vec<(CPoint, f64)> = spec
        .factors()
        .iter()
        .map(|c| {
            c.disc_radii()
                .map(|(center, _, big_r)| (center, big_r))
                .ok_or(Error::UnsupportedGeometry("envelope sampling needs disc factors"))
        })
        .collect::<Result<_>>()?;
    let k = spec.k() as f64;
    for _ in 0..1_000_000 {
        let z = CrossPoint(discs.iter().map(|&(c, r)| random_in_disc(rng, c, r)).collect());
        let s = envelope_sum(&z, spec, &ClosedForm)?;
        if s < k && s > lo && s < hi {
            return Ok(z);
        }
    }
    Err(Error::RangeError(format!("no envelope point with h-sum in ({lo}, {hi})")))
}

/// Uniform point of a randomly chosen pattern product of `X_{N,k}`.
pub fn sample_cross_point<R: Rng + ?Sized>(rng: &mut R, spec: &CrossSpec) -> Result<CrossPoint> {
    let n = spec.n();
    let mut full = vec![false; n];
    for j in sample(rng, n, spec.k()) {
        full[j] = true;
    }
    spec.factors()
        .iter()
        .zip(&full)
        .map(|(c, &fl)| {
            let (center, r, big_r) = c
                .disc_radii()
                .ok_or(Error::UnsupportedGeometry("cross sampling needs disc factors"))?;
            Ok(random_in_disc(rng, center, if fl { big_r } else { r * (1.0 - RIM_SLACK) }))
        })
        .collect::<Result<Vec<_>>>()
        .map(CrossPoint)
}
