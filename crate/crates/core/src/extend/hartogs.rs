use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use super::recursion::Engine;
use super::{CrossFunction, ExtendOptions};
use crate::error::{Error, Result};
use crate::geometry::CPoint;

/// Taylor data of one slice `w ↦ F(z', w)` around the centre of a thin factor.
///
/// `raw[m] = c_m r^m` are the discrete Cauchy coefficients read off the circle
/// of radius `r`. Entries at or below the noise floor, and everything after
/// the last resolved index, are zeroed: beyond that point the data on the
/// small circle carries no information, only rounding amplified by `(|z-c|/r)^m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HartogsCoeffs {
    pub center: CPoint,
    pub radius: f64,
    pub raw: Vec<Complex64>,
    pub resolved: usize,
    pub noise_floor: f64,
    /// `|c_{M-1}| r^{M-1}` before truncation.
    pub top: f64,
}

impl HartogsCoeffs {
    pub fn truncation(&self) -> usize {
        self.raw.len()
    }

    /// `c_m`, the coefficient of `(w - center)^m`.
    pub fn coefficient(&self, m: usize) -> Complex64 {
        self.raw[m] / self.radius.powi(m as i32)
    }

    /// `Σ_{m < resolved} c_m (w - center)^m` by Horner's rule in `(w - center)/r`.
    pub fn eval(&self, w: Complex64) -> Complex64 {
        let t = (w - self.center.to_complex()) / self.radius;
        self.raw[..self.resolved]
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * t + a)
    }
}

/// Cauchy coefficients of `slice` on the circle `|w - center| = radius` from
/// `4M` equispaced samples and one FFT.
///
/// Fails with `AliasingSuspected` when `|c_{M-1}| r^{M-1} > 10⁻² · sup_bound`.
pub fn hartogs_coeffs<F>(
    slice: F,
    center: CPoint,
    radius: f64,
    m: usize,
    sup_bound: f64,
) -> Result<HartogsCoeffs>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if m < 2 || !m.is_power_of_two() {
        return Err(Error::RangeError(format!("truncation M = {m} must be a power of two >= 2")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::RangeError(format!("circle radius {radius} must be positive")));
    }
    let len = 4 * m;
    let c = center.to_complex();
    let mut buf: Vec<Complex64> = (0..len)
        .into_par_iter()
        .map(|n| {
            let theta = std::f64::consts::TAU * n as f64 / len as f64;
            slice(c + Complex64::from_polar(radius, theta))
        })
        .collect::<Result<_>>()?;
    let vmax = buf.iter().map(|v| v.norm()).fold(0.0, f64::max);
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let scale = 1.0 / len as f64;
    buf.iter_mut().for_each(|v| *v *= scale);

    // negative frequencies vanish for holomorphic slices, so they measure the noise
    let negative = buf[2 * m..].iter().map(|v| v.norm()).fold(0.0, f64::max);
    let noise_floor = (64.0 * f64::EPSILON * vmax).max(8.0 * negative);
    let top = buf[m - 1].norm();
    let limit = 1e-2 * sup_bound;
    if top > limit {
        return Err(Error::AliasingSuspected { top, limit });
    }
    let resolved = buf[..m]
        .iter()
        .rposition(|a| a.norm() > noise_floor)
        .map_or(0, |i| i + 1);
    let raw = buf[..m]
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            if i < resolved && a.norm() > noise_floor {
                a
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Ok(HartogsCoeffs {
        center,
        radius,
        raw,
        resolved,
        noise_floor,
        top,
    })
}

/// Hartogs series in the last variable over the glued base cross
/// `(X̂_{N-1,k-1}, A_N; X̂_{N-1,k}, D_N)`.
#[derive(Debug)]
pub struct HartogsExtension {
    engine: Engine,
}

impl HartogsExtension {
    pub fn new(f: &CrossFunction, opts: &ExtendOptions) -> Result<Self> {
        Ok(HartogsExtension {
            engine: Engine::new(f.clone(), opts)?,
        })
    }

    pub fn expansion_center(&self) -> CPoint {
        self.engine.disc(self.last()).center.into()
    }

    pub fn expansion_radius(&self) -> f64 {
        self.engine.disc(self.last()).r
    }

    pub fn truncation(&self) -> usize {
        self.engine.truncation()
    }

    pub fn sup_bound(&self) -> f64 {
        self.engine.function().sup_bound()
    }

    fn last(&self) -> usize {
        self.engine.function().spec().n() - 1
    }

    fn check_base(&self, base: &[CPoint]) -> Result<()> {
        if base.len() != self.last() {
            return Err(Error::DimensionMismatch {
                expected: self.last(),
                got: base.len(),
            });
        }
        Ok(())
    }

    /// `max(0, Σ_{j<N} h_j(z_j) - k + 1)`, the extremal function of the glued base pair.
    pub fn h_base(&self, base: &[CPoint]) -> Result<f64> {
        self.check_base(base)?;
        let hs: Vec<f64> = (0..self.last())
            .map(|j| self.engine.h_checked(j, base[j].to_complex()))
            .collect::<Result<_>>()?;
        let k = self.engine.function().spec().k();
        let sum: f64 = hs.iter().sum();
        if sum >= k as f64 {
            return Err(Error::OutsideEnvelope { h_sum: sum, k });
        }
        Ok(super::recursion::base_level(&hs, k))
    }

    /// Coefficients of `w ↦ f̂(base, w)`; `base` must lie in `X̂_{N-1,k}`.
    pub fn coeffs_at(&self, base: &[CPoint]) -> Result<HartogsCoeffs> {
        self.h_base(base)?;
        let last = self.last();
        let active: Vec<usize> = (0..last).collect();
        let k = self.engine.function().spec().k();
        let mut z: Vec<Complex64> = base.iter().map(|p| p.to_complex()).collect();
        z.push(Complex64::new(0.0, 0.0));
        let disc = self.engine.disc(last);
        hartogs_coeffs(
            |w| {
                let mut zz = z.clone();
                zz[last] = w;
                self.engine.ext(&active, k, &zz, 1)
            },
            disc.center.into(),
            disc.r,
            self.truncation(),
            self.sup_bound(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoConstantsReport {
    pub bases: usize,
    pub coefficients: usize,
    /// Largest `log|c_m| - log(bound_m)` seen; negative means slack everywhere.
    pub worst_log_excess: f64,
    pub worst_point: Vec<CPoint>,
    pub worst_m: usize,
}

/// Check `|c_m(w)| ≤ C (1/r)^{m h_base(w)} (1+10⁻³)^m` (lengths scaled by the
/// outer radius) on every resolved coefficient at each base point.
///
/// Coefficients are compared with the noise floor added to the bound, since
/// nothing finer than the floor is resolved.
pub fn two_constants_bound(
    ext: &HartogsExtension,
    bases: &[Vec<CPoint>],
) -> Result<TwoConstantsReport> {
    let disc = ext.engine.disc(ext.last());
    let log_ratio = (disc.big_r / disc.r).ln();
    let c = ext.sup_bound();
    let results: Vec<(f64, usize, usize)> = bases
        .par_iter()
        .map(|base| -> Result<(f64, usize, usize)> {
            let hb = ext.h_base(base)?;
            let coeffs = ext.coeffs_at(base)?;
            let mut worst = (f64::NEG_INFINITY, 0, 0);
            for (m, a) in coeffs.raw.iter().enumerate().take(coeffs.resolved) {
                let a = a.norm();
                if a == 0.0 {
                    continue;
                }
                let mf = m as f64;
                let log_bound = c.ln() + mf * (hb - 1.0) * log_ratio + mf * 1e-3f64.ln_1p();
                let excess = a.ln() - (log_bound.exp() + coeffs.noise_floor).ln();
                worst.2 += 1;
                if excess > worst.0 {
                    worst = (excess, m, worst.2);
                }
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    let mut report = TwoConstantsReport {
        bases: bases.len(),
        coefficients: results.iter().map(|r| r.2).sum(),
        worst_log_excess: f64::NEG_INFINITY,
        worst_point: Vec::new(),
        worst_m: 0,
    };
    for (base, &(excess, m, _)) in bases.iter().zip(&results) {
        if excess > report.worst_log_excess {
            report.worst_log_excess = excess;
            report.worst_point = base.clone();
            report.worst_m = m;
        }
    }
    if report.worst_log_excess > 0.0 {
        return Err(Error::BoundViolated {
            point: report.worst_point,
            m: report.worst_m,
            excess: report.worst_log_excess.exp(),
        });
    }
    Ok(report)
}
