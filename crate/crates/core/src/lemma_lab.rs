//! Numerical checks of the two sublevel/envelope formulas behind the
//! (N,k)-cross theorem.
//!
//! * Rescaling: for `0 < r < s <= 1`,
//!   `h_{Δ(r),Δ(s)} = max(0, (h_{A,D} - r)/(s - r))` on `Δ(s)`.
//! * Envelope pair: on `X̂_{N,k}`,
//!   `h_{X̂_{N,k-1}, X̂_{N,k}}(z) = max(0, Σ h_j(z_j) - k + 1)`.
//!
//! The second identity is certified from above by an explicit weight witness
//! `(r, s)` with `Σ r = k-1`, `Σ s = k` and equal ratios
//! `(h_j - r_j)/(s_j - r_j)`, which bounds the envelope function by a product
//! condenser of sublevel sets.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cross::{ClosedForm, CrossPoint, CrossSpec, ExtremalEval};
use crate::error::{Error, Result};
use crate::extremal::{h_closed_form, h_grid_solve, sublevel};
use crate::geometry::{CPoint, CompactSet, Condenser, Grid, PlanarDomain};
use crate::sampling::random_in_domain;

/// Residual gate for the closed-form rescaling identity.
pub const CLOSED_FORM_TOL: f64 = 1e-12;
/// Residual gate for the grid-solver rescaling identity.
pub const GRID_TOL: f64 = 0.02;
/// Witness invariants are checked to this absolute accuracy.
pub const WITNESS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lemma1Mode {
    /// Both sides from closed forms at seeded random points of `Δ(s)`.
    ClosedForm { samples: usize, seed: u64 },
    /// Left side re-solved on the thresholded condenser; compared nodewise.
    Grid(Grid),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    pub point: CPoint,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub max_residual: f64,
    pub samples: usize,
    pub tolerance: f64,
    pub passed: bool,
    /// Every sample in closed-form mode; the worst nodes in grid mode.
    pub details: Vec<SampleRecord>,
}

impl LemmaReport {
    fn from_records(mut records: Vec<SampleRecord>, tolerance: f64, keep: Option<usize>) -> Self {
        let samples = records.len();
        let max_residual = records.iter().map(|r| r.residual).fold(0.0, f64::max);
        if let Some(keep) = keep {
            records.sort_by(|a, b| b.residual.total_cmp(&a.residual));
            records.truncate(keep);
        }
        LemmaReport {
            max_residual,
            samples,
            tolerance,
            passed: max_residual <= tolerance,
            details: records,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.passed = self.max_residual <= tolerance;
        self
    }
}

fn rescaled(h: f64, r: f64, s: f64) -> f64 {
    ((h - r) / (s - r)).max(0.0)
}

/// Compare `h_{Δ(r),Δ(s)}` against the rescaled base function.
pub fn lemma1_check(c: &Condenser, r: f64, s: f64, mode: Lemma1Mode) -> Result<LemmaReport> {
    if !(r > 0.0 && r < s && s <= 1.0) {
        return Err(Error::RangeError(format!("need 0 < r < s <= 1, got r = {r}, s = {s}")));
    }
    match mode {
        Lemma1Mode::ClosedForm { samples, seed } => {
            let outer = sublevel(c, s)?;
            let inner = sublevel(c, r)?.closure()?;
            let pair = Condenser::new(inner, outer.realization.clone())?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut records = Vec::with_capacity(samples);
            for _ in 0..samples {
                let z = random_in_domain(&mut rng, &outer.realization);
                let lhs = h_closed_form(&pair, z)?;
                let rhs = rescaled(h_closed_form(c, z)?, r, s);
                records.push(SampleRecord {
                    point: z,
                    lhs,
                    rhs,
                    residual: (lhs - rhs).abs(),
                });
            }
            Ok(LemmaReport::from_records(records, CLOSED_FORM_TOL, None))
        }
        Lemma1Mode::Grid(g) => {
            let base = h_grid_solve(c, &g)?;
            let inner = CompactSet::grid_mask(base.closed_sublevel_mask(r))?;
            let outer = PlanarDomain::grid_mask(base.sublevel_mask(s))?;
            let pair = Condenser::new(inner, outer)?;
            let lhs = h_grid_solve(&pair, &g)?;
            let records = lhs
                .present()
                .map(|(idx, p, l)| {
                    let rhs = rescaled(base.values()[idx].expect("Δ(s) ⊂ D"), r, s);
                    SampleRecord {
                        point: p,
                        lhs: l,
                        rhs,
                        residual: (l - rhs).abs(),
                    }
                })
                .collect();
            Ok(LemmaReport::from_records(records, GRID_TOL, Some(16)))
        }
    }
}

/// `max(0, Σh - k + 1)` on `X̂_{N,k}`, for `2 <= k <= N`.
pub fn lemma2_value(h_values: &[f64], k: usize) -> Result<f64> {
    let n = h_values.len();
    if k < 2 || k > n {
        return Err(Error::RangeError(format!("order k = {k} not in 2..={n}")));
    }
    if let Some(v) = h_values.iter().find(|v| !(0.0..1.0).contains(*v)) {
        return Err(Error::RangeError(format!("extremal value {v} not in [0, 1)")));
    }
    let sum: f64 = h_values.iter().sum();
    if sum >= k as f64 {
        return Err(Error::OutsideEnvelope { h_sum: sum, k });
    }
    Ok((sum - k as f64 + 1.0).max(0.0))
}

/// Weights `0 < r_j < s_j <= 1` with `Σr = k-1`, `Σs = k` and
/// `(h_j - r_j)/(s_j - r_j) = Σh - k + 1` for every `j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightWitness {
    pub r: Vec<f64>,
    pub s: Vec<f64>,
    pub ratio: f64,
    pub k: usize,
    pub h_values: Vec<f64>,
}

impl WeightWitness {
    pub fn ratios(&self) -> impl Iterator<Item = f64> + '_ {
        self.h_values
            .iter()
            .zip(self.r.iter().zip(&self.s))
            .map(|(h, (r, s))| (h - r) / (s - r))
    }

    /// Check every witness invariant to absolute accuracy `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let n = self.h_values.len();
        if self.r.len() != n || self.s.len() != n {
            return Err(Error::InvalidWitness("length mismatch".into()));
        }
        let k = self.k as f64;
        let sum: f64 = self.h_values.iter().sum();
        for j in 0..n {
            let (r, s) = (self.r[j], self.s[j]);
            if !(r > 0.0) {
                return Err(Error::InvalidWitness(format!("r[{j}] = {r} is not positive")));
            }
            if !(r < s) {
                return Err(Error::InvalidWitness(format!("r[{j}] = {r} >= s[{j}] = {s}")));
            }
            if s > 1.0 {
                return Err(Error::InvalidWitness(format!("s[{j}] = {s} > 1")));
            }
        }
        let r_sum: f64 = self.r.iter().sum();
        let s_sum: f64 = self.s.iter().sum();
        if (r_sum - (k - 1.0)).abs() > tol {
            return Err(Error::InvalidWitness(format!("Σr = {r_sum} != k - 1")));
        }
        if (s_sum - k).abs() > tol {
            return Err(Error::InvalidWitness(format!("Σs = {s_sum} != k")));
        }
        if (self.ratio - (sum - k + 1.0)).abs() > tol {
            return Err(Error::InvalidWitness(format!(
                "ratio {} != Σh - k + 1 = {}",
                self.ratio,
                sum - k + 1.0
            )));
        }
        // cross-multiplied: the quotient amplifies rounding when s_j - r_j is small
        for (j, q) in self.ratios().enumerate() {
            let (h, r, s) = (self.h_values[j], self.r[j], self.s[j]);
            if ((h - r) - self.ratio * (s - r)).abs() > tol {
                return Err(Error::InvalidWitness(format!(
                    "ratio of factor {j} is {q}, expected {}",
                    self.ratio
                )));
            }
        }
        Ok(())
    }
}

/// Build the weight witness for a point with all `h_j ∈ (0, 1)` and `k-1 < Σh < k`.
///
/// `s` interpolates between `h` and the caps `t_j = min(1, h_j/(Σh-k+1))`
/// so that `Σs = k`; this needs `Σt > k`, which the case analysis on how
/// many caps saturate at 1 guarantees. `r` then follows from
/// `r_j = (h_j - s_j(Σh-k+1))/(k - Σh)`, evaluated as
/// `s_j - (t_j - h_j)/(Σt - Σh)`.
pub fn lemma2_witness(h_values: &[f64], k: usize) -> Result<WeightWitness> {
    let n = h_values.len();
    if k < 2 || k > n {
        return Err(Error::RangeError(format!("order k = {k} not in 2..={n}")));
    }
    for (j, &h) in h_values.iter().enumerate() {
        if h == 0.0 {
            return Err(Error::ZeroFactor(j));
        }
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::RangeError(format!("extremal value {h} not in (0, 1)")));
        }
    }
    let kf = k as f64;
    let sum: f64 = h_values.iter().sum();
    if sum >= kf {
        return Err(Error::OutsideEnvelope { h_sum: sum, k });
    }
    if sum <= kf - 1.0 {
        return Err(Error::Degenerate { h_sum: sum, k });
    }
    let ratio = sum - kf + 1.0;
    let caps: Vec<f64> = h_values.iter().map(|h| (h / ratio).min(1.0)).collect();
    let caps_sum: f64 = caps.iter().sum();
    if caps_sum < kf {
        return Err(Error::CapSumTooSmall { caps_sum, k });
    }
    let gap: f64 = caps.iter().zip(h_values).map(|(t, h)| t - h).sum();
    let lambda = (kf - sum) / gap;
    let s: Vec<f64> = h_values
        .iter()
        .zip(&caps)
        .map(|(h, t)| (h + lambda * (t - h)).min(*t))
        .collect();
    // equal to (h_j - s_j ρ)/(k - Σh), without the cancellation as Σh -> k
    let r = s
        .iter()
        .zip(caps.iter().zip(h_values))
        .map(|(s, (t, h))| s - (t - h) / gap)
        .collect();
    Ok(WeightWitness {
        r,
        s,
        ratio,
        k,
        h_values: h_values.to_vec(),
    })
}

/// Drop factors with `h_j = 0`. At most `N - k` of them can occur when `Σh >= k-1`.
pub fn reduce_zero_factors(h_values: &[f64], k: usize) -> Result<(Vec<f64>, usize)> {
    let n = h_values.len();
    let sum: f64 = h_values.iter().sum();
    if sum < k as f64 - 1.0 {
        return Err(Error::RangeError(format!(
            "Σh = {sum} < k - 1: the formula is identically 0 there"
        )));
    }
    let zeros = h_values.iter().filter(|&&h| h == 0.0).count();
    if zeros + k > n {
        return Err(Error::InconsistentInput(format!(
            "{zeros} zero factors exceed N - k = {}",
            n.saturating_sub(k)
        )));
    }
    Ok((h_values.iter().copied().filter(|&h| h != 0.0).collect(), k))
}

/// Upper bound `max_j max(0, (h_j - r_j)/(s_j - r_j))` from the product of
/// sublevel condensers. Points with `Σh <= k-1` need no witness (bound 0).
pub fn lemma2_upper_bound(
    h_values: &[f64],
    k: usize,
    witness: Option<&WeightWitness>,
) -> Result<f64> {
    let sum: f64 = h_values.iter().sum();
    if sum <= k as f64 - 1.0 {
        return Ok(0.0);
    }
    let w = witness.ok_or_else(|| Error::InvalidWitness("missing witness".into()))?;
    let (reduced, _) = reduce_zero_factors(h_values, k)?;
    if w.k != k || w.h_values != reduced {
        return Err(Error::InvalidWitness("witness built for a different point".into()));
    }
    w.validate(WITNESS_TOL)?;
    Ok(w.ratios().fold(0.0, f64::max))
}

/// Value, witness and bound for one point, reducing zero factors first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma2Certificate {
    pub h_values: Vec<f64>,
    pub k: usize,
    pub value: f64,
    pub upper_bound: f64,
    pub witness: Option<WeightWitness>,
}

pub fn lemma2_certify(h_values: &[f64], k: usize) -> Result<Lemma2Certificate> {
    let value = lemma2_value(h_values, k)?;
    let sum: f64 = h_values.iter().sum();
    let witness = if sum <= k as f64 - 1.0 {
        None
    } else {
        let (reduced, k) = reduce_zero_factors(h_values, k)?;
        Some(lemma2_witness(&reduced, k)?)
    };
    let upper_bound = lemma2_upper_bound(h_values, k, witness.as_ref())?;
    Ok(Lemma2Certificate {
        h_values: h_values.to_vec(),
        k,
        value,
        upper_bound,
        witness,
    })
}

/// `R(z) = max(0, Σ h_j(z_j) - k + 1)` with closed-form factors.
pub fn envelope_formula(spec: &CrossSpec, z: &CrossPoint) -> Result<f64> {
    let mut sum = 0.0;
    for (j, (c, &p)) in spec.factors().iter().zip(z.coords()).enumerate() {
        sum += ClosedForm.h(j, c, p)?;
    }
    Ok((sum - spec.k() as f64 + 1.0).max(0.0))
}

/// `R(z) - mean_θ R(z + ρ e^{iθ} e_j)` over `nodes` equispaced angles.
/// Non-positive (up to quadrature error) when `R` is subharmonic in `z_j`.
pub fn sub_mean_value_defect(
    spec: &CrossSpec,
    z: &CrossPoint,
    j: usize,
    radius: f64,
    nodes: usize,
) -> Result<f64> {
    let center = envelope_formula(spec, z)?;
    let zj = z.coords()[j];
    let mut acc = 0.0;
    let mut moved = z.clone();
    for m in 0..nodes {
        let theta = std::f64::consts::TAU * m as f64 / nodes as f64;
        moved.0[j] = CPoint::new(zj.re + radius * theta.cos(), zj.im + radius * theta.sin());
        acc += envelope_formula(spec, &moved)?;
    }
    Ok(center - acc / nodes as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;

    const O: CPoint = CPoint::ORIGIN;

    #[test]
    fn value_examples() {
        assert!((lemma2_value(&[0.5, 0.6, 0.7], 2).unwrap() - 0.8).abs() < 1e-15);
        assert_eq!(lemma2_value(&[0.1, 0.2, 0.3], 2).unwrap(), 0.0);
        assert_eq!(lemma2_value(&[0.5, 0.5], 2).unwrap(), 0.0);
        assert!(matches!(
            lemma2_value(&[0.9, 0.9, 0.9, 0.9], 3),
            Err(Error::OutsideEnvelope { .. })
        ));
        assert!(matches!(lemma2_value(&[0.1, 0.2], 1), Err(Error::RangeError(_))));
        assert!(matches!(lemma2_value(&[0.1, 0.2], 3), Err(Error::RangeError(_))));
    }

    #[test]
    fn witness_example() {
        let w = lemma2_witness(&[0.5, 0.6, 0.7], 2).unwrap();
        let s = [5.0 / 9.0, 2.0 / 3.0, 7.0 / 9.0];
        let r = [5.0 / 18.0, 1.0 / 3.0, 7.0 / 18.0];
        for j in 0..3 {
            assert!((w.s[j] - s[j]).abs() < 1e-12);
            assert!((w.r[j] - r[j]).abs() < 1e-12);
        }
        assert!((w.ratio - 0.8).abs() < 1e-15);
        w.validate(WITNESS_TOL).unwrap();
        let bound = lemma2_upper_bound(&[0.5, 0.6, 0.7], 2, Some(&w)).unwrap();
        assert!((bound - 0.8).abs() < 1e-12);
    }

    #[test]
    fn witness_guards() {
        assert!(matches!(lemma2_witness(&[0.5, 0.5], 2), Err(Error::Degenerate { .. })));
        assert!(matches!(
            lemma2_witness(&[0.9, 0.9, 0.9, 0.9], 3),
            Err(Error::OutsideEnvelope { .. })
        ));
        assert!(matches!(lemma2_witness(&[0.0, 0.9, 0.95], 2), Err(Error::ZeroFactor(0))));
    }

    #[test]
    fn perturbed_witness_is_rejected() {
        let h = [0.5, 0.6, 0.7];
        let mut w = lemma2_witness(&h, 2).unwrap();
        w.r[0] += 0.01;
        assert!(matches!(
            lemma2_upper_bound(&h, 2, Some(&w)),
            Err(Error::InvalidWitness(_))
        ));
        assert!(matches!(lemma2_upper_bound(&h, 2, None), Err(Error::InvalidWitness(_))));
        assert_eq!(lemma2_upper_bound(&[0.2, 0.3, 0.4], 2, None).unwrap(), 0.0);
    }

    #[test]
    fn zero_factor_reduction() {
        assert_eq!(
            reduce_zero_factors(&[0.0, 0.9, 0.95], 2).unwrap(),
            (vec![0.9, 0.95], 2)
        );
        assert_eq!(
            reduce_zero_factors(&[0.5, 0.6, 0.7], 2).unwrap(),
            (vec![0.5, 0.6, 0.7], 2)
        );
        assert!(matches!(
            reduce_zero_factors(&[0.0, 0.0, 0.95], 2),
            Err(Error::RangeError(_))
        ));
        // Σh >= k-1 with too many zeros cannot come from a point of the envelope
        assert!(matches!(
            reduce_zero_factors(&[0.0, 0.0, 1.0], 2),
            Err(Error::InconsistentInput(_))
        ));
        let cert = lemma2_certify(&[0.0, 0.9, 0.95], 2).unwrap();
        assert!((cert.value - 0.85).abs() < 1e-12);
        assert!((cert.upper_bound - cert.value).abs() < 1e-12);
    }

    #[test]
    fn rescaling_closed_form_mode() {
        let c = Condenser::concentric_discs(O, 0.2, 1.0).unwrap();
        let rep = lemma1_check(
            &c,
            0.25,
            0.75,
            Lemma1Mode::ClosedForm { samples: 1000, seed: 1 },
        )
        .unwrap();
        assert!(rep.passed, "{}", rep.max_residual);
        assert_eq!(rep.samples, 1000);
        assert!(matches!(
            lemma1_check(&c, 0.5, 0.5, Lemma1Mode::ClosedForm { samples: 1, seed: 1 }),
            Err(Error::RangeError(_))
        ));
    }

    #[test]
    fn rescaling_grid_mode_small_grid() {
        let c = Condenser::concentric_discs(O, 0.2, 1.0).unwrap();
        let g = Grid::covering(Rect::square(O, 1.0).unwrap(), 129, 129).unwrap();
        let rep = lemma1_check(&c, 0.25, 0.75, Lemma1Mode::Grid(g)).unwrap();
        assert!(rep.max_residual < 0.04, "{}", rep.max_residual);
        assert!(rep.details.len() <= 16);
    }

    #[test]
    fn formula_is_subharmonic_in_each_variable() {
        let spec = CrossSpec::uniform_discs(3, 2, 0.2, 1.0).unwrap();
        let z = CrossPoint(vec![CPoint::new(0.3, 0.1), CPoint::new(-0.5, 0.2), CPoint::new(0.05, 0.6)]);
        for j in 0..3 {
            let d = sub_mean_value_defect(&spec, &z, j, 0.2, 64).unwrap();
            assert!(d <= 1e-6, "factor {j}: {d}");
        }
    }
}
