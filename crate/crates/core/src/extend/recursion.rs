//! Evaluation of `f̂` by induction on the number of active factors.
//!
//! With active set `S`, order `k` and pivot `p`,
//! `X_{S,k} = (X_{S∖p,k-1} × D_p) ∪ (X_{S∖p,k} × A_p)`. At a query point:
//!
//! * inside the cross, or `|S| <= k`: evaluate `f`;
//! * some `z_j ∈ A_j`: freeze it and recurse on `(S∖j, k)`;
//! * `Σ_{j≠p} h_j < k-1` for the largest `h_p`: the point lies over
//!   `X̂_{S∖p,k-1} × D_p`; freeze `z_p` and recurse on `(S∖p, k-1)`;
//! * otherwise expand in the variable with the smallest `h_p`, reading Cauchy
//!   data on `∂A_p` from the `(S∖p, k)` extension. The series converges where
//!   `h_base + h_p < 1`, with `h_base = max(0, Σ_{j≠p} h_j - k + 1)`.

use std::sync::Mutex;

use num_complex::Complex64;
use serde::Serialize;

use super::hartogs::hartogs_coeffs;
use super::{CrossFunction, ExtendOptions};
use crate::error::{Error, Result};
use crate::lemma_lab::lemma2_value;

/// Relative slack used when deciding `z ∈ A` for points placed on `∂A`.
pub(crate) const RIM_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Disc {
    pub center: Complex64,
    pub r: f64,
    pub big_r: f64,
}

impl Disc {
    pub fn in_a(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.r * (1.0 + RIM_SLACK)
    }

    pub fn in_d(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.big_r
    }

    pub fn h(&self, z: Complex64) -> f64 {
        if self.in_a(z) {
            0.0
        } else {
            ((z - self.center).norm() / self.r).ln() / (self.big_r / self.r).ln()
        }
    }
}

/// Counters and worst cases for one recursion depth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelStats {
    pub depth: usize,
    pub direct: u64,
    pub frozen_thin: u64,
    pub frozen_full: u64,
    pub series: u64,
    /// Largest `|z_p - c|/R · (R/r)^{h_base}` among series evaluations.
    pub max_tail_ratio: f64,
    /// Fewest resolved coefficients in any series at this depth.
    pub min_resolved: Option<usize>,
    pub max_noise_floor: f64,
}

impl LevelStats {
    fn new(depth: usize) -> Self {
        LevelStats {
            depth,
            direct: 0,
            frozen_thin: 0,
            frozen_full: 0,
            series: 0,
            max_tail_ratio: 0.0,
            min_resolved: None,
            max_noise_floor: 0.0,
        }
    }
}

enum Step {
    Direct,
    FrozenThin,
    FrozenFull,
    Series { ratio: f64, resolved: usize, noise: f64 },
}

/// `max(0, Σh - k + 1)`: the extremal function of `(X̂_{n,k-1}, X̂_{n,k})`.
pub(crate) fn base_level(hs: &[f64], k: usize) -> f64 {
    if k >= 2 && k <= hs.len() {
        if let Ok(v) = lemma2_value(hs, k) {
            return v;
        }
    }
    (hs.iter().sum::<f64>() - k as f64 + 1.0).max(0.0)
}

#[derive(Debug)]
pub(crate) struct Engine {
    f: CrossFunction,
    discs: Vec<Disc>,
    m: usize,
    stats: Mutex<Vec<LevelStats>>,
}

impl Engine {
    pub fn new(f: CrossFunction, opts: &ExtendOptions) -> Result<Self> {
        opts.validate()?;
        let n = f.spec().n();
        if n > 4 {
            return Err(Error::RecursionBudget(n));
        }
        Ok(Engine {
            discs: f.discs().to_vec(),
            f,
            m: opts.m,
            stats: Mutex::new(Vec::new()),
        })
    }

    pub fn function(&self) -> &CrossFunction {
        &self.f
    }

    pub fn truncation(&self) -> usize {
        self.m
    }

    pub fn disc(&self, j: usize) -> Disc {
        self.discs[j]
    }

    pub fn h_checked(&self, j: usize, z: Complex64) -> Result<f64> {
        let d = self.discs[j];
        if !d.in_d(z) {
            return Err(Error::OutsideDomain(z.into()));
        }
        Ok(d.h(z))
    }

    pub fn levels(&self) -> Vec<LevelStats> {
        self.stats.lock().expect("stats lock").clone()
    }

    fn record(&self, depth: usize, step: Step) {
        let mut stats = self.stats.lock().expect("stats lock");
        while stats.len() <= depth {
            let d = stats.len();
            stats.push(LevelStats::new(d));
        }
        let s = &mut stats[depth];
        match step {
            Step::Direct => s.direct += 1,
            Step::FrozenThin => s.frozen_thin += 1,
            Step::FrozenFull => s.frozen_full += 1,
            Step::Series { ratio, resolved, noise } => {
                s.series += 1;
                s.max_tail_ratio = s.max_tail_ratio.max(ratio);
                s.min_resolved = Some(s.min_resolved.map_or(resolved, |r| r.min(resolved)));
                s.max_noise_floor = s.max_noise_floor.max(noise);
            }
        }
    }

    /// `f̂` of the restriction of `f` to the active factors, the others frozen at `z`.
    pub fn ext(&self, active: &[usize], k: usize, z: &[Complex64], depth: usize) -> Result<Complex64> {
        let outside = active.iter().filter(|&&j| !self.discs[j].in_a(z[j])).count();
        if active.len() <= k || outside <= k {
            self.record(depth, Step::Direct);
            return self.f.eval_complex(z);
        }
        let without = |p: usize| -> Vec<usize> { active.iter().copied().filter(|&j| j != p).collect() };

        if let Some(&j) = active.iter().find(|&&j| self.discs[j].in_a(z[j])) {
            self.record(depth, Step::FrozenThin);
            return self.ext(&without(j), k, z, depth + 1);
        }

        let hs: Vec<f64> = active.iter().map(|&j| self.discs[j].h(z[j])).collect();
        let sum: f64 = hs.iter().sum();
        let (i_max, h_max) = argext(&hs, |a, b| a > b);
        if sum - h_max < k as f64 - 1.0 {
            self.record(depth, Step::FrozenFull);
            return self.ext(&without(active[i_max]), k - 1, z, depth + 1);
        }

        let (i_min, _) = argext(&hs, |a, b| a < b);
        let p = active[i_min];
        let rest = without(p);
        let rest_h: Vec<f64> = hs.iter().enumerate().filter(|&(i, _)| i != i_min).map(|(_, &h)| h).collect();
        let h_base = base_level(&rest_h, k);
        let disc = self.discs[p];
        let u = (z[p] - disc.center).norm();
        let ratio = u / disc.big_r * (disc.big_r / disc.r).powf(h_base);
        if !(ratio < 1.0) {
            return Err(Error::NotConverged { ratio });
        }
        let coeffs = hartogs_coeffs(
            |w| {
                let mut zz = z.to_vec();
                zz[p] = w;
                self.ext(&rest, k, &zz, depth + 1)
            },
            disc.center.into(),
            disc.r,
            self.m,
            self.f.sup_bound(),
        )?;
        self.record(
            depth,
            Step::Series {
                ratio,
                resolved: coeffs.resolved,
                noise: coeffs.noise_floor,
            },
        );
        Ok(coeffs.eval(z[p]))
    }
}

/// First index whose value wins every comparison `better(candidate, current)`.
fn argext(v: &[f64], better: impl Fn(f64, f64) -> bool) -> (usize, f64) {
    let mut best = (0, v[0]);
    for (i, &x) in v.iter().enumerate().skip(1) {
        if better(x, best.1) {
            best = (i, x);
        }
    }
    best
}
