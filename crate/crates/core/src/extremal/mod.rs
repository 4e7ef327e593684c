//! Relative extremal functions of planar condensers.
//!
//! `h_{A,D}` is the supremum of subharmonic `u <= 1` on `D` with `u <= 0` on
//! `A`. For the regular planar condensers handled here it is the harmonic
//! measure of `∂D` in `D \ A`, available in closed form for concentric
//! configurations and from a grid solver otherwise.

mod closed_form;
mod solver;

pub use closed_form::h_closed_form;
pub use solver::{h_grid_solve, h_grid_solve_with, ScalarField, SolverOptions};

use crate::error::{Error, Result};
use crate::geometry::{CompactSet, Concentric, Condenser, Grid, PlanarDomain};

/// `Δ(μ) = {z ∈ D : h_{A,D}(z) < μ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SublevelSet {
    pub condenser: Condenser,
    pub mu: f64,
    pub realization: PlanarDomain,
}

impl SublevelSet {
    /// `{h <= μ}` as a compact set (exact for concentric realizations).
    pub fn closure(&self) -> Result<CompactSet> {
        match &self.realization {
            PlanarDomain::Disc { center, radius } => CompactSet::closed_disc(*center, *radius),
            PlanarDomain::Annulus { center, r_in, r_out } => {
                CompactSet::closed_annulus(*center, *r_in, *r_out)
            }
            PlanarDomain::GridMask(m) => CompactSet::grid_mask(m.clone()),
        }
    }
}

fn check_level(mu: f64) -> Result<()> {
    if mu > 0.0 && mu <= 1.0 {
        Ok(())
    } else {
        Err(Error::RangeError(format!("sublevel needs 0 < mu <= 1, got {mu}")))
    }
}

/// Exact sublevel set of a concentric condenser.
pub fn sublevel(c: &Condenser, mu: f64) -> Result<SublevelSet> {
    check_level(mu)?;
    let conc = c.concentric().ok_or(Error::UnsupportedGeometry(
        "exact sublevel sets need a concentric condenser; use sublevel_on_grid",
    ))?;
    // r * (R/r)^mu, pinned to R at mu = 1
    let level = |inner: f64, outer: f64| {
        if mu == 1.0 {
            outer
        } else {
            inner * (outer / inner).powf(mu)
        }
    };
    let realization = match conc {
        Concentric::DiscInDisc { center, r, big_r } => {
            PlanarDomain::disc(center, level(r, big_r))?
        }
        Concentric::AnnulusInDisc { center, b, big_r, .. } => {
            PlanarDomain::disc(center, level(b, big_r))?
        }
        Concentric::AnnulusInAnnulus { center, a, b, r_in, r_out } => {
            PlanarDomain::annulus(center, level(a, r_in), level(b, r_out))?
        }
    };
    Ok(SublevelSet {
        condenser: c.clone(),
        mu,
        realization,
    })
}

/// Sublevel set thresholded on the grid solution.
pub fn sublevel_on_grid(c: &Condenser, mu: f64, g: &Grid) -> Result<SublevelSet> {
    check_level(mu)?;
    let field = h_grid_solve(c, g)?;
    let realization = PlanarDomain::grid_mask(field.sublevel_mask(mu))?;
    Ok(SublevelSet {
        condenser: c.clone(),
        mu,
        realization,
    })
}

/// Relative extremal function of a product condenser from its factor values:
/// `h_{A_1×…×A_N, D_1×…×D_N}(z) = max_j h_{A_j,D_j}(z_j)`.
pub fn h_product(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::RangeError(format!("factor value {v} not in [0, 1]")));
    }
    Ok(values.iter().cloned().fold(0.0, f64::max))
}
