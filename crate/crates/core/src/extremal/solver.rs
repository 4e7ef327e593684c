use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{CPoint, Condenser, Grid, Mask};

/// Stopping rule and relaxation for the red-black sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions {
    /// Largest per-node correction allowed in the final sweep.
    pub tol: f64,
    pub max_sweeps: usize,
    /// Over-relaxation factor; `None` picks the square-grid optimum for the grid size.
    pub omega: Option<f64>,
    /// Split each half-sweep across rayon workers. Output is bit-identical either way.
    pub parallel: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-8,
            max_sweeps: 100_000,
            omega: None,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NodeKind {
    /// Not in `D`; acts as ghost data 1 for its neighbours.
    Outside,
    /// In `D` with a cell meeting `∂D`: Dirichlet 1.
    Rim,
    /// In `A`: Dirichlet 0.
    Set,
    Free,
}

/// Nodal values of `h_{A,D}` on a grid. Nodes outside `D` are absent.
///
/// For the fat compact sets used here the upper regularization `h*` coincides
/// with `h`, so the field represents both.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<Option<f64>>,
    iterations: usize,
    residual: f64,
}

impl ScalarField {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> Option<f64> {
        self.values[self.grid.index(i, j)]
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn present(&self) -> impl Iterator<Item = (usize, CPoint, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(idx, v)| v.map(|v| (idx, self.grid.node_at(idx), v)))
    }

    /// Bilinear interpolation when the four surrounding nodes are present,
    /// nearest-node value otherwise.
    pub fn sample(&self, z: CPoint) -> Option<f64> {
        let g = &self.grid;
        let fx = (z.re - g.rect.x_min) / g.hx();
        let fy = (z.im - g.rect.y_min) / g.hy();
        if fx >= 0.0 && fy >= 0.0 && fx < (g.nx - 1) as f64 && fy < (g.ny - 1) as f64 {
            let (i, j) = (fx.floor() as usize, fy.floor() as usize);
            let (tx, ty) = (fx - i as f64, fy - j as f64);
            if let (Some(v00), Some(v10), Some(v01), Some(v11)) = (
                self.value(i, j),
                self.value(i + 1, j),
                self.value(i, j + 1),
                self.value(i + 1, j + 1),
            ) {
                return Some(
                    (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11),
                );
            }
        }
        let (i, j) = g.nearest(z)?;
        self.value(i, j)
    }

    /// Present nodes with value `< mu`.
    pub fn sublevel_mask(&self, mu: f64) -> Mask {
        let cells = self.values.iter().map(|v| v.is_some_and(|v| v < mu)).collect();
        Mask::new(self.grid, cells).expect("same grid")
    }

    /// Present nodes with value `<= mu`.
    pub fn closed_sublevel_mask(&self, mu: f64) -> Mask {
        let cells = self.values.iter().map(|v| v.is_some_and(|v| v <= mu)).collect();
        Mask::new(self.grid, cells).expect("same grid")
    }

    /// `re,im,h` rows for present nodes, row-major.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "re,im,h")?;
        for (_, p, v) in self.present() {
            writeln!(w, "{},{},{}", p.re, p.im, v)?;
        }
        Ok(())
    }
}

pub fn h_grid_solve(c: &Condenser, g: &Grid) -> Result<ScalarField> {
    h_grid_solve_with(c, g, &SolverOptions::default())
}

/// Discrete harmonic measure of `∂D` in `D \ A` (5-point stencil, red-black SOR).
pub fn h_grid_solve_with(c: &Condenser, g: &Grid, opts: &SolverOptions) -> Result<ScalarField> {
    if !g.rect.contains_rect(&c.d().bbox()) {
        return Err(Error::GridTooCoarse("grid does not cover the domain".into()));
    }
    let (hx, hy) = (g.hx(), g.hy());
    let spacing = hx.max(hy);
    if c.boundary_gap() < 3.0 * spacing {
        return Err(Error::GridTooCoarse(format!(
            "boundary gap {} spans fewer than 3 nodes of spacing {spacing}",
            c.boundary_gap()
        )));
    }

    let rim_reach = 0.5 * hx.hypot(hy);
    let kinds: Vec<NodeKind> = (0..g.len())
        .map(|idx| {
            let p = g.node_at(idx);
            if !c.d().contains(p) {
                NodeKind::Outside
            } else if c.a().contains(p) {
                NodeKind::Set
            } else if c.d().boundary_distance(p).is_some_and(|d| d < rim_reach) {
                NodeKind::Rim
            } else {
                NodeKind::Free
            }
        })
        .collect();
    if !kinds.contains(&NodeKind::Free) {
        return Err(Error::GridTooCoarse("no interior nodes between A and ∂D".into()));
    }

    let mut u: Vec<f64> = kinds
        .iter()
        .map(|k| match k {
            NodeKind::Set => 0.0,
            NodeKind::Free => 0.5,
            NodeKind::Outside | NodeKind::Rim => 1.0,
        })
        .collect();

    let nx = g.nx;
    let ny = g.ny;
    let wx = hy * hy / (2.0 * (hx * hx + hy * hy));
    let wy = hx * hx / (2.0 * (hx * hx + hy * hy));
    let omega = opts.omega.unwrap_or_else(|| {
        let n = nx.max(ny) as f64;
        2.0 / (1.0 + (std::f64::consts::PI / (n - 1.0)).sin())
    });

    let mut snapshot = u.clone();
    let mut sweeps = 0;
    let residual = loop {
        let mut res = 0.0f64;
        for color in 0..2 {
            snapshot.copy_from_slice(&u);
            let snap = &snapshot;
            let kinds = &kinds;
            let update_row = |(j, row): (usize, &mut [f64])| -> f64 {
                let mut r = 0.0f64;
                let base = j * nx;
                for i in ((color + j) % 2..nx).step_by(2) {
                    let idx = base + i;
                    if kinds[idx] != NodeKind::Free {
                        continue;
                    }
                    let east = if i + 1 < nx { snap[idx + 1] } else { 1.0 };
                    let west = if i > 0 { snap[idx - 1] } else { 1.0 };
                    let north = if j + 1 < ny { snap[idx + nx] } else { 1.0 };
                    let south = if j > 0 { snap[idx - nx] } else { 1.0 };
                    let delta = wx * (east + west) + wy * (north + south) - row[i];
                    r = r.max(delta.abs());
                    row[i] += omega * delta;
                }
                r
            };
            let r = if opts.parallel {
                u.par_chunks_mut(nx)
                    .enumerate()
                    .map(update_row)
                    .reduce(|| 0.0, f64::max)
            } else {
                u.chunks_mut(nx).enumerate().map(update_row).fold(0.0, f64::max)
            };
            res = res.max(r);
        }
        sweeps += 1;
        if !res.is_finite() {
            return Err(Error::NonFinite("solver residual".into()));
        }
        if res < opts.tol {
            break res;
        }
        if sweeps >= opts.max_sweeps {
            return Err(Error::NoConvergence {
                iterations: sweeps,
                residual: res,
            });
        }
    };

    let values = kinds
        .iter()
        .zip(&u)
        .map(|(k, &v)| match k {
            NodeKind::Outside => None,
            _ => Some(v.clamp(0.0, 1.0)),
        })
        .collect();
    Ok(ScalarField {
        grid: *g,
        values,
        iterations: sweeps,
        residual,
    })
}
