//! Planar domains, compact sets, condensers and sampling grids.
//!
//! Open domains exclude their boundary, compact sets include it. Grid masks use
//! nearest-node membership: a point belongs to the mask when the grid node
//! closest to it is set.

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CPoint {
    pub re: f64,
    pub im: f64,
}

impl CPoint {
    pub const ORIGIN: CPoint = CPoint { re: 0.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        CPoint { re, im }
    }

    pub fn checked(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() {
            Ok(CPoint { re, im })
        } else {
            Err(Error::NonFinite(format!("point ({re}, {im})")))
        }
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn dist(self, other: CPoint) -> f64 {
        (self.re - other.re).hypot(self.im - other.im)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl From<Complex64> for CPoint {
    fn from(z: Complex64) -> Self {
        CPoint::new(z.re, z.im)
    }
}

impl From<CPoint> for Complex64 {
    fn from(p: CPoint) -> Self {
        p.to_complex()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let ok = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite())
            && x_max > x_min
            && y_max > y_min;
        if !ok {
            return Err(Error::InvalidGeometry(format!(
                "degenerate rectangle [{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        Ok(Rect { x_min, x_max, y_min, y_max })
    }

    pub fn square(center: CPoint, half_width: f64) -> Result<Self> {
        Rect::new(
            center.re - half_width,
            center.re + half_width,
            center.im - half_width,
            center.im + half_width,
        )
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.x_min <= other.x_min
            && self.x_max >= other.x_max
            && self.y_min <= other.y_min
            && self.y_max >= other.y_max
    }
}

/// Uniform node lattice over a rectangle, row-major (row index follows `im`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub rect: Rect,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn new(rect: Rect, nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidGeometry(format!(
                "grid needs at least 2 nodes per axis, got {nx} x {ny}"
            )));
        }
        Ok(Grid { rect, nx, ny })
    }

    /// Grid whose outermost two node layers lie outside `bbox`.
    pub fn covering(bbox: Rect, nx: usize, ny: usize) -> Result<Self> {
        if nx < 6 || ny < 6 {
            return Err(Error::GridTooCoarse(format!(
                "covering grid needs at least 6 nodes per axis, got {nx} x {ny}"
            )));
        }
        let hx = (bbox.x_max - bbox.x_min) / (nx - 5) as f64;
        let hy = (bbox.y_max - bbox.y_min) / (ny - 5) as f64;
        let rect = Rect::new(
            bbox.x_min - 2.0 * hx,
            bbox.x_max + 2.0 * hx,
            bbox.y_min - 2.0 * hy,
            bbox.y_max + 2.0 * hy,
        )?;
        Grid::new(rect, nx, ny)
    }

    pub fn hx(&self) -> f64 {
        (self.rect.x_max - self.rect.x_min) / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        (self.rect.y_max - self.rect.y_min) / (self.ny - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }

    pub fn node(&self, i: usize, j: usize) -> CPoint {
        CPoint::new(
            self.rect.x_min + i as f64 * self.hx(),
            self.rect.y_min + j as f64 * self.hy(),
        )
    }

    pub fn node_at(&self, idx: usize) -> CPoint {
        let (i, j) = self.coords(idx);
        self.node(i, j)
    }

    /// Nearest node, or `None` when `z` is more than half a spacing outside the rectangle.
    pub fn nearest(&self, z: CPoint) -> Option<(usize, usize)> {
        let fi = (z.re - self.rect.x_min) / self.hx();
        let fj = (z.im - self.rect.y_min) / self.hy();
        let i = fi.round();
        let j = fj.round();
        if !(i >= 0.0 && j >= 0.0 && i <= (self.nx - 1) as f64 && j <= (self.ny - 1) as f64) {
            return None;
        }
        Some((i as usize, j as usize))
    }

    /// Indices of the 4-neighbours of node `(i, j)` that exist in the grid.
    pub fn neighbours(&self, i: usize, j: usize) -> impl Iterator<Item = (usize, usize)> {
        let (nx, ny) = (self.nx, self.ny);
        let cand = [
            (i.wrapping_sub(1), j),
            (i + 1, j),
            (i, j.wrapping_sub(1)),
            (i, j + 1),
        ];
        cand.into_iter().filter(move |&(a, b)| a < nx && b < ny)
    }
}

/// Boolean field on a grid with nearest-node point membership.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    grid: Grid,
    cells: Vec<bool>,
}

impl Mask {
    pub fn new(grid: Grid, cells: Vec<bool>) -> Result<Self> {
        if cells.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: cells.len(),
            });
        }
        Ok(Mask { grid, cells })
    }

    pub fn from_fn(grid: Grid, mut pred: impl FnMut(CPoint) -> bool) -> Self {
        let cells = (0..grid.len()).map(|idx| pred(grid.node_at(idx))).collect();
        Mask { grid, cells }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[self.grid.index(i, j)]
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn contains(&self, z: CPoint) -> bool {
        self.grid.nearest(z).is_some_and(|(i, j)| self.get(i, j))
    }

    /// 4-connectivity of the set nodes. An empty mask counts as disconnected.
    pub fn is_connected(&self) -> bool {
        let Some(start) = self.cells.iter().position(|&c| c) else {
            return false;
        };
        let mut seen = vec![false; self.cells.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut reached = 1;
        while let Some(idx) = queue.pop_front() {
            let (i, j) = self.grid.coords(idx);
            for (a, b) in self.grid.neighbours(i, j) {
                let n = self.grid.index(a, b);
                if self.cells[n] && !seen[n] {
                    seen[n] = true;
                    reached += 1;
                    queue.push_back(n);
                }
            }
        }
        reached == self.count()
    }

    fn bbox(&self) -> Rect {
        let (hx, hy) = (self.grid.hx(), self.grid.hy());
        let mut r = Rect {
            x_min: f64::INFINITY,
            x_max: f64::NEG_INFINITY,
            y_min: f64::INFINITY,
            y_max: f64::NEG_INFINITY,
        };
        for (idx, _) in self.cells.iter().enumerate().filter(|(_, c)| **c) {
            let p = self.grid.node_at(idx);
            r.x_min = r.x_min.min(p.re - 0.5 * hx);
            r.x_max = r.x_max.max(p.re + 0.5 * hx);
            r.y_min = r.y_min.min(p.im - 0.5 * hy);
            r.y_max = r.y_max.max(p.im + 0.5 * hy);
        }
        r
    }

    /// Set nodes with at least one unset (or missing) 4-neighbour.
    fn edge_nodes(&self) -> Vec<CPoint> {
        let g = &self.grid;
        (0..g.len())
            .filter(|&idx| self.cells[idx])
            .filter(|&idx| {
                let (i, j) = g.coords(idx);
                i == 0
                    || j == 0
                    || i + 1 == g.nx
                    || j + 1 == g.ny
                    || g.neighbours(i, j).any(|(a, b)| !self.get(a, b))
            })
            .map(|idx| g.node_at(idx))
            .collect()
    }

    /// Midpoints between set nodes and their unset (or virtual, beyond the
    /// rectangle) neighbours: the discrete boundary under nearest-node semantics.
    fn boundary_points(&self) -> Vec<CPoint> {
        let g = &self.grid;
        let (hx, hy) = (g.hx(), g.hy());
        let mut out = Vec::new();
        for idx in (0..g.len()).filter(|&idx| self.cells[idx]) {
            let (i, j) = g.coords(idx);
            let p = g.node(i, j);
            let steps = [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)];
            for (di, dj) in steps {
                let a = i as i64 + di;
                let b = j as i64 + dj;
                let inside_grid = a >= 0 && b >= 0 && (a as usize) < g.nx && (b as usize) < g.ny;
                if !inside_grid || !self.get(a as usize, b as usize) {
                    out.push(CPoint::new(
                        p.re + 0.5 * di as f64 * hx,
                        p.im + 0.5 * dj as f64 * hy,
                    ));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlanarDomain {
    Disc { center: CPoint, radius: f64 },
    Annulus { center: CPoint, r_in: f64, r_out: f64 },
    GridMask(Mask),
}

impl PlanarDomain {
    pub fn disc(center: CPoint, radius: f64) -> Result<Self> {
        check_center(center)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidGeometry(format!("disc radius {radius}")));
        }
        Ok(PlanarDomain::Disc { center, radius })
    }

    pub fn annulus(center: CPoint, r_in: f64, r_out: f64) -> Result<Self> {
        check_center(center)?;
        if !(r_in > 0.0 && r_in < r_out && r_out.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "annulus radii {r_in}, {r_out}"
            )));
        }
        Ok(PlanarDomain::Annulus { center, r_in, r_out })
    }

    pub fn grid_mask(mask: Mask) -> Result<Self> {
        if !mask.is_connected() {
            return Err(Error::InvalidGeometry(
                "grid-mask domain must be nonempty and 4-connected".into(),
            ));
        }
        Ok(PlanarDomain::GridMask(mask))
    }

    pub fn contains(&self, z: CPoint) -> bool {
        match self {
            PlanarDomain::Disc { center, radius } => z.dist(*center) < *radius,
            PlanarDomain::Annulus { center, r_in, r_out } => {
                let d = z.dist(*center);
                *r_in < d && d < *r_out
            }
            PlanarDomain::GridMask(m) => m.contains(z),
        }
    }

    pub fn bbox(&self) -> Rect {
        match self {
            PlanarDomain::Disc { center, radius } => square_bbox(*center, *radius),
            PlanarDomain::Annulus { center, r_out, .. } => square_bbox(*center, *r_out),
            PlanarDomain::GridMask(m) => m.bbox(),
        }
    }

    /// Signed distance to the boundary (positive inside) for disc and annulus kinds.
    pub fn boundary_distance(&self, z: CPoint) -> Option<f64> {
        match self {
            PlanarDomain::Disc { center, radius } => Some(radius - z.dist(*center)),
            PlanarDomain::Annulus { center, r_in, r_out } => {
                let d = z.dist(*center);
                Some((r_out - d).min(d - r_in))
            }
            PlanarDomain::GridMask(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CompactSet {
    ClosedDisc { center: CPoint, radius: f64 },
    ClosedAnnulus { center: CPoint, r_in: f64, r_out: f64 },
    GridMask(Mask),
}

impl CompactSet {
    pub fn closed_disc(center: CPoint, radius: f64) -> Result<Self> {
        check_center(center)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "closed disc radius {radius} (sets without interior are not supported)"
            )));
        }
        Ok(CompactSet::ClosedDisc { center, radius })
    }

    pub fn closed_annulus(center: CPoint, r_in: f64, r_out: f64) -> Result<Self> {
        check_center(center)?;
        if !(r_in > 0.0 && r_in < r_out && r_out.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "closed annulus radii {r_in}, {r_out}"
            )));
        }
        Ok(CompactSet::ClosedAnnulus { center, r_in, r_out })
    }

    pub fn grid_mask(mask: Mask) -> Result<Self> {
        if mask.count() == 0 {
            return Err(Error::InvalidGeometry("empty grid-mask compact set".into()));
        }
        Ok(CompactSet::GridMask(mask))
    }

    pub fn contains(&self, z: CPoint) -> bool {
        match self {
            CompactSet::ClosedDisc { center, radius } => z.dist(*center) <= *radius,
            CompactSet::ClosedAnnulus { center, r_in, r_out } => {
                let d = z.dist(*center);
                *r_in <= d && d <= *r_out
            }
            CompactSet::GridMask(m) => m.contains(z),
        }
    }

    pub fn bbox(&self) -> Rect {
        match self {
            CompactSet::ClosedDisc { center, radius } => square_bbox(*center, *radius),
            CompactSet::ClosedAnnulus { center, r_out, .. } => square_bbox(*center, *r_out),
            CompactSet::GridMask(m) => m.bbox(),
        }
    }

    /// Euclidean distance from `z` to the disc or annulus (zero inside).
    fn analytic_distance(&self, z: CPoint) -> Option<f64> {
        match self {
            CompactSet::ClosedDisc { center, radius } => Some((z.dist(*center) - radius).max(0.0)),
            CompactSet::ClosedAnnulus { center, r_in, r_out } => {
                let d = z.dist(*center);
                Some((d - r_out).max(r_in - d).max(0.0))
            }
            CompactSet::GridMask(_) => None,
        }
    }

    /// A point known to lie in the set.
    fn witness_point(&self) -> CPoint {
        match self {
            CompactSet::ClosedDisc { center, .. } => *center,
            CompactSet::ClosedAnnulus { center, r_in, r_out } => {
                CPoint::new(center.re + 0.5 * (r_in + r_out), center.im)
            }
            CompactSet::GridMask(m) => {
                let idx = m.cells.iter().position(|&c| c).unwrap_or(0);
                m.grid.node_at(idx)
            }
        }
    }
}

/// Concentric disc/annulus configurations with closed-form extremal functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Concentric {
    /// `A = {|z-c| <= r}`, `D = {|z-c| < big_r}`.
    DiscInDisc { center: CPoint, r: f64, big_r: f64 },
    /// `A = {a <= |z-c| <= b}`, `D = {|z-c| < big_r}`.
    AnnulusInDisc { center: CPoint, a: f64, b: f64, big_r: f64 },
    /// `A = {a <= |z-c| <= b}`, `D = {r_in < |z-c| < r_out}`.
    AnnulusInAnnulus { center: CPoint, a: f64, b: f64, r_in: f64, r_out: f64 },
}

/// A compact set `A` inside a domain `D` at positive distance from `∂D`.
#[derive(Debug, Clone, PartialEq)]
pub struct Condenser {
    a: CompactSet,
    d: PlanarDomain,
    gap: f64,
}

impl Condenser {
    pub fn new(a: CompactSet, d: PlanarDomain) -> Result<Self> {
        let gap = boundary_gap(&a, &d)?;
        Ok(Condenser { a, d, gap })
    }

    /// Closed disc of radius `r` inside the open disc of radius `big_r`, both centred at `center`.
    pub fn concentric_discs(center: CPoint, r: f64, big_r: f64) -> Result<Self> {
        Condenser::new(
            CompactSet::closed_disc(center, r)?,
            PlanarDomain::disc(center, big_r)?,
        )
    }

    pub fn a(&self) -> &CompactSet {
        &self.a
    }

    pub fn d(&self) -> &PlanarDomain {
        &self.d
    }

    pub fn boundary_gap(&self) -> f64 {
        self.gap
    }

    pub fn concentric(&self) -> Option<Concentric> {
        match (&self.a, &self.d) {
            (
                CompactSet::ClosedDisc { center, radius },
                PlanarDomain::Disc { center: c2, radius: big_r },
            ) if center == c2 => Some(Concentric::DiscInDisc {
                center: *center,
                r: *radius,
                big_r: *big_r,
            }),
            (
                CompactSet::ClosedAnnulus { center, r_in, r_out },
                PlanarDomain::Disc { center: c2, radius: big_r },
            ) if center == c2 => Some(Concentric::AnnulusInDisc {
                center: *center,
                a: *r_in,
                b: *r_out,
                big_r: *big_r,
            }),
            (
                CompactSet::ClosedAnnulus { center, r_in: a, r_out: b },
                PlanarDomain::Annulus { center: c2, r_in, r_out },
            ) if center == c2 => Some(Concentric::AnnulusInAnnulus {
                center: *center,
                a: *a,
                b: *b,
                r_in: *r_in,
                r_out: *r_out,
            }),
            _ => None,
        }
    }

    /// `(center, r, R)` when this is a pair of concentric discs.
    pub fn disc_radii(&self) -> Option<(CPoint, f64, f64)> {
        match self.concentric()? {
            Concentric::DiscInDisc { center, r, big_r } => Some((center, r, big_r)),
            _ => None,
        }
    }
}

/// Infimum of the distance between `a` and `∂d`; fails unless `a` sits strictly inside `d`.
pub fn boundary_gap(a: &CompactSet, d: &PlanarDomain) -> Result<f64> {
    let gap = match (a, d) {
        (
            CompactSet::ClosedDisc { center: c1, radius: r },
            PlanarDomain::Disc { center: c2, radius: big_r },
        ) => big_r - c1.dist(*c2) - r,
        (
            CompactSet::ClosedDisc { center: c1, radius: r },
            PlanarDomain::Annulus { center: c2, r_in, r_out },
        ) => {
            let d = c1.dist(*c2);
            (r_out - d - r).min(d - r - r_in)
        }
        (
            CompactSet::ClosedAnnulus { center: c1, r_out: b, .. },
            PlanarDomain::Disc { center: c2, radius: big_r },
        ) => big_r - c1.dist(*c2) - b,
        (
            CompactSet::ClosedAnnulus { center: c1, r_in: a_in, r_out: b },
            PlanarDomain::Annulus { center: c2, r_in, r_out },
        ) => {
            let d = c1.dist(*c2);
            // the hole of D sits either inside the hole of A or entirely beside A
            let inner = (a_in - d - r_in).max(d - b - r_in);
            (r_out - d - b).min(inner)
        }
        (CompactSet::GridMask(m), PlanarDomain::GridMask(dm)) => {
            let half = 0.5 * m.grid.hx().max(m.grid.hy());
            if m.cells.iter().enumerate().any(|(idx, &c)| c && !dm.contains(m.grid.node_at(idx))) {
                return Err(Error::NonpositiveGap { gap: 0.0 });
            }
            let edges = m.edge_nodes();
            let bnd = dm.boundary_points();
            min_pair_distance(&edges, &bnd) - half
        }
        (CompactSet::GridMask(m), analytic) => {
            let half = 0.5 * m.grid.hx().max(m.grid.hy());
            let mut g = f64::INFINITY;
            for (idx, _) in m.cells.iter().enumerate().filter(|(_, c)| **c) {
                let bd = analytic
                    .boundary_distance(m.grid.node_at(idx))
                    .expect("analytic domain");
                g = g.min(bd);
            }
            g - half
        }
        (analytic, PlanarDomain::GridMask(dm)) => {
            if !dm.contains(analytic.witness_point()) {
                return Err(Error::NonpositiveGap { gap: 0.0 });
            }
            dm.boundary_points()
                .into_iter()
                .map(|q| analytic.analytic_distance(q).expect("analytic set"))
                .fold(f64::INFINITY, f64::min)
        }
    };
    if gap > 0.0 && gap.is_finite() {
        Ok(gap)
    } else {
        Err(Error::NonpositiveGap { gap })
    }
}

fn min_pair_distance(xs: &[CPoint], ys: &[CPoint]) -> f64 {
    let mut best = f64::INFINITY;
    for x in xs {
        for y in ys {
            best = best.min(x.dist(*y));
        }
    }
    best
}

fn check_center(c: CPoint) -> Result<()> {
    if c.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(format!("center {c:?}")))
    }
}

fn square_bbox(c: CPoint, r: f64) -> Rect {
    Rect {
        x_min: c.re - r,
        x_max: c.re + r,
        y_min: c.im - r,
        y_max: c.im + r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::random_in_rect;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const O: CPoint = CPoint::ORIGIN;

    #[test]
    fn contains_examples() {
        let d = PlanarDomain::disc(O, 1.0).unwrap();
        assert!(d.contains(O));
        assert!(!d.contains(CPoint::new(1.0, 0.0)));
        let a = CompactSet::closed_disc(O, 0.2).unwrap();
        assert!(a.contains(CPoint::new(0.2, 0.0)));
        let ann = PlanarDomain::annulus(O, 0.5, 1.0).unwrap();
        assert!(!ann.contains(CPoint::new(0.5, 0.0)));
        assert!(ann.contains(CPoint::new(0.0, 0.75)));
    }

    #[test]
    fn gap_examples() {
        let gap = |r: f64| Condenser::concentric_discs(O, r, 1.0).map(|c| c.boundary_gap());
        assert!((gap(0.2).unwrap() - 0.8).abs() < 1e-15);
        assert!((gap(0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(gap(1.0), Err(Error::NonpositiveGap { .. })));
    }

    #[test]
    fn gap_for_annuli_and_offset_discs() {
        let a = CompactSet::closed_annulus(O, 0.4, 0.6).unwrap();
        let d = PlanarDomain::annulus(O, 0.2, 1.0).unwrap();
        assert!((boundary_gap(&a, &d).unwrap() - 0.2).abs() < 1e-15);
        let off = CompactSet::closed_disc(CPoint::new(0.5, 0.0), 0.2).unwrap();
        let disc = PlanarDomain::disc(O, 1.0).unwrap();
        assert!((boundary_gap(&off, &disc).unwrap() - 0.3).abs() < 1e-15);
        // disc swallowing the hole of an annulus is not contained in it
        let big = CompactSet::closed_disc(O, 0.5).unwrap();
        assert!(boundary_gap(&big, &d).is_err());
    }

    #[test]
    fn gap_with_masks_matches_analytic_within_spacing() {
        let g = Grid::covering(Rect::square(O, 1.0).unwrap(), 129, 129).unwrap();
        let h = g.hx();
        let a_mask = CompactSet::grid_mask(Mask::from_fn(g, |p| p.dist(O) <= 0.3)).unwrap();
        let d_disc = PlanarDomain::disc(O, 1.0).unwrap();
        let gap = boundary_gap(&a_mask, &d_disc).unwrap();
        assert!((gap - 0.7).abs() <= 1.5 * h, "gap {gap}");

        let d_mask = PlanarDomain::grid_mask(Mask::from_fn(g, |p| p.dist(O) < 0.9)).unwrap();
        let a_disc = CompactSet::closed_disc(O, 0.3).unwrap();
        let gap = boundary_gap(&a_disc, &d_mask).unwrap();
        assert!((gap - 0.6).abs() <= 1.5 * h, "gap {gap}");
        let gap = boundary_gap(&a_mask, &d_mask).unwrap();
        assert!((gap - 0.6).abs() <= 1.5 * h, "gap {gap}");

        let outside = CompactSet::closed_disc(CPoint::new(3.0, 0.0), 0.1).unwrap();
        assert!(boundary_gap(&outside, &d_mask).is_err());
    }

    #[test]
    fn grid_mask_domain_requires_connectivity() {
        let g = Grid::covering(Rect::square(O, 1.0).unwrap(), 41, 41).unwrap();
        let two = Mask::from_fn(g, |p| {
            p.dist(CPoint::new(-0.5, 0.0)) < 0.2 || p.dist(CPoint::new(0.5, 0.0)) < 0.2
        });
        assert!(!two.is_connected());
        assert!(PlanarDomain::grid_mask(two).is_err());
        let one = Mask::from_fn(g, |p| p.dist(O) < 0.8);
        assert!(PlanarDomain::grid_mask(one).is_ok());
    }

    #[test]
    fn nearest_node_membership() {
        let g = Grid::new(Rect::new(0.0, 1.0, 0.0, 1.0).unwrap(), 11, 11).unwrap();
        let mut cells = vec![false; g.len()];
        cells[g.index(3, 4)] = true;
        let m = Mask::new(g, cells).unwrap();
        assert!(m.contains(CPoint::new(0.31, 0.38)));
        assert!(!m.contains(CPoint::new(0.36, 0.4)));
        assert!(!m.contains(CPoint::new(-0.2, 0.4)));
    }

    #[test]
    fn compact_set_lies_in_domain_on_random_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let fixtures = [
            Condenser::concentric_discs(O, 0.2, 1.0).unwrap(),
            Condenser::new(
                CompactSet::closed_annulus(O, 0.3, 0.5).unwrap(),
                PlanarDomain::annulus(O, 0.1, 1.0).unwrap(),
            )
            .unwrap(),
            Condenser::new(
                CompactSet::closed_disc(CPoint::new(0.3, -0.2), 0.25).unwrap(),
                PlanarDomain::disc(CPoint::new(0.1, 0.0), 1.2).unwrap(),
            )
            .unwrap(),
        ];
        for c in &fixtures {
            assert!(c.boundary_gap() > 0.0);
            let bbox = c.d().bbox();
            for _ in 0..10_000 {
                let z = random_in_rect(&mut rng, &bbox);
                if c.a().contains(z) {
                    assert!(c.d().contains(z), "{z:?}");
                }
            }
        }
    }
}
