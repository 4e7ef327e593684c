//! (N,k)-crosses, their envelopes, the one-step decomposition and the
//! embeddings `i_{a,α}`.
//!
//! `X_{N,k}` is the union over patterns `α ∈ {0,1}^N` with `|α| = k` of the
//! products taking `D_j` where `α_j = 1` and `A_j` where `α_j = 0`. The
//! envelope `X̂_{N,k}` is `{z ∈ D_1×…×D_N : Σ h_j(z_j) < k}`.

use crate::error::{Error, Result};
use crate::extremal::{h_closed_form, ScalarField};
use crate::geometry::{CPoint, Condenser, Grid, Mask};

#[derive(Debug, Clone, PartialEq)]
pub struct CrossSpec {
    factors: Vec<Condenser>,
    k: usize,
}

impl CrossSpec {
    pub fn new(factors: Vec<Condenser>, k: usize) -> Result<Self> {
        let n = factors.len();
        if n < 2 {
            return Err(Error::RangeError(format!("a cross needs N >= 2 factors, got {n}")));
        }
        if k < 1 || k > n {
            return Err(Error::RangeError(format!("order k = {k} not in 1..={n}")));
        }
        Ok(CrossSpec { factors, k })
    }

    /// `n` copies of the concentric pair `{|z| <= r} ⊂ {|z| < big_r}`.
    pub fn uniform_discs(n: usize, k: usize, r: f64, big_r: f64) -> Result<Self> {
        let c = Condenser::concentric_discs(CPoint::ORIGIN, r, big_r)?;
        CrossSpec::new(vec![c; n], k)
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn factors(&self) -> &[Condenser] {
        &self.factors
    }

    pub fn with_order(&self, k: usize) -> Result<Self> {
        CrossSpec::new(self.factors.clone(), k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlphaPattern(pub Vec<bool>);

impl AlphaPattern {
    pub fn popcount(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All patterns of length `n` with exactly `k` set bits, in lexicographic bitmask order.
    pub fn all(n: usize, k: usize) -> Vec<AlphaPattern> {
        (0u32..(1 << n))
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| AlphaPattern((0..n).map(|j| m >> j & 1 == 1).collect()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossPoint(pub Vec<CPoint>);

impl CrossPoint {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[CPoint] {
        &self.0
    }
}

fn check_dim(z: &CrossPoint, spec: &CrossSpec) -> Result<()> {
    if z.len() != spec.n() {
        return Err(Error::DimensionMismatch {
            expected: spec.n(),
            got: z.len(),
        });
    }
    Ok(())
}

/// `z ∈ X_{N,k}`.
///
/// A pattern fits iff every coordinate outside its `A_j` lies in `D_j` and is
/// marked full; since `A_j ⊂ D_j` this holds iff at most `k` coordinates lie
/// in `D_j \ A_j` and none lies outside `D_j`.
pub fn member_cross(z: &CrossPoint, spec: &CrossSpec) -> Result<bool> {
    check_dim(z, spec)?;
    let mut forced = 0;
    for (c, &p) in spec.factors().iter().zip(z.coords()) {
        if c.a().contains(p) {
            continue;
        }
        if !c.d().contains(p) {
            return Ok(false);
        }
        forced += 1;
    }
    Ok(forced <= spec.k())
}

/// Per-factor relative extremal function used for envelope membership.
pub trait ExtremalEval: Sync {
    fn h(&self, j: usize, c: &Condenser, z: CPoint) -> Result<f64>;
}

/// Closed forms for concentric factors.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedForm;

impl ExtremalEval for ClosedForm {
    fn h(&self, _j: usize, c: &Condenser, z: CPoint) -> Result<f64> {
        h_closed_form(c, z)
    }
}

/// Solved grid fields, one per factor, sampled bilinearly.
#[derive(Debug, Clone)]
pub struct GridFields(pub Vec<ScalarField>);

impl ExtremalEval for GridFields {
    fn h(&self, j: usize, c: &Condenser, z: CPoint) -> Result<f64> {
        if !c.d().contains(z) {
            return Err(Error::OutsideDomain(z));
        }
        let field = self.0.get(j).ok_or(Error::DimensionMismatch {
            expected: j + 1,
            got: self.0.len(),
        })?;
        field.sample(z).ok_or(Error::OutsideDomain(z))
    }
}

/// `Σ_j h_j(z_j)`; every coordinate must lie in its domain.
pub fn envelope_sum(z: &CrossPoint, spec: &CrossSpec, eval: &dyn ExtremalEval) -> Result<f64> {
    check_dim(z, spec)?;
    let mut sum = 0.0;
    for (j, (c, &p)) in spec.factors().iter().zip(z.coords()).enumerate() {
        if !c.d().contains(p) {
            return Err(Error::OutsideDomain(p));
        }
        sum += eval.h(j, c, p)?;
    }
    Ok(sum)
}

/// `z ∈ X̂_{N,k}`, decided by the strict inequality `Σ h_j(z_j) < k`.
pub fn member_envelope(z: &CrossPoint, spec: &CrossSpec, eval: &dyn ExtremalEval) -> Result<bool> {
    Ok(envelope_sum(z, spec, eval)? < spec.k() as f64)
}

/// `X_{N,k} = (X_{N-1,k-1} × D_N) ∪ (X_{N-1,k} × A_N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// `X_{N-1,k-1}` over the first `N-1` factors.
    pub lower: CrossSpec,
    /// `X_{N-1,k}` over the first `N-1` factors.
    pub upper: CrossSpec,
    pub last: Condenser,
}

impl Decomposition {
    /// Membership through the decomposed form.
    pub fn contains(&self, z: &CrossPoint) -> Result<bool> {
        let n = self.lower.n() + 1;
        if z.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: z.len() });
        }
        let head = CrossPoint(z.coords()[..n - 1].to_vec());
        let tail = z.coords()[n - 1];
        Ok((self.last.d().contains(tail) && member_cross(&head, &self.lower)?)
            || (self.last.a().contains(tail) && member_cross(&head, &self.upper)?))
    }
}

/// Split off the last factor. Defined for `N >= 3` and `2 <= k <= N-1`.
pub fn decompose(spec: &CrossSpec) -> Result<Decomposition> {
    let (n, k) = (spec.n(), spec.k());
    if n < 3 || k < 2 || k > n - 1 {
        return Err(Error::RangeError(format!(
            "decomposition needs N >= 3 and 2 <= k <= N-1, got N = {n}, k = {k}"
        )));
    }
    let head = spec.factors()[..n - 1].to_vec();
    Ok(Decomposition {
        lower: CrossSpec::new(head.clone(), k - 1)?,
        upper: CrossSpec::new(head, k)?,
        last: spec.factors()[n - 1].clone(),
    })
}

/// `i_{a,α}(z)`: substitute the coordinates of `z` into the set positions of `α`.
pub fn embed(a: &CrossPoint, alpha: &AlphaPattern, z: &[CPoint]) -> Result<CrossPoint> {
    if alpha.len() != a.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: alpha.len(),
        });
    }
    if z.len() != alpha.popcount() {
        return Err(Error::DimensionMismatch {
            expected: alpha.popcount(),
            got: z.len(),
        });
    }
    let mut free = z.iter();
    let coords = a
        .coords()
        .iter()
        .zip(&alpha.0)
        .map(|(&aj, &full)| if full { *free.next().expect("counted") } else { aj })
        .collect();
    Ok(CrossPoint(coords))
}

/// Envelope membership on a 2D slice: coordinate `free` runs over the grid,
/// the others are fixed to `fixed` (in factor order, skipping `free`).
/// Nodes outside `D_free` are reported as outside.
pub fn envelope_slice(
    spec: &CrossSpec,
    eval: &dyn ExtremalEval,
    free: usize,
    fixed: &[CPoint],
    grid: &Grid,
) -> Result<Mask> {
    if free >= spec.n() {
        return Err(Error::RangeError(format!("free index {free} >= N = {}", spec.n())));
    }
    if fixed.len() + 1 != spec.n() {
        return Err(Error::DimensionMismatch {
            expected: spec.n() - 1,
            got: fixed.len(),
        });
    }
    let mut rest = 0.0;
    let mut fixed_iter = fixed.iter();
    for (j, c) in spec.factors().iter().enumerate() {
        if j == free {
            continue;
        }
        let p = *fixed_iter.next().expect("length checked");
        if !c.d().contains(p) {
            return Err(Error::OutsideDomain(p));
        }
        rest += eval.h(j, c, p)?;
    }
    let c = &spec.factors()[free];
    let k = spec.k() as f64;
    let mut cells = Vec::with_capacity(grid.len());
    for idx in 0..grid.len() {
        let p = grid.node_at(idx);
        let inside = c.d().contains(p) && rest + eval.h(free, c, p)? < k;
        cells.push(inside);
    }
    Mask::new(*grid, cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{CompactSet, PlanarDomain, Rect};
    use crate::sampling::random_in_disc;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const O: CPoint = CPoint::ORIGIN;

    fn spec(n: usize, k: usize) -> CrossSpec {
        CrossSpec::uniform_discs(n, k, 0.2, 1.0).unwrap()
    }

    /// Brute force over all patterns.
    fn member_by_patterns(z: &CrossPoint, spec: &CrossSpec) -> bool {
        AlphaPattern::all(spec.n(), spec.k()).iter().any(|alpha| {
            spec.factors().iter().zip(z.coords()).zip(&alpha.0).all(|((c, &p), &full)| {
                if full {
                    c.d().contains(p)
                } else {
                    c.a().contains(p)
                }
            })
        })
    }

    fn random_point(rng: &mut ChaCha8Rng, spec: &CrossSpec) -> CrossPoint {
        CrossPoint(
            spec.factors()
                .iter()
                .map(|c| {
                    let (center, r, big_r) = c.disc_radii().unwrap();
                    // half the mass inside A so that cross membership is common
                    if rng.gen_bool(0.5) {
                        random_in_disc(rng, center, r)
                    } else {
                        random_in_disc(rng, center, big_r * 1.05)
                    }
                })
                .collect(),
        )
    }

    #[test]
    fn cross_examples() {
        let s = spec(2, 1);
        let in_a = CrossPoint(vec![CPoint::new(0.1, 0.0), CPoint::new(0.0, 0.1)]);
        assert!(member_cross(&in_a, &s).unwrap());
        let both_out = CrossPoint(vec![CPoint::new(0.5, 0.0), CPoint::new(0.0, 0.5)]);
        assert!(!member_cross(&both_out, &s).unwrap());
        assert!(member_cross(&both_out, &spec(2, 2)).unwrap());
        assert!(matches!(
            member_cross(&CrossPoint(vec![O]), &s),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn cross_matches_pattern_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 2..=5 {
            for k in 1..=n {
                let s = spec(n, k);
                for _ in 0..500 {
                    let z = random_point(&mut rng, &s);
                    assert_eq!(member_cross(&z, &s).unwrap(), member_by_patterns(&z, &s));
                }
            }
        }
    }

    #[test]
    fn envelope_examples() {
        let s = spec(2, 1);
        let q = 0.2 * 5f64.sqrt();
        let z = CrossPoint(vec![CPoint::new(q, 0.0), CPoint::new(q, 0.0)]);
        let sum = envelope_sum(&z, &s, &ClosedForm).unwrap();
        assert!((sum - 1.0).abs() < 1e-14);
        assert_eq!(member_envelope(&z, &s, &ClosedForm).unwrap(), sum < 1.0);
        let z = CrossPoint(vec![CPoint::new(0.1, 0.0), CPoint::new(0.0, 0.999)]);
        assert!(member_envelope(&z, &s, &ClosedForm).unwrap());
        let z = CrossPoint(vec![CPoint::new(0.99, 0.0), CPoint::new(0.0, 0.999)]);
        assert!(member_envelope(&z, &spec(2, 2), &ClosedForm).unwrap());
        let z = CrossPoint(vec![CPoint::new(1.0, 0.0), O]);
        assert!(matches!(
            member_envelope(&z, &s, &ClosedForm),
            Err(Error::OutsideDomain(_))
        ));
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(&spec(3, 2)).unwrap();
        assert_eq!((d.lower.n(), d.lower.k()), (2, 1));
        assert_eq!((d.upper.n(), d.upper.k()), (2, 2));
        assert!(decompose(&spec(3, 3)).is_err());
        assert!(decompose(&spec(3, 1)).is_err());
        assert!(decompose(&spec(2, 1)).is_err());
    }

    #[test]
    fn embed_examples() {
        let a = CrossPoint(vec![
            CPoint::new(0.1, 0.0),
            CPoint::new(0.0, 0.1),
            CPoint::new(-0.1, 0.0),
        ]);
        let u = CPoint::new(0.5, 0.5);
        let v = CPoint::new(-0.5, 0.2);
        let w = embed(&a, &AlphaPattern(vec![true, false, true]), &[u, v]).unwrap();
        assert_eq!(w.coords(), &[u, a.coords()[1], v]);
        let all = embed(&a, &AlphaPattern(vec![true; 3]), &[u, v, u]).unwrap();
        assert_eq!(all.coords(), &[u, v, u]);
        let none = embed(&a, &AlphaPattern(vec![false; 3]), &[]).unwrap();
        assert_eq!(none, a);
        assert!(embed(&a, &AlphaPattern(vec![true, false, true]), &[u]).is_err());
    }

    #[test]
    fn embedded_points_lie_in_cross() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = spec(4, 2);
        for alpha in AlphaPattern::all(4, 2) {
            for _ in 0..50 {
                let a = CrossPoint((0..4).map(|_| random_in_disc(&mut rng, O, 0.2)).collect());
                let z: Vec<CPoint> = (0..2).map(|_| random_in_disc(&mut rng, O, 1.0)).collect();
                assert!(member_cross(&embed(&a, &alpha, &z).unwrap(), &s).unwrap());
            }
        }
    }

    #[test]
    fn slice_of_two_fold_envelope_is_connected() {
        let s = spec(2, 1);
        let g = Grid::covering(Rect::square(O, 1.0).unwrap(), 81, 81).unwrap();
        for rho in [0.0, 0.3, 0.6, 0.9] {
            let m = envelope_slice(&s, &ClosedForm, 1, &[CPoint::new(rho, 0.0)], &g).unwrap();
            assert!(m.is_connected(), "slice at {rho}");
        }
    }

    #[test]
    fn grid_fields_agree_with_closed_form_membership_away_from_the_boundary() {
        use crate::extremal::h_grid_solve;
        let c = Condenser::concentric_discs(O, 0.2, 1.0).unwrap();
        let g = Grid::covering(c.d().bbox(), 129, 129).unwrap();
        let field = h_grid_solve(&c, &g).unwrap();
        let s = spec(2, 1);
        let fields = GridFields(vec![field.clone(), field]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let z = CrossPoint(vec![random_in_disc(&mut rng, O, 0.99), random_in_disc(&mut rng, O, 0.99)]);
            let exact = envelope_sum(&z, &s, &ClosedForm).unwrap();
            if (exact - 1.0).abs() < 0.1 {
                continue;
            }
            assert_eq!(
                member_envelope(&z, &s, &fields).unwrap(),
                member_envelope(&z, &s, &ClosedForm).unwrap()
            );
        }
    }

    #[test]
    fn annulus_factor_membership() {
        let ann = Condenser::new(
            CompactSet::closed_annulus(O, 0.4, 0.5).unwrap(),
            PlanarDomain::annulus(O, 0.1, 1.0).unwrap(),
        )
        .unwrap();
        let s = CrossSpec::new(vec![ann.clone(), ann], 1).unwrap();
        let z = CrossPoint(vec![CPoint::new(0.45, 0.0), CPoint::new(0.0, 0.95)]);
        assert!(member_cross(&z, &s).unwrap());
        assert!(member_envelope(&z, &s, &ClosedForm).unwrap());
        let hole = CrossPoint(vec![CPoint::new(0.05, 0.0), CPoint::new(0.45, 0.0)]);
        assert!(!member_cross(&hole, &s).unwrap());
    }
}
