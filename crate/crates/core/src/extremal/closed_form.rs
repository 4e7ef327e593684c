use crate::error::{Error, Result};
use crate::geometry::{CPoint, Concentric, Condenser};

/// Relative extremal function of a concentric condenser.
///
/// For `A = {|z-c| <= r}` in `D = {|z-c| < R}` this is
/// `max(0, log(|z-c|/r) / log(R/r))`; annular configurations use the
/// harmonic measure of the outer (and inner) boundary circle in each
/// complementary ring. Holes of `A` that do not meet `∂D` carry the value 0.
pub fn h_closed_form(c: &Condenser, z: CPoint) -> Result<f64> {
    if !c.d().contains(z) {
        return Err(Error::OutsideDomain(z));
    }
    let conc = c
        .concentric()
        .ok_or(Error::UnsupportedGeometry("closed form needs a concentric condenser"))?;
    Ok(eval_concentric(&conc, z))
}

fn eval_concentric(conc: &Concentric, z: CPoint) -> f64 {
    match *conc {
        Concentric::DiscInDisc { center, r, big_r } => {
            let d = z.dist(center);
            if d <= r {
                0.0
            } else {
                (d / r).ln() / (big_r / r).ln()
            }
        }
        Concentric::AnnulusInDisc { center, b, big_r, .. } => {
            let d = z.dist(center);
            if d <= b {
                0.0
            } else {
                (d / b).ln() / (big_r / b).ln()
            }
        }
        Concentric::AnnulusInAnnulus { center, a, b, r_in, r_out } => {
            let d = z.dist(center);
            if d > b {
                (d / b).ln() / (r_out / b).ln()
            } else if d < a {
                (a / d).ln() / (a / r_in).ln()
            } else {
                0.0
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{CompactSet, PlanarDomain};

    const O: CPoint = CPoint::ORIGIN;

    #[test]
    fn disc_examples() {
        let c = Condenser::concentric_discs(O, 0.2, 1.0).unwrap();
        assert_eq!(h_closed_form(&c, CPoint::new(0.2, 0.0)).unwrap(), 0.0);
        let mid = 0.2 * 5f64.sqrt();
        assert!((h_closed_form(&c, CPoint::new(0.0, mid)).unwrap() - 0.5).abs() < 1e-14);
        let near = h_closed_form(&c, CPoint::new(1.0 - 1e-12, 0.0)).unwrap();
        assert!(near < 1.0 && near > 1.0 - 1e-10);
        assert!(matches!(
            h_closed_form(&c, CPoint::new(1.0, 0.0)),
            Err(Error::OutsideDomain(_))
        ));
    }

    #[test]
    fn annulus_in_annulus_has_two_rings() {
        let c = Condenser::new(
            CompactSet::closed_annulus(O, 0.4, 0.5).unwrap(),
            PlanarDomain::annulus(O, 0.1, 1.0).unwrap(),
        )
        .unwrap();
        assert_eq!(h_closed_form(&c, CPoint::new(0.45, 0.0)).unwrap(), 0.0);
        // geometric midpoints of both rings sit at level one half
        let outer = (0.5f64 * 1.0).sqrt();
        let inner = (0.1f64 * 0.4).sqrt();
        assert!((h_closed_form(&c, CPoint::new(outer, 0.0)).unwrap() - 0.5).abs() < 1e-14);
        assert!((h_closed_form(&c, CPoint::new(0.0, inner)).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn hole_of_annulus_inside_disc_is_zero() {
        let c = Condenser::new(
            CompactSet::closed_annulus(O, 0.2, 0.3).unwrap(),
            PlanarDomain::disc(O, 1.0).unwrap(),
        )
        .unwrap();
        assert_eq!(h_closed_form(&c, CPoint::new(0.05, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn grid_mask_is_unsupported() {
        use crate::geometry::{Grid, Mask, Rect};
        let g = Grid::covering(Rect::square(O, 1.0).unwrap(), 33, 33).unwrap();
        let a = CompactSet::grid_mask(Mask::from_fn(g, |p| p.dist(O) <= 0.3)).unwrap();
        let c = Condenser::new(a, PlanarDomain::disc(O, 1.0).unwrap()).unwrap();
        assert!(matches!(
            h_closed_form(&c, O),
            Err(Error::UnsupportedGeometry(_))
        ));
    }
}
