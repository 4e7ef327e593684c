//! Seeded random point generators shared by the property suites and the CLI.

use rand::Rng;

use crate::geometry::{CPoint, CompactSet, PlanarDomain, Rect};

pub fn random_in_rect<R: Rng + ?Sized>(rng: &mut R, rect: &Rect) -> CPoint {
    CPoint::new(
        rng.gen_range(rect.x_min..rect.x_max),
        rng.gen_range(rect.y_min..rect.y_max),
    )
}

/// Uniform in the open disc of the given radius (area measure).
pub fn random_in_disc<R: Rng + ?Sized>(rng: &mut R, center: CPoint, radius: f64) -> CPoint {
    let rho = radius * rng.gen::<f64>().sqrt();
    random_on_circle(rng, center, rho)
}

pub fn random_on_circle<R: Rng + ?Sized>(rng: &mut R, center: CPoint, radius: f64) -> CPoint {
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    CPoint::new(center.re + radius * theta.cos(), center.im + radius * theta.sin())
}

/// Rejection sampling from the bounding box.
pub fn random_in_domain<R: Rng + ?Sized>(rng: &mut R, d: &PlanarDomain) -> CPoint {
    let bbox = d.bbox();
    loop {
        let z = random_in_rect(rng, &bbox);
        if d.contains(z) {
            return z;
        }
    }
}

pub fn random_in_compact<R: Rng + ?Sized>(rng: &mut R, a: &CompactSet) -> CPoint {
    let bbox = a.bbox();
    loop {
        let z = random_in_rect(rng, &bbox);
        if a.contains(z) {
            return z;
        }
    }
}
