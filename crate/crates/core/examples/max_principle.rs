//! Sampled sup |f^| over the envelope against the cross supremum, and the
//! coefficient growth check, for a well-behaved input, a truncated series
//! and an input with a pole.

use nkcross::cross::CrossSpec;
use nkcross::extend::{
    extend_2fold, max_principle_check, two_constants_bound, CrossFunction, ExtendOptions, HartogsExtension,
};
use nkcross::geometry::CPoint;
use num_complex::Complex64;

fn main() -> nkcross::Result<()> {
    let spec = CrossSpec::uniform_discs(2, 1, 0.2, 1.0)?;
    let near = |z: &[Complex64]| 1.0 / (Complex64::new(1.3, 0.0) - z[0] - z[1]);
    let f = CrossFunction::new(spec.clone(), near)?;

    for m in [64, 4] {
        let ext = extend_2fold(&f, &ExtendOptions::default().with_m(m))?;
        match max_principle_check(&ext, &f, 1000, 1) {
            Ok(r) => println!("M = {m}: sup envelope {:.6} / sup cross {:.6} = {:.4}", r.sup_envelope, r.sup_cross, r.ratio),
            Err(e) => println!("M = {m}: {e}"),
        }
    }

    let hx = HartogsExtension::new(&f, &ExtendOptions::default())?;
    let bases: Vec<Vec<CPoint>> = [0.0, 0.3, 0.6, 0.9].iter().map(|&x| vec![CPoint::new(x, 0.0)]).collect();
    let rep = two_constants_bound(&hx, &bases)?;
    println!("coefficient bound: worst log excess {:.3} at m = {}", rep.worst_log_excess, rep.worst_m);

    let pole = CrossFunction::new(spec, |z: &[Complex64]| 1.0 / (z[1] - 0.5))?;
    let hx = HartogsExtension::new(&pole, &ExtendOptions::default())?;
    println!("pole inside D_2: {}", two_constants_bound(&hx, &bases).unwrap_err());
    Ok(())
}
