//! Extend f(z) = 1/(4 - z1 - z2 - z3), known only on X_{3,2}, to the envelope
//! and compare with the global function.

use nkcross::cross::CrossSpec;
use nkcross::extend::{extend_nk, sample_envelope_point, CrossFunction, ExtendOptions};
use num_complex::Complex64;
use rand::SeedableRng;

fn main() -> nkcross::Result<()> {
    let spec = CrossSpec::uniform_discs(3, 2, 0.2, 1.0)?;
    let g = |z: &[Complex64]| 1.0 / (Complex64::new(4.0, 0.0) - z.iter().sum::<Complex64>());
    let f = CrossFunction::new(spec.clone(), g)?;
    println!("sup over the cross ≈ {:.6}", f.sup_bound());

    let ext = extend_nk(&f, &ExtendOptions::default())?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let z = sample_envelope_point(&mut rng, &spec, 1.0, 1.9)?;
        let zc: Vec<Complex64> = z.coords().iter().map(|p| p.to_complex()).collect();
        let err = (ext.eval(&z)? - g(&zc)).norm();
        worst = worst.max(err);
        if i < 3 {
            println!("z = {zc:.3?}: |f^ - f| = {err:.2e}");
        }
    }
    println!("max error over 100 envelope points: {worst:.2e}");
    for level in ext.levels() {
        println!("{level:?}");
    }
    Ok(())
}
