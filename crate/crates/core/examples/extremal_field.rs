//! Solve the extremal function of a disc-in-disc condenser on a grid and
//! compare with the closed form. Optionally writes the field as CSV.
//!
//! cargo run --release --example extremal_field -- [nx] [out.csv]

use nkcross::extremal::{h_closed_form, h_grid_solve};
use nkcross::geometry::{CPoint, Condenser, Grid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let nx: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(257);
    let c = Condenser::concentric_discs(CPoint::ORIGIN, 0.2, 1.0)?;
    let grid = Grid::covering(c.d().bbox(), nx, nx)?;

    let start = std::time::Instant::now();
    let field = h_grid_solve(&c, &grid)?;
    let elapsed = start.elapsed();

    let sup_error = field
        .present()
        .map(|(_, p, v)| (v - h_closed_form(&c, p).unwrap()).abs())
        .fold(0.0, f64::max);
    println!("grid {nx}x{nx}: {} sweeps in {elapsed:.2?}", field.iterations());
    println!("sup |h_grid - h_exact| = {sup_error:.3e}");
    for rho in [0.3, 0.5, 0.7, 0.9] {
        let z = CPoint::new(rho, 0.0);
        println!(
            "  h({rho:.1}) grid {:.5}  exact {:.5}",
            field.sample(z).unwrap_or(f64::NAN),
            h_closed_form(&c, z)?
        );
    }
    if let Some(path) = args.next() {
        field.write_csv(std::fs::File::create(&path)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
