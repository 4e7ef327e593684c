//! The extremal function of a pair of sublevel sets is a rescaled copy of the
//! original one. Checked with closed forms and with the grid solver.

use nkcross::geometry::{CPoint, Condenser, Grid};
use nkcross::lemma_lab::{lemma1_check, Lemma1Mode};

fn main() -> nkcross::Result<()> {
    let c = Condenser::concentric_discs(CPoint::ORIGIN, 0.2, 1.0)?;
    for (r, s) in [(0.25, 0.75), (0.1, 0.9), (0.4, 0.5)] {
        let rep = lemma1_check(&c, r, s, Lemma1Mode::ClosedForm { samples: 1000, seed: 1 })?;
        println!("closed form r={r} s={s}: max residual {:.2e} ({} samples)", rep.max_residual, rep.samples);
    }
    let grid = Grid::covering(c.d().bbox(), 129, 129)?;
    let rep = lemma1_check(&c, 0.25, 0.75, Lemma1Mode::Grid(grid))?;
    println!("grid 129x129 r=0.25 s=0.75: max residual {:.3e} over {} nodes", rep.max_residual, rep.samples);
    if let Some(worst) = rep.details.first() {
        println!("  worst at {:?}: {:.5} vs {:.5}", worst.point, worst.lhs, worst.rhs);
    }
    Ok(())
}
