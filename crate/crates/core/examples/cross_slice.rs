//! Draw a one-variable slice of X_{3,2} and of its envelope as ASCII art.
//!
//! `#` marks cross points, `+` envelope points outside the cross.

use nkcross::cross::{envelope_slice, member_cross, ClosedForm, CrossPoint, CrossSpec};
use nkcross::geometry::{CPoint, Grid, Rect};

fn main() -> nkcross::Result<()> {
    let spec = CrossSpec::uniform_discs(3, 2, 0.2, 1.0)?;
    for fixed in [
        [CPoint::new(0.6, 0.0), CPoint::new(0.0, 0.5)],
        [CPoint::new(0.1, 0.0), CPoint::new(0.0, 0.5)],
        [CPoint::new(0.9, 0.0), CPoint::new(0.0, 0.9)],
    ] {
        let grid = Grid::new(Rect::square(CPoint::ORIGIN, 1.0)?, 41, 21)?;
        let env = envelope_slice(&spec, &ClosedForm, 0, &fixed, &grid)?;
        println!("z2 = {:?}, z3 = {:?}", fixed[0], fixed[1]);
        for j in (0..21).rev() {
            let row: String = (0..41)
                .map(|i| {
                    let p = grid.node(i, j);
                    let z = CrossPoint(vec![p, fixed[0], fixed[1]]);
                    match (env.get(i, j), member_cross(&z, &spec).unwrap_or(false)) {
                        (_, true) => '#',
                        (true, false) => '+',
                        _ => '.',
                    }
                })
                .collect();
            println!("  {row}");
        }
        println!("  envelope nodes: {}\n", env.count());
    }
    Ok(())
}
