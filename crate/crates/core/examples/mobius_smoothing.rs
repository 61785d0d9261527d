//! The Mobius-smoothed ball indicator.

use hurwitz_packing::construct::testfn::{mobius_cutoff_admissible, mobius_smooth};
use hurwitz_packing::construct::TestFunction;
use hurwitz_packing::Result;

fn main() -> Result<()> {
    let f = TestFunction::ball(1.0)?;
    let g = mobius_smooth(&f, 0.05, 1.0)?;
    for k in 0..=22 {
        let x = k as f64 * 0.05;
        println!("g({x:.2}) = {:>3}", g.eval(x));
    }
    println!("sup bound {}", g.sup_bound());
    println!("cutoff admissible at eps 0.01: {}", mobius_cutoff_admissible(1.0, 0.05, 2, 0.01));
    Ok(())
}
