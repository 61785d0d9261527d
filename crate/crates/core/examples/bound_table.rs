//! Density bounds for m = 2..8 and the ratio against Ball's bound.

use hurwitz_packing::bounds::{complex_bounds, BoundTable};
use hurwitz_packing::{Precision, Result};

fn main() -> Result<()> {
    let prec = Precision::default();
    print!("{}", BoundTable::compute(2, 8, prec)?.to_text());
    println!();
    for m in 2..=6 {
        let c = complex_bounds(m, prec)?;
        println!(
            "m = {m}: gaussian {:.6e}  eisenstein {:.6e}  ball {:.6e}",
            c.gaussian.to_f64(),
            c.eisenstein.to_f64(),
            c.ball.to_f64()
        );
    }
    Ok(())
}
