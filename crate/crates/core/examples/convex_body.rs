//! Lattices avoiding a dilated unit-invariant body.

use hurwitz_packing::construct::body::{body_by_name, convex_body_search};
use hurwitz_packing::construct::SearchConfig;
use hurwitz_packing::minima::DEFAULT_CAPACITY;
use hurwitz_packing::{Precision, Result};

fn main() -> Result<()> {
    let cfg = SearchConfig { samples: 300, seed: 3, primitive_only: true, capacity: DEFAULT_CAPACITY };
    for name in ["ball", "polydisc", "cell24"] {
        let body = body_by_name(name, 2)?;
        let out = convex_body_search(body.as_ref(), 1.0, None, &cfg, Precision::default())?;
        println!(
            "{name:<9} delta {:.6}  mean primitive {:>6.2}  success {}  density {:.6} / {:.6}",
            out.delta,
            out.mean_primitive(),
            out.success,
            out.density,
            out.nominal_density
        );
    }
    match convex_body_search(&hurwitz_packing::construct::body::AxisBox { m: 2 }, 1.0, None, &cfg, Precision::default()) {
        Err(e) => println!("box: {e}"),
        Ok(_) => println!("box: unexpectedly accepted"),
    }
    Ok(())
}
