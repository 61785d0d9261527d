//! A lattice whose product of minima beats the radius just below threshold.

use hurwitz_packing::construct::search::{minima_product_search, SearchConfig};
use hurwitz_packing::minima::DEFAULT_CAPACITY;
use hurwitz_packing::{Precision, Result};

fn main() -> Result<()> {
    let cfg = SearchConfig { samples: 500, seed: 7, primitive_only: true, capacity: DEFAULT_CAPACITY };
    let out = minima_product_search(2, 0.95, None, &cfg, Precision::default())?;
    println!("r = {:.10}, r^2 = {:.10}", out.r, out.r_pow_m());
    println!("best rho sum {:.6} (mean {:.6})", out.search.sum, out.search.mean);
    match out.product {
        Some(p) => println!("prod min = {p:.10}, success {}", out.success),
        None => println!("no sample below the threshold"),
    }
    if let (Some(d), Some(r)) = (out.density_found, out.density_rescaled) {
        println!("density {d:.6}, after rescaling {r:.6}, bound {:.6}", out.bound);
    }
    Ok(())
}
