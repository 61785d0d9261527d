//! The Hurwitz order as a lattice in R^4 is the D4 root lattice.

use hurwitz_packing::hlattice::HurwitzLattice;
use hurwitz_packing::minima::{minimal_vector_count, quaternionic_minima, DEFAULT_CAPACITY};
use hurwitz_packing::{Precision, Result};

fn main() -> Result<()> {
    let w = HurwitzLattice::standard(1, Precision::default())?;
    let rep = quaternionic_minima(&w, DEFAULT_CAPACITY)?;
    let kissing = minimal_vector_count(&w, &rep.exact_norms_sq[0], DEFAULT_CAPACITY)?;
    println!("det      {}", w.determinant().to_decimal(20));
    println!("minimum  {}", rep.minima[0].to_decimal(20));
    println!("kissing  {kissing}");
    println!("density  {}", w.density(&rep.minima[0])?.to_decimal(20));
    println!("pi^2/16  {:.20}", std::f64::consts::PI.powi(2) / 16.0);
    Ok(())
}
