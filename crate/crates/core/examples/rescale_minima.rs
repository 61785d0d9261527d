//! Rescale a determinant-one lattice so that every minimum equals the
//! geometric mean of the old ones.

use hurwitz_packing::construct::rescale;
use hurwitz_packing::hlattice::HurwitzLattice;
use hurwitz_packing::minima::{quaternionic_minima, DEFAULT_CAPACITY};
use hurwitz_packing::{Precision, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let l = HurwitzLattice::random(2, 3, &mut rng, Precision::default())?.normalized();
    let out = rescale(&l, DEFAULT_CAPACITY)?;
    let before: Vec<f64> = out.input_minima.minima.iter().map(|x| x.to_f64()).collect();
    let after = quaternionic_minima(&out.lattice, DEFAULT_CAPACITY)?;
    let after: Vec<f64> = after.minima.iter().map(|x| x.to_f64()).collect();
    println!("minima before  {before:?}");
    println!("minima after   {after:?}");
    println!("expected       {:.15}", out.expected_min.to_f64());
    println!("det after      {}", out.lattice.determinant().to_decimal(25));
    Ok(())
}
