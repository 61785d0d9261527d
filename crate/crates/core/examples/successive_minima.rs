//! Quaternionic successive minima of a random rank-2 lattice.

use hurwitz_packing::hlattice::HurwitzLattice;
use hurwitz_packing::minima::{quaternionic_minima, DEFAULT_CAPACITY};
use hurwitz_packing::{Precision, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(17);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = HurwitzLattice::random(2, 3, &mut rng, Precision::default())?.normalized();
    println!("{}", l.to_json());
    let rep = quaternionic_minima(&l, DEFAULT_CAPACITY)?;
    for (k, (min, v)) in rep.minima.iter().zip(&rep.witnesses).enumerate() {
        println!("min_{} = {:.12}  z = {:?}", k + 1, min.to_f64(), v.z);
    }
    println!("product = {:.12}", rep.product().to_f64());
    Ok(())
}
