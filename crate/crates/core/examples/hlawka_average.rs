//! Monte Carlo average of ball counts over lifted lattices against the
//! exact averaging target.

use hurwitz_packing::construct::search::{ball_radius_for_volume, hlawka_search, prepare_family, SearchConfig};
use hurwitz_packing::construct::TestFunction;
use hurwitz_packing::minima::DEFAULT_CAPACITY;
use hurwitz_packing::{Precision, Result};

fn main() -> Result<()> {
    let samples = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let f = TestFunction::ball(ball_radius_for_volume(2, 20.0))?;
    let (family, eps) = prepare_family(2, &f, None, None, None, Precision::default())?;
    let cfg = SearchConfig { samples, seed: 1, primitive_only: false, capacity: DEFAULT_CAPACITY };
    let h = hlawka_search(&family, &f, eps, &cfg)?;
    println!("alpha       {}", family.alpha);
    println!("integral    {:.6}", h.integral);
    println!("prediction  {:.6}", h.prediction);
    println!("mean        {:.6} +- {:.6}", h.mean, h.std_error);
    println!("best sum    {} (sample {})", h.sum, h.best_index);
    Ok(())
}
