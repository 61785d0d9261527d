//! Seeded Monte Carlo searches over the lifted family.
//!
//! Sample `i` draws its translation from a ChaCha8 stream keyed by
//! `(seed, i)`, so results do not depend on the number of workers.

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{eq1_bound, minima_product_threshold_radius};
use crate::error::{Error, Result};
use crate::minima::{quaternionic_minima, MinimaReport};
use crate::real::{Precision, Real};

use super::average::{average_prediction, default_alpha, lattice_sum};
use super::lift::{HlawkaFamily, LiftedLattice};
use super::rescale::{rescale_by_minima, Rescaled};
use super::testfn::{ball_volume_f64, TestFunction};

/// Default `ε` as a fraction of `∫f`.
pub const DEFAULT_EPSILON_FRACTION: f64 = 0.01;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub samples: usize,
    pub seed: u64,
    pub primitive_only: bool,
    pub capacity: usize,
}

/// The random stream of sample `index`.
pub fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// The lift of sample `index`.
pub fn sample_lift(family: &HlawkaFamily, seed: u64, index: usize) -> Result<LiftedLattice> {
    let mut rng = sample_rng(seed, index);
    let w = family.sample_translation(&mut rng);
    family.lift(&w)
}

/// Evaluates `eval` on every sampled lift, in sample order.
pub fn map_samples<T, F>(family: &HlawkaFamily, cfg: &SearchConfig, eval: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&LiftedLattice) -> Result<T> + Sync,
{
    if cfg.samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    (0..cfg.samples)
        .into_par_iter()
        .map(|i| sample_lift(family, cfg.seed, i).and_then(|l| eval(&l)))
        .collect()
}

/// Index of the smallest value, the earliest on ties.
pub fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

/// Sample mean and its standard error.
pub fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Clone, Debug)]
pub struct HlawkaOutcome {
    pub family: HlawkaFamily,
    pub best: LiftedLattice,
    pub best_index: usize,
    /// The smallest sampled lattice sum.
    pub sum: f64,
    pub mean: f64,
    pub std_error: f64,
    pub prediction: f64,
    pub integral: f64,
    pub epsilon: f64,
    pub sums: Vec<f64>,
}

impl HlawkaOutcome {
    /// `sum <= mean` and `mean <= prediction + 3 σ`.
    pub fn audit(&self) -> bool {
        self.sum <= self.mean && self.mean <= self.prediction + 3.0 * self.std_error
    }

    /// `|mean - prediction| <= 3 σ`.
    pub fn within_three_sigma(&self) -> bool {
        (self.mean - self.prediction).abs() <= 3.0 * self.std_error
    }
}

/// The family for `f` at rank `m`: the given `α`, or the default rule.
/// Returns the family and `ε`.
pub fn prepare_family(
    m: usize,
    f: &TestFunction,
    alpha: Option<BigRational>,
    epsilon: Option<f64>,
    support_radius: Option<f64>,
    prec: Precision,
) -> Result<(HlawkaFamily, f64)> {
    let integral = f.integral(4 * m as u32)?;
    let epsilon = epsilon.unwrap_or(DEFAULT_EPSILON_FRACTION * integral);
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    let alpha = match alpha {
        Some(a) => a,
        None => default_alpha(m, f, support_radius, epsilon, prec)?.alpha,
    };
    Ok((HlawkaFamily::new(m, &alpha, prec)?, epsilon))
}

/// The sampled lift with the smallest `Σ_{u ∈ Λ_w \ 0} f(u)`.
pub fn hlawka_search(family: &HlawkaFamily, f: &TestFunction, epsilon: f64, cfg: &SearchConfig) -> Result<HlawkaOutcome> {
    let rs = f.support_radius();
    if !family.support_ok(rs) {
        return Err(Error::SupportCondition(format!(
            "base minimum {} does not exceed the support radius {rs}",
            family.base_minimum()
        )));
    }
    let prediction = average_prediction(&family.base, &family.alpha, f)?;
    let integral = f.integral(4 * family.m as u32)?;
    let sums = map_samples(family, cfg, |l| lattice_sum(&l.result, f, cfg.primitive_only, cfg.capacity))?;
    let best_index = argmin(&sums);
    let (mean, std_error) = mean_and_std_error(&sums);
    Ok(HlawkaOutcome {
        family: family.clone(),
        best: sample_lift(family, cfg.seed, best_index)?,
        best_index,
        sum: sums[best_index],
        mean,
        std_error,
        prediction,
        integral,
        epsilon,
        sums,
    })
}

/// Ball radius with `R^{4m} V_{4m} = volume`.
pub fn ball_radius_for_volume(m: usize, volume: f64) -> f64 {
    let n = 4 * m as u32;
    (volume / ball_volume_f64(n)).powf(1.0 / n as f64)
}

/// The primitive-sum threshold below which the minima product is forced.
pub const RHO_SUM_THRESHOLD: f64 = 6.0;

#[derive(Clone, Debug)]
pub struct MinimaProductOutcome {
    pub r: f64,
    pub threshold_radius: f64,
    pub search: HlawkaOutcome,
    pub success: bool,
    /// Recorded when the best sum is below the threshold.
    pub minima: Option<MinimaReport>,
    pub product: Option<f64>,
    /// `24 Σ ρ(v_i)`.
    pub orbit_sum: Option<f64>,
    pub rescaled: Option<Rescaled>,
    /// `V_{4m} (min_1/2)^{4m}` of the found lattice.
    pub density_found: Option<f64>,
    /// `V_{4m} (∏ min_i)^4 / 2^{4m}`, the density after rescaling.
    pub density_rescaled: Option<f64>,
    pub bound: f64,
}

impl MinimaProductOutcome {
    pub fn r_pow_m(&self) -> f64 {
        self.r.powi(self.search.family.m as i32)
    }

    pub fn orbit_inequality_holds(&self) -> bool {
        self.orbit_sum.is_some_and(|o| o <= self.search.sum)
    }
}

/// Searches for a lattice with `∏ min_i > r^m`, `r = margin` times the
/// threshold radius, `0 < margin < 1`.
pub fn minima_product_search(
    m: usize,
    margin: f64,
    alpha: Option<BigRational>,
    cfg: &SearchConfig,
    prec: Precision,
) -> Result<MinimaProductOutcome> {
    if !(margin > 0.0 && margin < 1.0) {
        return Err(Error::InvalidArgument(format!("margin must lie in (0, 1), got {margin}")));
    }
    if m < 2 {
        return Err(Error::InvalidArgument(format!("need m >= 2, got {m}")));
    }
    let threshold_radius = minima_product_threshold_radius(m as u32, prec)?.to_f64();
    let r = margin * threshold_radius;
    let f = TestFunction::rho(r, m as u32)?;
    let (family, epsilon) = prepare_family(m, &f, alpha, None, None, prec)?;
    let cfg = SearchConfig { primitive_only: true, ..cfg.clone() };
    let search = hlawka_search(&family, &f, epsilon, &cfg)?;
    let bound = eq1_bound(m as u32, prec)?.to_f64();
    let mut out = MinimaProductOutcome {
        r,
        threshold_radius,
        search,
        success: false,
        minima: None,
        product: None,
        orbit_sum: None,
        rescaled: None,
        density_found: None,
        density_rescaled: None,
        bound,
    };
    if out.search.sum >= RHO_SUM_THRESHOLD {
        return Ok(out);
    }
    let lattice = &out.search.best.result;
    let report = quaternionic_minima(lattice, cfg.capacity)?;
    let product = report.product();
    let rpow = Real::from_f64(r, prec).powi(m as u32);
    let orbit: f64 = report.minima.iter().map(|v| 24.0 * f.eval(v.to_f64())).sum();
    let n = 4 * m as u32;
    let vn = ball_volume_f64(n);
    let density_found = lattice.density(&report.minima[0])?.to_f64();
    let rescaled = rescale_by_minima(lattice, &report)?;
    let density_rescaled = vn * product.to_f64().powi(4) / 2f64.powi(n as i32);
    out.success = product > rpow;
    out.product = Some(product.to_f64());
    out.orbit_sum = Some(orbit);
    out.minima = Some(report);
    out.rescaled = Some(rescaled);
    out.density_found = Some(density_found);
    out.density_rescaled = Some(density_rescaled);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minima::DEFAULT_CAPACITY;

    fn p() -> Precision {
        Precision::default()
    }

    fn cfg(samples: usize, seed: u64) -> SearchConfig {
        SearchConfig { samples, seed, primitive_only: false, capacity: DEFAULT_CAPACITY }
    }

    #[test]
    fn streams_are_per_index() {
        use rand::Rng;
        let a: u64 = sample_rng(5, 3).gen();
        let b: u64 = sample_rng(5, 3).gen();
        let c: u64 = sample_rng(5, 4).gen();
        let d: u64 = sample_rng(6, 3).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn statistics() {
        assert_eq!(argmin(&[3.0, 1.0, 2.0, 1.0]), 1);
        let (m, se) = mean_and_std_error(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((se - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn small_ball_search() {
        let f = TestFunction::ball(ball_radius_for_volume(2, 20.0)).unwrap();
        let (fam, eps) = prepare_family(2, &f, None, None, None, p()).unwrap();
        let out = hlawka_search(&fam, &f, eps, &cfg(200, 1)).unwrap();
        assert!(out.sum <= out.mean);
        assert_eq!(out.sums.len(), 200);
        assert_eq!(out.sum, out.sums[out.best_index]);
        let again = lattice_sum(&out.best.result, &f, false, DEFAULT_CAPACITY).unwrap();
        assert_eq!(again, out.sum);
        assert!((out.mean - out.prediction).abs() < 5.0 * out.std_error);
    }

    #[test]
    fn support_condition_is_enforced() {
        let f = TestFunction::ball(1.2).unwrap();
        let fam = HlawkaFamily::new(2, &BigRational::from_integer(2.into()), p()).unwrap();
        let err = hlawka_search(&fam, &f, 0.1, &cfg(4, 1)).unwrap_err();
        assert!(matches!(err, Error::SupportCondition(_)));
        assert!(err.to_string().contains("smaller alpha"));
    }

    #[test]
    fn results_do_not_depend_on_the_thread_count() {
        let f = TestFunction::ball(1.0).unwrap();
        let (fam, eps) = prepare_family(2, &f, None, None, None, p()).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| hlawka_search(&fam, &f, eps, &cfg(64, 9)).unwrap().sums)
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn minima_product_small_run() {
        let out = minima_product_search(2, 0.9, None, &cfg(40, 3), p()).unwrap();
        assert!(out.success);
        assert!(out.product.unwrap() > out.r_pow_m());
        assert!(out.orbit_inequality_holds());
        assert!(out.density_rescaled.unwrap() > 0.9f64.powi(8) * out.bound);
        assert!(out.density_rescaled.unwrap() >= out.density_found.unwrap() * (1.0 - 1e-12));
        assert!(minima_product_search(2, 1.0, None, &cfg(1, 1), p()).is_err());
    }
}
