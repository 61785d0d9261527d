//! Convex bodies invariant under the Hurwitz units, and the search for a
//! determinant-one lattice meeting a dilate only at the origin.

use num_rational::BigRational;
use rand::Rng;

use crate::bounds::{convex_body_bound, zeta_int};
use crate::error::{Error, Result};
use crate::hlattice::primitive_z;
use crate::quat::HurwitzInteger;
use crate::real::Precision;

use super::average::vectors_within;
use super::lift::LiftedLattice;
use super::search::{argmin, map_samples, prepare_family, sample_lift, sample_rng, SearchConfig};
use super::testfn::TestFunction;

/// A compact convex body in `R^{4m}`, coordinates grouped by quaternion.
pub trait ConvexBody: Send + Sync {
    fn name(&self) -> &str;
    fn m(&self) -> usize;
    fn contains(&self, x: &[f64]) -> bool;
    fn volume(&self) -> f64;
    /// The body lies in the ball of this radius.
    fn support_radius(&self) -> f64;
}

/// The closed unit ball.
#[derive(Clone, Debug)]
pub struct Ball {
    pub m: usize,
}

/// `|x_t| <= 1` for every quaternion coordinate.
#[derive(Clone, Debug)]
pub struct Polydisc {
    pub m: usize,
}

/// Every quaternion coordinate in the convex hull of the 24 units, that is
/// `|x_a| + |x_b| <= 1` for each pair of its real components.
#[derive(Clone, Debug)]
pub struct Cell24Product {
    pub m: usize,
}

/// The cube `|x_i| <= 1`, which the units do not preserve.
#[derive(Clone, Debug)]
pub struct AxisBox {
    pub m: usize,
}

fn sq_len(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum()
}

impl ConvexBody for Ball {
    fn name(&self) -> &str {
        "ball"
    }
    fn m(&self) -> usize {
        self.m
    }
    fn contains(&self, x: &[f64]) -> bool {
        sq_len(x) <= 1.0
    }
    fn volume(&self) -> f64 {
        super::testfn::ball_volume_f64(4 * self.m as u32)
    }
    fn support_radius(&self) -> f64 {
        1.0
    }
}

impl ConvexBody for Polydisc {
    fn name(&self) -> &str {
        "polydisc"
    }
    fn m(&self) -> usize {
        self.m
    }
    fn contains(&self, x: &[f64]) -> bool {
        x.chunks(4).all(|q| sq_len(q) <= 1.0)
    }
    fn volume(&self) -> f64 {
        (std::f64::consts::PI.powi(2) / 2.0).powi(self.m as i32)
    }
    fn support_radius(&self) -> f64 {
        (self.m as f64).sqrt()
    }
}

impl ConvexBody for Cell24Product {
    fn name(&self) -> &str {
        "cell24"
    }
    fn m(&self) -> usize {
        self.m
    }
    fn contains(&self, x: &[f64]) -> bool {
        x.chunks(4).all(|q| {
            let mut a: Vec<f64> = q.iter().map(|c| c.abs()).collect();
            a.sort_by(|u, v| v.total_cmp(u));
            a[0] + a[1] <= 1.0
        })
    }
    fn volume(&self) -> f64 {
        2f64.powi(self.m as i32)
    }
    fn support_radius(&self) -> f64 {
        (self.m as f64).sqrt()
    }
}

impl ConvexBody for AxisBox {
    fn name(&self) -> &str {
        "box"
    }
    fn m(&self) -> usize {
        self.m
    }
    fn contains(&self, x: &[f64]) -> bool {
        x.iter().all(|c| c.abs() <= 1.0)
    }
    fn volume(&self) -> f64 {
        2f64.powi(4 * self.m as i32)
    }
    fn support_radius(&self) -> f64 {
        (4.0 * self.m as f64).sqrt()
    }
}

/// `λ x` on one quaternion coordinate.
fn left_mul_f64(l: &[f64; 4], x: &[f64]) -> [f64; 4] {
    let (a1, b1, c1, d1) = (l[0], l[1], l[2], l[3]);
    let (a2, b2, c2, d2) = (x[0], x[1], x[2], x[3]);
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

/// Default number of random points in the invariance spot check.
pub const SPOT_CHECK_POINTS: usize = 512;

/// Checks `x ∈ S ⇔ λx ∈ S` for every unit `λ` on random points of the
/// support ball. Passing is evidence, not a proof.
pub fn spot_check_invariance<R: Rng + ?Sized>(body: &dyn ConvexBody, points: usize, rng: &mut R) -> Result<()> {
    let n = 4 * body.m();
    let units: Vec<[f64; 4]> = HurwitzInteger::units().iter().map(|u| u.to_quaternion().to_f64()).collect();
    for _ in 0..points {
        let dir: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let len = sq_len(&dir).sqrt();
        if len == 0.0 {
            continue;
        }
        let t = rng.gen::<f64>() * body.support_radius() / len;
        let x: Vec<f64> = dir.iter().map(|c| c * t).collect();
        let inside = body.contains(&x);
        for u in &units {
            let y: Vec<f64> = x.chunks(4).flat_map(|q| left_mul_f64(u, q)).collect();
            if body.contains(&y) != inside {
                return Err(Error::NotInvariant(format!(
                    "{} contains exactly one of x and {u:?} x for x = {x:?}",
                    body.name()
                )));
            }
        }
    }
    Ok(())
}

/// Counts inside `δS` for one lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BodyCount {
    pub nonzero: usize,
    pub primitive: usize,
}

pub fn count_in_dilate(lattice: &crate::hlattice::HurwitzLattice, body: &dyn ConvexBody, delta: f64, capacity: usize) -> Result<BodyCount> {
    let basis: Vec<Vec<f64>> =
        lattice.real_basis().iter().map(|row| row.iter().map(|x| x.to_f64() / delta).collect()).collect();
    let mut out = BodyCount { nonzero: 0, primitive: 0 };
    for (sv, _) in vectors_within(lattice, delta * body.support_radius(), false, capacity)? {
        let x: Vec<f64> =
            basis.iter().map(|row| row.iter().zip(&sv.z).map(|(b, &z)| b * z as f64).sum()).collect();
        if body.contains(&x) {
            out.nonzero += 1;
            if primitive_z(&sv.z)? {
                out.primitive += 1;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ConvexBodyOutcome {
    pub body: String,
    /// `vol(δS) = (24 - ε) ζ(4m)`.
    pub volume_epsilon: f64,
    pub delta: f64,
    pub alpha: BigRational,
    pub epsilon: f64,
    pub integral: f64,
    pub counts: Vec<BodyCount>,
    pub best_index: usize,
    pub best: LiftedLattice,
    pub success: bool,
    /// Whether every primitive count is a multiple of 24.
    pub all_divisible: bool,
    /// `vol(δS) / 2^{4m}`, the density of the `δS/2` packing on success.
    pub density: f64,
    /// `3 ζ(4m) / 2^{4m-3}`.
    pub nominal_density: f64,
}

impl ConvexBodyOutcome {
    pub fn mean_primitive(&self) -> f64 {
        self.counts.iter().map(|c| c.primitive as f64).sum::<f64>() / self.counts.len() as f64
    }
}

/// Searches for a lift meeting `δS` only at the origin.
pub fn convex_body_search(
    body: &dyn ConvexBody,
    volume_epsilon: f64,
    alpha: Option<BigRational>,
    cfg: &SearchConfig,
    prec: Precision,
) -> Result<ConvexBodyOutcome> {
    let m = body.m();
    if m < 2 {
        return Err(Error::InvalidArgument(format!("need m >= 2, got {m}")));
    }
    if !(volume_epsilon > 0.0 && volume_epsilon < 24.0) {
        return Err(Error::InvalidArgument(format!("volume epsilon must lie in (0, 24), got {volume_epsilon}")));
    }
    spot_check_invariance(body, SPOT_CHECK_POINTS, &mut sample_rng(cfg.seed, usize::MAX))?;
    let n = 4 * m as u32;
    let zeta = zeta_int(n, prec)?.to_f64();
    let target = (24.0 - volume_epsilon) * zeta;
    let delta = (target / body.volume()).powf(1.0 / n as f64);
    let reach = delta * body.support_radius();
    let proxy = TestFunction::ball(super::search::ball_radius_for_volume(m, target))?;
    let (family, epsilon) = prepare_family(m, &proxy, alpha, None, Some(reach), prec)?;
    if !family.support_ok(reach) {
        return Err(Error::SupportCondition(format!(
            "base minimum {} does not exceed the body reach {reach}",
            family.base_minimum()
        )));
    }
    let counts = map_samples(&family, cfg, |l| count_in_dilate(&l.result, body, delta, cfg.capacity))?;
    let primitive: Vec<f64> = counts.iter().map(|c| c.primitive as f64).collect();
    let best_index = argmin(&primitive);
    let best_count = counts[best_index];
    Ok(ConvexBodyOutcome {
        body: body.name().to_string(),
        volume_epsilon,
        delta,
        alpha: family.alpha.clone(),
        epsilon,
        integral: target,
        all_divisible: counts.iter().all(|c| c.primitive % 24 == 0),
        success: best_count.primitive == 0 && best_count.nonzero == 0,
        best: sample_lift(&family, cfg.seed, best_index)?,
        counts,
        best_index,
        density: target / 2f64.powi(n as i32),
        nominal_density: convex_body_bound(m as u32, prec)?.to_f64(),
    })
}

/// A body by CLI name.
pub fn body_by_name(name: &str, m: usize) -> Result<Box<dyn ConvexBody>> {
    Ok(match name {
        "ball" => Box::new(Ball { m }),
        "polydisc" => Box::new(Polydisc { m }),
        "cell24" => Box::new(Cell24Product { m }),
        "box" => Box::new(AxisBox { m }),
        _ => return Err(Error::InvalidArgument(format!("unknown body {name:?}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minima::DEFAULT_CAPACITY;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p() -> Precision {
        Precision::default()
    }

    fn cfg(samples: usize) -> SearchConfig {
        SearchConfig { samples, seed: 2, primitive_only: true, capacity: DEFAULT_CAPACITY }
    }

    /// Monte Carlo volume in the bounding cube.
    fn mc_volume(body: &dyn ConvexBody, n_pts: usize) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = body.support_radius();
        let n = 4 * body.m();
        let hits = (0..n_pts)
            .filter(|_| {
                let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-r..r)).collect();
                body.contains(&x)
            })
            .count();
        hits as f64 / n_pts as f64 * (2.0 * r).powi(n as i32)
    }

    #[test]
    fn unit_quaternions_span_the_cell() {
        let b = Cell24Product { m: 1 };
        for u in HurwitzInteger::units() {
            assert!(b.contains(&u.to_quaternion().to_f64()));
        }
        assert!(!b.contains(&[0.6, 0.6, 0.0, 0.0]));
        assert!(b.contains(&[0.5, 0.5, 0.0, 0.0]));
    }

    #[test]
    fn volumes() {
        for body in [body_by_name("polydisc", 1).unwrap(), body_by_name("cell24", 1).unwrap()] {
            let est = mc_volume(body.as_ref(), 400_000);
            assert!((est / body.volume() - 1.0).abs() < 0.02, "{}", body.name());
        }
    }

    #[test]
    fn invariance_spot_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for name in ["ball", "polydisc", "cell24"] {
            let b = body_by_name(name, 2).unwrap();
            spot_check_invariance(b.as_ref(), 256, &mut rng).unwrap();
        }
        let cube = AxisBox { m: 2 };
        assert!(matches!(spot_check_invariance(&cube, 256, &mut rng), Err(Error::NotInvariant(_))));
        assert!(matches!(
            convex_body_search(&cube, 1.0, None, &cfg(2), p()),
            Err(Error::NotInvariant(_))
        ));
    }

    #[test]
    fn ball_search_finds_an_empty_dilate() {
        let out = convex_body_search(&Ball { m: 2 }, 1.0, None, &cfg(300), p()).unwrap();
        assert!(out.all_divisible);
        assert!(out.success);
        assert!((out.density - 23.0 / 24.0 * out.nominal_density).abs() < 1e-12);
        let again = count_in_dilate(&out.best.result, &Ball { m: 2 }, out.delta, DEFAULT_CAPACITY).unwrap();
        assert_eq!(again, BodyCount { nonzero: 0, primitive: 0 });
        assert!(out.mean_primitive() > 0.0);
    }

    #[test]
    fn cell_and_polydisc_counts_are_multiples_of_24() {
        for name in ["cell24", "polydisc"] {
            let b = body_by_name(name, 2).unwrap();
            let out = convex_body_search(b.as_ref(), 1.0, None, &cfg(60), p()).unwrap();
            assert!(out.all_divisible, "{name}");
        }
    }
}
