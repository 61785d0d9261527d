//! Desk-scale self checks, grouped by module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::{
    ball_bound, eq1_bound, eq1_over_ball_closed_form, mobius_table, zeta_even_closed_form, zeta_int,
};
use crate::construct::gram_schmidt::{gram_schmidt_h, orthonormality_error};
use crate::construct::rescale::{rescale, UNIMODULAR_TOL};
use crate::construct::search::{ball_radius_for_volume, hlawka_search, prepare_family, SearchConfig};
use crate::construct::testfn::{rho, rho_breakpoints, TestFunction};
use crate::construct::{lattice_sum, lift};
use crate::error::Result;
use crate::hlattice::{random_hurwitz, HurwitzLattice};
use crate::minima::{minimal_vector_count, quaternionic_minima};
use crate::quat::{HurwitzInteger, Quaternion};
use crate::real::{Precision, Real};

pub const SUITES: [&str; 5] = ["quat", "lattice", "minima", "construct", "bounds"];

#[derive(Clone, Debug)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

struct Collector {
    suite: &'static str,
    checks: Vec<Check>,
}

impl Collector {
    fn new(suite: &'static str) -> Self {
        Collector { suite, checks: Vec::new() }
    }

    fn check(&mut self, name: &'static str, outcome: Result<(bool, String)>) {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.checks.push(Check { suite: self.suite, name, passed, detail });
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn quat_suite() -> Vec<Check> {
    let mut c = Collector::new("quat");
    let units = HurwitzInteger::units();
    c.check("24 units", Ok((units.len() == 24, format!("{} units", units.len()))));
    c.check(
        "units closed under multiplication",
        Ok((units.iter().all(|a| units.iter().all(|b| units.contains(&(*a * *b)))), "576 products".into())),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ok = (0..500).all(|_| {
        let (a, b) = (random_hurwitz(20, &mut rng), random_hurwitz(20, &mut rng));
        (a * b).norm() == a.norm() * b.norm()
    });
    c.check("norm is multiplicative", Ok((ok, "500 random pairs".into())));
    let counts = HurwitzInteger::count_by_norm(40);
    let sigma_odd = |n: u64| (1..=n).filter(|d| n.is_multiple_of(*d) && d % 2 == 1).sum::<u64>();
    let ok = (1..=40).all(|n| counts[n as usize] == 24 * sigma_odd(n));
    c.check("r(n) = 24 sigma_odd(n)", Ok((ok, "n <= 40".into())));
    c.checks
}

fn lattice_suite(prec: Precision) -> Vec<Check> {
    let mut c = Collector::new("lattice");
    c.check(
        "det(W) = 1/2",
        HurwitzLattice::standard(1, prec).map(|l| (l.exact_determinant() == rat(1, 2), "exact".into())),
    );
    c.check(
        "det(W^m) = 2^-m",
        (1..=4)
            .map(|m| HurwitzLattice::standard(m, prec).map(|l| l.exact_determinant() == rat(1, 1 << m)))
            .collect::<Result<Vec<bool>>>()
            .map(|v| (v.iter().all(|b| *b), "m = 1..4".into())),
    );
    c.check(
        "document round trip",
        (|| {
            let mut rng = ChaCha8Rng::seed_from_u64(2);
            let l = HurwitzLattice::random(2, 3, &mut rng, prec)?.normalized();
            let back = HurwitzLattice::from_json(&l.to_json(), prec)?;
            Ok((back.gram() == l.gram() && back.determinant().relative_diff(&l.determinant()) < 1e-30, String::new()))
        })(),
    );
    c.check(
        "dependent basis rejected",
        Ok({
            let v = vec![Quaternion::one(), Quaternion::i()];
            let w: Vec<Quaternion> = v.iter().map(|q| &Quaternion::omega() * q).collect();
            (HurwitzLattice::from_basis(vec![v, w], prec).is_err(), String::new())
        }),
    );
    c.check(
        "lift determinant identity",
        (|| {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for _ in 0..20 {
                let base = HurwitzLattice::random(2, 3, &mut rng, prec)?;
                let w: Vec<Quaternion> = (0..2).map(|_| random_hurwitz(3, &mut rng).to_quaternion().scale(&rat(1, 3))).collect();
                let alpha = rat(3, 7);
                let l = lift(&base, &w, &alpha)?;
                let a4 = &alpha * &alpha * &alpha * &alpha;
                if l.result.exact_determinant() != a4 / rat(2, 1) * base.exact_determinant() {
                    return Ok((false, "mismatch".into()));
                }
            }
            Ok((true, "20 instances".into()))
        })(),
    );
    c.checks
}

fn minima_suite(prec: Precision, capacity: usize) -> Vec<Check> {
    let mut c = Collector::new("minima");
    c.check(
        "W: 24 minimal vectors, density pi^2/16",
        (|| {
            let w = HurwitzLattice::standard(1, prec)?;
            let rep = quaternionic_minima(&w, capacity)?;
            let count = minimal_vector_count(&w, &rep.exact_norms_sq[0], capacity)?;
            let d = w.density(&rep.minima[0])?.to_f64();
            let target = std::f64::consts::PI.powi(2) / 16.0;
            Ok((count == 24 && (d - target).abs() < 1e-12, format!("{count} vectors, density {d}")))
        })(),
    );
    c.check(
        "W^2 minima (1, 1)",
        (|| {
            let rep = quaternionic_minima(&HurwitzLattice::standard(2, prec)?, capacity)?;
            Ok((rep.exact_norms_sq.iter().all(One::is_one), String::new()))
        })(),
    );
    c.check(
        "minimal counts divisible by 24",
        (|| {
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            for _ in 0..10 {
                let l = HurwitzLattice::random(2, 3, &mut rng, prec)?;
                let rep = quaternionic_minima(&l, capacity)?;
                if minimal_vector_count(&l, &rep.exact_norms_sq[0], capacity)? % 24 != 0 {
                    return Ok((false, String::new()));
                }
            }
            Ok((true, "10 random lattices".into()))
        })(),
    );
    c.check(
        "minima scale covariantly",
        (|| {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let l = HurwitzLattice::random(2, 3, &mut rng, prec)?;
            let k = rat(3, 2);
            let a = quaternionic_minima(&l, capacity)?;
            let b = quaternionic_minima(&l.scaled(&k)?, capacity)?;
            let kr = Real::from_rational(&k, prec);
            let ok = a.minima.iter().zip(&b.minima).all(|(x, y)| (x * &kr).relative_diff(y) < 1e-30);
            Ok((ok, String::new()))
        })(),
    );
    c.checks
}

fn construct_suite(prec: Precision, capacity: usize) -> Vec<Check> {
    let mut c = Collector::new("construct");
    c.check(
        "Gram-Schmidt removes h(b1, v2)",
        (|| {
            let bs = gram_schmidt_h(
                &[vec![Quaternion::one(), Quaternion::zero()], vec![Quaternion::omega(), Quaternion::one()]],
                prec,
            )?;
            let err = orthonormality_error(&bs);
            Ok((err < 1e-30 && bs[1][0].to_f64() == [0.0; 4], format!("error {err:e}")))
        })(),
    );
    c.check(
        "rescaling equalizes the minima",
        (|| {
            let mut rng = ChaCha8Rng::seed_from_u64(6);
            for _ in 0..5 {
                let l = HurwitzLattice::random(2, 3, &mut rng, prec)?.normalized();
                let out = rescale(&l, capacity)?;
                let after = quaternionic_minima(&out.lattice, capacity)?;
                let det_ok = out.lattice.determinant().relative_diff(&Real::one(prec)) < UNIMODULAR_TOL;
                let min_ok = after.minima[0].relative_diff(&out.expected_min) < UNIMODULAR_TOL;
                if !(det_ok && min_ok) {
                    return Ok((false, String::new()));
                }
            }
            Ok((true, "5 random lattices".into()))
        })(),
    );
    c.check(
        "rho pieces and integral",
        (|| {
            let (r, m) = (1.0, 2);
            let (a, b) = rho_breakpoints(r, m);
            let cont = [a, b].iter().all(|x| (rho(x - 1e-12, r, m) - rho(x + 1e-12, r, m)).abs() < 1e-10);
            let f = TestFunction::rho(r, m)?;
            let closed = f.integral(8)?;
            let rel = (closed - f.integral_by_quadrature(8)).abs() / closed;
            Ok((rho(0.0, r, m) == 0.25 && cont && rel < 1e-9, format!("relative {rel:e}")))
        })(),
    );
    c.check(
        "Mobius divisor sums",
        Ok({
            let mu = mobius_table(10_000);
            let mut sums = vec![0i64; 10_001];
            for k in 1..=10_000 {
                for t in (k..=10_000).step_by(k) {
                    sums[t] += mu[k] as i64;
                }
            }
            ((1..=10_000).all(|t| sums[t] == (t == 1) as i64), "t <= 10^4".into())
        }),
    );
    c.check(
        "primitive counts divisible by 24",
        (|| {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let f = TestFunction::ball(1.6)?;
            for _ in 0..10 {
                let l = HurwitzLattice::random(2, 3, &mut rng, prec)?.normalized();
                if !(lattice_sum(&l, &f, true, capacity)? as u64).is_multiple_of(24) {
                    return Ok((false, String::new()));
                }
            }
            Ok((true, "10 random lattices".into()))
        })(),
    );
    c.check(
        "averaging matches the prediction",
        (|| {
            let f = TestFunction::ball(ball_radius_for_volume(2, 20.0))?;
            let (fam, eps) = prepare_family(2, &f, None, None, None, prec)?;
            let cfg = SearchConfig { samples: 1000, seed: 8, primitive_only: false, capacity };
            let h = hlawka_search(&fam, &f, eps, &cfg)?;
            let ok = (h.mean - h.prediction).abs() <= 4.0 * h.std_error && h.sum <= h.mean;
            Ok((ok, format!("mean {:.4}, prediction {:.4}, se {:.4}", h.mean, h.prediction, h.std_error)))
        })(),
    );
    c.checks
}

fn bounds_suite(prec: Precision) -> Vec<Check> {
    let mut c = Collector::new("bounds");
    c.check(
        "zeta agrees with the Bernoulli closed form",
        (|| {
            for n in [2u32, 4, 8, 12, 16, 32] {
                let a = zeta_int(n, prec)?;
                let b = zeta_even_closed_form(n, prec)?;
                if a.relative_diff(&b) > 1e-30 {
                    return Ok((false, format!("n = {n}")));
                }
            }
            Ok((true, "n in {2,4,8,12,16,32}".into()))
        })(),
    );
    c.check(
        "eq1 / ball closed form",
        (|| {
            for m in 2..=32u32 {
                let ratio = eq1_bound(m, prec)? / ball_bound(4 * m, prec)?;
                if ratio.relative_diff(&eq1_over_ball_closed_form(m, prec)?) > 1e-25 {
                    return Ok((false, format!("m = {m}")));
                }
            }
            Ok((true, "m = 2..32".into()))
        })(),
    );
    c.check(
        "Mobius partial sum of k^-8",
        (|| {
            let mu = mobius_table(10_000);
            let s: f64 = (1..=10_000).map(|k| mu[k] as f64 / (k as f64).powi(8)).sum();
            let target = 1.0 / zeta_int(8, prec)?.to_f64();
            Ok(((s - target).abs() < 1e-10, format!("{:e}", (s - target).abs())))
        })(),
    );
    c.check(
        "eq1(2)",
        eq1_bound(2, prec).map(|v| {
            let x = v.to_f64();
            ((x - 0.080_098_839_800_947_63).abs() < 1e-15, format!("{x}"))
        }),
    );
    c.checks
}

/// Runs one suite, or all of them for `"all"`.
pub fn run_suite(suite: &str, prec: Precision, capacity: usize) -> Option<Vec<Check>> {
    Some(match suite {
        "quat" => quat_suite(),
        "lattice" => lattice_suite(prec),
        "minima" => minima_suite(prec, capacity),
        "construct" => construct_suite(prec, capacity),
        "bounds" => bounds_suite(prec),
        "all" => SUITES.iter().flat_map(|s| run_suite(s, prec, capacity).unwrap()).collect(),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minima::DEFAULT_CAPACITY;

    #[test]
    fn every_suite_passes() {
        let checks = run_suite("all", Precision::default(), DEFAULT_CAPACITY).unwrap();
        for c in &checks {
            assert!(c.passed, "{}: {} ({})", c.suite, c.name, c.detail);
        }
        assert!(checks.len() >= 20);
        assert!(run_suite("nope", Precision::default(), DEFAULT_CAPACITY).is_none());
    }
}
