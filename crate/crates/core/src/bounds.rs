//! Special functions and lattice sphere-packing lower bounds.
//!
//! Everything here is evaluated in extended precision. The bound for
//! dimensions `4m` obtained from Hurwitz lattices is
//!
//! ```text
//! Δ_{4m} ≥ 3 m ζ(4m) / (2^{4m-3} e (1 - e^{-m}))
//! ```
//!
//! and is tabulated next to Ball's, Rogers' and the saturated-packing bounds.

use std::fmt::Write as _;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::real::{factorial, format_sig, Precision, Real};

/// Largest argument accepted by [`mobius`].
pub const MOBIUS_MAX: u64 = 100_000_000;

const BERNOULLI_CACHE: usize = 162;

/// Euler–Maclaurin correction terms tried before giving up.
const EM_TERMS: usize = 80;

/// Bernoulli numbers `B_0 .. B_{n}` (with `B_1 = -1/2`).
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    static CACHE: OnceLock<Vec<BigRational>> = OnceLock::new();
    if n < BERNOULLI_CACHE {
        let all = CACHE.get_or_init(|| compute_bernoulli(BERNOULLI_CACHE - 1));
        return all[..=n].to_vec();
    }
    compute_bernoulli(n)
}

fn compute_bernoulli(n: usize) -> Vec<BigRational> {
    // Σ_{k=0}^{j} C(j+1, k) B_k = 0 for j ≥ 1.
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for j in 1..=n {
        if j > 1 && j % 2 == 1 {
            b.push(BigRational::zero());
            continue;
        }
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            if !bk.is_zero() {
                acc += bk * BigRational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(j + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(j + 1)));
    }
    b
}

/// Riemann zeta for real `s > 1`.
///
/// The series is summed directly up to `N - 1` and the tail is closed with
/// the integral `N^{1-s}/(s-1)` plus Euler–Maclaurin corrections, stopping
/// once the next correction falls below the working resolution.
pub fn zeta(s: &Real) -> Result<Real> {
    let prec = s.precision();
    let one = Real::one(prec);
    if s <= &one {
        return Err(Error::InvalidArgument(format!("zeta needs s > 1, got {}", s.to_decimal(20))));
    }
    let sq = s.to_rational();
    let int_s = (sq.is_integer() && sq.to_integer() <= BigInt::from(1_000_000))
        .then(|| u32::try_from(sq.to_integer()).ok())
        .flatten();
    let n_terms: u64 = 64.max(prec.bits() as u64 / 2);
    let power = |k: u64| -> Real {
        let kr = Real::from_u64(k, prec);
        match int_s {
            Some(n) => kr.powi(n).recip(),
            None => (-(s * &kr.ln())).exp(),
        }
    };
    let mut sum = Real::zero(prec);
    for k in (1..n_terms).rev() {
        sum = sum + power(k);
    }
    let nr = Real::from_u64(n_terms, prec);
    let n_pow = power(n_terms);
    let s_minus_1 = s - &one;
    sum = sum + &(&n_pow * &nr) / &s_minus_1;
    sum = sum + &n_pow / &Real::from_i64(2, prec);

    let tol = Real::from_f64(2f64.powi(-(prec.bits() as i32 + 8).min(1000)), prec);
    let bern = bernoulli_numbers(2 * EM_TERMS);
    let mut rising = s.clone();
    let mut n_pow_j = &n_pow / &nr;
    let inv_n2 = (&nr * &nr).recip();
    let mut fact = BigInt::from(2); // (2j)!
    for j in 1..EM_TERMS {
        let b = Real::from_rational(&bern[2 * j], prec);
        let term = &(&b * &rising) * &n_pow_j / Real::from_bigint(&fact, prec);
        sum = sum + &term;
        if term.abs() < tol {
            return Ok(sum);
        }
        let a = s + &Real::from_u64(2 * j as u64 - 1, prec);
        let c = s + &Real::from_u64(2 * j as u64, prec);
        rising = &rising * &(&a * &c);
        n_pow_j = &n_pow_j * &inv_n2;
        fact *= BigInt::from((2 * j + 1) * (2 * j + 2));
    }
    Err(Error::Range(format!("zeta({}) tail did not converge", s.to_decimal(20))))
}

pub fn zeta_int(n: u32, prec: Precision) -> Result<Real> {
    zeta(&Real::from_u64(n as u64, prec))
}

/// `ζ(n) = (-1)^{n/2+1} B_n (2π)^n / (2 · n!)` for even `n ≥ 2`.
pub fn zeta_even_closed_form(n: u32, prec: Precision) -> Result<Real> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("closed form needs even n >= 2, got {n}")));
    }
    let b = bernoulli_numbers(n as usize)[n as usize].abs();
    let two_pi = &Real::pi(prec) * &Real::from_i64(2, prec);
    let num = &Real::from_rational(&b, prec) * &two_pi.powi(n);
    Ok(num / Real::from_bigint(&(factorial(n as u64) * BigInt::from(2)), prec))
}

/// The unit-ball volume `V_n = c · π^{⌊n/2⌋}` with exact rational `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallVolume {
    pub dimension: u32,
    pub coefficient: BigRational,
    pub pi_power: u32,
}

impl BallVolume {
    pub fn value(&self, prec: Precision) -> Real {
        &Real::from_rational(&self.coefficient, prec) * &Real::pi(prec).powi(self.pi_power)
    }
}

/// `V_n = π^{n/2} / Γ(n/2 + 1)`.
pub fn ball_volume(n: u32) -> Result<BallVolume> {
    if n == 0 {
        return Err(Error::InvalidArgument("ball dimension must be positive".into()));
    }
    let k = n / 2;
    let coefficient = if n.is_multiple_of(2) {
        BigRational::new(BigInt::one(), factorial(k as u64))
    } else {
        // V_{2k+1} = 2^{k+1} π^k / (2k+1)!!
        let double_fact = (0..=k as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(2 * i + 1));
        BigRational::new(BigInt::one() << (k as usize + 1), double_fact)
    };
    Ok(BallVolume { dimension: n, coefficient, pi_power: k })
}

pub fn ball_volume_value(n: u32, prec: Precision) -> Result<Real> {
    Ok(ball_volume(n)?.value(prec))
}

fn pow2(e: i64, prec: Precision) -> Real {
    Real::from_i64(2, prec).powi_signed(e)
}

/// `e (1 - e^{-x})`.
fn e_factor(x: u32, prec: Precision) -> Real {
    let e = Real::euler(prec);
    let tail = Real::from_i64(-(x as i64), prec).exp();
    &e * &(Real::one(prec) - tail)
}

fn require_m(m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("the Hurwitz bound needs m >= 2, got {m}")));
    }
    Ok(())
}

/// `3 m ζ(4m) / (2^{4m-3} e (1 - e^{-m}))`.
pub fn eq1_bound(m: u32, prec: Precision) -> Result<Real> {
    require_m(m)?;
    let z = zeta_int(4 * m, prec)?;
    let num = &Real::from_u64(3 * m as u64, prec) * &z;
    let den = &pow2(4 * m as i64 - 3, prec) * &e_factor(m, prec);
    Ok(num / den)
}

/// `(1/2)^{4m} · 24 m ζ(4m) / (e (1 - e^{-m}))`, the same quantity written as
/// the density limit of lattices with `||Λ||^{4m} V_{4m}` at the threshold.
pub fn eq1_limit_form(m: u32, prec: Precision) -> Result<Real> {
    require_m(m)?;
    let target = minima_product_volume_threshold(m, prec)?;
    Ok(target * pow2(-(4 * m as i64), prec))
}

/// `24 m ζ(4m) / (e (1 - e^{-m}))`: the largest admissible `r^{4m} V_{4m}`
/// in the minima-product theorem.
pub fn minima_product_volume_threshold(m: u32, prec: Precision) -> Result<Real> {
    require_m(m)?;
    let z = zeta_int(4 * m, prec)?;
    Ok(&Real::from_u64(24 * m as u64, prec) * &z / e_factor(m, prec))
}

/// Radius `r` with `r^{4m} V_{4m}` equal to the minima-product threshold.
pub fn minima_product_threshold_radius(m: u32, prec: Precision) -> Result<Real> {
    let t = minima_product_volume_threshold(m, prec)?;
    Ok((t / ball_volume_value(4 * m, prec)?).root(4 * m))
}

fn require_n(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dimension must be >= 2, got {n}")));
    }
    Ok(())
}

/// Ball's bound `ζ(n)(n-1) / 2^{n-1}`.
pub fn ball_bound(n: u32, prec: Precision) -> Result<Real> {
    require_n(n)?;
    let z = zeta_int(n, prec)?;
    Ok(&z * &Real::from_u64(n as u64 - 1, prec) / pow2(n as i64 - 1, prec))
}

/// Rogers' bound `n ζ(n) / (2^{n-1} e (1 - e^{-n}))`.
pub fn rogers_bound(n: u32, prec: Precision) -> Result<Real> {
    require_n(n)?;
    let z = zeta_int(n, prec)?;
    let den = &pow2(n as i64 - 1, prec) * &e_factor(n, prec);
    Ok(&z * &Real::from_u64(n as u64, prec) / den)
}

/// Saturated-packing bound `2^{-n}`.
pub fn saturated_bound(n: u32, prec: Precision) -> Result<Real> {
    require_n(n)?;
    Ok(pow2(-(n as i64), prec))
}

#[derive(Clone, Debug)]
pub struct ComparisonBounds {
    pub ball: Real,
    pub rogers: Real,
    pub saturated: Real,
}

pub fn comparison_bounds(n: u32, prec: Precision) -> Result<ComparisonBounds> {
    Ok(ComparisonBounds {
        ball: ball_bound(n, prec)?,
        rogers: rogers_bound(n, prec)?,
        saturated: saturated_bound(n, prec)?,
    })
}

/// Gaussian and Eisenstein lattice bounds in real dimension `2m`, with Ball's
/// bound in the same dimension for comparison.
#[derive(Clone, Debug)]
pub struct ComplexBounds {
    pub m: u32,
    pub gaussian: Real,
    pub eisenstein: Real,
    pub ball: Real,
}

impl ComplexBounds {
    pub fn gaussian_exceeds_ball(&self) -> bool {
        self.gaussian > self.ball
    }

    pub fn eisenstein_exceeds_ball(&self) -> bool {
        self.eisenstein > self.ball
    }
}

/// `m ζ(2m) / 2^{2m-2}` and `3 m ζ(2m) / 2^{2m-1}`.
pub fn complex_bounds(m: u32, prec: Precision) -> Result<ComplexBounds> {
    require_m(m)?;
    let z = zeta_int(2 * m, prec)?;
    let mr = Real::from_u64(m as u64, prec);
    let gaussian = &(&mr * &z) / &pow2(2 * m as i64 - 2, prec);
    let eisenstein = &(&(&mr * &Real::from_i64(3, prec)) * &z) / &pow2(2 * m as i64 - 1, prec);
    Ok(ComplexBounds { m, gaussian, eisenstein, ball: ball_bound(2 * m, prec)? })
}

/// `12 m / (e (4m - 1)(1 - e^{-m}))`, the ratio of the Hurwitz bound to Ball's.
pub fn eq1_over_ball_closed_form(m: u32, prec: Precision) -> Result<Real> {
    require_m(m)?;
    let num = Real::from_u64(12 * m as u64, prec);
    let den = &Real::from_u64(4 * m as u64 - 1, prec) * &e_factor(m, prec);
    Ok(num / den)
}

/// `3 ζ(4m) / 2^{4m-3}`: packing density of a unit-group-invariant convex body.
pub fn convex_body_bound(m: u32, prec: Precision) -> Result<Real> {
    require_m(m)?;
    let z = zeta_int(4 * m, prec)?;
    Ok(&Real::from_i64(3, prec) * &z / pow2(4 * m as i64 - 3, prec))
}

/// Möbius function by trial division.
pub fn mobius(k: u64) -> Result<i8> {
    if k == 0 || k > MOBIUS_MAX {
        return Err(Error::Range(format!("mobius supports 1..={MOBIUS_MAX}, got {k}")));
    }
    let mut n = k;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return Ok(0);
            }
            sign = -sign;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        sign = -sign;
    }
    Ok(sign)
}

/// `μ(0..=n)` by a linear sieve (`μ(0)` is reported as 0).
pub fn mobius_table(n: usize) -> Vec<i8> {
    let mut mu = vec![1i8; n + 1];
    let mut is_composite = vec![false; n + 1];
    let mut primes = Vec::new();
    mu[0] = 0;
    for i in 2..=n {
        if !is_composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n {
                break;
            }
            is_composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    mu
}

#[derive(Clone, Debug)]
pub struct BoundRow {
    pub m: u32,
    pub dimension: u32,
    pub eq1: Real,
    pub ball: Real,
    pub rogers: Real,
    pub saturated: Real,
    pub eq1_over_ball: Real,
}

/// Hurwitz bound against the classical bounds, one row per `m`.
#[derive(Clone, Debug)]
pub struct BoundTable {
    pub rows: Vec<BoundRow>,
}

pub const CSV_HEADER: &str = "m,dimension,eq1,ball,rogers,saturated,eq1_over_ball";

impl BoundTable {
    pub const DEFAULT_M_MIN: u32 = 2;
    pub const DEFAULT_M_MAX: u32 = 16;

    pub fn compute(m_min: u32, m_max: u32, prec: Precision) -> Result<Self> {
        require_m(m_min)?;
        if m_max < m_min {
            return Err(Error::InvalidArgument(format!("m_max {m_max} < m_min {m_min}")));
        }
        let rows = (m_min..=m_max)
            .map(|m| {
                let n = 4 * m;
                let eq1 = eq1_bound(m, prec)?;
                let cmp = comparison_bounds(n, prec)?;
                let ratio = &eq1 / &cmp.ball;
                Ok(BoundRow {
                    m,
                    dimension: n,
                    eq1,
                    ball: cmp.ball,
                    rogers: cmp.rogers,
                    saturated: cmp.saturated,
                    eq1_over_ball: ratio,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BoundTable { rows })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.m,
                r.dimension,
                format_sig(r.eq1.to_f64(), 12),
                format_sig(r.ball.to_f64(), 12),
                format_sig(r.rogers.to_f64(), 12),
                format_sig(r.saturated.to_f64(), 12),
                format_sig(r.eq1_over_ball.to_f64(), 12),
            );
        }
        out
    }

    pub fn to_text(&self) -> String {
        let headers = ["m", "dim", "eq1", "ball", "rogers", "saturated", "eq1/ball"];
        let cells: Vec<[String; 7]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.m.to_string(),
                    r.dimension.to_string(),
                    format_sig(r.eq1.to_f64(), 12),
                    format_sig(r.ball.to_f64(), 12),
                    format_sig(r.rogers.to_f64(), 12),
                    format_sig(r.saturated.to_f64(), 12),
                    format_sig(r.eq1_over_ball.to_f64(), 12),
                ]
            })
            .collect();
        let widths: Vec<usize> = (0..7)
            .map(|c| cells.iter().map(|row| row[c].len()).chain([headers[c].len()]).max().unwrap())
            .collect();
        let mut out = String::new();
        let line = |vals: Vec<&str>| -> String {
            vals.iter()
                .zip(&widths)
                .map(|(v, w)| format!("{v:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        out.push_str(&line(headers.to_vec()));
        out.push('\n');
        for row in &cells {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
            out.push('\n');
        }
        out
    }
}
