//! Lattice sums of test functions and their average over translations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::hlattice::{primitive_z, HurwitzLattice};
use crate::minima::{pre_scale_radius_sq, Enumerator, ShortVector};
use crate::quat::HurwitzInteger;
use crate::real::{rational_to_f64, Precision, Real};

use super::lift::HlawkaFamily;
use super::quadrature::piecewise_simpson;
use super::testfn::{ball_volume_f64, TestFunction, QUADRATURE_TOL};

/// Smallest `α = 2^{-k}` tried by the default rule.
pub const MAX_HALVINGS: u32 = 24;

/// Nonzero (optionally primitive) vectors within `radius`, with lengths.
pub fn vectors_within(
    lattice: &HurwitzLattice,
    radius: f64,
    primitive_only: bool,
    capacity: usize,
) -> Result<Vec<(ShortVector, f64)>> {
    let prec = lattice.precision();
    let rsq = pre_scale_radius_sq(lattice, &Real::from_f64(radius, prec));
    let e = Enumerator::new(lattice, capacity)?;
    let s = lattice.scale().to_f64();
    let mut out = Vec::new();
    for sv in e.enumerate(&rsq)? {
        if primitive_only && !primitive_z(&sv.z)? {
            continue;
        }
        let len = s * rational_to_f64(&sv.norm_sq).sqrt();
        out.push((sv, len));
    }
    Ok(out)
}

/// `Σ f(u)` over nonzero (or primitive) lattice vectors `u`.
///
/// Ball indicators are counted from the exact enumeration, so points on
/// the boundary sphere are decided exactly.
pub fn lattice_sum(lattice: &HurwitzLattice, f: &TestFunction, primitive_only: bool, capacity: usize) -> Result<f64> {
    let vs = vectors_within(lattice, f.support_radius(), primitive_only, capacity)?;
    Ok(match f {
        TestFunction::Ball { .. } => vs.len() as f64,
        _ => vs.iter().map(|(_, len)| f.eval(*len)).sum::<f64>() + 0.0,
    })
}

/// `∫_{R^n} f(z, h) dz` for radial `f` on `R^{n+4}`.
pub fn slice_integral(f: &TestFunction, n: u32, h: f64) -> Result<f64> {
    let rs = f.support_radius();
    if h >= rs {
        return Ok(0.0);
    }
    match f {
        TestFunction::Ball { radius } => {
            Ok(ball_volume_f64(n) * (radius * radius - h * h).powf(n as f64 / 2.0))
        }
        TestFunction::Rho { .. } => {
            let shell = n as f64 * ball_volume_f64(n);
            let g = |x: f64| shell * x.powi(n as i32 - 1) * f.eval((x * x + h * h).sqrt());
            let top = (rs * rs - h * h).sqrt();
            let mut pts = vec![0.0, top];
            for b in f.breakpoints() {
                if b > h && b < rs {
                    pts.push((b * b - h * h).sqrt());
                }
            }
            pts.sort_by(f64::total_cmp);
            pts.dedup();
            Ok(piecewise_simpson(&g, &pts, QUADRATURE_TOL))
        }
        TestFunction::MobiusSmoothed { .. } => {
            Err(Error::Unsupported("averaging target of a Mobius-smoothed function".into()))
        }
    }
}

/// The mean of `Σ_{u ∈ Λ_w \ 0} f(u)` over uniform translations `w`:
///
/// ```text
/// (1 / det Λ) Σ_{λ ∈ W \ 0} ∫_{H^{m-1}} f(z, λ s α) dz,
/// ```
///
/// which is `(α⁴/2) Σ_λ ..` when the lifts have determinant one. The sum
/// runs over Hurwitz integers grouped by norm.
pub fn average_prediction(base: &HurwitzLattice, alpha: &BigRational, f: &TestFunction) -> Result<f64> {
    if !alpha.is_positive() {
        return Err(Error::InvalidArgument("lift height must be positive".into()));
    }
    let n = 4 * base.m() as u32;
    let height = rational_to_f64(alpha) * base.scale().to_f64();
    let rs = f.support_radius();
    let max_norm = ((rs / height).powi(2)).floor() as u64;
    let counts = HurwitzInteger::count_by_norm(max_norm);
    let mut total = 0.0;
    for (k, &c) in counts.iter().enumerate().skip(1) {
        if c == 0 {
            continue;
        }
        total += c as f64 * slice_integral(f, n, height * (k as f64).sqrt())?;
    }
    Ok(total / base.determinant().to_f64())
}

/// Whether `|prediction - ∫f| < ε` and the base minimum exceeds the support.
#[derive(Clone, Debug)]
pub struct AlphaCheck {
    pub alpha: BigRational,
    pub prediction: f64,
    pub integral: f64,
    pub support_ok: bool,
    pub within_epsilon: bool,
}

/// Evaluates the default-rule conditions at one `α`.
pub fn check_alpha(
    m: usize,
    alpha: &BigRational,
    f: &TestFunction,
    support_radius: f64,
    epsilon: f64,
    prec: Precision,
) -> Result<AlphaCheck> {
    let fam = HlawkaFamily::new(m, alpha, prec)?;
    let integral = f.integral(4 * m as u32)?;
    let prediction = average_prediction(&fam.base, alpha, f)?;
    Ok(AlphaCheck {
        alpha: alpha.clone(),
        prediction,
        integral,
        support_ok: fam.support_ok(support_radius),
        within_epsilon: (prediction - integral).abs() < epsilon,
    })
}

/// The largest `α = 2^{-k}` meeting both conditions; `support_radius`
/// defaults to that of `f`.
pub fn default_alpha(
    m: usize,
    f: &TestFunction,
    support_radius: Option<f64>,
    epsilon: f64,
    prec: Precision,
) -> Result<AlphaCheck> {
    let rs = support_radius.unwrap_or_else(|| f.support_radius());
    let mut alpha = BigRational::one();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for _ in 0..=MAX_HALVINGS {
        let check = check_alpha(m, &alpha, f, rs, epsilon, prec)?;
        if check.support_ok && check.within_epsilon {
            return Ok(check);
        }
        alpha = &alpha * &half;
    }
    Err(Error::Range(format!(
        "no alpha >= 2^-{MAX_HALVINGS} brings the average within {epsilon} of the integral"
    )))
}
