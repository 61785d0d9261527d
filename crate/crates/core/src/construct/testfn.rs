//! Radial, bounded, compactly supported test functions on `R^{4m}`.

use std::sync::Arc;

use crate::bounds::{ball_volume_value, mobius_table};
use crate::error::{Error, Result};
use crate::real::Precision;

use super::quadrature::piecewise_simpson;

/// Absolute tolerance of the radial quadratures.
pub const QUADRATURE_TOL: f64 = 1e-10;

pub fn ball_volume_f64(n: u32) -> f64 {
    ball_volume_value(n, Precision::default()).map(|v| v.to_f64()).unwrap_or(f64::NAN)
}

/// The radial profile `ρ` with pieces `1/4`, `1/(4m) - ln(x/r)`, `0` and
/// breakpoints `r e^{(1-m)/(4m)}`, `r e^{1/(4m)}`.
pub fn rho(x: f64, r: f64, m: u32) -> f64 {
    let mf = m as f64;
    let (inner, outer) = rho_breakpoints(r, m);
    if x < inner {
        0.25
    } else if x <= outer {
        (1.0 / (4.0 * mf) - (x / r).ln()).max(0.0)
    } else {
        0.0
    }
}

pub fn rho_breakpoints(r: f64, m: u32) -> (f64, f64) {
    let mf = m as f64;
    (r * ((1.0 - mf) / (4.0 * mf)).exp(), r * (1.0 / (4.0 * mf)).exp())
}

/// `∫_{R^{4m}} ρ = r^{4m} V_{4m} e (1 - e^{-m}) / (4m)`.
pub fn rho_integral(r: f64, m: u32) -> Result<f64> {
    if m < 2 || r <= 0.0 {
        return Err(Error::InvalidArgument(format!("rho needs m >= 2 and r > 0, got m = {m}, r = {r}")));
    }
    let mf = m as f64;
    let n = 4 * m;
    let e = std::f64::consts::E;
    Ok(r.powi(n as i32) * ball_volume_f64(n) * e * (1.0 - (-mf).exp()) / (4.0 * mf))
}

#[derive(Clone, Debug)]
pub enum TestFunction {
    /// Indicator of the closed ball of the given radius.
    Ball { radius: f64 },
    Rho { r: f64, m: u32 },
    /// `g(x) = M` for `x < δ`, else `Σ_{k <= R/x} μ(k) f(k x)`.
    MobiusSmoothed { inner: Box<TestFunction>, delta: f64, bound: f64, mu: Arc<Vec<i8>> },
}

impl TestFunction {
    pub fn ball(radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument(format!("ball radius must be positive, got {radius}")));
        }
        Ok(TestFunction::Ball { radius })
    }

    pub fn rho(r: f64, m: u32) -> Result<Self> {
        if m < 2 || !(r > 0.0) {
            return Err(Error::InvalidArgument(format!("rho needs m >= 2 and r > 0, got m = {m}, r = {r}")));
        }
        Ok(TestFunction::Rho { r, m })
    }

    pub fn name(&self) -> &'static str {
        match self {
            TestFunction::Ball { .. } => "ball",
            TestFunction::Rho { .. } => "rho",
            TestFunction::MobiusSmoothed { .. } => "mobius_smoothed",
        }
    }

    /// Value at a point of Euclidean length `x`.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TestFunction::Ball { radius } => {
                if x <= *radius {
                    1.0
                } else {
                    0.0
                }
            }
            TestFunction::Rho { r, m } => rho(x, *r, *m),
            TestFunction::MobiusSmoothed { inner, delta, bound, mu } => {
                if x < *delta {
                    return *bound;
                }
                let kmax = (inner.support_radius() / x).floor() as usize;
                (1..=kmax.min(mu.len() - 1))
                    .filter(|&k| mu[k] != 0)
                    .map(|k| mu[k] as f64 * inner.eval(k as f64 * x))
                    .sum::<f64>()
                    + 0.0
            }
        }
    }

    /// The function vanishes beyond this length.
    pub fn support_radius(&self) -> f64 {
        match self {
            TestFunction::Ball { radius } => *radius,
            TestFunction::Rho { r, m } => rho_breakpoints(*r, *m).1,
            TestFunction::MobiusSmoothed { inner, .. } => inner.support_radius(),
        }
    }

    pub fn sup_bound(&self) -> f64 {
        match self {
            TestFunction::Ball { .. } => 1.0,
            TestFunction::Rho { .. } => 0.25,
            TestFunction::MobiusSmoothed { inner, delta, bound, mu } => {
                let kmax = (inner.support_radius() / delta).floor() as usize;
                let abs_sum: f64 = mu[1..=kmax.min(mu.len() - 1)].iter().map(|&v| v.unsigned_abs() as f64).sum();
                bound * abs_sum.max(1.0)
            }
        }
    }

    /// Breakpoints of the radial profile inside the support.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            TestFunction::Ball { radius } => vec![*radius],
            TestFunction::Rho { r, m } => {
                let (a, b) = rho_breakpoints(*r, *m);
                vec![a, b]
            }
            TestFunction::MobiusSmoothed { inner, delta, .. } => {
                let rs = inner.support_radius();
                let mut pts = vec![*delta];
                let kmax = (rs / delta).floor() as usize;
                for k in 1..=kmax {
                    pts.extend(inner.breakpoints().iter().map(|b| b / k as f64).filter(|&b| b >= *delta));
                }
                pts.sort_by(f64::total_cmp);
                pts.dedup();
                pts
            }
        }
    }

    /// `∫_{R^n} f`.
    pub fn integral(&self, n: u32) -> Result<f64> {
        match self {
            TestFunction::Ball { radius } => Ok(radius.powi(n as i32) * ball_volume_f64(n)),
            TestFunction::Rho { r, m } => {
                if n != 4 * m {
                    return Err(Error::InvalidArgument(format!("rho with m = {m} lives in dimension {}", 4 * m)));
                }
                rho_integral(*r, *m)
            }
            TestFunction::MobiusSmoothed { .. } => Err(Error::Unsupported(
                "no closed-form integral for a Mobius-smoothed function".into(),
            )),
        }
    }

    /// `∫_{R^n} f` by radial quadrature `∫_0^R f(x) n V_n x^{n-1} dx`, to a
    /// tolerance relative to the bound `sup|f| V_n R^n`.
    pub fn integral_by_quadrature(&self, n: u32) -> f64 {
        let shell = n as f64 * ball_volume_f64(n);
        let tol = 1e-13 * self.sup_bound() * ball_volume_f64(n) * self.support_radius().powi(n as i32);
        let g = |x: f64| self.eval(x) * shell * x.powi(n as i32 - 1);
        let mut pts = vec![0.0];
        pts.extend(self.breakpoints());
        pts.push(self.support_radius());
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        piecewise_simpson(&g, &pts, tol)
    }
}

/// Möbius smoothing of `f` with cutoff `δ` and bound `M`.
pub fn mobius_smooth(f: &TestFunction, delta: f64, bound: f64) -> Result<TestFunction> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("cutoff must be positive, got {delta}")));
    }
    if !(bound >= f.sup_bound()) {
        return Err(Error::InvalidArgument(format!(
            "bound {bound} is below the sup bound {} of the function",
            f.sup_bound()
        )));
    }
    let kmax = (f.support_radius() / delta).floor() as usize;
    if kmax > crate::bounds::MOBIUS_MAX as usize {
        return Err(Error::Range(format!("cutoff {delta} needs Mobius values beyond {}", crate::bounds::MOBIUS_MAX)));
    }
    Ok(TestFunction::MobiusSmoothed {
        inner: Box::new(f.clone()),
        delta,
        bound,
        mu: Arc::new(mobius_table(kmax.max(1))),
    })
}

/// `M δ^{4m} V_{4m} < ε/2`, the smallness condition on the cutoff.
pub fn mobius_cutoff_admissible(bound: f64, delta: f64, m: u32, epsilon: f64) -> bool {
    let n = 4 * m;
    bound * delta.powi(n as i32) * ball_volume_f64(n) < epsilon / 2.0
}
