//! Adaptive Simpson quadrature.

const MAX_DEPTH: u32 = 48;

/// `∫_a^b f` to absolute tolerance `tol` by recursive interval halving with
/// Richardson correction.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Sum of [`adaptive_simpson`] over consecutive pieces `points[k]..points[k+1]`;
/// used to keep kinks of the integrand on piece boundaries.
pub fn piecewise_simpson(f: &dyn Fn(f64) -> f64, points: &[f64], tol: f64) -> f64 {
    let pieces = points.len().saturating_sub(1).max(1) as f64;
    points.windows(2).map(|w| adaptive_simpson(f, w[0], w[1], tol / pieces)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_and_transcendentals() {
        let v = adaptive_simpson(&|x| x.powi(7), 0.0, 2.0, 1e-12);
        assert!((v - 32.0).abs() < 1e-10);
        let v = adaptive_simpson(&f64::ln, 1.0, std::f64::consts::E, 1e-12);
        assert!((v - 1.0).abs() < 1e-11);
        let v = adaptive_simpson(&|x: f64| (-x * x).exp(), -8.0, 8.0, 1e-12);
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-10);
        assert_eq!(adaptive_simpson(&|x| x, 1.0, 1.0, 1e-9), 0.0);
    }

    #[test]
    fn kinks_on_piece_boundaries() {
        let f = |x: f64| (x - 0.3).abs();
        let v = piecewise_simpson(&f, &[0.0, 0.3, 1.0], 1e-12);
        assert!((v - (0.045 + 0.245)).abs() < 1e-12);
    }
}
