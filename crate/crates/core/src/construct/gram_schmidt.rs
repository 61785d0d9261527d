//! Quaternionic Gram–Schmidt for the left module structure on `H^m`.
//!
//! With scalars acting on the left, the Hermitian form is
//! `h(x, y) = Σ_t w_t x_t conj(y_t)`, which satisfies `h(λx, y) = λ h(x, y)`,
//! and the projection of `v` onto the line of `b` is `(h(v, b) / h(b, b)) b`.

use std::ops::{Add, Mul, Sub};

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::minima::h_linearly_independent;
use crate::quat::Quaternion;
use crate::real::{Precision, Real};

/// `Σ_t w_t x_t conj(y_t)`.
pub fn hermitian(x: &[Quaternion], y: &[Quaternion], weights: &[BigRational]) -> Quaternion {
    x.iter()
        .zip(y)
        .zip(weights)
        .fold(Quaternion::zero(), |acc, ((a, b), w)| &acc + &(a * &b.conj()).scale(w))
}

/// Exact unnormalized Gram–Schmidt in the weighted form: returns `b*_k`
/// and `N*_k = h(b*_k, b*_k)`.
pub fn gram_schmidt_exact(
    vs: &[Vec<Quaternion>],
    weights: &[BigRational],
) -> Result<(Vec<Vec<Quaternion>>, Vec<BigRational>)> {
    if !h_linearly_independent(vs) {
        return Err(Error::Dependent);
    }
    let mut stars: Vec<Vec<Quaternion>> = Vec::with_capacity(vs.len());
    let mut norms: Vec<BigRational> = Vec::with_capacity(vs.len());
    for v in vs {
        let mut u = v.clone();
        for (b, n) in stars.iter().zip(&norms) {
            let c = hermitian(v, b, weights).scale(&n.recip());
            for (ui, bi) in u.iter_mut().zip(b) {
                *ui = &*ui - &(&c * bi);
            }
        }
        let n = hermitian(&u, &u, weights).a;
        stars.push(u);
        norms.push(n);
    }
    Ok((stars, norms))
}

/// A quaternion with extended-precision real components.
#[derive(Clone, Debug)]
pub struct RealQuaternion(pub [Real; 4]);

impl RealQuaternion {
    pub fn from_quaternion(q: &Quaternion, prec: Precision) -> Self {
        RealQuaternion(q.components().map(|c| Real::from_rational(c, prec)))
    }

    pub fn zero(prec: Precision) -> Self {
        RealQuaternion(std::array::from_fn(|_| Real::zero(prec)))
    }

    pub fn conj(&self) -> Self {
        let [a, b, c, d] = &self.0;
        RealQuaternion([a.clone(), -b, -c, -d])
    }

    pub fn scale(&self, s: &Real) -> Self {
        RealQuaternion(std::array::from_fn(|k| &self.0[k] * s))
    }

    pub fn norm(&self) -> Real {
        let [a, b, c, d] = &self.0;
        &(&(a * a) + &(b * b)) + &(&(c * c) + &(d * d))
    }

    pub fn to_f64(&self) -> [f64; 4] {
        std::array::from_fn(|k| self.0[k].to_f64())
    }
}

impl Add for &RealQuaternion {
    type Output = RealQuaternion;
    fn add(self, o: &RealQuaternion) -> RealQuaternion {
        RealQuaternion(std::array::from_fn(|k| &self.0[k] + &o.0[k]))
    }
}

impl Sub for &RealQuaternion {
    type Output = RealQuaternion;
    fn sub(self, o: &RealQuaternion) -> RealQuaternion {
        RealQuaternion(std::array::from_fn(|k| &self.0[k] - &o.0[k]))
    }
}

impl Mul for &RealQuaternion {
    type Output = RealQuaternion;
    fn mul(self, o: &RealQuaternion) -> RealQuaternion {
        let [a1, b1, c1, d1] = &self.0;
        let [a2, b2, c2, d2] = &o.0;
        RealQuaternion([
            &(&(a1 * a2) - &(b1 * b2)) - &(&(c1 * c2) + &(d1 * d2)),
            &(&(a1 * b2) + &(b1 * a2)) + &(&(c1 * d2) - &(d1 * c2)),
            &(&(a1 * c2) - &(b1 * d2)) + &(&(c1 * a2) + &(d1 * b2)),
            &(&(a1 * d2) + &(b1 * c2)) - &(&(c1 * b2) - &(d1 * a2)),
        ])
    }
}

/// `Σ_t x_t conj(y_t)` on real quaternion vectors.
pub fn hermitian_real(x: &[RealQuaternion], y: &[RealQuaternion]) -> RealQuaternion {
    let prec = x.first().map_or(Precision::default(), |q| q.0[0].precision());
    x.iter().zip(y).fold(RealQuaternion::zero(prec), |acc, (a, b)| &acc + &(a * &b.conj()))
}

/// Orthonormal `b_1, .., b_m` with `Span_H{b_1..b_k} = Span_H{v_1..v_k}`,
/// each `b_k` a positive real multiple of `v_k` minus its projection.
pub fn gram_schmidt_h(vs: &[Vec<Quaternion>], prec: Precision) -> Result<Vec<Vec<RealQuaternion>>> {
    let m = vs.first().map_or(0, Vec::len);
    let (stars, norms) = gram_schmidt_exact(vs, &vec![BigRational::one(); m])?;
    Ok(stars
        .iter()
        .zip(&norms)
        .map(|(b, n)| {
            let inv = Real::from_rational(n, prec).sqrt().recip();
            b.iter().map(|q| RealQuaternion::from_quaternion(q, prec).scale(&inv)).collect()
        })
        .collect())
}

/// `max_{s,t} |h(b_s, b_t) - δ_st|` over all quaternion components.
pub fn orthonormality_error(bs: &[Vec<RealQuaternion>]) -> f64 {
    let mut worst = 0.0f64;
    for (s, x) in bs.iter().enumerate() {
        for (t, y) in bs.iter().enumerate() {
            let h = hermitian_real(x, y).to_f64();
            let target = if s == t { 1.0 } else { 0.0 };
            worst = worst.max((h[0] - target).abs());
            for c in &h[1..] {
                worst = worst.max(c.abs());
            }
        }
    }
    worst
}
