//! Lifting a rank-`(m-1)` lattice to rank `m` and the determinant-one
//! family used for averaging.
//!
//! `Λ_w = { v + λ (w, α) : v ∈ Λ, λ ∈ W }` has module basis
//! `(b_1, 0), .., (b_{m-1}, 0), (w, α)` and determinant `(α⁴/2) det Λ`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::hlattice::{z_basis, HurwitzLattice};
use crate::quat::Quaternion;
use crate::real::{dyadic_round, rational_to_f64, Precision, Real};

#[derive(Clone, Debug)]
pub struct LiftedLattice {
    pub base: HurwitzLattice,
    /// Translation in the base's skeleton coordinates.
    pub w: Vec<Quaternion>,
    pub alpha: BigRational,
    pub result: HurwitzLattice,
}

/// Appends the generator `(w, α)` with coordinate weight 1.
///
/// `w` is given in the skeleton coordinates of `base`, and the new
/// coordinate is multiplied by the base scale like every other one, so the
/// determinant is `((sα)⁴/2) det(base)` for base scale `s`.
pub fn lift(base: &HurwitzLattice, w: &[Quaternion], alpha: &BigRational) -> Result<LiftedLattice> {
    let m1 = base.m();
    if w.len() != m1 {
        return Err(Error::InvalidArgument(format!("translation has {} entries, base rank is {m1}", w.len())));
    }
    if !alpha.is_positive() {
        return Err(Error::InvalidArgument("lift height must be positive".into()));
    }
    let mut basis: Vec<Vec<Quaternion>> = base
        .basis()
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.push(Quaternion::zero());
            r
        })
        .collect();
    let mut top = w.to_vec();
    top.push(Quaternion::from_rational(alpha.clone()));
    basis.push(top);
    let mut weights = base.weights().to_vec();
    weights.push(BigRational::one());
    let result = HurwitzLattice::new(basis, weights, base.scale().clone())?;
    Ok(LiftedLattice { base: base.clone(), w: w.to_vec(), alpha: alpha.clone(), result })
}

/// Bits of the uniform translation coefficients.
pub const SAMPLE_BITS: u32 = 32;

/// The base `c W^{m-1}` and height `α` with `det Λ_w = 1` for every `w`:
/// `c^{4(m-1)} α⁴ = 2^m`.
#[derive(Clone, Debug)]
pub struct HlawkaFamily {
    pub m: usize,
    pub alpha: BigRational,
    /// `c²`, the squared length of the base's shortest vectors.
    pub c_sq: BigRational,
    /// Whether `c²` is exact (otherwise it is a dyadic rounding).
    pub exact: bool,
    pub base: HurwitzLattice,
}

impl HlawkaFamily {
    pub fn new(m: usize, alpha: &BigRational, prec: Precision) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!("the lifted family needs m >= 2, got {m}")));
        }
        if !alpha.is_positive() {
            return Err(Error::InvalidArgument("lift height must be positive".into()));
        }
        let (c_sq, exact) = base_weight(m, alpha, prec);
        let basis = HurwitzLattice::standard(m - 1, prec)?.basis().to_vec();
        let base = HurwitzLattice::new(basis, vec![c_sq.clone(); m - 1], Real::one(prec))?;
        Ok(HlawkaFamily { m, alpha: alpha.clone(), c_sq, exact, base })
    }

    /// Length of the shortest nonzero base vector.
    pub fn base_minimum(&self) -> f64 {
        rational_to_f64(&self.c_sq).sqrt()
    }

    /// Whether no nonzero base vector is inside the support radius,
    /// so that the `λ = 0` layer never contributes.
    pub fn support_ok(&self, support_radius: f64) -> bool {
        self.base_minimum() > support_radius
    }

    /// `w = Σ_{t,s} θ_{t,s} ω_s e_t` with `θ = k / 2^32`, `k` uniform.
    pub fn sample_translation<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Quaternion> {
        let zb = z_basis();
        let denom = BigInt::one() << SAMPLE_BITS;
        (0..self.m - 1)
            .map(|_| {
                zb.iter().fold(Quaternion::zero(), |acc, omega| {
                    let theta = BigRational::new(BigInt::from(rng.gen::<u32>()), denom.clone());
                    &acc + &omega.scale(&theta)
                })
            })
            .collect()
    }

    pub fn lift(&self, w: &[Quaternion]) -> Result<LiftedLattice> {
        lift(&self.base, w, &self.alpha)
    }
}

/// `c² = (2^m / α⁴)^{1/(2(m-1))}`, exact when it is rational in an obvious
/// way (`m = 2`, or `α` a power of two with an integral exponent).
fn base_weight(m: usize, alpha: &BigRational, prec: Precision) -> (BigRational, bool) {
    let two = BigRational::from_integer(2.into());
    if m == 2 {
        return (&two / (alpha * alpha), true);
    }
    let k = 2 * (m as i64 - 1);
    if let Some(e) = power_of_two_exponent(alpha) {
        let total = m as i64 - 4 * e;
        if total % k == 0 {
            let q = total / k;
            let v = if q >= 0 {
                BigRational::from_integer(BigInt::one() << q as usize)
            } else {
                BigRational::new(BigInt::one(), BigInt::one() << (-q) as usize)
            };
            return (v, true);
        }
    }
    let a4 = Real::from_rational(&(alpha * alpha * alpha * alpha), prec);
    let target = Real::from_i64(2, prec).powi(m as u32) / a4;
    let c_sq = target.root(k as u32);
    (dyadic_round(&c_sq.to_rational(), prec), false)
}

fn power_of_two_exponent(x: &BigRational) -> Option<i64> {
    let is_pow2 = |n: &BigInt| n.is_positive() && (n & (n - BigInt::one())).is_zero();
    if x.numer().is_one() && is_pow2(x.denom()) {
        return Some(-(x.denom().bits() as i64 - 1));
    }
    if x.denom().is_one() && is_pow2(x.numer()) {
        return Some(x.numer().bits() as i64 - 1);
    }
    None
}
