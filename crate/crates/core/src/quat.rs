//! Exact quaternion arithmetic and the Hurwitz order `Z[i, j, (1+i+j+k)/2]`.
//!
//! [`Quaternion`] has arbitrary-precision rational components. [`HurwitzInteger`]
//! stores doubled coordinates so that every ring operation stays in machine
//! integers; the parity invariant (all doubled coordinates even, or all odd)
//! is checked on construction and preserved by the ring operations.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `a + b i + c j + d k` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Quaternion {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn half(n: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(2))
}

impl Quaternion {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Quaternion { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Quaternion::new(q(a), q(b), q(c), q(d))
    }

    /// `(a + b i + c j + d k) / 2`.
    pub fn from_halves(a: i64, b: i64, c: i64, d: i64) -> Self {
        Quaternion::new(half(a), half(b), half(c), half(d))
    }

    pub fn from_rational(x: BigRational) -> Self {
        Quaternion::new(x, BigRational::zero(), BigRational::zero(), BigRational::zero())
    }

    pub fn zero() -> Self {
        Quaternion::default()
    }

    pub fn one() -> Self {
        Quaternion::from_ints(1, 0, 0, 0)
    }

    pub fn i() -> Self {
        Quaternion::from_ints(0, 1, 0, 0)
    }

    pub fn j() -> Self {
        Quaternion::from_ints(0, 0, 1, 0)
    }

    pub fn k() -> Self {
        Quaternion::from_ints(0, 0, 0, 1)
    }

    /// `ω = (1 + i + j + k) / 2`.
    pub fn omega() -> Self {
        Quaternion::from_halves(1, 1, 1, 1)
    }

    pub fn components(&self) -> [&BigRational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.a.clone(), -&self.b, -&self.c, -&self.d)
    }

    /// Reduced norm `a² + b² + c² + d²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a + &self.b * &self.b + &self.c * &self.c + &self.d * &self.d
    }

    /// Real part of `self · conj(other)`, the Euclidean dot product on `R^4`.
    pub fn dot(&self, other: &Quaternion) -> BigRational {
        &self.a * &other.a + &self.b * &other.b + &self.c * &other.c + &self.d * &other.d
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Quaternion::new(&self.a * s, &self.b * s, &self.c * s, &self.d * s)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(self.conj().scale(&(BigRational::one() / n)))
    }

    pub fn to_f64(&self) -> [f64; 4] {
        self.components().map(crate::real::rational_to_f64)
    }
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i + {}j + {}k)", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for &Quaternion {
    type Output = Quaternion;
    fn add(self, o: &Quaternion) -> Quaternion {
        Quaternion::new(&self.a + &o.a, &self.b + &o.b, &self.c + &o.c, &self.d + &o.d)
    }
}

impl Sub for &Quaternion {
    type Output = Quaternion;
    fn sub(self, o: &Quaternion) -> Quaternion {
        Quaternion::new(&self.a - &o.a, &self.b - &o.b, &self.c - &o.c, &self.d - &o.d)
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }
}

impl Mul for &Quaternion {
    type Output = Quaternion;
    fn mul(self, o: &Quaternion) -> Quaternion {
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&o.a, &o.b, &o.c, &o.d);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Quaternion {
            type Output = Quaternion;
            fn $m(self, o: Quaternion) -> Quaternion {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        -&self
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

/// Canonical `"p/q"` rendering (`"p"` when the denominator is one).
pub fn format_rational(x: &BigRational) -> String {
    x.to_string()
}

impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.components().iter().map(|c| format_rational(c)).collect();
        parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts: Vec<String> = Vec::deserialize(d)?;
        if parts.len() != 4 {
            return Err(D::Error::custom(format!(
                "quaternion needs 4 components, got {}",
                parts.len()
            )));
        }
        let mut it = parts.iter().map(|p| parse_rational(p).map_err(D::Error::custom));
        Ok(Quaternion::new(
            it.next().unwrap()?,
            it.next().unwrap()?,
            it.next().unwrap()?,
            it.next().unwrap()?,
        ))
    }
}

/// True iff all four components are integers, or all four are halves of odd integers.
pub fn is_hurwitz(x: &Quaternion) -> bool {
    HurwitzInteger::try_from(x).is_ok()
}

/// An element of the Hurwitz order, stored as doubled coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HurwitzInteger {
    twice: [i64; 4],
}

impl HurwitzInteger {
    pub const ZERO: HurwitzInteger = HurwitzInteger { twice: [0; 4] };
    pub const ONE: HurwitzInteger = HurwitzInteger { twice: [2, 0, 0, 0] };

    /// From doubled coordinates; rejects mixed parity.
    pub fn from_twice(twice: [i64; 4]) -> Result<Self> {
        let p = twice[0].rem_euclid(2);
        if twice.iter().any(|t| t.rem_euclid(2) != p) {
            return Err(Error::InvalidArgument(format!(
                "doubled coordinates {twice:?} have mixed parity"
            )));
        }
        Ok(HurwitzInteger { twice })
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        HurwitzInteger { twice: [2 * a, 2 * b, 2 * c, 2 * d] }
    }

    pub fn omega() -> Self {
        HurwitzInteger { twice: [1, 1, 1, 1] }
    }

    /// From coordinates in the Z-basis `{1, i, j, ω}`.
    pub fn from_z(z: [i64; 4]) -> Self {
        let w = z[3];
        HurwitzInteger { twice: [2 * z[0] + w, 2 * z[1] + w, 2 * z[2] + w, w] }
    }

    /// Coordinates in the Z-basis `{1, i, j, ω}`.
    pub fn z_coords(&self) -> [i64; 4] {
        let w = self.twice[3];
        [(self.twice[0] - w) / 2, (self.twice[1] - w) / 2, (self.twice[2] - w) / 2, w]
    }

    pub fn twice(&self) -> [i64; 4] {
        self.twice
    }

    pub fn to_quaternion(&self) -> Quaternion {
        let [a, b, c, d] = self.twice;
        Quaternion::from_halves(a, b, c, d)
    }

    pub fn norm(&self) -> i64 {
        self.twice.iter().map(|t| t * t).sum::<i64>() / 4
    }

    pub fn conj(&self) -> Self {
        let [a, b, c, d] = self.twice;
        HurwitzInteger { twice: [a, -b, -c, -d] }
    }

    pub fn is_zero(&self) -> bool {
        self.twice == [0; 4]
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    /// The 24 units `±1, ±i, ±j, ±k, (±1±i±j±k)/2`, in a fixed order.
    pub fn units() -> Vec<HurwitzInteger> {
        let mut out = Vec::with_capacity(24);
        for a in -2..=2i64 {
            for b in -2..=2i64 {
                for c in -2..=2i64 {
                    for d in -2..=2i64 {
                        if let Ok(h) = HurwitzInteger::from_twice([a, b, c, d]) {
                            if h.norm() == 1 && a * a + b * b + c * c + d * d == 4 {
                                out.push(h);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// `counts[n]` is the number of Hurwitz integers of norm `n`, for `n <= max_norm`.
    pub fn count_by_norm(max_norm: u64) -> Vec<u64> {
        let mut counts = vec![0u64; max_norm as usize + 1];
        let limit = 4 * max_norm as i64;
        let t_max = (limit as f64).sqrt().floor() as i64 + 1;
        for a in -t_max..=t_max {
            let sa = a * a;
            if sa > limit {
                continue;
            }
            let parity = a.rem_euclid(2);
            for b in (-t_max..=t_max).filter(|b| b.rem_euclid(2) == parity) {
                let sb = sa + b * b;
                if sb > limit {
                    continue;
                }
                for c in (-t_max..=t_max).filter(|c| c.rem_euclid(2) == parity) {
                    let sc = sb + c * c;
                    if sc > limit {
                        continue;
                    }
                    for d in (-t_max..=t_max).filter(|d| d.rem_euclid(2) == parity) {
                        let s = sc + d * d;
                        if s <= limit {
                            counts[(s / 4) as usize] += 1;
                        }
                    }
                }
            }
        }
        counts
    }
}

impl TryFrom<&Quaternion> for HurwitzInteger {
    type Error = Error;

    fn try_from(x: &Quaternion) -> Result<Self> {
        let two = BigRational::from_integer(BigInt::from(2));
        let mut twice = [0i64; 4];
        for (slot, c) in twice.iter_mut().zip(x.components()) {
            let t = c * &two;
            if !t.is_integer() {
                return Err(Error::InvalidArgument(format!("{x} is not a Hurwitz integer")));
            }
            *slot = i64::try_from(t.to_integer())
                .map_err(|_| Error::Range(format!("{x} exceeds 64-bit doubled coordinates")))?;
        }
        HurwitzInteger::from_twice(twice)
    }
}

impl fmt::Debug for HurwitzInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_quaternion())
    }
}

impl Add for HurwitzInteger {
    type Output = HurwitzInteger;
    fn add(self, o: HurwitzInteger) -> HurwitzInteger {
        let t = std::array::from_fn(|s| self.twice[s] + o.twice[s]);
        HurwitzInteger { twice: t }
    }
}

impl Sub for HurwitzInteger {
    type Output = HurwitzInteger;
    fn sub(self, o: HurwitzInteger) -> HurwitzInteger {
        self + (-o)
    }
}

impl Neg for HurwitzInteger {
    type Output = HurwitzInteger;
    fn neg(self) -> HurwitzInteger {
        HurwitzInteger { twice: self.twice.map(|t| -t) }
    }
}

impl Mul for HurwitzInteger {
    type Output = HurwitzInteger;
    fn mul(self, o: HurwitzInteger) -> HurwitzInteger {
        let [a1, b1, c1, d1] = self.twice;
        let [a2, b2, c2, d2] = o.twice;
        // (2p)(2q) = 4pq, and 2pq is integral because the order is closed.
        let prod = [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ];
        debug_assert!(prod.iter().all(|p| p % 2 == 0));
        HurwitzInteger { twice: prod.map(|p| p / 2) }
    }
}

impl Serialize for HurwitzInteger {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_quaternion().serialize(s)
    }
}

impl<'de> Deserialize<'de> for HurwitzInteger {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let x = Quaternion::deserialize(d)?;
        HurwitzInteger::try_from(&x).map_err(D::Error::custom)
    }
}
