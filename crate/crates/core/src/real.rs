//! Extended-precision reals backed by `astro-float`.
//!
//! A [`Real`] carries its own working precision. Binary operations run at
//! the larger precision of the two operands, so mixing values built at
//! different [`Precision`]s never silently truncates the finer one.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word, WORD_BIT_SIZE};
use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default number of fractional bits carried by extended-precision values.
pub const DEFAULT_PRECISION_BITS: usize = 128;

/// Guard bits added on top of the requested fractional precision.
const GUARD_BITS: usize = 64;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Requested number of fractional bits for extended-precision results.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision(usize);

impl Precision {
    pub fn new(bits: usize) -> Result<Self> {
        if bits == 0 || bits > 1 << 16 {
            return Err(Error::InvalidArgument(format!(
                "precision must be in 1..=65536 bits, got {bits}"
            )));
        }
        Ok(Precision(bits))
    }

    pub fn bits(self) -> usize {
        self.0
    }

    /// Mantissa length used internally.
    pub fn working_bits(self) -> usize {
        self.0 + GUARD_BITS
    }

    /// `2^{-bits}`, the resolution promised to callers.
    pub fn epsilon(self) -> f64 {
        2f64.powi(-(self.0.min(1000) as i32))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(DEFAULT_PRECISION_BITS)
    }
}

/// An extended-precision real number.
#[derive(Clone)]
pub struct Real(BigFloat);

impl Real {
    fn wrap(x: BigFloat) -> Self {
        debug_assert!(!x.is_nan(), "astro-float produced NaN: {:?}", x.err());
        Real(x)
    }

    fn p(&self) -> usize {
        self.0.mantissa_max_bit_len().unwrap_or(DEFAULT_PRECISION_BITS + GUARD_BITS)
    }

    fn p2(&self, other: &Real) -> usize {
        self.p().max(other.p())
    }

    pub fn precision(&self) -> Precision {
        Precision(self.p().saturating_sub(GUARD_BITS).max(1))
    }

    pub fn zero(prec: Precision) -> Self {
        Real::wrap(BigFloat::from_word(0, prec.working_bits()))
    }

    pub fn one(prec: Precision) -> Self {
        Real::from_i64(1, prec)
    }

    pub fn from_i64(x: i64, prec: Precision) -> Self {
        Real::wrap(BigFloat::from_i64(x, prec.working_bits()))
    }

    pub fn from_u64(x: u64, prec: Precision) -> Self {
        Real::wrap(BigFloat::from_u64(x, prec.working_bits()))
    }

    pub fn from_f64(x: f64, prec: Precision) -> Self {
        Real::wrap(BigFloat::from_f64(x, prec.working_bits()))
    }

    pub fn from_bigint(n: &BigInt, prec: Precision) -> Self {
        let p = prec.working_bits();
        if n.is_zero() {
            return Real::zero(prec);
        }
        let (sign, digits) = n.to_u64_digits();
        let words: Vec<Word> = digits.iter().map(|&d| d as Word).collect();
        let sign = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
        let e = (words.len() * WORD_BIT_SIZE) as i32;
        let exact = BigFloat::from_words(&words, sign, e);
        // Round into the working precision.
        let zero = BigFloat::from_word(0, p);
        Real::wrap(exact.add(&zero, p, RM))
    }

    pub fn from_rational(q: &BigRational, prec: Precision) -> Self {
        let n = Real::from_bigint(q.numer(), Precision(prec.0 + 64));
        let d = Real::from_bigint(q.denom(), Precision(prec.0 + 64));
        Real::wrap(n.0.div(&d.0, prec.working_bits(), RM))
    }

    pub fn pi(prec: Precision) -> Self {
        Real::wrap(with_consts(|cc| cc.pi(prec.working_bits(), RM)))
    }

    pub fn euler(prec: Precision) -> Self {
        Real::wrap(with_consts(|cc| cc.e(prec.working_bits(), RM)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.0.is_zero() && self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        !self.0.is_zero() && self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Real::wrap(self.0.abs())
    }

    pub fn sqrt(&self) -> Self {
        Real::wrap(self.0.sqrt(self.p(), RM))
    }

    pub fn ln(&self) -> Self {
        let p = self.p();
        Real::wrap(with_consts(|cc| self.0.ln(p, RM, cc)))
    }

    pub fn exp(&self) -> Self {
        let p = self.p();
        Real::wrap(with_consts(|cc| self.0.exp(p, RM, cc)))
    }

    pub fn powi(&self, n: u32) -> Self {
        Real::wrap(self.0.powi(n as usize, self.p(), RM))
    }

    /// `self^n` for a possibly negative integer exponent.
    pub fn powi_signed(&self, n: i64) -> Self {
        let r = self.powi(n.unsigned_abs() as u32);
        if n < 0 {
            r.recip()
        } else {
            r
        }
    }

    /// `self^e` for positive `self`.
    pub fn powf(&self, e: &Real) -> Self {
        (&self.ln() * e).exp()
    }

    /// Positive `n`-th root of a positive number.
    pub fn root(&self, n: u32) -> Self {
        let n = Real::from_u64(n as u64, self.precision());
        (&self.ln() / &n).exp()
    }

    pub fn recip(&self) -> Self {
        Real::wrap(self.0.reciprocal(self.p(), RM))
    }

    pub fn max(&self, other: &Real) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Converts with round-to-nearest at the 53-bit boundary.
    pub fn to_f64(&self) -> f64 {
        let Some((words, _n, sign, e, _)) = self.0.as_raw_parts() else {
            return f64::NAN;
        };
        if self.0.is_zero() || words.is_empty() {
            return 0.0;
        }
        let top = *words.last().unwrap();
        let next = if words.len() >= 2 { words[words.len() - 2] } else { 0 };
        let hi = top as f64 + (next as f64) * 2f64.powi(-64);
        let v = hi * pow2(e as i64 - 64);
        if sign == Sign::Neg {
            -v
        } else {
            v
        }
    }

    /// Exact conversion: every finite binary float is a dyadic rational.
    pub fn to_rational(&self) -> BigRational {
        let Some((words, _n, sign, e, _)) = self.0.as_raw_parts() else {
            return BigRational::zero();
        };
        if self.0.is_zero() {
            return BigRational::zero();
        }
        let mut bytes = Vec::with_capacity(words.len() * 8);
        for w in words {
            bytes.extend_from_slice(&(*w).to_le_bytes());
        }
        let mant = BigInt::from(BigUint::from_bytes_le(&bytes));
        let shift = e as i64 - (words.len() * WORD_BIT_SIZE) as i64;
        let mut q = if shift >= 0 {
            BigRational::from_integer(mant << (shift as usize))
        } else {
            BigRational::new(mant, BigInt::one() << ((-shift) as usize))
        };
        if sign == Sign::Neg {
            q = -q;
        }
        q
    }

    /// `|self - other| / max(|self|, |other|)`; zero if both vanish.
    pub fn relative_diff(&self, other: &Real) -> f64 {
        let scale = self.abs().max(&other.abs());
        if scale.is_zero() {
            return 0.0;
        }
        ((self - other).abs() / scale).to_f64()
    }

    /// Decimal rendering with `digits` significant digits, truncated toward zero.
    pub fn to_decimal(&self, digits: usize) -> String {
        rational_to_decimal(&self.to_rational(), digits)
    }

    /// Parses `[-]digits[.digits][e[+-]digits]` exactly, then rounds to `prec`.
    pub fn parse_decimal(s: &str, prec: Precision) -> Result<Self> {
        Ok(Real::from_rational(&parse_decimal_rational(s)?, prec))
    }
}

fn pow2(e: i64) -> f64 {
    let mut v = 1.0f64;
    let mut e = e;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

/// `digits` significant decimal digits of `q` in scientific-free notation.
pub fn rational_to_decimal(q: &BigRational, digits: usize) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let a = q.abs();
    // Decimal exponent estimate from bit lengths, then corrected.
    let ten = BigInt::from(10);
    let mut exp10: i64 = ((a.numer().bits() as f64 - a.denom().bits() as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let pow10 = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while pow10(exp10) > a {
        exp10 -= 1;
    }
    while pow10(exp10 + 1) <= a {
        exp10 += 1;
    }
    // a = m × 10^(exp10 - digits + 1) with m integer of `digits` digits.
    let shift = exp10 - digits as i64 + 1;
    let m = (&a / pow10(shift)).to_integer();
    let s = m.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if shift >= 0 {
        out.push_str(&s);
        out.extend(std::iter::repeat_n('0', shift as usize));
    } else {
        let frac_len = (-shift) as usize;
        if s.len() > frac_len {
            let (int_part, frac) = s.split_at(s.len() - frac_len);
            out.push_str(int_part);
            out.push('.');
            out.push_str(frac);
        } else {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', frac_len - s.len()));
            out.push_str(&s);
        }
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    out
}

pub fn parse_decimal_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("malformed decimal {s:?}"));
    let t = s.trim();
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac) = match mant.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mant, ""),
    };
    if (int_part.is_empty() && frac.is_empty())
        || !int_part.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac}");
    let m: BigInt = digits.parse().map_err(|_| bad())?;
    let e = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let mut q = if e >= 0 {
        BigRational::from_integer(m * num_traits::pow(ten, e as usize))
    } else {
        BigRational::new(m, num_traits::pow(ten, (-e) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

/// Formats like C's `%.{sig}g`.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if exp < -5 || exp >= sig as i32 {
        let s = format!("{:.*e}", sig - 1, x);
        let (m, e) = s.split_once('e').unwrap();
        let m = if m.contains('.') { m.trim_end_matches('0').trim_end_matches('.') } else { m };
        let e: i32 = e.parse().unwrap();
        format!("{m}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    }
}

/// Rounds `q` to the nearest rational with denominator `2^{working bits}`.
pub fn dyadic_round(q: &BigRational, prec: Precision) -> BigRational {
    let denom = BigInt::one() << prec.working_bits();
    let scaled = (q * BigRational::from_integer(denom.clone())).round();
    BigRational::new(scaled.to_integer(), denom)
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_decimal(40))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_sig(self.to_f64(), 12))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.0.cmp(&other.0) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                let p = self.p2(rhs);
                Real::wrap(self.0.$m(&rhs.0, p, RM))
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                (&self).$m(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.0.neg())
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.0.clone().neg())
    }
}

/// Factorial as an exact integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Lossy but convenient rational → f64.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| Real::from_rational(q, Precision::default()).to_f64())
}
