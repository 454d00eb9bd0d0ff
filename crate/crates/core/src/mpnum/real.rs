//! Binary floating point with an arbitrary-length mantissa.
//!
//! A `BigReal` is `mant * 2^exp` where `|mant| < 2^prec`. Every arithmetic
//! operation rounds its exact result to nearest at the larger of the two
//! operand precisions, so each basic operation carries a relative error of at
//! most half an ulp (one ulp for division and square root, which first
//! truncate to `prec + 2` bits).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Target accuracy of a computation.
///
/// `decimal_digits` is what callers are promised; `guard_digits` is internal
/// slack absorbed by rounding and cancellation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision {
    pub decimal_digits: u32,
    pub guard_digits: u32,
}

impl Precision {
    pub const MIN_DIGITS: u32 = 10;
    pub const MIN_GUARD: u32 = 10;

    pub fn new(decimal_digits: u32) -> Result<Self> {
        Self::with_guard(decimal_digits, Self::MIN_GUARD.max(decimal_digits / 4))
    }

    pub fn with_guard(decimal_digits: u32, guard_digits: u32) -> Result<Self> {
        if decimal_digits < Self::MIN_DIGITS {
            return Err(Error::Domain(format!(
                "precision of {decimal_digits} digits is below the minimum of {}",
                Self::MIN_DIGITS
            )));
        }
        if guard_digits < Self::MIN_GUARD {
            return Err(Error::Domain(format!(
                "guard of {guard_digits} digits is below the minimum of {}",
                Self::MIN_GUARD
            )));
        }
        Ok(Precision {
            decimal_digits,
            guard_digits,
        })
    }

    /// Working precision in bits: `ceil((digits + guard) * log2 10)`.
    pub fn bits(&self) -> u32 {
        ((self.decimal_digits + self.guard_digits) as f64 * LOG2_10).ceil() as u32
    }

    /// The same target with twice the guard digits.
    pub fn escalate(&self) -> Self {
        Precision {
            decimal_digits: self.decimal_digits,
            guard_digits: self.guard_digits * 2,
        }
    }

    /// `10^-decimal_digits` as log2.
    pub fn target_log2(&self) -> f64 {
        -(self.decimal_digits as f64) * LOG2_10
    }
}

#[derive(Clone)]
pub struct BigReal {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

impl BigReal {
    fn normalize(mant: BigInt, exp: i64, prec: u32) -> Self {
        debug_assert!(prec >= 2);
        if mant.is_zero() {
            return BigReal { mant, exp: 0, prec };
        }
        let bits = mant.bits();
        if bits <= prec as u64 {
            // strip trailing zero bits so equal values share a representation
            let tz = mant.trailing_zeros().unwrap_or(0);
            if tz > 0 {
                return BigReal {
                    mant: mant >> tz,
                    exp: exp + tz as i64,
                    prec,
                };
            }
            return BigReal { mant, exp, prec };
        }
        let shift = bits - prec as u64;
        let (sign, mag) = (mant.sign(), mant.magnitude().clone());
        let half = BigUint::one() << (shift - 1);
        let mut rounded: BigUint = (mag + half) >> shift;
        let mut exp = exp + shift as i64;
        if rounded.bits() > prec as u64 {
            rounded >>= 1u32;
            exp += 1;
        }
        let tz = rounded.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            rounded >>= tz;
            exp += tz as i64;
        }
        BigReal {
            mant: BigInt::from_biguint(sign, rounded),
            exp,
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        BigReal {
            mant: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn one(prec: u32) -> Self {
        BigReal {
            mant: BigInt::one(),
            exp: 0,
            prec,
        }
    }

    pub fn from_int<T: Into<BigInt>>(value: T, prec: u32) -> Self {
        Self::normalize(value.into(), 0, prec)
    }

    /// `2^e`, exact.
    pub fn pow2(e: i64, prec: u32) -> Self {
        BigReal {
            mant: BigInt::one(),
            exp: e,
            prec,
        }
    }

    /// Upper approximation of `2^x` for real `x`, with 53 significant bits.
    /// Used for error bounds, where rounding up is what matters.
    pub fn pow2_f64(x: f64, prec: u32) -> Self {
        let floor = x.floor();
        let frac = 2f64.powf(x - floor) * (1.0 + 1e-12);
        let m = (frac * (1u64 << 52) as f64).ceil() as u64;
        Self::normalize(BigInt::from(m), floor as i64 - 52, prec)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "division by zero");
        if num.is_zero() {
            return Self::zero(prec);
        }
        let nb = num.bits() as i64;
        let db = den.bits() as i64;
        let shift = (prec as i64 + 2 + db - nb).max(0);
        let q = (num << shift as usize) / den;
        Self::normalize(q, -shift, prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Self::from_ratio(r.numer(), r.denom(), prec)
    }

    /// Exact value of an `f64`, rounded to `prec` bits.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Self::zero(prec);
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if e == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), e - 1075)
        };
        Self::normalize(BigInt::from(m) * sign, e, prec)
    }

    /// Parses a plain decimal literal such as `-3.14159` or `2.5e-7`.
    pub fn parse_decimal(s: &str, prec: u32) -> Result<Self> {
        let r = parse_decimal_rational(s)
            .ok_or_else(|| Error::Usage(format!("not a decimal number: {s:?}")))?;
        Ok(Self::from_rational(&r, prec))
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::normalize(self.mant.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        BigReal {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Position just above the leading bit: `2^(top-1) <= |x| < 2^top`.
    /// Zero maps to `i64::MIN`.
    pub fn top(&self) -> i64 {
        if self.mant.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mant.bits() as i64
        }
    }

    /// Splits off the binary exponent: returns `(m, e)` with `x = m * 2^e` and
    /// `1/2 <= |m| < 1`.
    pub fn frexp(&self) -> (Self, i64) {
        let top = self.top();
        (
            BigReal {
                mant: self.mant.clone(),
                exp: self.exp - top,
                prec: self.prec,
            },
            top,
        )
    }

    /// Multiplies by `2^k`, exact.
    pub fn ldexp(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigReal {
            mant: self.mant.clone(),
            exp: self.exp + k,
            prec: self.prec,
        }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Self::normalize(&self.mant * k, self.exp, self.prec)
    }

    pub fn mul_big(&self, k: &BigInt) -> Self {
        Self::normalize(&self.mant * k, self.exp, self.prec)
    }

    pub fn div_int(&self, k: i64) -> Self {
        self / &BigReal::from_int(k, 64.max(self.prec))
    }

    pub fn recip(&self) -> Self {
        &BigReal::one(self.prec) / self
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::Domain("square root of a negative number".into()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let want = 2 * self.prec as i64 + 4;
        let mut shift = (want - self.mant.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = (&self.mant << shift as usize).sqrt();
        Ok(Self::normalize(m, (self.exp - shift) / 2, self.prec))
    }

    pub fn powi(&self, n: i64) -> Self {
        if n == 0 {
            return BigReal::one(self.prec);
        }
        let mut base = self.clone();
        let mut acc = BigReal::one(self.prec);
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            self.mant
                .div_floor(&(BigInt::one() << (-self.exp) as usize))
        }
    }

    /// Nearest integer to `self * 10^k`, exact apart from the final rounding.
    fn scaled_round(&self, k: i64) -> BigInt {
        let ten = BigInt::from(10);
        let mut num = self.mant.abs();
        let mut den = BigInt::one();
        if k >= 0 {
            num *= num_traits::pow(ten, k as usize);
        } else {
            den *= num_traits::pow(ten, (-k) as usize);
        }
        if self.exp >= 0 {
            num <<= self.exp as usize;
        } else {
            den <<= (-self.exp) as usize;
        }
        (num * 2 + &den) / (den * 2)
    }

    /// Fixed-point decimal rendering with `frac_digits` digits after the point.
    pub fn to_fixed(&self, frac_digits: usize) -> String {
        let n = self.scaled_round(frac_digits as i64).to_string();
        let n = if n.len() <= frac_digits {
            format!("{}{}", "0".repeat(frac_digits + 1 - n.len()), n)
        } else {
            n
        };
        let (int, frac) = n.split_at(n.len() - frac_digits);
        let sign = if self.is_negative() && n.chars().any(|c| c != '0') {
            "-"
        } else {
            ""
        };
        if frac_digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// Scientific rendering with `sig` significant digits, e.g. `1.25e-31`.
    pub fn to_sci(&self, sig: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let sig = sig.max(1);
        let mut e10 = (self.log2_abs() / LOG2_10).floor() as i64;
        let mut digits = self.scaled_round(sig as i64 - 1 - e10).to_string();
        if digits.len() > sig {
            e10 += 1;
            digits = self.scaled_round(sig as i64 - 1 - e10).to_string();
        } else if digits.len() < sig {
            e10 -= 1;
            digits = self.scaled_round(sig as i64 - 1 - e10).to_string();
        }
        let sign = if self.is_negative() { "-" } else { "" };
        let (head, tail) = digits.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    }

    /// `log2 |x|` as an `f64`; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits();
        let keep = bits.min(60);
        let lead = (self.mant.magnitude() >> (bits - keep) as usize)
            .to_u64()
            .unwrap_or(u64::MAX);
        (lead as f64).log2() + (self.exp + (bits - keep) as i64) as f64
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let keep = bits.min(60);
        let lead = (self.mant.magnitude() >> (bits - keep) as usize)
            .to_u64()
            .unwrap_or(u64::MAX) as f64;
        let v = lead * 2f64.powi((self.exp + (bits - keep) as i64).clamp(-2000, 2000) as i32);
        if self.is_negative() {
            -v
        } else {
            v
        }
    }

    /// The exact value as a rational number.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

/// `-?digits[.digits][e[+-]digits]` as an exact rational.
pub(crate) fn parse_decimal_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let scale = exp10 - frac.len() as i64;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    Some(if neg { -r } else { r })
}

fn add_impl(a: &BigReal, b: &BigReal, negate_b: bool) -> BigReal {
    let prec = a.prec.max(b.prec);
    if b.is_zero() {
        return a.with_prec(prec);
    }
    if a.is_zero() {
        let r = b.with_prec(prec);
        return if negate_b { -r } else { r };
    }
    let bm = if negate_b { -&b.mant } else { b.mant.clone() };
    let (ta, tb) = (a.top(), b.top());
    let slack = prec as i64 + 4;
    // an operand entirely below half an ulp of the other only nudges the rounding
    if tb < ta - slack {
        let nudge = BigReal {
            mant: bm.signum(),
            exp: ta - slack,
            prec,
        };
        return add_impl(a, &nudge, false);
    }
    if ta < tb - slack {
        let nudge = BigReal {
            mant: a.mant.signum(),
            exp: tb - slack,
            prec,
        };
        let bb = BigReal {
            mant: bm,
            exp: b.exp,
            prec: b.prec,
        };
        return add_impl(&bb, &nudge, false);
    }
    let e = a.exp.min(b.exp);
    let m = (&a.mant << (a.exp - e) as usize) + (bm << (b.exp - e) as usize);
    BigReal::normalize(m, e, prec)
}

impl Add for &BigReal {
    type Output = BigReal;
    fn add(self, rhs: &BigReal) -> BigReal {
        add_impl(self, rhs, false)
    }
}

impl Sub for &BigReal {
    type Output = BigReal;
    fn sub(self, rhs: &BigReal) -> BigReal {
        add_impl(self, rhs, true)
    }
}

impl Mul for &BigReal {
    type Output = BigReal;
    fn mul(self, rhs: &BigReal) -> BigReal {
        BigReal::normalize(
            &self.mant * &rhs.mant,
            self.exp + rhs.exp,
            self.prec.max(rhs.prec),
        )
    }
}

impl Div for &BigReal {
    type Output = BigReal;
    fn div(self, rhs: &BigReal) -> BigReal {
        assert!(!rhs.is_zero(), "BigReal division by zero");
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() {
            return BigReal::zero(prec);
        }
        let shift = (prec as i64 + 2 + rhs.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let q = (&self.mant << shift as usize) / &rhs.mant;
        BigReal::normalize(q, self.exp - shift - rhs.exp, prec)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal {
            mant: -&self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal {
            mant: -self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: &BigReal) -> BigReal {
                (&self).$m(rhs)
            }
        }
        impl $tr<BigReal> for &BigReal {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for BigReal {}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigReal {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let mag = match self.top().cmp(&other.top()) {
            Ordering::Equal => {
                let e = self.exp.min(other.exp);
                let a = self.mant.abs() << (self.exp - e) as usize;
                let b = other.mant.abs() << (other.exp - e) as usize;
                a.cmp(&b)
            }
            o => o,
        };
        if sa < 0 {
            mag.reverse()
        } else {
            mag
        }
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({} @{}b)", self.to_sci(25), self.prec)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.prec as f64 / LOG2_10).floor() as usize;
        match f.precision() {
            Some(p) => write!(f, "{}", self.to_fixed(p)),
            None => write!(f, "{}", self.to_sci(digits.max(1))),
        }
    }
}
