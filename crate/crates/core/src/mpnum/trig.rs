//! sin, cos and tan at rational multiples of π.
//!
//! The rational multiple is reduced exactly (mod 2, then by symmetry into
//! `[0, 1/4]`) before anything is rounded, so values near zeros and poles
//! keep full relative accuracy.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::consts::pi_bits;
use super::elementary::sin_cos_small;
use super::real::{BigReal, Precision};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrigKind {
    Sin,
    Cos,
    Tan,
}

impl TrigKind {
    pub fn name(&self) -> &'static str {
        match self {
            TrigKind::Sin => "sin",
            TrigKind::Cos => "cos",
            TrigKind::Tan => "tan",
        }
    }
}

impl fmt::Display for TrigKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `x - floor(x / m) * m`.
pub(crate) fn rat_mod(x: &BigRational, m: i64) -> BigRational {
    let m = BigRational::from_integer(BigInt::from(m));
    let k = (x / &m).floor();
    x - k * m
}

/// `sin(pi r)` for `r` in `[0, 1/2]`, via a series at an argument of at most π/4.
fn sin_pi_first_quadrant(r: &BigRational, prec: u32) -> BigReal {
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let w = prec + 8;
    if r.is_zero() {
        return BigReal::zero(prec);
    }
    if r <= &quarter {
        let y = &pi_bits(w) * &BigReal::from_rational(r, w);
        sin_cos_small(&y).0.with_prec(prec)
    } else {
        let s = BigRational::new(BigInt::one(), BigInt::from(2)) - r;
        if s.is_zero() {
            return BigReal::one(prec);
        }
        let y = &pi_bits(w) * &BigReal::from_rational(&s, w);
        sin_cos_small(&y).1.with_prec(prec)
    }
}

fn sin_pi(r: &BigRational, prec: u32) -> BigReal {
    let mut r = rat_mod(r, 2);
    let mut negate = false;
    if r >= BigRational::one() {
        r -= BigRational::one();
        negate = true;
    }
    let comp = BigRational::one() - &r;
    if comp < r {
        r = comp;
    }
    let v = sin_pi_first_quadrant(&r, prec);
    if negate {
        -v
    } else {
        v
    }
}

/// `kind(pi * r)` at `prec` bits.
pub fn trig_pi_bits(kind: TrigKind, r: &BigRational, prec: u32) -> Result<BigReal> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    match kind {
        TrigKind::Sin => Ok(sin_pi(r, prec)),
        TrigKind::Cos => Ok(sin_pi(&(r + half), prec)),
        TrigKind::Tan => {
            let r1 = rat_mod(r, 1);
            if r1 == half {
                return Err(Error::TangentPole(r.to_string()));
            }
            let w = prec + 8;
            let s = sin_pi(&r1, w);
            let c = sin_pi(&(&r1 + half), w);
            Ok((&s / &c).with_prec(prec))
        }
    }
}

pub fn trig_pi(kind: TrigKind, r: &BigRational, p: &Precision) -> Result<BigReal> {
    trig_pi_bits(kind, r, p.bits())
}

/// True when `kind(pi r)` is zero (sin at integers, cos at half-integers,
/// tan at integers).
pub fn trig_pi_is_zero(kind: TrigKind, r: &BigRational) -> bool {
    let twice = r * BigRational::from_integer(BigInt::from(2));
    match kind {
        TrigKind::Sin | TrigKind::Tan => r.is_integer(),
        TrigKind::Cos => twice.is_integer() && twice.to_integer().is_odd(),
    }
}

/// True when `kind(pi r)` is a pole (tan at half-integers).
pub fn trig_pi_is_pole(kind: TrigKind, r: &BigRational) -> bool {
    let twice = r * BigRational::from_integer(BigInt::from(2));
    kind == TrigKind::Tan && twice.is_integer() && twice.to_integer().is_odd() && !r.is_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn p() -> Precision {
        Precision::with_guard(40, 10).unwrap()
    }

    fn assert_close(a: &BigReal, b: &BigReal) {
        let d = (a - b).abs();
        assert!(d.is_zero() || d.log2_abs() < -150.0, "{a:?} vs {b:?}");
    }

    #[test]
    fn special_values() {
        let p = p();
        let bits = p.bits();
        assert_close(
            &trig_pi(TrigKind::Tan, &q(1, 4), &p).unwrap(),
            &BigReal::one(bits),
        );
        let one_plus_sqrt2 = &BigReal::one(bits) + &BigReal::from_int(2, bits).sqrt().unwrap();
        assert_close(
            &trig_pi(TrigKind::Tan, &q(3, 8), &p).unwrap(),
            &one_plus_sqrt2,
        );
        assert_close(
            &trig_pi(TrigKind::Sin, &q(1, 6), &p).unwrap(),
            &BigReal::pow2(-1, bits),
        );
        assert_close(
            &trig_pi(TrigKind::Cos, &q(1, 3), &p).unwrap(),
            &BigReal::pow2(-1, bits),
        );
        assert_close(
            &trig_pi(TrigKind::Cos, &q(2, 3), &p).unwrap(),
            &-BigReal::pow2(-1, bits),
        );
        assert!(trig_pi(TrigKind::Sin, &q(3, 1), &p).unwrap().is_zero());
        assert_close(
            &trig_pi(TrigKind::Sin, &q(-1, 2), &p).unwrap(),
            &-BigReal::one(bits),
        );
    }

    #[test]
    fn tangent_pole_is_rejected() {
        let p = p();
        assert!(matches!(
            trig_pi(TrigKind::Tan, &q(1, 2), &p),
            Err(Error::TangentPole(_))
        ));
        assert!(matches!(
            trig_pi(TrigKind::Tan, &q(-5, 2), &p),
            Err(Error::TangentPole(_))
        ));
        assert!(trig_pi_is_pole(TrigKind::Tan, &q(7, 2)));
        assert!(!trig_pi_is_pole(TrigKind::Tan, &q(3, 1)));
        assert!(trig_pi_is_zero(TrigKind::Cos, &q(-1, 2)));
        assert!(!trig_pi_is_zero(TrigKind::Cos, &q(1, 1)));
    }

    #[test]
    fn reduction_is_exact_far_from_origin() {
        let p = p();
        // sin(pi (10^30 + 1/6)) = 1/2 exactly; a float reduction would lose it
        let big = BigRational::from_integer(num_traits::pow(BigInt::from(10), 30)) + q(1, 6);
        assert_close(
            &trig_pi(TrigKind::Sin, &big, &p).unwrap(),
            &BigReal::pow2(-1, p.bits()),
        );
        // tan just below the pole is large but accurate
        let near = q(1, 2) - q(1, 1_000_000_000_000);
        let t = trig_pi(TrigKind::Tan, &near, &p).unwrap();
        let expected = 1e12 / std::f64::consts::PI;
        assert!((t.to_f64() / expected - 1.0).abs() < 1e-12);
    }
}
