//! Arithmetic-geometric mean and the complete elliptic integral of the first kind.
//!
//! `K(m)` uses the parameter convention `m = k^2`:
//! `K(m) = integral_0^{pi/2} dphi / sqrt(1 - m sin^2 phi) = pi / (2 AGM(1, sqrt(1 - m)))`.

use super::consts::pi_bits;
use super::real::{BigReal, Precision};
use crate::error::{Error, Result};

/// AGM of two non-negative numbers; converges quadratically.
pub fn agm(a: &BigReal, b: &BigReal) -> Result<BigReal> {
    if a.is_negative() || b.is_negative() {
        return Err(Error::Domain("AGM of a negative number".into()));
    }
    let prec = a.prec().max(b.prec());
    let w = prec + 16;
    let mut a = a.with_prec(w);
    let mut b = b.with_prec(w);
    if a.is_zero() || b.is_zero() {
        return Ok(BigReal::zero(prec));
    }
    let floor = -(w as i64) + 2;
    for _ in 0..200 {
        let diff = (&a - &b).abs();
        if diff.is_zero() || diff.top() - a.top() < floor {
            break;
        }
        let next_a = (&a + &b).ldexp(-1);
        b = (&a * &b).sqrt()?;
        a = next_a;
    }
    Ok(a.with_prec(prec))
}

fn elliptic_k_bits(m: &BigReal, bits: u32) -> Result<BigReal> {
    let w = bits + 16;
    let one = BigReal::one(w);
    let m = m.with_prec(w);
    if m.is_negative() || m >= one {
        return Err(Error::Domain(format!(
            "elliptic parameter m = {} outside [0, 1)",
            m.to_sci(12)
        )));
    }
    let root = (&one - &m).sqrt()?;
    let mean = agm(&one, &root)?;
    Ok((&pi_bits(w) / &mean.ldexp(1)).with_prec(bits))
}

pub fn elliptic_k_agm(m: &BigReal, p: &Precision) -> Result<BigReal> {
    elliptic_k_bits(m, p.bits())
}

/// `(1/2) integral_0^{pi/2} dphi / sqrt(2 - sin^2 phi) = K(1/2) / (2 sqrt 2)`.
pub fn half_lemniscatic_integral(p: &Precision) -> Result<BigReal> {
    let w = p.bits() + 16;
    let k = elliptic_k_bits(&BigReal::pow2(-1, w), w)?;
    let sqrt2 = BigReal::from_int(2, w).sqrt()?;
    Ok((&k / &sqrt2.ldexp(1)).with_prec(p.bits()))
}
