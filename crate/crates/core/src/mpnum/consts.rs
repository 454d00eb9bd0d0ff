//! π, ln 2 and Euler's constant at arbitrary precision.
//!
//! Each constant is computed once at the highest precision requested so far
//! and rounded down for cheaper requests; the cached value carries 32 bits of
//! slack, so a rounded copy is within one ulp.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::elementary::ln;
use super::real::{BigReal, Precision};

const SLACK: u32 = 32;

fn cached(cell: &Mutex<Option<BigReal>>, prec: u32, compute: fn(u32) -> BigReal) -> BigReal {
    if let Some(v) = cell.lock().expect("constant cache poisoned").as_ref() {
        if v.prec() >= prec + SLACK {
            return v.with_prec(prec);
        }
    }
    let v = compute(prec + SLACK);
    let mut guard = cell.lock().expect("constant cache poisoned");
    let keep = match guard.as_ref() {
        Some(old) => old.prec() < v.prec(),
        None => true,
    };
    if keep {
        *guard = Some(v.clone());
    }
    v.with_prec(prec)
}

/// `atan(1/x) * 2^w` (or `atanh`), truncated; the error is below one unit per term.
fn arctan_inv_fixed(x: u64, w: u32, hyperbolic: bool) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << w as usize) / &x;
    let mut sum = power.clone();
    let mut k: u64 = 1;
    loop {
        power /= &x2;
        if power.is_zero() {
            break;
        }
        let term = &power / (2 * k + 1);
        if !hyperbolic && k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

fn compute_pi(prec: u32) -> BigReal {
    let w = prec + 16;
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    let v = arctan_inv_fixed(5, w, false) * 16 - arctan_inv_fixed(239, w, false) * 4;
    BigReal::from_int(v, prec + 16)
        .ldexp(-(w as i64))
        .with_prec(prec)
}

fn compute_ln2(prec: u32) -> BigReal {
    let w = prec + 16;
    // ln 2 = 18 acoth 26 - 2 acoth 4801 + 8 acoth 8749
    let v = arctan_inv_fixed(26, w, true) * 18 - arctan_inv_fixed(4801, w, true) * 2
        + arctan_inv_fixed(8749, w, true) * 8;
    BigReal::from_int(v, prec + 16)
        .ldexp(-(w as i64))
        .with_prec(prec)
}

/// Brent-McMillan: with `A_k`, `B_k` the weighted harmonic sums below,
/// `gamma = U/V` up to `pi * exp(-4n)`.
fn compute_euler_gamma(prec: u32) -> BigReal {
    let w = prec + 16;
    let n = ((w as f64) * std::f64::consts::LN_2 / 4.0).ceil() as u64 + 2;
    let n2 = BigInt::from(n) * n;
    let log_n = ln(&BigReal::from_int(n, w + 8));
    let scale = BigInt::one() << w as usize;
    let mut a = -(log_n.ldexp(w as i64).floor_int());
    let mut b = scale.clone();
    let mut u = a.clone();
    let mut v = b.clone();
    let mut k: u64 = 1;
    loop {
        b = &b * &n2 / (k * k);
        a = (&a * &n2 / k + &b) / k;
        u += &a;
        v += &b;
        if k > n && a.is_zero() && b.is_zero() {
            break;
        }
        k += 1;
    }
    BigReal::from_ratio(&u, &v, prec)
}

pub fn pi_bits(prec: u32) -> BigReal {
    static CELL: Mutex<Option<BigReal>> = Mutex::new(None);
    cached(&CELL, prec, compute_pi)
}

pub fn ln2_bits(prec: u32) -> BigReal {
    static CELL: Mutex<Option<BigReal>> = Mutex::new(None);
    cached(&CELL, prec, compute_ln2)
}

pub fn euler_gamma_bits(prec: u32) -> BigReal {
    static CELL: Mutex<Option<BigReal>> = Mutex::new(None);
    cached(&CELL, prec, compute_euler_gamma)
}

pub fn const_pi(p: &Precision) -> BigReal {
    pi_bits(p.bits())
}

pub fn const_euler_gamma(p: &Precision) -> BigReal {
    euler_gamma_bits(p.bits())
}

pub fn const_log2(p: &Precision) -> BigReal {
    ln2_bits(p.bits())
}

#[cfg(test)]
mod tests {
    use super::*;

    // 60-digit references from an independent multiprecision library
    const PI: &str = "3.14159265358979323846264338327950288419716939937510582097494";
    const EULER: &str = "0.577215664901532860606512090082402431042159335939923598805767";
    const LN2: &str = "0.693147180559945309417232121458176568075500134360255254120680";

    fn close(a: &BigReal, expected: &str, digits: i32) {
        let e = BigReal::parse_decimal(expected, a.prec() + 20).unwrap();
        let err = (a - &e).abs();
        assert!(
            err.log2_abs() < -(digits as f64) * std::f64::consts::LOG2_10,
            "{a:?} vs {expected}"
        );
    }

    #[test]
    fn constants_match_reference_digits() {
        let p = Precision::with_guard(50, 10).unwrap();
        close(&const_pi(&p), PI, 58);
        close(&const_euler_gamma(&p), EULER, 58);
        close(&const_log2(&p), LN2, 58);
    }

    #[test]
    fn low_precision_renderings() {
        let p30 = Precision::with_guard(30, 10).unwrap();
        assert_eq!(
            const_pi(&p30).to_fixed(29),
            "3.14159265358979323846264338328"
        );
        let p20 = Precision::with_guard(20, 10).unwrap();
        assert_eq!(
            const_euler_gamma(&p20).to_fixed(20),
            "0.57721566490153286061"
        );
        let p10 = Precision::with_guard(10, 10).unwrap();
        assert_eq!(const_log2(&p10).to_fixed(10), "0.6931471806");
    }

    #[test]
    fn higher_precision_agrees_on_certified_digits() {
        for digits in [20u32, 45, 120] {
            let lo = Precision::with_guard(digits, 10).unwrap();
            let hi = Precision::with_guard(digits * 2, 10).unwrap();
            for (a, b) in [
                (const_pi(&lo), const_pi(&hi)),
                (const_euler_gamma(&lo), const_euler_gamma(&hi)),
                (const_log2(&lo), const_log2(&hi)),
            ] {
                assert_eq!(a.to_fixed(digits as usize), b.to_fixed(digits as usize));
            }
        }
    }
}
