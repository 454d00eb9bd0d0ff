//! exp, ln, sin and cos on `BigReal`.
//!
//! All three use argument reduction followed by a Taylor or atanh series
//! evaluated with extra working bits. Absolute error of `ln` and relative
//! error of `exp` stay below a couple of ulps at the argument's precision.

use super::consts::ln2_bits;
use super::real::BigReal;

fn series_guard(prec: u32) -> u32 {
    ((prec as f64).sqrt() as u32) / 2 + 2
}

pub fn exp(x: &BigReal) -> BigReal {
    let prec = x.prec();
    if x.is_zero() {
        return BigReal::one(prec);
    }
    let halvings = series_guard(prec);
    let k = (x.to_f64() / std::f64::consts::LN_2).round();
    assert!(k.abs() < 1e15, "exp argument out of range: {x:?}");
    let k = k as i64;
    let w = prec + halvings + 24 + (64 - k.unsigned_abs().leading_zeros());
    let x = x.with_prec(w);
    let r = &x - &ln2_bits(w).mul_int(k);
    let r = r.ldexp(-(halvings as i64));

    let mut sum = BigReal::one(w);
    let mut term = BigReal::one(w);
    let mut n = 1i64;
    let floor = -(w as i64) - 4;
    loop {
        term = (&term * &r).div_int(n);
        if term.is_zero() || term.top() < floor {
            break;
        }
        sum = &sum + &term;
        n += 1;
    }
    for _ in 0..halvings {
        sum = sum.square();
    }
    sum.ldexp(k).with_prec(prec)
}

/// Natural logarithm of a positive number.
///
/// Absolute error is below `2^-prec * (1 + |ln x|)`; relative accuracy is not
/// promised for arguments extremely close to 1.
pub fn ln(x: &BigReal) -> BigReal {
    let prec = x.prec();
    assert!(x.signum() > 0, "ln of a non-positive number: {x:?}");
    let (m, mut e) = x.frexp();
    // keep [1/2, 2) unshifted so ln(1 + small) does not cancel against ln 2
    let m = if e == 1 {
        e = 0;
        m.ldexp(1)
    } else {
        m
    };
    let roots = series_guard(prec);
    let ebits = 64 - e.unsigned_abs().leading_zeros();
    let w = prec + roots + 24 + ebits;
    let mut y = m.with_prec(w);
    for _ in 0..roots {
        y = y.sqrt().expect("positive");
    }
    let one = BigReal::one(w);
    let z = &(&y - &one) / &(&y + &one);
    let z2 = z.square();
    let mut power = z.clone();
    let mut sum = z;
    let mut k = 1i64;
    let floor = -(w as i64) - 4;
    loop {
        power = &power * &z2;
        if power.is_zero() || power.top() < floor {
            break;
        }
        sum = &sum + &power.div_int(2 * k + 1);
        k += 1;
    }
    let ln_m = sum.ldexp(roots as i64 + 1);
    if e == 0 {
        ln_m.with_prec(prec)
    } else {
        (&ln_m + &ln2_bits(w).mul_int(e)).with_prec(prec)
    }
}

/// `(sin y, cos y)` for `|y| <= 1`.
pub fn sin_cos_small(y: &BigReal) -> (BigReal, BigReal) {
    let prec = y.prec();
    debug_assert!(y.to_f64().abs() <= 1.0 + 1e-9);
    let w = prec + 16;
    let y = y.with_prec(w);
    let y2 = y.square();
    let floor = -(w as i64) - 4;

    let mut sin = y.clone();
    let mut term = y.clone();
    let mut n = 1i64;
    loop {
        term = -(&term * &y2).div_int((n + 1) * (n + 2));
        n += 2;
        if term.is_zero() || term.top() < floor {
            break;
        }
        sin = &sin + &term;
    }

    let mut cos = BigReal::one(w);
    let mut term = BigReal::one(w);
    let mut n = 0i64;
    loop {
        term = -(&term * &y2).div_int((n + 1) * (n + 2));
        n += 2;
        if term.is_zero() || term.top() < floor {
            break;
        }
        cos = &cos + &term;
    }
    (sin.with_prec(prec), cos.with_prec(prec))
}
