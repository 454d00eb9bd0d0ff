//! Gamma and log-gamma for positive arguments.
//!
//! The argument is shifted up by an integer `m` until it exceeds a
//! precision-dependent threshold (about half the working bit count), the
//! Stirling series is summed there, and `ln(x (x+1) ... (x+m-1))` is
//! subtracted. For real `z > 0` the Stirling remainder is bounded by the first
//! omitted term, and summation stops once that term is below `2^-w`.
//! Rational arguments stay exact through the shift so structured inputs like
//! `(2^j - 1)/2^(j+2)` lose nothing before the final logarithm.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::consts::pi_bits;
use super::elementary::{exp, ln};
use super::real::{BigReal, Precision};
use crate::error::{Error, Result};

/// `B_2, B_4, ..., B_{2n}` from the tangent numbers: with `T_k` the k-th
/// tangent number, `B_{2k} = (-1)^(k-1) 2k T_k / (4^k (4^k - 1))`.
fn compute_even_bernoulli(n: usize) -> Vec<BigRational> {
    let mut t: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    if n == 0 {
        return Vec::new();
    }
    t[1] = BigInt::one();
    for k in 2..=n {
        t[k] = &t[k - 1] * (k - 1);
    }
    for k in 2..=n {
        for j in k..=n {
            t[j] = &t[j - 1] * (j - k) + &t[j] * (j - k + 2);
        }
    }
    (1..=n)
        .map(|k| {
            let four_k = BigInt::one() << (2 * k);
            let den = &four_k * (&four_k - 1u32);
            let num = &t[k] * (2 * k);
            let b = BigRational::new(num, den);
            if k % 2 == 0 {
                -b
            } else {
                b
            }
        })
        .collect()
}

/// `B_{2k}` for `k = 1..=n`, cached.
pub fn even_bernoulli(n: usize) -> Vec<BigRational> {
    static CACHE: Mutex<Vec<BigRational>> = Mutex::new(Vec::new());
    {
        let cache = CACHE.lock().expect("bernoulli cache poisoned");
        if cache.len() >= n {
            return cache[..n].to_vec();
        }
    }
    let have = CACHE.lock().expect("bernoulli cache poisoned").len();
    let fresh = compute_even_bernoulli(n.max(2 * have).max(16));
    let mut cache = CACHE.lock().expect("bernoulli cache poisoned");
    if cache.len() < fresh.len() {
        *cache = fresh;
    }
    cache[..n].to_vec()
}

fn half_ln_two_pi(prec: u32) -> BigReal {
    static CELL: Mutex<Option<BigReal>> = Mutex::new(None);
    if let Some(v) = CELL.lock().expect("cache poisoned").as_ref() {
        if v.prec() >= prec + 16 {
            return v.with_prec(prec);
        }
    }
    let w = prec + 48;
    let v = ln(&pi_bits(w).mul_int(2)).ldexp(-1);
    *CELL.lock().expect("cache poisoned") = Some(v.clone());
    v.with_prec(prec)
}

fn shift_threshold(w: u32) -> i64 {
    (w as i64 / 2).max(12)
}

/// Stirling series for `ln Gamma(z)`, `z` at least the shift threshold.
fn stirling(z: &BigReal, w: u32) -> BigReal {
    let half = BigReal::pow2(-1, w);
    let mut acc = &(&(z - &half) * &ln(z)) - z;
    acc = &acc + &half_ln_two_pi(w);
    let inv = z.recip();
    let inv2 = inv.square();
    let floor = -(w as i64) - 4;
    let mut power = inv;
    let mut want = 32usize;
    let mut bern = even_bernoulli(want);
    let mut k = 1usize;
    loop {
        if k > bern.len() {
            want *= 2;
            bern = even_bernoulli(want);
        }
        let b = &bern[k - 1];
        let coeff = b / BigRational::from_integer(BigInt::from((2 * k) * (2 * k - 1)));
        let term = &BigReal::from_rational(&coeff, w) * &power;
        // first omitted term bounds the remainder for real z > 0
        if term.is_zero() || term.top() < floor {
            break;
        }
        acc = &acc + &term;
        power = &power * &inv2;
        k += 1;
    }
    acc
}

fn check_positive_rational(x: &BigRational) -> Result<()> {
    if !x.is_positive() {
        return Err(Error::NonPositiveArgument(x.to_string()));
    }
    Ok(())
}

/// `ln Gamma(x)` for exact rational `x > 0`, absolute error below `2^-prec`
/// times a small multiple of `max(1, |result|)`.
pub fn log_gamma_rational_bits(x: &BigRational, prec: u32) -> Result<BigReal> {
    check_positive_rational(x)?;
    if x.is_integer() && (x.numer() == &BigInt::one() || x.numer() == &BigInt::from(2)) {
        return Ok(BigReal::zero(prec));
    }
    let w = prec + 24;
    let threshold = shift_threshold(w);
    let m = if x.to_integer() >= BigInt::from(threshold) {
        0
    } else {
        (BigInt::from(threshold) - x.to_integer())
            .to_i64()
            .expect("small shift")
    };
    let (num, den) = (x.numer(), x.denom());
    let z = BigReal::from_rational(&(x + BigRational::from_integer(BigInt::from(m))), w + 16);
    let mut acc = stirling(&z, w + 16);
    if m > 0 {
        let prod_num = product_tree((0..m).map(|i| num + den * i).collect());
        let prod_den = num_traits::pow(den.clone(), m as usize);
        let prod = BigReal::from_ratio(&prod_num, &prod_den, w + 16);
        acc = &acc - &ln(&prod);
    }
    Ok(acc.with_prec(prec))
}

fn product_tree(mut v: Vec<BigInt>) -> BigInt {
    if v.is_empty() {
        return BigInt::one();
    }
    while v.len() > 1 {
        let mut next = Vec::with_capacity(v.len().div_ceil(2));
        let mut it = v.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a * b),
                None => next.push(a),
            }
        }
        v = next;
    }
    v.pop().expect("nonempty")
}

/// `ln Gamma(x)` for a floating `x > 0`.
pub fn log_gamma_real_bits(x: &BigReal, prec: u32) -> Result<BigReal> {
    if x.signum() <= 0 {
        return Err(Error::NonPositiveArgument(x.to_sci(12)));
    }
    let w = prec + 24;
    let threshold = shift_threshold(w) as f64;
    let xf = x.to_f64();
    let m = if xf >= threshold {
        0
    } else {
        (threshold - xf).ceil() as i64
    };
    let x = x.with_prec(w + 16);
    let z = &x + &BigReal::from_int(m, w + 16);
    let mut acc = stirling(&z, w + 16);
    if m > 0 {
        let mut prod = x.clone();
        for i in 1..m {
            prod = &prod * &(&x + &BigReal::from_int(i, w + 16));
        }
        acc = &acc - &ln(&prod);
    }
    Ok(acc.with_prec(prec))
}

/// Either an exact rational or a floating argument.
#[derive(Debug, Clone)]
pub enum GammaArg {
    Exact(BigRational),
    Real(BigReal),
}

impl From<BigRational> for GammaArg {
    fn from(r: BigRational) -> Self {
        GammaArg::Exact(r)
    }
}

impl From<BigReal> for GammaArg {
    fn from(r: BigReal) -> Self {
        GammaArg::Real(r)
    }
}

pub fn log_gamma(x: impl Into<GammaArg>, p: &Precision) -> Result<BigReal> {
    match x.into() {
        GammaArg::Exact(r) => log_gamma_rational_bits(&r, p.bits()),
        GammaArg::Real(r) => log_gamma_real_bits(&r, p.bits()),
    }
}

pub fn gamma(x: impl Into<GammaArg>, p: &Precision) -> Result<BigReal> {
    let bits = p.bits();
    let x = x.into();
    if let GammaArg::Exact(r) = &x {
        // small positive integers are exact factorials
        if r.is_integer() && r.is_positive() && r.numer() <= &BigInt::from(64) {
            let n = r.numer().to_u64().expect("small");
            let f: BigInt = (1..n).map(BigInt::from).product();
            return Ok(BigReal::from_int(f, bits));
        }
    }
    let w = bits + 16;
    let lg = match x {
        GammaArg::Exact(r) => log_gamma_rational_bits(&r, w)?,
        GammaArg::Real(r) => log_gamma_real_bits(&r, w)?,
    };
    Ok(exp(&lg).with_prec(bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpnum::consts::const_pi;
    use crate::q;

    fn p50() -> Precision {
        Precision::with_guard(50, 10).unwrap()
    }

    fn assert_rel(a: &BigReal, b: &BigReal, digits: f64) {
        let rel = (&(a - b) / b).abs();
        assert!(
            rel.is_zero() || rel.log2_abs() < -digits * std::f64::consts::LOG2_10,
            "{a:?} vs {b:?}"
        );
    }

    #[test]
    fn bernoulli_numbers() {
        let b = even_bernoulli(6);
        let expected = [(1, 6), (-1, 30), (1, 42), (-1, 30), (5, 66), (-691, 2730)];
        for (got, (n, d)) in b.iter().zip(expected) {
            assert_eq!(got, &BigRational::new(n.into(), d.into()));
        }
        // growing the cache keeps earlier entries
        assert_eq!(even_bernoulli(40)[..6], b[..]);
    }

    #[test]
    fn factorials_and_half() {
        let p = p50();
        assert_eq!(gamma(q(1, 1), &p).unwrap(), BigReal::one(p.bits()));
        assert_eq!(gamma(q(5, 1), &p).unwrap(), BigReal::from_int(24, p.bits()));
        let sqrt_pi = const_pi(&p).sqrt().unwrap();
        assert_rel(&gamma(q(1, 2), &p).unwrap(), &sqrt_pi, 55.0);
        // the floating path agrees with the exact one
        let half = BigReal::from_rational(&q(1, 2), p.bits());
        assert_rel(&gamma(half, &p).unwrap(), &sqrt_pi, 55.0);
        assert_rel(
            &gamma(q(81, 2), &p).unwrap(),
            &gamma(BigReal::from_int(81, p.bits()).ldexp(-1), &p).unwrap(),
            55.0,
        );
    }

    #[test]
    fn gamma_quarter_reference() {
        let p = p50();
        let expected = BigReal::parse_decimal(
            "3.62560990822190831193068515586767200299516768288006",
            p.bits(),
        )
        .unwrap();
        assert_rel(&gamma(q(1, 4), &p).unwrap(), &expected, 49.0);
        let lg = log_gamma(q(1, 4), &p).unwrap();
        assert_rel(&exp(&lg), &expected, 49.0);
    }

    #[test]
    fn log_gamma_of_one_and_two_vanish() {
        let p = p50();
        assert!(log_gamma(q(1, 1), &p).unwrap().is_zero());
        assert!(log_gamma(q(2, 1), &p).unwrap().is_zero());
        assert!(
            log_gamma(BigReal::one(p.bits()), &p)
                .unwrap()
                .abs()
                .log2_abs()
                < -190.0
        );
    }

    #[test]
    fn rejects_non_positive() {
        let p = p50();
        assert!(matches!(
            gamma(q(0, 1), &p),
            Err(Error::NonPositiveArgument(_))
        ));
        assert!(matches!(
            log_gamma(q(-1, 2), &p),
            Err(Error::NonPositiveArgument(_))
        ));
        assert!(matches!(
            log_gamma(BigReal::from_int(-3, 64), &p),
            Err(Error::NonPositiveArgument(_))
        ));
    }

    #[test]
    fn recurrence() {
        let p = p50();
        for x in [q(1, 4), q(1, 3), q(7, 5), q(9, 2)] {
            let lhs = gamma(&x + q(1, 1), &p).unwrap();
            let rhs = &BigReal::from_rational(&x, p.bits()) * &gamma(x.clone(), &p).unwrap();
            assert_rel(&lhs, &rhs, 50.0);
        }
    }

    #[test]
    fn large_and_tiny_arguments() {
        let p = Precision::with_guard(30, 10).unwrap();
        // Gamma(101) = 100!
        let f: BigInt = (1..=100u32).map(BigInt::from).product();
        assert_rel(
            &gamma(q(101, 1), &p).unwrap(),
            &BigReal::from_int(f, p.bits()),
            35.0,
        );
        // Gamma(x) ~ 1/x - gamma_E for tiny x
        let tiny = q(1, 1_000_000_000_000);
        let g = gamma(tiny, &p).unwrap();
        assert!((g.to_f64() - (1e12 - 0.5772156649015329)).abs() < 1e-3);
    }
}
