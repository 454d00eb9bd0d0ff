//! Two constants defined by weighted series: the Flajolet-Martin pair
//! `Q`, `R` and the paperfolding Dirichlet series `sum eps_n / (n+1)^s`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::blocks::log2_add;
use super::{eval_thue_morse_certified, make_product, CertifiedValue, ProductSpec, Weight};
use crate::error::{Error, Result};
use crate::mpnum::gamma::even_bernoulli;
use crate::mpnum::{const_euler_gamma, exp, BigReal, Precision};
use crate::q;
use crate::sequences::SeqKind;

#[derive(Debug, Clone, PartialEq)]
pub struct FlajoletMartin {
    pub q: CertifiedValue,
    pub r: CertifiedValue,
    pub r_via_q: CertifiedValue,
}

/// `Q = prod_{n >= 1} (2n / (2n+1))^{m_n}`.
pub fn flajolet_martin_q_spec() -> ProductSpec {
    make_product(
        vec![q(0, 1)],
        vec![q(1, 2)],
        1,
        Weight::Signed(SeqKind::ThueMorse),
    )
    .expect("valid")
}

/// `prod_{n >= 1} ((4n+1)(4n+2) / (4n (4n+3)))^{m_n}`.
pub fn flajolet_martin_r_product_spec() -> ProductSpec {
    make_product(
        vec![q(1, 4), q(1, 2)],
        vec![q(0, 1), q(3, 4)],
        1,
        Weight::Signed(SeqKind::ThueMorse),
    )
    .expect("valid")
}

/// Relative error of a product or quotient of two certified values.
fn rel_log2(v: &CertifiedValue) -> f64 {
    if v.abs_error_bound.is_zero() {
        return f64::NEG_INFINITY;
    }
    v.error_log2() - v.value.abs().log2_abs()
}

/// `Q`, `R` from its defining product, and `R` recomputed as `2^(-1/2) e^gamma / Q`.
pub fn flajolet_martin(p: &Precision) -> Result<FlajoletMartin> {
    let bits = p.bits();
    let w = bits + 16;
    let q_val = eval_thue_morse_certified(&flajolet_martin_q_spec(), p)?;
    let prod = eval_thue_morse_certified(&flajolet_martin_r_product_spec(), p)?;
    let e_gamma = exp(&const_euler_gamma(&Precision::with_guard(
        p.decimal_digits,
        p.guard_digits + 5,
    )?));
    let sqrt2 = BigReal::from_int(2, w).sqrt()?;
    let scalar = &(&e_gamma * &sqrt2) / &BigReal::from_int(3, w);
    let r_value = (&scalar * &prod.value).with_prec(bits);
    let rounding = -(bits as f64) + 3.0;
    let r = CertifiedValue::with_relative(r_value, log2_add(rel_log2(&prod), rounding));
    let via = (&(&e_gamma / &sqrt2) / &q_val.value).with_prec(bits);
    // 1/(1 - e) <= 1 + 2e for e <= 1/2
    let r_via_q = CertifiedValue::with_relative(via, log2_add(rel_log2(&q_val) + 1.0, rounding));
    Ok(FlajoletMartin {
        q: q_val,
        r,
        r_via_q,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VonHaeseler {
    pub s: u32,
    pub lhs: CertifiedValue,
    pub rhs: CertifiedValue,
}

/// `sum_{t >= 0} ((t + 1/4)^-s - (t + 3/4)^-s)` by a direct head and an
/// Euler-Maclaurin tail. The remainder after the `B_{2K}` term is at most
/// `2 zeta(2K) / (2pi)^(2K) * |g^(2K-1)(T)|` per monotone piece, and
/// `2 zeta(2K) <= 3.3`.
fn quarter_pair_sum(s: u32, w: u32) -> (BigReal, f64) {
    let big_t = (w as i64 / 3).max(16);
    let quarter = BigReal::from_rational(&q(1, 4), w);
    let three_quarter = BigReal::from_rational(&q(3, 4), w);
    let mut head = BigReal::zero(w);
    for t in 0..big_t {
        let tt = BigReal::from_int(t, w);
        head = &head
            + &(&(&tt + &quarter).powi(-(s as i64)) - &(&tt + &three_quarter).powi(-(s as i64)));
    }
    let t_big = BigReal::from_int(big_t, w);
    let x1 = &t_big + &quarter;
    let x2 = &t_big + &three_quarter;
    // integral of the tail
    let integral = if s == 1 {
        crate::mpnum::ln(&(&x2 / &x1))
    } else {
        (&x1.powi(1 - s as i64) - &x2.powi(1 - s as i64)).div_int(s as i64 - 1)
    };
    let mut tail = &integral + &(&x1.powi(-(s as i64)) - &x2.powi(-(s as i64))).ldexp(-1);
    // derivative of order m of x^-s is (-1)^m (s)_m x^(-s-m)
    let inv1 = x1.recip();
    let inv2 = x2.recip();
    let mut want = 64usize;
    let mut bern = even_bernoulli(want);
    let mut k = 1usize;
    let mut rising = BigInt::from(s); // (s)_{2k-1}
    let mut fact = BigInt::one(); // (2k)!
    let mut pow1 = x1.powi(-(s as i64) - 1);
    let mut pow2 = x2.powi(-(s as i64) - 1);
    let inv1_sq = inv1.square();
    let inv2_sq = inv2.square();
    let remainder_log2;
    loop {
        if k > bern.len() {
            want *= 2;
            bern = even_bernoulli(want);
        }
        fact *= BigInt::from((2 * k - 1) * (2 * k));
        // g^(2k-1)(T) = -(s)_{2k-1} (T+c)^(-s-2k+1)
        let deriv_diff = &(&pow2 - &pow1).mul_big(&rising);
        let coeff =
            BigReal::from_rational(&(&bern[k - 1] / BigRational::from_integer(fact.clone())), w);
        // sum_{t >= T} g = int + g(T)/2 - sum B_2k/(2k)! g^(2k-1)(T) + R
        let term = &coeff * deriv_diff;
        let remainder = {
            let both = &(&pow1 + &pow2).mul_big(&rising);
            both.log2_abs() + 1.73 - (2 * k) as f64 * (2.0 * std::f64::consts::PI).log2()
        };
        tail = &tail - &term;
        if remainder < -(w as f64) - 4.0 {
            remainder_log2 = remainder;
            break;
        }
        rising *= BigInt::from(s as usize + 2 * k - 1) * BigInt::from(s as usize + 2 * k);
        pow1 = &pow1 * &inv1_sq;
        pow2 = &pow2 * &inv2_sq;
        k += 1;
        assert!(k < 10 * w as usize, "Euler-Maclaurin did not converge");
    }
    let total = &head + &tail;
    let rounding = -(w as f64) + (big_t as f64 + k as f64).log2() + 4.0;
    (total, log2_add(remainder_log2, rounding))
}

/// `sum_{k >= 0} (-1)^k (2k+1)^-s` by the Cohen-Rodriguez Villegas-Zagier
/// acceleration for moment sequences, error at most `2 / (3 + sqrt 8)^n`.
fn beta_accelerated(s: u32, w: u32) -> (BigReal, f64) {
    let rate = (3.0 + 8f64.sqrt()).log2();
    let n = ((w as f64 + 8.0) / rate).ceil() as i64 + 1;
    // d = ((3 + sqrt 8)^n + (3 - sqrt 8)^n) / 2, an integer
    let (mut d0, mut d1) = (BigInt::one(), BigInt::from(3));
    for _ in 1..n {
        let next = &d1 * 6 - &d0;
        d0 = d1;
        d1 = next;
    }
    let d = d1;
    let mut b = BigRational::from_integer(BigInt::from(-1));
    let mut c = BigRational::from_integer(-d.clone());
    let mut sum = BigReal::zero(w);
    for k in 0..n {
        c = &b - &c;
        let a_k = BigReal::from_int(2 * k + 1, w).powi(-(s as i64));
        sum = &sum + &(&BigReal::from_rational(&c, w) * &a_k);
        b *= BigRational::new(
            BigInt::from(2 * (k + n) * (k - n)),
            BigInt::from((2 * k + 1) * (k + 1)),
        );
    }
    let value = &sum / &BigReal::from_int(d, w);
    let err = log2_add(1.0 - n as f64 * rate, -(w as f64) + (n as f64).log2() + 4.0);
    (value, err)
}

/// Both sides of `sum eps_n / (n+1)^s = 2^s / (2^s - 1) sum (-1)^n / (2n+1)^s`.
///
/// The left side is summed by levels `n + 1 = 2^j (2k+1)`: level `j` equals
/// `2^(-js) beta(s)` with `beta(s) = 4^-s sum_t ((t+1/4)^-s - (t+3/4)^-s)`,
/// and levels past `J` add at most `2^(-(J+1)s) / (1 - 2^-s)`.
pub fn von_haeseler(s: u32, p: &Precision) -> Result<VonHaeseler> {
    if s < 1 {
        return Err(Error::Domain("von Haeseler series needs s >= 1".into()));
    }
    let bits = p.bits();
    let w = bits + 24;
    let (pairs, pair_err) = quarter_pair_sum(s, w);
    let beta = pairs.ldexp(-2 * s as i64);
    let beta_err = pair_err - 2.0 * s as f64;
    let levels = (w as i64 + 8) / s as i64 + 1;
    let mut lhs = BigReal::zero(w);
    for j in 0..=levels {
        lhs = &lhs + &beta.ldexp(-(j * s as i64));
    }
    let level_tail = -((levels + 1) as f64) * s as f64 - (1.0 - (-(s as f64)).exp2()).log2();
    // sum_j 2^-js <= 2 scales the error of beta
    let lhs_err = log2_add(
        log2_add(beta_err + 1.0, level_tail),
        -(w as f64) + (levels as f64).log2() + 2.0,
    );
    let lhs = CertifiedValue::with_relative(lhs.with_prec(bits), -(bits as f64) + 1.0);
    let lhs = widen(lhs, lhs_err);

    let (beta2, beta2_err) = beta_accelerated(s, w);
    let two_s = BigRational::from_integer(BigInt::one() << s as usize);
    let factor = &two_s / (&two_s - BigRational::one());
    let rhs_value = (&BigReal::from_rational(&factor, w) * &beta2).with_prec(bits);
    let rhs = CertifiedValue::with_relative(rhs_value, -(bits as f64) + 1.0);
    let rhs = widen(
        rhs,
        beta2_err + 1.0 + (factor.to_f64().unwrap_or(2.0)).log2().max(0.0),
    );
    Ok(VonHaeseler { s, lhs, rhs })
}

/// Adds an absolute error `2^extra_log2` to a certified value.
fn widen(v: CertifiedValue, extra_log2: f64) -> CertifiedValue {
    let total = log2_add(v.error_log2(), extra_log2);
    CertifiedValue {
        abs_error_bound: super::bound_from_log2(total),
        value: v.value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpnum::const_pi;
    use crate::products::eval_partial;

    const CATALAN: &str = "0.91596559417721901505460351493238411077414937428167";

    #[test]
    fn von_haeseler_s1_is_half_pi() {
        let p = Precision::new(30).unwrap();
        let v = von_haeseler(1, &p).unwrap();
        let half_pi = CertifiedValue::exact(const_pi(&p).ldexp(-1));
        assert!(v.lhs.agrees_with(&half_pi).1);
        assert!(v.rhs.agrees_with(&half_pi).1);
        assert!(v.lhs.meets(&p) && v.rhs.meets(&p));
    }

    #[test]
    fn von_haeseler_s2_is_four_thirds_catalan() {
        let p = Precision::new(40).unwrap();
        let v = von_haeseler(2, &p).unwrap();
        let g = BigReal::parse_decimal(CATALAN, p.bits() + 20).unwrap();
        let expected = CertifiedValue::exact(
            (&g.mul_int(4) / &BigReal::from_int(3, p.bits())).with_prec(p.bits()),
        );
        let (d, ok) = v.lhs.agrees_with(&expected);
        assert!(ok, "{d:?}");
        assert!(v.rhs.agrees_with(&expected).1);
    }

    #[test]
    fn von_haeseler_large_s_is_near_one() {
        let p = Precision::new(20).unwrap();
        let v = von_haeseler(30, &p).unwrap();
        let d = (&v.lhs.value - &BigReal::one(p.bits())).abs();
        assert!(d.log2_abs() < -28.0);
        assert!(v.lhs.agrees_with(&v.rhs).1);
    }

    #[test]
    fn flajolet_martin_consistency() {
        let p = Precision::new(30).unwrap();
        let fm = flajolet_martin(&p).unwrap();
        let (d, ok) = fm.r.agrees_with(&fm.r_via_q);
        assert!(ok, "{d:?}");
        // brute force at low accuracy
        let partial = eval_partial(
            &flajolet_martin_q_spec(),
            1_000_000,
            &Precision::new(10).unwrap(),
        )
        .unwrap();
        assert!((partial.to_f64() - fm.q.value.to_f64()).abs() < 1e-4);
    }
}
