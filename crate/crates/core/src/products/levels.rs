//! Evaluators whose pieces are balanced gamma ratios.
//!
//! For roots `c_i`, `d_i` with `sum c = sum d` and a shift `s` keeping every
//! `t + c`, `t + d` positive,
//! `sum_{t >= 0} ln(prod (t + s + c) / prod (t + s + d)) = sum lnG(d + s) - sum lnG(c + s)`.
//!
//! Paperfolding levels: for `n + 1 = 2^j (2k + 1)` the sign is `(-1)^k`, and
//! pairing `k = 2t` with `k = 2t + 1` puts the level in that form with
//! numerator roots `(2^j - 1 + a)/2^(j+2)`, `(3 2^j - 1 + b)/2^(j+2)` and
//! denominator roots `(2^j - 1 + b)/2^(j+2)`, `(3 2^j - 1 + a)/2^(j+2)`.
//!
//! Tail bound: with `rho` the largest root magnitude and `C = sum |a_i - b_i|`,
//! `|f'(x)| <= 4C / x^2` for `x >= 2 rho`, where `f = ln R`. A pair at
//! `y_t = 2^(j+2) t + 2^j - 1` contributes at most `2^(j+1) 4C / y_t^2`, and
//! `sum_t 1 / y_t^2 <= 4.5 / 4^j`, so `|A_j| <= 36C / 2^j` once `2^j - 1 >= 2 rho`
//! and the whole level lies past the start index. Levels beyond `J` then sum
//! to at most `36C / 2^J`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::blocks::{log2_add, term_ratio};
use super::{with_escalation, CertifiedValue, ProductSpec, Weight};
use crate::error::{Error, Result};
use crate::mpnum::elementary::ln;
use crate::mpnum::gamma::log_gamma_rational_bits;
use crate::mpnum::{BigReal, Precision};
use crate::sequences::SeqKind;

const MAX_LEVELS: u64 = 20_000;

/// A logarithm and a bound on its absolute error, as `log2`.
#[derive(Debug, Clone)]
pub(crate) struct LogSum {
    pub value: BigReal,
    pub err_log2: f64,
}

impl LogSum {
    pub fn zero(prec: u32) -> Self {
        LogSum {
            value: BigReal::zero(prec),
            err_log2: f64::NEG_INFINITY,
        }
    }

    pub fn add(&mut self, other: &LogSum) {
        self.value = &self.value + &other.value;
        self.err_log2 = log2_add(self.err_log2, other.err_log2);
    }

    pub fn sub(&mut self, other: &LogSum) {
        self.value = &self.value - &other.value;
        self.err_log2 = log2_add(self.err_log2, other.err_log2);
    }
}

fn ulp_err(v: &BigReal, w: u32) -> f64 {
    v.log2_abs().max(0.0) - w as f64 + 3.0
}

/// `sum lnG(d + s) - sum lnG(c + s)`.
pub(crate) fn gamma_ratio_log(
    num: &[BigRational],
    den: &[BigRational],
    shift: &BigRational,
    w: u32,
) -> Result<LogSum> {
    let mut acc = LogSum::zero(w);
    for (roots, sign) in [(den, 1), (num, -1)] {
        for r in roots {
            let v = log_gamma_rational_bits(&(r + shift), w)?;
            let piece = LogSum {
                err_log2: ulp_err(&v, w),
                value: v,
            };
            if sign > 0 {
                acc.add(&piece);
            } else {
                acc.sub(&piece);
            }
        }
    }
    Ok(acc)
}

/// `ln R(n)` for one index.
pub(crate) fn log_term(spec: &ProductSpec, n: &BigInt, w: u32) -> LogSum {
    let r = term_ratio(spec, n);
    let v = ln(&BigReal::from_rational(&r, w + 8)).with_prec(w);
    LogSum {
        err_log2: ulp_err(&v, w),
        value: v,
    }
}

fn working_bits(p: &Precision, pieces: u64) -> u32 {
    p.bits() + 8 + (64 - pieces.max(1).leading_zeros())
}

fn trivial(spec: &ProductSpec, p: &Precision) -> Option<CertifiedValue> {
    spec.is_trivial()
        .then(|| CertifiedValue::exact(BigReal::one(p.bits())))
}

pub fn eval_unsigned_certified(spec: &ProductSpec, p: &Precision) -> Result<CertifiedValue> {
    if spec.weight != Weight::Unsigned {
        return Err(Error::Domain(format!(
            "expected an unsigned product, got weight {}",
            spec.weight
        )));
    }
    if let Some(v) = trivial(spec, p) {
        return Ok(v);
    }
    with_escalation(p, |p| {
        let w = working_bits(p, 2 * spec.num_roots.len() as u64);
        let shift = BigRational::from_integer(BigInt::from(spec.start));
        let log = gamma_ratio_log(&spec.num_roots, &spec.den_roots, &shift, w)?;
        Ok(CertifiedValue::from_log(&log.value, log.err_log2, p.bits()))
    })
}

fn half(r: &BigRational) -> BigRational {
    r / BigRational::from_integer(BigInt::from(2))
}

/// `(-1)^n` weights: pairs `(2t, 2t + 1)` give numerator roots `a/2`, `(b+1)/2`
/// and denominator roots `b/2`, `(a+1)/2`.
pub fn eval_alternating_certified(spec: &ProductSpec, p: &Precision) -> Result<CertifiedValue> {
    if spec.weight != Weight::Signed(SeqKind::AlternatingSign) {
        return Err(Error::Domain(format!(
            "expected alternating weights, got {}",
            spec.weight
        )));
    }
    if let Some(v) = trivial(spec, p) {
        return Ok(v);
    }
    let one = BigRational::one();
    let num: Vec<BigRational> = spec
        .num_roots
        .iter()
        .map(half)
        .chain(spec.den_roots.iter().map(|b| half(&(b + &one))))
        .collect();
    let den: Vec<BigRational> = spec
        .den_roots
        .iter()
        .map(half)
        .chain(spec.num_roots.iter().map(|a| half(&(a + &one))))
        .collect();
    with_escalation(p, |p| {
        let w = working_bits(p, 2 * num.len() as u64 + 1);
        let mut acc = LogSum::zero(w);
        let mut t0 = spec.start / 2;
        if spec.start % 2 == 1 {
            acc.sub(&log_term(spec, &BigInt::from(spec.start), w));
            t0 += 1;
        }
        let shift = BigRational::from_integer(BigInt::from(t0));
        acc.add(&gamma_ratio_log(&num, &den, &shift, w)?);
        Ok(CertifiedValue::from_log(&acc.value, acc.err_log2, p.bits()))
    })
}

/// Number of levels needed so that the tail `36C / 2^J` is below `2^-target`
/// and every omitted level lies entirely in the regime of the bound.
fn paperfold_levels(spec: &ProductSpec, target_bits: u32) -> Result<(u64, f64)> {
    let c = spec.root_spread().to_f64().unwrap_or(f64::INFINITY);
    let rho = spec.root_radius().to_f64().unwrap_or(f64::INFINITY);
    let reach = (2.0 * rho).max(spec.start as f64) + 1.0;
    // 2^(J+1) - 1 >= reach
    let j_reach = (reach.log2() - 1.0).ceil().max(0.0);
    let j_tail = ((36.0 * c).log2() + target_bits as f64).ceil().max(0.0);
    let levels = j_reach.max(j_tail);
    if !levels.is_finite() || levels as u64 > MAX_LEVELS {
        return Err(Error::PrecisionUnreachable {
            digits: 0,
            reason: format!("paperfolding evaluation would need more than {MAX_LEVELS} levels"),
        });
    }
    let j = levels as u64;
    let tail_log2 = (36.0 * c).log2() - j as f64;
    Ok((j, tail_log2))
}

/// Sum over one level `j` of `(-1)^k f(2^(j+1) k + 2^j - 1)` for indices at or
/// past the start.
fn paperfold_level(spec: &ProductSpec, j: u64, w: u32) -> Result<LogSum> {
    let pow = BigInt::one() << j as usize;
    let step = &pow << 1usize;
    let scale = BigRational::from_integer(&pow << 2usize);
    let n0 = BigInt::from(spec.start);
    let first: BigInt = &pow - 1u32;
    let k0 = if first >= n0 {
        BigInt::zero()
    } else {
        Integer::div_ceil(&(&n0 - &first), &step)
    };
    let mut acc = LogSum::zero(w);
    let t0 = if k0.is_odd() {
        let idx = &step * &k0 + &first;
        acc.sub(&log_term(spec, &idx, w));
        (&k0 + 1u32) / 2u32
    } else {
        &k0 / 2u32
    };
    let low = BigRational::from_integer(first.clone());
    let high = BigRational::from_integer(&pow * 3u32 - 1u32);
    let at = |base: &BigRational, r: &BigRational| (base + r) / &scale;
    let num: Vec<BigRational> = spec
        .num_roots
        .iter()
        .map(|a| at(&low, a))
        .chain(spec.den_roots.iter().map(|b| at(&high, b)))
        .collect();
    let den: Vec<BigRational> = spec
        .den_roots
        .iter()
        .map(|b| at(&low, b))
        .chain(spec.num_roots.iter().map(|a| at(&high, a)))
        .collect();
    acc.add(&gamma_ratio_log(
        &num,
        &den,
        &BigRational::from_integer(t0),
        w,
    )?);
    Ok(acc)
}

pub fn eval_paperfold_certified(spec: &ProductSpec, p: &Precision) -> Result<CertifiedValue> {
    if spec.weight != Weight::Signed(SeqKind::Paperfold) {
        return Err(Error::Domain(format!(
            "expected paperfolding weights, got {}",
            spec.weight
        )));
    }
    if let Some(v) = trivial(spec, p) {
        return Ok(v);
    }
    with_escalation(p, |p| {
        let (levels, tail_log2) = paperfold_levels(spec, p.bits() + 4).map_err(|e| match e {
            Error::PrecisionUnreachable { reason, .. } => Error::PrecisionUnreachable {
                digits: p.decimal_digits,
                reason,
            },
            other => other,
        })?;
        let w = working_bits(p, (levels + 1) * (4 * spec.num_roots.len() as u64 + 1));
        let parts: Vec<LogSum> = (0..=levels)
            .into_par_iter()
            .map(|j| paperfold_level(spec, j, w))
            .collect::<Result<_>>()?;
        let mut acc = LogSum::zero(w);
        for part in &parts {
            acc.add(part);
        }
        let err = log2_add(acc.err_log2, tail_log2);
        Ok(CertifiedValue::from_log(&acc.value, err, p.bits()))
    })
}
