//! Weighted infinite products `prod_{n >= n0} R(n)^{u_n}` with
//! `R(n) = prod (n + a_i) / prod (n + b_j)` and certified evaluation.
//!
//! Each weight has its own evaluator:
//!
//! * unsigned products are a single gamma ratio;
//! * alternating signs pair `n = 2t, 2t + 1` into one balanced gamma ratio;
//! * paperfolding splits indices by `n + 1 = 2^j (2k + 1)`; every level is a
//!   gamma ratio and the levels beyond the last one computed decay like `2^-j`;
//! * Thue-Morse multiplies the exact partial product up to a multiple of
//!   `2^L` and bounds the tail through the `L`-fold difference structure.
//!
//! Splitting a conditionally convergent sum into levels is a rearrangement.
//! Every level series converges absolutely after pairing and the level sums
//! are dominated by a geometric series; the tests additionally compare every
//! certified value against brute-force partial products.

mod blocks;
mod constants;
mod lemma;
mod levels;
mod thue_morse;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mpnum::{BigReal, Precision};
use crate::sequences::SeqKind;

pub use constants::{
    flajolet_martin, flajolet_martin_q_spec, flajolet_martin_r_product_spec, von_haeseler,
    FlajoletMartin, VonHaeseler,
};
pub use lemma::{lemma_general_lhs, lemma_general_reduce, GFunctionSpec, ReducedProduct};
pub use levels::{eval_alternating_certified, eval_paperfold_certified, eval_unsigned_certified};
pub use thue_morse::{eval_thue_morse_certified, plan_thue_morse, ThueMorsePlan};

pub(crate) use blocks::log2_add;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weight {
    Unsigned,
    #[serde(untagged)]
    Signed(SeqKind),
}

impl Weight {
    pub fn name(&self) -> &'static str {
        match self {
            Weight::Unsigned => "unsigned",
            Weight::Signed(kind) => kind.name(),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "unsigned" | "none" => Ok(Weight::Unsigned),
            other => other.parse().map(Weight::Signed),
        }
    }
}

/// A validated product; construct with [`make_product`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSpec {
    pub num_roots: Vec<BigRational>,
    pub den_roots: Vec<BigRational>,
    pub start: u64,
    pub weight: Weight,
}

pub fn make_product(
    num_roots: Vec<BigRational>,
    den_roots: Vec<BigRational>,
    start: u64,
    weight: Weight,
) -> Result<ProductSpec> {
    if num_roots.len() != den_roots.len() || num_roots.is_empty() {
        return Err(Error::UnequalFactorCounts {
            num: num_roots.len(),
            den: den_roots.len(),
        });
    }
    let n0 = BigRational::from_integer(BigInt::from(start));
    // n + r is increasing in n, so the first index is the only one to check
    for r in num_roots.iter().chain(&den_roots) {
        if !(&n0 + r).is_positive() {
            return Err(Error::NonPositiveFactorOnTail {
                root: r.to_string(),
                n: start,
            });
        }
    }
    if weight == Weight::Unsigned {
        let sa: BigRational = num_roots.iter().sum();
        let sb: BigRational = den_roots.iter().sum();
        if sa != sb {
            return Err(Error::UnbalancedUnsignedProduct {
                num_sum: sa.to_string(),
                den_sum: sb.to_string(),
            });
        }
    }
    Ok(ProductSpec {
        num_roots,
        den_roots,
        start,
        weight,
    })
}

impl ProductSpec {
    /// True when the numerator and denominator roots agree as multisets.
    pub fn is_trivial(&self) -> bool {
        let mut a = self.num_roots.clone();
        let mut b = self.den_roots.clone();
        a.sort();
        b.sort();
        a == b
    }

    /// Largest root magnitude.
    pub(crate) fn root_radius(&self) -> BigRational {
        self.num_roots
            .iter()
            .chain(&self.den_roots)
            .map(|r| r.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// `sum |a_i - b_i|` with both lists sorted; bounds `|R'/R|` far out.
    pub(crate) fn root_spread(&self) -> BigRational {
        let mut a = self.num_roots.clone();
        let mut b = self.den_roots.clone();
        a.sort();
        b.sort();
        a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum()
    }
}

fn fmt_roots(roots: &[BigRational]) -> String {
    roots
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for ProductSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "prod_{{n>={}}} [(n+{{{}}})/(n+{{{}}})]^{}",
            self.start,
            fmt_roots(&self.num_roots),
            fmt_roots(&self.den_roots),
            self.weight
        )
    }
}

/// A value together with a bound on its absolute error.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedValue {
    pub value: BigReal,
    pub abs_error_bound: BigReal,
}

impl CertifiedValue {
    pub fn exact(value: BigReal) -> Self {
        let prec = value.prec();
        CertifiedValue {
            value,
            abs_error_bound: BigReal::zero(prec),
        }
    }

    /// `value` with a bound of `|value| * 2^rel_log2`.
    pub(crate) fn with_relative(value: BigReal, rel_log2: f64) -> Self {
        let bound = bound_from_log2(value.abs().log2_abs() + rel_log2);
        CertifiedValue {
            value,
            abs_error_bound: bound,
        }
    }

    /// `exp(log_value)` where `log_value` is off by at most `2^log_err_log2`.
    pub(crate) fn from_log(log_value: &BigReal, log_err_log2: f64, prec: u32) -> Self {
        let value = crate::mpnum::exp(&log_value.with_prec(prec + 8)).with_prec(prec);
        // e^d - 1 <= 1.01 d for d <= 2^-7, plus rounding of exp
        let rel = log2_add(log_err_log2 + 0.015, -(prec as f64) + 2.0);
        assert!(log_err_log2 < -7.0, "log error too large to certify");
        Self::with_relative(value, rel)
    }

    /// `log2` of the error bound.
    pub fn error_log2(&self) -> f64 {
        self.abs_error_bound.log2_abs()
    }

    /// True when the bound is below `10^-digits * max(1, |value|)`.
    pub fn meets(&self, p: &Precision) -> bool {
        let scale = self.value.abs().log2_abs().max(0.0);
        self.abs_error_bound.is_zero() || self.error_log2() <= p.target_log2() + scale
    }

    /// Distance between the values, and whether it is within the summed bounds.
    pub fn agrees_with(&self, other: &CertifiedValue) -> (BigReal, bool) {
        let delta = (&self.value - &other.value).abs();
        let allowed = &self.abs_error_bound + &other.abs_error_bound;
        let ok = delta <= allowed;
        (delta, ok)
    }
}

/// Upper bound `2^x` with a short mantissa.
pub(crate) fn bound_from_log2(x: f64) -> BigReal {
    if x == f64::NEG_INFINITY {
        return BigReal::zero(64);
    }
    BigReal::pow2_f64(x + 1e-9, 64)
}

/// The exact finite product over `n0 <= n < n_end`, at working precision.
pub fn eval_partial(spec: &ProductSpec, n_end: u64, p: &Precision) -> Result<BigReal> {
    if n_end < spec.start {
        return Err(Error::Domain(format!(
            "partial product end {n_end} is below the start index {}",
            spec.start
        )));
    }
    Ok(blocks::weighted_block_product(spec, spec.start, n_end, p.bits()).value)
}

/// Dispatches on the weight, escalating guard digits while the bound misses
/// the target.
pub fn eval_certified(spec: &ProductSpec, p: &Precision) -> Result<CertifiedValue> {
    match spec.weight {
        Weight::Unsigned => eval_unsigned_certified(spec, p),
        Weight::Signed(SeqKind::AlternatingSign) => eval_alternating_certified(spec, p),
        Weight::Signed(SeqKind::Paperfold) => eval_paperfold_certified(spec, p),
        Weight::Signed(SeqKind::ThueMorse) => eval_thue_morse_certified(spec, p),
    }
}

/// Runs `attempt` at `p` and up to two escalations until it meets `p`.
pub(crate) fn with_escalation(
    p: &Precision,
    mut attempt: impl FnMut(&Precision) -> Result<CertifiedValue>,
) -> Result<CertifiedValue> {
    let mut current = *p;
    for _ in 0..3 {
        let v = attempt(&current)?;
        if v.meets(p) {
            return Ok(v);
        }
        current = current.escalate();
    }
    Err(Error::PrecisionUnreachable {
        digits: p.decimal_digits,
        reason: "error bound stayed above target after escalating guard digits".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn pf() -> Weight {
        Weight::Signed(SeqKind::Paperfold)
    }

    #[test]
    fn construction_checks() {
        assert!(make_product(vec![q(1, 2)], vec![q(1, 1)], 0, pf()).is_ok());
        assert!(make_product(vec![q(1, 1)], vec![q(1, 1)], 0, Weight::Unsigned).is_ok());
        assert!(matches!(
            make_product(vec![q(1, 1)], vec![q(2, 1)], 0, Weight::Unsigned),
            Err(Error::UnbalancedUnsignedProduct { .. })
        ));
        assert!(matches!(
            make_product(vec![q(1, 1), q(2, 1)], vec![q(1, 1)], 0, pf()),
            Err(Error::UnequalFactorCounts { num: 2, den: 1 })
        ));
        assert!(matches!(
            make_product(vec![], vec![], 0, pf()),
            Err(Error::UnequalFactorCounts { .. })
        ));
        assert!(matches!(
            make_product(vec![q(0, 1)], vec![q(1, 2)], 0, pf()),
            Err(Error::NonPositiveFactorOnTail { n: 0, .. })
        ));
        assert!(make_product(vec![q(0, 1)], vec![q(1, 2)], 1, pf()).is_ok());
        assert!(matches!(
            make_product(vec![q(-7, 2)], vec![q(1, 2)], 3, pf()),
            Err(Error::NonPositiveFactorOnTail { n: 3, .. })
        ));
    }

    #[test]
    fn partial_products() {
        let p = Precision::new(30).unwrap();
        let a = make_product(vec![q(1, 2)], vec![q(1, 1)], 0, pf()).unwrap();
        assert_eq!(eval_partial(&a, 0, &p).unwrap(), BigReal::one(p.bits()));
        assert_eq!(
            eval_partial(&a, 1, &p).unwrap(),
            BigReal::from_rational(&q(1, 2), p.bits())
        );
        let two = eval_partial(&a, 2, &p).unwrap();
        assert!(
            (&two - &BigReal::from_rational(&q(3, 8), p.bits()))
                .abs()
                .log2_abs()
                < -130.0
        );
        let b = make_product(vec![q(0, 1)], vec![q(1, 2)], 1, pf()).unwrap();
        assert!(eval_partial(&b, 0, &p).is_err());
        assert_eq!(eval_partial(&b, 1, &p).unwrap(), BigReal::one(p.bits()));
    }

    #[test]
    fn weight_names_round_trip() {
        for w in [
            Weight::Unsigned,
            pf(),
            Weight::Signed(SeqKind::ThueMorse),
            Weight::Signed(SeqKind::AlternatingSign),
        ] {
            assert_eq!(w.name().parse::<Weight>().unwrap(), w);
        }
    }

    #[test]
    fn display_is_readable() {
        let a = make_product(vec![q(1, 2)], vec![q(1, 1)], 0, pf()).unwrap();
        assert_eq!(a.to_string(), "prod_{n>=0} [(n+{1/2})/(n+{1})]^paperfold");
    }
}
