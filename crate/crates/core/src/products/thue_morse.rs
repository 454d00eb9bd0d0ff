//! Thue-Morse weighted products.
//!
//! For `r < 2^L` the bits of `r` and `2^L q` are disjoint, so
//! `m_{2^L q + r} = m_q m_r` and the tail of the log-series regroups as
//! `sum_{q >= N} m_q h_L(q)` with `h_L(q) = sum_{r < 2^L} m_r f(2^L q + r)`.
//! Since `sum_r m_r E^r = prod_{i < L} (1 - E^(2^i))`, `h_L` is an iterated
//! difference with steps `1, 2, ..., 2^(L-1)`:
//! `|h_L(q)| <= 2^(L(L-1)/2) sup |f^(L)|` on `[2^L q, 2^(L+1) q)`.
//! With `f = ln R`, `rho` the largest root magnitude and `C = sum |a_i - b_i|`,
//! `|f^(L)(x)| <= L! C / (x - rho)^(L+1)`, and summing over `q >= N` gives
//! `tail <= 2^(L(L-1)/2) L! C (X^-(L+1) + X^-L / (L 2^L))` with `X = 2^L N - rho`.
//! The head `n0 <= n < 2^L N` is multiplied out exactly.

use num_traits::ToPrimitive;
use serde::Serialize;

use super::blocks::{log2_add, weighted_block_product};
use super::{with_escalation, CertifiedValue, ProductSpec, Weight};
use crate::error::{Error, Result};
use crate::mpnum::{BigReal, Precision};
use crate::sequences::SeqKind;

pub const MAX_LEVELS: u32 = 20;
pub const MAX_BLOCKS: u64 = 2000;
/// Direct terms allowed in one evaluation.
pub const MAX_TERMS: u64 = 1 << 27;

/// Level count `L`, block count `N` and the resulting tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThueMorsePlan {
    pub levels: u32,
    pub blocks: u64,
    pub tail_log2: f64,
}

impl ThueMorsePlan {
    pub fn terms(&self) -> u64 {
        self.blocks << self.levels
    }
}

fn ln_factorial_log2(l: u32) -> f64 {
    (1..=l).map(|k| (k as f64).log2()).sum()
}

/// `log2` of the tail bound, or `None` when `X <= 0`.
pub(crate) fn tail_bound_log2(levels: u32, blocks: u64, rho: f64, spread: f64) -> Option<f64> {
    let l = levels as f64;
    let x = (blocks as f64) * l.exp2() - rho;
    if x <= 0.0 || spread == 0.0 {
        return if spread == 0.0 {
            Some(f64::NEG_INFINITY)
        } else {
            None
        };
    }
    let k = l * (l - 1.0) / 2.0 + ln_factorial_log2(levels) + spread.log2();
    let first = k - (l + 1.0) * x.log2();
    let second = k - l.log2() - l - l * x.log2();
    Some(log2_add(first, second))
}

/// Cheapest `(L, N)` within the caps whose tail is below `2^-target_bits`.
pub fn plan_thue_morse(spec: &ProductSpec, target_bits: u32) -> Option<ThueMorsePlan> {
    let rho = spec.root_radius().to_f64()?;
    let spread = spec.root_spread().to_f64()?;
    let target = -(target_bits as f64);
    let mut best: Option<ThueMorsePlan> = None;
    for levels in 1..=MAX_LEVELS {
        let size = 1u64 << levels;
        let min_blocks = (spec.start.div_ceil(size))
            .max((rho / size as f64).floor() as u64 + 1)
            .max(1);
        let ok = |n: u64| tail_bound_log2(levels, n, rho, spread).is_some_and(|t| t <= target);
        if min_blocks > MAX_BLOCKS || !ok(MAX_BLOCKS.max(min_blocks)) {
            continue;
        }
        // the bound decreases in N: bisect for the least admissible block count
        let (mut lo, mut hi) = (min_blocks, MAX_BLOCKS.max(min_blocks));
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let plan = ThueMorsePlan {
            levels,
            blocks: lo,
            tail_log2: tail_bound_log2(levels, lo, rho, spread).expect("admissible"),
        };
        if plan.terms() <= MAX_TERMS && best.is_none_or(|b| plan.terms() < b.terms()) {
            best = Some(plan);
        }
    }
    best
}

pub fn eval_thue_morse_certified(spec: &ProductSpec, p: &Precision) -> Result<CertifiedValue> {
    if spec.weight != Weight::Signed(SeqKind::ThueMorse) {
        return Err(Error::Domain(format!(
            "expected Thue-Morse weights, got {}",
            spec.weight
        )));
    }
    if spec.is_trivial() {
        return Ok(CertifiedValue::exact(BigReal::one(p.bits())));
    }
    with_escalation(p, |p| {
        let plan = plan_thue_morse(spec, p.bits() + 4).ok_or_else(|| Error::PrecisionUnreachable {
            digits: p.decimal_digits,
            reason: format!(
                "Thue-Morse tail needs more than L = {MAX_LEVELS}, N = {MAX_BLOCKS} or {MAX_TERMS} direct terms"
            ),
        })?;
        let w = p.bits() + 8;
        let head = weighted_block_product(spec, spec.start, plan.terms(), w);
        // e^t - 1 <= 1.01 t for the log-tail t
        let rel = log2_add(head.rel_err_log2, plan.tail_log2 + 0.015);
        Ok(CertifiedValue::with_relative(
            head.value.with_prec(p.bits()),
            log2_add(rel, -(p.bits() as f64)),
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::products::{eval_partial, make_product};
    use crate::q;

    fn tm() -> Weight {
        Weight::Signed(SeqKind::ThueMorse)
    }

    #[test]
    fn woods_robbins_value() {
        let p = Precision::new(30).unwrap();
        let spec = make_product(vec![q(1, 2)], vec![q(1, 1)], 0, tm()).unwrap();
        let v = eval_thue_morse_certified(&spec, &p).unwrap();
        let half_sqrt2 = BigReal::from_int(2, p.bits()).sqrt().unwrap().ldexp(-1);
        let (delta, ok) = v.agrees_with(&CertifiedValue::exact(half_sqrt2));
        assert!(ok, "{delta:?}");
        assert!(v.meets(&p));
    }

    #[test]
    fn plans_shrink_with_the_target() {
        let spec = make_product(vec![q(1, 2)], vec![q(1, 1)], 0, tm()).unwrap();
        let small = plan_thue_morse(&spec, 80).unwrap();
        let large = plan_thue_morse(&spec, 200).unwrap();
        assert!(small.terms() < large.terms());
        assert!(large.tail_log2 <= -200.0);
        assert!(plan_thue_morse(&spec, 5000).is_none());
    }

    #[test]
    fn tail_bound_dominates_the_true_tail_at_low_order() {
        // f(x) = ln((x + 1/2)/(x + 1)), L = 2, N = 4: compare against a long direct sum
        let (levels, blocks) = (2u32, 4u64);
        let bound = tail_bound_log2(levels, blocks, 1.0, 0.5).unwrap().exp2();
        let f = |x: f64| ((x + 0.5) / (x + 1.0)).ln();
        let mut tail = 0.0;
        for n in (blocks << levels)..20_000_000u64 {
            let s = if n.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            tail += s * f(n as f64);
        }
        assert!(tail.abs() <= bound, "{tail} vs {bound}");
    }

    #[test]
    fn start_index_beyond_first_block() {
        let p = Precision::new(20).unwrap();
        let full = make_product(vec![q(1, 2)], vec![q(1, 1)], 0, tm()).unwrap();
        let late = make_product(vec![q(1, 2)], vec![q(1, 1)], 100, tm()).unwrap();
        let a = eval_thue_morse_certified(&full, &p).unwrap();
        let b = eval_thue_morse_certified(&late, &p).unwrap();
        let head = eval_partial(&full, 100, &p).unwrap();
        let d = (&a.value - &(&head * &b.value)).abs();
        assert!(d.log2_abs() < -60.0);
    }
}
