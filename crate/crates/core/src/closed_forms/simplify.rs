//! Rewriting a `GammaExpr` into canonical form.
//!
//! Gamma rules run to a fixpoint in a fixed order: shift arguments into
//! `(0, 1]`, then one duplication step on the largest same-sign pair
//! `(z, z + 1/2)`, then one reflection step on a pair `(x, 1 - x)`. Each
//! duplication lowers the total gamma exponent and each reflection lowers the
//! number of distinct arguments without raising it, so the loop terminates.
//! Trig factors are then reduced to `sin`/`cos` at arguments in `(0, 1/4]` or
//! `tan` in `(0, 1/2)` with positive exponent, and exact values at multiples
//! of π/6 and π/4 are substituted.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::expr::GammaExpr;
use crate::mpnum::trig::rat_mod;
use crate::mpnum::TrigKind;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn quarter() -> BigRational {
    BigRational::new(1.into(), 4.into())
}

fn pow_rat(r: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), e.unsigned_abs() as usize)
    }
}

/// `Gamma(x) = Gamma(x - n) * prod_{i=1..n} (x - i)` with `x - n` in `(0, 1]`;
/// then `Gamma(1) = 1` and `Gamma(1/2) = pi^(1/2)`.
fn shift_gammas(e: &mut GammaExpr) {
    let old = std::mem::take(&mut e.gammas);
    let one = BigRational::one();
    for (mut x, k) in old {
        let mut factor = BigRational::one();
        while x > one {
            x -= &one;
            factor *= &x;
        }
        e.rational *= pow_rat(&factor, k);
        if x == one {
            continue;
        }
        if x == half() {
            e.pi_half_exp += k;
            continue;
        }
        *e.gammas.entry(x).or_insert(0) += k;
    }
    e.gammas.retain(|_, k| *k != 0);
}

/// `Gamma(z) Gamma(z + 1/2) = 2^(1 - 2z) pi^(1/2) Gamma(2z)`.
fn duplicate_once(e: &mut GammaExpr) -> bool {
    let found = e.gammas.iter().rev().find_map(|(z, &a)| {
        let partner = z + half();
        let b = *e.gammas.get(&partner)?;
        (a.signum() == b.signum()).then(|| (z.clone(), partner, a.signum() * a.abs().min(b.abs())))
    });
    let Some((z, partner, k)) = found else {
        return false;
    };
    *e.gammas.get_mut(&z).unwrap() -= k;
    *e.gammas.get_mut(&partner).unwrap() -= k;
    e.two_exp += (rat(1) - &z * rat(2)) * rat(k);
    e.pi_half_exp += k;
    *e.gammas.entry(&z * rat(2)).or_insert(0) += k;
    e.gammas.retain(|_, k| *k != 0);
    true
}

/// `Gamma(1 - x)^k = (pi / sin(pi x))^k Gamma(x)^(-k)` for `x < 1/2`.
fn reflect_once(e: &mut GammaExpr) -> bool {
    let found = e
        .gammas
        .keys()
        .find(|x| **x < half() && e.gammas.contains_key(&(rat(1) - *x)))
        .cloned();
    let Some(x) = found else {
        return false;
    };
    let k = e.gammas.remove(&(rat(1) - &x)).unwrap();
    *e.gammas.get_mut(&x).unwrap() -= k;
    e.gammas.retain(|_, k| *k != 0);
    e.pi_half_exp += 2 * k;
    *e.trigs.entry((TrigKind::Sin, x)).or_insert(0) -= k;
    true
}

/// A trig factor moved to canonical position; `negate` flips the sign.
enum Canon {
    Unit,
    Zero,
    Pole,
    Factor(TrigKind, BigRational, bool),
}

fn canon_trig(kind: TrigKind, r: &BigRational) -> Canon {
    let one = rat(1);
    match kind {
        TrigKind::Sin | TrigKind::Cos => {
            // cos(pi r) = sin(pi (r + 1/2))
            let mut s = if kind == TrigKind::Cos {
                rat_mod(&(r + half()), 2)
            } else {
                rat_mod(r, 2)
            };
            let mut neg = false;
            if s >= one {
                s -= &one;
                neg = true;
            }
            if s.is_zero() {
                return Canon::Zero;
            }
            if s > half() {
                s = &one - &s;
            }
            if s == half() {
                return if neg {
                    Canon::Factor(TrigKind::Sin, half(), true)
                } else {
                    Canon::Unit
                };
            }
            if s > quarter() {
                Canon::Factor(TrigKind::Cos, half() - s, neg)
            } else {
                Canon::Factor(TrigKind::Sin, s, neg)
            }
        }
        TrigKind::Tan => {
            let mut s = rat_mod(r, 1);
            if s.is_zero() {
                return Canon::Zero;
            }
            if s == half() {
                return Canon::Pole;
            }
            let mut neg = false;
            if s > half() {
                s = &one - &s;
                neg = true;
            }
            Canon::Factor(TrigKind::Tan, s, neg)
        }
    }
}

/// Exact value of a canonical trig factor, when it is a power of 2 times a surd.
fn exact_trig(kind: TrigKind, r: &BigRational) -> Option<GammaExpr> {
    let third = BigRational::new(1.into(), 3.into());
    let sixth = BigRational::new(1.into(), 6.into());
    let q = quarter();
    let e = match kind {
        TrigKind::Sin if *r == sixth => GammaExpr::two_pow(rat(-1)),
        TrigKind::Sin if *r == q => GammaExpr::two_pow(-half()),
        TrigKind::Sin if *r == half() => GammaExpr::one(),
        TrigKind::Cos if *r == q => GammaExpr::two_pow(-half()),
        TrigKind::Cos if *r == sixth => &GammaExpr::two_pow(rat(-1)) * &GammaExpr::surd(3, half()),
        TrigKind::Tan if *r == q => GammaExpr::one(),
        TrigKind::Tan if *r == sixth => GammaExpr::surd(3, -half()),
        TrigKind::Tan if *r == third => GammaExpr::surd(3, half()),
        _ => return None,
    };
    Some(e)
}

fn simplify_trigs(e: &mut GammaExpr) {
    let old = std::mem::take(&mut e.trigs);
    let mut out: BTreeMap<(TrigKind, BigRational), i64> = BTreeMap::new();
    for ((kind, r), k) in old {
        match canon_trig(kind, &r) {
            Canon::Unit => {}
            Canon::Zero if k > 0 => {
                *e = GammaExpr::rational(BigRational::zero());
                return;
            }
            // a zero raised to a negative power, or a pole: kept for eval to reject
            Canon::Zero | Canon::Pole => *out.entry((kind, r)).or_insert(0) += k,
            Canon::Factor(kind, s, neg) => {
                if neg && k % 2 != 0 {
                    e.rational = -e.rational.clone();
                }
                *out.entry((kind, s)).or_insert(0) += k;
            }
        }
    }
    out.retain(|_, k| *k != 0);

    // sin(x)^a cos(x)^b with a, b of opposite sign
    let sines: Vec<(BigRational, i64)> = out
        .iter()
        .filter(|((kd, _), _)| *kd == TrigKind::Sin)
        .map(|((_, r), k)| (r.clone(), *k))
        .collect();
    for (r, a) in sines {
        let Some(&b) = out.get(&(TrigKind::Cos, r.clone())) else {
            continue;
        };
        if a.signum() == b.signum() {
            continue;
        }
        let t = a.signum() * a.abs().min(b.abs());
        *out.get_mut(&(TrigKind::Sin, r.clone())).unwrap() -= t;
        *out.get_mut(&(TrigKind::Cos, r.clone())).unwrap() += t;
        // tan(x) with x <= 1/4 here; tan(1/2 - x) = 1/tan(x) is merged below
        *out.entry((TrigKind::Tan, r)).or_insert(0) += t;
    }
    out.retain(|_, k| *k != 0);

    // tan(x)^k and tan(1/2 - x)^j merged onto the argument with positive exponent
    let tans: Vec<BigRational> = out
        .keys()
        .filter(|(kd, r)| *kd == TrigKind::Tan && r.is_positive() && *r < quarter())
        .map(|(_, r)| r.clone())
        .collect();
    for r in tans {
        let co = half() - &r;
        let j = out.remove(&(TrigKind::Tan, co.clone())).unwrap_or(0);
        let k = out.remove(&(TrigKind::Tan, r.clone())).unwrap_or(0) - j;
        if k > 0 {
            out.insert((TrigKind::Tan, r), k);
        } else if k < 0 {
            out.insert((TrigKind::Tan, co), -k);
        }
    }
    let negatives: Vec<(BigRational, i64)> = out
        .iter()
        .filter(|((kd, r), k)| {
            *kd == TrigKind::Tan && **k < 0 && *r > BigRational::zero() && *r < half()
        })
        .map(|((_, r), k)| (r.clone(), *k))
        .collect();
    for (r, k) in negatives {
        out.remove(&(TrigKind::Tan, r.clone()));
        *out.entry((TrigKind::Tan, half() - r)).or_insert(0) -= k;
    }

    let mut exact = GammaExpr::one();
    out.retain(|(kind, r), k| match exact_trig(*kind, r) {
        Some(v) => {
            exact = &exact * &v.pow(*k);
            false
        }
        None => true,
    });
    e.trigs = out;
    *e = &*e * &exact;
}

/// Canonical form of `e`; see the module documentation for the rules.
pub fn simplify(e: &GammaExpr) -> GammaExpr {
    let mut e = e.clone();
    if e.rational.is_zero() {
        return GammaExpr::rational(BigRational::zero());
    }
    loop {
        shift_gammas(&mut e);
        if duplicate_once(&mut e) || reflect_once(&mut e) {
            continue;
        }
        break;
    }
    simplify_trigs(&mut e);
    if e.rational.is_zero() {
        return e;
    }
    e.normalize_radicals();
    e
}
