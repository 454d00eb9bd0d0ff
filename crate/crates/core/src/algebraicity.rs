//! Exact fractional-part criteria for when a gamma product is algebraic.
//!
//! `prod Gamma(a_i)` is expected (Rohrlich) to be an algebraic multiple of
//! `pi^(r/2)` exactly when `sum {m a_i} = r/2` for every `m` coprime to the
//! common denominator. The two paperfolding criteria test the sign pattern of
//! `{mb/4}` and `{mc/4}` over units `m` mod `4a`. Verdicts are therefore
//! conditional on that conjecture and say so.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};

/// `x - floor(x)`, in `[0, 1)`.
pub fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RohrlichInstance {
    pub args: Vec<BigRational>,
    /// Least common denominator of the arguments.
    pub d: BigInt,
}

impl RohrlichInstance {
    pub fn new(args: Vec<BigRational>) -> Result<Self> {
        if args.is_empty() {
            return Err(Error::Domain("need at least one gamma argument".into()));
        }
        if let Some(a) = args.iter().find(|a| a.is_integer() && !a.is_positive()) {
            return Err(Error::PoleArgument(a.to_string()));
        }
        let d = args.iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
        Ok(RohrlichInstance { args, d })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub algebraic: bool,
    /// `(m, value)` for each failing `m`; what `value` holds depends on the check.
    pub witnesses: Vec<(u64, String)>,
    /// The verdict rests on Rohrlich's conjecture.
    pub conditional: bool,
}

impl Verdict {
    fn from_witnesses(witnesses: Vec<(u64, String)>) -> Self {
        Verdict {
            algebraic: witnesses.is_empty(),
            witnesses,
            conditional: true,
        }
    }
}

fn small(d: &BigInt, what: &str) -> Result<u64> {
    d.to_u64()
        .filter(|&v| v <= 1 << 24)
        .ok_or_else(|| Error::Domain(format!("{what} {d} is too large to enumerate")))
}

/// Units `m` in `1..modulus` (just `1` when `modulus` is 1).
fn units(modulus: u64) -> impl Iterator<Item = u64> {
    (1..modulus.max(2)).filter(move |m| m.gcd(&modulus) == 1)
}

/// `sum {m a_i} = r/2` for every unit `m` mod `D`; witnesses carry the failing sums.
pub fn rohrlich_check(inst: &RohrlichInstance) -> Result<Verdict> {
    if let Some(a) = inst
        .args
        .iter()
        .find(|a| a.is_integer() && !a.is_positive())
    {
        return Err(Error::PoleArgument(a.to_string()));
    }
    let target = BigRational::new(BigInt::from(inst.args.len()), BigInt::from(2));
    let d = small(&inst.d, "common denominator")?;
    let mut witnesses = Vec::new();
    for m in units(d) {
        let mr = BigRational::from_integer(m.into());
        let sum: BigRational = inst.args.iter().map(|a| frac(&(a * &mr))).sum();
        if sum != target {
            witnesses.push((m, sum.to_string()));
        }
    }
    Ok(Verdict::from_witnesses(witnesses))
}

/// Criterion for the two-parameter paperfolding product: for every unit `m`
/// mod `4a`, `{mb/4} < 1/2` and `{mc/4} <= 1/2`, or `{mb/4} >= 1/2` and
/// `{mc/4} > 1/2`. Witnesses carry `{mb/4}, {mc/4}`.
pub fn corollary_pair_check(b: &BigRational, c: &BigRational) -> Result<Verdict> {
    if !b.is_positive() || !c.is_positive() {
        return Err(Error::Domain(format!(
            "b and c must be positive, got {b} and {c}"
        )));
    }
    let four = BigRational::from_integer(4.into());
    if (b / &four).is_integer() {
        return Err(Error::Domain(format!(
            "b/4 must not be an integer, got b = {b}"
        )));
    }
    if ((c - BigRational::from_integer(2.into())) / &four).is_integer() {
        return Err(Error::Domain(format!(
            "(c-2)/4 must not be an integer, got c = {c}"
        )));
    }
    let a = b.denom().lcm(c.denom());
    let modulus = small(&(a * 4), "modulus")?;
    let half = BigRational::new(1.into(), 2.into());
    let mut witnesses = Vec::new();
    for m in units(modulus) {
        let mr = BigRational::from_integer(m.into());
        let fb = frac(&(b * &mr / &four));
        let fc = frac(&(c * &mr / &four));
        let ok = (fb < half && fc <= half) || (fb >= half && fc > half);
        if !ok {
            witnesses.push((m, format!("{fb}, {fc}")));
        }
    }
    Ok(Verdict::from_witnesses(witnesses))
}

/// The single-parameter product: [`corollary_pair_check`] at `c = 1`.
pub fn corollary_simple_check(b: &BigRational) -> Result<Verdict> {
    corollary_pair_check(b, &BigRational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::{simplify, theorem_pair};
    use crate::q;
    use proptest::prelude::*;

    #[test]
    fn frac_examples() {
        assert_eq!(frac(&q(9, 4)), q(1, 4));
        assert_eq!(frac(&q(-1, 4)), q(3, 4));
        assert_eq!(frac(&q(3, 1)), q(0, 1));
    }

    #[test]
    fn rohrlich_examples() {
        let v = |a: Vec<BigRational>| rohrlich_check(&RohrlichInstance::new(a).unwrap()).unwrap();
        assert!(v(vec![q(1, 2)]).algebraic);
        let quarter = v(vec![q(1, 4)]);
        assert!(!quarter.algebraic);
        assert_eq!(quarter.witnesses[0], (1, "1/4".to_string()));
        assert!(v(vec![q(1, 4), q(3, 4)]).algebraic);
        assert!(v(vec![q(1, 1)]).witnesses.len() == 1);
        // Gamma(1/24) Gamma(11/24) Gamma(19/24) Gamma(17/24) is algebraic times pi^2
        assert!(v(vec![q(1, 24), q(11, 24), q(19, 24), q(17, 24)]).algebraic);
        assert!(v(vec![q(1, 20), q(9, 20), q(13, 20), q(17, 20)]).algebraic);
        assert!(matches!(
            RohrlichInstance::new(vec![q(-2, 1)]),
            Err(Error::PoleArgument(_))
        ));
        assert!(v(vec![q(1, 3)]).conditional);
    }

    #[test]
    fn sign_pattern_examples() {
        assert!(corollary_simple_check(&q(1, 1)).unwrap().algebraic);
        assert!(!corollary_simple_check(&q(2, 1)).unwrap().algebraic);
        assert!(!corollary_simple_check(&q(3, 1)).unwrap().algebraic);
        assert_eq!(
            corollary_simple_check(&q(3, 2)).unwrap(),
            corollary_pair_check(&q(3, 2), &q(1, 1)).unwrap()
        );
        for b in [q(1, 5), q(2, 5), q(1, 2), q(3, 2)] {
            assert!(
                corollary_pair_check(&b, &(q(2, 1) - &b)).unwrap().algebraic,
                "{b}"
            );
        }
        assert!(corollary_pair_check(&q(7, 3), &q(7, 3)).unwrap().algebraic);
        assert!(!corollary_pair_check(&q(2, 1), &q(1, 1)).unwrap().algebraic);
        // the two sporadic products
        assert!(corollary_pair_check(&q(5, 6), &q(1, 6)).unwrap().algebraic);
        assert!(corollary_pair_check(&q(3, 5), &q(1, 5)).unwrap().algebraic);
        assert!(corollary_simple_check(&q(4, 1)).is_err());
        assert!(corollary_pair_check(&q(1, 1), &q(6, 1)).is_err());
        assert!(corollary_pair_check(&q(1, 1), &q(2, 1)).is_err());
    }

    fn arb_rational(max_den: i64) -> impl Strategy<Value = BigRational> {
        (-200i64..200, 1i64..=max_den).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn fractional_part_lemma(x in arb_rational(60)) {
            let f = frac(&x);
            let h = q(1, 2);
            prop_assert!(f >= q(0, 1) && f < q(1, 1));
            if !x.is_integer() {
                prop_assert_eq!(frac(&-x.clone()), q(1, 1) - &f);
            }
            // {1/2 + x} = {x} + 1/2 if {x} < 1/2, else {x} - 1/2
            let up = if f < h { &f + &h } else { &f - &h };
            prop_assert_eq!(frac(&(&h + &x)), up);
            // {1/2 - x} = 1/2 - {x} if {x} <= 1/2, else 3/2 - {x}
            let down = if f <= h { &h - &f } else { q(3, 2) - &f };
            prop_assert_eq!(frac(&(&h - &x)), down);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn simple_is_pair_at_one(n in 1i64..60, d in 1i64..=12) {
            let b = q(n, d);
            prop_assume!(!(&b / q(4, 1)).is_integer());
            prop_assert_eq!(corollary_simple_check(&b).unwrap(), corollary_pair_check(&b, &q(1, 1)).unwrap());
        }

        #[test]
        fn swapping_agrees_with_reciprocal(bn in 1i64..40, bd in 1i64..=12, cn in 1i64..40, cd in 1i64..=12) {
            let (b, c) = (q(bn, bd), q(cn, cd));
            let ok = |x: &BigRational, y: &BigRational| {
                !(x / q(4, 1)).is_integer() && !((y - q(2, 1)) / q(4, 1)).is_integer()
            };
            prop_assume!(ok(&b, &c) && ok(&c, &b));
            let forward = corollary_pair_check(&b, &c).unwrap().algebraic;
            let backward = corollary_pair_check(&c, &b).unwrap().algebraic;
            prop_assert!(simplify(&(theorem_pair(&b, &c).unwrap() * theorem_pair(&c, &b).unwrap())).is_one());
            prop_assert_eq!(forward, backward);
        }
    }

    #[test]
    fn tangent_family_is_algebraic() {
        for d in 1..=12i64 {
            for n in 1..2 * d {
                let b = q(n, d);
                if (&b / q(4, 1)).is_integer() || (-&b / q(4, 1)).is_integer() {
                    continue;
                }
                assert!(
                    corollary_pair_check(&b, &(q(2, 1) - &b)).unwrap().algebraic,
                    "{b}"
                );
            }
        }
    }
}
