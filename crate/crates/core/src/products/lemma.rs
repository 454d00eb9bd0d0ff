//! Reduction of `prod (g(n) / g(2n+1))^{eps_n}` to an unsigned product.
//!
//! Using `eps_{2n+1} = eps_n`, the odd-index part of `sum eps_n ln g(n)` cancels
//! `sum eps_n ln g(2n+1)`, leaving `sum_k (-1)^k ln g(2k)`, i.e.
//! `prod_{n >= 0} g(4n) / g(4n+2)`. For `g(x) = prod (x + p_i) / prod (x + q_i)`
//! the signed side has numerator roots `p`, `(1+q)/2` and denominator roots
//! `q`, `(1+p)/2`; the reduced side has numerator roots `p/4`, `(q+2)/4` and
//! denominator roots `q/4`, `(p+2)/4`.
//!
//! When `g` vanishes or blows up at 0 the value `g(0)` is taken to be 1. Both
//! products then start at `n = 1` and carry their `n = 0` factor as an exact
//! rational: `1/g(1)` on the signed side and `1/g(2)` on the reduced side.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{make_product, ProductSpec, Weight};
use crate::error::{Error, Result};
use crate::sequences::SeqKind;

/// `g(x) = prod (x + p_i) / prod (x + q_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GFunctionSpec {
    pub num_roots: Vec<BigRational>,
    pub den_roots: Vec<BigRational>,
}

impl GFunctionSpec {
    pub fn new(num_roots: Vec<BigRational>, den_roots: Vec<BigRational>) -> Result<Self> {
        if num_roots.len() != den_roots.len() || num_roots.is_empty() {
            return Err(Error::InvalidG(format!(
                "g must be a ratio of equally many linear factors, got {} over {}",
                num_roots.len(),
                den_roots.len()
            )));
        }
        if let Some(r) = num_roots.iter().chain(&den_roots).find(|r| r.is_negative()) {
            return Err(Error::InvalidG(format!(
                "root {r} makes g non-positive on the integers"
            )));
        }
        Ok(GFunctionSpec {
            num_roots,
            den_roots,
        })
    }

    fn degenerate_at_zero(&self) -> bool {
        self.num_roots
            .iter()
            .chain(&self.den_roots)
            .any(|r| r.is_zero())
    }

    /// `g(x)` at a rational point where it is finite and nonzero.
    pub fn value_at(&self, x: &BigRational) -> BigRational {
        let num: BigRational = self.num_roots.iter().map(|p| x + p).product();
        let den: BigRational = self.den_roots.iter().map(|q| x + q).product();
        num / den
    }
}

/// A product times an exact rational factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedProduct {
    pub spec: ProductSpec,
    pub boundary_factor: BigRational,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn start_and_boundary(g: &GFunctionSpec, at: i64) -> (u64, BigRational) {
    if g.degenerate_at_zero() {
        (1, g.value_at(&rat(at)).recip())
    } else {
        (0, BigRational::one())
    }
}

/// The signed product `prod (g(n) / g(2n+1))^{eps_n}`.
pub fn lemma_general_lhs(g: &GFunctionSpec) -> Result<ReducedProduct> {
    let half = |r: &BigRational| (r + BigRational::one()) / rat(2);
    let num = g
        .num_roots
        .iter()
        .cloned()
        .chain(g.den_roots.iter().map(half))
        .collect();
    let den = g
        .den_roots
        .iter()
        .cloned()
        .chain(g.num_roots.iter().map(half))
        .collect();
    let (start, boundary_factor) = start_and_boundary(g, 1);
    let spec = make_product(num, den, start, Weight::Signed(SeqKind::Paperfold))?;
    Ok(ReducedProduct {
        spec,
        boundary_factor,
    })
}

/// The equal unsigned product `prod g(4n) / g(4n+2)`.
pub fn lemma_general_reduce(g: &GFunctionSpec) -> Result<ReducedProduct> {
    let four = rat(4);
    let quarter = |r: &BigRational| r / &four;
    let shifted = |r: &BigRational| (r + rat(2)) / &four;
    let num = g
        .num_roots
        .iter()
        .map(quarter)
        .chain(g.den_roots.iter().map(shifted))
        .collect();
    let den = g
        .den_roots
        .iter()
        .map(quarter)
        .chain(g.num_roots.iter().map(shifted))
        .collect();
    let (start, boundary_factor) = start_and_boundary(g, 2);
    let spec = make_product(num, den, start, Weight::Unsigned)?;
    Ok(ReducedProduct {
        spec,
        boundary_factor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpnum::{BigReal, Precision};
    use crate::products::{eval_certified, eval_partial};
    use crate::q;

    fn value(r: &ReducedProduct, p: &Precision) -> BigReal {
        let v = eval_certified(&r.spec, p).unwrap().value;
        &v * &BigReal::from_rational(&r.boundary_factor, p.bits())
    }

    #[test]
    fn x_over_x_plus_one_gives_twice_b() {
        let g = GFunctionSpec::new(vec![q(0, 1)], vec![q(1, 1)]).unwrap();
        let lhs = lemma_general_lhs(&g).unwrap();
        assert_eq!(lhs.spec.start, 1);
        assert_eq!(lhs.boundary_factor, q(2, 1));
        let reduced = lemma_general_reduce(&g).unwrap();
        assert_eq!(reduced.boundary_factor, q(3, 2));
        assert_eq!(reduced.spec.num_roots, vec![q(0, 1), q(3, 4)]);
        assert_eq!(reduced.spec.den_roots, vec![q(1, 4), q(1, 2)]);
        let p = Precision::new(30).unwrap();
        let d = (&value(&lhs, &p) - &value(&reduced, &p)).abs();
        assert!(d.log2_abs() < -100.0);
    }

    #[test]
    fn constant_ratio_is_trivial() {
        let g = GFunctionSpec::new(vec![q(1, 1)], vec![q(1, 1)]).unwrap();
        let p = Precision::new(20).unwrap();
        assert_eq!(
            value(&lemma_general_lhs(&g).unwrap(), &p),
            BigReal::one(p.bits())
        );
        assert_eq!(
            value(&lemma_general_reduce(&g).unwrap(), &p),
            BigReal::one(p.bits())
        );
    }

    #[test]
    fn signed_side_matches_its_definition() {
        let g = GFunctionSpec::new(vec![q(2, 1)], vec![q(1, 1)]).unwrap();
        let lhs = lemma_general_lhs(&g).unwrap();
        let p = Precision::new(20).unwrap();
        // first factor: g(0) / g(1) = 2 / (3/2)
        let first = eval_partial(&lhs.spec, 1, &p).unwrap();
        assert!(
            (&first - &BigReal::from_rational(&q(4, 3), p.bits()))
                .abs()
                .log2_abs()
                < -60.0
        );
    }

    #[test]
    fn invalid_g() {
        assert!(matches!(
            GFunctionSpec::new(vec![q(-1, 2)], vec![q(1, 1)]),
            Err(Error::InvalidG(_))
        ));
        assert!(matches!(
            GFunctionSpec::new(vec![q(1, 2)], vec![]),
            Err(Error::InvalidG(_))
        ));
    }
}
