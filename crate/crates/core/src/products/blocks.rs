//! Direct evaluation of finite weighted products over an index range.
//!
//! Every factor `n + a` is scaled by the common denominator `D` of the roots
//! so it becomes the positive integer `nD + aD`. Integers are multiplied in
//! `u128` and flushed into a truncated big-integer accumulator, so a run of
//! ten million terms costs a few big multiplications per term at most.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::mpnum::BigReal;
use crate::sequences::seq_term;

use super::{ProductSpec, Weight};

/// A positive number `mant * 2^exp` whose mantissa is truncated (never
/// rounded up) to a bounded width.
struct TruncatedProduct {
    mant: BigUint,
    exp: i64,
    keep: u64,
    truncations: u64,
    chunk: u128,
}

impl TruncatedProduct {
    fn new(keep_bits: u32) -> Self {
        TruncatedProduct {
            mant: BigUint::one(),
            exp: 0,
            keep: keep_bits as u64,
            truncations: 0,
            chunk: 1,
        }
    }

    fn push(&mut self, x: u128) {
        match self.chunk.checked_mul(x) {
            Some(v) => self.chunk = v,
            None => {
                self.flush();
                self.chunk = x;
            }
        }
    }

    fn flush(&mut self) {
        if self.chunk != 1 {
            self.mant *= BigUint::from(self.chunk);
            self.chunk = 1;
        }
        let bits = self.mant.bits();
        if bits > self.keep + 192 {
            let shift = bits - self.keep - 64;
            self.mant >>= shift;
            self.exp += shift as i64;
            self.truncations += 1;
        }
    }

    fn finish(mut self, prec: u32) -> (BigReal, u64) {
        self.flush();
        let v = BigReal::from_int(BigInt::from(self.mant), prec).ldexp(self.exp);
        (v, self.truncations)
    }
}

/// Common denominator and scaled integer roots.
pub(crate) struct ScaledRoots {
    pub den: BigInt,
    pub num: Vec<BigInt>,
    pub dens: Vec<BigInt>,
}

impl ScaledRoots {
    pub fn new(spec: &ProductSpec) -> Self {
        let den = spec
            .num_roots
            .iter()
            .chain(&spec.den_roots)
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let scale = |r: &BigRational| (r * BigRational::from_integer(den.clone())).to_integer();
        ScaledRoots {
            num: spec.num_roots.iter().map(scale).collect(),
            dens: spec.den_roots.iter().map(scale).collect(),
            den,
        }
    }
}

/// Result of a direct block product: `value` has relative error at most
/// `2^rel_err_log2`.
pub(crate) struct BlockProduct {
    pub value: BigReal,
    pub rel_err_log2: f64,
}

fn small(x: &BigInt) -> Option<i128> {
    x.to_i128()
}

/// `prod_{lo <= n < hi} R(n)^{u_n}` at `prec` bits.
pub(crate) fn weighted_block_product(
    spec: &ProductSpec,
    lo: u64,
    hi: u64,
    prec: u32,
) -> BlockProduct {
    if hi <= lo {
        return BlockProduct {
            value: BigReal::one(prec),
            rel_err_log2: f64::NEG_INFINITY,
        };
    }
    let roots = ScaledRoots::new(spec);
    let keep = prec + 32;
    let mut top = TruncatedProduct::new(keep);
    let mut bottom = TruncatedProduct::new(keep);
    let fits = |v: &BigInt| v.bits() < 60;
    let largest = BigInt::from(hi) * &roots.den
        + roots
            .num
            .iter()
            .chain(&roots.dens)
            .map(|r| r.abs())
            .max()
            .unwrap_or_default();
    if fits(&roots.den) && fits(&largest) && roots.num.iter().chain(&roots.dens).all(fits) {
        let d = small(&roots.den).expect("fits") as u128;
        let num: Vec<i128> = roots.num.iter().map(|r| small(r).expect("fits")).collect();
        let dens: Vec<i128> = roots.dens.iter().map(|r| small(r).expect("fits")).collect();
        for n in lo..hi {
            let base = n as u128 * d;
            let (up, down) = match spec.weight.sign(n) {
                1 => (&num, &dens),
                _ => (&dens, &num),
            };
            for &a in up.iter() {
                top.push((base as i128 + a) as u128);
            }
            for &b in down.iter() {
                bottom.push((base as i128 + b) as u128);
            }
        }
    } else {
        // wide roots: exact big-integer factors
        for n in lo..hi {
            let base = BigInt::from(n) * &roots.den;
            let (up, down) = match spec.weight.sign(n) {
                1 => (&roots.num, &roots.dens),
                _ => (&roots.dens, &roots.num),
            };
            let mut t = BigInt::one();
            for a in up {
                t *= &base + a;
            }
            let mut b = BigInt::one();
            for x in down {
                b *= &base + x;
            }
            top.mant *= t.magnitude();
            bottom.mant *= b.magnitude();
            top.flush();
            bottom.flush();
        }
    }
    let (t, t_trunc) = top.finish(prec + 16);
    let (b, b_trunc) = bottom.finish(prec + 16);
    let value = (&t / &b).with_prec(prec);
    // truncations lose < 2^-(keep+63) each; the final division and rounding add 2 ulp
    let trunc = (t_trunc + b_trunc) as f64;
    let rel = if trunc > 0.0 {
        trunc.log2() - (keep as f64 + 62.0)
    } else {
        f64::NEG_INFINITY
    };
    BlockProduct {
        value,
        rel_err_log2: log2_add(rel, -(prec as f64) + 2.0),
    }
}

/// `log2(2^a + 2^b)`.
pub(crate) fn log2_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (1.0 + (lo - hi).exp2()).log2()
}

/// `R(n) = prod (n + a_i) / prod (n + b_j)` as an exact rational.
pub(crate) fn term_ratio(spec: &ProductSpec, n: &BigInt) -> BigRational {
    let n = BigRational::from_integer(n.clone());
    let num: BigRational = spec.num_roots.iter().map(|a| &n + a).product();
    let den: BigRational = spec.den_roots.iter().map(|b| &n + b).product();
    debug_assert!(!den.is_zero());
    num / den
}

impl Weight {
    pub fn sign(&self, n: u64) -> i8 {
        match self {
            Weight::Unsigned => 1,
            Weight::Signed(kind) => seq_term(*kind, n),
        }
    }
}
