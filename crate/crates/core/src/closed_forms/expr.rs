//! `GammaExpr`: a signed rational times `2^q`, `pi^(k/2)`, rational powers of
//! odd primes, integer powers of gamma values and of trig values at rational
//! multiples of π.
//!
//! Text form (also accepted by `FromStr`), factors in this order:
//! `[r *] 2^(q) * pi^(k/2) * p^(e) * G(x)^n * sin(pi*r)^n`. Gamma and trig
//! exponents are written bare when positive and parenthesised when negative;
//! `2`, `pi` and surd exponents are always parenthesised. The unit renders as `1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mpnum::consts::{ln2_bits, pi_bits};
use crate::mpnum::elementary::{exp, ln};
use crate::mpnum::gamma::log_gamma_rational_bits;
use crate::mpnum::real::parse_decimal_rational;
use crate::mpnum::trig::{trig_pi_bits, trig_pi_is_pole, trig_pi_is_zero};
use crate::mpnum::{BigReal, Precision, TrigKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaExpr {
    pub rational: BigRational,
    pub two_exp: BigRational,
    /// Power of `pi^(1/2)`.
    pub pi_half_exp: i64,
    /// Radicand (an integer above 1, normally an odd prime) to exponent.
    pub surds: BTreeMap<BigInt, BigRational>,
    /// Positive argument to nonzero exponent.
    pub gammas: BTreeMap<BigRational, i64>,
    pub trigs: BTreeMap<(TrigKind, BigRational), i64>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn bump<K: Ord>(map: &mut BTreeMap<K, i64>, key: K, e: i64) {
    let v = map.entry(key).or_insert(0);
    *v += e;
}

fn prune<K: Ord + Clone>(map: &mut BTreeMap<K, i64>) {
    map.retain(|_, e| *e != 0);
}

/// Trial-division factorisation; a cofactor beyond the search limit is kept whole.
pub(crate) fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut out = Vec::new();
    let mut n = n.abs();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1u64 << 20);
    while &p * &p <= n && p <= limit {
        let mut k = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            k += 1;
        }
        if k > 0 {
            out.push((p.clone(), k));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

impl GammaExpr {
    pub fn one() -> Self {
        GammaExpr {
            rational: BigRational::one(),
            two_exp: BigRational::zero(),
            pi_half_exp: 0,
            surds: BTreeMap::new(),
            gammas: BTreeMap::new(),
            trigs: BTreeMap::new(),
        }
    }

    pub fn rational(r: BigRational) -> Self {
        GammaExpr {
            rational: r,
            ..Self::one()
        }
    }

    pub fn two_pow(q: BigRational) -> Self {
        GammaExpr {
            two_exp: q,
            ..Self::one()
        }
    }

    /// `pi^(k/2)`.
    pub fn pi_half_pow(k: i64) -> Self {
        GammaExpr {
            pi_half_exp: k,
            ..Self::one()
        }
    }

    /// `radicand^e` for a positive integer radicand.
    pub fn surd(radicand: i64, e: BigRational) -> Self {
        let mut out = Self::one();
        if radicand > 1 && !e.is_zero() {
            out.surds.insert(BigInt::from(radicand), e);
        }
        out
    }

    /// `Gamma(x)^e`.
    pub fn gamma(x: BigRational, e: i64) -> Self {
        let mut out = Self::one();
        if e != 0 {
            out.gammas.insert(x, e);
        }
        out
    }

    /// `kind(pi r)^e`.
    pub fn trig(kind: TrigKind, r: BigRational, e: i64) -> Self {
        let mut out = Self::one();
        if e != 0 {
            out.trigs.insert((kind, r), e);
        }
        out
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// No gamma factors left.
    pub fn is_gamma_free(&self) -> bool {
        self.gammas.is_empty()
    }

    pub fn pow(&self, n: i64) -> Self {
        if n == 0 {
            return Self::one();
        }
        let r = if n > 0 {
            num_traits::pow(self.rational.clone(), n as usize)
        } else {
            num_traits::pow(self.rational.recip(), n.unsigned_abs() as usize)
        };
        GammaExpr {
            rational: r,
            two_exp: &self.two_exp * rat(n),
            pi_half_exp: self.pi_half_exp * n,
            surds: self
                .surds
                .iter()
                .map(|(k, e)| (k.clone(), e * rat(n)))
                .collect(),
            gammas: self
                .gammas
                .iter()
                .map(|(k, e)| (k.clone(), e * n))
                .collect(),
            trigs: self.trigs.iter().map(|(k, e)| (k.clone(), e * n)).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    /// Numeric value via log-space accumulation.
    pub fn eval(&self, p: &Precision) -> Result<BigReal> {
        eval_expr(self, p)
    }
}

impl Mul for &GammaExpr {
    type Output = GammaExpr;

    fn mul(self, rhs: &GammaExpr) -> GammaExpr {
        let mut out = self.clone();
        out.rational *= &rhs.rational;
        out.two_exp += &rhs.two_exp;
        out.pi_half_exp += rhs.pi_half_exp;
        for (k, e) in &rhs.surds {
            let v = out.surds.entry(k.clone()).or_insert_with(BigRational::zero);
            *v += e;
        }
        out.surds.retain(|_, e| !e.is_zero());
        for (k, e) in &rhs.gammas {
            bump(&mut out.gammas, k.clone(), *e);
        }
        prune(&mut out.gammas);
        for (k, e) in &rhs.trigs {
            bump(&mut out.trigs, k.clone(), *e);
        }
        prune(&mut out.trigs);
        out
    }
}

impl Mul for GammaExpr {
    type Output = GammaExpr;
    fn mul(self, rhs: GammaExpr) -> GammaExpr {
        &self * &rhs
    }
}

impl Div for &GammaExpr {
    type Output = GammaExpr;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &GammaExpr) -> GammaExpr {
        self * &rhs.inverse()
    }
}

impl Div for GammaExpr {
    type Output = GammaExpr;
    fn div(self, rhs: GammaExpr) -> GammaExpr {
        &self / &rhs
    }
}

impl std::iter::Product for GammaExpr {
    fn product<I: Iterator<Item = GammaExpr>>(iter: I) -> Self {
        iter.fold(GammaExpr::one(), |a, b| &a * &b)
    }
}

fn fmt_signed_int_exp(e: i64) -> String {
    if e < 0 {
        format!("^({e})")
    } else {
        format!("^{e}")
    }
}

impl fmt::Display for GammaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rational.is_zero() {
            return f.write_str("0");
        }
        let mut parts: Vec<String> = Vec::new();
        if !self.rational.is_one() {
            parts.push(self.rational.to_string());
        }
        if !self.two_exp.is_zero() {
            parts.push(format!("2^({})", self.two_exp));
        }
        if self.pi_half_exp != 0 {
            parts.push(format!(
                "pi^({})",
                BigRational::new(self.pi_half_exp.into(), 2.into())
            ));
        }
        for (k, e) in &self.surds {
            parts.push(format!("{k}^({e})"));
        }
        for (x, e) in &self.gammas {
            parts.push(format!("G({x}){}", fmt_signed_int_exp(*e)));
        }
        for ((kind, r), e) in &self.trigs {
            parts.push(format!("{kind}(pi*{r}){}", fmt_signed_int_exp(*e)));
        }
        if parts.is_empty() {
            return f.write_str("1");
        }
        f.write_str(&parts.join(" * "))
    }
}

impl Serialize for GammaExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => {
            if s.contains(['.', 'e', 'E']) {
                parse_decimal_rational(s)
            } else {
                s.parse::<BigInt>().ok().map(BigRational::from_integer)
            }
        }
    }
}

fn parse_exponent(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .unwrap_or(s);
    parse_rational(inner)
}

fn int_exp(r: BigRational) -> Option<i64> {
    r.is_integer().then(|| r.to_integer().to_i64()).flatten()
}

fn parse_factor(expr: &mut GammaExpr, token: &str) -> Option<()> {
    let t = token.trim();
    if let Some(rest) = t.strip_prefix("G(") {
        let (arg, tail) = rest.split_once(')')?;
        let e = int_exp(parse_exponent(tail.strip_prefix('^')?)?)?;
        let x = parse_rational(arg)?;
        if !x.is_positive() {
            return None;
        }
        *expr = &*expr * &GammaExpr::gamma(x, e);
        return Some(());
    }
    for kind in [TrigKind::Sin, TrigKind::Cos, TrigKind::Tan] {
        if let Some(rest) = t.strip_prefix(&format!("{}(pi*", kind.name())) {
            let (arg, tail) = rest.split_once(')')?;
            let e = int_exp(parse_exponent(tail.strip_prefix('^')?)?)?;
            *expr = &*expr * &GammaExpr::trig(kind, parse_rational(arg)?, e);
            return Some(());
        }
    }
    if let Some((base, e)) = t.split_once('^') {
        let e = parse_exponent(e)?;
        match base.trim() {
            "pi" => {
                let k = int_exp(e * rat(2))?;
                *expr = &*expr * &GammaExpr::pi_half_pow(k);
            }
            "2" => *expr = &*expr * &GammaExpr::two_pow(e),
            b => {
                let radicand: BigInt = b.parse().ok()?;
                if radicand <= BigInt::one() {
                    return None;
                }
                let mut s = GammaExpr::one();
                s.surds.insert(radicand, e);
                *expr = &*expr * &s;
            }
        }
        return Some(());
    }
    if t == "pi" {
        *expr = &*expr * &GammaExpr::pi_half_pow(2);
        return Some(());
    }
    expr.rational *= parse_rational(t)?;
    Some(())
}

impl FromStr for GammaExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut expr = GammaExpr::one();
        if s.trim() == "1" {
            return Ok(expr);
        }
        for token in s.split(" * ") {
            parse_factor(&mut expr, token).ok_or_else(|| {
                Error::Usage(format!("cannot parse factor {token:?} of gamma expression"))
            })?;
        }
        Ok(expr)
    }
}

/// Numeric value of `e`, relative error below `10^-digits`.
pub fn eval_expr(e: &GammaExpr, p: &Precision) -> Result<BigReal> {
    let bits = p.bits();
    if e.rational.is_zero() {
        return Ok(BigReal::zero(bits));
    }
    for ((kind, r), k) in &e.trigs {
        if trig_pi_is_pole(*kind, r) && *k > 0 || trig_pi_is_zero(*kind, r) && *k < 0 {
            return Err(Error::TangentPole(format!("{kind}(pi*{r}) raised to {k}")));
        }
        if trig_pi_is_zero(*kind, r) {
            return Ok(BigReal::zero(bits));
        }
        if trig_pi_is_pole(*kind, r) {
            return Ok(BigReal::zero(bits));
        }
    }
    let weight: i64 = e
        .gammas
        .values()
        .chain(e.trigs.values())
        .map(|x| x.abs())
        .sum::<i64>()
        + e.surds.len() as i64
        + 4;
    let w = bits + 16 + (64 - (weight as u64).leading_zeros());
    let mut log = ln(&BigReal::from_rational(&e.rational.abs(), w));
    let mut negative = e.rational.is_negative();
    if !e.two_exp.is_zero() {
        log = &log + &(&ln2_bits(w) * &BigReal::from_rational(&e.two_exp, w));
    }
    if e.pi_half_exp != 0 {
        log = &log + &ln(&pi_bits(w)).mul_int(e.pi_half_exp).ldexp(-1);
    }
    for (k, x) in &e.surds {
        log = &log + &(&ln(&BigReal::from_int(k.clone(), w)) * &BigReal::from_rational(x, w));
    }
    for (x, k) in &e.gammas {
        log = &log + &log_gamma_rational_bits(x, w)?.mul_int(*k);
    }
    for ((kind, r), k) in &e.trigs {
        let v = trig_pi_bits(*kind, r, w)?;
        if v.is_negative() && k % 2 != 0 {
            negative = !negative;
        }
        log = &log + &ln(&v.abs()).mul_int(*k);
    }
    let v = exp(&log).with_prec(bits);
    Ok(if negative { -v } else { v })
}

impl GammaExpr {
    /// Moves powers of 2 out of the rational factor and splits surd exponents
    /// into an integer part (absorbed by the rational factor) and a part in `(0, 1)`.
    pub(crate) fn normalize_radicals(&mut self) {
        if self.rational.is_zero() {
            return;
        }
        let two = BigInt::from(2);
        let mut num = self.rational.numer().clone();
        let mut den = self.rational.denom().clone();
        while num.is_even() && !num.is_zero() {
            num /= &two;
            self.two_exp += BigRational::one();
        }
        while den.is_even() {
            den /= &two;
            self.two_exp -= BigRational::one();
        }
        self.rational = BigRational::new(num, den);
        let old = std::mem::take(&mut self.surds);
        let mut primes: BTreeMap<BigInt, BigRational> = BTreeMap::new();
        for (radicand, e) in old {
            for (p, k) in factor(&radicand) {
                let v = primes.entry(p).or_insert_with(BigRational::zero);
                *v += &e * rat(k as i64);
            }
        }
        for (p, e) in primes {
            if p == two {
                self.two_exp += e;
                continue;
            }
            let whole = e.floor();
            let frac = &e - &whole;
            let whole = whole.to_integer();
            let power = num_traits::pow(p.clone(), whole.abs().to_usize().expect("small exponent"));
            let power = BigRational::from_integer(power);
            if whole.is_negative() {
                self.rational /= power;
            } else {
                self.rational *= power;
            }
            if !frac.is_zero() {
                self.surds.insert(p, frac);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpnum::const_pi;
    use crate::q;

    #[test]
    fn text_form_and_parse() {
        let e = &(&GammaExpr::two_pow(q(-3, 1)) * &GammaExpr::pi_half_pow(-4))
            * &GammaExpr::gamma(q(1, 4), 4);
        assert_eq!(e.to_string(), "2^(-3) * pi^(-2) * G(1/4)^4");
        assert_eq!(e.to_string().parse::<GammaExpr>().unwrap(), e);
        let t = &GammaExpr::gamma(q(1, 4), -2) * &GammaExpr::trig(TrigKind::Tan, q(3, 8), 1);
        let t = &t * &GammaExpr::pi_half_pow(1);
        assert_eq!(t.to_string(), "pi^(1/2) * G(1/4)^(-2) * tan(pi*3/8)^1");
        assert_eq!(t.to_string().parse::<GammaExpr>().unwrap(), t);
        assert_eq!(GammaExpr::one().to_string(), "1");
        assert_eq!("1".parse::<GammaExpr>().unwrap(), GammaExpr::one());
        let s = &GammaExpr::rational(q(-3, 5)) * &GammaExpr::surd(5, q(1, 4));
        assert_eq!(s.to_string(), "-3/5 * 5^(1/4)");
        assert_eq!(s.to_string().parse::<GammaExpr>().unwrap(), s);
        assert!("G(-1/2)^1".parse::<GammaExpr>().is_err());
        assert!("foo^2".parse::<GammaExpr>().is_err());
    }

    #[test]
    fn algebra() {
        let a = GammaExpr::gamma(q(1, 3), 2);
        assert!((&a / &a).is_one());
        assert_eq!(a.pow(3), GammaExpr::gamma(q(1, 3), 6));
        assert_eq!(a.inverse().gammas[&q(1, 3)], -2);
    }

    #[test]
    fn numeric_values() {
        let p = Precision::new(30).unwrap();
        assert_eq!(
            eval_expr(&GammaExpr::one(), &p).unwrap(),
            BigReal::one(p.bits())
        );
        let half_pi = &GammaExpr::two_pow(q(-1, 1)) * &GammaExpr::pi_half_pow(2);
        let v = eval_expr(&half_pi, &p).unwrap();
        assert!((&v - &const_pi(&p).ldexp(-1)).abs().log2_abs() < -125.0);
        let neg = GammaExpr::trig(TrigKind::Cos, q(2, 3), 1);
        let v = eval_expr(&neg, &p).unwrap();
        assert!((&v + &BigReal::pow2(-1, p.bits())).abs().log2_abs() < -125.0);
        assert!(eval_expr(&GammaExpr::trig(TrigKind::Tan, q(1, 2), 1), &p).is_err());
        assert!(eval_expr(&GammaExpr::trig(TrigKind::Sin, q(1, 1), 1), &p)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn radical_normalisation() {
        let mut e = &GammaExpr::rational(q(12, 1)) * &GammaExpr::surd(45, q(-3, 2));
        e.normalize_radicals();
        // 12 * 45^(-3/2) = 2^2 * 3 * 3^-3 * 5^(-3/2) = 2^2 / 9 / 25 * 5^(1/2)
        assert_eq!(e.to_string(), "1/225 * 2^(2) * 5^(1/2)");
        assert_eq!(
            factor(&BigInt::from(360)),
            vec![(2.into(), 3), (3.into(), 2), (5.into(), 1)]
        );
    }
}
