//! Explicit algebraic numbers written with rationals, `+ - * /`, `sqrt(..)`
//! and rational powers, e.g. `sqrt(5) + 1 - sqrt(5 + 2*sqrt(5))` or
//! `5^(1/4) * (1 + sqrt(2))`.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Serialize, Serializer};

use super::expr::parse_rational;
use crate::error::{Error, Result};
use crate::mpnum::{exp, ln, BigReal, Precision};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Rat(BigRational),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Pow(Box<Node>, BigRational),
}

/// An algebraic number kept as the text it was written in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicLiteral {
    text: String,
    tree: Node,
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn skip(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Option<Node> {
        let mut left = self.term()?;
        loop {
            if self.eat(b'+') {
                left = Node::Add(Box::new(left), Box::new(self.term()?));
            } else if self.eat(b'-') {
                left = Node::Sub(Box::new(left), Box::new(self.term()?));
            } else {
                return Some(left);
            }
        }
    }

    fn term(&mut self) -> Option<Node> {
        let mut left = self.unary()?;
        loop {
            if self.eat(b'*') {
                left = Node::Mul(Box::new(left), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                left = Node::Div(Box::new(left), Box::new(self.unary()?));
            } else {
                return Some(left);
            }
        }
    }

    fn unary(&mut self) -> Option<Node> {
        if self.eat(b'-') {
            return Some(Node::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = if self.eat(b'(') {
                let start = self.i;
                while self.i < self.s.len() && self.s[self.i] != b')' {
                    self.i += 1;
                }
                let e = parse_rational(std::str::from_utf8(&self.s[start..self.i]).ok()?)?;
                self.eat(b')').then_some(e)?
            } else {
                parse_rational(&self.number()?)?
            };
            return Some(Node::Pow(Box::new(base), e));
        }
        Some(base)
    }

    fn number(&mut self) -> Option<String> {
        self.skip();
        let start = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_digit() || self.s[self.i] == b'.') {
            self.i += 1;
        }
        (self.i > start).then(|| String::from_utf8_lossy(&self.s[start..self.i]).into_owned())
    }

    fn atom(&mut self) -> Option<Node> {
        if self.eat(b'(') {
            let e = self.expr()?;
            return self.eat(b')').then_some(e);
        }
        self.skip();
        if self.s[self.i..].starts_with(b"sqrt") {
            self.i += 4;
            if !self.eat(b'(') {
                return None;
            }
            let e = self.expr()?;
            return self
                .eat(b')')
                .then(|| Node::Pow(Box::new(e), BigRational::new(1.into(), 2.into())));
        }
        Some(Node::Rat(parse_rational(&self.number()?)?))
    }
}

impl FromStr for AlgebraicLiteral {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            s: s.as_bytes(),
            i: 0,
        };
        let tree = p.expr().filter(|_| p.peek().is_none());
        tree.map(|tree| AlgebraicLiteral {
            text: s.trim().to_string(),
            tree,
        })
        .ok_or_else(|| Error::Usage(format!("cannot parse algebraic literal {s:?}")))
    }
}

impl fmt::Display for AlgebraicLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for AlgebraicLiteral {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

fn eval_node(n: &Node, w: u32) -> Result<BigReal> {
    Ok(match n {
        Node::Rat(r) => BigReal::from_rational(r, w),
        Node::Add(a, b) => &eval_node(a, w)? + &eval_node(b, w)?,
        Node::Sub(a, b) => &eval_node(a, w)? - &eval_node(b, w)?,
        Node::Mul(a, b) => &eval_node(a, w)? * &eval_node(b, w)?,
        Node::Div(a, b) => {
            let d = eval_node(b, w)?;
            if d.is_zero() {
                return Err(Error::Domain(
                    "division by zero in algebraic literal".into(),
                ));
            }
            &eval_node(a, w)? / &d
        }
        Node::Neg(a) => -eval_node(a, w)?,
        Node::Pow(a, e) => {
            let x = eval_node(a, w)?;
            if e.is_integer() {
                let k = e
                    .to_integer()
                    .to_i64()
                    .ok_or_else(|| Error::Domain("exponent too large".into()))?;
                return Ok(x.powi(k));
            }
            if x.is_negative() || x.is_zero() && e.is_negative() {
                return Err(Error::Domain(
                    "fractional power of a negative number".into(),
                ));
            }
            if x.is_zero() {
                x
            } else if *e == BigRational::new(1.into(), 2.into()) {
                x.sqrt()?
            } else if *e == BigRational::new((-1).into(), 2.into()) {
                x.sqrt()?.recip()
            } else {
                exp(&(&ln(&x) * &BigReal::from_rational(e, w)))
            }
        }
    })
}

impl AlgebraicLiteral {
    pub fn eval(&self, p: &Precision) -> Result<BigReal> {
        let bits = p.bits();
        Ok(eval_node(&self.tree, bits + 64)?.with_prec(bits))
    }

    pub fn is_rational(&self) -> bool {
        fn walk(n: &Node) -> bool {
            match n {
                Node::Rat(_) => true,
                Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                    walk(a) && walk(b)
                }
                Node::Neg(a) => walk(a),
                Node::Pow(a, e) => e.is_integer() && walk(a),
            }
        }
        walk(&self.tree)
    }
}

impl From<i64> for AlgebraicLiteral {
    fn from(n: i64) -> Self {
        AlgebraicLiteral {
            text: n.to_string(),
            tree: Node::Rat(BigRational::from_integer(n.into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpnum::{trig_pi, TrigKind};
    use crate::q;

    fn close(lit: &str, want: &BigReal, p: &Precision) {
        let v: AlgebraicLiteral = lit.parse().unwrap();
        let d = (&v.eval(p).unwrap() - want).abs();
        assert!(d.is_zero() || d.log2_abs() < p.target_log2(), "{lit}");
    }

    #[test]
    fn tangent_literals() {
        let p = Precision::new(40).unwrap();
        let tan = |n, d| trig_pi(TrigKind::Tan, &q(n, d), &p).unwrap();
        close("1 + sqrt(2)", &tan(3, 8), &p);
        close("sqrt(5) + 1 - sqrt(5 + 2*sqrt(5))", &tan(1, 20), &p);
        close("(1/5) * sqrt(5*(5 - 2*sqrt(5)))", &tan(1, 10), &p);
        close("2*sqrt(3)/3 - 1", &(&tan(1, 6) * &tan(1, 12)), &p);
        close("sqrt(5) - 1 - sqrt(5 - 2*sqrt(5))", &tan(3, 20), &p);
        close(
            "sqrt(25 - 10*sqrt(5)) - sqrt(5 - 2*sqrt(5)) - 5 + 2*sqrt(5)",
            &(&tan(3, 20) * &tan(1, 5)),
            &p,
        );
    }

    #[test]
    fn powers_and_text() {
        let p = Precision::new(30).unwrap();
        let v: AlgebraicLiteral = "5^(1/4) * 5^(3/4) - 2^3 - -3".parse().unwrap();
        close(&v.to_string(), &BigReal::from_int(0, p.bits()), &p);
        assert!(!v.is_rational());
        assert!("(1/2)^2 - 1"
            .parse::<AlgebraicLiteral>()
            .unwrap()
            .is_rational());
        assert!("sqrt(2".parse::<AlgebraicLiteral>().is_err());
        assert!("1 +".parse::<AlgebraicLiteral>().is_err());
        assert!("sqrt(-1)"
            .parse::<AlgebraicLiteral>()
            .unwrap()
            .eval(&p)
            .is_err());
        assert_eq!(
            AlgebraicLiteral::from(1).eval(&p).unwrap(),
            BigReal::one(p.bits())
        );
    }
}
