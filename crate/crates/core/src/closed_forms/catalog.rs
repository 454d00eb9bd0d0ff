//! Known identities between weighted products (or gamma products) and closed
//! forms, with a numeric verifier.

use std::fmt;

use serde::{Serialize, Serializer};

use super::algebraic::AlgebraicLiteral;
use super::expr::{eval_expr, GammaExpr};
use super::simplify::simplify;
use super::theorems::{
    sporadic_gamma_identities, sporadic_product_values, t_chain, t_chain_spec, tangent_product,
    tangent_spec, tangent_triple, theorem_pair, theorem_pair_spec, theorem_simple,
    theorem_simple_spec, ww_for_spec,
};
use crate::error::Result;
use crate::mpnum::elliptic::half_lemniscatic_integral;
use crate::mpnum::{BigReal, Precision};
use crate::products::{
    eval_certified, make_product, von_haeseler, CertifiedValue, ProductSpec, Weight,
};
use crate::q;
use crate::sequences::SeqKind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lhs {
    Product(ProductSpec),
    /// A product of gamma values, written as an unsimplified `GammaExpr`.
    GammaProduct(GammaExpr),
    /// `sum_{n >= 0} eps_n / (n+1)^s` with `eps` the paperfolding sequence.
    PaperfoldDirichlet {
        s: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedForm {
    Gamma(GammaExpr),
    Algebraic(AlgebraicLiteral),
    /// `(1/2) int_0^(pi/2) dphi / sqrt(2 - sin(phi)^2)`, evaluated through the AGM.
    HalfLemniscatic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityRecord {
    pub id: String,
    pub source: String,
    pub lhs: Lhs,
    pub rhs: ClosedForm,
    /// Other closed forms of the same value, each verified like `rhs`.
    pub alternatives: Vec<ClosedForm>,
}

impl fmt::Display for Lhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lhs::Product(spec) => write!(f, "{spec}"),
            Lhs::GammaProduct(e) => write!(f, "{e}"),
            Lhs::PaperfoldDirichlet { s } => write!(f, "sum_{{n>=0}} paperfold(n) / (n+1)^{s}"),
        }
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedForm::Gamma(e) => write!(f, "{e}"),
            ClosedForm::Algebraic(a) => write!(f, "{a}"),
            ClosedForm::HalfLemniscatic => {
                f.write_str("(1/2) * int_0^(pi/2) dphi / sqrt(2 - sin(phi)^2)")
            }
        }
    }
}

impl Serialize for Lhs {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Serialize for ClosedForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl ClosedForm {
    pub fn eval(&self, p: &Precision) -> Result<BigReal> {
        match self {
            ClosedForm::Gamma(e) => eval_expr(e, p),
            ClosedForm::Algebraic(a) => a.eval(p),
            ClosedForm::HalfLemniscatic => half_lemniscatic_integral(p),
        }
    }

    /// True for forms that are explicitly algebraic numbers.
    pub fn is_explicitly_algebraic(&self) -> bool {
        match self {
            ClosedForm::Gamma(e) => {
                let s = simplify(e);
                s.is_gamma_free() && s.pi_half_exp == 0
            }
            ClosedForm::Algebraic(_) => true,
            ClosedForm::HalfLemniscatic => false,
        }
    }
}

impl Lhs {
    /// Certified value of the left side.
    pub fn eval(&self, p: &Precision) -> Result<CertifiedValue> {
        match self {
            Lhs::Product(spec) => eval_certified(spec, p),
            Lhs::GammaProduct(e) => {
                let guarded = Precision::with_guard(p.decimal_digits, p.guard_digits + 5)?;
                let v = eval_expr(e, &guarded)?.with_prec(p.bits());
                let bound = v.abs().log2_abs() - p.bits() as f64 + 2.0;
                Ok(CertifiedValue {
                    abs_error_bound: BigReal::pow2_f64(bound, 64),
                    value: v,
                })
            }
            Lhs::PaperfoldDirichlet { s } => Ok(von_haeseler(*s, p)?.lhs),
        }
    }
}

/// Outcome of comparing a record's two sides.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordCheck {
    pub id: String,
    pub lhs: CertifiedValue,
    pub rhs: BigReal,
    /// Largest distance between the left side and any of the closed forms.
    pub delta: BigReal,
    /// Allowed distance: the left side's bound plus `10^-digits * max(1, |rhs|)`.
    pub tolerance: BigReal,
    pub pass: bool,
}

/// Evaluates both sides of `rec` (and every alternative closed form) at `p`.
pub fn verify_record(rec: &IdentityRecord, p: &Precision) -> Result<RecordCheck> {
    let lhs = rec.lhs.eval(p)?;
    let guarded = Precision::with_guard(p.decimal_digits, p.guard_digits + 5)?;
    let rhs = rec.rhs.eval(&guarded)?.with_prec(p.bits());
    let scale = rhs.abs().log2_abs().max(0.0);
    let slack = BigReal::pow2_f64(p.target_log2() + scale, 64);
    let tolerance = &lhs.abs_error_bound + &slack;
    let mut delta = (&lhs.value - &rhs).abs();
    for alt in &rec.alternatives {
        let v = alt.eval(&guarded)?;
        delta = delta.max((&lhs.value - &v).abs());
    }
    let pass = lhs.meets(p) && delta <= tolerance;
    Ok(RecordCheck {
        id: rec.id.clone(),
        lhs,
        rhs,
        delta,
        tolerance,
        pass,
    })
}

fn alg(text: &str) -> ClosedForm {
    ClosedForm::Algebraic(text.parse().expect("catalog literal parses"))
}

fn record(
    id: &str,
    source: &str,
    lhs: Lhs,
    rhs: ClosedForm,
    alternatives: Vec<ClosedForm>,
) -> IdentityRecord {
    IdentityRecord {
        id: id.into(),
        source: source.into(),
        lhs,
        rhs,
        alternatives,
    }
}

/// `prod_{n >= 1} (2n / (2n+1))^{eps_n}` with `eps` the paperfolding sequence.
pub fn paperfold_b_spec() -> ProductSpec {
    make_product(
        vec![q(0, 1)],
        vec![q(1, 2)],
        1,
        Weight::Signed(SeqKind::Paperfold),
    )
    .expect("valid")
}

/// `Gamma(1/4)^2 / (8 sqrt(2 pi))`.
pub fn paperfold_b_value() -> GammaExpr {
    GammaExpr::two_pow(q(-7, 2)) * GammaExpr::pi_half_pow(-1) * GammaExpr::gamma(q(1, 4), 2)
}

/// Every identity the crate knows, in a fixed order with unique ids.
pub fn identity_catalog() -> Vec<IdentityRecord> {
    let gamma = ClosedForm::Gamma;
    let product = Lhs::Product;
    let mut out = vec![
        record(
            "tm-woods-robbins",
            "Woods-Robbins product over the Thue-Morse sequence",
            product(
                make_product(
                    vec![q(1, 2)],
                    vec![q(1, 1)],
                    0,
                    Weight::Signed(SeqKind::ThueMorse),
                )
                .expect("valid"),
            ),
            gamma(GammaExpr::two_pow(q(-1, 2))),
            vec![alg("sqrt(2)/2")],
        ),
        record(
            "pf-b",
            "paperfolding analogue of the Woods-Robbins product",
            product(paperfold_b_spec()),
            gamma(paperfold_b_value()),
            vec![],
        ),
    ];
    let wallis = make_product(
        vec![q(0, 1), q(0, 1)],
        vec![q(-1, 2), q(1, 2)],
        1,
        Weight::Unsigned,
    )
    .expect("valid");
    let wallis_value = ww_for_spec(&wallis).expect("balanced");
    out.push(record(
        "wallis",
        "Wallis product for pi/2",
        product(wallis),
        gamma(wallis_value),
        vec![],
    ));
    for b in [2, 3] {
        let b = q(b, 1);
        out.push(record(
            &format!("simple-b{b}"),
            "single-factor paperfolding product in gamma values",
            product(theorem_simple_spec(&b).expect("b > 0")),
            gamma(theorem_simple(&b).expect("b > 0")),
            vec![],
        ));
    }
    out.push(record(
        "chain-b3-0-2",
        "telescoped chain of single-factor products",
        product(t_chain_spec(&q(3, 1), 0, 2).expect("valid chain")),
        gamma(t_chain(&q(3, 1), 0, 2).expect("valid chain")),
        vec![],
    ));
    for (n, d, literal) in [
        (3, 2, "1 + sqrt(2)"),
        (1, 5, "sqrt(5) + 1 - sqrt(5 + 2*sqrt(5))"),
        (2, 5, "(1/5) * sqrt(5*(5 - 2*sqrt(5)))"),
    ] {
        let b = q(n, d);
        out.push(record(
            &format!("tangent-b{n}/{d}"),
            "tangent family of paperfolding products",
            product(tangent_spec(&b).expect("0 < b < 2")),
            gamma(tangent_product(&b).expect("0 < b < 2")),
            vec![alg(literal)],
        ));
    }
    for (k, literals) in [
        (3, ["sqrt(3)/3", "2 - sqrt(3)", "2*sqrt(3)/3 - 1"]),
        (
            5,
            [
                "sqrt(5 - 2*sqrt(5))",
                "sqrt(5) - 1 - sqrt(5 - 2*sqrt(5))",
                "sqrt(25 - 10*sqrt(5)) - sqrt(5 - 2*sqrt(5)) - 5 + 2*sqrt(5)",
            ],
        ),
    ] {
        let triple = tangent_triple(k).expect("k >= 3");
        for ((t, literal), part) in triple
            .into_iter()
            .zip(literals)
            .zip(["first", "second", "product"])
        {
            out.push(record(
                &format!("tangent-k{k}-{part}"),
                "tangent family at b = (k-1)/k, (k-2)/k and their product",
                product(t.spec),
                gamma(t.value),
                vec![alg(literal)],
            ));
        }
    }
    let [d24, d20] = sporadic_gamma_identities();
    out.push(record(
        "sporadic-gamma-24",
        "gamma quadruple at denominator 24",
        Lhs::GammaProduct(d24.lhs),
        gamma(d24.rhs),
        vec![],
    ));
    out.push(record(
        "sporadic-gamma-20",
        "gamma quadruple at denominator 20",
        Lhs::GammaProduct(d20.lhs),
        gamma(d20.rhs),
        vec![],
    ));
    let [(b1, c1, v1), (b2, c2, v2)] = sporadic_product_values();
    out.push(record(
        "sporadic-product-24",
        "two-factor paperfolding product at b = 5/6, c = 1/6",
        product(theorem_pair_spec(&b1, &c1).expect("positive")),
        alg("sqrt(3) * (1 + sqrt(2))"),
        vec![gamma(v1), gamma(theorem_pair(&b1, &c1).expect("positive"))],
    ));
    out.push(record(
        "sporadic-product-20",
        "two-factor paperfolding product at b = 3/5, c = 1/5",
        product(theorem_pair_spec(&b2, &c2).expect("positive")),
        alg("5^(1/4) * (sqrt(2)*sqrt(5 - sqrt(5)) + sqrt(5) - 1) / 2"),
        vec![gamma(v2), gamma(theorem_pair(&b2, &c2).expect("positive"))],
    ));
    out.push(record(
        "paperfold-dirichlet-s1",
        "paperfolding Dirichlet series at s = 1",
        Lhs::PaperfoldDirichlet { s: 1 },
        gamma(GammaExpr::two_pow(q(-1, 1)) * GammaExpr::pi_half_pow(2)),
        vec![],
    ));
    out.push(record(
        "pf-b-lemniscate",
        "paperfolding product as half the lemniscate integral",
        product(paperfold_b_spec()),
        ClosedForm::HalfLemniscatic,
        vec![],
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn catalog_shape() {
        let cat = identity_catalog();
        assert!(cat.len() >= 16);
        let ids: HashSet<_> = cat.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids.len(), cat.len());
        let tm = cat.iter().find(|r| r.id == "tm-woods-robbins").unwrap();
        assert_eq!(tm.rhs.to_string(), "2^(-1/2)");
        let t = cat.iter().find(|r| r.id == "tangent-b1/5").unwrap();
        assert_eq!(
            t.alternatives[0].to_string(),
            "sqrt(5) + 1 - sqrt(5 + 2*sqrt(5))"
        );
        assert_eq!(t.rhs.to_string(), "tan(pi*1/20)^1");
        assert_eq!(
            paperfold_b_value().to_string(),
            "2^(-7/2) * pi^(-1/2) * G(1/4)^2"
        );
        let w = cat.iter().find(|r| r.id == "wallis").unwrap();
        assert_eq!(w.rhs.to_string(), "2^(-1) * pi^(1)");
    }

    #[test]
    fn algebraic_flags() {
        let cat = identity_catalog();
        let by_id = |id: &str| {
            cat.iter()
                .find(|r| r.id == id)
                .unwrap()
                .rhs
                .is_explicitly_algebraic()
        };
        assert!(by_id("tm-woods-robbins"));
        assert!(by_id("tangent-k3-product"));
        assert!(!by_id("pf-b"));
        assert!(!by_id("wallis"));
    }

    #[test]
    fn gamma_and_series_records_verify() {
        let p = Precision::new(30).unwrap();
        for rec in identity_catalog() {
            if matches!(rec.lhs, Lhs::Product(_)) {
                continue;
            }
            let check = verify_record(&rec, &p).unwrap();
            assert!(check.pass, "{}: delta {}", rec.id, check.delta);
        }
    }
}
