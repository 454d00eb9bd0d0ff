//! Command-line front end: argument parsing, command execution and report
//! rendering in text, JSON or CSV.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebraicity::{
    corollary_pair_check, corollary_simple_check, rohrlich_check, RohrlichInstance, Verdict,
};
use crate::closed_forms::{
    eval_expr, identity_catalog, nijenhuis, sandor_toth, sporadic_gamma_identities,
    sporadic_product_values, t_chain, t_chain_spec, t_k, tangent_product, tangent_spec,
    tangent_triple, theorem_pair, theorem_pair_spec, theorem_simple, theorem_simple_spec, u_shift,
    u_shift_spec, verify_record, ww_for_spec, ww_product, GammaExpr,
};
use crate::error::{Error, Result};
use crate::mpnum::{BigReal, Precision};
use crate::products::{
    eval_certified, eval_partial, flajolet_martin, make_product, von_haeseler, ProductSpec, Weight,
};
use crate::sequences::{seq_term, summatory, summatory_bound_report, SeqKind};

pub const MIN_DIGITS: u32 = 10;
pub const MAX_DIGITS: u32 = 1000;
pub const DEFAULT_DIGITS: u32 = 30;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

fn parse_digits(s: &str) -> std::result::Result<u32, String> {
    let d: u32 = s
        .trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a digit count"))?;
    if (MIN_DIGITS..=MAX_DIGITS).contains(&d) {
        Ok(d)
    } else {
        Err(format!(
            "digits must lie in [{MIN_DIGITS}, {MAX_DIGITS}], got {d}"
        ))
    }
}

/// `p/q` or an integer; decimals are rejected so parameters are never rounded.
fn parse_rat(s: &str) -> std::result::Result<BigRational, String> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<num_bigint::BigInt>()
            .map_err(|_| format!("'{s}' is not a rational p/q"))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d == 0.into() {
                return Err(format!("'{s}' has a zero denominator"));
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

fn parse_weight(s: &str) -> Result<Weight> {
    s.parse()
}

fn parse_kind(s: &str) -> Result<SeqKind> {
    s.parse()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    /// `prod ((n+b)/(n+(1+b)/2))^eps`, needs --b
    Simple,
    /// two-parameter product, needs --b and --c
    Pair,
    /// single chain factor, needs --b and --k
    Tk,
    /// telescoped chain, needs --b, --k and --l
    Chain,
    /// chain in the shifted variable, needs --c and --j
    UShift,
    /// tan(pi b / 4), needs --b
    Tangent,
    /// three tangent products, needs --k
    TangentTriple,
    /// product of Gamma(k/m) over units, needs --m
    SandorToth,
    /// product over the subgroup generated by n+2 mod 2n, needs --n
    Nijenhuis,
    /// unsigned product as a gamma ratio, needs --num and --den
    Ww,
    /// the two gamma quadruples and the two algebraic products
    Sporadic,
    /// paperfolding Dirichlet series against the beta function, needs --s
    Dirichlet,
}

#[derive(Debug, Clone, PartialEq, Eq, Parser)]
#[command(
    name = "foldprod",
    version,
    about = "Certified infinite products over automatic sequences"
)]
pub struct Cli {
    /// Decimal digits of accuracy, in [10, 1000].
    #[arg(long, global = true, env = "FOLDPROD_DIGITS", default_value_t = DEFAULT_DIGITS, value_parser = parse_digits)]
    pub digits: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Leave timings out so repeated runs print identical output.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Certified value of a weighted product.
    Eval(EvalArgs),
    /// Closed form from one of the product theorems.
    Closed(ClosedArgs),
    /// Check catalog identities numerically.
    Verify(VerifyArgs),
    /// Algebraicity criteria.
    Algebraic(AlgebraicArgs),
    /// Print terms or partial sums of a sequence.
    Seq(SeqArgs),
    /// Catalog verification plus the constants without closed forms.
    Report,
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct EvalArgs {
    #[arg(long, value_parser = parse_weight)]
    pub weight: Weight,
    /// Numerator roots a_i of prod (n + a_i), comma separated.
    #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_rat)]
    pub num: Vec<BigRational>,
    /// Denominator roots b_j, comma separated.
    #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_rat)]
    pub den: Vec<BigRational>,
    #[arg(long, default_value_t = 0)]
    pub start: u64,
    /// Also print the exact partial product below this index.
    #[arg(long)]
    pub partial: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct ClosedArgs {
    #[arg(long, value_enum)]
    pub theorem: Theorem,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rat)]
    pub b: Option<BigRational>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rat)]
    pub c: Option<BigRational>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, alias = "ell")]
    pub l: Option<u32>,
    #[arg(long)]
    pub j: Option<u32>,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub s: Option<u32>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_rat)]
    pub num: Vec<BigRational>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_rat)]
    pub den: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct VerifyArgs {
    /// Every catalog identity (the default when no --id is given).
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub id: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct AlgebraicArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rat)]
    pub b: Option<BigRational>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rat)]
    pub c: Option<BigRational>,
    /// Gamma arguments for the Rohrlich criterion, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_rat)]
    pub args: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct SeqArgs {
    #[arg(long, value_parser = parse_kind)]
    pub kind: SeqKind,
    #[arg(long, default_value_t = 16)]
    pub count: u64,
    #[arg(long, default_value_t = 0)]
    pub start: u64,
    /// Print partial sums S(n) of the first n terms instead of terms.
    #[arg(long)]
    pub summatory: bool,
}

/// Parses a full argument vector, program name first.
pub fn parse_args<I, T>(argv: I) -> Result<Cli>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(argv).map_err(|e| Error::Usage(e.render().to_string()))
}

fn join(v: &[BigRational]) -> String {
    v.iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn push_opt<T: ToString>(out: &mut Vec<String>, flag: &str, v: &Option<T>) {
    if let Some(v) = v {
        out.push(flag.into());
        out.push(v.to_string());
    }
}

fn push_list(out: &mut Vec<String>, flag: &str, v: &[BigRational]) {
    if !v.is_empty() {
        out.push(flag.into());
        out.push(join(v));
    }
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

/// Renders `cli` back into an argument vector that [`parse_args`] reads as `cli`.
pub fn to_argv(cli: &Cli) -> Vec<String> {
    let mut out = vec![
        "foldprod".to_string(),
        "--digits".into(),
        cli.digits.to_string(),
    ];
    out.extend(["--format".into(), value_name(&cli.format)]);
    if cli.no_timing {
        out.push("--no-timing".into());
    }
    match &cli.command {
        Command::Eval(a) => {
            out.extend(["eval".into(), "--weight".into(), a.weight.to_string()]);
            push_list(&mut out, "--num", &a.num);
            push_list(&mut out, "--den", &a.den);
            out.extend(["--start".into(), a.start.to_string()]);
            push_opt(&mut out, "--partial", &a.partial);
        }
        Command::Closed(a) => {
            out.extend(["closed".into(), "--theorem".into(), value_name(&a.theorem)]);
            push_opt(&mut out, "--b", &a.b);
            push_opt(&mut out, "--c", &a.c);
            push_opt(&mut out, "--k", &a.k);
            push_opt(&mut out, "--l", &a.l);
            push_opt(&mut out, "--j", &a.j);
            push_opt(&mut out, "--m", &a.m);
            push_opt(&mut out, "--n", &a.n);
            push_opt(&mut out, "--s", &a.s);
            push_list(&mut out, "--num", &a.num);
            push_list(&mut out, "--den", &a.den);
        }
        Command::Verify(a) => {
            out.push("verify".into());
            if a.all {
                out.push("--all".into());
            }
            for id in &a.id {
                out.extend(["--id".into(), id.clone()]);
            }
        }
        Command::Algebraic(a) => {
            out.push("algebraic".into());
            push_opt(&mut out, "--b", &a.b);
            push_opt(&mut out, "--c", &a.c);
            push_list(&mut out, "--args", &a.args);
        }
        Command::Seq(a) => {
            out.extend(["seq".into(), "--kind".into(), a.kind.to_string()]);
            out.extend([
                "--count".into(),
                a.count.to_string(),
                "--start".into(),
                a.start.to_string(),
            ]);
            if a.summatory {
                out.push("--summatory".into());
            }
        }
        Command::Report => out.push("report".into()),
    }
    out
}

/// One line of output. Absent fields are omitted from JSON and left empty in CSV.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ResultRow {
    pub id: String,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    /// Certified bound on the absolute error of `value`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<String>,
}

/// Everything a command produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub version: String,
    pub command: String,
    pub results: Vec<ResultRow>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.results.iter().any(|r| r.pass == Some(false)) {
            EXIT_VERIFY_FAILED
        } else {
            EXIT_OK
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval(_) => "eval",
        Command::Closed(_) => "closed",
        Command::Verify(_) => "verify",
        Command::Algebraic(_) => "algebraic",
        Command::Seq(_) => "seq",
        Command::Report => "report",
    }
}

struct Ctx {
    p: Precision,
    timing: bool,
}

impl Ctx {
    fn value(&self, v: &BigReal) -> String {
        v.to_sci(self.p.decimal_digits as usize)
    }

    fn timed<T>(&self, f: impl FnOnce() -> Result<T>) -> Result<(T, Option<String>)> {
        let start = Instant::now();
        let v = f()?;
        let secs = self
            .timing
            .then(|| format!("{:.3}", start.elapsed().as_secs_f64()));
        Ok((v, secs))
    }
}

fn short(v: &BigReal) -> String {
    v.to_sci(3)
}

fn need<T: Clone>(v: &Option<T>, flag: &str, theorem: Theorem) -> Result<T> {
    v.clone()
        .ok_or_else(|| Error::Usage(format!("--theorem {} needs --{flag}", value_name(&theorem))))
}

fn run_eval(ctx: &Ctx, a: &EvalArgs) -> Result<Vec<ResultRow>> {
    let spec = make_product(a.num.clone(), a.den.clone(), a.start, a.weight)?;
    let (v, seconds) = ctx.timed(|| eval_certified(&spec, &ctx.p))?;
    let closed_form = match a.weight {
        Weight::Unsigned => Some(ww_for_spec(&spec)?.to_string()),
        Weight::Signed(_) => None,
    };
    let mut rows = vec![ResultRow {
        id: "product".into(),
        source: spec.to_string(),
        value: Some(ctx.value(&v.value)),
        closed_form,
        bound: Some(short(&v.abs_error_bound)),
        pass: Some(v.meets(&ctx.p)),
        seconds,
        ..Default::default()
    }];
    if let Some(n) = a.partial {
        let (pv, seconds) = ctx.timed(|| eval_partial(&spec, n, &ctx.p))?;
        rows.push(ResultRow {
            id: format!("partial-{n}"),
            source: format!("exact product over {} <= n < {n}", spec.start),
            value: Some(ctx.value(&pv)),
            delta: Some(short(&(&pv - &v.value).abs())),
            seconds,
            ..Default::default()
        });
    }
    Ok(rows)
}

fn closed_row(
    ctx: &Ctx,
    id: String,
    spec: Option<&ProductSpec>,
    e: &GammaExpr,
) -> Result<ResultRow> {
    let (v, seconds) = ctx.timed(|| eval_expr(e, &ctx.p))?;
    let note = (e.is_gamma_free() && e.pi_half_exp == 0)
        .then(|| "algebraic (unconditional by construction)".to_string());
    Ok(ResultRow {
        id,
        source: spec.map(|s| s.to_string()).unwrap_or_default(),
        value: Some(ctx.value(&v)),
        closed_form: Some(e.to_string()),
        note,
        seconds,
        ..Default::default()
    })
}

fn gamma_identity_row(
    ctx: &Ctx,
    id: String,
    lhs: &GammaExpr,
    rhs: &GammaExpr,
) -> Result<ResultRow> {
    let (pair, seconds) = ctx.timed(|| Ok((eval_expr(lhs, &ctx.p)?, eval_expr(rhs, &ctx.p)?)))?;
    let delta = (&pair.0 - &pair.1).abs();
    let tol = BigReal::pow2_f64(ctx.p.target_log2() + pair.1.abs().log2_abs().max(0.0), 64);
    Ok(ResultRow {
        id,
        source: lhs.to_string(),
        value: Some(ctx.value(&pair.0)),
        closed_form: Some(rhs.to_string()),
        delta: Some(short(&delta)),
        tolerance: Some(short(&tol)),
        pass: Some(delta <= tol),
        seconds,
        ..Default::default()
    })
}

fn run_closed(ctx: &Ctx, a: &ClosedArgs) -> Result<Vec<ResultRow>> {
    let t = a.theorem;
    let one = |id: String, spec: ProductSpec, e: GammaExpr| -> Result<Vec<ResultRow>> {
        Ok(vec![closed_row(ctx, id, Some(&spec), &e)?])
    };
    match t {
        Theorem::Simple => {
            let b = need(&a.b, "b", t)?;
            one(
                format!("simple-b{b}"),
                theorem_simple_spec(&b)?,
                theorem_simple(&b)?,
            )
        }
        Theorem::Pair => {
            let (b, c) = (need(&a.b, "b", t)?, need(&a.c, "c", t)?);
            one(
                format!("pair-b{b}-c{c}"),
                theorem_pair_spec(&b, &c)?,
                theorem_pair(&b, &c)?,
            )
        }
        Theorem::Tk => {
            let (b, k) = (need(&a.b, "b", t)?, need(&a.k, "k", t)?);
            one(
                format!("tk-b{b}-k{k}"),
                t_chain_spec(&b, k, k + 1)?,
                t_k(&b, k)?,
            )
        }
        Theorem::Chain => {
            let (b, k, l) = (
                need(&a.b, "b", t)?,
                need(&a.k, "k", t)?,
                need(&a.l, "l", t)?,
            );
            one(
                format!("chain-b{b}-{k}-{l}"),
                t_chain_spec(&b, k, l)?,
                t_chain(&b, k, l)?,
            )
        }
        Theorem::UShift => {
            let (c, j) = (need(&a.c, "c", t)?, need(&a.j, "j", t)?);
            one(
                format!("ushift-c{c}-j{j}"),
                u_shift_spec(&c, j)?,
                u_shift(&c, j)?,
            )
        }
        Theorem::Tangent => {
            let b = need(&a.b, "b", t)?;
            one(
                format!("tangent-b{b}"),
                tangent_spec(&b)?,
                tangent_product(&b)?,
            )
        }
        Theorem::TangentTriple => {
            let k = need(&a.k, "k", t)?;
            let triple = tangent_triple(k)?;
            triple
                .iter()
                .zip(["first", "second", "product"])
                .map(|(x, part)| {
                    closed_row(ctx, format!("tangent-k{k}-{part}"), Some(&x.spec), &x.value)
                })
                .collect()
        }
        Theorem::SandorToth => {
            let m = need(&a.m, "m", t)?;
            let id = sandor_toth(m)?;
            Ok(vec![gamma_identity_row(
                ctx,
                format!("sandor-toth-{m}"),
                &id.lhs,
                &id.rhs,
            )?])
        }
        Theorem::Nijenhuis => {
            let n = need(&a.n, "n", t)?;
            let r = nijenhuis(n)?;
            let mut row = gamma_identity_row(ctx, format!("nijenhuis-{n}"), &r.lhs, &r.value)?;
            let group = r
                .subgroup
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            row.note = Some(format!(
                "subgroup {{{group}}}, nu = {}, b = {}",
                r.nu, r.b_count
            ));
            Ok(vec![row])
        }
        Theorem::Ww => {
            if a.num.is_empty() || a.den.is_empty() {
                return Err(Error::Usage("--theorem ww needs --num and --den".into()));
            }
            let e = ww_product(&a.num, &a.den)?;
            let spec = make_product(a.num.clone(), a.den.clone(), 0, Weight::Unsigned)?;
            one("ww".into(), spec, e)
        }
        Theorem::Dirichlet => Ok(vec![dirichlet_row(ctx, need(&a.s, "s", t)?)?]),
        Theorem::Sporadic => {
            let mut rows = Vec::new();
            for (id, g) in ["sporadic-gamma-24", "sporadic-gamma-20"]
                .into_iter()
                .zip(sporadic_gamma_identities())
            {
                rows.push(gamma_identity_row(ctx, id.into(), &g.lhs, &g.rhs)?);
            }
            for (id, (b, c, v)) in ["sporadic-product-24", "sporadic-product-20"]
                .into_iter()
                .zip(sporadic_product_values())
            {
                let spec = theorem_pair_spec(&b, &c)?;
                let (lhs, seconds) = ctx.timed(|| eval_certified(&spec, &ctx.p))?;
                let rhs = eval_expr(&v, &ctx.p)?;
                let delta = (&lhs.value - &rhs).abs();
                let tol = &lhs.abs_error_bound
                    + &BigReal::pow2_f64(ctx.p.target_log2() + rhs.abs().log2_abs().max(0.0), 64);
                rows.push(ResultRow {
                    id: id.into(),
                    source: spec.to_string(),
                    value: Some(ctx.value(&lhs.value)),
                    closed_form: Some(v.to_string()),
                    delta: Some(short(&delta)),
                    bound: Some(short(&lhs.abs_error_bound)),
                    tolerance: Some(short(&tol)),
                    pass: Some(delta <= tol),
                    seconds,
                    ..Default::default()
                });
            }
            Ok(rows)
        }
    }
}

fn verify_rows(ctx: &Ctx, ids: &[String]) -> Result<Vec<ResultRow>> {
    let catalog = identity_catalog();
    for id in ids {
        if !catalog.iter().any(|r| &r.id == id) {
            return Err(Error::Usage(format!("no catalog identity with id '{id}'")));
        }
    }
    let selected: Vec<_> = catalog
        .into_iter()
        .filter(|r| ids.is_empty() || ids.contains(&r.id))
        .collect();
    let mut rows = selected
        .par_iter()
        .map(|rec| {
            let (check, seconds) = ctx.timed(|| verify_record(rec, &ctx.p))?;
            Ok(ResultRow {
                id: rec.id.clone(),
                source: rec.source.clone(),
                value: Some(ctx.value(&check.lhs.value)),
                closed_form: Some(rec.rhs.to_string()),
                delta: Some(short(&check.delta)),
                bound: Some(short(&check.lhs.abs_error_bound)),
                tolerance: Some(short(&check.tolerance)),
                pass: Some(check.pass),
                seconds,
                ..Default::default()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(rows)
}

fn verdict_note(v: &Verdict, unconditional: bool) -> String {
    let shown: Vec<String> = v
        .witnesses
        .iter()
        .take(4)
        .map(|(m, s)| format!("m = {m}: {s}"))
        .collect();
    let more = if v.witnesses.len() > 4 {
        format!(" and {} more", v.witnesses.len() - 4)
    } else {
        String::new()
    };
    match (v.algebraic, unconditional) {
        (true, true) => "algebraic (unconditional by construction)".into(),
        (true, false) => "algebraic (conditional on Rohrlich's conjecture)".into(),
        (false, _) => format!(
            "not algebraic (conditional on Rohrlich's conjecture); witnesses {}{more}",
            shown.join("; ")
        ),
    }
}

fn run_algebraic(a: &AlgebraicArgs) -> Result<Vec<ResultRow>> {
    let row = |id: String, source: String, v: Verdict, unconditional: bool| ResultRow {
        id,
        source,
        value: Some(
            if v.algebraic {
                "algebraic"
            } else {
                "not algebraic"
            }
            .into(),
        ),
        note: Some(verdict_note(&v, unconditional)),
        ..Default::default()
    };
    if !a.args.is_empty() {
        let inst = RohrlichInstance::new(a.args.clone())?;
        let source = format!("prod Gamma at {}", join(&a.args));
        return Ok(vec![row(
            "rohrlich".into(),
            source,
            rohrlich_check(&inst)?,
            false,
        )]);
    }
    let b = a
        .b
        .clone()
        .ok_or_else(|| Error::Usage("algebraic needs --b (and optionally --c) or --args".into()))?;
    let (id, spec, v, e) = match &a.c {
        Some(c) => (
            "pair-criterion",
            theorem_pair_spec(&b, c)?,
            corollary_pair_check(&b, c)?,
            theorem_pair(&b, c)?,
        ),
        None => (
            "simple-criterion",
            theorem_simple_spec(&b)?,
            corollary_simple_check(&b)?,
            theorem_simple(&b)?,
        ),
    };
    let unconditional = e.is_gamma_free() && e.pi_half_exp == 0;
    Ok(vec![row(id.into(), spec.to_string(), v, unconditional)])
}

fn run_seq(a: &SeqArgs) -> Result<Vec<ResultRow>> {
    let end = a
        .start
        .checked_add(a.count)
        .ok_or_else(|| Error::Domain("index range overflows".into()))?;
    Ok((a.start..end)
        .map(|n| {
            let (id, value) = if a.summatory {
                (
                    format!("S({})", n + 1),
                    summatory(a.kind, n + 1).s.to_string(),
                )
            } else {
                let t = seq_term(a.kind, n);
                (n.to_string(), if t > 0 { "+1".into() } else { "-1".into() })
            };
            ResultRow {
                id,
                source: a.kind.to_string(),
                value: Some(value),
                ..Default::default()
            }
        })
        .collect())
}

fn dirichlet_row(ctx: &Ctx, s: u32) -> Result<ResultRow> {
    let (v, seconds) = ctx.timed(|| von_haeseler(s, &ctx.p))?;
    let (delta, ok) = v.lhs.agrees_with(&v.rhs);
    Ok(ResultRow {
        id: format!("paperfold-dirichlet-s{s}"),
        source: format!("level sum against 2^s/(2^s-1) beta({s})"),
        value: Some(ctx.value(&v.lhs.value)),
        delta: Some(short(&delta)),
        bound: Some(short(&v.lhs.abs_error_bound)),
        pass: Some(ok),
        seconds,
        ..Default::default()
    })
}

fn run_report(ctx: &Ctx) -> Result<Vec<ResultRow>> {
    let mut rows = verify_rows(ctx, &[])?;
    let a_spec = make_product(
        vec![crate::q(1, 2)],
        vec![crate::q(1, 1)],
        0,
        Weight::Signed(SeqKind::Paperfold),
    )?;
    let (a, seconds) = ctx.timed(|| eval_certified(&a_spec, &ctx.p))?;
    rows.push(ResultRow {
        id: "constant-a".into(),
        source: a_spec.to_string(),
        value: Some(ctx.value(&a.value)),
        bound: Some(short(&a.abs_error_bound)),
        pass: Some(a.meets(&ctx.p)),
        note: Some("no closed form known".into()),
        seconds,
        ..Default::default()
    });
    let (fm, seconds) = ctx.timed(|| flajolet_martin(&ctx.p))?;
    let (delta, agree) = fm.r.agrees_with(&fm.r_via_q);
    rows.push(ResultRow {
        id: "flajolet-martin-q".into(),
        source: "prod_{n>=1} (2n/(2n+1))^thuemorse".into(),
        value: Some(ctx.value(&fm.q.value)),
        bound: Some(short(&fm.q.abs_error_bound)),
        pass: Some(fm.q.meets(&ctx.p)),
        note: Some("no closed form known".into()),
        seconds: seconds.clone(),
        ..Default::default()
    });
    rows.push(ResultRow {
        id: "flajolet-martin-r".into(),
        source: "e^gamma sqrt(2)/3 times a Thue-Morse product, against e^gamma/(sqrt(2) Q)".into(),
        value: Some(ctx.value(&fm.r.value)),
        delta: Some(short(&delta)),
        bound: Some(short(&fm.r.abs_error_bound)),
        pass: Some(agree && fm.r.meets(&ctx.p)),
        seconds,
        ..Default::default()
    });
    for s in [2, 3] {
        rows.push(dirichlet_row(ctx, s)?);
    }
    let n_max = 1 << 20;
    let (r, seconds) = ctx.timed(|| summatory_bound_report(n_max))?;
    rows.push(ResultRow {
        id: "summatory-bound".into(),
        source: format!("|S(n)| <= 1 + log2 n for 1 <= n <= {n_max}"),
        value: Some(format!("{:.6}", r.max_ratio)),
        pass: Some(r.all_within),
        note: Some(format!("largest ratio at n = {}", r.worst_n)),
        seconds,
        ..Default::default()
    });
    Ok(rows)
}

/// Executes a parsed command.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let ctx = Ctx {
        p: Precision::new(cli.digits)?,
        timing: !cli.no_timing,
    };
    let results = match &cli.command {
        Command::Eval(a) => run_eval(&ctx, a)?,
        Command::Closed(a) => run_closed(&ctx, a)?,
        Command::Verify(a) => verify_rows(&ctx, &a.id)?,
        Command::Algebraic(a) => run_algebraic(a)?,
        Command::Seq(a) => run_seq(a)?,
        Command::Report => run_report(&ctx)?,
    };
    Ok(Outcome {
        version: env!("CARGO_PKG_VERSION").into(),
        command: command_name(&cli.command).into(),
        results,
    })
}

fn text_row(r: &ResultRow) -> String {
    let mut line = match r.pass {
        Some(true) => "PASS ".to_string(),
        Some(false) => "FAIL ".to_string(),
        None => String::new(),
    };
    line.push_str(&r.id);
    let fields = [
        ("value", &r.value),
        ("closed form", &r.closed_form),
        ("|lhs - rhs|", &r.delta),
        ("error bound", &r.bound),
        ("tolerance", &r.tolerance),
        ("note", &r.note),
    ];
    for (name, v) in fields {
        if let Some(v) = v {
            let _ = write!(line, "\n    {name}: {v}");
        }
    }
    if !r.source.is_empty() {
        let _ = write!(line, "\n    source: {}", r.source);
    }
    if let Some(s) = &r.seconds {
        let _ = write!(line, "\n    time: {s} s");
    }
    line
}

/// Renders an outcome in the requested format.
pub fn emit_report(outcome: &Outcome, format: Format) -> Result<String> {
    match format {
        Format::Json => serde_json::to_string_pretty(outcome)
            .map(|s| s + "\n")
            .map_err(|e| Error::Domain(format!("json output failed: {e}"))),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let fail = |e: csv::Error| Error::Domain(format!("csv output failed: {e}"));
            w.write_record(["id", "source", "value", "error_bound", "pass"])
                .map_err(fail)?;
            for r in &outcome.results {
                let pass = r.pass.map(|p| p.to_string()).unwrap_or_default();
                let value = r.value.clone().unwrap_or_default();
                let bound = r.bound.clone().unwrap_or_default();
                w.write_record([
                    r.id.as_str(),
                    r.source.as_str(),
                    value.as_str(),
                    bound.as_str(),
                    pass.as_str(),
                ])
                .map_err(fail)?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Error::Domain(format!("csv output failed: {e}")))?;
            Ok(String::from_utf8(bytes).expect("csv writes utf-8"))
        }
        Format::Text => {
            let mut out = format!("foldprod {} {}\n", outcome.command, outcome.version);
            if outcome.command == "seq" {
                let terms: Vec<&str> = outcome
                    .results
                    .iter()
                    .filter_map(|r| r.value.as_deref())
                    .collect();
                if !terms.is_empty() {
                    out.push_str(&terms.join(" "));
                    out.push('\n');
                }
                return Ok(out);
            }
            for r in &outcome.results {
                out.push_str(&text_row(r));
                out.push('\n');
            }
            let checked: Vec<bool> = outcome.results.iter().filter_map(|r| r.pass).collect();
            if !checked.is_empty() {
                let passed = checked.iter().filter(|p| **p).count();
                let _ = writeln!(out, "{passed} passed, {} failed", checked.len() - passed);
            }
            Ok(out)
        }
    }
}

/// Full program: parse, run, print. Returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = run(&cli).and_then(|o| Ok((emit_report(&o, cli.format)?, o.exit_code())));
    match outcome {
        Ok((text, code)) => {
            print!("{text}");
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
