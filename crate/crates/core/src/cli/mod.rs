//! Command implementations behind the `nderiv` binary.
//!
//! Each command returns an [`Outcome`]: the JSON report for standard output,
//! a one-line human summary for standard error, and the exit code
//! (0 verified, 1 verified false, 2 usage or input error).

mod parse;
mod report;

use std::collections::BTreeMap;

use serde::Serialize;

pub use parse::{
    parse_expr, parse_expr_in, parse_operator, parse_poly_in, parse_ratfunc, parse_ratfunc_in,
    parse_value_in, Expr, Value,
};
pub use report::{RunReport, SCHEMA_VERSION};

use crate::blackbox::BlackBoxFunc;
use crate::characterize::{decompose_linear_part, poly_decompose, LinearSplit, PolyDecomposition};
use crate::error::{Error, Result};
use crate::exactfield::{parse_rational, serialize_rational, Rational};
use crate::operators::{is_order_n_derivation, OrderVerdict};
use crate::stability::{make_noisy, recover_on, ProbeSet, Recovery};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FALSE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub json: String,
    pub summary: String,
    pub exit_code: u8,
}

fn exit_for(ok: bool) -> u8 {
    if ok {
        EXIT_PASS
    } else {
        EXIT_FALSE
    }
}

fn inputs<const N: usize>(pairs: [(&'static str, String); N]) -> BTreeMap<&'static str, String> {
    pairs.into_iter().collect()
}

#[derive(Serialize)]
struct CheckOrderResult<'a> {
    operator: String,
    verdict: &'a OrderVerdict,
}

pub fn cmd_check_order(expr: &str, n: usize, trials: usize, seed: u64) -> Result<Outcome> {
    let f = parse_operator(expr)?;
    let verdict = is_order_n_derivation(&f, n, trials, seed)?;
    let report = RunReport::new(
        "check-order",
        inputs([
            ("expr", f.to_string()),
            ("n", n.to_string()),
            ("trials", trials.to_string()),
        ]),
        seed,
        CheckOrderResult {
            operator: f.to_string(),
            verdict: &verdict,
        },
    );
    let summary = if verdict.is_order_n {
        format!(
            "{f} is a derivation of order {n} ({} trials)",
            verdict.trials_run
        )
    } else {
        format!("{f} is NOT a derivation of order {n} (witness found)")
    };
    Ok(Outcome {
        json: report.to_json(),
        summary,
        exit_code: exit_for(verdict.is_order_n),
    })
}

#[derive(Serialize)]
struct DecomposeResult<'a> {
    #[serde(flatten)]
    split: &'a LinearSplit,
    reconstructs: bool,
}

pub fn cmd_decompose(expr: &str, n: usize, trials: usize, seed: u64) -> Result<Outcome> {
    let f = parse_operator(expr)?;
    let split = decompose_linear_part(&f, n, trials, seed)?;
    let reconstructs = split.reconstruct() == f;
    let report = RunReport::new(
        "decompose",
        inputs([
            ("expr", f.to_string()),
            ("n", n.to_string()),
            ("trials", trials.to_string()),
        ]),
        seed,
        DecomposeResult {
            split: &split,
            reconstructs,
        },
    );
    let summary = format!(
        "{f} = ({}) + ({})*id; derivation part order {n}: {}",
        split.derivation_part,
        split.lambda,
        if split.verdict.is_order_n {
            "verified"
        } else {
            "fails"
        }
    );
    Ok(Outcome {
        json: report.to_json(),
        summary,
        exit_code: exit_for(split.verdict.is_order_n && reconstructs),
    })
}

#[derive(Serialize)]
struct PolyDecomposeResult<'a> {
    #[serde(flatten)]
    decomposition: &'a PolyDecomposition,
    terms: Vec<String>,
}

#[derive(Serialize)]
struct NotPolynomialResult {
    error: String,
    #[serde(serialize_with = "serialize_rational")]
    witness: Rational,
    #[serde(serialize_with = "serialize_rational")]
    residual: Rational,
    degree_bound: usize,
    probes: usize,
    seed: u64,
}

/// Decomposes a polynomial in `x`, treated as a black box on `ℚ`.
pub fn cmd_poly_decompose(expr: &str, n: usize, probes: usize, seed: u64) -> Result<Outcome> {
    let p = parse_poly_in(expr, "x")?;
    let echoed = inputs([
        ("expr", p.display_with("x")),
        ("n", n.to_string()),
        ("probes", probes.to_string()),
    ]);
    let black_box = BlackBoxFunc::from_poly(p.clone());
    match poly_decompose(&black_box, n, probes, seed) {
        Ok(d) => {
            let terms = d
                .components
                .iter()
                .map(|m| {
                    crate::exactfield::Poly::monomial(m.coefficient.clone(), m.degree)
                        .display_with("x")
                })
                .collect();
            let summary = format!(
                "{} = sum of {} homogeneous components",
                p.display_with("x"),
                n + 1
            );
            let report = RunReport::new(
                "poly-decompose",
                echoed,
                seed,
                PolyDecomposeResult {
                    decomposition: &d,
                    terms,
                },
            );
            Ok(Outcome {
                json: report.to_json(),
                summary,
                exit_code: EXIT_PASS,
            })
        }
        Err(e @ Error::NotPolynomial { .. }) => {
            let Error::NotPolynomial {
                witness, residual, ..
            } = e.clone()
            else {
                unreachable!()
            };
            let report = RunReport::new(
                "poly-decompose",
                echoed,
                seed,
                NotPolynomialResult {
                    error: e.to_string(),
                    witness: *witness,
                    residual: *residual,
                    degree_bound: n,
                    probes,
                    seed,
                },
            );
            Ok(Outcome {
                json: report.to_json(),
                summary: e.to_string(),
                exit_code: EXIT_FALSE,
            })
        }
        Err(e) => Err(e),
    }
}

/// What `stabilize` runs on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fixture {
    /// `λ·x` plus hash noise in `[0, ε]`.
    Noisy { lambda: Rational },
    /// An exact polynomial in `x`.
    Poly(String),
}

impl Fixture {
    /// `noisy:<λ>` or a polynomial expression in `x`.
    pub fn parse(spec: &str) -> Result<Self> {
        match spec.trim().strip_prefix("noisy:") {
            Some(lambda) => Ok(Fixture::Noisy {
                lambda: parse_rational(lambda)?,
            }),
            None => Ok(Fixture::Poly(spec.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct StabilizeArgs {
    pub fixture: String,
    pub n: usize,
    pub depth: u32,
    pub samples: usize,
    pub seed: u64,
    pub epsilon: Rational,
    pub range_bound: Rational,
    /// Probe set to use instead of sampling one.
    pub probes: Option<ProbeSet>,
}

#[derive(Serialize)]
struct StabilizeResult<'a> {
    fixture: String,
    #[serde(flatten)]
    recovery: &'a Recovery,
    pass: bool,
}

/// Returns the outcome and the probe set that was used.
pub fn cmd_stabilize(args: &StabilizeArgs) -> Result<(Outcome, ProbeSet)> {
    let (f, fixture_text) = match Fixture::parse(&args.fixture)? {
        Fixture::Noisy { lambda } => {
            let noisy = make_noisy(lambda.clone(), args.epsilon.clone(), args.seed)?;
            (
                noisy.base,
                format!(
                    "{lambda}*x + noise in [0, {}] (seed {})",
                    args.epsilon, args.seed
                ),
            )
        }
        Fixture::Poly(text) => {
            let p = parse_poly_in(&text, "x")?;
            let shown = p.display_with("x");
            (BlackBoxFunc::from_poly(p), shown)
        }
    };
    let probes = match &args.probes {
        Some(p) => p.clone(),
        None => ProbeSet::random(args.samples, args.seed, &args.range_bound)?,
    };
    let recovery = recover_on(
        &f,
        args.n,
        args.depth,
        &probes,
        args.seed,
        &args.range_bound,
    )?;
    let pass = recovery.pass();
    let mut echoed = inputs([
        ("fixture", fixture_text.clone()),
        ("n", args.n.to_string()),
        ("depth", args.depth.to_string()),
        ("samples", probes.pairs().len().to_string()),
        ("range_bound", args.range_bound.to_string()),
    ]);
    if matches!(Fixture::parse(&args.fixture)?, Fixture::Noisy { .. }) {
        echoed.insert("epsilon", args.epsilon.to_string());
    }
    let summary = format!(
        "{fixture_text}: lambda = {}, epsilon_hat = {}, residual_sup = {}, pass = {pass}",
        recovery.lambda, recovery.stability.epsilon_hat, recovery.stability.residual_sup
    );
    let report = RunReport::new(
        "stabilize",
        echoed,
        args.seed,
        StabilizeResult {
            fixture: fixture_text,
            recovery: &recovery,
            pass,
        },
    );
    Ok((
        Outcome {
            json: report.to_json(),
            summary,
            exit_code: exit_for(pass),
        },
        probes,
    ))
}

/// Canonical rendering of an expression.
pub fn cmd_canon(expr: &str, var: &str) -> Result<String> {
    Ok(parse_value_in(expr, var)?.display_with(var))
}
