//! Command-line front end for the exact radical kernel.
//!
//! [`run`] does all the work and returns the text to print together with the
//! exit code, so the binary is a thin wrapper and tests can run in-process.

use std::ffi::OsString;
use std::io::Read;

use clap::{Parser, Subcommand};
use radicalc_core::arith::{format_rational, FactorBudget};
use radicalc_core::exprlang::{self, Expr, LowerError, ParseError, ParseErrorKind, Span};
use radicalc_core::numeric::{self, DEFAULT_BITS, MIN_BITS};
use radicalc_core::polyq::minimal_polynomial_of_sum;
use radicalc_core::reduced_set::{
    construct_reduced_set, verify_reduced_set, ReducedSetReport, DEFAULT_TUPLE_BUDGET,
};
use radicalc_core::sumalg::{RadicalSum, Verdict};
use radicalc_core::Error;
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "radicalc", version, about = "Exact arithmetic on sums of real radicals")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Working precision in bits for numeric evaluation.
    #[arg(
        long,
        global = true,
        env = "RADICALC_BITS",
        default_value_t = DEFAULT_BITS,
        value_parser = clap::value_parser!(u32).range(MIN_BITS as i64..)
    )]
    pub bits: u32,

    /// Maximum number of exponent tuples the reduced-set verifier enumerates.
    #[arg(
        long,
        global = true,
        default_value_t = DEFAULT_TUPLE_BUDGET,
        value_parser = clap::value_parser!(u64).range(1..)
    )]
    pub tuple_budget: u64,

    /// Maximum number of factorization steps per integer.
    #[arg(
        long,
        global = true,
        default_value_t = FactorBudget::DEFAULT.0,
        value_parser = clap::value_parser!(u64).range(1..)
    )]
    pub factor_budget: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the canonical form of an expression.
    Normalize { expr: String },
    /// Decide whether an expression is rational.
    Rational { expr: String },
    /// Print a reduced set generating the field of an expression.
    ReducedSet { expr: String },
    /// Check a comma-separated list of radicals for the reduced-set property.
    VerifyReducedSet { list: String },
    /// Print the minimal polynomial of a single radical product.
    Minpoly { expr: String },
    /// Evaluate numerically with a certified error bound.
    Eval { expr: String },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub atom: String,
    pub order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizeJson {
    pub sum: String,
    pub rational_part: String,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<String>,
}

/// `[[prime, eta], ...]`, primes as decimal strings.
pub type ReducedSetJson = Vec<(String, u64)>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyJson {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tuples_checked: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tuple: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub product: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinpolyJson {
    pub polynomial: String,
    /// Ascending coefficients.
    pub coefficients: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalJson {
    pub digits: String,
    /// `None` when the digits are exact.
    pub error_exponent: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorDetail {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub span: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorJson {
    pub error: ErrorDetail,
}

struct Failure {
    kind: &'static str,
    message: String,
    span: Option<Span>,
    code: i32,
}

impl Failure {
    fn input(message: String) -> Self {
        Failure {
            kind: "input",
            message,
            span: None,
            code: EXIT_INPUT,
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        let kind = match e.kind {
            ParseErrorKind::Syntax { .. } => "syntax",
            ParseErrorKind::Index(_) => "index",
            ParseErrorKind::Exponent(_) => "exponent",
        };
        Failure {
            kind,
            message: e.to_string(),
            span: Some(e.span),
            code: EXIT_INPUT,
        }
    }
}

fn kernel_failure(error: Error, span: Option<Span>) -> Failure {
    let (kind, code) = match &error {
        Error::Domain(_) => ("domain", EXIT_INPUT),
        Error::BudgetExceeded(_) => ("budget", EXIT_BUDGET),
        Error::ExponentOverflow => ("overflow", EXIT_INPUT),
        Error::BasisMismatch(_) => ("basis", EXIT_INPUT),
        Error::PrecisionInsufficient(_) => ("precision", EXIT_INPUT),
    };
    Failure {
        kind,
        message: error.to_string(),
        span,
        code,
    }
}

impl From<LowerError> for Failure {
    fn from(e: LowerError) -> Self {
        kernel_failure(e.error, Some(e.span))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        kernel_failure(e, None)
    }
}

struct Reply {
    text: String,
    json: String,
    code: i32,
}

impl Reply {
    fn new(text: String, json: impl Serialize, code: i32) -> Self {
        Reply {
            text,
            json: serde_json::to_string(&json).expect("report types serialize"),
            code,
        }
    }
}

struct Session<'a> {
    cli: &'a Cli,
    source: String,
}

impl Session<'_> {
    fn budget(&self) -> FactorBudget {
        FactorBudget(self.cli.factor_budget)
    }

    fn lower(&self) -> Result<RadicalSum, Failure> {
        let e: Expr = exprlang::parse(&self.source)?;
        Ok(exprlang::lower(&e, self.budget())?)
    }

    fn dispatch(&self) -> Result<Reply, Failure> {
        match &self.cli.command {
            Command::Normalize { .. } => {
                let s = self.lower()?;
                let terms = s
                    .terms()
                    .map(|(atom, c)| TermJson {
                        coeff: format_rational(c),
                        atom: atom.to_string(),
                        order: atom.order(),
                    })
                    .collect();
                let json = NormalizeJson {
                    sum: s.to_string(),
                    rational_part: format_rational(s.rational_part()),
                    terms,
                };
                Ok(Reply::new(s.to_string(), json, EXIT_OK))
            }
            Command::Rational { .. } => {
                let verdict = self.lower()?.verdict();
                let (json, code) = match &verdict {
                    Verdict::Rational(q) => (
                        RationalJson {
                            verdict: "rational".into(),
                            value: Some(format_rational(q)),
                        },
                        EXIT_OK,
                    ),
                    Verdict::Irrational => (
                        RationalJson {
                            verdict: "irrational".into(),
                            value: None,
                        },
                        EXIT_NEGATIVE,
                    ),
                };
                Ok(Reply::new(verdict.to_string(), json, code))
            }
            Command::ReducedSet { .. } => {
                let set = construct_reduced_set(&self.lower()?)?;
                let json: ReducedSetJson = set
                    .generators()
                    .iter()
                    .map(|(p, eta)| (p.to_string(), *eta))
                    .collect();
                Ok(Reply::new(set.to_string(), json, EXIT_OK))
            }
            Command::VerifyReducedSet { .. } => {
                let items = exprlang::parse_list(&self.source)?;
                let candidates = exprlang::radical_candidates(&items, self.budget())?;
                let report = verify_reduced_set(&candidates, self.cli.tuple_budget, self.budget())?;
                Ok(match report {
                    ReducedSetReport::Reduced { tuples_checked } => Reply::new(
                        format!("reduced-set ({tuples_checked} tuples checked)"),
                        VerifyJson {
                            verdict: "reduced-set".into(),
                            tuples_checked: Some(tuples_checked),
                            tuple: None,
                            product: None,
                        },
                        EXIT_OK,
                    ),
                    ReducedSetReport::NotReduced { tuple, product } => {
                        let shown: Vec<String> = tuple.iter().map(u64::to_string).collect();
                        Reply::new(
                            format!("not-reduced ε=({}) product={product}", shown.join(",")),
                            VerifyJson {
                                verdict: "not-reduced".into(),
                                tuples_checked: None,
                                tuple: Some(tuple),
                                product: Some(product.to_string()),
                            },
                            EXIT_NEGATIVE,
                        )
                    }
                })
            }
            Command::Minpoly { .. } => {
                let p = minimal_polynomial_of_sum(&self.lower()?)?;
                let json = MinpolyJson {
                    polynomial: p.to_string(),
                    coefficients: p.coeffs().iter().map(format_rational).collect(),
                };
                Ok(Reply::new(p.to_string(), json, EXIT_OK))
            }
            Command::Eval { .. } => {
                let s = self.lower()?;
                // extra bits so rounding the midpoint stays within the target
                let a = numeric::eval_sum(&s, self.cli.bits + 32)?;
                let r = numeric::render_decimal(&a, self.cli.bits);
                let json = EvalJson {
                    digits: r.digits.clone(),
                    error_exponent: r.error_exponent,
                };
                Ok(Reply::new(r.to_string(), json, EXIT_OK))
            }
        }
    }
}

fn source_arg(cmd: &Command) -> &str {
    match cmd {
        Command::Normalize { expr }
        | Command::Rational { expr }
        | Command::ReducedSet { expr }
        | Command::Minpoly { expr }
        | Command::Eval { expr } => expr,
        Command::VerifyReducedSet { list } => list,
    }
}

/// Caret diagnostic under the offending span.
fn diagnostic(source: &str, span: Span) -> String {
    let line = source.replace(['\n', '\r', '\t'], " ");
    let start = span.start.min(line.len());
    let end = span.end.clamp(start, line.len());
    let pad = line[..start].chars().count();
    let width = line[start..end].chars().count().max(1);
    format!("  {line}\n  {}{}", " ".repeat(pad), "^".repeat(width))
}

fn render_failure(cli: &Cli, source: &str, f: Failure) -> Outcome {
    if cli.json {
        let json = ErrorJson {
            error: ErrorDetail {
                kind: f.kind.into(),
                message: f.message,
                span: f.span.map(|s| (s.start, s.end)),
            },
        };
        return Outcome {
            stdout: format!("{}\n", serde_json::to_string(&json).expect("serializes")),
            stderr: String::new(),
            code: f.code,
        };
    }
    let mut stderr = format!("error: {}\n", f.message);
    if let Some(span) = f.span {
        stderr.push_str(&diagnostic(source, span));
        stderr.push('\n');
    }
    Outcome {
        stdout: String::new(),
        stderr,
        code: f.code,
    }
}

/// Runs one parsed invocation. `stdin` is read only when the expression is `-`.
pub fn execute(cli: &Cli, stdin: &mut dyn Read) -> Outcome {
    let arg = source_arg(&cli.command);
    let source = if arg == "-" {
        let mut buf = String::new();
        if let Err(e) = stdin.read_to_string(&mut buf) {
            return render_failure(cli, "", Failure::input(format!("cannot read stdin: {e}")));
        }
        buf.trim_end().to_string()
    } else {
        arg.to_string()
    };
    let session = Session { cli, source };
    match session.dispatch() {
        Ok(reply) => {
            let stdout = if cli.json {
                reply.json
            } else {
                reply.text
            };
            Outcome {
                stdout: format!("{stdout}\n"),
                stderr: String::new(),
                code: reply.code,
            }
        }
        Err(f) => render_failure(cli, &session.source, f),
    }
}

/// Parses arguments and runs. Usage errors exit with code 2.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli, stdin),
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            if code == 0 {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: EXIT_INPUT,
                }
            }
        }
    }
}

