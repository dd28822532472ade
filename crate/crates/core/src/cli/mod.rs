//! Command-line front end: expression evaluation and the identity suites.

pub mod eval;
pub mod parse;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::cohn::CohnCrossed;
use crate::decomp::{decompose, decomposition_json, FinMatrix};
use crate::scalars::{RingKind, RingValue};
use crate::seqspace::{IdealTag, SymSeq};
use crate::suites;
use eval::{render, Evaluator, Val};
use parse::Span;

#[derive(Debug, Parser)]
#[command(
    name = "gammacalc",
    version,
    about = "Exact calculus for partial-isometry operator algebras"
)]
pub struct Cli {
    /// Coefficient ring: Z, Q, Q(i), Z/N or M2(Q).
    #[arg(long, global = true, default_value = "Q")]
    pub ring: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the canonical form of an expression.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Print the upper-left n×n window as JSON.
    Window {
        #[arg(long)]
        n: i64,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Exit 0 when the two expressions are equal, 1 otherwise.
    Equal {
        #[arg(allow_hyphen_values = true)]
        lhs: String,
        #[arg(allow_hyphen_values = true)]
        rhs: String,
        /// Window size used when either side is an infinite sum.
        #[arg(long, default_value_t = 256)]
        n: i64,
    },
    /// Exit 0 when the expression lies in the ideal.
    Member {
        #[arg(long)]
        ideal: String,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Decompose a finite matrix (JSON or CSV) into band-one components.
    Decompose {
        #[arg(long)]
        file: PathBuf,
    },
    /// Polar decomposition of a single term.
    Polar {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Operators D, g, h with U_h D x U_g = 1.
    UnitWitness {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Normal form of a Cohn ring element.
    CohnNormalize {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Run the randomized identity suites.
    VerifyPaper {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
    },
}

/// Outcome of a command before it becomes an exit status.
enum Outcome {
    Yes,
    No,
}

fn whole(src: &str) -> Span {
    Span {
        start: 0,
        end: src.len(),
    }
}

fn parse_ring(name: &str) -> Result<RingKind, String> {
    RingKind::parse(name).map_err(|e| e.to_string())
}

/// Default trial count, overridable through `GAMMACALC_TRIALS`.
pub fn default_trials() -> usize {
    std::env::var("GAMMACALC_TRIALS")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(200)
}

/// Parse arguments, run, and return the process exit status.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(Outcome::Yes) => 0,
        Ok(Outcome::No) => 1,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn run(cli: &Cli, out: &mut dyn Write) -> Result<Outcome, String> {
    let ring = parse_ring(&cli.ring)?;
    let ev = Evaluator::new(ring);
    let io = |e: std::io::Error| e.to_string();
    match &cli.command {
        Command::Eval { expr } => {
            let v = ev.eval_src(expr)?;
            writeln!(out, "{}", render(&v)?).map_err(io)?;
            Ok(Outcome::Yes)
        }
        Command::Window { n, expr } => {
            if *n < 1 {
                return Err("window size must be positive".into());
            }
            let v = ev.eval_src(expr)?;
            let text = match v {
                Val::Seq(s) => serde_json::to_string(
                    &s.window(*n)
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>(),
                )
                .map_err(|e| e.to_string())?,
                other => ev
                    .lazy(other, whole(expr))
                    .map_err(|e| e.render(expr))?
                    .window(*n)
                    .to_json(),
            };
            writeln!(out, "{text}").map_err(io)?;
            Ok(Outcome::Yes)
        }
        Command::Equal { lhs, rhs, n } => {
            let (a, b) = (ev.eval_src(lhs)?, ev.eval_src(rhs)?);
            let same = ev.values_equal(a, b, lhs, rhs, *n)?;
            Ok(if same { Outcome::Yes } else { Outcome::No })
        }
        Command::Member { ideal, expr } => {
            let tag: IdealTag = ideal.parse().map_err(|e| format!("{e}"))?;
            let inside = match ev.eval_src(expr)? {
                Val::Seq(s) => s.member(&tag),
                Val::Scalar(v) => SymSeq::constant(v).member(&tag),
                other => ev
                    .op(other, whole(expr))
                    .map_err(|e| e.render(expr))?
                    .ideal_member(&tag),
            };
            Ok(if inside { Outcome::Yes } else { Outcome::No })
        }
        Command::Decompose { file } => {
            let text =
                std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
            let is_json = text.trim_start().starts_with('{');
            let a = if is_json {
                let explicit = cli_ring_given(cli).then_some(ring);
                FinMatrix::from_json(&text, explicit)
            } else {
                FinMatrix::from_csv(&text, ring)
            }
            .map_err(|e| e.to_string())?;
            let comps = decompose(&a).map_err(|e| e.to_string())?;
            let doc = decomposition_json(&a, &comps);
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?
            )
            .map_err(io)?;
            Ok(Outcome::Yes)
        }
        Command::Polar { expr } => {
            let t = ev
                .op(ev.eval_src(expr)?, whole(expr))
                .map_err(|e| e.render(expr))?;
            let (v, abs) = t.polar().map_err(|e| e.to_string())?;
            writeln!(out, "V = {v}\n|T| = {abs}").map_err(io)?;
            Ok(Outcome::Yes)
        }
        Command::UnitWitness { expr } => {
            let x = ev
                .op(ev.eval_src(expr)?, whole(expr))
                .map_err(|e| e.render(expr))?;
            let w = x.unit_witness().map_err(|e| e.to_string())?;
            writeln!(out, "D = {}\ng = {}\nh = {}", w.d, w.g, w.h).map_err(io)?;
            let ok = w
                .apply(&x)
                .map(|p| p.equal(&crate::gami::OpSum::identity(ring)))
                .map_err(|e| e.to_string())?;
            writeln!(
                out,
                "check: {}",
                if ok { "U[h]*D*x*U[g] = 1" } else { "failed" }
            )
            .map_err(io)?;
            Ok(if ok { Outcome::Yes } else { Outcome::No })
        }
        Command::CohnNormalize { expr } => {
            let c = match ev.eval_src(expr)? {
                Val::Cohn(c) => c,
                Val::Scalar(v) => match v.as_scalar() {
                    Some(RingValue::Integer(n)) => crate::cohn::CohnElem::one().scale(&n),
                    _ => return Err(format!("expected a Cohn element, found Scalar {v}")),
                },
                other => return Err(format!("expected a Cohn element, found {}", other.ty())),
            };
            writeln!(out, "{c}").map_err(io)?;
            let crossed = CohnCrossed {
                ring,
                terms: c
                    .terms()
                    .map(|(w, k)| (SymSeq::scalar(RingValue::from_integer(ring, k)), w.clone()))
                    .collect(),
            };
            let nf = crossed.normal_form();
            writeln!(out, "level {}", nf.level).map_err(io)?;
            for ((i, j), v) in &nf.matrix_part {
                writeln!(out, "E({i},{j}): {v}").map_err(io)?;
            }
            for (w, a) in &nf.top_words {
                writeln!(out, "{w}: {a}").map_err(io)?;
            }
            Ok(Outcome::Yes)
        }
        Command::VerifyPaper {
            suite,
            seed,
            trials,
        } => {
            let trials = trials.unwrap_or_else(default_trials);
            let names: Vec<&str> = match suite {
                Some(s) => vec![s.as_str()],
                None => suites::SUITES.to_vec(),
            };
            let mut all = true;
            writeln!(
                out,
                "{:<12} {:>7} {:>7}  result",
                "suite", "passed", "trials"
            )
            .map_err(io)?;
            for name in names {
                let rep = suites::run(name, *seed, trials).ok_or_else(|| {
                    format!(
                        "unknown suite {name}; expected one of {}",
                        suites::SUITES.join(", ")
                    )
                })?;
                all &= rep.ok();
                writeln!(
                    out,
                    "{:<12} {:>7} {:>7}  {}",
                    rep.name,
                    rep.passed,
                    rep.trials,
                    if rep.ok() { "pass" } else { "FAIL" }
                )
                .map_err(io)?;
                if let Some(f) = &rep.first_failure {
                    writeln!(out, "  first failure: {f}").map_err(io)?;
                }
            }
            Ok(if all { Outcome::Yes } else { Outcome::No })
        }
    }
}

fn cli_ring_given(cli: &Cli) -> bool {
    !cli.ring.eq_ignore_ascii_case("q")
}
