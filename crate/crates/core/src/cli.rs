//! Command-line front end for the `lipop` binary.
//!
//! Exit codes: 0 computed, 1 verification failure, 2 input error, 3 evaluation error.
//! Verdicts are reported as data and never change the exit code.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand};
use serde::Serialize;

use crate::criteria::{analyze, CriterionReport};
use crate::error::{Error, Result};
use crate::estimation::{equivalence_sweep, lower_bound_opnorm, write_sweep_csv, ExtremalFamily, LowerBound};
use crate::fnkernel::AnalyticScalar;
use crate::scenario::{load_corpus, load_scenario, Scenario};
use crate::verify::{run_suite, Suite};
use crate::vspaces::{hinf_nu_norm, lambda1_norm, space_norm, NormEstimate, VectorFunction, WeightSpec};

pub const THREADS_VAR: &str = "LIPOP_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_EVAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "lipop", version, about = "Weighted composition operators on vector-valued Lipschitz spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every criterion on a scenario file.
    Analyze {
        file: PathBuf,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Norm of a function file (a vector function or a single scalar spec).
    #[command(group(ArgGroup::new("which").required(true).args(["alpha", "nu", "lip1"])))]
    Norm {
        file: PathBuf,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        lip1: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run a built-in property suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
    },
    /// Equivalence sweep over a corpus file, written as CSV.
    Sweep { corpus: PathBuf, out: PathBuf },
}

/// Where a failure happened decides its exit code.
#[derive(Debug)]
pub enum Failure {
    Input(Error),
    Eval(Error),
    Verify(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Eval(_) => EXIT_EVAL,
            Failure::Verify(_) => EXIT_VERIFY,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Input(e) => write!(f, "input error: {e}"),
            Failure::Eval(e) => write!(f, "evaluation error: {e}"),
            Failure::Verify(msg) => write!(f, "verification failed: {msg}"),
        }
    }
}

/// `analyze` output: the criterion report plus the scenario id and a lower bound.
#[derive(Debug, Serialize)]
pub struct AnalyzeOutput {
    pub id: String,
    #[serde(flatten)]
    pub report: CriterionReport,
    pub lower_bound: LowerBound,
}

pub fn analyze_scenario(s: &Scenario) -> Result<AnalyzeOutput> {
    let w = s.operator()?;
    let report = analyze(&w, &s.sampler, &s.classifier)?;
    let lower_bound = lower_bound_opnorm(&w, &ExtremalFamily::standard(w.alpha()), &s.sampler)?;
    Ok(AnalyzeOutput {
        id: s.id.clone(),
        report,
        lower_bound,
    })
}

/// Reads either a `VectorFunction` or a bare scalar function spec.
pub fn load_function(path: &Path) -> Result<VectorFunction> {
    let text = std::fs::read_to_string(path)?;
    let f = match serde_json::from_str::<VectorFunction>(&text) {
        Ok(f) => f,
        Err(vector_err) => match serde_json::from_str::<AnalyticScalar>(&text) {
            Ok(g) => VectorFunction::scalar(g),
            Err(_) => return Err(vector_err.into()),
        },
    };
    f.validate()?;
    Ok(f)
}

/// Installs the global rayon pool sized by `LIPOP_THREADS`, if set.
pub fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // A pool that already exists keeps its size.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    configure_threads();
    let io = |e: std::io::Error| Failure::Eval(e.into());
    match cli.command {
        Command::Analyze { file, json } => {
            let s = load_scenario(&file).map_err(Failure::Input)?;
            let r = analyze_scenario(&s).map_err(Failure::Eval)?;
            if json {
                let text = serde_json::to_string_pretty(&r).map_err(|e| Failure::Eval(e.into()))?;
                writeln!(out, "{text}").map_err(io)?;
            } else {
                write_summary(&r, out).map_err(io)?;
            }
        }
        Command::Norm {
            file,
            alpha,
            nu,
            lip1,
            json,
        } => {
            let f = load_function(&file).map_err(Failure::Input)?;
            let s = Default::default();
            let (label, est): (String, NormEstimate) = if lip1 {
                ("lambda_1".into(), lambda1_norm(&f, &s).map_err(Failure::Eval)?)
            } else if let Some(a) = alpha {
                crate::vspaces::SpaceSpec::big(a, f.space).map_err(Failure::Input)?;
                (format!("lambda_{a}"), space_norm(&f, a, &s).map_err(Failure::Eval)?)
            } else {
                let g = nu.expect("clap requires one of the norm flags");
                let w = WeightSpec::new(g).map_err(Failure::Input)?;
                (format!("hinf_nu_{g}"), hinf_nu_norm(&f, &w, &s).map_err(Failure::Eval)?)
            };
            if json {
                let text = serde_json::json!({
                    "norm": label,
                    "value": est.value,
                    "witness": [est.witness.re, est.witness.im],
                });
                writeln!(out, "{text}").map_err(io)?;
            } else {
                writeln!(out, "{label} norm = {:.12}", est.value).map_err(io)?;
                writeln!(out, "witness z = {}", est.witness).map_err(io)?;
            }
        }
        Command::Verify { suite } => {
            let r = run_suite(suite).map_err(Failure::Eval)?;
            for c in &r.checks {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                writeln!(out, "{mark} {}: {}", c.name, c.detail).map_err(io)?;
            }
            if let Some((lo, hi)) = r.envelope {
                writeln!(out, "envelope L/C in [{lo:.6}, {hi:.6}]").map_err(io)?;
            }
            if let Some(c) = r.first_failure() {
                return Err(Failure::Verify(format!("{}: {}", c.name, c.detail)));
            }
            writeln!(out, "suite {suite:?}: all {} checks passed", r.checks.len()).map_err(io)?;
        }
        Command::Sweep { corpus, out: path } => {
            let corpus = load_corpus(&corpus).map_err(Failure::Input)?;
            let summary = equivalence_sweep(&corpus).map_err(Failure::Eval)?;
            let file = std::fs::File::create(&path).map_err(|e| Failure::Input(e.into()))?;
            write_sweep_csv(&summary.rows, std::io::BufWriter::new(file)).map_err(Failure::Eval)?;
            match summary.min_ratio.zip(summary.max_ratio) {
                Some((lo, hi)) => writeln!(out, "{} rows, L/C in [{lo:.6}, {hi:.6}]", summary.rows.len()),
                None => writeln!(out, "{} rows", summary.rows.len()),
            }
            .map_err(io)?;
        }
    }
    Ok(())
}

fn write_summary(r: &AnalyzeOutput, out: &mut dyn Write) -> std::io::Result<()> {
    let rep = &r.report;
    writeln!(out, "scenario        {}", r.id)?;
    writeln!(out, "q               {:.9} at z = {}", rep.q_value, rep.q_witness)?;
    writeln!(out, "psi norm        {:.9} at z = {}", rep.psi_lambda_value, rep.psi_witness)?;
    writeln!(out, "bounded         {:?}", rep.bounded_verdict)?;
    writeln!(out, "compact         {:?}", rep.compact_verdict)?;
    if let Some(l) = &rep.little_boundedness {
        writeln!(out, "little bounded  {:?}", l.verdict)?;
    }
    if let Some(l) = &rep.little_compactness {
        writeln!(out, "little compact  {:?}", l.verdict)?;
    }
    writeln!(out, "lower bound     {:.9}", r.lower_bound.value)?;
    for n in &rep.notes {
        writeln!(out, "note: {n}")?;
    }
    Ok(())
}
