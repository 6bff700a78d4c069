//! Command-line front end.
//!
//! Exit codes: 0 success or verified, 1 verification failed, 2 input error,
//! 3 node budget exceeded, 4 a premise-satisfying instance had no solution.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::chain::{sigma_degree_sequence, sigma_identity_rhs, PolyChain};
use crate::generator::{GeneratorConfig, GeneratorMode, InstanceStream, Sampler};
use crate::solver::{
    lemma_search_trace_digest, scaled_premise_holds, solve_lemma_parallel, solve_scaled_k1,
    solve_theorem_direct, solve_theorem_parallel, Outcome, SolveReport,
};
use crate::translation::{
    lemma_conclusion_transcript, lemma_to_theorem, theorem_conclusion_transcript,
    theorem_premise_transcript, theorem_to_lemma, verify_theorem_premises, BetaCertificate,
    FCertificate, LemmaInstance, TheoremInstance, TranslationError,
};
use crate::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    VerificationFailed = 1,
    InputError = 2,
    BudgetExceeded = 3,
    TheoremContradiction = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Lemma,
    Theorem,
}

#[derive(Parser, Debug)]
#[command(
    name = "majorize",
    version,
    about = "Partition majorization and pencil completion certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify the premises of an instance and, given a certificate, its conclusions.
    Check {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Search for a certificate.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Enumerate witness chains directly instead of going through partitions.
        #[arg(long)]
        direct: bool,
        /// Where to write the report if a premise-satisfying instance has no solution.
        #[arg(long)]
        bug_report: Option<PathBuf>,
    },
    /// Translate an instance to the other side.
    Translate {
        #[arg(long)]
        instance: PathBuf,
        /// Kind of the input instance.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Compare the σ-degree sequence of a chain pair with its partition formula.
    Identity {
        /// JSON object {"delta": chain, "epsilon": chain}.
        #[arg(long)]
        instance: PathBuf,
    },
    /// Emit random premise-satisfying instances, one JSON document per line.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Mode::Lemma)]
        mode: Mode,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        s: usize,
        #[arg(long, default_value_t = 3)]
        max_part: u64,
        #[arg(long, default_value_t = 4)]
        transfers: usize,
        /// Sample by rejection instead of Dalton transfers.
        #[arg(long)]
        rejection: bool,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Run the weighted single-factor instance A = B = (1,1), t = (0,0), d = (1,1).
    ReproCounterexample {
        #[arg(long, default_value_t = 2)]
        weight: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

/// Parses `args` (program name first) and runs the command, writing
/// results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() {
                ExitStatus::InputError.code()
            } else {
                0
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(status) => status.code(),
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            ExitStatus::InputError.code()
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn detect_mode(path: &Path, mode: Option<Mode>) -> anyhow::Result<Mode> {
    if let Some(mode) = mode {
        return Ok(mode);
    }
    let value: Value = read_json(path)?;
    if value.get("alpha").is_some() {
        Ok(Mode::Theorem)
    } else if value.get("pairs").is_some() {
        Ok(Mode::Lemma)
    } else {
        bail!("{}: cannot tell instance kind; pass --mode", path.display())
    }
}

/// Certificate files may be a bare certificate or a solve report.
fn read_certificate<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let value: Value = read_json(path)?;
    let inner = match value.get("certificate") {
        Some(Value::Null) => bail!("{}: report carries no certificate", path.display()),
        Some(c) => c.clone(),
        None => value,
    };
    serde_json::from_value(inner).with_context(|| format!("parsing certificate {}", path.display()))
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn verdict(ok: bool) -> ExitStatus {
    if ok {
        ExitStatus::Success
    } else {
        ExitStatus::VerificationFailed
    }
}

fn dispatch(
    command: Command,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> anyhow::Result<ExitStatus> {
    match command {
        Command::Check {
            instance,
            certificate,
            mode,
        } => check(&instance, certificate.as_deref(), mode, out),
        Command::Solve {
            instance,
            mode,
            budget,
            workers,
            direct,
            bug_report,
        } => solve(
            &instance,
            mode,
            budget,
            workers,
            direct,
            bug_report.as_deref(),
            out,
            err,
        ),
        Command::Translate { instance, mode } => translate(&instance, mode, out),
        Command::Identity { instance } => identity(&instance, out),
        Command::Gen {
            seed,
            mode,
            k,
            s,
            max_part,
            transfers,
            rejection,
            count,
        } => {
            let config = GeneratorConfig {
                seed,
                k,
                s,
                max_part,
                max_transfer_steps: transfers,
                mode: match mode {
                    Mode::Lemma => GeneratorMode::Lemma,
                    Mode::Theorem => GeneratorMode::Theorem,
                },
                sampler: if rejection {
                    Sampler::Rejection
                } else {
                    Sampler::Dalton
                },
            };
            let mut stream = InstanceStream::new(config)?;
            for _ in 0..count {
                serde_json::to_writer(&mut *out, &stream.next_instance()?)?;
                writeln!(out)?;
            }
            Ok(ExitStatus::Success)
        }
        Command::ReproCounterexample { weight, budget } => {
            let d = Partition::new(vec![1, 1])?;
            let t = Partition::empty();
            let a = Partition::new(vec![1, 1])?;
            let b = a.clone();
            let premise = scaled_premise_holds(&d, &t, &a, &b, weight);
            let report = solve_scaled_k1(&d, &t, &a, &b, weight, budget)?;
            emit(
                out,
                &json!({
                    "d": d, "t": [0, 0], "A": a, "B": b, "weight": weight,
                    "premise": premise,
                    "report": report,
                }),
            )?;
            Ok(match report.outcome {
                Outcome::Aborted => ExitStatus::BudgetExceeded,
                Outcome::NoSolution if premise => ExitStatus::Success,
                _ => ExitStatus::VerificationFailed,
            })
        }
    }
}

fn check(
    instance: &Path,
    certificate: Option<&Path>,
    mode: Option<Mode>,
    out: &mut dyn Write,
) -> anyhow::Result<ExitStatus> {
    match detect_mode(instance, mode)? {
        Mode::Lemma => {
            let inst: LemmaInstance = read_json(instance)?;
            let premises = inst.premise_transcript();
            let conclusion = match certificate {
                Some(path) => Some(lemma_conclusion_transcript(
                    &inst,
                    &read_certificate::<FCertificate>(path)?,
                )),
                None => None,
            };
            let ok = premises.all_hold() && conclusion.as_ref().is_none_or(|c| c.all_hold());
            emit(
                out,
                &json!({ "kind": "lemma", "premises": premises, "conclusion": conclusion, "verified": ok }),
            )?;
            Ok(verdict(ok))
        }
        Mode::Theorem => {
            let inst: TheoremInstance = read_json(instance)?;
            let premises = theorem_premise_transcript(&inst);
            let conclusion = match certificate {
                Some(path) => Some(theorem_conclusion_transcript(
                    &inst,
                    &read_certificate::<BetaCertificate>(path)?,
                )?),
                None => None,
            };
            let ok = premises.all_hold() && conclusion.as_ref().is_none_or(|c| c.all_hold());
            emit(
                out,
                &json!({ "kind": "theorem", "premises": premises, "conclusion": conclusion, "verified": ok }),
            )?;
            Ok(verdict(ok))
        }
    }
}

fn report_status<C>(report: &SolveReport<C>, premise: bool) -> ExitStatus {
    match report.outcome {
        Outcome::Found(_) => ExitStatus::Success,
        Outcome::Aborted => ExitStatus::BudgetExceeded,
        Outcome::NoSolution if premise => ExitStatus::TheoremContradiction,
        Outcome::NoSolution => ExitStatus::VerificationFailed,
    }
}

fn write_bug_report(
    instance: Value,
    trace_digest: Option<String>,
    report: Value,
    path: Option<&Path>,
    err: &mut dyn Write,
) -> anyhow::Result<()> {
    let doc = json!({
        "kind": "no-solution-under-premise",
        "instance": instance,
        "report": report,
        "search_trace_sha256": trace_digest,
    });
    let text = serde_json::to_string_pretty(&doc)?;
    match path {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => writeln!(err, "{text}")?,
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn solve(
    instance: &Path,
    mode: Option<Mode>,
    budget: u64,
    workers: usize,
    direct: bool,
    bug_report: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> anyhow::Result<ExitStatus> {
    match detect_mode(instance, mode)? {
        Mode::Lemma => {
            if direct {
                bail!("--direct applies to theorem instances only");
            }
            let inst: LemmaInstance = read_json(instance)?;
            let report = solve_lemma_parallel(&inst, budget, workers);
            emit(out, &report)?;
            let status = report_status(&report, inst.premise_holds());
            if status == ExitStatus::TheoremContradiction {
                let digest = lemma_search_trace_digest(&inst, budget);
                write_bug_report(
                    serde_json::to_value(&inst)?,
                    Some(digest),
                    serde_json::to_value(&report)?,
                    bug_report,
                    err,
                )?;
            }
            Ok(status)
        }
        Mode::Theorem => {
            let inst: TheoremInstance = read_json(instance)?;
            let premise = verify_theorem_premises(&inst);
            let report = if direct {
                solve_theorem_direct(&inst, budget)
            } else {
                match solve_theorem_parallel(&inst, budget, workers) {
                    Ok(report) => report,
                    Err(TranslationError::PremiseViolation(what)) => {
                        writeln!(err, "premise does not hold: {what}")?;
                        emit(out, &theorem_premise_transcript(&inst))?;
                        return Ok(ExitStatus::VerificationFailed);
                    }
                    Err(e) => return Err(anyhow!(e)),
                }
            };
            emit(out, &report)?;
            let status = report_status(&report, premise);
            if status == ExitStatus::TheoremContradiction {
                let digest = theorem_to_lemma(&inst)
                    .ok()
                    .map(|l| lemma_search_trace_digest(&l, budget));
                write_bug_report(
                    serde_json::to_value(&inst)?,
                    digest,
                    serde_json::to_value(&report)?,
                    bug_report,
                    err,
                )?;
            }
            Ok(status)
        }
    }
}

fn translate(
    instance: &Path,
    mode: Option<Mode>,
    out: &mut dyn Write,
) -> anyhow::Result<ExitStatus> {
    let result = match detect_mode(instance, mode)? {
        Mode::Theorem => theorem_to_lemma(&read_json(instance)?).map(serde_json::to_value),
        Mode::Lemma => lemma_to_theorem(&read_json(instance)?).map(serde_json::to_value),
    };
    match result {
        Ok(value) => {
            emit(out, &value?)?;
            Ok(ExitStatus::Success)
        }
        Err(TranslationError::PremiseViolation(what)) => {
            emit(out, &json!({ "premise_violation": what }))?;
            Ok(ExitStatus::VerificationFailed)
        }
        Err(e) => Err(anyhow!(e)),
    }
}

#[derive(serde::Deserialize)]
struct ChainPair {
    delta: PolyChain,
    epsilon: PolyChain,
}

fn identity(instance: &Path, out: &mut dyn Write) -> anyhow::Result<ExitStatus> {
    let pair: ChainPair = read_json(instance)?;
    let y = pair
        .epsilon
        .len()
        .checked_sub(pair.delta.len())
        .ok_or_else(|| anyhow!("epsilon is shorter than delta"))?;
    let sigma = sigma_degree_sequence(&pair.delta, &pair.epsilon, y)?;
    let rhs = sigma_identity_rhs(&pair.delta, &pair.epsilon, y)?;
    let equal = sigma == rhs;
    emit(
        out,
        &json!({ "y": y, "sigma_degrees": sigma, "identity_rhs": rhs, "equal": equal }),
    )?;
    Ok(verdict(equal))
}
