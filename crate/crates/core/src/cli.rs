//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a checked property is violated (a
//! sweep or theorem check disagreement), 2 on usage, input or cap errors.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::assignment::{Permutation, RandomAssignment};
use crate::efficiency::{
    decompose_ex_post_with_cap, find_trading_cycle, sd_improvement_oracle, uniform_po_mixture_with_cap,
};
use crate::error::Error;
use crate::mechanisms::{
    probabilistic_serial, rsd_exact_with_cap, rsd_monte_carlo, serial_dictatorship, EXACT_CAP,
};
use crate::profile::{format_profile, parse_profile, PreferenceProfile, SWEEP_CAP};
use crate::report::{emit_report, AssignmentJson, CounterexampleJson, Format, Report, TheoremJson};
use crate::verify::{check_theorem_with_cap, mine_counterexamples_with_cap, sweep, SweepError, SweepOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Parser)]
#[command(name = "rsd", version, about = "Exact random assignment mechanisms and efficiency checks")]
pub struct CommandConfig {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Random serial dictatorship: exact, or sampled with --samples/--seed.
    Rsd {
        #[command(flatten)]
        input: ProfileArg,
        /// Estimate from this many random orders instead of enumerating.
        #[arg(long, requires = "seed")]
        samples: Option<u64>,
        /// Seed for --samples.
        #[arg(long, requires = "samples")]
        seed: Option<u64>,
        #[arg(long)]
        allow_large: bool,
    },
    /// Probabilistic serial (simultaneous eating).
    Ps {
        #[command(flatten)]
        input: ProfileArg,
    },
    /// Serial dictatorship for one order.
    Prio {
        #[command(flatten)]
        input: ProfileArg,
        /// One-based, comma-separated agent order, e.g. 1,2,3,4.
        #[arg(long)]
        order: String,
    },
    /// Decide SD-efficiency of an assignment.
    CheckSd {
        #[command(flatten)]
        target: TargetArgs,
        /// Also run the LP oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Report a trading cycle, if any.
    FindCycle {
        #[command(flatten)]
        target: TargetArgs,
    },
    /// Decompose an assignment over Pareto optimal assignments.
    Decompose {
        #[command(flatten)]
        target: TargetArgs,
    },
    /// Compute both sides of the RSD characterization for one profile.
    CheckTheorem {
        #[command(flatten)]
        input: ProfileArg,
        #[arg(long)]
        allow_large: bool,
    },
    /// Check the characterization over every profile of size n.
    Sweep {
        #[arg(long)]
        n: usize,
        /// First profile index (inclusive).
        #[arg(long)]
        start: Option<u64>,
        /// Last profile index (exclusive).
        #[arg(long)]
        end: Option<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Lift the size cap.
        #[arg(long)]
        allow_large: bool,
        /// Print elapsed time on standard error.
        #[arg(long)]
        timing: bool,
    },
    /// Sample random profiles and keep those with SD-inefficient RSD.
    Mine {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Write each counterexample as <k>.txt (profile) and <k>.json.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        allow_large: bool,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArg {
    /// Profile file: one agent per line, objects best first.
    #[arg(long)]
    pub profile: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mechanism {
    Rsd,
    Ps,
    UniformPo,
}

#[derive(Debug, Clone, Args)]
pub struct TargetArgs {
    #[command(flatten)]
    pub input: ProfileArg,
    /// Assignment JSON file to analyse.
    #[arg(long, conflicts_with = "mechanism")]
    pub assignment: Option<PathBuf>,
    /// Analyse a mechanism's outcome instead (default: rsd).
    #[arg(long, value_enum)]
    pub mechanism: Option<Mechanism>,
    #[arg(long)]
    pub allow_large: bool,
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(err: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        }
    }
}

fn cap(allow_large: bool, default: usize) -> usize {
    if allow_large {
        usize::MAX
    } else {
        default
    }
}

fn load_profile(path: &Path) -> Result<PreferenceProfile, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_profile(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_target(t: &TargetArgs) -> Result<(PreferenceProfile, RandomAssignment), String> {
    let profile = load_profile(&t.input.profile)?;
    let limit = cap(t.allow_large, EXACT_CAP);
    let assignment = match (&t.assignment, t.mechanism.unwrap_or(Mechanism::Rsd)) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let json: AssignmentJson =
                serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            json.to_assignment(&profile).map_err(|e| e.to_string())?
        }
        (None, Mechanism::Rsd) => rsd_exact_with_cap(&profile, limit).map_err(|e| e.to_string())?.assignment,
        (None, Mechanism::Ps) => probabilistic_serial(&profile),
        (None, Mechanism::UniformPo) => uniform_po_mixture_with_cap(&profile, limit).map_err(|e| e.to_string())?,
    };
    Ok((profile, assignment))
}

/// Dispatches one command. Never prints; the binary writes the outcome.
pub fn run(config: &CommandConfig) -> Outcome {
    match dispatch(config) {
        Ok(outcome) => outcome,
        Err(msg) => Outcome::usage(msg),
    }
}

fn dispatch(config: &CommandConfig) -> Result<Outcome, String> {
    let format = config.format;
    let err = |e: Error| e.to_string();
    match &config.command {
        Command::Rsd {
            input,
            samples,
            seed,
            allow_large,
        } => {
            let profile = load_profile(&input.profile)?;
            let (title, assignment) = match (samples, seed) {
                (Some(s), Some(seed)) => (
                    format!("RSD estimate ({s} samples, seed {seed})"),
                    rsd_monte_carlo(&profile, *s, *seed).map_err(err)?,
                ),
                _ => (
                    "RSD".to_string(),
                    rsd_exact_with_cap(&profile, cap(*allow_large, EXACT_CAP))
                        .map_err(err)?
                        .assignment,
                ),
            };
            Ok(Outcome::ok(emit_report(
                &Report::Assignment {
                    title: &title,
                    assignment: &assignment,
                    profile: &profile,
                },
                format,
            )))
        }
        Command::Ps { input } => {
            let profile = load_profile(&input.profile)?;
            let assignment = probabilistic_serial(&profile);
            Ok(Outcome::ok(emit_report(
                &Report::Assignment {
                    title: "PS",
                    assignment: &assignment,
                    profile: &profile,
                },
                format,
            )))
        }
        Command::Prio { input, order } => {
            let profile = load_profile(&input.profile)?;
            let order_perm = Permutation::parse_one_based(order).map_err(err)?;
            let assignment = serial_dictatorship(&profile, &order_perm).map_err(err)?.to_random();
            let title = format!("Prio({order})");
            Ok(Outcome::ok(emit_report(
                &Report::Assignment {
                    title: &title,
                    assignment: &assignment,
                    profile: &profile,
                },
                format,
            )))
        }
        Command::CheckSd { target, oracle } => {
            let (profile, assignment) = load_target(target)?;
            let cycle = find_trading_cycle(&assignment, &profile);
            let oracle = oracle.then(|| sd_improvement_oracle(&assignment, &profile));
            Ok(Outcome::ok(emit_report(
                &Report::SdCheck {
                    assignment: &assignment,
                    profile: &profile,
                    cycle: cycle.as_ref(),
                    oracle,
                },
                format,
            )))
        }
        Command::FindCycle { target } => {
            let (profile, assignment) = load_target(target)?;
            let cycle = find_trading_cycle(&assignment, &profile);
            Ok(Outcome::ok(emit_report(
                &Report::Cycle {
                    cycle: cycle.as_ref(),
                    profile: &profile,
                },
                format,
            )))
        }
        Command::Decompose { target } => {
            let (profile, assignment) = load_target(target)?;
            let cert = decompose_ex_post_with_cap(&assignment, &profile, cap(target.allow_large, EXACT_CAP))
                .map_err(err)?;
            Ok(Outcome::ok(emit_report(
                &Report::Certificate {
                    certificate: cert.as_ref(),
                    profile: &profile,
                },
                format,
            )))
        }
        Command::CheckTheorem { input, allow_large } => {
            let profile = load_profile(&input.profile)?;
            let record = check_theorem_with_cap(&profile, cap(*allow_large, EXACT_CAP)).map_err(err)?;
            let mut out = Outcome::ok(emit_report(&Report::Theorem(&record), format));
            if !record.agree {
                out.code = EXIT_VIOLATED;
            }
            Ok(out)
        }
        Command::Sweep {
            n,
            start,
            end,
            workers,
            allow_large,
            timing,
        } => {
            let window = match (start, end) {
                (None, None) => None,
                (s, e) => {
                    let total = crate::profile::ProfileSpace::new(*n, cap(*allow_large, SWEEP_CAP))
                        .map_err(err)?
                        .len();
                    Some(s.unwrap_or(0)..e.unwrap_or(total))
                }
            };
            let options = SweepOptions {
                window,
                workers: *workers,
                cap: cap(*allow_large, SWEEP_CAP),
            };
            match sweep(*n, &options) {
                Ok(report) => {
                    let mut out = Outcome::ok(emit_report(&Report::Sweep(&report), format));
                    if *timing {
                        out.stderr = format!("elapsed: {:.3}s\n", report.elapsed.as_secs_f64());
                    }
                    Ok(out)
                }
                Err(SweepError::Disagreement { index, record }) => {
                    let mut stdout = format!("# disagreement at profile #{index}\n");
                    stdout.push_str(&format_profile(&record.profile));
                    stdout.push_str(&serde_json::to_string_pretty(&TheoremJson::new(&record)).expect("serializable"));
                    stdout.push('\n');
                    Ok(Outcome {
                        code: EXIT_VIOLATED,
                        stdout,
                        stderr: format!("error: theorem disagreement at profile #{index}\n"),
                    })
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Mine {
            n,
            trials,
            seed,
            out_dir,
            allow_large,
        } => {
            let found =
                mine_counterexamples_with_cap(*n, *trials, *seed, cap(*allow_large, EXACT_CAP)).map_err(err)?;
            if let Some(dir) = out_dir {
                fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
                for (k, c) in found.iter().enumerate() {
                    let stem = dir.join(format!("{}", k + 1));
                    let json = serde_json::to_string_pretty(&CounterexampleJson::new(c)).expect("serializable");
                    fs::write(stem.with_extension("txt"), format_profile(&c.profile))
                        .and_then(|_| fs::write(stem.with_extension("json"), json + "\n"))
                        .map_err(|e| format!("cannot write to {}: {e}", dir.display()))?;
                }
            }
            Ok(Outcome::ok(emit_report(
                &Report::Counterexamples {
                    found: &found,
                    trials: *trials,
                },
                format,
            )))
        }
    }
}
