//! The `robustvote` command line. Every subcommand prints one JSON report
//! on stdout; exit status is 0 for an affirmative verdict, 1 for a negative
//! one and 2 for usage or input errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::efficiency::EfficiencyMode;
use crate::enumerate::Filter;
use crate::error::{Error, Result};
use crate::io;
use crate::rational::{self, Rational};
use crate::report::{self, Report, SCHEMA};
use crate::robustness::Mode;
use crate::wmr::{SignClass, Ties};

#[derive(Debug, Parser)]
#[command(
    name = "robustvote",
    version,
    about = "Exact robustness, efficiency and weighted-majority analysis of binary voting rules"
)]
pub struct Cli {
    /// Suppress the one-line summary on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Every structural predicate of a rule, with certificates.
    Classify {
        #[arg(long)]
        rule: PathBuf,
    },
    /// Decide robustness against a set of distributions.
    ///
    /// The set is given by finitely many extreme points; other convex sets
    /// are not supported. Without --pset, all degenerate distributions.
    Certify {
        #[arg(long)]
        rule: PathBuf,
        #[arg(long)]
        pset: Option<PathBuf>,
        /// Require responsiveness of at least one half instead of above.
        #[arg(long)]
        weak: bool,
    },
    /// Responsiveness of every individual under a distribution.
    Respond {
        #[arg(long)]
        rule: PathBuf,
        #[arg(long)]
        dist: PathBuf,
    },
    /// Maximum of the weighted responsiveness sum over all rules.
    Rtf {
        /// Comma-separated rationals, e.g. `1,2,1/2`.
        #[arg(long)]
        weights: String,
        #[arg(long)]
        dist: PathBuf,
    },
    /// Look for a weighted-majority representation.
    Wmr {
        #[arg(long)]
        rule: PathBuf,
        /// free | nonneg | positive
        #[arg(long, default_value = "nonneg")]
        signs: SignClass,
        /// allowed | none
        #[arg(long, default_value = "none")]
        ties: Ties,
    },
    /// Decide efficiency under a distribution.
    Efficiency {
        #[arg(long)]
        rule: PathBuf,
        #[arg(long)]
        dist: PathBuf,
        /// strict | plain | weak
        #[arg(long, default_value = "strict")]
        mode: EfficiencyMode,
    },
    /// Compare two rules by responsiveness; affirmative when A is preferred.
    Dominance {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        dist: PathBuf,
    },
    /// Decide robustness of a random rule.
    RandomCertify {
        #[arg(long)]
        rule: PathBuf,
    },
    /// Find the first deterministic rule that beats a random rule.
    RandomDominate {
        #[arg(long)]
        rule: PathBuf,
    },
    /// List every rule at small n satisfying a comma-separated conjunction.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// e.g. `robust`, `anonymous,weakly-robust`
        #[arg(long, default_value = "all")]
        predicate: Filter,
        /// Report only the number of matches.
        #[arg(long)]
        count: bool,
        /// Worker threads; output order does not depend on it.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Lower and upper thresholds on utility heterogeneity.
    Epsilon {
        #[arg(long)]
        n: usize,
    },
    /// The utility mixture under which no individual prefers the rule.
    GammaWitness {
        #[arg(long)]
        rule: PathBuf,
    },
    /// Re-check every certificate in a report without solving an LP.
    Verify {
        #[arg(long)]
        report: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Certify { .. } => "certify",
            Command::Respond { .. } => "respond",
            Command::Rtf { .. } => "rtf",
            Command::Wmr { .. } => "wmr",
            Command::Efficiency { .. } => "efficiency",
            Command::Dominance { .. } => "dominance",
            Command::RandomCertify { .. } => "random-certify",
            Command::RandomDominate { .. } => "random-dominate",
            Command::Enumerate { .. } => "enumerate",
            Command::Epsilon { .. } => "epsilon",
            Command::GammaWitness { .. } => "gamma-witness",
            Command::Verify { .. } => "verify",
        }
    }
}

/// What a run prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn load(path: &Path) -> Result<Value> {
    io::read_json(path)
}

fn parse_weights(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .enumerate()
        .map(|(i, t)| {
            rational::parse(t).map_err(|_| {
                Error::invalid(
                    format!("weights[{i}]"),
                    format!("cannot parse rational {t:?}"),
                )
            })
        })
        .collect()
}

fn dispatch(command: &Command) -> Result<Report> {
    match command {
        Command::Classify { rule } => report::classify(load(rule)?),
        Command::Certify { rule, pset, weak } => {
            let pset = pset.as_deref().map(load).transpose()?;
            let mode = if *weak { Mode::Weak } else { Mode::Strict };
            report::certify(load(rule)?, pset, mode)
        }
        Command::Respond { rule, dist } => report::respond(load(rule)?, load(dist)?),
        Command::Rtf { weights, dist } => report::rtf(&parse_weights(weights)?, load(dist)?),
        Command::Wmr { rule, signs, ties } => report::wmr(load(rule)?, *signs, *ties),
        Command::Efficiency { rule, dist, mode } => {
            report::efficiency(load(rule)?, load(dist)?, *mode)
        }
        Command::Dominance { a, b, dist } => report::dominance(load(a)?, load(b)?, load(dist)?),
        Command::RandomCertify { rule } => report::random_certify(load(rule)?),
        Command::RandomDominate { rule } => report::random_dominate(load(rule)?),
        Command::Enumerate {
            n,
            predicate,
            count,
            jobs,
        } => report::enumerate(*n, predicate, *count, *jobs),
        Command::Epsilon { n } => report::epsilon(*n),
        Command::GammaWitness { rule } => report::gamma_witness(load(rule)?),
        Command::Verify { report } => report::verify_report(load(report)?),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::VoterCount(_) => "voter_count",
        Error::Dimension(_) => "dimension",
        Error::Invalid { .. } => "invalid",
        Error::Rational(_) => "rational",
        Error::Precondition(_) => "precondition",
        Error::Permutation(_) => "permutation",
        Error::Json(_) => "json",
        Error::Io(_) => "io",
        Error::Internal(_) => "internal",
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Runs one command. `argv` includes the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return Outcome {
                code,
                stdout,
                stderr,
            };
        }
    };
    let echo: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let name = cli.command.name();
    match dispatch(&cli.command) {
        Ok(mut rep) => {
            rep.argv = echo;
            let summary = if cli.quiet {
                String::new()
            } else {
                format!(
                    "{name}: {} ({} us)\n",
                    rep.verdict.as_deref().unwrap_or("done"),
                    rep.timing.elapsed_us
                )
            };
            Outcome {
                code: rep.exit_code(),
                stdout: pretty(&rep.to_json()),
                stderr: summary,
            }
        }
        Err(e) => Outcome {
            code: 2,
            stdout: pretty(&json!({
                "schema": SCHEMA,
                "command": name,
                "argv": echo,
                "error": {"kind": error_kind(&e), "message": e.to_string()},
            })),
            stderr: format!("robustvote {name}: {e}\n"),
        },
    }
}
