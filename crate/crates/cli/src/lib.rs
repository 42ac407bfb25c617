//! The `flw` command-line tool: deciding deducibility, checking and normalizing
//! deductions, lossy channel reachability, encodings and cross-validation.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod xcheck;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flw_core::gen::LcsCaps;

use commands::{DecideArgs, LcsArgs, ReachMode, XcheckSource};
use config::Settings;
use error::CliError;
use report::{Outcome, RunReport};
use xcheck::DecideScope;

#[derive(Debug, Parser)]
#[command(name = "flw", version, about = "Decide FL_w deducibility and lossy channel reachability")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML settings file; defaults to the file named by FLW_CONFIG.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Comma-separated connectives, e.g. `*,\,0,1` or `all`.
    #[arg(long, global = true)]
    pub fragment: Option<String>,
    /// Seconds.
    #[arg(long, global = true)]
    pub time_budget: Option<f64>,
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// `anchored` or `literal`.
    #[arg(long, global = true)]
    pub engine: Option<String>,
    #[arg(long, global = true)]
    pub literal_bound: Option<usize>,
    /// Visited-configuration limit for bounded reachability.
    #[arg(long, global = true)]
    pub node_budget: Option<usize>,
}

impl Common {
    fn flags(&self) -> Settings {
        Settings {
            seed: self.seed,
            fragment: self.fragment.clone(),
            time_budget: self.time_budget,
            engine: self.engine.clone(),
            literal_bound: self.literal_bound,
            cap: self.cap,
            node_budget: self.node_budget,
            ..Settings::default()
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Mode {
    Exact,
    Bounded,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Scope {
    Small,
    Always,
    Never,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether any goal sequent is deducible from the theory.
    Decide {
        #[arg(long)]
        theory: PathBuf,
        /// One or more goal sequents, one per line.
        #[arg(long)]
        goal: PathBuf,
        /// Extra structural rules.
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Write the deduction of a yes answer here.
        #[arg(long)]
        proof: Option<PathBuf>,
    },
    /// Check a deduction against a theory.
    Check {
        #[arg(long)]
        derivation: PathBuf,
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        require_standard: bool,
    },
    /// Rewrite a deduction so that every cut is standard.
    Normalize {
        #[arg(long)]
        derivation: PathBuf,
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lossy reachability between two configurations.
    LcsReach {
        #[arg(long)]
        lcs: PathBuf,
        /// Source configuration; defaults to the file's `init:`.
        #[arg(long)]
        from: Option<String>,
        /// Target configuration; defaults to the file's `target:`.
        #[arg(long)]
        to: Option<String>,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
    },
    /// Write the encoded theory and goal sequents of a reachability question.
    Encode {
        #[arg(long)]
        lcs: PathBuf,
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
        #[arg(long)]
        out: PathBuf,
        /// Emit only the canonical goal instead of every state placement.
        #[arg(long)]
        canonical_only: bool,
    },
    /// Cross-validate reachability procedures on a corpus or a random batch.
    Xcheck {
        #[arg(long, conflicts_with = "random")]
        corpus: Option<PathBuf>,
        /// Generate this many random systems from `--seed`.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 3)]
        max_states: usize,
        #[arg(long, default_value_t = 2)]
        max_channels: usize,
        #[arg(long, default_value_t = 2)]
        max_letters: usize,
        #[arg(long, default_value_t = 4)]
        max_instructions: usize,
        #[arg(long, default_value_t = 2)]
        max_word_len: usize,
        /// Which instances also go through saturation.
        #[arg(long, value_enum, default_value = "small")]
        decide: Scope,
        /// Corrupt one read axiom before deciding.
        #[arg(long)]
        mutate: bool,
    },
}

fn dispatch(cli: &Cli) -> Result<RunReport, CliError> {
    let (file, _) = Settings::load(cli.common.config.as_deref())?;
    let s = file.overlay(cli.common.flags());
    match &cli.command {
        Command::Decide { theory, goal, rules, proof } => commands::decide(
            &DecideArgs { theory, goals: goal, rules: rules.as_deref(), proof: proof.as_deref() },
            &s,
        ),
        Command::Check { derivation, theory, require_standard } => {
            commands::check(derivation, theory, *require_standard, &s)
        }
        Command::Normalize { derivation, theory, out } => commands::normalize(derivation, theory, out, &s),
        Command::LcsReach { lcs, from, to, mode } => {
            let mode = match mode {
                Mode::Exact => ReachMode::Exact,
                Mode::Bounded => ReachMode::Bounded,
            };
            commands::lcs_reach(&LcsArgs { lcs, from: from.as_deref(), to: to.as_deref() }, mode, &s)
        }
        Command::Encode { lcs, from, to, out, canonical_only } => {
            commands::encode(&LcsArgs { lcs, from: from.as_deref(), to: to.as_deref() }, out, !canonical_only)
        }
        Command::Xcheck {
            corpus,
            random,
            max_states,
            max_channels,
            max_letters,
            max_instructions,
            max_word_len,
            decide,
            mutate,
        } => {
            let source = match (corpus, random) {
                (Some(dir), _) => XcheckSource::Corpus(dir),
                (None, Some(count)) => XcheckSource::Random {
                    count: *count,
                    caps: LcsCaps {
                        states: *max_states,
                        channels: *max_channels,
                        letters: *max_letters,
                        instructions: *max_instructions,
                        word_len: *max_word_len,
                    },
                },
                (None, None) => return Err(CliError::Usage("xcheck needs --corpus or --random".into())),
            };
            let scope = match decide {
                Scope::Small => DecideScope::Small,
                Scope::Always => DecideScope::Always,
                Scope::Never => DecideScope::Never,
            };
            commands::xcheck(source, scope, *mutate, &s)
        }
    }
}

/// Runs a parsed command line, prints the report and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let started = Instant::now();
    let report = dispatch(cli).unwrap_or_else(|e| {
        let mut r = RunReport::new(command_name(&cli.command));
        r.verdict = Outcome::Error;
        r.detail("error", e);
        r
    });
    let mut report = report;
    report.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
    if cli.common.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    report.exit_code()
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Decide { .. } => "decide",
        Command::Check { .. } => "check",
        Command::Normalize { .. } => "normalize",
        Command::LcsReach { .. } => "lcs-reach",
        Command::Encode { .. } => "encode",
        Command::Xcheck { .. } => "xcheck",
    }
}
