//! One function per subcommand; each returns a report whose verdict fixes the exit code.

use std::path::{Path, PathBuf};

use flw_core::calculus::{check_deduction, parse_rules};
use flw_core::encoding::{commuted_encodings, encode_problem, theory_of};
use flw_core::gen::{random_lcs, rng, LcsCaps};
use flw_core::lcs::{parse_lcs, reach_bounded, reach_exact_witness, BoundedReach, LcsInstance};
use flw_core::saturation::{bounds_report, saturate, verdict, SaturationError, SaturationState};
use flw_core::syntax::parse_theory;
use flw_core::{builtin_calculus, normalize_to_standard, Calculus, Configuration, Derivation, Fragment, Theory};

use crate::config::Settings;
use crate::error::CliError;
use crate::report::{BoundsSummary, InputDigest, Outcome, RunReport};
use crate::xcheck::{load_corpus, run_batch, DecideScope, XcheckOptions};

pub const DEFAULT_CAP: usize = 4;
pub const DEFAULT_SEED: u64 = 42;

fn read(path: &Path, report: &mut RunReport) -> Result<String, CliError> {
    let shown = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
    report.inputs.push(InputDigest::of(&shown, &bytes));
    String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{shown}: not UTF-8")))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn parsed<T>(path: &Path, r: flw_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::input(&path.display().to_string(), e))
}

/// The requested fragment, or the connectives occurring in the inputs.
fn calculus(
    settings: &Settings,
    inferred: Fragment,
    rules: Option<&Path>,
    report: &mut RunReport,
) -> Result<Calculus, CliError> {
    let frag = settings.fragment()?.unwrap_or(inferred);
    report.detail("fragment", frag);
    let mut c = builtin_calculus(frag);
    if let Some(p) = rules {
        let text = read(p, report)?;
        for r in parsed(p, parse_rules(&text))? {
            c = parsed(p, c.add_structural_rule(r))?;
        }
        report.detail("amenability", "assumed");
    }
    Ok(c)
}

fn record_state(report: &mut RunReport, state: &SaturationState) -> Result<(), CliError> {
    report.iterations = Some(state.iteration);
    report.frontier_size = Some(state.frontier().len());
    report.norms = state.trace.norms.clone();
    report.bounds = Some(BoundsSummary::from(&bounds_report(state)?));
    report.detail("admitted", state.admitted_count());
    Ok(())
}

pub struct DecideArgs<'a> {
    pub theory: &'a Path,
    pub goals: &'a Path,
    pub rules: Option<&'a Path>,
    pub proof: Option<&'a Path>,
}

pub fn decide(args: &DecideArgs, settings: &Settings) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("decide");
    let t = parsed(args.theory, parse_theory(&read(args.theory, &mut report)?))?;
    let goals: Vec<_> = parsed(args.goals, parse_theory(&read(args.goals, &mut report)?))?.iter().cloned().collect();
    if goals.is_empty() {
        return Err(CliError::Usage(format!("{}: no goal sequent", args.goals.display())));
    }
    let inferred = goals.iter().fold(t.connectives(), |f, g| f.union(g.connectives()));
    let c = calculus(settings, inferred, args.rules, &mut report)?;
    let config = settings.saturation_config()?;
    report.detail("engine", config.engine);
    let state = match saturate(&c, &t, &goals, config) {
        Ok(s) => s,
        Err(SaturationError::BudgetExceeded { reason, state }) => {
            record_state(&mut report, &state)?;
            report.detail("budget", reason);
            report.verdict = Outcome::BudgetExceeded;
            return Ok(report);
        }
        Err(SaturationError::Input(e)) => return Err(e.into()),
    };
    record_state(&mut report, &state)?;
    let v = verdict(&state)?;
    report.verdict = if v.answer { Outcome::Yes } else { Outcome::No };
    if let Some(w) = &v.witness {
        report.detail("witness", &w.minimal);
        report.detail("goal", &w.goal);
        if let (Some(p), Some(d)) = (args.proof, &w.derivation) {
            write(p, &format!("{}\n", d.to_sexpr()))?;
            report.proof_path = Some(p.display().to_string());
        }
    }
    Ok(report)
}

fn load_derivation(
    derivation: &Path,
    theory: &Path,
    settings: &Settings,
    report: &mut RunReport,
) -> Result<(Calculus, Theory, Derivation), CliError> {
    let t = parsed(theory, parse_theory(&read(theory, report)?))?;
    let text = read(derivation, report)?;
    let c = calculus(settings, Fragment::full(), None, report)?;
    let d = parsed(derivation, Derivation::parse(&text, &c))?;
    Ok((c, t, d))
}

pub fn check(derivation: &Path, theory: &Path, require_standard: bool, settings: &Settings) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("check");
    let (c, t, d) = load_derivation(derivation, theory, settings, &mut report)?;
    let r = check_deduction(&c, &t, &d, None);
    report.detail("valid", r.valid);
    report.detail("standard", r.standard);
    report.detail("analytic", r.analytic);
    report.detail("endsequent", &d.sequent);
    for (i, v) in r.violations.iter().enumerate() {
        report.detail(&format!("violation.{i:03}"), format!("{}: {}", v.0, v.1));
    }
    let ok = r.valid && (r.standard || !require_standard);
    report.verdict = if ok { Outcome::Yes } else { Outcome::No };
    Ok(report)
}

pub fn normalize(derivation: &Path, theory: &Path, out: &Path, settings: &Settings) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("normalize");
    let (c, t, d) = load_derivation(derivation, theory, settings, &mut report)?;
    let before = check_deduction(&c, &t, &d, None);
    if !before.valid {
        return Err(CliError::Usage(format!(
            "{}: not a valid deduction: {}",
            derivation.display(),
            before.violations.iter().map(|(a, b)| format!("{a}: {b}")).collect::<Vec<_>>().join("; ")
        )));
    }
    let n = normalize_to_standard(&c, &t, &d)?;
    let after = check_deduction(&c, &t, &n, None);
    write(out, &format!("{}\n", n.to_sexpr()))?;
    report.detail("standard_before", before.standard);
    report.detail("standard_after", after.standard);
    report.detail("analytic_after", after.analytic);
    report.detail("endsequent", &n.sequent);
    report.detail("output", out.display());
    report.verdict = if after.valid && after.standard && n.sequent == d.sequent { Outcome::Yes } else { Outcome::Error };
    Ok(report)
}

pub struct LcsArgs<'a> {
    pub lcs: &'a Path,
    pub from: Option<&'a str>,
    pub to: Option<&'a str>,
}

fn load_lcs(args: &LcsArgs, report: &mut RunReport) -> Result<(LcsInstance, Configuration, Configuration), CliError> {
    let inst = parsed(args.lcs, parse_lcs(&read(args.lcs, report)?))?;
    let pick = |flag: Option<&str>, file: &Option<Configuration>, name: &str| match flag {
        Some(text) => inst.system.parse_configuration(text).map_err(|e| CliError::input(name, e)),
        None => file.clone().ok_or_else(|| CliError::Usage(format!("no {name} configuration given"))),
    };
    let u = pick(args.from, &inst.init, "--from")?;
    let v = pick(args.to, &inst.target, "--to")?;
    Ok((inst, u, v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReachMode {
    Exact,
    Bounded,
}

pub fn lcs_reach(args: &LcsArgs, mode: ReachMode, settings: &Settings) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("lcs-reach");
    let (inst, u, v) = load_lcs(args, &mut report)?;
    let cs = &inst.system;
    report.detail("from", cs.show(&u));
    report.detail("to", cs.show(&v));
    let trace = match mode {
        ReachMode::Exact => {
            report.detail("mode", "exact");
            let w = reach_exact_witness(cs, &u, &v);
            report.verdict = if w.is_some() { Outcome::Yes } else { Outcome::No };
            w
        }
        ReachMode::Bounded => {
            let cap = settings.cap.unwrap_or(DEFAULT_CAP);
            report.detail("mode", "bounded");
            report.detail("cap", cap);
            match reach_bounded(cs, &u, &v, cap, settings.node_budget) {
                BoundedReach::Yes(w) => {
                    report.verdict = Outcome::Yes;
                    Some(w)
                }
                BoundedReach::NoWithinCap => {
                    report.verdict = Outcome::NoWithinCap;
                    None
                }
                BoundedReach::BudgetExceeded => {
                    report.verdict = Outcome::BudgetExceeded;
                    None
                }
            }
        }
    };
    if let Some(w) = trace {
        let steps: Vec<String> = w.iter().map(|s| cs.show_step(s)).collect();
        report.detail("trace_length", steps.len());
        report.detail("trace", steps.join("; "));
    }
    Ok(report)
}

pub fn encode(args: &LcsArgs, out: &Path, commuted: bool) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("encode");
    let (inst, u, v) = load_lcs(args, &mut report)?;
    let cs = &inst.system;
    let theory = theory_of(cs)?;
    let goals = if commuted { commuted_encodings(cs, &u, &v)? } else { vec![encode_problem(cs, &u, &v)?] };
    std::fs::create_dir_all(out).map_err(|source| CliError::Io { path: out.display().to_string(), source })?;
    let theory_path: PathBuf = out.join("theory.flw");
    let goals_path: PathBuf = out.join("goals.flw");
    let goals = Theory::new(goals);
    write(&theory_path, &theory.to_string())?;
    write(&goals_path, &goals.to_string())?;
    let back = |p: &Path| -> Result<Theory, CliError> {
        let text = std::fs::read_to_string(p).map_err(|source| CliError::Io { path: p.display().to_string(), source })?;
        parsed(p, parse_theory(&text))
    };
    let round_trip = back(&theory_path)? == theory && back(&goals_path)? == goals;
    report.detail("canonical_goal", encode_problem(cs, &u, &v)?);
    report.detail("theory_sequents", theory.len());
    report.detail("goals", goals.len());
    report.detail("theory_file", theory_path.display());
    report.detail("goals_file", goals_path.display());
    report.detail("round_trip", round_trip);
    report.verdict = if round_trip { Outcome::Yes } else { Outcome::Error };
    Ok(report)
}

pub enum XcheckSource<'a> {
    Corpus(&'a Path),
    Random { count: usize, caps: LcsCaps },
}

pub fn xcheck(source: XcheckSource, scope: DecideScope, mutate: bool, settings: &Settings) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("xcheck");
    let instances: Vec<(String, LcsInstance)> = match source {
        XcheckSource::Corpus(dir) => load_corpus(dir)?
            .into_iter()
            .map(|(id, inst, bytes)| {
                report.inputs.push(InputDigest::of(&dir.join(format!("{id}.lcs")).display().to_string(), &bytes));
                (id, inst)
            })
            .collect(),
        XcheckSource::Random { count, caps } => {
            let seed = settings.seed.unwrap_or(DEFAULT_SEED);
            report.detail("seed", seed);
            report.detail(
                "caps",
                format!(
                    "states={} channels={} letters={} instructions={} word_len={}",
                    caps.states, caps.channels, caps.letters, caps.instructions, caps.word_len
                ),
            );
            let mut r = rng(seed);
            (0..count).map(|i| (format!("random-{i:04}"), random_lcs(&mut r, caps))).collect()
        }
    };
    let mut opts = XcheckOptions { scope, mutate, node_budget: settings.node_budget, ..XcheckOptions::default() };
    opts.cap = settings.cap.unwrap_or(DEFAULT_CAP);
    let defaults = opts.saturation.clone();
    opts.saturation = settings.saturation_config()?;
    if settings.time_budget.is_none() {
        opts.saturation.time_budget = defaults.time_budget;
    }
    report.detail("cap", opts.cap);
    report.detail("mutate", mutate);
    let summary = run_batch(&instances, &opts)?;
    for r in &summary.results {
        report.detail(&format!("instance.{}", r.id), r.line());
    }
    let bad = summary.disagreements();
    report.detail("instances", summary.results.len());
    report.detail("disagreements", bad);
    report.detail("decide_agreements", summary.decide_agreements());
    report.detail("decide_budget_exceeded", summary.decide_budget_exceeded());
    report.verdict = if bad > 0 { Outcome::No } else { Outcome::Yes };
    Ok(report)
}
