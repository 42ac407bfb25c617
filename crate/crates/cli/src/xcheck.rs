//! Four-way cross-validation of lossy reachability: bounded search, exact
//! backward search, saturation on the encoded problem, and compiled deductions.

use std::path::Path;
use std::time::Duration;

use flw_core::calculus::check_deduction;
use flw_core::encoding::{compile_computation, encoding_calculus, lemma_property_suite, reduce, LcsVocabulary, VarKind};
use flw_core::lcs::{parse_lcs, reach_bounded, reach_exact_witness, BoundedReach, LcsInstance};
use flw_core::saturation::{bounds_report, saturate, verdict, Config, SaturationError, SaturationState};
use flw_core::{ChannelSystem, Formula, Sequent, Theory};
use rayon::prelude::*;

use crate::error::CliError;
use crate::report::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecideScope {
    /// Only systems with one channel, one letter, at most two states and two instructions.
    Small,
    Always,
    Never,
}

#[derive(Clone, Debug)]
pub struct XcheckOptions {
    pub cap: usize,
    pub node_budget: Option<usize>,
    pub scope: DecideScope,
    pub saturation: Config,
    /// Corrupt one read axiom of every encoded theory before deciding.
    pub mutate: bool,
}

impl Default for XcheckOptions {
    fn default() -> Self {
        XcheckOptions {
            cap: 4,
            node_budget: None,
            scope: DecideScope::Small,
            saturation: Config { time_budget: Duration::from_secs(30), ..Config::default() },
            mutate: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecideOutcome {
    Skipped,
    Yes,
    No,
    BudgetExceeded,
}

impl DecideOutcome {
    fn as_str(self) -> &'static str {
        match self {
            DecideOutcome::Skipped => "skipped",
            DecideOutcome::Yes => "yes",
            DecideOutcome::No => "no",
            DecideOutcome::BudgetExceeded => "budget_exceeded",
        }
    }
}

#[derive(Clone, Debug)]
pub struct InstanceResult {
    pub id: String,
    pub bounded: Outcome,
    pub exact: bool,
    pub decide: DecideOutcome,
    /// Whether the compiled deduction of the exact witness checked valid and standard.
    pub compiled: Option<bool>,
    pub lemma_checked: usize,
    pub bounds_passed: Option<bool>,
    pub failures: Vec<String>,
}

impl InstanceResult {
    pub fn agrees(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn line(&self) -> String {
        let compiled = match self.compiled {
            None => "-",
            Some(true) => "ok",
            Some(false) => "failed",
        };
        let mut s = format!(
            "bounded={} exact={} decide={} compiled={} lemma_checked={}",
            self.bounded.as_str(),
            if self.exact { "yes" } else { "no" },
            self.decide.as_str(),
            compiled,
            self.lemma_checked
        );
        if !self.failures.is_empty() {
            s.push_str(&format!(" FAIL[{}]", self.failures.join("; ")));
        }
        s
    }
}

pub fn small_enough(cs: &ChannelSystem) -> bool {
    cs.channels.len() == 1 && cs.alphabet.len() == 1 && cs.states.len() <= 2 && cs.instructions.len() <= 2
}

/// Redirects the first read axiom `s, A, Q_i ⊢ s ⊗ Q_j` to a different target
/// state, or removes it when the system has a single state.
pub fn mutate_theory(t: &Theory, voc: &LcsVocabulary) -> Option<Theory> {
    let is_read = |s: &Sequent| {
        let kinds: Vec<Option<VarKind>> = s.antecedent.iter().map(|f| f.as_var().and_then(|v| voc.kind(v))).collect();
        matches!(kinds.as_slice(), [Some(VarKind::Start(_)), Some(VarKind::Letter(_)), Some(VarKind::State(_))])
    };
    let victim = t.iter().find(|s| is_read(s))?.clone();
    let Some(Formula::Bin(op, marker, target)) = &victim.succedent else {
        return None;
    };
    let replacement = voc.state_vars.iter().find(|q| *q != target.as_ref()).map(|q| {
        Sequent::new(victim.antecedent.clone(), Some(Formula::bin(*op, marker.as_ref().clone(), q.clone())))
    });
    Some(Theory::new(t.iter().filter(|s| **s != victim).cloned().chain(replacement)))
}

fn run_saturation(
    theory: &Theory,
    goals: &[Sequent],
    config: &Config,
) -> Result<(Option<bool>, Box<SaturationState>), CliError> {
    let c = encoding_calculus();
    match saturate(&c, theory, goals, config.clone()) {
        Ok(state) => {
            let v = verdict(&state)?;
            Ok((Some(v.answer), Box::new(state)))
        }
        Err(SaturationError::BudgetExceeded { state, .. }) => Ok((None, state)),
        Err(SaturationError::Input(e)) => Err(e.into()),
    }
}

pub fn check_instance(id: &str, inst: &LcsInstance, opts: &XcheckOptions) -> Result<InstanceResult, CliError> {
    let cs = &inst.system;
    let missing = || CliError::Usage(format!("{id}: instance needs both init and target"));
    let u = inst.init.as_ref().ok_or_else(missing)?;
    let v = inst.target.as_ref().ok_or_else(missing)?;
    let mut failures = Vec::new();

    let bounded = reach_bounded(cs, u, v, opts.cap, opts.node_budget);
    let witness = reach_exact_witness(cs, u, v);
    let exact = witness.is_some();
    let bounded_outcome = match &bounded {
        BoundedReach::Yes(steps) => {
            if cs.validate_trace(u, steps, v).is_err() {
                failures.push("bounded trace does not replay".to_string());
            }
            if !exact {
                failures.push("bounded yes but exact no".to_string());
            }
            Outcome::Yes
        }
        BoundedReach::NoWithinCap => Outcome::NoWithinCap,
        BoundedReach::BudgetExceeded => Outcome::BudgetExceeded,
    };

    let mut compiled = None;
    if let Some(w) = &witness {
        match cs.validate_trace(u, w, v) {
            Err(e) => failures.push(format!("exact trace does not replay: {e}")),
            Ok(confs) => {
                let sufficient = confs.iter().flat_map(|c| c.words.iter().map(Vec::len)).max().unwrap_or(0);
                if matches!(reach_bounded(cs, u, v, sufficient, opts.node_budget), BoundedReach::NoWithinCap) {
                    failures.push(format!("exact yes but bounded no at sufficient cap {sufficient}"));
                }
            }
        }
        let ok = match (compile_computation(cs, u, w, v), reduce(cs, u, v)) {
            (Ok(d), Ok(enc)) => {
                let r = check_deduction(&encoding_calculus(), &enc.theory, &d, None);
                r.valid && r.standard && d.sequent == enc.canonical_goal
            }
            _ => false,
        };
        if !ok {
            failures.push("compiled deduction rejected".to_string());
        }
        compiled = Some(ok);
    }

    let run_decide = match opts.scope {
        DecideScope::Small => small_enough(cs),
        DecideScope::Always => true,
        DecideScope::Never => false,
    };
    let mut decide = DecideOutcome::Skipped;
    let mut lemma_checked = 0;
    let mut bounds_passed = None;
    if run_decide {
        let enc = reduce(cs, u, v)?;
        let theory = if opts.mutate {
            mutate_theory(&enc.theory, &enc.vocabulary).unwrap_or_else(|| enc.theory.clone())
        } else {
            enc.theory.clone()
        };
        let (answer, state) = run_saturation(&theory, &enc.commuted_goals, &opts.saturation)?;
        decide = match answer {
            Some(true) => DecideOutcome::Yes,
            Some(false) => DecideOutcome::No,
            None => DecideOutcome::BudgetExceeded,
        };
        if let Some(a) = answer {
            if a != exact {
                failures.push(format!("decide {} but exact {}", yn(a), yn(exact)));
            }
        }
        let admitted: Vec<Sequent> = state.admitted().map(|(s, _)| s).collect();
        let lemmas = lemma_property_suite(&admitted, &enc.vocabulary);
        lemma_checked = lemmas.checked;
        for (check, s) in lemmas.violations.iter().take(3) {
            failures.push(format!("{check} violated by {s}"));
        }
        let b = bounds_report(&state)?;
        bounds_passed = Some(b.passed());
        if !b.passed() {
            failures.push("bounds report failed".to_string());
        }
    }

    Ok(InstanceResult {
        id: id.to_string(),
        bounded: bounded_outcome,
        exact,
        decide,
        compiled,
        lemma_checked,
        bounds_passed,
        failures,
    })
}

fn yn(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Clone, Debug, Default)]
pub struct Summary {
    /// Sorted by instance id.
    pub results: Vec<InstanceResult>,
}

impl Summary {
    pub fn disagreements(&self) -> usize {
        self.results.iter().filter(|r| !r.agrees()).count()
    }

    /// Instances where saturation finished and matched the exact answer.
    pub fn decide_agreements(&self) -> usize {
        self.results
            .iter()
            .filter(|r| r.agrees() && matches!(r.decide, DecideOutcome::Yes | DecideOutcome::No))
            .count()
    }

    pub fn decide_budget_exceeded(&self) -> usize {
        self.results.iter().filter(|r| r.decide == DecideOutcome::BudgetExceeded).count()
    }
}

pub fn run_batch(instances: &[(String, LcsInstance)], opts: &XcheckOptions) -> Result<Summary, CliError> {
    let mut results = instances
        .par_iter()
        .map(|(id, inst)| check_instance(id, inst, opts))
        .collect::<Result<Vec<_>, _>>()?;
    results.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(Summary { results })
}

/// Every `*.lcs` file in `dir`, keyed by file stem.
pub fn load_corpus(dir: &Path) -> Result<Vec<(String, LcsInstance, Vec<u8>)>, CliError> {
    let io = |source| CliError::Io { path: dir.display().to_string(), source };
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "lcs"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for p in paths {
        let shown = p.display().to_string();
        let bytes = std::fs::read(&p).map_err(|source| CliError::Io { path: shown.clone(), source })?;
        let inst = parse_lcs(&String::from_utf8_lossy(&bytes)).map_err(|e| CliError::input(&shown, e))?;
        let id = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or(shown);
        out.push((id, inst, bytes));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const READ: &str = "states: q1 q2\nchannels: c\nalphabet: a\nq1 c a ? q2\ninit: q1 : a\ntarget: q2 :\n";

    #[test]
    fn read_instance_agrees() {
        let inst = parse_lcs(READ).unwrap();
        let r = check_instance("read", &inst, &XcheckOptions::default()).unwrap();
        assert!(r.agrees(), "{}", r.line());
        assert_eq!((r.bounded, r.exact, r.decide), (Outcome::Yes, true, DecideOutcome::Yes));
        assert_eq!(r.compiled, Some(true));
        assert!(r.lemma_checked > 0);
    }

    #[test]
    fn mutation_is_detected() {
        let inst = parse_lcs(READ).unwrap();
        let opts = XcheckOptions { mutate: true, ..XcheckOptions::default() };
        let r = check_instance("read", &inst, &opts).unwrap();
        assert_eq!(r.decide, DecideOutcome::No);
        assert!(!r.agrees());
    }

    #[test]
    fn mutation_changes_one_read_axiom() {
        let inst = parse_lcs(READ).unwrap();
        let enc = reduce(&inst.system, inst.init.as_ref().unwrap(), inst.target.as_ref().unwrap()).unwrap();
        let m = mutate_theory(&enc.theory, &enc.vocabulary).unwrap();
        assert_eq!(m.len(), enc.theory.len());
        assert!(m.contains(&"s_1, A_a, Q_q1 |- s_1 * Q_q1".parse().unwrap()));
        assert!(!m.contains(&"s_1, A_a, Q_q1 |- s_1 * Q_q2".parse().unwrap()));
    }
}
