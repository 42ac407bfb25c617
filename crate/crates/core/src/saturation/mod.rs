//! Forward saturation: the frontier chain D_0 ⊆ D_1 ⊆ … of deducible Φ-sequents,
//! goal checking, proof reconstruction, a bounded brute-force oracle and the
//! size-bound instrumentation.

mod compile;
mod expand;
mod index;
mod oracle;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error as ThisError;

use crate::calculus::{check_deduction, is_regular, weaken_to, Calculus, Derivation};
use crate::error::{Error, Result};
use crate::syntax::{size_sum, subformula_closure, Formula, Sequent, Theory};
use crate::wqo::{control_check, seq_embed, Antichain, ControlledTrace, Insert};
use compile::{Binding, CompiledRule};
use index::Entry;

pub use index::{FormulaIndex, IdSeq};
pub use oracle::bounded_closure_oracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Engine {
    /// Rule instances anchored on frontier formula occurrences.
    #[default]
    Anchored,
    /// Every Φ-sequent up to `literal_bound` is generated and tested.
    Literal,
}

impl FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Engine> {
        match s {
            "anchored" => Ok(Engine::Anchored),
            "literal" => Ok(Engine::Literal),
            _ => Err(Error::InvalidInput(format!("unknown engine `{s}`"))),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Anchored => "anchored",
            Engine::Literal => "literal",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub engine: Engine,
    pub literal_bound: usize,
    pub time_budget: Duration,
    pub frontier_budget: usize,
    pub record_provenance: bool,
    pub emit_proof: bool,
    pub parallel: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            engine: Engine::Anchored,
            literal_bound: 4,
            time_budget: Duration::from_secs(60),
            frontier_budget: 1_000_000,
            record_provenance: true,
            emit_proof: false,
            parallel: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PremRef {
    Stored(usize),
    Theory(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Prov {
    Theory(usize),
    Axiom { rule: usize, binding: Binding },
    Step { rule: usize, binding: Binding, premises: Vec<PremRef> },
    Unrecorded,
}

#[derive(Clone, Debug)]
pub struct Stored {
    pub sequent: IdSeq,
    pub iteration: usize,
    prov: Prov,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Stats {
    /// Frontier cardinality after each iteration, starting with D_0.
    pub frontier_sizes: Vec<usize>,
    pub admitted: Vec<usize>,
    pub elapsed: Duration,
}

#[derive(Clone)]
pub struct SaturationState {
    pub calculus: Calculus,
    pub theory: Theory,
    pub goals: Vec<Sequent>,
    pub phi: BTreeSet<Formula>,
    pub index: FormulaIndex,
    pub iteration: usize,
    pub trace: ControlledTrace,
    pub stats: Stats,
    pub stabilized: bool,
    /// Cuts take their left premise verbatim from the theory.
    pub standard_cuts: bool,
    config: Config,
    rules: Vec<CompiledRule>,
    theory_seqs: Vec<IdSeq>,
    frontier: Antichain<Entry>,
    store: Vec<Stored>,
    fresh: HashSet<usize>,
    full_next: bool,
    started: Instant,
}

impl fmt::Debug for SaturationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SaturationState")
            .field("phi", &self.phi.len())
            .field("iteration", &self.iteration)
            .field("frontier", &self.frontier.len())
            .field("admitted", &self.store.len())
            .field("stabilized", &self.stabilized)
            .finish()
    }
}

#[derive(Debug, ThisError)]
pub enum SaturationError {
    #[error(transparent)]
    Input(#[from] Error),
    #[error("budget exceeded: {reason}")]
    BudgetExceeded { reason: String, state: Box<SaturationState> },
}

#[derive(Clone, Debug)]
pub struct Witness {
    /// The frontier element below the goal.
    pub minimal: Sequent,
    pub goal: Sequent,
    pub derivation: Option<Derivation>,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub answer: bool,
    pub witness: Option<Witness>,
    pub iterations: usize,
    pub stats: Stats,
    pub max_norm: usize,
}

fn pow_sat(base: u128, exp: u32) -> u128 {
    base.checked_pow(exp).unwrap_or(u128::MAX)
}

impl SaturationState {
    /// D_0 for `t` and Φ = subformula closure of `t` and `goals`.
    pub fn new(c: &Calculus, t: &Theory, goals: &[Sequent], config: Config) -> Result<Self> {
        if let Some(bad) = t.iter().find(|s| !is_regular(&Theory::new([(*s).clone()]))) {
            return Err(Error::NotRegular(bad.to_string()));
        }
        let phi = subformula_closure(t.iter().chain(goals));
        let index = FormulaIndex::new(&phi);
        let standard_cuts = c.user_rules.is_empty();
        let rules = c
            .rules
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let builtin_cut = r.name == "cut" && !c.user_rules.contains(&r.name);
                let theory_premises = if standard_cuts && builtin_cut { vec![0] } else { vec![] };
                CompiledRule::new(i, r, theory_premises)
            })
            .collect();
        let theory_seqs: Vec<IdSeq> =
            t.iter().map(|s| index.ids(s).expect("theory sequents are Φ-sequents")).collect();
        let mut state = SaturationState {
            calculus: c.clone(),
            theory: t.clone(),
            goals: goals.to_vec(),
            phi,
            index,
            iteration: 0,
            trace: ControlledTrace::linear(Vec::new(), 1, 1),
            stats: Stats::default(),
            stabilized: false,
            standard_cuts,
            config,
            rules,
            theory_seqs,
            frontier: Antichain::new(),
            store: Vec::new(),
            fresh: HashSet::new(),
            full_next: true,
            started: Instant::now(),
        };
        let size_r = state.size_r();
        state.trace = ControlledTrace::linear(
            Vec::new(),
            size_r.saturating_mul(size_r),
            (state.theory_size() + 1).saturating_mul(size_r),
        );
        state.build_d0();
        Ok(state)
    }

    fn build_d0(&mut self) {
        let mut cands: BTreeMap<IdSeq, Prov> = BTreeMap::new();
        for (i, s) in self.theory_seqs.iter().enumerate() {
            cands.entry(s.clone()).or_insert(Prov::Theory(i));
        }
        for rule in self.rules.iter().filter(|r| r.premises.is_empty()) {
            for (seq, binding) in expand::axiom_instances(rule, &self.index) {
                cands.entry(seq).or_insert(Prov::Axiom { rule: rule.idx, binding });
            }
        }
        let minimal: Antichain<IdSeq> = cands.keys().cloned().collect();
        let keep: BTreeSet<IdSeq> = minimal.iter().cloned().collect();
        for (seq, prov) in cands {
            if keep.contains(&seq) {
                self.admit(seq, prov);
            }
        }
        self.fresh = self.store.iter().enumerate().map(|(i, _)| i).collect();
        let max = self.store.iter().map(|s| s.sequent.ante.len()).max();
        if let Some(m) = max {
            self.trace.norms.push(m as u128);
        }
        self.stats.frontier_sizes.push(self.frontier.len());
        self.stats.admitted.push(self.store.len());
    }

    fn admit(&mut self, seq: IdSeq, prov: Prov) -> usize {
        let id = self.store.len();
        let prov = if self.config.record_provenance || matches!(prov, Prov::Theory(_)) {
            prov
        } else {
            Prov::Unrecorded
        };
        self.store.push(Stored { sequent: seq.clone(), iteration: self.iteration, prov });
        if let Insert::Inserted(removed) = self.frontier.insert(Entry { seq, id }) {
            for e in removed {
                self.fresh.remove(&e.id);
            }
        }
        id
    }

    /// Sum of the rule sizes of the calculus.
    pub fn size_r(&self) -> u128 {
        self.calculus.size() as u128
    }

    pub fn theory_size(&self) -> u128 {
        size_sum(self.theory.iter()) as u128
    }

    /// Largest antecedent length among admitted sequents.
    pub fn max_norm(&self) -> usize {
        self.store.iter().map(|s| s.sequent.ante.len()).max().unwrap_or(0)
    }

    /// Antecedent-length bound for the next admissions.
    pub fn length_bound(&self) -> u128 {
        let r = self.size_r();
        r.saturating_mul(r).saturating_mul(self.max_norm() as u128)
    }

    pub fn frontier(&self) -> Vec<Sequent> {
        let mut v: Vec<Sequent> = self.frontier.iter().map(|e| self.index.sequent(&e.seq)).collect();
        v.sort();
        v
    }

    /// Every admitted sequent with its admission iteration, in admission order.
    pub fn admitted(&self) -> impl Iterator<Item = (Sequent, usize)> + '_ {
        self.store.iter().map(|s| (self.index.sequent(&s.sequent), s.iteration))
    }

    pub fn admitted_count(&self) -> usize {
        self.store.len()
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    fn check_budget(&self) -> std::result::Result<(), String> {
        if self.started.elapsed() > self.config.time_budget {
            return Err(format!("time budget of {:?} exhausted", self.config.time_budget));
        }
        if self.frontier.len() > self.config.frontier_budget {
            return Err(format!("frontier exceeds {} elements", self.config.frontier_budget));
        }
        Ok(())
    }

    /// Computes ∂D_i and moves to D_{i+1}; returns the number of admissions.
    pub fn step(&mut self) -> std::result::Result<usize, String> {
        self.check_budget()?;
        let deadline = self.started + self.config.time_budget;
        let full = self.full_next;
        let out = match self.config.engine {
            Engine::Anchored => expand::anchored(self, full, deadline),
            Engine::Literal => expand::literal(self, deadline),
        };
        let out = out.ok_or_else(|| format!("time budget of {:?} exhausted", self.config.time_budget))?;
        self.full_next = out.bound_rejections;
        let mut cands = out.candidates;
        cands.sort();
        cands.dedup_by(|a, b| a.seq == b.seq);
        if cands.is_empty() {
            self.stabilized = true;
            return Ok(0);
        }
        self.iteration += 1;
        self.fresh.clear();
        let mut max = 0;
        let n = cands.len();
        for c in cands {
            max = max.max(c.seq.ante.len());
            let prov = Prov::Step { rule: c.rule, binding: c.binding, premises: c.premises };
            let id = self.admit(c.seq, prov);
            self.fresh.insert(id);
        }
        self.fresh.retain(|id| self.frontier.iter().any(|e| e.id == *id));
        self.trace.norms.push(max as u128);
        self.stats.frontier_sizes.push(self.frontier.len());
        self.stats.admitted.push(n);
        self.stats.elapsed = self.started.elapsed();
        self.check_budget()?;
        Ok(n)
    }

    /// Some frontier element below one of the goals, scanning goals in order.
    pub fn goal_witness(&self) -> Option<(usize, usize)> {
        let mut entries: Vec<&Entry> = self.frontier.iter().collect();
        entries.sort();
        for (gi, g) in self.goals.iter().enumerate() {
            let Some(gs) = self.index.ids(g) else { continue };
            if let Some(e) = entries.iter().find(|e| e.seq.succ == gs.succ && crate::wqo::subword_embed(&e.seq.ante, &gs.ante)) {
                return Some((e.id, gi));
            }
        }
        None
    }

    /// A deduction of the stored sequent `id` from its provenance.
    pub fn reconstruct(&self, id: usize) -> Result<Derivation> {
        self.rebuild(id, &mut HashMap::new())
    }

    fn rebuild(&self, id: usize, memo: &mut HashMap<usize, Derivation>) -> Result<Derivation> {
        if let Some(d) = memo.get(&id) {
            return Ok(d.clone());
        }
        let stored = &self.store[id];
        let d = match &stored.prov {
            Prov::Theory(i) => Derivation::theory(self.index.sequent(&self.theory_seqs[*i])),
            Prov::Axiom { rule, binding } => {
                let r = &self.rules[*rule];
                Derivation::apply(&self.calculus, &r.name, r.substitution(binding, &self.index), Vec::new())?
            }
            Prov::Step { rule, binding, premises } => {
                let r = &self.rules[*rule];
                let mut children = Vec::with_capacity(premises.len());
                for (pat, pref) in r.premises.iter().zip(premises) {
                    let inst = compile::instantiate(pat, &self.index, binding)
                        .ok_or_else(|| Error::InternalInvariantViolated("premise does not instantiate".into()))?;
                    let inst = self.index.sequent(&inst);
                    let child = match pref {
                        PremRef::Theory(i) => Derivation::theory(self.index.sequent(&self.theory_seqs[*i])),
                        PremRef::Stored(k) => weaken_to(self.rebuild(*k, memo)?, &inst.antecedent)?,
                    };
                    children.push(child);
                }
                Derivation::apply(&self.calculus, &r.name, r.substitution(binding, &self.index), children)?
            }
            Prov::Unrecorded => {
                return Err(Error::InvalidInput("provenance recording is disabled".into()));
            }
        };
        memo.insert(id, d.clone());
        Ok(d)
    }
}

/// D_0 for `t` over `phi`-sequents drawn from the goal-free closure of `t`.
pub fn build_d0(c: &Calculus, t: &Theory, goals: &[Sequent]) -> Result<Vec<Sequent>> {
    Ok(SaturationState::new(c, t, goals, Config::default())?.frontier())
}

/// Iterates expansion until ∂D_i is empty.
pub fn saturate(
    c: &Calculus,
    t: &Theory,
    goals: &[Sequent],
    config: Config,
) -> std::result::Result<SaturationState, SaturationError> {
    let mut state = SaturationState::new(c, t, goals, config)?;
    loop {
        match state.step() {
            Ok(0) => return Ok(state),
            Ok(_) => {}
            Err(reason) => {
                state.stats.elapsed = state.started.elapsed();
                return Err(SaturationError::BudgetExceeded { reason, state: Box::new(state) });
            }
        }
    }
}

/// `yes` iff some goal lies above the stabilized frontier. A `yes` carries a
/// reconstructed deduction that has been re-checked.
pub fn decide(
    c: &Calculus,
    t: &Theory,
    goals: &[Sequent],
    config: Config,
) -> std::result::Result<Verdict, SaturationError> {
    let state = saturate(c, t, goals, config)?;
    Ok(verdict(&state)?)
}

/// The verdict of a stabilized state.
pub fn verdict(state: &SaturationState) -> Result<Verdict> {
    let witness = match state.goal_witness() {
        None => None,
        Some((id, gi)) => {
            let goal = state.goals[gi].clone();
            let derivation = if state.config.record_provenance {
                Some(reconstruct_deduction(state, id, &goal)?)
            } else {
                None
            };
            Some(Witness { minimal: state.index.sequent(&state.store[id].sequent), goal, derivation })
        }
    };
    Ok(Verdict {
        answer: witness.is_some(),
        witness,
        iterations: state.iteration,
        stats: state.stats.clone(),
        max_norm: state.max_norm(),
    })
}

/// Rebuilds the stored sequent `id`, weakens it up to `goal` and re-checks the result.
pub fn reconstruct_deduction(state: &SaturationState, id: usize, goal: &Sequent) -> Result<Derivation> {
    let minimal = state.index.sequent(&state.store[id].sequent);
    if !seq_embed(&minimal, goal) {
        return Err(Error::InvalidInput(format!("{minimal} does not weaken to {goal}")));
    }
    let d = weaken_to(state.reconstruct(id)?, &goal.antecedent)?;
    let report = check_deduction(&state.calculus, &state.theory, &d, Some(&state.phi));
    if !report.valid || (state.standard_cuts && !report.standard) || d.sequent != *goal {
        return Err(Error::InternalInvariantViolated(format!(
            "reconstructed deduction of {goal} fails the checker: {:?}",
            report.violations
        )));
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundsReport {
    pub phi_size: usize,
    pub phi_limit: usize,
    pub size_r: u128,
    pub theory_size: u128,
    /// (sequent, admission iteration, norm, limit) for every admission over its limit.
    pub norm_violations: Vec<(Sequent, usize, usize, u128)>,
    pub control_ok: bool,
}

impl BoundsReport {
    pub fn passed(&self) -> bool {
        self.phi_size <= self.phi_limit && self.norm_violations.is_empty() && self.control_ok
    }
}

/// Checks the size bounds on Φ, on every admission and on the trace of
/// per-iteration maximal admissions.
pub fn bounds_report(state: &SaturationState) -> Result<BoundsReport> {
    let size_r = state.size_r();
    let theory_size = state.theory_size();
    let phi_limit = size_sum(state.goals.iter()) + theory_size as usize;
    let mut norm_violations = Vec::new();
    for s in &state.store {
        let limit = (theory_size + 1).saturating_mul(pow_sat(size_r, 2 * s.iteration as u32 + 1));
        let n = s.sequent.ante.len();
        if n as u128 >= limit {
            norm_violations.push((state.index.sequent(&s.sequent), s.iteration, n, limit));
        }
    }
    let report = BoundsReport {
        phi_size: state.phi.len(),
        phi_limit,
        size_r,
        theory_size,
        norm_violations,
        control_ok: control_check(&state.trace),
    };
    if report.passed() {
        Ok(report)
    } else {
        Err(Error::InternalInvariantViolated(format!("size bounds violated: {report:?}")))
    }
}
