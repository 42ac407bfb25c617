//! The reduction from lossy channel system reachability to deducibility in
//! the fusion fragment with left weakening.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::calculus::{builtin_calculus, Calculus, Derivation, Substitution};
use crate::error::{Error, Result};
use crate::lcs::{ChannelSystem, Configuration, Op, Step};
use crate::syntax::{flatten, fold_fusion, is_identifier, BinOp, Connective, Formula, Fragment, Sequent, Theory};

/// Propositional variables standing for states, channel boundaries and
/// letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcsVocabulary {
    pub state_vars: Vec<Formula>,
    pub start_markers: Vec<Formula>,
    pub end_markers: Vec<Formula>,
    pub letter_vars: Vec<Formula>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    State(usize),
    Start(usize),
    End(usize),
    Letter(usize),
}

impl LcsVocabulary {
    /// `Q_<state>`, `s_<k>`, `e_<k>` and `A_<letter>`, channels numbered from 1.
    pub fn new(cs: &ChannelSystem) -> Result<Self> {
        let names = |prefix: &str, xs: Vec<String>| -> Result<Vec<Formula>> {
            xs.into_iter()
                .map(|x| {
                    let name = format!("{prefix}_{x}");
                    if is_identifier(&name) {
                        Ok(Formula::var(&name))
                    } else {
                        Err(Error::InvalidInput(format!("`{name}` is not a usable variable name")))
                    }
                })
                .collect()
        };
        let k: Vec<String> = (1..=cs.channels.len()).map(|k| k.to_string()).collect();
        let v = LcsVocabulary {
            state_vars: names("Q", cs.states.clone())?,
            start_markers: names("s", k.clone())?,
            end_markers: names("e", k)?,
            letter_vars: names("A", cs.alphabet.clone())?,
        };
        let all: BTreeSet<&Formula> = v.all().collect();
        if all.len() != v.state_vars.len() + 2 * v.start_markers.len() + v.letter_vars.len() {
            return Err(Error::InvalidInput("encoding variable names collide".into()));
        }
        Ok(v)
    }

    pub fn all(&self) -> impl Iterator<Item = &Formula> {
        self.state_vars.iter().chain(&self.start_markers).chain(&self.end_markers).chain(&self.letter_vars)
    }

    pub fn non_state(&self) -> impl Iterator<Item = &Formula> {
        self.start_markers.iter().chain(&self.end_markers).chain(&self.letter_vars)
    }

    pub fn kind(&self, name: &str) -> Option<VarKind> {
        let find = |xs: &[Formula]| xs.iter().position(|f| f.as_var() == Some(name));
        find(&self.state_vars)
            .map(VarKind::State)
            .or_else(|| find(&self.start_markers).map(VarKind::Start))
            .or_else(|| find(&self.end_markers).map(VarKind::End))
            .or_else(|| find(&self.letter_vars).map(VarKind::Letter))
    }

    pub fn is_state(&self, name: &str) -> bool {
        matches!(self.kind(name), Some(VarKind::State(_)))
    }
}

fn fusion(a: &Formula, b: &Formula) -> Formula {
    Formula::fusion(a.clone(), b.clone())
}

fn tensor_fragment() -> Fragment {
    Fragment::empty().with(Connective::Bin(BinOp::Fusion))
}

/// The calculus the encoding lives in.
pub fn encoding_calculus() -> Calculus {
    builtin_calculus(tensor_fragment())
}

fn write_axiom(v: &LcsVocabulary, from: usize, channel: usize, letter: usize, to: usize) -> Sequent {
    let e = &v.end_markers[channel];
    Sequent::new(
        vec![e.clone(), v.state_vars[from].clone()],
        Some(fusion(&v.letter_vars[letter], &fusion(e, &v.state_vars[to]))),
    )
}

fn read_axiom(v: &LcsVocabulary, from: usize, channel: usize, letter: usize, to: usize) -> Sequent {
    let s = &v.start_markers[channel];
    Sequent::new(
        vec![s.clone(), v.letter_vars[letter].clone(), v.state_vars[from].clone()],
        Some(fusion(s, &v.state_vars[to])),
    )
}

fn commutation_axioms(v: &LcsVocabulary) -> Vec<Sequent> {
    let mut out = Vec::new();
    for q in &v.state_vars {
        for r in v.non_state() {
            out.push(Sequent::new(vec![r.clone(), q.clone()], Some(fusion(q, r))));
            out.push(Sequent::new(vec![q.clone(), r.clone()], Some(fusion(r, q))));
        }
    }
    out
}

pub fn theory_of(cs: &ChannelSystem) -> Result<Theory> {
    let v = LcsVocabulary::new(cs)?;
    Ok(theory_with(cs, &v))
}

fn theory_with(cs: &ChannelSystem, v: &LcsVocabulary) -> Theory {
    let mut t: Vec<Sequent> = cs
        .instructions
        .iter()
        .map(|i| match i.op {
            Op::Write => write_axiom(v, i.from, i.channel, i.letter, i.to),
            Op::Read => read_axiom(v, i.from, i.channel, i.letter, i.to),
        })
        .collect();
    t.extend(commutation_axioms(v));
    Theory::new(t)
}

pub fn encode_conf(v: &LcsVocabulary, c: &Configuration) -> Vec<Formula> {
    let mut out = vec![v.state_vars[c.state].clone()];
    for (k, w) in c.words.iter().enumerate() {
        out.push(v.start_markers[k].clone());
        out.extend(w.iter().map(|&a| v.letter_vars[a].clone()));
        out.push(v.end_markers[k].clone());
    }
    out
}

fn goal(v: &LcsVocabulary, ante: Vec<Formula>, target: &Configuration) -> Sequent {
    let succ = fold_fusion(&encode_conf(v, target), tensor_fragment()).expect("encodings have length at least 3");
    Sequent::new(ante, Some(succ))
}

pub fn encode_problem(cs: &ChannelSystem, u: &Configuration, v: &Configuration) -> Result<Sequent> {
    let voc = LcsVocabulary::new(cs)?;
    cs.validate_configuration(u)?;
    cs.validate_configuration(v)?;
    Ok(goal(&voc, encode_conf(&voc, u), v))
}

/// The canonical goal with the state variable moved to every antecedent
/// position, sorted.
pub fn commuted_encodings(cs: &ChannelSystem, u: &Configuration, v: &Configuration) -> Result<Vec<Sequent>> {
    let canonical = encode_problem(cs, u, v)?;
    Ok(commute(&canonical))
}

fn commute(canonical: &Sequent) -> Vec<Sequent> {
    let (q, rest) = canonical.antecedent.split_first().expect("nonempty encoding");
    let mut out: BTreeSet<Sequent> = BTreeSet::new();
    for pos in 0..=rest.len() {
        let mut ante = rest.to_vec();
        ante.insert(pos, q.clone());
        out.insert(Sequent::new(ante, canonical.succedent.clone()));
    }
    out.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedInstance {
    pub theory: Theory,
    pub canonical_goal: Sequent,
    pub commuted_goals: Vec<Sequent>,
    pub vocabulary: LcsVocabulary,
}

pub fn reduce(cs: &ChannelSystem, u: &Configuration, v: &Configuration) -> Result<EncodedInstance> {
    let vocabulary = LcsVocabulary::new(cs)?;
    cs.validate_configuration(u)?;
    cs.validate_configuration(v)?;
    let canonical_goal = goal(&vocabulary, encode_conf(&vocabulary, u), v);
    Ok(EncodedInstance {
        theory: theory_with(cs, &vocabulary),
        commuted_goals: commute(&canonical_goal),
        canonical_goal,
        vocabulary,
    })
}

/// Builds deductions bottom-up by rewriting the antecedent of the current
/// endsequent.
struct Builder<'a> {
    c: Calculus,
    t: &'a Theory,
    d: Derivation,
}

impl Builder<'_> {
    fn ante(&self) -> &[Formula] {
        &self.d.sequent.antecedent
    }

    fn succ(&self) -> Option<Formula> {
        self.d.sequent.succedent.clone()
    }

    fn apply(&mut self, rule: &str, sub: Substitution, left: Option<Derivation>) -> Result<()> {
        let top = std::mem::replace(&mut self.d, Derivation::theory(Sequent::new(vec![], None)));
        let children = match left {
            Some(l) => vec![l, top],
            None => vec![top],
        };
        self.d = Derivation::apply(&self.c, rule, sub, children)?;
        Ok(())
    }

    /// Fuses the formulas at `pos` and `pos + 1`.
    fn fuse(&mut self, pos: usize) -> Result<()> {
        let a = self.ante();
        let sub = Substitution::new()
            .seq("G1", a[..pos].to_vec())
            .formula("A", a[pos].clone())
            .formula("B", a[pos + 1].clone())
            .seq("G2", a[pos + 2..].to_vec())
            .succedent("P", self.succ());
        self.apply("Lfus", sub, None)
    }

    /// Replaces the formula at `pos` by the antecedent of `axiom`, which must
    /// prove it.
    fn cut(&mut self, pos: usize, axiom: Sequent) -> Result<()> {
        if !self.t.contains(&axiom) {
            return Err(Error::InternalInvariantViolated(format!("{axiom} is not in the theory")));
        }
        let a = self.ante();
        let sub = Substitution::new()
            .seq("G1", a[..pos].to_vec())
            .formula("A", a[pos].clone())
            .seq("G2", a[pos + 1..].to_vec())
            .seq("G3", axiom.antecedent.clone())
            .succedent("P", self.succ());
        self.apply("cut", sub, Some(Derivation::theory(axiom)))
    }

    fn weaken(&mut self, pos: usize, f: Formula) -> Result<()> {
        let a = self.ante();
        let sub = Substitution::new()
            .seq("G1", a[..pos].to_vec())
            .formula("A", f)
            .seq("G2", a[pos..].to_vec())
            .succedent("P", self.succ());
        self.apply("wl", sub, None)
    }

    /// Moves the state variable at `pos` one place to the right.
    fn move_right(&mut self, pos: usize) -> Result<()> {
        let (q, r) = (self.ante()[pos].clone(), self.ante()[pos + 1].clone());
        self.fuse(pos)?;
        self.cut(pos, Sequent::new(vec![r.clone(), q.clone()], Some(fusion(&q, &r))))
    }

    /// Moves the state variable at `pos` one place to the left.
    fn move_left(&mut self, pos: usize) -> Result<()> {
        let (r, q) = (self.ante()[pos - 1].clone(), self.ante()[pos].clone());
        self.fuse(pos - 1)?;
        self.cut(pos - 1, Sequent::new(vec![q.clone(), r.clone()], Some(fusion(&r, &q))))
    }
}

fn right_fusions(c: &Calculus, fs: &[Formula]) -> Result<Derivation> {
    match fs {
        [] => Err(Error::InternalInvariantViolated("empty encoding".into())),
        [p] => Derivation::apply(c, "id", Substitution::new().formula("p", p.clone()), vec![]),
        [p, rest @ ..] => {
            let left = right_fusions(c, std::slice::from_ref(p))?;
            let right = right_fusions(c, rest)?;
            let sub = Substitution::new()
                .seq("G1", vec![p.clone()])
                .seq("G2", rest.to_vec())
                .formula("A", p.clone())
                .formula("B", fold_fusion(rest, tensor_fragment())?);
            Derivation::apply(c, "Rfus", sub, vec![left, right])
        }
    }
}

/// Offset of the marker of `channel` inside an encoding of `c`.
fn marker_position(c: &Configuration, channel: usize, end: bool) -> usize {
    let before: usize = c.words[..channel].iter().map(|w| w.len() + 2).sum();
    1 + before + if end { c.words[channel].len() + 1 } else { 0 }
}

/// A standard deduction of the canonical encoding of `(u, v)` from a lossy
/// computation `trace` leading from `u` to `v`.
pub fn compile_computation(cs: &ChannelSystem, u: &Configuration, trace: &[Step], v: &Configuration) -> Result<Derivation> {
    let voc = LcsVocabulary::new(cs)?;
    let t = theory_with(cs, &voc);
    let confs = cs.validate_trace(u, trace, v)?;
    let c = encoding_calculus();
    let mut b = Builder { d: right_fusions(&c, &encode_conf(&voc, v))?, c, t: &t };
    for (k, step) in trace.iter().enumerate().rev() {
        let before = &confs[k];
        match *step {
            Step::Lose { channel, pos } => {
                let at = marker_position(before, channel, false) + 1 + pos;
                let letter = voc.letter_vars[before.words[channel][pos]].clone();
                b.weaken(at, letter)?;
            }
            Step::Perfect(i) => {
                let instr = cs.instructions[i];
                let after = &confs[k + 1];
                let from = voc.state_vars[instr.from].clone();
                let (start, axiom, sites) = match instr.op {
                    Op::Read => (
                        marker_position(after, instr.channel, false),
                        read_axiom(&voc, instr.from, instr.channel, instr.letter, instr.to),
                        1,
                    ),
                    Op::Write => (
                        marker_position(after, instr.channel, true),
                        write_axiom(&voc, instr.from, instr.channel, instr.letter, instr.to),
                        2,
                    ),
                };
                for pos in 0..start {
                    b.move_right(pos)?;
                }
                // the marker and the new state now sit at `start - 1`, `start`
                let mut at = start - 1;
                b.fuse(at)?;
                if sites == 2 {
                    at -= 1;
                    b.fuse(at)?;
                }
                b.cut(at, axiom)?;
                let mut p = b.ante().iter().position(|f| f == &from).unwrap_or(0);
                while p > 0 {
                    b.move_left(p)?;
                    p -= 1;
                }
            }
        }
    }
    let expected = goal(&voc, encode_conf(&voc, u), v);
    if b.d.sequent != expected {
        return Err(Error::InternalInvariantViolated(format!(
            "compiled endsequent {} differs from {expected}",
            b.d.sequent
        )));
    }
    Ok(b.d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LemmaCheck {
    NonemptySuccedent,
    StateFreeSubword,
    MarkersOccur,
    StateOnLeft,
}

impl fmt::Display for LemmaCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LemmaCheck::NonemptySuccedent => "nonempty-succedent",
            LemmaCheck::StateFreeSubword => "state-free-subword",
            LemmaCheck::MarkersOccur => "markers-occur",
            LemmaCheck::StateOnLeft => "state-on-left",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaReport {
    pub checked: usize,
    pub violations: Vec<(LemmaCheck, Sequent)>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Whether `w` is a subsequence of the encoding of some configuration.
fn fits_some_encoding(voc: &LcsVocabulary, w: &[Arc<str>]) -> bool {
    let channels = voc.start_markers.len();
    // (channel, inside its markers)
    let mut cur = (0usize, false);
    for (i, x) in w.iter().enumerate() {
        match voc.kind(x) {
            Some(VarKind::State(_)) if i == 0 => {}
            Some(VarKind::Start(k)) if k > cur.0 || (k == cur.0 && !cur.1) => cur = (k, true),
            Some(VarKind::End(k)) if k >= cur.0 => cur = (k + 1, false),
            Some(VarKind::Letter(_)) if cur.0 < channels => cur.1 = true,
            _ => return false,
        }
    }
    true
}

fn flatten_all(fs: &[Formula]) -> Option<Vec<Arc<str>>> {
    let mut out = Vec::new();
    for f in fs {
        out.extend(flatten(f).ok()?);
    }
    Some(out)
}

/// Checks the structural properties that every standard deduction from an
/// encoded theory satisfies.
pub fn lemma_property_suite<'a>(d: impl IntoIterator<Item = &'a Sequent>, voc: &LcsVocabulary) -> LemmaReport {
    let mut report = LemmaReport::default();
    for s in d {
        report.checked += 1;
        let Some(succ) = &s.succedent else {
            report.violations.push((LemmaCheck::NonemptySuccedent, s.clone()));
            continue;
        };
        let (Some(ante), Ok(right)) = (flatten_all(&s.antecedent), flatten(succ)) else {
            continue;
        };
        let has_state = ante.iter().any(|x| voc.is_state(x));
        if !has_state {
            let free: Vec<&Arc<str>> = right.iter().filter(|x| !voc.is_state(x)).collect();
            let ante_refs: Vec<&Arc<str>> = ante.iter().collect();
            if !crate::wqo::subword_embed(&free, &ante_refs) {
                report.violations.push((LemmaCheck::StateFreeSubword, s.clone()));
            }
        }
        let right_nested = fold_fusion(
            &right.iter().map(|x| Formula::var(x)).collect::<Vec<_>>(),
            tensor_fragment(),
        )
        .is_ok_and(|f| &f == succ);
        if right_nested && fits_some_encoding(voc, &right) {
            let markers_ok = right
                .iter()
                .filter(|x| matches!(voc.kind(x), Some(VarKind::Start(_) | VarKind::End(_))))
                .all(|x| ante.contains(x));
            if !markers_ok {
                report.violations.push((LemmaCheck::MarkersOccur, s.clone()));
            }
        }
        let head = match succ {
            Formula::Bin(BinOp::Fusion, l, _) => l.as_var(),
            f => f.as_var(),
        };
        if head.is_some_and(|h| voc.is_state(h)) && !has_state {
            report.violations.push((LemmaCheck::StateOnLeft, s.clone()));
        }
    }
    report
}

/// Renames variables throughout a sequent.
pub fn rename(s: &Sequent, names: &BTreeMap<&str, &str>) -> Sequent {
    fn go(f: &Formula, names: &BTreeMap<&str, &str>) -> Formula {
        match f {
            Formula::Var(v) => Formula::var(names.get(v.as_ref()).copied().unwrap_or(v)),
            Formula::Bin(op, l, r) => Formula::bin(*op, go(l, names), go(r, names)),
            other => other.clone(),
        }
    }
    Sequent::new(s.antecedent.iter().map(|f| go(f, names)).collect(), s.succedent.as_ref().map(|f| go(f, names)))
}

#[cfg(test)]
mod tests;
