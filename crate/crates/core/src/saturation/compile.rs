//! Rule schemas compiled to slot-indexed patterns over formula ids.

use std::collections::HashMap;
use std::sync::Arc;

use super::index::{FormulaIndex, IdSeq, Node};
use crate::calculus::{AntecedentItem, FormulaPattern, RuleSchema, SequentPattern, Substitution, SuccedentPattern};
use crate::syntax::{BinOp, Constant};

#[derive(Clone, Debug)]
pub(crate) enum FPat {
    Meta(usize),
    Prop(usize),
    Const(Constant),
    Bin(BinOp, Box<FPat>, Box<FPat>),
}

#[derive(Clone, Debug)]
pub(crate) enum Item {
    Seq(usize),
    F(FPat),
}

#[derive(Clone, Debug)]
pub(crate) enum SPat {
    Empty,
    Meta(usize),
    F(FPat),
}

#[derive(Clone, Debug)]
pub(crate) struct Pat {
    pub items: Vec<Item>,
    pub succ: SPat,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Binding {
    pub f: Vec<Option<u32>>,
    pub p: Vec<Option<Option<u32>>>,
    pub s: Vec<Option<Vec<u32>>>,
}

#[derive(Clone, Debug)]
pub(crate) struct CompiledRule {
    pub idx: usize,
    pub name: String,
    pub premises: Vec<Pat>,
    pub conclusion: Pat,
    fnames: Vec<Arc<str>>,
    pnames: Vec<Arc<str>>,
    snames: Vec<Arc<str>>,
    /// Conclusions always lie above the premise, so no admission can come from it.
    pub weakening_shaped: bool,
    /// Premise indices that must be theory members verbatim.
    pub theory_premises: Vec<usize>,
}

#[derive(Default)]
struct Slots {
    f: HashMap<Arc<str>, usize>,
    p: HashMap<Arc<str>, usize>,
    s: HashMap<Arc<str>, usize>,
    fnames: Vec<Arc<str>>,
    pnames: Vec<Arc<str>>,
    snames: Vec<Arc<str>>,
}

fn slot(map: &mut HashMap<Arc<str>, usize>, names: &mut Vec<Arc<str>>, v: &Arc<str>) -> usize {
    *map.entry(v.clone()).or_insert_with(|| {
        names.push(v.clone());
        names.len() - 1
    })
}

impl Slots {
    fn formula(&mut self, p: &FormulaPattern) -> FPat {
        match p {
            FormulaPattern::Meta(v) => FPat::Meta(slot(&mut self.f, &mut self.fnames, v)),
            FormulaPattern::Prop(v) => FPat::Prop(slot(&mut self.f, &mut self.fnames, v)),
            FormulaPattern::Const(c) => FPat::Const(*c),
            FormulaPattern::Bin(op, l, r) => FPat::Bin(*op, Box::new(self.formula(l)), Box::new(self.formula(r))),
        }
    }

    fn sequent(&mut self, p: &SequentPattern) -> Pat {
        let items = p
            .antecedent
            .iter()
            .map(|i| match i {
                AntecedentItem::Seq(v) => Item::Seq(slot(&mut self.s, &mut self.snames, v)),
                AntecedentItem::Formula(f) => Item::F(self.formula(f)),
            })
            .collect();
        let succ = match &p.succedent {
            SuccedentPattern::Empty => SPat::Empty,
            SuccedentPattern::Meta(v) => SPat::Meta(slot(&mut self.p, &mut self.pnames, v)),
            SuccedentPattern::Formula(f) => SPat::F(self.formula(f)),
        };
        Pat { items, succ }
    }
}

fn weakening_shaped(r: &RuleSchema) -> bool {
    let [p] = r.premises.as_slice() else {
        return false;
    };
    p.succedent == r.conclusion.succedent && crate::wqo::subword_embed(&p.antecedent, &r.conclusion.antecedent)
}

impl CompiledRule {
    pub fn new(idx: usize, r: &RuleSchema, theory_premises: Vec<usize>) -> Self {
        let mut slots = Slots::default();
        let conclusion = slots.sequent(&r.conclusion);
        let premises = r.premises.iter().map(|p| slots.sequent(p)).collect();
        CompiledRule {
            idx,
            name: r.name.clone(),
            premises,
            conclusion,
            fnames: slots.fnames,
            pnames: slots.pnames,
            snames: slots.snames,
            weakening_shaped: weakening_shaped(r),
            theory_premises,
        }
    }

    pub fn empty_binding(&self) -> Binding {
        Binding {
            f: vec![None; self.fnames.len()],
            p: vec![None; self.pnames.len()],
            s: vec![None; self.snames.len()],
        }
    }

    pub fn seq_slots(&self) -> usize {
        self.snames.len()
    }

    pub fn substitution(&self, b: &Binding, idx: &FormulaIndex) -> Substitution {
        let mut out = Substitution::new();
        for (name, v) in self.fnames.iter().zip(&b.f) {
            if let Some(id) = v {
                out.formulas.insert(name.clone(), idx.formula(*id).clone());
            }
        }
        for (name, v) in self.pnames.iter().zip(&b.p) {
            if let Some(succ) = v {
                out.succedents.insert(name.clone(), succ.map(|id| idx.formula(id).clone()));
            }
        }
        for (name, v) in self.snames.iter().zip(&b.s) {
            let seq = v.as_deref().unwrap_or(&[]);
            out.sequences.insert(name.clone(), seq.iter().map(|&id| idx.formula(id).clone()).collect());
        }
        out
    }
}

pub(crate) fn match_f(p: &FPat, id: u32, idx: &FormulaIndex, b: &mut Binding) -> bool {
    match p {
        FPat::Meta(v) | FPat::Prop(v) => {
            if matches!(p, FPat::Prop(_)) && idx.node(id) != Node::Var {
                return false;
            }
            match b.f[*v] {
                Some(bound) => bound == id,
                None => {
                    b.f[*v] = Some(id);
                    true
                }
            }
        }
        FPat::Const(c) => idx.node(id) == Node::Const(*c),
        FPat::Bin(op, lp, rp) => match idx.node(id) {
            Node::Bin(o, l, r) if o == *op => match_f(lp, l, idx, b) && match_f(rp, r, idx, b),
            _ => false,
        },
    }
}

/// The id of `p` under `b`; `None` when a slot is unbound or the formula is outside Φ.
pub(crate) fn inst_f(p: &FPat, idx: &FormulaIndex, b: &Binding) -> Option<u32> {
    match p {
        FPat::Meta(v) | FPat::Prop(v) => b.f[*v],
        FPat::Const(c) => idx.constant(*c),
        FPat::Bin(op, l, r) => idx.bin(*op, inst_f(l, idx, b)?, inst_f(r, idx, b)?),
    }
}

/// `Err` when no extension of `b` puts `p` inside Φ, otherwise the id of `p`
/// if already determined.
fn probe(p: &FPat, idx: &FormulaIndex, b: &Binding) -> Result<Option<u32>, ()> {
    match p {
        FPat::Meta(v) | FPat::Prop(v) => Ok(b.f[*v]),
        FPat::Const(c) => idx.constant(*c).map(Some).ok_or(()),
        FPat::Bin(op, l, r) => {
            let (l, r) = (probe(l, idx, b)?, probe(r, idx, b)?);
            if !idx.has_bin(*op, l, r) {
                return Err(());
            }
            Ok(l.zip(r).and_then(|(l, r)| idx.bin(*op, l, r)))
        }
    }
}

/// Whether every formula position of `pats` can still land inside Φ.
pub(crate) fn feasible<'a>(pats: impl IntoIterator<Item = &'a FPat>, idx: &FormulaIndex, b: &Binding) -> bool {
    pats.into_iter().all(|p| probe(p, idx, b).is_ok())
}

/// The succedent `p` denotes under `b`: `Some(key)` when determined, `None`
/// when open, `Err` when impossible.
pub(crate) fn succ_key(p: &SPat, idx: &FormulaIndex, b: &Binding) -> Result<Option<Option<u32>>, ()> {
    match p {
        SPat::Empty => Ok(Some(None)),
        SPat::Meta(v) => Ok(b.p[*v]),
        SPat::F(f) => Ok(probe(f, idx, b)?.map(Some)),
    }
}

pub(crate) fn match_succ(p: &SPat, succ: Option<u32>, idx: &FormulaIndex, b: &mut Binding) -> bool {
    match (p, succ) {
        (SPat::Empty, None) => true,
        (SPat::Empty, Some(_)) | (SPat::F(_), None) => false,
        (SPat::Meta(v), s) => match b.p[*v] {
            Some(bound) => bound == s,
            None => {
                b.p[*v] = Some(s);
                true
            }
        },
        (SPat::F(fp), Some(id)) => match_f(fp, id, idx, b),
    }
}

/// Segments collected per sequence slot while matching premises.
pub(crate) type Segments = Vec<Vec<Vec<u32>>>;

/// All ways of reading `ante` as a subword of an instance of `items`: sequence
/// slots take contiguous segments, and formula items either consume the next
/// element or are left for weakening.
pub(crate) fn weak_items(
    items: &[Item],
    ante: &[u32],
    idx: &FormulaIndex,
    b: &mut Binding,
    segs: &mut Segments,
    out: &mut dyn FnMut(&Binding, &Segments),
) {
    let Some((first, rest)) = items.split_first() else {
        if ante.is_empty() {
            out(b, segs);
        }
        return;
    };
    match first {
        Item::Seq(v) => {
            for n in 0..=ante.len() {
                segs[*v].push(ante[..n].to_vec());
                weak_items(rest, &ante[n..], idx, b, segs, out);
                segs[*v].pop();
            }
        }
        Item::F(p) => {
            weak_items(rest, ante, idx, b, segs, out);
            if let Some((&x, tail)) = ante.split_first() {
                let saved = b.clone();
                if match_f(p, x, idx, b) {
                    weak_items(rest, tail, idx, b, segs, out);
                }
                *b = saved;
            }
        }
    }
}

/// Exact matching of `items` against `ante`, binding sequence slots directly.
pub(crate) fn exact_items(
    items: &[Item],
    ante: &[u32],
    idx: &FormulaIndex,
    b: &mut Binding,
    out: &mut dyn FnMut(&Binding),
) {
    let Some((first, rest)) = items.split_first() else {
        if ante.is_empty() {
            out(b);
        }
        return;
    };
    match first {
        Item::Seq(v) => {
            if let Some(bound) = b.s[*v].clone() {
                if ante.starts_with(&bound) {
                    exact_items(rest, &ante[bound.len()..], idx, b, out);
                }
                return;
            }
            for n in 0..=ante.len() {
                b.s[*v] = Some(ante[..n].to_vec());
                exact_items(rest, &ante[n..], idx, b, out);
            }
            b.s[*v] = None;
        }
        Item::F(p) => {
            if let Some((&x, tail)) = ante.split_first() {
                let saved = b.clone();
                if match_f(p, x, idx, b) {
                    exact_items(rest, tail, idx, b, out);
                }
                *b = saved;
            }
        }
    }
}

/// Extends `b` so that every formula position of `pats` instantiates inside Φ,
/// enumerating unbound slots over Φ (variables only for propositional slots).
pub(crate) fn complete_formulas(
    pats: &[&FPat],
    idx: &FormulaIndex,
    b: &mut Binding,
    out: &mut dyn FnMut(&mut Binding) -> bool,
) -> bool {
    let Some((first, rest)) = pats.split_first() else {
        return out(b);
    };
    if inst_f(first, idx, b).is_some() {
        return complete_formulas(rest, idx, b, out);
    }
    if !has_unbound(first, b) {
        return false;
    }
    let candidates: Vec<u32> = match first {
        FPat::Prop(_) => idx.vars().to_vec(),
        _ => (0..idx.len() as u32).collect(),
    };
    for id in candidates {
        let saved = b.clone();
        if match_f(first, id, idx, b) && complete_formulas(rest, idx, b, out) {
            *b = saved;
            return true;
        }
        *b = saved;
    }
    false
}

fn has_unbound(p: &FPat, b: &Binding) -> bool {
    match p {
        FPat::Meta(v) | FPat::Prop(v) => b.f[*v].is_none(),
        FPat::Const(_) => false,
        FPat::Bin(_, l, r) => has_unbound(l, b) || has_unbound(r, b),
    }
}

/// Binds every unbound succedent slot of `pats` to empty or to a member of Φ.
pub(crate) fn complete_succedents(
    pats: &[&SPat],
    idx: &FormulaIndex,
    b: &mut Binding,
    out: &mut dyn FnMut(&mut Binding) -> bool,
) -> bool {
    let Some((first, rest)) = pats.split_first() else {
        return out(b);
    };
    match first {
        SPat::Meta(v) if b.p[*v].is_none() => {
            for succ in std::iter::once(None).chain((0..idx.len() as u32).map(Some)) {
                b.p[*v] = Some(succ);
                if complete_succedents(rest, idx, b, out) {
                    b.p[*v] = None;
                    return true;
                }
            }
            b.p[*v] = None;
            false
        }
        _ => complete_succedents(rest, idx, b, out),
    }
}

pub(crate) fn formula_positions(p: &Pat) -> Vec<&FPat> {
    let mut out: Vec<&FPat> = p
        .items
        .iter()
        .filter_map(|i| match i {
            Item::F(f) => Some(f),
            Item::Seq(_) => None,
        })
        .collect();
    if let SPat::F(f) = &p.succ {
        out.push(f);
    }
    out
}

/// Instance of `p` under a binding whose relevant slots are bound; unbound
/// sequence slots read as empty.
pub(crate) fn instantiate(p: &Pat, idx: &FormulaIndex, b: &Binding) -> Option<IdSeq> {
    let mut ante = Vec::new();
    for item in &p.items {
        match item {
            Item::Seq(v) => ante.extend_from_slice(b.s[*v].as_deref().unwrap_or(&[])),
            Item::F(f) => ante.push(inst_f(f, idx, b)?),
        }
    }
    let succ = match &p.succ {
        SPat::Empty => None,
        SPat::Meta(v) => b.p[*v]?,
        SPat::F(f) => Some(inst_f(f, idx, b)?),
    };
    Some(IdSeq { ante, succ })
}
