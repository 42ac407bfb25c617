//! Candidate generation for ∂D_i.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use super::compile::{
    complete_formulas, complete_succedents, exact_items, feasible, formula_positions, instantiate, match_succ,
    succ_key, weak_items, Binding, CompiledRule, FPat, Item, SPat, Segments,
};
use super::index::{Entry, FormulaIndex, IdSeq};
use super::{PremRef, SaturationState};
use crate::wqo::{minimal_common_supersequences, subword_embed, Embedding};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Candidate {
    pub seq: IdSeq,
    pub rule: usize,
    pub binding: Binding,
    pub premises: Vec<PremRef>,
}

pub(crate) struct Expansion {
    pub candidates: Vec<Candidate>,
    /// Some instance was dropped only because its antecedent exceeded the length bound.
    pub bound_rejections: bool,
}

/// Conclusions of a zero-premise rule with sequence slots empty.
pub(crate) fn axiom_instances(rule: &CompiledRule, idx: &FormulaIndex) -> Vec<(IdSeq, Binding)> {
    let mut out = Vec::new();
    let mut b = rule.empty_binding();
    let succ = [&rule.conclusion.succ];
    let positions = formula_positions(&rule.conclusion);
    complete_succedents(&succ, idx, &mut b, &mut |b| {
        complete_formulas(&positions, idx, b, &mut |b| {
            if let Some(s) = instantiate(&rule.conclusion, idx, b) {
                let mut b = b.clone();
                for v in b.s.iter_mut() {
                    v.get_or_insert_with(Vec::new);
                }
                out.push((s, b));
            }
            false
        });
        false
    });
    out
}

struct Ctx<'a> {
    state: &'a SaturationState,
    bound: u128,
    deadline: Instant,
    timed_out: &'a AtomicBool,
    bound_hit: &'a AtomicBool,
}

impl Ctx<'_> {
    fn idx(&self) -> &FormulaIndex {
        &self.state.index
    }

    fn expired(&self) -> bool {
        if self.timed_out.load(Ordering::Relaxed) {
            return true;
        }
        if Instant::now() > self.deadline {
            self.timed_out.store(true, Ordering::Relaxed);
            return true;
        }
        false
    }

    fn subsumed(&self, s: &IdSeq) -> bool {
        self.state.frontier.bucket(&s.succ).iter().any(|e| subword_embed(&e.seq.ante, &s.ante))
    }

    fn within_bound(&self, s: &IdSeq) -> bool {
        if (s.ante.len() as u128) <= self.bound {
            true
        } else {
            self.bound_hit.store(true, Ordering::Relaxed);
            false
        }
    }
}

#[derive(Clone, Copy)]
enum Source<'a> {
    Frontier(&'a Entry),
    Theory(usize, &'a IdSeq),
}

impl Source<'_> {
    fn succ(&self) -> Option<u32> {
        match self {
            Source::Frontier(e) => e.seq.succ,
            Source::Theory(_, s) => s.succ,
        }
    }
}

/// Premise sources bucketed by succedent.
#[derive(Default)]
struct Pool<'a> {
    buckets: BTreeMap<Option<u32>, Vec<Source<'a>>>,
}

impl<'a> Pool<'a> {
    fn new(sources: impl IntoIterator<Item = Source<'a>>) -> Self {
        let mut pool = Pool::default();
        for s in sources {
            pool.buckets.entry(s.succ()).or_default().push(s);
        }
        pool
    }

    fn iter(&self) -> impl Iterator<Item = &Source<'a>> {
        self.buckets.values().flatten()
    }
}

fn run<T: Send, R: Send>(parallel: bool, tasks: Vec<T>, f: impl Fn(T) -> Vec<R> + Sync + Send) -> Vec<R> {
    if parallel {
        tasks.into_par_iter().flat_map_iter(f).collect()
    } else {
        tasks.into_iter().flat_map(f).collect()
    }
}

/// Premise-driven generation: each premise is read off a frontier element (or a
/// theory sequent for theory-sourced premises) with weakening absorbed into the
/// match.
pub(crate) fn anchored(state: &SaturationState, full: bool, deadline: Instant) -> Option<Expansion> {
    let timed_out = AtomicBool::new(false);
    let bound_hit = AtomicBool::new(false);
    let ctx = Ctx { state, bound: state.length_bound(), deadline, timed_out: &timed_out, bound_hit: &bound_hit };
    let mut all: Vec<&Entry> = state.frontier.iter().collect();
    all.sort();
    let (new, old): (Vec<&Entry>, Vec<&Entry>) =
        if full { (all.clone(), Vec::new()) } else { all.iter().partition(|e| state.fresh.contains(&e.id)) };
    let theory = Pool::new(state.theory_seqs.iter().enumerate().map(|(i, s)| Source::Theory(i, s)));
    let (all, new, old) = (frontier_pool(&all), frontier_pool(&new), frontier_pool(&old));

    let mut tasks: Vec<(&CompiledRule, Vec<&Pool>, Source)> = Vec::new();
    for rule in state.rules.iter().filter(|r| !r.premises.is_empty() && !r.weakening_shaped) {
        for pivot in (0..rule.premises.len()).filter(|j| !rule.theory_premises.contains(j)) {
            let sources: Vec<&Pool> = (0..rule.premises.len())
                .map(|j| {
                    if rule.theory_premises.contains(&j) {
                        &theory
                    } else if j < pivot {
                        &old
                    } else if j == pivot {
                        &new
                    } else {
                        &all
                    }
                })
                .collect();
            for &first in sources[0].iter() {
                tasks.push((rule, sources.clone(), first));
            }
        }
    }
    let candidates = run(state.config.parallel, tasks, |(rule, sources, first)| {
        let mut w = Walk { ctx: &ctx, rule, sources, positions: all_positions(rule), out: Vec::new() };
        if ctx.expired() {
            return w.out;
        }
        let mut b = rule.empty_binding();
        let mut segs: Segments = vec![Vec::new(); rule.seq_slots()];
        let mut refs = Vec::new();
        w.premise(Some(first), 0, &mut b, &mut segs, &mut refs);
        w.out
    });
    if timed_out.load(Ordering::Relaxed) {
        return None;
    }
    Some(Expansion { candidates, bound_rejections: bound_hit.load(Ordering::Relaxed) })
}

fn frontier_pool<'a>(v: &[&'a Entry]) -> Pool<'a> {
    Pool::new(v.iter().map(|e| Source::Frontier(e)))
}

fn all_positions(rule: &CompiledRule) -> Vec<&FPat> {
    std::iter::once(&rule.conclusion).chain(&rule.premises).flat_map(formula_positions).collect()
}

struct Walk<'c, 'a> {
    ctx: &'c Ctx<'c>,
    rule: &'c CompiledRule,
    sources: Vec<&'c Pool<'a>>,
    positions: Vec<&'c FPat>,
    out: Vec<Candidate>,
}

impl Walk<'_, '_> {
    fn premise(&mut self, fixed: Option<Source>, j: usize, b: &mut Binding, segs: &mut Segments, refs: &mut Vec<PremRef>) {
        let (ctx, rule) = (self.ctx, self.rule);
        if j == rule.premises.len() {
            finish(ctx, rule, b, segs, refs, &mut self.out);
            return;
        }
        let idx = ctx.idx();
        let pat = &rule.premises[j];
        if let Some(src) = fixed {
            let mut b1 = b.clone();
            if match_succ(&pat.succ, src.succ(), idx, &mut b1) && feasible(self.positions.iter().copied(), idx, &b1) {
                self.source(src, j, &mut b1, segs, refs);
            }
            return;
        }
        let pool = self.sources[j];
        let buckets: Vec<(Option<u32>, &[Source])> = match succ_key(&pat.succ, idx, b) {
            Err(()) => return,
            Ok(Some(k)) => pool.buckets.get(&k).map(|v| (k, v.as_slice())).into_iter().collect(),
            Ok(None) => pool.buckets.iter().map(|(k, v)| (*k, v.as_slice())).collect(),
        };
        for (key, srcs) in buckets {
            let mut b1 = b.clone();
            if !match_succ(&pat.succ, key, idx, &mut b1) || !feasible(self.positions.iter().copied(), idx, &b1) {
                continue;
            }
            for &src in srcs {
                let mut b2 = b1.clone();
                self.source(src, j, &mut b2, segs, refs);
            }
        }
    }

    fn source(&mut self, src: Source, j: usize, b: &mut Binding, segs: &mut Segments, refs: &mut Vec<PremRef>) {
        let idx = self.ctx.idx();
        let pat = &self.rule.premises[j];
        let positions = &self.positions;
        match src {
            Source::Theory(i, seq) => {
                let mut found = Vec::new();
                exact_items(&pat.items, &seq.ante, idx, b, &mut |b2| {
                    if feasible(positions.iter().copied(), idx, b2) {
                        found.push(b2.clone());
                    }
                });
                refs.push(PremRef::Theory(i));
                for mut b2 in found {
                    self.premise(None, j + 1, &mut b2, segs, refs);
                }
                refs.pop();
            }
            Source::Frontier(e) => {
                let mut found = Vec::new();
                weak_items(&pat.items, &e.seq.ante, idx, b, segs, &mut |b2, s2| {
                    if feasible(positions.iter().copied(), idx, b2) {
                        found.push((b2.clone(), s2.clone()));
                    }
                });
                refs.push(PremRef::Stored(e.id));
                for (mut b2, mut s2) in found {
                    self.premise(None, j + 1, &mut b2, &mut s2, refs);
                }
                refs.pop();
            }
        }
    }
}

fn finish(ctx: &Ctx, rule: &CompiledRule, b: &Binding, segs: &Segments, refs: &[PremRef], out: &mut Vec<Candidate>) {
    let mut choices: Vec<Vec<Vec<u32>>> = Vec::with_capacity(segs.len());
    for (v, pieces) in segs.iter().enumerate() {
        let options = match &b.s[v] {
            Some(fixed) => {
                if !pieces.iter().all(|p| subword_embed(p, fixed)) {
                    return;
                }
                vec![fixed.clone()]
            }
            None if pieces.is_empty() => vec![Vec::new()],
            None if pieces.len() == 1 => vec![pieces[0].clone()],
            None => minimal_common_supersequences(pieces),
        };
        choices.push(options);
    }
    let mut pick = vec![0usize; choices.len()];
    loop {
        let mut b2 = b.clone();
        for (v, &k) in pick.iter().enumerate() {
            b2.s[v] = Some(choices[v][k].clone());
        }
        conclude(ctx, rule, &mut b2, refs, out);
        let mut v = 0;
        loop {
            if v == pick.len() {
                return;
            }
            pick[v] += 1;
            if pick[v] < choices[v].len() {
                break;
            }
            pick[v] = 0;
            v += 1;
        }
    }
}

fn premise_positions(rule: &CompiledRule) -> (Vec<&FPat>, Vec<&SPat>) {
    let f = rule.premises.iter().flat_map(formula_positions).collect();
    let s = rule.premises.iter().map(|p| &p.succ).collect();
    (f, s)
}

fn conclude(ctx: &Ctx, rule: &CompiledRule, b: &mut Binding, refs: &[PremRef], out: &mut Vec<Candidate>) {
    let idx = ctx.idx();
    let succ = [&rule.conclusion.succ];
    let positions = formula_positions(&rule.conclusion);
    let (pf, ps) = premise_positions(rule);
    complete_succedents(&succ, idx, b, &mut |b| {
        complete_formulas(&positions, idx, b, &mut |b| {
            let Some(seq) = instantiate(&rule.conclusion, idx, b) else {
                return false;
            };
            if ctx.subsumed(&seq) || !ctx.within_bound(&seq) {
                return false;
            }
            let mut done = None;
            complete_succedents(&ps, idx, b, &mut |b| {
                complete_formulas(&pf, idx, b, &mut |b| {
                    if rule.premises.iter().all(|p| instantiate(p, idx, b).is_some()) {
                        done = Some(b.clone());
                        true
                    } else {
                        false
                    }
                })
            });
            if let Some(binding) = done {
                out.push(Candidate { seq, rule: rule.idx, binding, premises: refs.to_vec() });
            }
            false
        })
    });
}

fn sequences(alphabet: u32, max_len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..alphabet {
                let mut w2: Vec<u32> = w.clone();
                w2.push(a);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Conclusion-driven generation over every Φ-sequent whose antecedent fits the
/// configured bound; premise-only slots range over Φ and over words within the bound.
pub(crate) fn literal(state: &SaturationState, deadline: Instant) -> Option<Expansion> {
    let timed_out = AtomicBool::new(false);
    let bound_hit = AtomicBool::new(false);
    let ctx = Ctx { state, bound: state.length_bound(), deadline, timed_out: &timed_out, bound_hit: &bound_hit };
    let idx = &state.index;
    let max_len = (state.config.literal_bound as u128).min(ctx.bound) as usize;
    let words = sequences(idx.len() as u32, max_len);
    let succs: Vec<Option<u32>> = std::iter::once(None).chain((0..idx.len() as u32).map(Some)).collect();
    let tasks: Vec<Option<u32>> = succs;
    let candidates = run(state.config.parallel, tasks, |succ| {
        let mut out = Vec::new();
        for w in &words {
            if ctx.expired() {
                return out;
            }
            let s = IdSeq { ante: w.clone(), succ };
            if ctx.subsumed(&s) {
                continue;
            }
            if let Some(c) = justify(&ctx, &s, &words) {
                out.push(c);
            }
        }
        out
    });
    if timed_out.load(Ordering::Relaxed) {
        return None;
    }
    Some(Expansion { candidates, bound_rejections: bound_hit.load(Ordering::Relaxed) })
}

fn premise_slots(rule: &CompiledRule, b: &Binding) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for p in &rule.premises {
        for item in &p.items {
            if let Item::Seq(v) = item {
                if b.s[*v].is_none() && !out.contains(v) {
                    out.push(*v);
                }
            }
        }
    }
    out
}

/// First rule instance (in rule order) concluding exactly `s` whose premises lie
/// above the frontier, theory-sourced premises being theory members.
fn justify(ctx: &Ctx, s: &IdSeq, words: &[Vec<u32>]) -> Option<Candidate> {
    let idx = ctx.idx();
    for rule in ctx.state.rules.iter().filter(|r| !r.premises.is_empty()) {
        let mut b = rule.empty_binding();
        if !match_succ(&rule.conclusion.succ, s.succ, idx, &mut b) {
            continue;
        }
        let mut found = None;
        exact_items(&rule.conclusion.items, &s.ante, idx, &mut b, &mut |b1| {
            if found.is_some() {
                return;
            }
            let open = premise_slots(rule, b1);
            let (pf, ps) = premise_positions(rule);
            let mut b1 = b1.clone();
            fill_words(&open, words, &mut b1, &mut |b2| {
                complete_succedents(&ps, idx, b2, &mut |b3| {
                    complete_formulas(&pf, idx, b3, &mut |b4| {
                        if let Some(refs) = premise_refs(ctx, rule, b4) {
                            let mut binding = b4.clone();
                            for v in binding.s.iter_mut() {
                                v.get_or_insert_with(Vec::new);
                            }
                            found = Some(Candidate { seq: s.clone(), rule: rule.idx, binding, premises: refs });
                            true
                        } else {
                            false
                        }
                    })
                })
            });
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

fn fill_words(open: &[usize], words: &[Vec<u32>], b: &mut Binding, k: &mut dyn FnMut(&mut Binding) -> bool) -> bool {
    let Some((&v, rest)) = open.split_first() else {
        return k(b);
    };
    for w in words {
        b.s[v] = Some(w.clone());
        if fill_words(rest, words, b, k) {
            b.s[v] = None;
            return true;
        }
    }
    b.s[v] = None;
    false
}

fn premise_refs(ctx: &Ctx, rule: &CompiledRule, b: &Binding) -> Option<Vec<PremRef>> {
    let idx = ctx.idx();
    let mut refs = Vec::with_capacity(rule.premises.len());
    for (j, p) in rule.premises.iter().enumerate() {
        let inst = instantiate(p, idx, b)?;
        if rule.theory_premises.contains(&j) {
            let i = ctx.state.theory_seqs.iter().position(|t| *t == inst)?;
            refs.push(PremRef::Theory(i));
        } else {
            let e = ctx
                .state
                .frontier
                .bucket(&inst.key())
                .iter()
                .filter(|e| subword_embed(&e.seq.ante, &inst.ante))
                .min()?;
            refs.push(PremRef::Stored(e.id));
        }
    }
    Some(refs)
}
