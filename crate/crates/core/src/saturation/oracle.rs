//! Bounded brute-force closure, independent of the frontier machinery.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use rayon::prelude::*;

use crate::calculus::{match_sequent, AntecedentItem, Calculus, FormulaPattern, RuleSchema, Substitution, SuccedentPattern};
use crate::syntax::{Formula, Sequent, Theory};

#[derive(Default)]
struct Metavars {
    formulas: BTreeSet<(Arc<str>, bool)>,
    sequences: BTreeSet<Arc<str>>,
    succedents: BTreeSet<Arc<str>>,
}

fn collect_formula(p: &FormulaPattern, out: &mut Metavars) {
    match p {
        FormulaPattern::Meta(v) => {
            out.formulas.insert((v.clone(), false));
        }
        FormulaPattern::Prop(v) => {
            out.formulas.insert((v.clone(), true));
        }
        FormulaPattern::Const(_) => {}
        FormulaPattern::Bin(_, l, r) => {
            collect_formula(l, out);
            collect_formula(r, out);
        }
    }
}

fn premise_metavars(r: &RuleSchema) -> Metavars {
    let mut out = Metavars::default();
    for p in &r.premises {
        for item in &p.antecedent {
            match item {
                AntecedentItem::Seq(v) => {
                    out.sequences.insert(v.clone());
                }
                AntecedentItem::Formula(f) => collect_formula(f, &mut out),
            }
        }
        match &p.succedent {
            SuccedentPattern::Empty => {}
            SuccedentPattern::Meta(v) => {
                out.succedents.insert(v.clone());
            }
            SuccedentPattern::Formula(f) => collect_formula(f, &mut out),
        }
    }
    out
}

struct Closure<'a> {
    c: &'a Calculus,
    phi: &'a BTreeSet<Formula>,
    vars: Vec<Formula>,
    words: Vec<Vec<Formula>>,
    cap: usize,
    metavars: Vec<Metavars>,
}

impl Closure<'_> {
    fn is_member(&self, s: &Sequent, set: &HashSet<Sequent>) -> bool {
        s.antecedent.len() <= self.cap && s.formulas().all(|f| self.phi.contains(f)) && set.contains(s)
    }

    /// Whether some rule instance with conclusion `s` has all premises in `set`.
    fn derivable(&self, s: &Sequent, set: &HashSet<Sequent>) -> bool {
        for (r, mv) in self.c.rules.iter().zip(&self.metavars) {
            let found = match_sequent(&r.conclusion, s, &Substitution::new(), &mut |sub| {
                let mut sub = sub.clone();
                self.fill(r, mv, &mut sub, set)
            });
            if found {
                return true;
            }
        }
        false
    }

    fn fill(&self, r: &RuleSchema, mv: &Metavars, sub: &mut Substitution, set: &HashSet<Sequent>) -> bool {
        if let Some((v, prop)) = mv.formulas.iter().find(|(v, _)| !sub.formulas.contains_key(v)) {
            let pool: Vec<&Formula> = if *prop { self.vars.iter().collect() } else { self.phi.iter().collect() };
            for f in pool {
                sub.formulas.insert(v.clone(), f.clone());
                if self.fill(r, mv, sub, set) {
                    return true;
                }
            }
            sub.formulas.remove(v);
            return false;
        }
        if let Some(v) = mv.sequences.iter().find(|v| !sub.sequences.contains_key(*v)) {
            for w in &self.words {
                sub.sequences.insert(v.clone(), w.clone());
                if self.fill(r, mv, sub, set) {
                    return true;
                }
            }
            sub.sequences.remove(v);
            return false;
        }
        if let Some(v) = mv.succedents.iter().find(|v| !sub.succedents.contains_key(*v)) {
            for f in std::iter::once(None).chain(self.phi.iter().cloned().map(Some)) {
                sub.succedents.insert(v.clone(), f);
                if self.fill(r, mv, sub, set) {
                    return true;
                }
            }
            sub.succedents.remove(v);
            return false;
        }
        r.premises.iter().all(|p| p.instantiate(sub).is_some_and(|ps| self.is_member(&ps, set)))
    }
}

fn words(phi: &BTreeSet<Formula>, cap: usize) -> Vec<Vec<Formula>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<Formula>> = vec![Vec::new()];
    for _ in 0..cap {
        let mut next = Vec::new();
        for w in &layer {
            for f in phi {
                let mut w2 = w.clone();
                w2.push(f.clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Least set of Φ-sequents with antecedents of length at most `cap` that
/// contains the theory members within the cap and is closed under every rule
/// instance whose premises and conclusion all stay within Φ and the cap.
pub fn bounded_closure_oracle(c: &Calculus, t: &Theory, phi: &BTreeSet<Formula>, cap: usize) -> BTreeSet<Sequent> {
    let vars = phi.iter().filter(|f| f.is_var()).cloned().collect();
    let words = words(phi, cap);
    let cl = Closure {
        c,
        phi,
        vars,
        words: words.clone(),
        cap,
        metavars: c.rules.iter().map(premise_metavars).collect(),
    };
    let mut universe: Vec<Sequent> = Vec::new();
    for succ in std::iter::once(None).chain(phi.iter().cloned().map(Some)) {
        for w in &words {
            universe.push(Sequent::new(w.clone(), succ.clone()));
        }
    }
    let mut set: HashSet<Sequent> =
        t.iter().filter(|s| s.antecedent.len() <= cap && s.formulas().all(|f| phi.contains(f))).cloned().collect();
    loop {
        let added: Vec<Sequent> = universe
            .par_iter()
            .filter(|s| !set.contains(*s) && cl.derivable(s, &set))
            .cloned()
            .collect();
        if added.is_empty() {
            break;
        }
        set.extend(added);
    }
    set.into_iter().collect()
}
