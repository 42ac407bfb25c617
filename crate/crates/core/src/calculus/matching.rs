//! Matching rule schemas against concrete sequents.

use super::schema::{AntecedentItem, FormulaPattern, RuleSchema, SequentPattern, SuccedentPattern, Substitution};
use crate::syntax::{Formula, Sequent};

fn match_formula(p: &FormulaPattern, f: &Formula, s: &mut Substitution) -> bool {
    match p {
        FormulaPattern::Meta(v) | FormulaPattern::Prop(v) => {
            if matches!(p, FormulaPattern::Prop(_)) && !f.is_var() {
                return false;
            }
            match s.formulas.get(v) {
                Some(bound) => bound == f,
                None => {
                    s.formulas.insert(v.clone(), f.clone());
                    true
                }
            }
        }
        FormulaPattern::Const(c) => matches!(f, Formula::Const(d) if d == c),
        FormulaPattern::Bin(op, lp, rp) => match f {
            Formula::Bin(fop, l, r) if fop == op => {
                match_formula(lp, l, s) && match_formula(rp, r, s)
            }
            _ => false,
        },
    }
}

fn match_items(
    items: &[AntecedentItem],
    ante: &[Formula],
    s: &Substitution,
    k: &mut dyn FnMut(&Substitution) -> bool,
) -> bool {
    let Some((first, rest)) = items.split_first() else {
        return ante.is_empty() && k(s);
    };
    match first {
        AntecedentItem::Seq(v) => {
            if let Some(bound) = s.sequences.get(v) {
                return ante.starts_with(bound) && match_items(rest, &ante[bound.len()..], s, k);
            }
            (0..=ante.len()).any(|n| {
                let mut s2 = s.clone();
                s2.sequences.insert(v.clone(), ante[..n].to_vec());
                match_items(rest, &ante[n..], &s2, k)
            })
        }
        AntecedentItem::Formula(p) => {
            let Some((f, tail)) = ante.split_first() else {
                return false;
            };
            let mut s2 = s.clone();
            match_formula(p, f, &mut s2) && match_items(rest, tail, &s2, k)
        }
    }
}

/// Enumerates extensions of `s` matching `p` against `seq`; stops when `k` returns true.
pub fn match_sequent(
    p: &SequentPattern,
    seq: &Sequent,
    s: &Substitution,
    k: &mut dyn FnMut(&Substitution) -> bool,
) -> bool {
    let mut s2 = s.clone();
    let ok = match (&p.succedent, &seq.succedent) {
        (SuccedentPattern::Empty, None) => true,
        (SuccedentPattern::Empty, Some(_)) => false,
        (SuccedentPattern::Meta(v), succ) => match s2.succedents.get(v) {
            Some(bound) => bound == succ,
            None => {
                s2.succedents.insert(v.clone(), succ.clone());
                true
            }
        },
        (SuccedentPattern::Formula(fp), Some(f)) => match_formula(fp, f, &mut s2),
        (SuccedentPattern::Formula(_), None) => false,
    };
    ok && match_items(&p.antecedent, &seq.antecedent, &s2, k)
}

fn match_all(
    pairs: &[(&SequentPattern, &Sequent)],
    s: &Substitution,
    k: &mut dyn FnMut(&Substitution) -> bool,
) -> bool {
    match pairs.split_first() {
        None => k(s),
        Some(((p, seq), rest)) => match_sequent(p, seq, s, &mut |s2| match_all(rest, s2, k)),
    }
}

/// Some substitution instantiating `r` to exactly these premises and conclusion.
pub fn match_instance(r: &RuleSchema, premises: &[Sequent], conclusion: &Sequent) -> Option<Substitution> {
    if premises.len() != r.premises.len() {
        return None;
    }
    let mut pairs = vec![(&r.conclusion, conclusion)];
    pairs.extend(r.premises.iter().zip(premises));
    let mut found = None;
    match_all(&pairs, &Substitution::new(), &mut |s| {
        if r.instantiate(s).is_some_and(|(p, c)| p == premises && &c == conclusion) {
            found = Some(s.clone());
            true
        } else {
            false
        }
    });
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::builtin::builtin_rule;

    fn sq(s: &str) -> Sequent {
        s.parse().unwrap()
    }
    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    #[test]
    fn tensor_right() {
        let r = builtin_rule("Rfus");
        let s = match_instance(&r, &[sq("p |- p"), sq("q |- q")], &sq("p, q |- p * q")).unwrap();
        assert_eq!(s.sequences["G1"], vec![f("p")]);
        assert_eq!(s.sequences["G2"], vec![f("q")]);
        assert_eq!(s.formulas["A"], f("p"));
        assert_eq!(s.formulas["B"], f("q"));
    }

    #[test]
    fn identity_axiom() {
        let s = match_instance(&builtin_rule("id"), &[], &sq("p |- p")).unwrap();
        assert_eq!(s.formulas["p"], f("p"));
        assert!(match_instance(&builtin_rule("id"), &[], &sq("p * q |- p * q")).is_none());
        assert!(match_instance(&builtin_rule("id"), &[], &sq("p |- q")).is_none());
    }

    #[test]
    fn tensor_left_needs_tensor() {
        assert!(match_instance(&builtin_rule("Lfus"), &[sq("p, a, b |- q")], &sq("p |- q")).is_none());
        assert!(match_instance(&builtin_rule("Lfus"), &[sq("p, a, b |- q")], &sq("p, a * b |- q")).is_some());
    }

    #[test]
    fn split_search_finds_later_occurrence() {
        let r = builtin_rule("wl");
        assert!(match_instance(&r, &[sq("a, b |- c")], &sq("a, b, a |- c")).is_some());
        assert!(match_instance(&r, &[sq("a, b |- c")], &sq("b, a, a |- c")).is_none());
    }
}
