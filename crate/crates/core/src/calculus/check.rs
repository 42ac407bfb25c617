//! The deduction checker.

use std::collections::BTreeSet;

use super::derivation::{Derivation, Justification};
use super::matching::match_instance;
use super::Calculus;
use crate::syntax::{subformula_closure, Formula, Sequent, Theory};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub valid: bool,
    pub standard: bool,
    pub analytic: bool,
    /// Node path (child indices from the root, dot separated) and reason.
    pub violations: Vec<(String, String)>,
}

pub fn check_deduction(c: &Calculus, t: &Theory, d: &Derivation, phi: Option<&BTreeSet<Formula>>) -> CheckReport {
    let default_phi;
    let phi = match phi {
        Some(p) => p,
        None => {
            default_phi = subformula_closure(t.iter().chain(std::iter::once(&d.sequent)));
            &default_phi
        }
    };
    let mut st = State { valid: true, standard: true, analytic: true, violations: Vec::new() };
    walk(c, t, d, phi, &mut Vec::new(), &mut st);
    CheckReport {
        valid: st.valid,
        standard: st.valid && st.standard,
        analytic: st.analytic,
        violations: st.violations,
    }
}

struct State {
    valid: bool,
    standard: bool,
    analytic: bool,
    violations: Vec<(String, String)>,
}

fn path_string(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

fn justified(c: &Calculus, d: &Derivation) -> Result<(), String> {
    let Justification::Rule { rule, subst, children } = &d.justification else {
        return Ok(());
    };
    let premises: Vec<Sequent> = children.iter().map(|ch| ch.sequent.clone()).collect();
    let mut schemas = c.schemas(rule).peekable();
    if schemas.peek().is_none() {
        return Err(format!("rule {rule} is not in the calculus"));
    }
    for r in schemas.filter(|r| r.arity() == children.len()) {
        if r.instantiate(subst).is_some_and(|(p, s)| p == premises && s == d.sequent) {
            return Ok(());
        }
        if match_instance(r, &premises, &d.sequent).is_some() {
            return Ok(());
        }
    }
    Err(format!("not an instance of {rule}"))
}

fn walk(c: &Calculus, t: &Theory, d: &Derivation, phi: &BTreeSet<Formula>, path: &mut Vec<usize>, st: &mut State) {
    if let Some(f) = d.sequent.formulas().find(|f| !phi.contains(f)) {
        st.analytic = false;
        st.violations.push((path_string(path), format!("formula {f} outside the subformula closure")));
    }
    match &d.justification {
        Justification::Theory => {
            if !t.contains(&d.sequent) {
                st.valid = false;
                st.violations.push((path_string(path), format!("{} is not a theory sequent", d.sequent)));
            }
        }
        Justification::Rule { rule, children, .. } => {
            if let Err(reason) = justified(c, d) {
                st.valid = false;
                st.violations.push((path_string(path), reason));
            }
            if rule == "cut" && !children.first().is_some_and(Derivation::is_theory_leaf) {
                st.standard = false;
                st.violations.push((path_string(path), "cut with a non-theory left premise".to_string()));
            }
            for (i, ch) in children.iter().enumerate() {
                path.push(i);
                walk(c, t, ch, phi, path, st);
                path.pop();
            }
        }
    }
}
