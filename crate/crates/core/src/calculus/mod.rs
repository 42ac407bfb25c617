//! Sequent calculi, derivations, the deduction checker and cut normalization.

mod builtin;
mod check;
mod derivation;
mod matching;
mod normalize;
mod schema;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::syntax::{Fragment, Size, Theory};

pub use check::{check_deduction, CheckReport};
pub use derivation::{weaken_to, Derivation, Justification};
pub use matching::{match_instance, match_sequent};
pub use normalize::normalize_to_standard;
pub use schema::{
    parse_rules, AntecedentItem, FormulaPattern, RuleSchema, SequentPattern, SuccedentPattern,
    Substitution,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Calculus {
    pub fragment: Fragment,
    pub rules: Vec<RuleSchema>,
    /// Names of user structural rules; nonempty means amenability is assumed, not verified.
    pub user_rules: Vec<String>,
}

/// The rules of FL_w restricted to `frag`; connective-free rules are always present.
pub fn builtin_calculus(frag: Fragment) -> Calculus {
    let rules = builtin::all_rules()
        .into_iter()
        .filter(|(_, c)| c.is_none_or(|c| frag.contains(c)))
        .map(|(r, _)| r)
        .collect();
    Calculus { fragment: frag, rules, user_rules: Vec::new() }
}

impl Calculus {
    pub fn add_structural_rule(mut self, r: RuleSchema) -> Result<Calculus> {
        if !r.is_structural() {
            return Err(Error::NotStructural(r.name));
        }
        self.user_rules.push(r.name.clone());
        self.rules.push(r);
        Ok(self)
    }

    pub fn amenability_assumed(&self) -> bool {
        !self.user_rules.is_empty()
    }

    pub fn rule_names(&self) -> BTreeSet<&str> {
        self.rules.iter().map(|r| r.name.as_str()).collect()
    }

    pub fn schemas<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a RuleSchema> + 'a {
        self.rules.iter().filter(move |r| r.name == name)
    }

    /// Sum of the rule sizes.
    pub fn size(&self) -> usize {
        self.rules.iter().map(Size::size).sum()
    }
}

/// Antecedents of variables only and nonempty succedents.
pub fn is_regular(t: &Theory) -> bool {
    t.iter().all(|s| s.succedent.is_some() && s.antecedent.iter().all(|f| f.is_var()))
}
