//! Derivation trees and their s-expression file format.

use std::fmt::Write as _;

use super::matching::match_instance;
use super::schema::Substitution;
use super::Calculus;
use crate::error::{Error, Result};
use crate::syntax::{parse_sequent, Formula, Sequent};
use crate::wqo::embedding_positions;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Justification {
    Theory,
    /// A rule node; axioms are rule nodes without children.
    Rule { rule: String, subst: Substitution, children: Vec<Derivation> },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    pub sequent: Sequent,
    pub justification: Justification,
}

impl Derivation {
    pub fn theory(s: Sequent) -> Derivation {
        Derivation { sequent: s, justification: Justification::Theory }
    }

    /// Builds a node from a substitution, checking that some schema named `rule`
    /// instantiates to the children's endsequents.
    pub fn apply(c: &Calculus, rule: &str, subst: Substitution, children: Vec<Derivation>) -> Result<Derivation> {
        for schema in c.schemas(rule).filter(|r| r.arity() == children.len()) {
            let Some((prem, concl)) = schema.instantiate(&subst) else {
                continue;
            };
            if prem.iter().zip(&children).all(|(p, d)| p == &d.sequent) {
                return Ok(Derivation {
                    sequent: concl,
                    justification: Justification::Rule { rule: rule.to_string(), subst, children },
                });
            }
        }
        Err(Error::InternalInvariantViolated(format!(
            "no instance of {rule} fits the given premises"
        )))
    }

    pub fn is_theory_leaf(&self) -> bool {
        matches!(self.justification, Justification::Theory)
    }

    pub fn rule(&self) -> Option<&str> {
        match &self.justification {
            Justification::Theory => None,
            Justification::Rule { rule, .. } => Some(rule),
        }
    }

    pub fn children(&self) -> &[Derivation] {
        match &self.justification {
            Justification::Theory => &[],
            Justification::Rule { children, .. } => children,
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(Derivation::node_count).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.children().iter().map(Derivation::height).max().unwrap_or(0)
    }

    /// Nodes in pre-order.
    pub fn nodes(&self) -> Vec<&Derivation> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            let n = out[i];
            out.extend(n.children());
            i += 1;
        }
        out
    }

    pub fn count_rule(&self, name: &str) -> usize {
        self.nodes().iter().filter(|n| n.rule() == Some(name)).count()
    }

    pub fn theory_leaves(&self) -> usize {
        self.nodes().iter().filter(|n| n.is_theory_leaf()).count()
    }

    /// `(node "SEQ" RULE child...)` with `(theory "SEQ")` leaves.
    pub fn to_sexpr(&self) -> String {
        let mut out = String::new();
        self.write_sexpr(&mut out, 0);
        out.push('\n');
        out
    }

    fn write_sexpr(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        match &self.justification {
            Justification::Theory => {
                let _ = write!(out, "{pad}(theory \"{}\")", self.sequent);
            }
            Justification::Rule { rule, children, .. } => {
                let _ = write!(out, "{pad}(node \"{}\" {rule}", self.sequent);
                for c in children {
                    out.push('\n');
                    c.write_sexpr(out, depth + 1);
                }
                out.push(')');
            }
        }
    }

    /// Parses the s-expression format, recovering substitutions by matching.
    /// Nodes that match no schema keep an empty substitution for the checker to reject.
    pub fn parse(text: &str, c: &Calculus) -> Result<Derivation> {
        let tokens = sexpr_tokens(text)?;
        let mut pos = 0;
        let d = parse_node(&tokens, &mut pos, c)?;
        if pos != tokens.len() {
            return Err(Error::parse(tokens[pos].1, "trailing input after derivation"));
        }
        Ok(d)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum STok {
    Open,
    Close,
    Str(String),
    Atom(String),
}

fn sexpr_tokens(text: &str) -> Result<Vec<(STok, usize)>> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\n' => line += 1,
            c if c.is_whitespace() => {}
            '(' => out.push((STok::Open, line)),
            ')' => out.push((STok::Close, line)),
            ';' => {
                while chars.peek().is_some_and(|c| *c != '\n') {
                    chars.next();
                }
            }
            '"' => {
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some('\n') | None => return Err(Error::parse(line, "unterminated string")),
                        Some(ch) => s.push(ch),
                    }
                }
                out.push((STok::Str(s), line));
            }
            _ => {
                let mut s = String::from(c);
                while let Some(&n) = chars.peek() {
                    if n.is_whitespace() || n == '(' || n == ')' || n == '"' {
                        break;
                    }
                    s.push(n);
                    chars.next();
                }
                out.push((STok::Atom(s), line));
            }
        }
    }
    Ok(out)
}

fn parse_node(tokens: &[(STok, usize)], pos: &mut usize, c: &Calculus) -> Result<Derivation> {
    let line = tokens.get(*pos).map_or(0, |t| t.1);
    let mut next = |what: &str| -> Result<(STok, usize)> {
        let t = tokens
            .get(*pos)
            .cloned()
            .ok_or_else(|| Error::parse(line, format!("unexpected end of input, expected {what}")))?;
        *pos += 1;
        Ok(t)
    };
    if next("`(`")?.0 != STok::Open {
        return Err(Error::parse(line, "expected `(`"));
    }
    let (kind, kline) = next("`node` or `theory`")?;
    let (seq_tok, sline) = next("a quoted sequent")?;
    let STok::Str(seq_text) = seq_tok else {
        return Err(Error::parse(sline, "expected a quoted sequent"));
    };
    let sequent = parse_sequent(&seq_text).map_err(|e| match e {
        Error::Parse { message, .. } => Error::parse(sline, message),
        other => other,
    })?;
    match kind {
        STok::Atom(k) if k == "theory" => {
            if next("`)`")?.0 != STok::Close {
                return Err(Error::parse(kline, "theory leaves take no children"));
            }
            Ok(Derivation::theory(sequent))
        }
        STok::Atom(k) if k == "node" => {
            let (rule_tok, rline) = next("a rule name")?;
            let STok::Atom(rule) = rule_tok else {
                return Err(Error::parse(rline, "expected a rule name"));
            };
            let mut children = Vec::new();
            loop {
                match tokens.get(*pos) {
                    Some((STok::Close, _)) => {
                        *pos += 1;
                        break;
                    }
                    Some(_) => children.push(parse_node(tokens, pos, c)?),
                    None => return Err(Error::parse(rline, "unclosed node")),
                }
            }
            let premises: Vec<Sequent> = children.iter().map(|d| d.sequent.clone()).collect();
            let subst = c
                .schemas(&rule)
                .find_map(|r| match_instance(r, &premises, &sequent))
                .unwrap_or_default();
            Ok(Derivation { sequent, justification: Justification::Rule { rule, subst, children } })
        }
        _ => Err(Error::parse(kline, "expected `node` or `theory`")),
    }
}

/// Extends `d` by left weakenings until its antecedent is `target`.
pub fn weaken_to(d: Derivation, target: &[Formula]) -> Result<Derivation> {
    let positions = embedding_positions(&d.sequent.antecedent, target).ok_or_else(|| {
        Error::InternalInvariantViolated(format!("{} does not weaken to {target:?}", d.sequent))
    })?;
    let succ = d.sequent.succedent.clone();
    let mut current = d;
    let mut kept = positions.into_iter().peekable();
    for (j, f) in target.iter().enumerate() {
        if kept.peek() == Some(&j) {
            kept.next();
            continue;
        }
        let ante = &current.sequent.antecedent;
        let subst = Substitution::new()
            .seq("G1", ante[..j].to_vec())
            .seq("G2", ante[j..].to_vec())
            .formula("A", f.clone())
            .succedent("P", succ.clone());
        let mut new_ante = ante.clone();
        new_ante.insert(j, f.clone());
        current = Derivation {
            sequent: Sequent::new(new_ante, succ.clone()),
            justification: Justification::Rule {
                rule: "wl".to_string(),
                subst,
                children: vec![current],
            },
        };
    }
    Ok(current)
}
