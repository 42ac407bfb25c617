//! Rule schemas, sequent patterns and substitutions.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::syntax::{BinOp, Connective, Constant, Formula, Fragment, Lexer, Sequent, Size, Token};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum FormulaPattern {
    /// Formula-metavariable.
    Meta(Arc<str>),
    /// Propositional-metavariable; instantiates to variables only.
    Prop(Arc<str>),
    Const(Constant),
    Bin(BinOp, Box<FormulaPattern>, Box<FormulaPattern>),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum AntecedentItem {
    Seq(Arc<str>),
    Formula(FormulaPattern),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SuccedentPattern {
    Empty,
    /// Succedent-metavariable: empty or one formula.
    Meta(Arc<str>),
    Formula(FormulaPattern),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SequentPattern {
    pub antecedent: Vec<AntecedentItem>,
    pub succedent: SuccedentPattern,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RuleSchema {
    pub name: String,
    pub premises: Vec<SequentPattern>,
    pub conclusion: SequentPattern,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Substitution {
    pub sequences: BTreeMap<Arc<str>, Vec<Formula>>,
    pub formulas: BTreeMap<Arc<str>, Formula>,
    pub succedents: BTreeMap<Arc<str>, Option<Formula>>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn seq(mut self, name: &str, value: Vec<Formula>) -> Self {
        self.sequences.insert(Arc::from(name), value);
        self
    }

    pub fn formula(mut self, name: &str, value: Formula) -> Self {
        self.formulas.insert(Arc::from(name), value);
        self
    }

    pub fn succedent(mut self, name: &str, value: Option<Formula>) -> Self {
        self.succedents.insert(Arc::from(name), value);
        self
    }
}

impl FormulaPattern {
    pub fn instantiate(&self, s: &Substitution) -> Option<Formula> {
        match self {
            FormulaPattern::Meta(v) | FormulaPattern::Prop(v) => s.formulas.get(v).cloned(),
            FormulaPattern::Const(c) => Some(Formula::Const(*c)),
            FormulaPattern::Bin(op, l, r) => {
                Some(Formula::bin(*op, l.instantiate(s)?, r.instantiate(s)?))
            }
        }
    }

    fn connectives(&self) -> Fragment {
        match self {
            FormulaPattern::Meta(_) | FormulaPattern::Prop(_) => Fragment::empty(),
            FormulaPattern::Const(c) => Fragment::empty().with(Connective::Const(*c)),
            FormulaPattern::Bin(op, l, r) => {
                l.connectives().union(r.connectives()).with(Connective::Bin(*op))
            }
        }
    }

    fn size(&self) -> usize {
        match self {
            FormulaPattern::Bin(_, l, r) => 3 + l.size() + r.size(),
            _ => 1,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
        match self {
            FormulaPattern::Meta(v) | FormulaPattern::Prop(v) => f.write_str(v),
            FormulaPattern::Const(c) => f.write_str(c.token()),
            FormulaPattern::Bin(op, l, r) => {
                if nested {
                    f.write_str("(")?;
                }
                l.write(f, true)?;
                write!(f, " {} ", op.token())?;
                r.write(f, true)?;
                if nested {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl SequentPattern {
    pub fn instantiate(&self, s: &Substitution) -> Option<Sequent> {
        let mut antecedent = Vec::new();
        for item in &self.antecedent {
            match item {
                AntecedentItem::Seq(v) => antecedent.extend(s.sequences.get(v)?.iter().cloned()),
                AntecedentItem::Formula(p) => antecedent.push(p.instantiate(s)?),
            }
        }
        let succedent = match &self.succedent {
            SuccedentPattern::Empty => None,
            SuccedentPattern::Meta(v) => s.succedents.get(v)?.clone(),
            SuccedentPattern::Formula(p) => Some(p.instantiate(s)?),
        };
        Some(Sequent { antecedent, succedent })
    }

    pub fn connectives(&self) -> Fragment {
        let mut frag = Fragment::empty();
        for item in &self.antecedent {
            if let AntecedentItem::Formula(p) = item {
                frag = frag.union(p.connectives());
            }
        }
        if let SuccedentPattern::Formula(p) = &self.succedent {
            frag = frag.union(p.connectives());
        }
        frag
    }

    pub fn seq_occurrences(&self, name: &str) -> usize {
        self.antecedent
            .iter()
            .filter(|i| matches!(i, AntecedentItem::Seq(v) if &**v == name))
            .count()
    }
}

impl Size for SequentPattern {
    fn size(&self) -> usize {
        let items: usize = self
            .antecedent
            .iter()
            .map(|i| match i {
                AntecedentItem::Seq(_) => 1,
                AntecedentItem::Formula(p) => p.size(),
            })
            .sum();
        let succ = match &self.succedent {
            SuccedentPattern::Empty => 0,
            SuccedentPattern::Meta(_) => 1,
            SuccedentPattern::Formula(p) => p.size(),
        };
        items + self.antecedent.len().saturating_sub(1) + 1 + succ
    }
}

impl fmt::Display for SequentPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.antecedent.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match item {
                AntecedentItem::Seq(v) => f.write_str(v)?,
                AntecedentItem::Formula(p) => p.write(f, false)?,
            }
        }
        if !self.antecedent.is_empty() {
            f.write_str(" ")?;
        }
        f.write_str("|-")?;
        match &self.succedent {
            SuccedentPattern::Empty => Ok(()),
            SuccedentPattern::Meta(v) => write!(f, " {v}?"),
            SuccedentPattern::Formula(p) => {
                f.write_str(" ")?;
                p.write(f, false)
            }
        }
    }
}

impl RuleSchema {
    pub fn arity(&self) -> usize {
        self.premises.len()
    }

    pub fn connectives(&self) -> Fragment {
        self.premises
            .iter()
            .fold(self.conclusion.connectives(), |acc, p| acc.union(p.connectives()))
    }

    pub fn is_structural(&self) -> bool {
        self.connectives() == Fragment::empty()
    }

    /// Premise and conclusion instances under `s`, if every metavariable is bound.
    pub fn instantiate(&self, s: &Substitution) -> Option<(Vec<Sequent>, Sequent)> {
        let premises = self
            .premises
            .iter()
            .map(|p| p.instantiate(s))
            .collect::<Option<Vec<_>>>()?;
        Some((premises, self.conclusion.instantiate(s)?))
    }

    /// `rule NAME: P1 ; P2 => C`. Sequence-metavariables are `G` followed by
    /// digits, `X?` is a succedent-metavariable, other capitalised names are
    /// formula-metavariables and lowercase names propositional-metavariables.
    pub fn parse(text: &str) -> Result<RuleSchema> {
        parse_rule_at(text, 1)
    }
}

/// Premises, `;` separators, the inference bar and the conclusion.
impl Size for RuleSchema {
    fn size(&self) -> usize {
        let prem: usize = self.premises.iter().map(Size::size).sum();
        prem + self.premises.len().saturating_sub(1) + 1 + self.conclusion.size()
    }
}

impl fmt::Display for RuleSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {}:", self.name)?;
        for (i, p) in self.premises.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { " ; " })?;
            write!(f, "{p}")?;
        }
        write!(f, " => {}", self.conclusion)
    }
}

fn is_seq_meta(name: &str) -> bool {
    name.len() > 1 && name.starts_with('G') && name[1..].chars().all(|c| c.is_ascii_digit())
}

fn formula_pattern(lx: &mut Lexer) -> Result<FormulaPattern> {
    let left = pattern_operand(lx)?;
    if let Some(Token::Op(op)) = lx.peek().cloned() {
        lx.pos += 1;
        let right = pattern_operand(lx)?;
        if let Some(Token::Op(_)) = lx.peek() {
            return Err(lx.error("nested binary operators need explicit parentheses"));
        }
        return Ok(FormulaPattern::Bin(op, Box::new(left), Box::new(right)));
    }
    Ok(left)
}

fn pattern_operand(lx: &mut Lexer) -> Result<FormulaPattern> {
    match lx.next_token() {
        Some(Token::Ident(name)) => {
            if is_seq_meta(&name) {
                return Err(lx.error(format!("sequence-metavariable {name} inside a formula")));
            }
            let starts_upper = name.chars().next().is_some_and(|c| c.is_ascii_uppercase());
            Ok(if starts_upper {
                FormulaPattern::Meta(Arc::from(name.as_str()))
            } else {
                FormulaPattern::Prop(Arc::from(name.as_str()))
            })
        }
        Some(Token::Const(c)) => Ok(FormulaPattern::Const(c)),
        Some(Token::LParen) => {
            let p = formula_pattern(lx)?;
            lx.expect(&Token::RParen)?;
            Ok(p)
        }
        other => Err(lx.error(format!("expected a pattern, found {other:?}"))),
    }
}

fn sequent_pattern(lx: &mut Lexer) -> Result<SequentPattern> {
    let mut antecedent = Vec::new();
    if lx.peek() != Some(&Token::Turnstile) {
        loop {
            match lx.peek() {
                Some(Token::Ident(name)) if is_seq_meta(name) => {
                    antecedent.push(AntecedentItem::Seq(Arc::from(name.as_str())));
                    lx.pos += 1;
                }
                _ => antecedent.push(AntecedentItem::Formula(formula_pattern(lx)?)),
            }
            match lx.peek() {
                Some(Token::Comma) => lx.pos += 1,
                _ => break,
            }
        }
    }
    lx.expect(&Token::Turnstile)?;
    let succedent = match (lx.peek().cloned(), lx.tokens.get(lx.pos + 1)) {
        (None, _) | (Some(Token::Semi), _) | (Some(Token::Arrow), _) => SuccedentPattern::Empty,
        (Some(Token::Ident(name)), Some(Token::Question)) => {
            lx.pos += 2;
            SuccedentPattern::Meta(Arc::from(name.as_str()))
        }
        _ => SuccedentPattern::Formula(formula_pattern(lx)?),
    };
    Ok(SequentPattern { antecedent, succedent })
}

pub(crate) fn parse_rule_at(text: &str, line: usize) -> Result<RuleSchema> {
    let mut lx = Lexer::new(text, line)?;
    match lx.next_token() {
        Some(Token::Ident(kw)) if kw == "rule" => {}
        _ => return Err(Error::parse(line, "rule declarations start with `rule`")),
    }
    let name = match lx.next_token() {
        Some(Token::Ident(n)) => n,
        _ => return Err(Error::parse(line, "missing rule name")),
    };
    lx.expect(&Token::Colon)?;
    let mut premises = Vec::new();
    if lx.peek() != Some(&Token::Arrow) {
        loop {
            premises.push(sequent_pattern(&mut lx)?);
            match lx.next_token() {
                Some(Token::Semi) => continue,
                Some(Token::Arrow) => break,
                other => return Err(lx.error(format!("expected `;` or `=>`, found {other:?}"))),
            }
        }
    } else {
        lx.pos += 1;
    }
    let conclusion = sequent_pattern(&mut lx)?;
    lx.finish()?;
    Ok(RuleSchema { name, premises, conclusion })
}

/// One rule per line; `#` comments and blank lines are skipped.
pub fn parse_rules(text: &str) -> Result<Vec<RuleSchema>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if !line.is_empty() {
            out.push(parse_rule_at(line, i + 1)?);
        }
    }
    Ok(out)
}
