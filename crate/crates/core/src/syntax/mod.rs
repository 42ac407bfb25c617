//! Formulas, sequents, theories and fragments of the FL signature.

mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use parse::{is_identifier, parse_formula, parse_sequent, parse_theory, Lexer, Token};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constant {
    Zero,
    One,
    Top,
    Bot,
}

impl Constant {
    pub const ALL: [Constant; 4] = [Constant::Zero, Constant::One, Constant::Top, Constant::Bot];

    pub fn token(self) -> &'static str {
        match self {
            Constant::Zero => "0",
            Constant::One => "1",
            Constant::Top => "top",
            Constant::Bot => "bot",
        }
    }
}

/// Binary connectives: fusion `*`, meet `/\`, join `\/`, under `\`, over `/`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    Fusion,
    Meet,
    Join,
    Under,
    Over,
}

impl BinOp {
    pub const ALL: [BinOp; 5] = [BinOp::Fusion, BinOp::Meet, BinOp::Join, BinOp::Under, BinOp::Over];

    pub fn token(self) -> &'static str {
        match self {
            BinOp::Fusion => "*",
            BinOp::Meet => "/\\",
            BinOp::Join => "\\/",
            BinOp::Under => "\\",
            BinOp::Over => "/",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Connective {
    Const(Constant),
    Bin(BinOp),
}

impl Connective {
    pub const ALL: [Connective; 9] = [
        Connective::Const(Constant::Zero),
        Connective::Const(Constant::One),
        Connective::Const(Constant::Top),
        Connective::Const(Constant::Bot),
        Connective::Bin(BinOp::Fusion),
        Connective::Bin(BinOp::Meet),
        Connective::Bin(BinOp::Join),
        Connective::Bin(BinOp::Under),
        Connective::Bin(BinOp::Over),
    ];

    fn bit(self) -> u16 {
        1 << Connective::ALL.iter().position(|c| *c == self).unwrap_or(0)
    }

    /// Accepts the grammar token (`*`, `/\`, `top`, ...) or a mnemonic name.
    pub fn from_name(name: &str) -> Option<Connective> {
        let c = match name {
            "0" | "zero" => Connective::Const(Constant::Zero),
            "1" | "one" => Connective::Const(Constant::One),
            "top" => Connective::Const(Constant::Top),
            "bot" => Connective::Const(Constant::Bot),
            "*" | "fus" | "fusion" => Connective::Bin(BinOp::Fusion),
            "/\\" | "and" | "meet" => Connective::Bin(BinOp::Meet),
            "\\/" | "or" | "join" => Connective::Bin(BinOp::Join),
            "\\" | "under" => Connective::Bin(BinOp::Under),
            "/" | "over" => Connective::Bin(BinOp::Over),
            _ => return None,
        };
        Some(c)
    }

    pub fn token(self) -> &'static str {
        match self {
            Connective::Const(c) => c.token(),
            Connective::Bin(b) => b.token(),
        }
    }
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// A subset of the FL signature.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Fragment(u16);

impl Fragment {
    pub fn empty() -> Self {
        Fragment(0)
    }

    pub fn full() -> Self {
        Connective::ALL.iter().copied().collect()
    }

    pub fn contains(self, c: Connective) -> bool {
        self.0 & c.bit() != 0
    }

    pub fn with(self, c: Connective) -> Self {
        Fragment(self.0 | c.bit())
    }

    pub fn union(self, other: Fragment) -> Self {
        Fragment(self.0 | other.0)
    }

    pub fn is_subset(self, other: Fragment) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Connective> {
        Connective::ALL.into_iter().filter(move |c| self.contains(*c))
    }

    /// Parses a comma-separated list of connective names; `all` is the full signature.
    pub fn parse(text: &str) -> Result<Fragment> {
        let mut frag = Fragment::empty();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                frag = frag.union(Fragment::full());
                continue;
            }
            let c = Connective::from_name(part)
                .ok_or_else(|| Error::InvalidInput(format!("unknown connective `{part}`")))?;
            frag = frag.with(c);
        }
        Ok(frag)
    }
}

impl FromIterator<Connective> for Fragment {
    fn from_iter<I: IntoIterator<Item = Connective>>(iter: I) -> Self {
        iter.into_iter().fold(Fragment::empty(), Fragment::with)
    }
}

impl fmt::Debug for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|c| c.token())).finish()
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.iter().map(|c| c.token()).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(Arc<str>),
    Const(Constant),
    Bin(BinOp, Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(Arc::from(name))
    }

    pub fn bin(op: BinOp, left: Formula, right: Formula) -> Formula {
        Formula::Bin(op, Arc::new(left), Arc::new(right))
    }

    pub fn fusion(left: Formula, right: Formula) -> Formula {
        Formula::bin(BinOp::Fusion, left, right)
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Formula::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Formula::Var(_))
    }

    /// Connectives and constants occurring in the formula.
    pub fn connectives(&self) -> Fragment {
        match self {
            Formula::Var(_) => Fragment::empty(),
            Formula::Const(c) => Fragment::empty().with(Connective::Const(*c)),
            Formula::Bin(op, l, r) => {
                l.connectives().union(r.connectives()).with(Connective::Bin(*op))
            }
        }
    }

    pub fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.contains(self) {
            return;
        }
        if let Formula::Bin(_, l, r) = self {
            l.collect_subformulas(out);
            r.collect_subformulas(out);
        }
        out.insert(self.clone());
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Const(_) => {}
            Formula::Bin(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
        match self {
            Formula::Var(v) => f.write_str(v),
            Formula::Const(c) => f.write_str(c.token()),
            Formula::Bin(op, l, r) => {
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

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, false)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Formula> {
        parse_formula(s)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub antecedent: Vec<Formula>,
    pub succedent: Option<Formula>,
}

impl Sequent {
    pub fn new(antecedent: Vec<Formula>, succedent: Option<Formula>) -> Self {
        Sequent { antecedent, succedent }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.antecedent.iter().chain(self.succedent.iter())
    }

    pub fn connectives(&self) -> Fragment {
        self.formulas().fold(Fragment::empty(), |acc, f| acc.union(f.connectives()))
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.antecedent.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        if !self.antecedent.is_empty() {
            f.write_str(" ")?;
        }
        f.write_str("|-")?;
        if let Some(s) = &self.succedent {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for Sequent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Sequent> {
        parse_sequent(s)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Theory {
    pub sequents: BTreeSet<Sequent>,
}

impl Theory {
    pub fn new(sequents: impl IntoIterator<Item = Sequent>) -> Self {
        Theory { sequents: sequents.into_iter().collect() }
    }

    pub fn len(&self) -> usize {
        self.sequents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequents.is_empty()
    }

    pub fn contains(&self, s: &Sequent) -> bool {
        self.sequents.contains(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Sequent> {
        self.sequents.iter()
    }

    pub fn connectives(&self) -> Fragment {
        self.iter().fold(Fragment::empty(), |acc, s| acc.union(s.connectives()))
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sequents {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// `φ1 ⊗ (φ2 ⊗ (… ⊗ φm))`; the empty fusion is the constant 1.
pub fn fold_fusion(fs: &[Formula], frag: Fragment) -> Result<Formula> {
    match fs {
        [] => {
            let one = Connective::Const(Constant::One);
            if frag.contains(one) {
                Ok(Formula::Const(Constant::One))
            } else {
                Err(Error::MissingConnective(one))
            }
        }
        [single] => Ok(single.clone()),
        _ => {
            let fus = Connective::Bin(BinOp::Fusion);
            if !frag.contains(fus) {
                return Err(Error::MissingConnective(fus));
            }
            let mut it = fs.iter().rev();
            let mut acc = it.next().cloned().unwrap_or(Formula::Const(Constant::One));
            for f in it {
                acc = Formula::fusion(f.clone(), acc);
            }
            Ok(acc)
        }
    }
}

/// Leaf sequence of a formula built from fusion and variables only.
pub fn flatten(f: &Formula) -> Result<Vec<Arc<str>>> {
    fn go(f: &Formula, out: &mut Vec<Arc<str>>) -> bool {
        match f {
            Formula::Var(v) => {
                out.push(v.clone());
                true
            }
            Formula::Bin(BinOp::Fusion, l, r) => go(l, out) && go(r, out),
            _ => false,
        }
    }
    let mut out = Vec::new();
    if go(f, &mut out) {
        Ok(out)
    } else {
        Err(Error::NotFlattenable(f.to_string()))
    }
}

pub fn subformula_closure<'a>(seqs: impl IntoIterator<Item = &'a Sequent>) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    for s in seqs {
        for f in s.formulas() {
            f.collect_subformulas(&mut out);
        }
    }
    out
}

fn require(frag: Fragment, cs: &[Connective]) -> Result<()> {
    match cs.iter().find(|c| !frag.contains(**c)) {
        Some(c) => Err(Error::MissingConnective(*c)),
        None => Ok(()),
    }
}

/// `(⊗Γ) \ Π*`, with `Π* = 0` for an empty succedent.
pub fn translate_sequent(s: &Sequent, frag: Fragment) -> Result<Formula> {
    require(
        frag,
        &[
            Connective::Bin(BinOp::Fusion),
            Connective::Bin(BinOp::Under),
            Connective::Const(Constant::Zero),
            Connective::Const(Constant::One),
        ],
    )?;
    let left = fold_fusion(&s.antecedent, frag)?;
    let right = s.succedent.clone().unwrap_or(Formula::Const(Constant::Zero));
    Ok(Formula::bin(BinOp::Under, left, right))
}

pub fn translate_theory(t: &Theory, frag: Fragment) -> Result<BTreeSet<Formula>> {
    t.iter().map(|s| translate_sequent(s, frag)).collect()
}

/// Token count of the canonical fully parenthesized rendering.
pub trait Size {
    fn size(&self) -> usize;
}

impl Size for Formula {
    fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Const(_) => 1,
            Formula::Bin(_, l, r) => 3 + l.size() + r.size(),
        }
    }
}

impl Size for Sequent {
    fn size(&self) -> usize {
        let ante: usize = self.antecedent.iter().map(Size::size).sum();
        let commas = self.antecedent.len().saturating_sub(1);
        ante + commas + 1 + self.succedent.as_ref().map_or(0, Size::size)
    }
}

pub fn size_sum<'a, T: Size + 'a>(xs: impl IntoIterator<Item = &'a T>) -> usize {
    xs.into_iter().map(Size::size).sum()
}

pub fn size_max<'a, T: Size + 'a>(xs: impl IntoIterator<Item = &'a T>) -> usize {
    xs.into_iter().map(Size::size).max().unwrap_or(0)
}

pub fn restrict_to<T: Ord + Clone>(vars: &BTreeSet<T>, w: &[T]) -> Vec<T> {
    w.iter().filter(|x| vars.contains(x)).cloned().collect()
}
