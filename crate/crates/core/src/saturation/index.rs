//! Dense integer ids for the formulas of Φ.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::syntax::{BinOp, Constant, Formula, Sequent};
use crate::wqo::{subword_embed, Embedding};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Node {
    Var,
    Const(Constant),
    Bin(BinOp, u32, u32),
}

#[derive(Clone, Debug)]
pub struct FormulaIndex {
    formulas: Vec<Formula>,
    nodes: Vec<Node>,
    bins: HashMap<(BinOp, u32, u32), u32>,
    // (op, id) pairs occurring as a left or right child
    lefts: HashSet<(BinOp, u32)>,
    rights: HashSet<(BinOp, u32)>,
    ops: HashSet<BinOp>,
    consts: HashMap<Constant, u32>,
    vars: Vec<u32>,
}

impl FormulaIndex {
    /// `phi` must be closed under subformulas.
    pub fn new(phi: &BTreeSet<Formula>) -> Self {
        let formulas: Vec<Formula> = phi.iter().cloned().collect();
        let pos = |f: &Formula| formulas.binary_search(f).expect("phi is subformula closed") as u32;
        let mut nodes = Vec::with_capacity(formulas.len());
        let mut bins = HashMap::new();
        let (mut lefts, mut rights, mut ops) = (HashSet::new(), HashSet::new(), HashSet::new());
        let mut consts = HashMap::new();
        let mut vars = Vec::new();
        for (i, f) in formulas.iter().enumerate() {
            let i = i as u32;
            let node = match f {
                Formula::Var(_) => {
                    vars.push(i);
                    Node::Var
                }
                Formula::Const(c) => {
                    consts.insert(*c, i);
                    Node::Const(*c)
                }
                Formula::Bin(op, l, r) => {
                    let (l, r) = (pos(l), pos(r));
                    bins.insert((*op, l, r), i);
                    lefts.insert((*op, l));
                    rights.insert((*op, r));
                    ops.insert(*op);
                    Node::Bin(*op, l, r)
                }
            };
            nodes.push(node);
        }
        FormulaIndex { formulas, nodes, bins, lefts, rights, ops, consts, vars }
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn id(&self, f: &Formula) -> Option<u32> {
        self.formulas.binary_search(f).ok().map(|i| i as u32)
    }

    pub fn formula(&self, id: u32) -> &Formula {
        &self.formulas[id as usize]
    }

    pub(crate) fn node(&self, id: u32) -> Node {
        self.nodes[id as usize]
    }

    pub(crate) fn bin(&self, op: BinOp, l: u32, r: u32) -> Option<u32> {
        self.bins.get(&(op, l, r)).copied()
    }

    /// Whether some formula `op(l, _)`, `op(_, r)` or `op(_, _)` is in Φ.
    pub(crate) fn has_bin(&self, op: BinOp, l: Option<u32>, r: Option<u32>) -> bool {
        match (l, r) {
            (Some(l), Some(r)) => self.bins.contains_key(&(op, l, r)),
            (Some(l), None) => self.lefts.contains(&(op, l)),
            (None, Some(r)) => self.rights.contains(&(op, r)),
            (None, None) => self.ops.contains(&op),
        }
    }

    pub(crate) fn constant(&self, c: Constant) -> Option<u32> {
        self.consts.get(&c).copied()
    }

    pub(crate) fn vars(&self) -> &[u32] {
        &self.vars
    }

    pub fn sequent(&self, s: &IdSeq) -> Sequent {
        Sequent::new(
            s.ante.iter().map(|&i| self.formula(i).clone()).collect(),
            s.succ.map(|i| self.formula(i).clone()),
        )
    }

    pub fn ids(&self, s: &Sequent) -> Option<IdSeq> {
        let ante = s.antecedent.iter().map(|f| self.id(f)).collect::<Option<Vec<_>>>()?;
        let succ = match &s.succedent {
            None => None,
            Some(f) => Some(self.id(f)?),
        };
        Some(IdSeq { ante, succ })
    }
}

/// A Φ-sequent over formula ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdSeq {
    pub succ: Option<u32>,
    pub ante: Vec<u32>,
}

impl Embedding for IdSeq {
    type Key = Option<u32>;
    fn key(&self) -> Option<u32> {
        self.succ
    }
    fn embeds_into(&self, other: &Self) -> bool {
        subword_embed(&self.ante, &other.ante)
    }
    fn norm(&self) -> usize {
        self.ante.len()
    }
}

/// A frontier element: a sequent together with its slot in the store.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Entry {
    pub seq: IdSeq,
    pub id: usize,
}

impl Embedding for Entry {
    type Key = Option<u32>;
    fn key(&self) -> Option<u32> {
        self.seq.succ
    }
    fn embeds_into(&self, other: &Self) -> bool {
        self.seq.embeds_into(&other.seq)
    }
    fn norm(&self) -> usize {
        self.seq.ante.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::subformula_closure;

    #[test]
    fn ids_round_trip() {
        let s: Sequent = "p, q |- p * q".parse().unwrap();
        let phi = subformula_closure([&s]);
        let idx = FormulaIndex::new(&phi);
        assert_eq!(idx.len(), 3);
        let ids = idx.ids(&s).unwrap();
        assert_eq!(idx.sequent(&ids), s);
        let (p, q) = (ids.ante[0], ids.ante[1]);
        assert_eq!(idx.bin(BinOp::Fusion, p, q), ids.succ);
        assert_eq!(idx.bin(BinOp::Fusion, q, p), None);
        assert_eq!(idx.vars().len(), 2);
        assert!(idx.ids(&"r |- p".parse().unwrap()).is_none());
    }
}
