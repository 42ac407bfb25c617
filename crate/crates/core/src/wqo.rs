//! Higman subword embedding, the weakening order on sequents, antichains of
//! minimal elements and controlled bad sequences.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::syntax::{Formula, Sequent};

/// `w1 ≤* w2`: `w1` is obtained from `w2` by deleting elements.
pub fn subword_embed<T: PartialEq>(w1: &[T], w2: &[T]) -> bool {
    if w1.len() > w2.len() {
        return false;
    }
    let mut it = w2.iter();
    w1.iter().all(|x| it.any(|y| y == x))
}

/// Leftmost embedding of `w1` into `w2` as strictly increasing positions.
pub fn embedding_positions<T: PartialEq>(w1: &[T], w2: &[T]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(w1.len());
    let mut j = 0;
    for x in w1 {
        while j < w2.len() && &w2[j] != x {
            j += 1;
        }
        if j == w2.len() {
            return None;
        }
        out.push(j);
        j += 1;
    }
    Some(out)
}

/// `s1 ≼ s2`: equal succedents and antecedent embedding.
pub fn seq_embed(s1: &Sequent, s2: &Sequent) -> bool {
    s1.succedent == s2.succedent && subword_embed(&s1.antecedent, &s2.antecedent)
}

pub fn norm(s: &Sequent) -> usize {
    s.antecedent.len()
}

/// The weakening order on Φ-sequents, with a fixed enumeration of Φ.
#[derive(Clone, Debug)]
pub struct SequentOrder {
    phi: Vec<Formula>,
}

impl SequentOrder {
    pub fn new(phi: &BTreeSet<Formula>) -> Self {
        SequentOrder { phi: phi.iter().cloned().collect() }
    }

    pub fn phi(&self) -> &[Formula] {
        &self.phi
    }

    pub fn is_phi_sequent(&self, s: &Sequent) -> bool {
        s.formulas().all(|f| self.phi.binary_search(f).is_ok())
    }

    pub fn embeds(&self, s1: &Sequent, s2: &Sequent) -> bool {
        seq_embed(s1, s2)
    }

    /// Image in the disjoint sum of `|Φ|+1` copies of the Higman order:
    /// index 0 for an empty succedent, `j` when the succedent is `φ_j`.
    pub fn reflection_map(&self, s: &Sequent) -> Result<(usize, Vec<Formula>)> {
        for f in &s.antecedent {
            if self.phi.binary_search(f).is_err() {
                return Err(Error::NotInAlphabet(f.to_string()));
            }
        }
        let index = match &s.succedent {
            None => 0,
            Some(f) => {
                self.phi.binary_search(f).map_err(|_| Error::NotInAlphabet(f.to_string()))? + 1
            }
        };
        Ok((index, s.antecedent.clone()))
    }
}

/// Comparison in the disjoint-sum order used as the target of the reflection.
pub fn disjoint_sum_leq<T: PartialEq>(a: &(usize, Vec<T>), b: &(usize, Vec<T>)) -> bool {
    a.0 == b.0 && subword_embed(&a.1, &b.1)
}

/// A quasi-order whose incomparable classes are keyed: elements with different
/// keys never embed into each other.
pub trait Embedding {
    type Key: Ord + Clone;
    fn key(&self) -> Self::Key;
    fn embeds_into(&self, other: &Self) -> bool;
    fn norm(&self) -> usize;
}

impl Embedding for Sequent {
    type Key = Option<Formula>;
    fn key(&self) -> Option<Formula> {
        self.succedent.clone()
    }
    fn embeds_into(&self, other: &Self) -> bool {
        subword_embed(&self.antecedent, &other.antecedent)
    }
    fn norm(&self) -> usize {
        self.antecedent.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Insert<T> {
    Subsumed(T),
    Inserted(Vec<T>),
}

/// Pairwise incomparable elements, bucketed by key.
#[derive(Clone)]
pub struct Antichain<T: Embedding> {
    buckets: BTreeMap<T::Key, Vec<T>>,
    len: usize,
}

impl<T: Embedding> Default for Antichain<T> {
    fn default() -> Self {
        Antichain { buckets: BTreeMap::new(), len: 0 }
    }
}

impl<T: Embedding + Clone + fmt::Debug> fmt::Debug for Antichain<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl<T: Embedding + Clone> Antichain<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.buckets.values().flatten()
    }

    pub fn bucket(&self, key: &T::Key) -> &[T] {
        self.buckets.get(key).map_or(&[], Vec::as_slice)
    }

    /// Some element `y` with `y ≼ x`.
    pub fn subsumer(&self, x: &T) -> Option<&T> {
        self.bucket(&x.key()).iter().find(|y| y.embeds_into(x))
    }

    pub fn insert(&mut self, x: T) -> Insert<T> {
        if let Some(y) = self.subsumer(&x) {
            return Insert::Subsumed(y.clone());
        }
        let bucket = self.buckets.entry(x.key()).or_default();
        let mut removed = Vec::new();
        bucket.retain(|y| {
            if x.embeds_into(y) {
                removed.push(y.clone());
                false
            } else {
                true
            }
        });
        bucket.push(x);
        self.len = self.len + 1 - removed.len();
        Insert::Inserted(removed)
    }

    pub fn max_norm(&self) -> usize {
        self.iter().map(Embedding::norm).max().unwrap_or(0)
    }
}

impl<T: Embedding + Clone + Ord> Antichain<T> {
    pub fn sorted(&self) -> Vec<T> {
        let mut v: Vec<T> = self.iter().cloned().collect();
        v.sort();
        v
    }
}

impl<T: Embedding + Clone> FromIterator<T> for Antichain<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut a = Antichain::new();
        for x in iter {
            a.insert(x);
        }
        a
    }
}

/// All ≤*-minimal common supersequences of the given words.
pub fn minimal_common_supersequences<T: Clone + Eq + Ord + std::hash::Hash>(
    words: &[Vec<T>],
) -> Vec<Vec<T>> {
    let mut acc: Vec<Vec<T>> = vec![Vec::new()];
    for w in words {
        let mut next: Vec<Vec<T>> = Vec::new();
        for a in &acc {
            next.extend(minimal_merges(a, w));
        }
        acc = minimal_words(next);
    }
    acc
}

fn minimal_words<T: Clone + Eq + Ord>(mut ws: Vec<Vec<T>>) -> Vec<Vec<T>> {
    ws.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    ws.dedup();
    let mut out: Vec<Vec<T>> = Vec::new();
    for w in ws {
        if !out.iter().any(|m| subword_embed(m, &w)) {
            out.push(w);
        }
    }
    out.sort();
    out
}

fn minimal_merges<T: Clone + Eq + Ord + std::hash::Hash>(x: &[T], y: &[T]) -> Vec<Vec<T>> {
    if subword_embed(x, y) {
        return vec![y.to_vec()];
    }
    if subword_embed(y, x) {
        return vec![x.to_vec()];
    }
    fn go<T: Clone + Eq + Ord>(
        x: &[T],
        y: &[T],
        i: usize,
        j: usize,
        memo: &mut HashMap<(usize, usize), Vec<Vec<T>>>,
    ) -> Vec<Vec<T>> {
        if let Some(r) = memo.get(&(i, j)) {
            return r.clone();
        }
        let r = if i == x.len() {
            vec![y[j..].to_vec()]
        } else if j == y.len() {
            vec![x[i..].to_vec()]
        } else {
            let mut cands = Vec::new();
            let mut prefix = |c: &T, rest: Vec<Vec<T>>| {
                for mut m in rest {
                    m.insert(0, c.clone());
                    cands.push(m);
                }
            };
            prefix(&x[i], go(x, y, i + 1, j, memo));
            prefix(&y[j], go(x, y, i, j + 1, memo));
            if x[i] == y[j] {
                prefix(&x[i], go(x, y, i + 1, j + 1, memo));
            }
            minimal_words(cands)
        };
        memo.insert((i, j), r.clone());
        r
    }
    go(x, y, 0, 0, &mut HashMap::new())
}

pub type Control = Arc<dyn Fn(u128) -> u128 + Send + Sync>;

/// Norms of a bad sequence together with the control it is claimed to respect.
#[derive(Clone)]
pub struct ControlledTrace {
    pub norms: Vec<u128>,
    pub control: Control,
    pub initial: u128,
}

impl ControlledTrace {
    pub fn new(norms: Vec<u128>, control: Control, initial: u128) -> Self {
        ControlledTrace { norms, control, initial }
    }

    /// `g(x) = factor·x`, saturating.
    pub fn linear(norms: Vec<u128>, factor: u128, initial: u128) -> Self {
        Self::new(norms, Arc::new(move |x| x.saturating_mul(factor)), initial)
    }
}

impl fmt::Debug for ControlledTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ControlledTrace")
            .field("norms", &self.norms)
            .field("initial", &self.initial)
            .finish()
    }
}

/// `norms[i] < g^i(n)` for every `i`.
pub fn control_check(tr: &ControlledTrace) -> bool {
    let mut bound = tr.initial;
    for (i, &n) in tr.norms.iter().enumerate() {
        if i > 0 {
            bound = (tr.control)(bound);
        }
        if n >= bound {
            return false;
        }
    }
    true
}
