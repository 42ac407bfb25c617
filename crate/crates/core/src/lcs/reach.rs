use std::collections::{BTreeSet, HashMap, VecDeque};
use std::time::Instant;

use super::{loss_steps, step_lossy, ChannelSystem, Configuration, Op, Step};
use crate::wqo::{Antichain, Embedding, Insert};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundedReach {
    /// A lossy computation from `u` to `v`.
    Yes(Vec<Step>),
    NoWithinCap,
    BudgetExceeded,
}

impl BoundedReach {
    pub fn is_yes(&self) -> bool {
        matches!(self, BoundedReach::Yes(_))
    }
}

fn within(c: &Configuration, cap: usize) -> bool {
    c.words.iter().all(|w| w.len() <= cap)
}

fn successors(cs: &ChannelSystem, c: &Configuration) -> Vec<(Configuration, Step)> {
    let mut out: Vec<(Configuration, Step)> =
        cs.step_perfect(c).into_iter().map(|(n, i)| (n, Step::Perfect(i))).collect();
    for (channel, w) in c.words.iter().enumerate() {
        for pos in 0..w.len() {
            let mut n = c.clone();
            n.words[channel].remove(pos);
            out.push((n, Step::Lose { channel, pos }));
        }
    }
    out
}

/// Breadth-first search over configurations whose channel words all have
/// length at most `cap` (the source itself is always admitted). `budget`
/// limits the number of visited configurations.
pub fn reach_bounded(
    cs: &ChannelSystem,
    u: &Configuration,
    v: &Configuration,
    cap: usize,
    budget: Option<usize>,
) -> BoundedReach {
    let mut parent: HashMap<Configuration, Option<(Configuration, Step)>> = HashMap::new();
    parent.insert(u.clone(), None);
    let mut queue = VecDeque::from([u.clone()]);
    while let Some(c) = queue.pop_front() {
        if &c == v {
            let mut steps = Vec::new();
            let mut cur = c;
            while let Some(Some((prev, step))) = parent.get(&cur) {
                steps.push(*step);
                cur = prev.clone();
            }
            steps.reverse();
            return BoundedReach::Yes(steps);
        }
        for (n, step) in successors(cs, &c) {
            if !within(&n, cap) || parent.contains_key(&n) {
                continue;
            }
            if budget.is_some_and(|b| parent.len() >= b) {
                return BoundedReach::BudgetExceeded;
            }
            parent.insert(n.clone(), Some((c.clone(), step)));
            queue.push_back(n);
        }
    }
    BoundedReach::NoWithinCap
}

#[derive(Clone, Debug)]
struct Node {
    conf: Configuration,
    id: usize,
}

impl Embedding for Node {
    type Key = usize;
    fn key(&self) -> usize {
        self.conf.state
    }
    fn embeds_into(&self, other: &Self) -> bool {
        self.conf.embeds_into(&other.conf)
    }
    fn norm(&self) -> usize {
        self.conf.size()
    }
}

/// An upward-closed set of configurations given by its minimal elements.
/// When built by [`UpwardClosedSet::pre_star`] every basis element carries a
/// path to the target.
#[derive(Clone, Debug)]
pub struct UpwardClosedSet {
    basis: Antichain<Node>,
    // (configuration, instruction used, successor node)
    arena: Vec<(Configuration, Option<(usize, usize)>)>,
}

impl UpwardClosedSet {
    pub fn basis(&self) -> Vec<Configuration> {
        let mut v: Vec<Configuration> = self.basis.iter().map(|n| n.conf.clone()).collect();
        v.sort();
        v
    }

    pub fn contains(&self, c: &Configuration) -> bool {
        self.basis.bucket(&c.state).iter().any(|b| b.conf.embeds_into(c))
    }

    /// Minimal elements of the configurations that reach `↑v`, which under
    /// lossy semantics are exactly those reaching `v`. Returns `None` if
    /// `deadline` passes first.
    pub fn pre_star(cs: &ChannelSystem, v: &Configuration, deadline: Option<Instant>) -> Option<Self> {
        let mut set = UpwardClosedSet { basis: Antichain::new(), arena: vec![(v.clone(), None)] };
        set.basis.insert(Node { conf: v.clone(), id: 0 });
        let mut alive = vec![true];
        let mut work = VecDeque::from([0usize]);
        let mut order: Vec<usize> = (0..cs.instructions.len()).collect();
        order.sort_by_key(|&i| cs.instructions[i]);
        while let Some(id) = work.pop_front() {
            if !alive[id] {
                continue;
            }
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return None;
            }
            let b = set.arena[id].0.clone();
            for &i in &order {
                let instr = cs.instructions[i];
                if instr.to != b.state {
                    continue;
                }
                let mut preds = Vec::new();
                let mut p = b.clone();
                p.state = instr.from;
                match instr.op {
                    Op::Read => {
                        p.words[instr.channel].insert(0, instr.letter);
                        preds.push(p);
                    }
                    Op::Write => {
                        if b.words[instr.channel].last() == Some(&instr.letter) {
                            let mut q = p.clone();
                            q.words[instr.channel].pop();
                            preds.push(q);
                        }
                        preds.push(p);
                    }
                }
                for p in preds {
                    let pid = set.arena.len();
                    let node = Node { conf: p.clone(), id: pid };
                    if let Insert::Inserted(removed) = set.basis.insert(node) {
                        set.arena.push((p, Some((i, id))));
                        alive.push(true);
                        for r in removed {
                            alive[r.id] = false;
                        }
                        work.push_back(pid);
                    }
                }
            }
        }
        Some(set)
    }

    /// A lossy computation from `u` to the target, if `u` is in the set.
    pub fn witness(&self, cs: &ChannelSystem, u: &Configuration) -> Option<Vec<Step>> {
        let start = self.basis.bucket(&u.state).iter().find(|b| b.conf.embeds_into(u))?;
        let mut steps = loss_steps(u, &start.conf)?;
        let mut id = start.id;
        while let Some((instr, next)) = self.arena[id].1 {
            let here = &self.arena[id].0;
            let after = cs.apply(here, instr)?;
            steps.push(Step::Perfect(instr));
            let target = &self.arena[next].0;
            if &after != target {
                let ch = cs.instructions[instr].channel;
                steps.push(Step::Lose { channel: ch, pos: after.words[ch].len() - 1 });
            }
            id = next;
        }
        Some(steps)
    }
}

/// Exact reachability `u ⇝* v` under lossy semantics.
pub fn reach_exact(cs: &ChannelSystem, u: &Configuration, v: &Configuration) -> bool {
    UpwardClosedSet::pre_star(cs, v, None).expect("no deadline").contains(u)
}

/// Exact reachability together with a witnessing computation.
pub fn reach_exact_witness(cs: &ChannelSystem, u: &Configuration, v: &Configuration) -> Option<Vec<Step>> {
    UpwardClosedSet::pre_star(cs, v, None).expect("no deadline").witness(cs, u)
}

fn loss_closure(c: &Configuration) -> BTreeSet<Configuration> {
    let mut seen = BTreeSet::from([c.clone()]);
    let mut stack = vec![c.clone()];
    while let Some(x) = stack.pop() {
        for y in step_lossy(&x) {
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen
}

/// Compares, within `cap`, reachability of `v` from `u` under interleaved
/// single losses against the phased relation `l* (→ l*)*`.
pub fn semantics_equivalence_probe(cs: &ChannelSystem, u: &Configuration, v: &Configuration, cap: usize) -> bool {
    let interleaved = reach_bounded(cs, u, v, cap, None).is_yes();
    let mut seen: BTreeSet<Configuration> = loss_closure(u);
    let mut layer: Vec<Configuration> = seen.iter().cloned().collect();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for c in &layer {
            for (n, _) in cs.step_perfect(c) {
                if !within(&n, cap) {
                    continue;
                }
                for m in loss_closure(&n) {
                    if seen.insert(m.clone()) {
                        next.push(m);
                    }
                }
            }
        }
        layer = next;
    }
    interleaved == seen.contains(v)
}
