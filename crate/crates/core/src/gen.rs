//! Seeded random instances: channel systems, small fusion-fragment deducibility
//! problems and valid deductions containing non-standard cuts.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::calculus::{Calculus, Derivation, Substitution};
use crate::error::Result;
use crate::lcs::{ChannelSystem, Configuration, Instruction, LcsInstance, Op};
use crate::syntax::{subformula_closure, Formula, Sequent, Theory};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Upper limits for random channel systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LcsCaps {
    pub states: usize,
    pub channels: usize,
    pub letters: usize,
    pub instructions: usize,
    pub word_len: usize,
}

impl Default for LcsCaps {
    fn default() -> Self {
        LcsCaps { states: 3, channels: 2, letters: 2, instructions: 4, word_len: 2 }
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn random_configuration<R: Rng>(rng: &mut R, cs: &ChannelSystem, word_len: usize) -> Configuration {
    let words = (0..cs.channels.len())
        .map(|_| {
            let n = rng.gen_range(0..=word_len);
            (0..n).map(|_| rng.gen_range(0..cs.alphabet.len())).collect()
        })
        .collect();
    Configuration::new(rng.gen_range(0..cs.states.len()), words)
}

/// A system within `caps` together with a source and a target configuration.
pub fn random_lcs<R: Rng>(rng: &mut R, caps: LcsCaps) -> LcsInstance {
    let states = names("q", rng.gen_range(1..=caps.states));
    let channels = names("c", rng.gen_range(1..=caps.channels));
    let letters = rng.gen_range(1..=caps.letters);
    let alphabet: Vec<String> = ["a", "b", "c", "d"].iter().take(letters).map(|s| s.to_string()).collect();
    let mut instructions: Vec<Instruction> = (0..rng.gen_range(0..=caps.instructions))
        .map(|_| Instruction {
            from: rng.gen_range(0..states.len()),
            channel: rng.gen_range(0..channels.len()),
            letter: rng.gen_range(0..letters),
            op: if rng.gen_bool(0.5) { Op::Read } else { Op::Write },
            to: rng.gen_range(0..states.len()),
        })
        .collect();
    instructions.sort();
    instructions.dedup();
    let system = ChannelSystem::new(states, channels, alphabet, instructions).expect("names are distinct");
    let init = random_configuration(rng, &system, caps.word_len);
    let target = random_configuration(rng, &system, caps.word_len);
    LcsInstance { system, init: Some(init), target: Some(target) }
}

/// A deducibility problem in the fusion fragment: a regular theory of at most
/// `max_theory` sequents and a goal, with at most `max_phi` subformulas overall.
pub fn random_micro_instance<R: Rng>(rng: &mut R, max_phi: usize, max_theory: usize) -> (Theory, Sequent) {
    let vars: Vec<Formula> = ["p", "q", "r"].iter().map(|v| Formula::var(v)).collect();
    loop {
        let formula = |rng: &mut R, fuse: f64| -> Formula {
            let a = vars.choose(rng).expect("nonempty").clone();
            if rng.gen_bool(fuse) {
                Formula::fusion(a, vars.choose(rng).expect("nonempty").clone())
            } else {
                a
            }
        };
        let theory: Vec<Sequent> = (0..rng.gen_range(0..=max_theory))
            .map(|_| {
                let n = rng.gen_range(1..=2);
                let ante = (0..n).map(|_| vars.choose(rng).expect("nonempty").clone()).collect();
                Sequent::new(ante, Some(formula(rng, 0.3)))
            })
            .collect();
        let n = rng.gen_range(0..=3);
        let ante = (0..n).map(|_| formula(rng, 0.25)).collect();
        let goal = Sequent::new(ante, Some(formula(rng, 0.4)));
        let t = Theory::new(theory);
        if subformula_closure(t.iter().chain([&goal])).len() <= max_phi {
            return (t, goal);
        }
    }
}

struct Builder<'a, R> {
    rng: &'a mut R,
    c: &'a Calculus,
    theory: Vec<Sequent>,
    vars: Vec<Formula>,
}

impl<R: Rng> Builder<'_, R> {
    fn var(&mut self) -> Formula {
        self.vars.choose(self.rng).expect("nonempty").clone()
    }

    fn id(&self, p: Formula) -> Result<Derivation> {
        Derivation::apply(self.c, "id", Substitution::new().formula("p", p), vec![])
    }

    /// `A ⊢ A` for a fusion of variables.
    fn identity(&self, f: &Formula) -> Result<Derivation> {
        match f {
            Formula::Bin(_, l, r) => {
                let both = self.rfus(self.identity(l)?, self.identity(r)?)?;
                self.lfus(both, 0)
            }
            _ => self.id(f.clone()),
        }
    }

    fn rfus(&self, l: Derivation, r: Derivation) -> Result<Derivation> {
        let sub = Substitution::new()
            .seq("G1", l.sequent.antecedent.clone())
            .seq("G2", r.sequent.antecedent.clone())
            .formula("A", l.sequent.succedent.clone().expect("nonempty succedent"))
            .formula("B", r.sequent.succedent.clone().expect("nonempty succedent"));
        Derivation::apply(self.c, "Rfus", sub, vec![l, r])
    }

    fn lfus(&self, d: Derivation, pos: usize) -> Result<Derivation> {
        let a = &d.sequent.antecedent;
        let sub = Substitution::new()
            .seq("G1", a[..pos].to_vec())
            .formula("A", a[pos].clone())
            .formula("B", a[pos + 1].clone())
            .seq("G2", a[pos + 2..].to_vec())
            .succedent("P", d.sequent.succedent.clone());
        Derivation::apply(self.c, "Lfus", sub, vec![d])
    }

    fn wl(&self, d: Derivation, pos: usize, f: Formula) -> Result<Derivation> {
        let a = &d.sequent.antecedent;
        let sub = Substitution::new()
            .seq("G1", a[..pos].to_vec())
            .formula("A", f)
            .seq("G2", a[pos..].to_vec())
            .succedent("P", d.sequent.succedent.clone());
        Derivation::apply(self.c, "wl", sub, vec![d])
    }

    fn cut(&self, l: Derivation, r: Derivation, pos: usize) -> Result<Derivation> {
        let a = &r.sequent.antecedent;
        let sub = Substitution::new()
            .seq("G1", a[..pos].to_vec())
            .formula("A", a[pos].clone())
            .seq("G2", a[pos + 1..].to_vec())
            .seq("G3", l.sequent.antecedent.clone())
            .succedent("P", r.sequent.succedent.clone());
        Derivation::apply(self.c, "cut", sub, vec![l, r])
    }

    fn leaf(&mut self) -> Result<Derivation> {
        if !self.theory.is_empty() && self.rng.gen_bool(0.5) {
            let s = self.theory.choose(self.rng).expect("nonempty").clone();
            return Ok(Derivation::theory(s));
        }
        let v = self.var();
        self.id(v)
    }

    fn tree(&mut self, depth: usize) -> Result<Derivation> {
        if depth == 0 {
            return self.leaf();
        }
        match self.rng.gen_range(0..5) {
            0 => self.leaf(),
            1 => {
                let (l, r) = (self.tree(depth - 1)?, self.tree(depth - 1)?);
                self.rfus(l, r)
            }
            2 => {
                let d = self.tree(depth - 1)?;
                let n = d.sequent.antecedent.len();
                if n < 2 {
                    return Ok(d);
                }
                let pos = self.rng.gen_range(0..n - 1);
                self.lfus(d, pos)
            }
            3 => {
                let d = self.tree(depth - 1)?;
                let pos = self.rng.gen_range(0..=d.sequent.antecedent.len());
                let v = self.var();
                self.wl(d, pos, v)
            }
            _ => self.nonstandard_cut(depth - 1),
        }
    }

    /// A cut whose left premise is not a theory leaf.
    fn nonstandard_cut(&mut self, depth: usize) -> Result<Derivation> {
        let mut l = self.tree(depth)?;
        if l.is_theory_leaf() {
            let v = l.sequent.succedent.clone().expect("regular theory");
            l = self.rfus(l, self.id(v.clone())?)?;
            if self.rng.gen_bool(0.5) {
                l = self.lfus(l.clone(), 0).unwrap_or(l);
            }
        }
        let a = l.sequent.succedent.clone().expect("nonempty succedent");
        let (r, pos) = match self.rng.gen_range(0..3) {
            0 => (self.identity(&a)?, 0),
            1 => {
                let other = self.tree(depth)?;
                if self.rng.gen_bool(0.5) {
                    (self.rfus(self.identity(&a)?, other)?, 0)
                } else {
                    let k = other.sequent.antecedent.len();
                    (self.rfus(other, self.identity(&a)?)?, k)
                }
            }
            _ => {
                let other = self.tree(depth)?;
                let pos = self.rng.gen_range(0..=other.sequent.antecedent.len());
                (self.wl(other, pos, a)?, pos)
            }
        };
        self.cut(l, r, pos)
    }
}

/// A valid deduction in the fusion fragment from `t` whose root is a
/// non-standard cut. `t` must be regular with variable or fusion succedents.
pub fn random_deduction<R: Rng>(rng: &mut R, c: &Calculus, t: &Theory, depth: usize) -> Result<Derivation> {
    let mut vars: Vec<Formula> = t
        .iter()
        .flat_map(|s| s.antecedent.iter().cloned())
        .filter(Formula::is_var)
        .collect();
    vars.extend(["p", "q"].iter().map(|v| Formula::var(v)));
    vars.sort();
    vars.dedup();
    let theory = t.iter().cloned().collect();
    let mut b = Builder { rng, c, theory, vars };
    b.nonstandard_cut(depth)
}
