//! Rewriting deductions from regular theories so that every cut has a theory
//! leaf as its left premise.

use super::derivation::{weaken_to, Derivation, Justification};
use super::matching::match_instance;
use super::schema::{AntecedentItem, RuleSchema, SuccedentPattern, Substitution};
use super::{check_deduction, is_regular, Calculus};
use crate::error::{Error, Result};
use crate::syntax::{Formula, Sequent, Theory};

pub fn normalize_to_standard(c: &Calculus, t: &Theory, d: &Derivation) -> Result<Derivation> {
    if c.amenability_assumed() {
        return Err(Error::InvalidInput("normalization covers the builtin rules only".into()));
    }
    if !is_regular(t) {
        return Err(Error::InvalidInput("theory is not regular".into()));
    }
    let report = check_deduction(c, t, d, None);
    if !report.valid {
        let (path, why) = report.violations.first().cloned().unwrap_or_default();
        return Err(Error::InvalidInput(format!("invalid deduction at {path}: {why}")));
    }
    Normalizer { c }.normalize(d)
}

struct Normalizer<'a> {
    c: &'a Calculus,
}

fn bug(msg: impl Into<String>) -> Error {
    Error::InternalInvariantViolated(msg.into())
}

fn splice(outer: &[Formula], k: usize, inner: &[Formula]) -> Vec<Formula> {
    let mut v = outer[..k].to_vec();
    v.extend_from_slice(inner);
    v.extend_from_slice(&outer[k + 1..]);
    v
}

impl<'a> Normalizer<'a> {
    fn resolve(&self, d: &Derivation) -> Result<(&'a RuleSchema, Substitution)> {
        let Justification::Rule { rule, subst, children } = &d.justification else {
            return Err(bug("theory leaf has no schema"));
        };
        let premises: Vec<Sequent> = children.iter().map(|ch| ch.sequent.clone()).collect();
        let c: &'a Calculus = self.c;
        for r in c.rules.iter().filter(|r| &r.name == rule && r.arity() == children.len()) {
            if r.instantiate(subst).is_some_and(|(p, s)| p == premises && s == d.sequent) {
                return Ok((r, subst.clone()));
            }
        }
        for r in c.rules.iter().filter(|r| &r.name == rule) {
            if let Some(s) = match_instance(r, &premises, &d.sequent) {
                return Ok((r, s));
            }
        }
        Err(bug(format!("node {} is not an instance of {rule}", d.sequent)))
    }

    fn normalize(&self, d: &Derivation) -> Result<Derivation> {
        let Justification::Rule { rule, children, .. } = &d.justification else {
            return Ok(d.clone());
        };
        let (_, subst) = self.resolve(d)?;
        let mut kids = children.iter().map(|ch| self.normalize(ch)).collect::<Result<Vec<_>>>()?;
        if rule == "cut" && !kids[0].is_theory_leaf() {
            let k = subst.sequences.get("G1").map_or(0, Vec::len);
            let right = kids.pop().ok_or_else(|| bug("cut without premises"))?;
            let left = kids.pop().ok_or_else(|| bug("cut without premises"))?;
            return self.elim(left, right, k);
        }
        Derivation::apply(self.c, rule, subst, kids)
    }

    /// A standard deduction of `Δ1, Γ, Δ2 ⊢ Π` from standard deductions of
    /// `Γ ⊢ α` and `Δ1, α, Δ2 ⊢ Π`, where `α` sits at position `k`.
    fn elim(&self, l: Derivation, r: Derivation, k: usize) -> Result<Derivation> {
        let alpha = r.sequent.antecedent.get(k).ok_or_else(|| bug("cut position out of range"))?;
        if l.sequent.succedent.as_ref() != Some(alpha) {
            return Err(bug("cut formula mismatch"));
        }
        let target = splice(&r.sequent.antecedent, k, &l.sequent.antecedent);
        let out = self.elim_inner(l, r, k)?;
        if out.sequent.antecedent != target {
            return Err(bug(format!("cut reduction produced {}", out.sequent)));
        }
        Ok(out)
    }

    fn elim_inner(&self, l: Derivation, r: Derivation, k: usize) -> Result<Derivation> {
        let Some(lrule) = l.rule().map(str::to_string) else {
            return self.cut_node(l, r, k);
        };
        match lrule.as_str() {
            "id" => Ok(r),
            "wr" | "R0" => {
                let premise = l.children()[0].clone();
                let target = splice(&r.sequent.antecedent, k, &l.sequent.antecedent);
                let w = weaken_to(premise, &target)?;
                match &r.sequent.succedent {
                    None => Ok(w),
                    Some(pi) => {
                        let subst = Substitution::new().seq("G1", target).formula("A", pi.clone());
                        Derivation::apply(self.c, "wr", subst, vec![w])
                    }
                }
            }
            _ => {
                let (schema, subst) = self.resolve(&l)?;
                if matches!(schema.conclusion.succedent, SuccedentPattern::Meta(_)) {
                    self.permute_left(l, schema, subst, r, k)
                } else {
                    self.push_right(l, r, k)
                }
            }
        }
    }

    fn cut_node(&self, l: Derivation, r: Derivation, k: usize) -> Result<Derivation> {
        let ante = &r.sequent.antecedent;
        let subst = Substitution::new()
            .seq("G3", l.sequent.antecedent.clone())
            .formula("A", ante[k].clone())
            .seq("G1", ante[..k].to_vec())
            .seq("G2", ante[k + 1..].to_vec())
            .succedent("P", r.sequent.succedent.clone());
        Derivation::apply(self.c, "cut", subst, vec![l, r])
    }

    /// The left premise ends in a rule acting on its antecedent: push the cut
    /// into the premises that carry the cut formula as succedent.
    fn permute_left(&self, l: Derivation, schema: &RuleSchema, subst: Substitution, r: Derivation, k: usize) -> Result<Derivation> {
        let items = &schema.conclusion.antecedent;
        let (Some(AntecedentItem::Seq(x)), Some(AntecedentItem::Seq(y))) = (items.first(), items.last()) else {
            return Err(bug(format!("rule {} has no outer context", schema.name)));
        };
        let SuccedentPattern::Meta(pv) = &schema.conclusion.succedent else {
            return Err(bug("left rule without succedent variable"));
        };
        if x == y {
            return Err(bug(format!("rule {} has a single context", schema.name)));
        }
        let ante = &r.sequent.antecedent;
        let mut ns = subst.clone();
        let mut left_ctx = ante[..k].to_vec();
        left_ctx.extend(subst.sequences.get(x).cloned().unwrap_or_default());
        let mut right_ctx = subst.sequences.get(y).cloned().unwrap_or_default();
        right_ctx.extend_from_slice(&ante[k + 1..]);
        ns.sequences.insert(x.clone(), left_ctx);
        ns.sequences.insert(y.clone(), right_ctx);
        ns.succedents.insert(pv.clone(), r.sequent.succedent.clone());

        let rule = schema.name.clone();
        let Justification::Rule { children, .. } = l.justification else {
            return Err(bug("expected a rule node"));
        };
        let mut kids = Vec::with_capacity(children.len());
        for (prem, ch) in schema.premises.iter().zip(children) {
            if prem.succedent == schema.conclusion.succedent {
                let ok = matches!(prem.antecedent.first(), Some(AntecedentItem::Seq(v)) if v == x)
                    && matches!(prem.antecedent.last(), Some(AntecedentItem::Seq(v)) if v == y);
                if !ok {
                    return Err(bug(format!("premise of {rule} does not keep the outer context")));
                }
                kids.push(self.elim(ch, r.clone(), k)?);
            } else {
                kids.push(ch);
            }
        }
        Derivation::apply(self.c, &rule, ns, kids)
    }

    /// The left premise introduces the cut formula on the right: inspect where
    /// the occurrence comes from in the right premise.
    fn push_right(&self, l: Derivation, r: Derivation, k: usize) -> Result<Derivation> {
        if r.is_theory_leaf() {
            return Err(bug("compound cut formula in a regular theory antecedent"));
        }
        let (schema, rsub) = self.resolve(&r)?;
        let mut offset = 0;
        for item in &schema.conclusion.antecedent {
            let len = match item {
                AntecedentItem::Seq(v) => rsub.sequences.get(v).map_or(0, Vec::len),
                AntecedentItem::Formula(_) => 1,
            };
            if k < offset + len {
                return match item {
                    AntecedentItem::Seq(x) => {
                        let x = x.clone();
                        self.permute_right(l, r, schema, rsub, &x, k - offset)
                    }
                    AntecedentItem::Formula(_) => self.principal(l, r, schema, rsub, k),
                };
            }
            offset += len;
        }
        Err(bug("cut position outside the conclusion"))
    }

    fn permute_right(&self, l: Derivation, r: Derivation, schema: &RuleSchema, rsub: Substitution, x: &str, j: usize) -> Result<Derivation> {
        let mut ns = rsub.clone();
        let old = rsub.sequences.get(x).cloned().unwrap_or_default();
        ns.sequences.insert(x.into(), splice(&old, j, &l.sequent.antecedent));
        let Justification::Rule { children, .. } = r.justification else {
            return Err(bug("expected a rule node"));
        };
        let mut kids = Vec::with_capacity(children.len());
        for (prem, ch) in schema.premises.iter().zip(children) {
            match prem.seq_occurrences(x) {
                0 => kids.push(ch),
                1 => {
                    let mut pos = 0;
                    for item in &prem.antecedent {
                        match item {
                            AntecedentItem::Seq(v) if &**v == x => break,
                            AntecedentItem::Seq(v) => pos += rsub.sequences.get(v).map_or(0, Vec::len),
                            AntecedentItem::Formula(_) => pos += 1,
                        }
                    }
                    kids.push(self.elim(l.clone(), ch, pos + j)?);
                }
                _ => return Err(bug(format!("context {x} repeated in a premise of {}", schema.name))),
            }
        }
        Derivation::apply(self.c, &schema.name, ns, kids)
    }

    /// The cut formula is principal on both sides.
    fn principal(&self, l: Derivation, r: Derivation, schema: &RuleSchema, rsub: Substitution, k: usize) -> Result<Derivation> {
        let lrule = l.rule().unwrap_or("").to_string();
        let rname = schema.name.as_str();
        let expect = |want: &str| -> Result<()> {
            if lrule == want {
                Ok(())
            } else {
                Err(bug(format!("principal cut pairs {lrule} with {rname}")))
            }
        };
        let target = splice(&r.sequent.antecedent, k, &l.sequent.antecedent);
        let g2 = rsub.sequences.get("G2").map_or(0, Vec::len);
        let lk: Vec<Derivation> = l.children().to_vec();
        let rk: Vec<Derivation> = r.children().to_vec();
        match rname {
            "wl" => weaken_to(rk[0].clone(), &target),
            "Lfus" => {
                expect("Rfus")?;
                let step = self.elim(lk[1].clone(), rk[0].clone(), k + 1)?;
                self.elim(lk[0].clone(), step, k)
            }
            "Land" => {
                expect("Rand")?;
                let chosen = &rk[0].sequent.antecedent[k];
                let side = if lk[0].sequent.succedent.as_ref() == Some(chosen) { 0 } else { 1 };
                self.elim(lk[side].clone(), rk[0].clone(), k)
            }
            "Lor" => {
                expect("Ror")?;
                let proved = lk[0].sequent.succedent.as_ref();
                let side = if rk[0].sequent.antecedent.get(k) == proved { 0 } else { 1 };
                self.elim(lk[0].clone(), rk[side].clone(), k)
            }
            "Lunder" => {
                expect("Runder")?;
                let step = self.elim(rk[0].clone(), lk[0].clone(), 0)?;
                self.elim(step, rk[1].clone(), g2)
            }
            "Lover" => {
                expect("Rover")?;
                let last = lk[0].sequent.antecedent.len().saturating_sub(1);
                let step = self.elim(rk[0].clone(), lk[0].clone(), last)?;
                self.elim(step, rk[1].clone(), g2)
            }
            "L1" => {
                expect("R1")?;
                Ok(rk[0].clone())
            }
            _ => Err(bug(format!("no reduction for {lrule} against {rname}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::builtin_calculus;
    use crate::syntax::{parse_theory, Fragment};

    fn tensor() -> Calculus {
        builtin_calculus(Fragment::parse("*").unwrap())
    }

    fn normalized(c: &Calculus, t: &Theory, text: &str) -> (Derivation, Derivation) {
        let d = Derivation::parse(text, c).unwrap();
        assert!(check_deduction(c, t, &d, None).valid, "input invalid");
        let n = normalize_to_standard(c, t, &d).unwrap();
        let rep = check_deduction(c, t, &n, None);
        assert!(rep.valid && rep.standard && rep.analytic, "{rep:?}\n{}", n.to_sexpr());
        assert_eq!(n.sequent, d.sequent);
        (d, n)
    }

    #[test]
    fn standard_input_unchanged() {
        let c = tensor();
        let t = parse_theory("p |- q").unwrap();
        let (d, n) = normalized(&c, &t, r#"(node "p, r |- q" cut (theory "p |- q") (node "q, r |- q" wl (node "q |- q" id)))"#);
        assert_eq!(d, n);
    }

    #[test]
    fn identity_against_theory_leaf() {
        let c = tensor();
        let t = parse_theory("a, p, b |- f").unwrap();
        let (_, n) = normalized(&c, &t, r#"(node "a, p, b |- f" cut (node "p |- p" id) (theory "a, p, b |- f"))"#);
        assert_eq!(n, Derivation::theory("a, p, b |- f".parse().unwrap()));
    }

    #[test]
    fn cut_above_tensor_left() {
        let c = tensor();
        let t = parse_theory("a, b |- p\np |- q").unwrap();
        let text = r#"
(node "a * b |- q" cut
  (node "a * b |- p" Lfus (theory "a, b |- p"))
  (theory "p |- q"))"#;
        let (_, n) = normalized(&c, &t, text);
        assert_eq!(n.rule(), Some("Lfus"));
        assert_eq!(n.children()[0].rule(), Some("cut"));
    }

    #[test]
    fn principal_tensor_reduction() {
        let c = tensor();
        let t = parse_theory("x |- a\ny |- b\na, b |- r").unwrap();
        let text = r#"
(node "x, y |- r" cut
  (node "x, y |- a * b" Rfus (theory "x |- a") (theory "y |- b"))
  (node "a * b |- r" Lfus (theory "a, b |- r")))"#;
        let (_, n) = normalized(&c, &t, text);
        assert_eq!(n.count_rule("cut"), 2);
        assert_eq!(n.count_rule("Rfus"), 0);
    }

    #[test]
    fn weakened_right_premise_and_right_weakening() {
        let c = builtin_calculus(Fragment::full());
        let t = parse_theory("x |- a\nz |- q").unwrap();
        let text = r#"
(node "z, x |- q" cut
  (node "x |- a /\ a" Rand (theory "x |- a") (theory "x |- a"))
  (node "z, a /\ a |- q" wl (theory "z |- q")))"#;
        normalized(&c, &t, text);
        let t2 = parse_theory("z |- q").unwrap();
        let text = r#"
(node "0, z |- q" cut
  (node "0 |- top" wr (node "0 |-" L0))
  (node "top, z |- q" wl (theory "z |- q")))"#;
        normalized(&c, &t2, text);
    }

    #[test]
    fn residual_reductions() {
        let c = builtin_calculus(Fragment::full());
        let t = parse_theory("x |- a\nb |- r\ny, a |- b\na, w |- b").unwrap();
        let under = r#"
(node "x, w |- r" cut
  (node "w |- a \ b" Runder (theory "a, w |- b"))
  (node "x, a \ b |- r" Lunder (theory "x |- a") (theory "b |- r")))"#;
        normalized(&c, &t, under);
        let over = r#"
(node "y, x |- r" cut
  (node "y |- b / a" Rover (theory "y, a |- b"))
  (node "b / a, x |- r" Lover (theory "x |- a") (theory "b |- r")))"#;
        normalized(&c, &t, over);
    }

    #[test]
    fn join_and_unit_reductions() {
        let c = builtin_calculus(Fragment::full());
        let t = parse_theory("x |- a\na |- r\nb |- r\nz |- r").unwrap();
        let join = r#"
(node "x |- r" cut
  (node "x |- a \/ b" Ror (theory "x |- a"))
  (node "a \/ b |- r" Lor (theory "a |- r") (theory "b |- r")))"#;
        normalized(&c, &t, join);
        let unit = r#"
(node "z |- r" cut
  (node "|- 1" R1)
  (node "1, z |- r" L1 (theory "z |- r")))"#;
        normalized(&c, &t, unit);
    }

    #[test]
    fn nested_non_standard_cuts() {
        let c = tensor();
        let t = parse_theory("p |- q\nq |- r\nr |- s").unwrap();
        let text = r#"
(node "p |- s" cut
  (node "p |- r" cut (theory "p |- q") (theory "q |- r"))
  (theory "r |- s"))"#;
        let (_, n) = normalized(&c, &t, text);
        assert_eq!(n.count_rule("cut"), 2);
    }

    #[test]
    fn rejects_invalid_input() {
        let c = tensor();
        let t = parse_theory("p |- q").unwrap();
        let d = Derivation::parse(r#"(theory "q |- p")"#, &c).unwrap();
        assert!(matches!(normalize_to_standard(&c, &t, &d), Err(Error::InvalidInput(_))));
        let t2 = parse_theory("p * q |- q").unwrap();
        let d2 = Derivation::parse(r#"(theory "p * q |- q")"#, &c).unwrap();
        assert!(matches!(normalize_to_standard(&c, &t2, &d2), Err(Error::InvalidInput(_))));
    }
}
