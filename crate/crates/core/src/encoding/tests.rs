use super::*;
use crate::calculus::{check_deduction, is_regular};
use crate::lcs::{intro_system, parse_lcs, reach_exact_witness};
use crate::saturation::{decide, Config};

fn sq(s: &str) -> Sequent {
    s.parse().unwrap()
}

fn short_names() -> BTreeMap<&'static str, &'static str> {
    [
        ("Q_q1", "Q1"),
        ("Q_q2", "Q2"),
        ("s_1", "s1"),
        ("e_1", "e1"),
        ("s_2", "s2"),
        ("e_2", "e2"),
        ("A_a", "A"),
        ("A_b", "B"),
    ]
    .into_iter()
    .collect()
}

fn intro() -> (ChannelSystem, Configuration, Configuration) {
    let cs = intro_system();
    let u = cs.parse_configuration("q1 : a a ; b").unwrap();
    let v = cs.parse_configuration("q2 : a ; b").unwrap();
    (cs, u, v)
}

#[test]
fn intro_golden_sequent() {
    let cs = intro_system();
    let u = cs.parse_configuration("q1 : a a ; b").unwrap();
    let v = cs.parse_configuration("q2 : a a ; b").unwrap();
    let g = encode_problem(&cs, &u, &v).unwrap();
    assert_eq!(
        g.to_string(),
        "Q_q1, s_1, A_a, A_a, e_1, s_2, A_b, e_2 |- Q_q2 * (s_1 * (A_a * (A_a * (e_1 * (s_2 * (A_b * e_2))))))"
    );
    let (cs, u, v) = intro();
    let g = rename(&encode_problem(&cs, &u, &v).unwrap(), &short_names());
    assert_eq!(g.to_string(), "Q1, s1, A, A, e1, s2, B, e2 |- Q2 * (s1 * (A * (e1 * (s2 * (B * e2)))))");
}

#[test]
fn configuration_encodings() {
    let (cs, u, _) = intro();
    let voc = LcsVocabulary::new(&cs).unwrap();
    let names: Vec<String> = encode_conf(&voc, &u).iter().map(rename_f).collect();
    assert_eq!(names, ["Q1", "s1", "A", "A", "e1", "s2", "B", "e2"]);
    for c in ["q1 : ;", "q2 : b ; a a b"] {
        let c = cs.parse_configuration(c).unwrap();
        assert_eq!(encode_conf(&voc, &c).len(), 1 + 2 * 2 + c.size());
    }
    let one = parse_lcs("states: q\nchannels: c\nalphabet: a").unwrap().system;
    let e = one.parse_configuration("q :").unwrap();
    assert_eq!(encode_problem(&one, &e, &e).unwrap(), sq("Q_q, s_1, e_1 |- Q_q * (s_1 * e_1)"));
}

fn rename_f(f: &Formula) -> String {
    let s = Sequent::new(vec![f.clone()], None);
    rename(&s, &short_names()).antecedent[0].to_string()
}

#[test]
fn theory_shapes() {
    let cs = parse_lcs("states: q1 q2\nchannels: c1\nalphabet: a\nq1 c1 a ? q2").unwrap().system;
    let t = theory_of(&cs).unwrap();
    assert!(t.contains(&sq("s_1, A_a, Q_q1 |- s_1 * Q_q2")));
    assert_eq!(t.len(), 1 + 12);
    assert!(is_regular(&t));
    let bare = parse_lcs("states: q\nchannels: c\nalphabet: a b").unwrap().system;
    let t = theory_of(&bare).unwrap();
    assert_eq!(t.len(), 2 * 4);
    let w = parse_lcs("states: q1 q2\nchannels: c1\nalphabet: a\nq1 c1 a ! q2").unwrap().system;
    assert!(theory_of(&w).unwrap().contains(&sq("e_1, Q_q1 |- A_a * (e_1 * Q_q2)")));
}

#[test]
fn name_collisions_rejected() {
    let cs = ChannelSystem::new(
        vec!["x".into(), "y".into()],
        vec!["c".into()],
        vec!["a".into()],
        vec![],
    )
    .unwrap();
    assert!(LcsVocabulary::new(&cs).is_ok());
    let bad = ChannelSystem::new(vec!["1x".into()], vec!["c".into()], vec!["a-b".into()], vec![]).unwrap();
    assert!(LcsVocabulary::new(&bad).is_err());
}

#[test]
fn commuted_goal_set() {
    let (cs, u, v) = intro();
    let goals = commuted_encodings(&cs, &u, &v).unwrap();
    assert_eq!(goals.len(), 8);
    let canonical = encode_problem(&cs, &u, &v).unwrap();
    assert!(goals.contains(&canonical));
    for g in &goals {
        assert_eq!(g.succedent, canonical.succedent);
        let mut rest = g.antecedent.clone();
        rest.retain(|f| f.as_var() != Some("Q_q1"));
        assert_eq!(rest, canonical.antecedent[1..]);
    }
}

fn compiled(cs: &ChannelSystem, u: &Configuration, steps: &[Step], v: &Configuration) -> Derivation {
    let d = compile_computation(cs, u, steps, v).unwrap();
    let r = check_deduction(&encoding_calculus(), &theory_of(cs).unwrap(), &d, None);
    assert!(r.valid && r.standard, "{:?}", r.violations);
    assert_eq!(d.sequent, encode_problem(cs, u, v).unwrap());
    d
}

#[test]
fn empty_trace_compiles_to_fusions() {
    let (cs, u, _) = intro();
    let d = compiled(&cs, &u, &[], &u);
    assert_eq!(d.theory_leaves(), 0);
    assert_eq!(d.count_rule("id"), 8);
    assert_eq!(d.count_rule("Rfus"), 7);
}

#[test]
fn single_read_compiles() {
    let (cs, u, v) = intro();
    let d = compiled(&cs, &u, &[Step::Perfect(0)], &v);
    let t = theory_of(&cs).unwrap();
    let reads: Vec<&Derivation> = d
        .nodes()
        .into_iter()
        .filter(|n| n.is_theory_leaf() && n.sequent == sq("s_1, A_a, Q_q1 |- s_1 * Q_q2"))
        .collect();
    assert_eq!(reads.len(), 1);
    assert!(d.nodes().iter().filter(|n| n.is_theory_leaf()).all(|n| t.contains(&n.sequent)));
    // one relocation to reach the marker and two back to the front
    assert_eq!(d.count_rule("cut"), 4);
    assert_eq!(d.count_rule("Lfus"), 4);
}

#[test]
fn single_loss_adds_one_weakening() {
    let (cs, u, _) = intro();
    let v = cs.parse_configuration("q1 : a ; b").unwrap();
    let d = compiled(&cs, &u, &[Step::Lose { channel: 0, pos: 1 }], &v);
    assert_eq!(d.count_rule("wl"), 1);
    assert_eq!(d.children()[0].count_rule("wl"), 0);
}

#[test]
fn writes_and_mixed_traces_compile() {
    let cs = parse_lcs("states: p q\nchannels: c d\nalphabet: a b\np d b ! q\nq c a ? p\nq d a ! p").unwrap().system;
    let u = cs.parse_configuration("p : a b ; a").unwrap();
    let v = cs.parse_configuration("p : b ; b").unwrap();
    let w = reach_exact_witness(&cs, &u, &v).unwrap();
    compiled(&cs, &u, &w, &v);
    let bad = [Step::Perfect(1)];
    assert!(matches!(compile_computation(&cs, &u, &bad, &v), Err(Error::InvalidTrace(_))));
}

#[test]
fn reduction_decides_small_instances() {
    let cs = parse_lcs("states: q1 q2\nchannels: c\nalphabet: a\nq1 c a ? q2").unwrap().system;
    let u = cs.parse_configuration("q1 : a").unwrap();
    let yes = cs.parse_configuration("q2 :").unwrap();
    let inst = reduce(&cs, &u, &yes).unwrap();
    let v = decide(&encoding_calculus(), &inst.theory, &inst.commuted_goals, Config::default()).unwrap();
    assert!(v.answer);
    let no = reduce(&cs, &yes, &u).unwrap();
    let v = decide(&encoding_calculus(), &no.theory, &no.commuted_goals, Config::default()).unwrap();
    assert!(!v.answer);
}

#[test]
fn lemma_checks_hold_on_a_frontier() {
    let cs = parse_lcs("states: q1 q2\nchannels: c\nalphabet: a\nq1 c a ? q2").unwrap().system;
    let u = cs.parse_configuration("q1 : a").unwrap();
    let v = cs.parse_configuration("q2 :").unwrap();
    let inst = reduce(&cs, &u, &v).unwrap();
    let state =
        crate::saturation::saturate(&encoding_calculus(), &inst.theory, &inst.commuted_goals, Config::default())
            .unwrap();
    let r = lemma_property_suite(&state.frontier(), &inst.vocabulary);
    assert!(r.passed(), "{:?}", r.violations);
    assert!(r.checked > 0);
    assert!(lemma_property_suite(&[], &inst.vocabulary).passed());
}

#[test]
fn lemma_checks_catch_violations() {
    let cs = parse_lcs("states: q1 q2\nchannels: c\nalphabet: a").unwrap().system;
    let voc = LcsVocabulary::new(&cs).unwrap();
    let bad = [
        (LemmaCheck::NonemptySuccedent, sq("Q_q1 |-")),
        (LemmaCheck::StateFreeSubword, sq("s_1 |- A_a")),
        (LemmaCheck::MarkersOccur, sq("Q_q1, A_a |- Q_q1 * (s_1 * A_a)")),
        (LemmaCheck::StateOnLeft, sq("s_1 |- Q_q2 * s_1")),
    ];
    for (check, s) in bad {
        let r = lemma_property_suite([&s], &voc);
        assert!(r.violations.iter().any(|(c, _)| *c == check), "{s}: {:?}", r.violations);
    }
    let fine = [sq("Q_q1, s_1 |- Q_q1 * s_1"), sq("s_1, A_a |- s_1 * A_a"), sq("e_1, Q_q1 |- A_a * (e_1 * Q_q2)")];
    let r = lemma_property_suite(&fine, &voc);
    assert!(r.passed(), "{:?}", r.violations);
}
