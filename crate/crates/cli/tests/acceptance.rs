//! Acceptance run: one pass/fail line per criterion, nonzero exit on any failure.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use flw_cli::xcheck::{check_instance, load_corpus, run_batch, small_enough, DecideOutcome, DecideScope, XcheckOptions};
use flw_core::calculus::check_deduction;
use flw_core::encoding::{
    compile_computation, encoding_calculus, lemma_property_suite, reduce, rename, theory_of, LcsVocabulary,
};
use flw_core::gen::{random_deduction, random_lcs, random_micro_instance, rng, LcsCaps};
use flw_core::lcs::{intro_system, parse_lcs, Step};
use flw_core::saturation::{bounded_closure_oracle, bounds_report, saturate, verdict, SaturationError, SaturationState};
use flw_core::syntax::{parse_theory, subformula_closure, translate_sequent};
use flw_core::wqo::{disjoint_sum_leq, seq_embed, subword_embed, Antichain, SequentOrder};
use flw_core::{builtin_calculus, normalize_to_standard, Calculus, Config, Engine, Formula, Fragment, Sequent, Theory};
use rand::seq::SliceRandom;
use rand::Rng;

const INTRO_MAX_RUNTIME: Duration = Duration::from_secs(1);
const INTRO_GOLDEN: &str = "Q1, s1, A, A, e1, s2, B, e2 |- Q2 * (s1 * (A * (e1 * (s2 * (B * e2)))))";

const XCHECK_SEED: u64 = 42;
const XCHECK_RANDOM: usize = 50;
const XCHECK_CAP: usize = 4;
const XCHECK_MIN_DECIDED: usize = 10;
const XCHECK_DECIDE_BUDGET: Duration = Duration::from_secs(30);
const XCHECK_TOTAL_BUDGET: Duration = Duration::from_secs(600);

const ORACLE_SEED: u64 = 3;
const ORACLE_INSTANCES: usize = 100;
/// Cap used for `no` answers when the frontier holds longer sequents.
const ORACLE_NO_CAP: usize = 3;
const MICRO_MAX_PHI: usize = 6;
const MICRO_MAX_THEORY: usize = 3;

const ENGINE_SEED: u64 = 4;
const ENGINE_INSTANCES: usize = 20;
const LITERAL_BOUND: usize = 4;

const NORMALIZE_SEED: u64 = 7;
const NORMALIZE_INSTANCES: usize = 50;
const NORMALIZE_DEPTH: usize = 3;

const CONSERVATIVITY_SEED: u64 = 8;
const CONSERVATIVITY_INSTANCES: usize = 20;

const TRANSLATION_SEED: u64 = 9;
const TRANSLATION_INSTANCES: usize = 10;
const TRANSLATION_MAX_PHI: usize = 4;
const TRANSLATION_MAX_THEORY: usize = 2;
const TRANSLATION_BUDGET: Duration = Duration::from_secs(20);
const TRANSLATION_MAX_ATTEMPTS: usize = 60;

const WQO_SEED: u64 = 10;
const WQO_CHECKS: usize = 10_000;
const WQO_MAX_LEN: usize = 5;
const WQO_MAX_RUNTIME: Duration = Duration::from_secs(30);

type Verdict = Result<String, String>;

/// Saturation runs collected across criteria for the bound instrumentation check.
#[derive(Default)]
struct BoundRuns {
    runs: usize,
    failures: Vec<String>,
}

impl BoundRuns {
    fn record(&mut self, label: &str, state: &SaturationState) {
        self.runs += 1;
        match bounds_report(state) {
            Ok(r) if r.passed() => {}
            Ok(r) => self.failures.push(format!(
                "{label}: phi {}/{} norm_violations {} control {}",
                r.phi_size,
                r.phi_limit,
                r.norm_violations.len(),
                r.control_ok
            )),
            Err(e) => self.failures.push(format!("{label}: {e}")),
        }
    }
}

/// Lemma-suite results from encoded saturation runs.
#[derive(Default)]
struct LemmaRuns {
    runs: usize,
    checked: usize,
    failures: Vec<String>,
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/lcs")
}

fn flw(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_flw"))
        .args(args)
        .env_remove("FLW_CONFIG")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tensor() -> Calculus {
    builtin_calculus(Fragment::parse("*").unwrap())
}

/// Saturates and returns the answer, or `None` when a budget ran out.
fn run(c: &Calculus, t: &Theory, goals: &[Sequent], config: Config) -> Result<(Option<bool>, Box<SaturationState>), String> {
    match saturate(c, t, goals, config) {
        Ok(s) => {
            let v = verdict(&s).map_err(|e| e.to_string())?;
            if let Some(w) = &v.witness {
                let d = w.derivation.as_ref().ok_or("yes without a deduction")?;
                let r = check_deduction(c, t, d, None);
                ensure(r.valid && r.standard && d.sequent == w.goal, || format!("proof of {} rejected", w.goal))?;
            }
            Ok((Some(v.answer), Box::new(s)))
        }
        Err(SaturationError::BudgetExceeded { state, .. }) => Ok((None, state)),
        Err(SaturationError::Input(e)) => Err(e.to_string()),
    }
}

fn intro_golden() -> Verdict {
    let started = Instant::now();
    let dir = std::env::temp_dir().join(format!("flw-acceptance-{}", std::process::id()));
    let intro = corpus_dir().join("intro.lcs").display().to_string();
    let out = dir.display().to_string();
    let (code, report) = flw(&["encode", "--lcs", &intro, "--out", &out, "--canonical-only"]);
    ensure(code == 0, || format!("encode exited {code}: {report}"))?;
    let goals = parse_theory(&std::fs::read_to_string(dir.join("goals.flw")).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let _ = std::fs::remove_dir_all(&dir);
    let names: BTreeMap<&str, &str> = [
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
    .collect();
    let shown: Vec<String> = goals.iter().map(|g| rename(g, &names).to_string()).collect();
    ensure(shown == [INTRO_GOLDEN], || format!("encoded goal {shown:?}"))?;
    let (code, report) = flw(&["lcs-reach", "--lcs", &intro, "--mode", "exact"]);
    ensure(code == 0 && report.contains("verdict: yes"), || format!("lcs-reach: {report}"))?;
    let cs = intro_system();
    let u = cs.parse_configuration("q1 : a a ; b").map_err(|e| e.to_string())?;
    let v = cs.parse_configuration("q2 : a ; b").map_err(|e| e.to_string())?;
    let d = compile_computation(&cs, &u, &[Step::Perfect(0)], &v).map_err(|e| e.to_string())?;
    let t = theory_of(&cs).map_err(|e| e.to_string())?;
    let r = check_deduction(&encoding_calculus(), &t, &d, None);
    ensure(r.valid && r.standard, || format!("compiled deduction: {:?}", r.violations))?;
    let elapsed = started.elapsed();
    ensure(elapsed < INTRO_MAX_RUNTIME, || format!("took {elapsed:?}"))?;
    Ok(format!("golden sequent matched, exact yes, {}-node standard deduction", d.node_count()))
}

fn four_way(lemmas: &mut LemmaRuns, bounds: &mut BoundRuns) -> Verdict {
    let started = Instant::now();
    let mut r = rng(XCHECK_SEED);
    let random: Vec<_> = (0..XCHECK_RANDOM).map(|i| (format!("random-{i:04}"), random_lcs(&mut r, LcsCaps::default()))).collect();
    let opts = XcheckOptions { cap: XCHECK_CAP, scope: DecideScope::Never, ..XcheckOptions::default() };
    let summary = run_batch(&random, &opts).map_err(|e| e.to_string())?;
    let bad: Vec<String> = summary.results.iter().filter(|r| !r.agrees()).map(|r| format!("{} {}", r.id, r.line())).collect();
    ensure(bad.is_empty(), || bad.join("\n"))?;
    let bounded_yes = summary.results.iter().filter(|r| r.bounded == flw_cli::report::Outcome::Yes).count();
    let exact_yes = summary.results.iter().filter(|r| r.exact).count();

    let picked: Vec<_> = load_corpus(&corpus_dir())
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|(_, inst, _)| small_enough(&inst.system))
        .collect();
    let config = Config { time_budget: XCHECK_DECIDE_BUDGET, ..Config::default() };
    let opts = XcheckOptions { cap: XCHECK_CAP, scope: DecideScope::Always, saturation: config, ..XcheckOptions::default() };
    let (mut decided, mut yes, mut replaced) = (0, 0, 0);
    for (id, inst, _) in &picked {
        let res = check_instance(id, inst, &opts).map_err(|e| e.to_string())?;
        ensure(res.agrees(), || format!("{id}: {}", res.line()))?;
        match res.decide {
            DecideOutcome::Yes | DecideOutcome::No => {
                decided += 1;
                yes += usize::from(res.decide == DecideOutcome::Yes);
            }
            _ => replaced += 1,
        }
        lemmas.runs += 1;
        lemmas.checked += res.lemma_checked;
        bounds.runs += 1;
        if res.bounds_passed != Some(true) {
            bounds.failures.push(format!("{id}: bounds"));
        }
    }
    ensure(decided >= XCHECK_MIN_DECIDED, || format!("only {decided} decided ({replaced} over budget)"))?;
    let elapsed = started.elapsed();
    ensure(elapsed < XCHECK_TOTAL_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{XCHECK_RANDOM} random ({bounded_yes} bounded yes, {exact_yes} exact yes) agree; \
         decide matches exact on {decided} hand-picked ({yes} yes, {replaced} over budget) in {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn micro_instances(seed: u64, n: usize) -> Vec<(Theory, Sequent)> {
    let mut r = rng(seed);
    (0..n).map(|_| random_micro_instance(&mut r, MICRO_MAX_PHI, MICRO_MAX_THEORY)).collect()
}

fn oracle_agreement(bounds: &mut BoundRuns) -> Verdict {
    let c = tensor();
    let mut yes = 0;
    let mut max_cap = 0;
    for (i, (t, g)) in micro_instances(ORACLE_SEED, ORACLE_INSTANCES).iter().enumerate() {
        let (answer, state) = run(&c, t, std::slice::from_ref(g), Config::default())?;
        let answer = answer.ok_or_else(|| format!("instance {i} over budget"))?;
        bounds.record(&format!("oracle-{i}"), &state);
        let cap = match verdict(&state).map_err(|e| e.to_string())?.witness {
            Some(w) => {
                let d = w.derivation.ok_or("yes without a deduction")?;
                d.nodes().iter().map(|n| n.sequent.antecedent.len()).max().unwrap_or(0)
            }
            None => {
                let deepest = state.frontier().iter().map(|s| s.antecedent.len()).max().unwrap_or(0);
                deepest.min(ORACLE_NO_CAP).max(g.antecedent.len())
            }
        };
        max_cap = max_cap.max(cap);
        let closure = bounded_closure_oracle(&c, t, &state.phi, cap);
        let oracle = closure.iter().any(|o| seq_embed(o, g));
        ensure(oracle == answer, || format!("instance {i}: {g} from {{{}}} decide {answer} oracle {oracle} at cap {cap}", t.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")))?;
        yes += usize::from(answer);
    }
    Ok(format!("{ORACLE_INSTANCES} instances, {yes} yes, all proofs standard, caps up to {max_cap}"))
}

fn engine_equivalence(bounds: &mut BoundRuns) -> Verdict {
    let c = tensor();
    let mut compared = 0;
    let mut skipped = 0;
    let mut r = rng(ENGINE_SEED);
    while compared < ENGINE_INSTANCES {
        let (t, g) = random_micro_instance(&mut r, MICRO_MAX_PHI, MICRO_MAX_THEORY);
        let goals = [g];
        let (_, anchored) = run(&c, &t, &goals, Config::default())?;
        if anchored.max_norm() > LITERAL_BOUND {
            skipped += 1;
            continue;
        }
        let lit = Config { engine: Engine::Literal, literal_bound: LITERAL_BOUND, ..Config::default() };
        let (answer, literal) = run(&c, &t, &goals, lit)?;
        answer.ok_or("literal engine over budget")?;
        bounds.record("engine-anchored", &anchored);
        bounds.record("engine-literal", &literal);
        ensure(anchored.frontier() == literal.frontier(), || format!("frontiers differ for {}", goals[0]))?;
        compared += 1;
    }
    Ok(format!("{compared} identical frontiers at literal bound {LITERAL_BOUND} ({skipped} with larger norms skipped)"))
}

fn bounds_instrumentation(bounds: &BoundRuns) -> Verdict {
    ensure(bounds.runs > 0, || "no saturation runs recorded".into())?;
    ensure(bounds.failures.is_empty(), || bounds.failures.join("; "))?;
    Ok(format!("{} saturation runs, zero violations", bounds.runs))
}

fn lemma_suite(lemmas: &LemmaRuns) -> Verdict {
    ensure(lemmas.runs > 0 && lemmas.checked > 0, || "no encoded runs recorded".into())?;
    ensure(lemmas.failures.is_empty(), || lemmas.failures.join("; "))?;
    let inst = parse_lcs(&std::fs::read_to_string(corpus_dir().join("idle-drop.lcs")).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let (u, v) = (inst.init.clone().unwrap(), inst.target.clone().unwrap());
    let enc = reduce(&inst.system, &u, &v).map_err(|e| e.to_string())?;
    let phi = subformula_closure(enc.theory.iter().chain(&enc.commuted_goals));
    let closure = bounded_closure_oracle(&encoding_calculus(), &enc.theory, &phi, 2);
    let r = lemma_property_suite(&closure, &enc.vocabulary);
    ensure(r.passed(), || format!("bounded closure: {:?}", r.violations))?;

    let cs = parse_lcs("states: q1 q2\nchannels: c\nalphabet: a").unwrap().system;
    let voc = LcsVocabulary::new(&cs).map_err(|e| e.to_string())?;
    let mutants = ["Q_q1 |-", "s_1 |- A_a", "Q_q1, A_a |- Q_q1 * (s_1 * A_a)", "s_1 |- Q_q2 * s_1"];
    for m in mutants {
        let s: Sequent = m.parse().map_err(|e: flw_core::Error| e.to_string())?;
        ensure(!lemma_property_suite([&s], &voc).passed(), || format!("mutant {m} not caught"))?;
    }
    let read = parse_lcs(&std::fs::read_to_string(corpus_dir().join("read-forward.lcs")).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let opts = XcheckOptions { scope: DecideScope::Always, mutate: true, ..XcheckOptions::default() };
    let res = check_instance("read-forward", &read, &opts).map_err(|e| e.to_string())?;
    ensure(!res.agrees(), || "corrupted read axiom went unnoticed".into())?;
    Ok(format!(
        "{} saturation runs ({} sequents) and {} bounded-closure sequents clean; {} mutants and a corrupted axiom caught",
        lemmas.runs,
        lemmas.checked,
        r.checked,
        mutants.len()
    ))
}

fn normalization() -> Verdict {
    let c = tensor();
    let mut r = rng(NORMALIZE_SEED);
    let mut cuts = 0;
    for i in 0..NORMALIZE_INSTANCES {
        let (t, _) = random_micro_instance(&mut r, MICRO_MAX_PHI, MICRO_MAX_THEORY);
        let d = random_deduction(&mut r, &c, &t, NORMALIZE_DEPTH).map_err(|e| e.to_string())?;
        let before = check_deduction(&c, &t, &d, None);
        ensure(before.valid && !before.standard, || format!("seed deduction {i} not a valid non-standard input"))?;
        cuts += d.count_rule("cut");
        let n = normalize_to_standard(&c, &t, &d).map_err(|e| format!("instance {i}: {e}"))?;
        let after = check_deduction(&c, &t, &n, None);
        ensure(n.sequent == d.sequent, || format!("instance {i}: endsequent changed"))?;
        ensure(after.valid && after.standard && after.analytic, || format!("instance {i}: {:?}", after.violations))?;
    }
    Ok(format!("{NORMALIZE_INSTANCES} deductions with {cuts} cuts normalized to standard analytic form"))
}

fn conservativity(bounds: &mut BoundRuns) -> Verdict {
    let small = tensor();
    let big = builtin_calculus(Fragment::parse("*,and").unwrap());
    let mut yes = 0;
    for (i, (t, g)) in micro_instances(CONSERVATIVITY_SEED, CONSERVATIVITY_INSTANCES).iter().enumerate() {
        let goals = std::slice::from_ref(g);
        let (a, sa) = run(&small, t, goals, Config::default())?;
        let (b, sb) = run(&big, t, goals, Config::default())?;
        bounds.record("conservativity", &sa);
        bounds.record("conservativity", &sb);
        ensure(a.is_some() && a == b, || format!("instance {i}: {a:?} vs {b:?}"))?;
        yes += usize::from(a == Some(true));
    }
    Ok(format!("{CONSERVATIVITY_INSTANCES} instances agree ({yes} yes)"))
}

fn translation(bounds: &mut BoundRuns) -> Verdict {
    let frag = Fragment::parse("*,\\,0,1").unwrap();
    let c = builtin_calculus(frag);
    let config = Config { time_budget: TRANSLATION_BUDGET, ..Config::default() };
    let mut r = rng(TRANSLATION_SEED);
    let (mut agreed, mut yes, mut replaced) = (0, 0, 0);
    for _ in 0..TRANSLATION_MAX_ATTEMPTS {
        if agreed == TRANSLATION_INSTANCES {
            break;
        }
        let (t, g) = random_micro_instance(&mut r, TRANSLATION_MAX_PHI, TRANSLATION_MAX_THEORY);
        let tt = Theory::new(
            t.iter()
                .map(|s| translate_sequent(s, frag).map(|f| Sequent::new(vec![], Some(f))))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?,
        );
        let tg = Sequent::new(vec![], Some(translate_sequent(&g, frag).map_err(|e| e.to_string())?));
        let (a, sa) = run(&c, &t, std::slice::from_ref(&g), config.clone())?;
        let (b, sb) = run(&c, &tt, std::slice::from_ref(&tg), config.clone())?;
        let (Some(a), Some(b)) = (a, b) else {
            replaced += 1;
            continue;
        };
        bounds.record("translation", &sa);
        bounds.record("translation", &sb);
        ensure(a == b, || format!("{g}: direct {a}, translated {b}"))?;
        agreed += 1;
        yes += usize::from(a);
    }
    ensure(agreed == TRANSLATION_INSTANCES, || format!("only {agreed} finished within budget"))?;
    Ok(format!("{agreed} instances agree ({yes} yes, {replaced} over budget replaced)"))
}

fn random_word<R: Rng>(r: &mut R, alphabet: &[Formula], max: usize) -> Vec<Formula> {
    let n = r.gen_range(0..=max);
    (0..n).map(|_| alphabet.choose(r).unwrap().clone()).collect()
}

/// `s1 ≼ s2` by breadth-first single insertions from `s1`.
fn embeds_by_insertion(s1: &Sequent, s2: &Sequent) -> bool {
    if s1.succedent != s2.succedent {
        return false;
    }
    let alphabet: Vec<Formula> = s2.antecedent.clone();
    let mut layer = vec![s1.antecedent.clone()];
    while let Some(first) = layer.first() {
        if first.len() > s2.antecedent.len() {
            return false;
        }
        if layer.contains(&s2.antecedent) {
            return true;
        }
        let mut next: Vec<Vec<Formula>> = Vec::new();
        for w in &layer {
            for pos in 0..=w.len() {
                for f in &alphabet {
                    let mut x = w.clone();
                    x.insert(pos, f.clone());
                    next.push(x);
                }
            }
        }
        next.sort();
        next.dedup();
        layer = next;
    }
    false
}

fn wqo_suite() -> Verdict {
    let started = Instant::now();
    let mut r = rng(WQO_SEED);
    let alphabet: Vec<Formula> = ["p", "q", "r"].iter().map(|v| Formula::var(v)).collect();
    let phi = alphabet.iter().cloned().chain([Formula::fusion(alphabet[0].clone(), alphabet[1].clone())]).collect();
    let order = SequentOrder::new(&phi);
    let letters: Vec<Formula> = order.phi().to_vec();
    let seq = |r: &mut rand_chacha::ChaCha8Rng| {
        let succ = if r.gen_bool(0.2) { None } else { Some(letters.choose(r).unwrap().clone()) };
        Sequent::new(random_word(r, &letters[..2], WQO_MAX_LEN), succ)
    };
    let kinds = 5;
    for i in 0..WQO_CHECKS {
        match i % kinds {
            0 => {
                let (a, b, c) = (seq(&mut r), seq(&mut r), seq(&mut r));
                ensure(seq_embed(&a, &a), || format!("reflexivity fails on {a}"))?;
                if seq_embed(&a, &b) && seq_embed(&b, &c) {
                    ensure(seq_embed(&a, &c), || format!("transitivity fails on {a}, {b}, {c}"))?;
                }
                let (x, y) = (random_word(&mut r, &letters, 3), random_word(&mut r, &letters, 4));
                let z: Vec<Formula> = {
                    let mut z = y.clone();
                    z.extend(random_word(&mut r, &letters, 2));
                    z
                };
                ensure(subword_embed(&x, &x), || "word reflexivity".into())?;
                if subword_embed(&x, &y) {
                    ensure(subword_embed(&x, &z), || "word transitivity".into())?;
                }
            }
            1 => {
                let (a, b) = (seq(&mut r), seq(&mut r));
                let (ra, rb) = (order.reflection_map(&a).unwrap(), order.reflection_map(&b).unwrap());
                ensure(ra.1.len() <= a.antecedent.len(), || "reflection grows the norm".into())?;
                if disjoint_sum_leq(&ra, &rb) {
                    ensure(seq_embed(&a, &b), || format!("reflection contract fails on {a}, {b}"))?;
                }
            }
            2 => {
                let mut xs: Vec<Sequent> = (0..6).map(|_| seq(&mut r)).collect();
                let a: Antichain<Sequent> = xs.iter().cloned().collect();
                xs.shuffle(&mut r);
                let b: Antichain<Sequent> = xs.iter().cloned().collect();
                ensure(a.sorted() == b.sorted(), || "antichain depends on insertion order".into())?;
            }
            _ => {
                let (a, b) = (seq(&mut r), seq(&mut r));
                ensure(seq_embed(&a, &b) == embeds_by_insertion(&a, &b), || format!("embedding oracle disagrees on {a}, {b}"))?;
            }
        }
    }
    let elapsed = started.elapsed();
    ensure(elapsed < WQO_MAX_RUNTIME, || format!("took {elapsed:?}"))?;
    Ok(format!("{WQO_CHECKS} checks in {:.2}s", elapsed.as_secs_f64()))
}

fn guarded(f: impl FnOnce() -> Verdict) -> (Verdict, Duration) {
    let started = Instant::now();
    let v = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
    });
    (v, started.elapsed())
}

fn main() {
    let mut bounds = BoundRuns::default();
    let mut lemmas = LemmaRuns::default();
    let mut results: Vec<(usize, &str, Verdict, Duration)> = Vec::new();
    let mut record = |n: usize, name: &'static str, (v, d): (Verdict, Duration)| {
        let status = if v.is_ok() { "PASS" } else { "FAIL" };
        let text = match &v {
            Ok(s) | Err(s) => s.clone(),
        };
        println!("criterion {n:>2} {status} {name} ({:.2}s): {text}", d.as_secs_f64());
        results.push((n, name, v, d));
    };
    record(1, "intro golden instance", guarded(intro_golden));
    record(2, "four-way reachability cross-check", guarded(|| four_way(&mut lemmas, &mut bounds)));
    record(3, "saturation vs bounded closure", guarded(|| oracle_agreement(&mut bounds)));
    record(4, "engine equivalence", guarded(|| engine_equivalence(&mut bounds)));
    record(7, "cut normalization", guarded(normalization));
    record(8, "conservativity", guarded(|| conservativity(&mut bounds)));
    record(9, "formula deducibility interface", guarded(|| translation(&mut bounds)));
    record(10, "wqo properties", guarded(wqo_suite));
    record(5, "bound instrumentation", guarded(|| bounds_instrumentation(&bounds)));
    record(6, "encoding lemma properties", guarded(|| lemma_suite(&lemmas)));
    let failed = results.iter().filter(|r| r.2.is_err()).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
