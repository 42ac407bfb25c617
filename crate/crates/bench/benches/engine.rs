use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use flw_core::encoding::{compile_computation, encoding_calculus, reduce};
use flw_core::gen::{random_micro_instance, rng};
use flw_core::lcs::{intro_system, parse_lcs, reach_bounded, reach_exact, reach_exact_witness};
use flw_core::saturation::saturate;
use flw_core::wqo::{subword_embed, Antichain};
use flw_core::{builtin_calculus, Config, Engine, Fragment, Sequent};

fn saturation(c: &mut Criterion) {
    let calc = builtin_calculus(Fragment::parse("*").unwrap());
    let mut r = rng(3);
    let instances: Vec<_> = (0..20).map(|_| random_micro_instance(&mut r, 6, 3)).collect();
    let mut g = c.benchmark_group("saturation");
    for engine in [Engine::Anchored, Engine::Literal] {
        let config = Config { engine, literal_bound: 3, parallel: false, ..Config::default() };
        g.bench_function(BenchmarkId::new("micro20", engine), |b| {
            b.iter(|| {
                for (t, goal) in &instances {
                    let _ = saturate(&calc, t, std::slice::from_ref(goal), config.clone());
                }
            })
        });
    }
    let read = parse_lcs("states: q1 q2\nchannels: c\nalphabet: a\nq1 c a ? q2\ninit: q1 : a\ntarget: q2 :").unwrap();
    let enc = reduce(&read.system, read.init.as_ref().unwrap(), read.target.as_ref().unwrap()).unwrap();
    let ec = encoding_calculus();
    g.sample_size(10);
    g.bench_function("encoded-read", |b| {
        b.iter(|| saturate(&ec, &enc.theory, &enc.commuted_goals, Config::default()).unwrap())
    });
    g.finish();
}

fn reachability(c: &mut Criterion) {
    let cs = intro_system();
    let u = cs.parse_configuration("q1 : a a ; b").unwrap();
    let v = cs.parse_configuration("q2 : a ; b").unwrap();
    let far = cs.parse_configuration("q1 : b ; a").unwrap();
    c.bench_function("reach/bounded-cap4", |b| b.iter(|| reach_bounded(&cs, &u, &far, 4, None)));
    c.bench_function("reach/exact", |b| b.iter(|| reach_exact(&cs, &u, &far)));
    let w = reach_exact_witness(&cs, &u, &v).unwrap();
    c.bench_function("reach/compile", |b| b.iter(|| compile_computation(&cs, &u, &w, &v).unwrap()));
}

fn wqo(c: &mut Criterion) {
    let mut r = rng(5);
    let seqs: Vec<Sequent> = (0..200).map(|_| random_micro_instance(&mut r, 6, 0).1).collect();
    c.bench_function("wqo/antichain-200", |b| b.iter(|| seqs.iter().cloned().collect::<Antichain<Sequent>>()));
    let long: Vec<u32> = (0..1000).map(|i| i % 7).collect();
    let short: Vec<u32> = (0..300).map(|i| (i * 3) % 7).collect();
    c.bench_function("wqo/subword-1000", |b| b.iter(|| subword_embed(&short, &long)));
}

criterion_group!(benches, saturation, reachability, wqo);
criterion_main!(benches);
