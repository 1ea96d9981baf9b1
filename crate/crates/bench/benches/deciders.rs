use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use stablemanip::{decide, decide_exhaustive, CopelandAlpha, ExhaustiveBudget, Rule};
use stablemanip_bench::random_instance;

fn polynomial(c: &mut Criterion) {
    let rules = [
        Rule::Plurality,
        Rule::KApproval(3),
        Rule::Borda,
        Rule::Maximin,
        Rule::Bucklin,
        Rule::SimplifiedBucklin,
    ];
    for rule in rules {
        let mut group = c.benchmark_group(format!("decide/{rule}"));
        for (m, n) in [(6, 4), (10, 20), (20, 30)] {
            let inst = random_instance(rule.clone(), m, n, 2, 1).unwrap();
            group.bench_with_input(BenchmarkId::from_parameter(format!("m{m}-n{n}")), &inst, |b, i| {
                b.iter(|| decide(black_box(i)).unwrap())
            });
        }
        group.finish();
    }
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for rule in [Rule::Borda, Rule::Copeland(CopelandAlpha::ZERO), Rule::Stv] {
        let inst = random_instance(rule.clone(), 4, 3, 1, 1).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(&rule), &inst, |b, i| {
            b.iter(|| decide_exhaustive(black_box(i), ExhaustiveBudget::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, polynomial, oracle);
criterion_main!(benches);
