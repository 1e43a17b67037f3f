use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use critlen::critical::{check_critical, critical_ordering};
use critlen::cycles::{many_cycle_lengths, ForwardDigraph};
use critlen::treelen::{enumerate_one_three_trees, leaf_lengths};
use critlen_bench::{apex_caterpillar, caterpillar};

fn leaf_length_sets(c: &mut Criterion) {
    let mut g = c.benchmark_group("leaf_lengths");
    for n in [256usize, 1024, 4096] {
        let t = caterpillar(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| b.iter(|| leaf_lengths(t, None)));
    }
    g.finish();
}

fn enumeration(c: &mut Criterion) {
    c.bench_function("enumerate_one_three/18", |b| b.iter(|| enumerate_one_three_trees(18).unwrap()));
}

fn criticality(c: &mut Criterion) {
    let g = apex_caterpillar(1 << 10);
    c.bench_function("check_critical/1024", |b| b.iter(|| check_critical(&g, 3).unwrap()));
    c.bench_function("critical_ordering/1024", |b| b.iter(|| critical_ordering(&g, 3).unwrap()));
}

fn cycles(c: &mut Criterion) {
    let mut g = c.benchmark_group("cycles");
    g.sample_size(10);
    for e in [10u32, 12] {
        let graph = apex_caterpillar(1 << e);
        let ord = critical_ordering(&graph, 3).unwrap();
        g.bench_with_input(BenchmarkId::new("reachability", 1 << e), &graph, |b, graph| {
            b.iter(|| ForwardDigraph::new(graph, &ord).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("many_cycle_lengths", 1 << e), &graph, |b, graph| {
            b.iter(|| many_cycle_lengths(graph, 3).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, leaf_length_sets, enumeration, criticality, cycles);
criterion_main!(benches);
