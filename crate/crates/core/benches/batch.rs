use criterion::{criterion_group, criterion_main, Criterion};
use pcf_core::batch;
use pcf_core::colorer::{color, ColorOptions, Regime};
use pcf_core::coloring::degree_plus_k;
use pcf_core::generators::{gen_o1p, Certified};
use pcf_core::ListAssignment;

fn instances() -> Vec<(Certified, ListAssignment)> {
    (0..64)
        .map(|seed| {
            let c = gen_o1p(24, seed, None).unwrap();
            let lists = degree_plus_k(&c.graph, 3, c.graph.max_degree() + 5, seed).unwrap();
            (c, lists)
        })
        .collect()
}

fn run(item: &(Certified, ListAssignment)) -> bool {
    let (c, lists) = item;
    color(
        &c.graph,
        lists,
        &c.cert,
        Regime::DegreePlus(3),
        &ColorOptions::default(),
    )
    .is_ok()
}

fn bench(c: &mut Criterion) {
    let items = instances();
    let mut group = c.benchmark_group("color_batch");
    group.sample_size(10);
    group.bench_function("sequential", |b| b.iter(|| batch::map_sequential(&items, run)));
    #[cfg(feature = "parallel")]
    group.bench_function("parallel", |b| b.iter(|| batch::map_parallel(&items, run)));
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
