use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use yoneda_core::fleet::{run_fleet, FleetConfig, FleetKind};
use yoneda_core::par::Strategy;

fn fleets(c: &mut Criterion) {
    let mut group = c.benchmark_group("fleet");
    group.sample_size(10);
    for count in [20, 100] {
        let config = FleetConfig { count, seed: 1, ..FleetConfig::default() };
        for (label, strategy) in [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)] {
            group.bench_with_input(BenchmarkId::new(format!("adjunction/{label}"), count), &config, |b, cfg| {
                b.iter(|| run_fleet(cfg, FleetKind::Adjunction, strategy).unwrap())
            });
            group.bench_with_input(BenchmarkId::new(format!("triangle/{label}"), count), &config, |b, cfg| {
                b.iter(|| run_fleet(cfg, FleetKind::Triangle, strategy).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, fleets);
criterion_main!(benches);
