use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use eulersum_core::harness::{verify_identity_grid_with, Execution};
use eulersum_core::identities::Family;
use eulersum_core::sums::clear_sum_cache;
use eulersum_core::PrecisionContext;

// Cold runs: the sum cache is cleared before every iteration so both
// schedules evaluate the same series.
fn grid(c: &mut Criterion) {
    let ctx = PrecisionContext::default();
    let families = [Family::HarmonicPairOdd, Family::Quadratic2PairOdd, Family::AltTriple, Family::TripleOnes];
    let mut group = c.benchmark_group("identity_grid");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| {
                clear_sum_cache();
                let r = verify_identity_grid_with(&families, 2..=3, 0..=1, &ctx, exec);
                assert!(r.all_passed());
                r
            })
        });
    }
    group.finish();
}

criterion_group!(benches, grid);
criterion_main!(benches);
