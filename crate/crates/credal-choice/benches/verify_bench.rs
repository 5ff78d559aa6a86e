//! Parallel vs sequential throughput of the battery runner on small budgets.

use credal_choice::verify::{run_verify_suite_filtered, SuiteConfig};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn bench_batteries(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for battery in ["theorem3", "complementation", "precise-collapse"] {
        for parallel in [true, false] {
            let label = if parallel { "parallel" } else { "sequential" };
            group.bench_with_input(
                BenchmarkId::new(battery, label),
                &parallel,
                |b, &parallel| {
                    let cfg = SuiteConfig {
                        trials: 40,
                        parallel,
                        ..SuiteConfig::default()
                    };
                    b.iter(|| {
                        let report = run_verify_suite_filtered(&cfg, Some(battery)).unwrap();
                        assert!(report.passed());
                        report
                    })
                },
            );
        }
    }
    group.finish();
}

criterion_group!(benches, bench_batteries);
criterion_main!(benches);
