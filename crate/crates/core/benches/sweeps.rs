use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use smocking::analysis::{deviation_sup, estimate_dilation, verify_awesome};
use smocking::metric::{OffsetTable, PeriodicMetric};
use smocking::{Execution, PeriodicPattern};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn dilation(c: &mut Criterion) {
    let mut g = c.benchmark_group("dilation_100k");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| estimate_dilation(100_000, 0, exec))
        });
    }
    g.finish();
}

fn deviation(c: &mut Criterion) {
    let metric = PeriodicMetric::checkered(200.0).unwrap();
    let mut g = c.benchmark_group("deviation_2k");
    g.sample_size(20);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| deviation_sup(&metric, 100.0, 2_000, 0, exec).unwrap())
        });
    }
    g.finish();
}

fn awesome(c: &mut Criterion) {
    let table = OffsetTable::exact(&PeriodicPattern::checkered(), 18.0).unwrap();
    let mut g = c.benchmark_group("awesome_window_9");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| verify_awesome(&table, 9.0, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, dilation, deviation, awesome);
criterion_main!(benches);
