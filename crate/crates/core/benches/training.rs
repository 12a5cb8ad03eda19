use ahl_core::exec::Exec;
use ahl_core::experiments::config::{ExperimentConfig, ModelKind, Task};
use ahl_core::experiments::run::train_experiment;
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn small(task: Task, model: ModelKind) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::defaults(task, model);
    cfg.epochs = 5;
    if task.is_regression() {
        cfg.n_train = 120;
        cfg.n_test = 40;
    }
    cfg
}

fn bench_training(c: &mut Criterion) {
    let mut group = c.benchmark_group("train");
    group.sample_size(10);
    let cases = [
        ("cos-rqnn-L10", small(Task::Cos, ModelKind::Rqnn)),
        ("cls-rqnn-L1", small(Task::Classify, ModelKind::Rqnn)),
        ("cls-qnn-L1", small(Task::Classify, ModelKind::Qnn)),
    ];
    for (name, cfg) in &cases {
        for (label, exec) in [
            ("sequential", Exec::Sequential),
            ("parallel", Exec::Parallel),
        ] {
            group.bench_with_input(BenchmarkId::new(*name, label), cfg, |b, cfg| {
                b.iter(|| train_experiment(black_box(cfg), exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_training);
criterion_main!(benches);
