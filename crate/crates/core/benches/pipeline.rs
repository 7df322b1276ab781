use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use entsmote::cluster::hac;
use entsmote::dataset::{Dataset, Label};
use entsmote::entropy::FeatureWeights;
use entsmote::exec::Exec;
use entsmote::experiment::{run_datasets, EvalMethod, NamedDataset, Settings};
use entsmote::neighbors::{loocv_scores, KnnConfig};
use entsmote::smote::{oversample, SmoteConfig, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn synthetic(n_pos: usize, n_neg: usize, dims: usize) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut rows = Vec::with_capacity(n_pos + n_neg);
    let mut labels = Vec::with_capacity(n_pos + n_neg);
    for i in 0..n_pos + n_neg {
        let shift = if i < n_pos { 1.0 } else { 0.0 };
        rows.push((0..dims).map(|_| shift + rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>());
        labels.push(if i < n_pos { Label::Positive } else { Label::Negative });
    }
    Dataset::from_rows(&rows, labels).unwrap()
}

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn loocv(c: &mut Criterion) {
    let d = synthetic(150, 450, 8);
    let cfg = KnnConfig::new(FeatureWeights::unit(8));
    let mut g = c.benchmark_group("loocv");
    for (name, exec) in STRATEGIES {
        g.bench_function(name, |b| b.iter(|| loocv_scores(black_box(&d), &cfg, exec).unwrap()));
    }
    g.finish();
}

fn clustering(c: &mut Criterion) {
    let mut g = c.benchmark_group("hac");
    g.sample_size(10);
    for n in [200usize, 400] {
        let d = synthetic(n / 2, n / 2, 6);
        for (name, exec) in STRATEGIES {
            g.bench_with_input(BenchmarkId::new(name, n), &d, |b, d| {
                b.iter(|| hac(d.features(), 2, &FeatureWeights::unit(6), exec).unwrap())
            });
        }
    }
    g.finish();
}

fn oversampling(c: &mut Criterion) {
    let d = synthetic(200, 1000, 8);
    let mut g = c.benchmark_group("oversample");
    for v in [Variant::Smote, Variant::Mismote] {
        let cfg = SmoteConfig::for_variant(v);
        for (name, exec) in STRATEGIES {
            g.bench_function(BenchmarkId::new(name, v.name()), |b| b.iter(|| oversample(black_box(&d), &cfg, exec).unwrap()));
        }
    }
    g.finish();
}

fn grid(c: &mut Criterion) {
    let datasets: Vec<NamedDataset> =
        (0..3).map(|i| NamedDataset { name: format!("d{i}"), data: synthetic(40 + 10 * i, 160, 5) }).collect();
    let methods: Vec<EvalMethod> =
        std::iter::once(EvalMethod::Imbalanced).chain(Variant::ALL.iter().map(|&v| EvalMethod::Oversample(v))).collect();
    let settings = Settings { base_seed: 7, ..Settings::default() };
    let mut g = c.benchmark_group("grid");
    g.sample_size(10);
    for (name, exec) in STRATEGIES {
        g.bench_function(name, |b| b.iter(|| run_datasets(&datasets, &methods, &settings, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, loocv, clustering, oversampling, grid);
criterion_main!(benches);
