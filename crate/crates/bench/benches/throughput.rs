use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion, Throughput};
use sdf_bench::instances;
use sdf_core::arf::{AdaptiveRandomForest, ArfConfig};
use sdf_core::cascade::{CascadeConfig, StreamingDeepForest};
use sdf_core::drift::Adwin;
use sdf_core::hoeffding::{HoeffdingTree, TreeConfig};
use sdf_core::rng::seeded;
use sdf_core::streams::{FeatureKind, Preset};
use sdf_core::Classifier;
use rand::Rng as _;

const N: u64 = 2000;

fn tree(c: &mut Criterion) {
    let (schema, data) = instances(Preset::AgrA, N, 1);
    let kinds: Arc<[FeatureKind]> = schema.feature_kinds().into();
    let mut g = c.benchmark_group("hoeffding_tree");
    g.throughput(Throughput::Elements(N));
    g.bench_function("learn_agr", |b| {
        b.iter_batched(
            || HoeffdingTree::new(kinds.clone(), 2, TreeConfig::default()).unwrap(),
            |mut t| {
                for inst in &data {
                    t.learn(&inst.x, inst.y.unwrap(), 1.0);
                }
                t
            },
            BatchSize::LargeInput,
        )
    });
    g.finish();
}

fn adwin(c: &mut Criterion) {
    let mut rng = seeded(3);
    let bits: Vec<f64> = (0..10_000).map(|_| f64::from(u8::from(rng.random::<f64>() < 0.3))).collect();
    let mut g = c.benchmark_group("adwin");
    g.throughput(Throughput::Elements(bits.len() as u64));
    g.bench_function("update_bernoulli", |b| {
        b.iter(|| {
            let mut a = Adwin::new(0.002).unwrap();
            for &v in &bits {
                black_box(a.update(v));
            }
            a
        })
    });
    g.finish();
}

fn forests(c: &mut Criterion) {
    let (schema, data) = instances(Preset::SeaA, N, 2);
    let mut g = c.benchmark_group("ensembles");
    g.sample_size(10);
    g.throughput(Throughput::Elements(N));
    let arf = ArfConfig { n_trees: 10, parallel: false, ..ArfConfig::default() };
    g.bench_function("arf10_sea", |b| {
        b.iter_batched(
            || AdaptiveRandomForest::new(schema.clone(), arf.clone()).unwrap(),
            |mut m| {
                for inst in &data {
                    black_box(m.learn_observed(&inst.x, inst.y.unwrap()));
                }
                m
            },
            BatchSize::LargeInput,
        )
    });
    let sdf = CascadeConfig { n_layers: 2, forest: arf.clone(), seed: 1, parallel: false };
    g.bench_function("sdf_2x4x10_sea", |b| {
        b.iter_batched(
            || StreamingDeepForest::new(schema.clone(), sdf.clone()).unwrap(),
            |mut m| {
                for inst in &data {
                    black_box(m.learn_observed(&inst.x, inst.y.unwrap()));
                }
                m
            },
            BatchSize::LargeInput,
        )
    });
    g.finish();
}

criterion_group!(benches, tree, adwin, forests);
criterion_main!(benches);
