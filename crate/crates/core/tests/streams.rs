use std::path::Path;

use proptest::prelude::*;
use sdf_core::streams::{
    create_generator, load_dataset, successor_probability, AgrawalParams, ConceptDriftStream, DataFormat, Feature,
    GeneratorConfig, GeneratorKind, HyperplaneParams, Instance, LoadOptions, Preset, RbfParams, RtgParams, SeaParams,
    Stream, StreamSchema,
};

fn take(stream: &mut dyn Stream, n: usize) -> Vec<Instance> {
    (0..n).map(|_| stream.next_instance().unwrap().expect("unbounded generator")).collect()
}

fn generate(kind: GeneratorKind, seed: u64, n: usize) -> Vec<Instance> {
    let mut s = create_generator(&GeneratorConfig::new(kind, seed)).unwrap();
    take(&mut s, n)
}

#[test]
fn sea_labels_match_oracle() {
    for (concept, theta) in [(1, 8.0), (2, 9.0), (3, 7.0), (4, 9.5)] {
        let params = SeaParams {
            noise_percent: 0.0,
            ..SeaParams::function(concept)
        };
        for inst in generate(GeneratorKind::Sea(params), concept as u64, 1000) {
            let want = if inst.x[0] + inst.x[1] <= theta { 0 } else { 1 };
            assert_eq!(inst.y, Some(want), "{:?}", inst.x);
        }
    }
}

#[test]
fn sea_noise_flips_the_expected_fraction() {
    let data = generate(GeneratorKind::Sea(SeaParams::function(1)), 3, 20_000);
    let flipped = data
        .iter()
        .filter(|i| i.y != Some(usize::from(i.x[0] + i.x[1] > 8.0)))
        .count() as f64
        / data.len() as f64;
    assert!((flipped - 0.10).abs() < 0.01, "{flipped}");
}

/// Group A membership (class 0) for the ten loan functions, written from
/// the applicant bands.
fn agrawal_oracle(f: usize, x: &[f64]) -> usize {
    let [salary, commission, age, elevel, _car, _zip, hvalue, hyears, loan] = x.try_into().unwrap();
    let income = salary + commission;
    let band = |v: f64, lo: f64, hi: f64| (lo..=hi).contains(&v);
    // age < 40, 40..60, >= 60
    let group = if age < 40.0 { 0 } else if age < 60.0 { 1 } else { 2 };
    let salary_band = [(50e3, 100e3), (75e3, 125e3), (25e3, 75e3)];
    let elevel_ok = [elevel <= 1.0, (1.0..=3.0).contains(&elevel), elevel >= 2.0];
    let a = match f {
        1 => group != 1,
        2 => band(salary, salary_band[group].0, salary_band[group].1),
        3 => elevel_ok[group],
        4 => {
            let table = [[(25e3, 75e3), (50e3, 100e3)], [(50e3, 100e3), (75e3, 125e3)], [(50e3, 100e3), (25e3, 75e3)]];
            let (lo, hi) = table[group][usize::from(!elevel_ok[group])];
            band(salary, lo, hi)
        }
        5 => {
            let loans = [[(100e3, 300e3), (200e3, 400e3)], [(200e3, 400e3), (300e3, 500e3)], [(300e3, 500e3), (100e3, 300e3)]];
            let inside = band(salary, salary_band[group].0, salary_band[group].1);
            let (lo, hi) = loans[group][usize::from(!inside)];
            band(loan, lo, hi)
        }
        6 => band(income, salary_band[group].0, salary_band[group].1),
        7 => income * 2.0 / 3.0 - loan / 5.0 - 20e3 > 0.0,
        8 => income * 2.0 / 3.0 - 5e3 * elevel - 20e3 > 0.0,
        9 => income * 2.0 / 3.0 - 5e3 * elevel - loan / 5.0 - 10e3 > 0.0,
        10 => {
            let equity = if hyears >= 20.0 { hvalue * (hyears - 20.0) / 10.0 } else { 0.0 };
            income * 2.0 / 3.0 - 5e3 * elevel + equity / 5.0 - 10e3 > 0.0
        }
        _ => unreachable!(),
    };
    usize::from(!a)
}

#[test]
fn agrawal_labels_match_oracle() {
    for f in 1..=10 {
        for nominal in [false, true] {
            let params = AgrawalParams {
                function: f,
                perturbation: 0.0,
                nominal,
            };
            let data = generate(GeneratorKind::Agrawal(params), 40 + f as u64, 1000);
            let mut classes = [0; 2];
            for inst in &data {
                let y = inst.y.unwrap();
                classes[y] += 1;
                assert_eq!(y, agrawal_oracle(f, &inst.x), "function {f}: {:?}", inst.x);
            }
            assert!(classes[0] > 0 && classes[1] > 0, "function {f}: {classes:?}");
        }
    }
}

#[test]
fn agrawal_feature_ranges() {
    for inst in generate(GeneratorKind::Agrawal(AgrawalParams::function(1)), 8, 2000) {
        let x = &inst.x;
        assert!((20e3..=150e3).contains(&x[0]));
        assert!((0.0..=75e3).contains(&x[1]));
        assert!((20.0..=80.0).contains(&x[2]) && x[2].fract() == 0.0);
        assert!(x[3..6].iter().zip([5.0, 20.0, 9.0]).all(|(v, n)| v.fract() == 0.0 && *v >= 0.0 && *v < n));
        assert!((0.0..=1.35e6).contains(&x[6]));
        assert!((1.0..=30.0).contains(&x[7]));
        assert!((0.0..=500e3).contains(&x[8]));
    }
}

#[test]
fn rbf_defaults_shape() {
    let s = create_generator(&GeneratorConfig::new(GeneratorKind::Rbf(RbfParams::default()), 1)).unwrap();
    assert_eq!(s.schema().n_features(), 10);
    assert_eq!(s.schema().n_classes(), 5);
    assert!(s.schema().features().iter().all(|f| f.kind.is_numeric()));
}

#[test]
fn length_bounds_the_stream() {
    let mut s = create_generator(&GeneratorConfig::new(GeneratorKind::RandomTree(RtgParams::default()), 4).with_length(100))
        .unwrap();
    assert_eq!(take(&mut s, 100).len(), 100);
    assert!(s.next_instance().unwrap().is_none());
    assert!(s.next_instance().unwrap().is_none());
}

#[test]
fn invalid_parameters_name_the_field() {
    let bad = GeneratorConfig::new(
        GeneratorKind::Agrawal(AgrawalParams {
            function: 11,
            ..AgrawalParams::default()
        }),
        1,
    );
    let msg = create_generator(&bad).err().expect("function 11 is invalid").to_string();
    assert!(msg.contains("function"), "{msg}");
}

/// Emits a constant label so the source of each draw is visible.
struct Constant {
    schema: StreamSchema,
    label: usize,
}

impl Constant {
    fn new(label: usize) -> Self {
        let schema = StreamSchema::new("c", vec![Feature::numeric("x")], vec!["a".into(), "b".into()]).unwrap();
        Constant { schema, label }
    }
}

impl Stream for Constant {
    fn schema(&self) -> &StreamSchema {
        &self.schema
    }

    fn next_instance(&mut self) -> sdf_core::Result<Option<Instance>> {
        Ok(Some(Instance::labeled(vec![0.0], self.label)))
    }
}

#[test]
fn drift_mixing_follows_the_sigmoid() {
    let (position, width) = (60u64, 20u64);
    let probes = [20u64, 40, 50, 60, 70, 80, 100];
    let runs = 10_000;
    let mut hits = vec![0usize; probes.len()];
    for seed in 0..runs {
        let mut s =
            ConceptDriftStream::new(Box::new(Constant::new(0)), Box::new(Constant::new(1)), position, width, seed).unwrap();
        let labels: Vec<usize> = take(&mut s, 100).into_iter().map(|i| i.y.unwrap()).collect();
        for (h, &t) in hits.iter_mut().zip(&probes) {
            *h += labels[t as usize - 1];
        }
    }
    for (&t, &h) in probes.iter().zip(&hits) {
        let freq = h as f64 / runs as f64;
        let want = successor_probability(t, position, width);
        assert!((freq - want).abs() < 0.03, "t={t}: {freq} vs {want}");
    }
    assert_eq!(successor_probability(position, position, width), 0.5);
    assert!((successor_probability(position + width, position, width) - 1.0 / (1.0 + (-4f64).exp())).abs() < 1e-12);
    assert!(successor_probability(1000 - 10 * width, 1000, width) < 1e-15);
}

#[test]
fn drift_rejects_mismatched_schemas() {
    let sea = create_generator(&GeneratorConfig::new(GeneratorKind::Sea(SeaParams::default()), 1)).unwrap();
    let agr = create_generator(&GeneratorConfig::new(GeneratorKind::Agrawal(AgrawalParams::default()), 1)).unwrap();
    assert!(ConceptDriftStream::new(Box::new(sea), Box::new(agr), 10, 1, 1).is_err());
}

#[test]
fn abrupt_preset_switches_concept_at_the_quarter_points() {
    // Noise-free view: SEA_a labels must follow concept k in quarter k,
    // away from the boundaries.
    let n = 8000;
    let mut s = Preset::SeaA.build(n, 2).unwrap();
    let data = take(&mut s, n as usize);
    for (k, theta) in [8.0, 9.0, 7.0, 9.5].into_iter().enumerate() {
        let quarter = &data[k * 2000 + 50..(k + 1) * 2000 - 50];
        let agree = quarter
            .iter()
            .filter(|i| i.y == Some(usize::from(i.x[0] + i.x[1] > theta)))
            .count() as f64
            / quarter.len() as f64;
        assert!(agree > 0.85, "quarter {k}: {agree}");
    }
}

#[test]
fn electricity_format_csv() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/electricity_sample.csv");
    let mut s = load_dataset(&path, DataFormat::Csv, &LoadOptions::default()).unwrap();
    assert_eq!(s.schema().n_features(), 8);
    assert_eq!(s.schema().n_classes(), 2);
    assert_eq!(s.schema().class_labels(), ["UP", "DOWN"]);
    let rows = take(&mut s, 12);
    assert_eq!(rows[0].x, vec![0.0, 2.0, 0.0, 0.056443, 0.439155, 0.003467, 0.422915, 0.414912]);
    assert_eq!(rows[4].y, Some(1));
    assert!(s.next_instance().unwrap().is_none());
}

fn any_kind() -> impl Strategy<Value = GeneratorKind> {
    prop_oneof![
        (1usize..=4, 0.0f64..30.0).prop_map(|(f, noise)| GeneratorKind::Sea(SeaParams {
            noise_percent: noise,
            ..SeaParams::function(f)
        })),
        (1usize..=10, 0.0f64..=0.5, any::<bool>()).prop_map(|(function, perturbation, nominal)| {
            GeneratorKind::Agrawal(AgrawalParams {
                function,
                perturbation,
                nominal,
            })
        }),
        (1usize..60, 2usize..6, 1usize..12, 0.0f64..0.01).prop_map(|(n_centroids, n_classes, n_features, speed)| {
            GeneratorKind::Rbf(RbfParams {
                n_centroids,
                n_classes,
                n_features,
                drift_speed: speed,
                n_drift_centroids: n_centroids,
            })
        }),
        (2usize..12, 0.0f64..0.01).prop_map(|(n_features, mag)| GeneratorKind::Hyperplane(HyperplaneParams {
            n_features,
            n_drift_features: n_features,
            mag_change: mag,
            ..HyperplaneParams::default()
        })),
        (2usize..5, 0usize..4, 0usize..4, 2usize..5).prop_map(|(n_classes, n_nominal, n_numeric, values)| {
            GeneratorKind::RandomTree(RtgParams {
                n_classes,
                n_nominal,
                n_numeric: if n_nominal + n_numeric == 0 { 1 } else { n_numeric },
                nominal_values: values,
                ..RtgParams::default()
            })
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn generated_instances_conform_to_schema(kind in any_kind(), seed in any::<u64>()) {
        let mut s = create_generator(&GeneratorConfig::new(kind, seed)).unwrap();
        let schema = s.schema().clone();
        for _ in 0..10_000 {
            let inst = s.next_instance().unwrap().unwrap();
            prop_assert!(inst.y.is_some());
            prop_assert!(schema.validate(&inst).is_ok(), "{:?}", schema.validate(&inst));
        }
    }

    #[test]
    fn equal_seeds_give_identical_sequences(kind in any_kind(), seed in any::<u64>()) {
        let a = generate(kind.clone(), seed, 500);
        let b = generate(kind, seed, 500);
        let bits = |v: &[Instance]| v.iter().map(|i| (i.x.iter().map(|f| f.to_bits()).collect::<Vec<_>>(), i.y)).collect::<Vec<_>>();
        prop_assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn presets_are_deterministic(idx in 0usize..Preset::ALL.len(), seed in 0u64..1000) {
        let preset = Preset::ALL[idx];
        let mut a = preset.build(400, seed).unwrap();
        let mut b = preset.build(400, seed).unwrap();
        prop_assert_eq!(take(&mut a, 400), take(&mut b, 400));
    }
}
