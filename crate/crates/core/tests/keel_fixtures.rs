use std::path::PathBuf;

use entsmote::dataset::{imbalance_stats, Label};
use entsmote::keel::{dataset_to_string, parse_csv, parse_keel_str, read_raw, reduce_two_class, DataFormat, TwoClassMapping};
use entsmote::Dataset;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/keel").join(name)
}

/// (file, positive class values or `None` to infer, rows, positives)
const FIXTURES: &[(&str, Option<&[&str]>, usize, usize)] = &[
    ("ecoli1.dat", None, 336, 77),
    ("ecoli2.dat", None, 336, 52),
    ("ecoli3.dat", None, 336, 35),
    ("glass1.dat", None, 214, 76),
    ("glass-1-2-7_vs_6.dat", Some(&["6"]), 184, 9),
    ("glass.dat", Some(&["5"]), 214, 13),
    ("iris0.dat", None, 150, 50),
    ("new_thyroid2.dat", None, 215, 35),
    ("pima.dat", None, 768, 268),
    ("yeast1.dat", None, 1484, 429),
    ("wisconsin.dat", None, 683, 239),
];

fn load(file: &str, positive: Option<&[&str]>) -> Dataset {
    let raw = read_raw(&fixture(file), DataFormat::Keel).unwrap();
    let mapping = match positive {
        Some(p) => TwoClassMapping::one_vs_rest(&raw, p.iter().copied()).unwrap(),
        None => TwoClassMapping::infer(&raw).unwrap(),
    };
    reduce_two_class(&raw, &mapping).unwrap()
}

#[test]
fn fixtures_have_expected_shape() {
    for &(file, positive, rows, pos) in FIXTURES {
        let d = load(file, positive);
        assert_eq!(d.n_rows(), rows, "{file}");
        assert_eq!(d.count(Label::Positive), pos, "{file}");
        assert_eq!(d.count(Label::Positive) + d.count(Label::Negative), d.n_rows());
        let s = imbalance_stats(&d).unwrap();
        assert!((s.imbalance_ratio - (rows - pos) as f64 / pos as f64).abs() < 1e-12);
    }
}

#[test]
fn decimal_ratios() {
    let ir = |file, positive| imbalance_stats(&load(file, positive)).unwrap().imbalance_ratio;
    assert!((ir("yeast1.dat", None) - 2.46).abs() < 0.01);
    assert!((ir("ecoli3.dat", None) - 8.60).abs() < 0.01);
    assert!((ir("glass.dat", Some(&["5"][..])) - 15.46).abs() < 0.01);
    assert!((ir("wisconsin.dat", None) - 1.86).abs() < 0.01);
}

#[test]
fn keel_and_csv_round_trip() {
    for &(file, positive, _, _) in FIXTURES {
        let d = load(file, positive);
        for format in [DataFormat::Keel, DataFormat::Csv] {
            let text = dataset_to_string(&d, format).unwrap();
            let raw = match format {
                DataFormat::Keel => parse_keel_str(&text).unwrap(),
                DataFormat::Csv => parse_csv(text.as_bytes()).unwrap(),
            };
            let back = reduce_two_class(&raw, &TwoClassMapping::infer(&raw).unwrap()).unwrap();
            assert_eq!(back.features(), d.features(), "{file} {format:?}");
            assert_eq!(back.labels(), d.labels(), "{file} {format:?}");
            assert_eq!(back.attribute_names(), d.attribute_names());
        }
    }
}

#[test]
fn multi_class_file_needs_mapping() {
    let raw = read_raw(&fixture("glass.dat"), DataFormat::Keel).unwrap();
    assert_eq!(raw.class_counts().len(), 6);
    assert!(TwoClassMapping::infer(&raw).is_err());
    let partial = TwoClassMapping::new(["5"], ["1", "2"]).unwrap();
    assert!(matches!(reduce_two_class(&raw, &partial), Err(entsmote::Error::UnmappedClass(_))));
}
