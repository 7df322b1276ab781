use entsmote::dataset::{discretize_matrix, DiscretizationPolicy, Label, Matrix};
use entsmote::entropy::{conditional_entropy, entropy, feature_weights, gain, raw_gain, EntropySpec, FeatureWeights, WeightNormalization};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn oracle_shannon(p: &[f64]) -> f64 {
    let mut h = 0.0;
    for &x in p {
        if x > 0.0 {
            h -= x * x.ln();
        }
    }
    h / std::f64::consts::LN_2
}

fn oracle_renyi2(p: &[f64]) -> f64 {
    let s: f64 = p.iter().map(|x| x * x).sum();
    -s.ln() / std::f64::consts::LN_2
}

fn oracle_tsallis2(p: &[f64]) -> f64 {
    1.0 - p.iter().map(|x| x * x).sum::<f64>()
}

/// Every distribution over `m` outcomes with probabilities in steps of 1/20.
fn grid(m: usize) -> Vec<Vec<f64>> {
    fn rec(left: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if slots == 1 {
            cur.push(left);
            out.push(cur.iter().map(|&c| c as f64 / 20.0).collect());
            cur.pop();
            return;
        }
        for c in 0..=left {
            cur.push(c);
            rec(left - c, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(20, m, &mut Vec::new(), &mut out);
    out
}

fn random_distribution(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let m = rng.gen_range(2..=8);
    let raw: Vec<f64> = (0..m).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

#[test]
fn grid_matches_direct_summation() {
    let renyi = EntropySpec::renyi(2.0).unwrap();
    let tsallis = EntropySpec::tsallis(2.0).unwrap();
    let mut checked = 0;
    for m in 1..=4 {
        for p in grid(m) {
            assert!((entropy(&p, &EntropySpec::shannon()).unwrap() - oracle_shannon(&p)).abs() < 1e-9, "{p:?}");
            assert!((entropy(&p, &renyi).unwrap() - oracle_renyi2(&p)).abs() < 1e-9, "{p:?}");
            assert!((entropy(&p, &tsallis).unwrap() - oracle_tsallis2(&p)).abs() < 1e-9, "{p:?}");
            checked += 1;
        }
    }
    assert_eq!(checked, 1 + 21 + 231 + 1771);
}

#[test]
fn renyi_tends_to_shannon() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let spec = EntropySpec::renyi(1.001).unwrap();
    for _ in 0..1000 {
        let p = random_distribution(&mut rng);
        assert!((entropy(&p, &spec).unwrap() - oracle_shannon(&p)).abs() < 1e-2);
    }
}

#[test]
fn tsallis_tends_to_shannon_in_nats() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let spec = EntropySpec::tsallis(1.001).unwrap();
    for _ in 0..1000 {
        let p = random_distribution(&mut rng);
        let nats = oracle_shannon(&p) * std::f64::consts::LN_2;
        assert!((entropy(&p, &spec).unwrap() - nats).abs() < 1e-2);
    }
}

/// Labels and bins realizing a 2 x b contingency table.
fn realize(table: &[[usize; 2]]) -> (Vec<Label>, Vec<usize>) {
    let mut labels = Vec::new();
    let mut bins = Vec::new();
    for (b, cell) in table.iter().enumerate() {
        for _ in 0..cell[0] {
            labels.push(Label::Positive);
            bins.push(b);
        }
        for _ in 0..cell[1] {
            labels.push(Label::Negative);
            bins.push(b);
        }
    }
    (labels, bins)
}

fn mutual_information(table: &[[usize; 2]]) -> f64 {
    let n: usize = table.iter().map(|c| c[0] + c[1]).sum();
    let n = n as f64;
    let col = [table.iter().map(|c| c[0]).sum::<usize>() as f64, table.iter().map(|c| c[1]).sum::<usize>() as f64];
    let mut mi = 0.0;
    for cell in table {
        let row = (cell[0] + cell[1]) as f64;
        for y in 0..2 {
            let joint = cell[y] as f64 / n;
            if joint > 0.0 {
                mi += joint * (joint / ((row / n) * (col[y] / n))).log2();
            }
        }
    }
    mi
}

#[test]
fn shannon_gain_is_mutual_information() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..500 {
        let b = rng.gen_range(1..=10);
        let mut table: Vec<[usize; 2]> = (0..b).map(|_| [rng.gen_range(0..15), rng.gen_range(0..15)]).collect();
        table[0][0] += 1;
        let (labels, bins) = realize(&table);
        let g = gain(&labels, &bins, &EntropySpec::shannon()).unwrap();
        assert!((g - mutual_information(&table)).abs() < 1e-9, "{table:?}");
    }
}

#[test]
fn weight_spot_checks() {
    let w = FeatureWeights::from_gains(vec![std::f64::consts::LN_2, 0.0], WeightNormalization::Literal);
    assert!((w.lambda[0] - 2.0).abs() < 1e-12);
    assert!(w.lambda[1].abs() < 1e-12);
    let z = FeatureWeights::from_gains(vec![0.0; 4], WeightNormalization::Literal);
    assert_eq!(z.lambda, vec![0.25; 4]);
}

fn spec_strategy() -> impl Strategy<Value = EntropySpec> {
    prop_oneof![
        Just(EntropySpec::shannon()),
        Just(EntropySpec::maxent()),
        (0.1f64..5.0).prop_filter("alpha != 1", |a| (a - 1.0).abs() > 1e-3).prop_map(|a| EntropySpec::renyi(a).unwrap()),
        (0.1f64..5.0).prop_filter("alpha != 1", |a| (a - 1.0).abs() > 1e-3).prop_map(|a| EntropySpec::tsallis(a).unwrap()),
    ]
}

fn labelled_bins() -> impl Strategy<Value = (Vec<Label>, Vec<usize>)> {
    prop::collection::vec((any::<bool>(), 0usize..6), 1..60).prop_map(|v| {
        v.into_iter().map(|(p, b)| (if p { Label::Positive } else { Label::Negative }, b)).unzip()
    })
}

proptest! {
    #[test]
    fn entropies_are_non_negative(p in prop::collection::vec(0.0f64..1.0, 1..8), spec in spec_strategy()) {
        let s: f64 = p.iter().sum();
        prop_assume!(s > 1e-6);
        let p: Vec<f64> = p.iter().map(|x| x / s).collect();
        prop_assert!(entropy(&p, &spec).unwrap() >= 0.0);
    }

    #[test]
    fn gain_matches_clamped_raw_gain((labels, bins) in labelled_bins(), spec in spec_strategy()) {
        let g = gain(&labels, &bins, &spec).unwrap();
        let r = raw_gain(&labels, &bins, &spec).unwrap();
        prop_assert!(g >= 0.0);
        prop_assert_eq!(g, r.max(0.0));
        prop_assert!(conditional_entropy(&labels, &bins, &spec).unwrap() >= 0.0);
    }

    #[test]
    fn shannon_gain_never_negative_before_clamp((labels, bins) in labelled_bins()) {
        prop_assert!(raw_gain(&labels, &bins, &EntropySpec::shannon()).unwrap() > -1e-12);
    }

    #[test]
    fn lambda_is_equivariant_under_column_permutation(
        rows in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 3), 6..30),
        flags in prop::collection::vec(any::<bool>(), 30),
        spec in spec_strategy(),
    ) {
        let labels: Vec<Label> = (0..rows.len()).map(|i| if flags[i] { Label::Positive } else { Label::Negative }).collect();
        prop_assume!(labels.contains(&Label::Positive) && labels.contains(&Label::Negative));
        let perm = [2usize, 0, 1];
        let permuted: Vec<Vec<f64>> = rows.iter().map(|r| perm.iter().map(|&j| r[j]).collect()).collect();
        let policy = DiscretizationPolicy::default();
        let a = feature_weights(&discretize_matrix(&Matrix::from_rows(&rows, 3).unwrap(), policy).unwrap(), &labels, &spec, WeightNormalization::Literal).unwrap();
        let b = feature_weights(&discretize_matrix(&Matrix::from_rows(&permuted, 3).unwrap(), policy).unwrap(), &labels, &spec, WeightNormalization::Literal).unwrap();
        for (out, &src) in perm.iter().enumerate() {
            prop_assert!((b.lambda[out] - a.lambda[src]).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_is_non_negative(gains in prop::collection::vec(0.0f64..3.0, 1..10)) {
        for norm in [WeightNormalization::Literal, WeightNormalization::Normalized] {
            prop_assert!(FeatureWeights::from_gains(gains.clone(), norm).lambda.iter().all(|&l| l >= 0.0));
        }
    }
}
