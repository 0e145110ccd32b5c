use grafo::lasso::{lasso_design, lasso_fit, lasso_path, stablasso_rank, stablasso_scores, Family, LassoParams};
use grafo::ranking::select_top_q;
use grafo::simulate::{sample_with_edge_prob, DagKind};
use grafo::{Column, Error, MixedDataset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn design(seed: u64, n: usize, p: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..p).map(|_| (0..n).map(|_| rng.sample(StandardNormal)).collect()).collect()
}

#[test]
fn path_penalties_decrease_geometrically() {
    let x = design(1, 40, 5);
    let y: Vec<f64> = (0..40).map(|r| x[0][r] - x[1][r]).collect();
    let path = lasso_path(&x, &y, Family::Linear, &LassoParams::default()).unwrap();
    assert!(path.lambdas.windows(2).all(|w| w[1] < w[0]));
    assert!(path.coefs[0].iter().all(|&c| c == 0.0));
    let ratio = path.lambdas[1] / path.lambdas[0];
    assert!((ratio - 0.01f64.powf(1.0 / 99.0)).abs() < 1e-12);
}

#[test]
fn noiseless_fit_saturates_early() {
    let x = design(2, 40, 5);
    let y: Vec<f64> = (0..40).map(|r| 2.0 * x[0][r] + 1.0).collect();
    let path = lasso_path(&x, &y, Family::Linear, &LassoParams::default()).unwrap();
    assert!(path.lambdas.len() < 100);
    let last = path.coefs.last().unwrap();
    // stopping at deviance ratio 0.999 leaves at most sqrt(0.001) relative shrinkage
    assert!(last[0] <= 2.0 && last[0] >= 2.0 * (1.0 - 0.001f64.sqrt()) - 1e-9, "{last:?}");
    assert!(last[1..].iter().all(|&c| c == 0.0));
}

#[test]
fn logistic_fit_recovers_sign() {
    let x = design(3, 200, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let y: Vec<f64> = (0..200)
        .map(|r| if rng.random::<f64>() < 1.0 / (1.0 + (-2.0 * x[1][r]).exp()) { 1.0 } else { -1.0 })
        .collect();
    let (_, b) = lasso_fit(&x, &y, Family::Logistic, 0.02, &LassoParams::default()).unwrap();
    assert!(b[1] > 1.0, "{b:?}");
    assert!(b[0].abs() < 0.3 && b[2].abs() < 0.3);
}

#[test]
fn single_class_is_an_error() {
    let x = design(4, 10, 2);
    let err = lasso_fit(&x, &[1.0; 10], Family::Logistic, 0.1, &LassoParams::default()).unwrap_err();
    assert!(matches!(err, Error::SingleClass));
}

#[test]
fn design_detection() {
    let cont = MixedDataset::new(vec![Column::continuous("a", vec![1.0, 2.0]), Column::continuous("b", vec![0.0, 2.0])]).unwrap();
    assert_eq!(lasso_design(&cont).unwrap().0, Family::Linear);
    let bin = MixedDataset::new(vec![Column::signs("a", &[1.0, -1.0]), Column::signs("b", &[-1.0, 1.0])]).unwrap();
    assert_eq!(lasso_design(&bin).unwrap().0, Family::Logistic);
    let mixed = MixedDataset::new(vec![Column::continuous("a", vec![1.0, 2.0]), Column::signs("b", &[-1.0, 1.0])]).unwrap();
    assert!(matches!(lasso_design(&mixed), Err(Error::NeedsDichotomization)));
}

#[test]
fn edge_score_is_smaller_entry_penalty() {
    let model = sample_with_edge_prob(DagKind::Gaussian, 6, 0.4, 7).unwrap();
    let data = model.sample_data(200, 7).unwrap();
    let scores = stablasso_scores(&data, &LassoParams::default()).unwrap();
    assert_eq!(scores.len(), 15);
    for s in &scores {
        assert!(s.lambda >= 0.0);
    }
    let ranked = stablasso_rank(&data, &LassoParams::default()).unwrap();
    let truth = model.moralize();
    let top = select_top_q(&ranked, 2);
    assert!(top.iter().all(|e| truth.contains(*e)), "{top:?} vs {:?}", truth.edges);
}

#[test]
fn stablasso_on_bernoulli_data() {
    let model = sample_with_edge_prob(DagKind::Bernoulli, 6, 0.4, 2).unwrap();
    let data = model.sample_data(300, 2).unwrap();
    let ranked = stablasso_rank(&data, &LassoParams::default()).unwrap();
    assert_eq!(ranked.entries.len(), 15);
}
