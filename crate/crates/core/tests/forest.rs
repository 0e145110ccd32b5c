use grafo::forest::{combine_local_ranks, grafo_rank, ForestModel, ForestParams};
use grafo::ranking::select_top_q;
use grafo::simulate::{sample_with_edge_prob, DagKind};
use grafo::{Column, Edge, Error, MixedDataset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn noise(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

#[test]
fn classification_forest_finds_the_class_signal() {
    let n = 300;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let x0 = noise(&mut rng, n);
    let x1 = noise(&mut rng, n);
    let class: Vec<usize> = x0.iter().map(|&v| usize::from(v > 0.3)).collect();
    let x = MixedDataset::new(vec![Column::continuous("a", x0), Column::continuous("b", x1)]).unwrap();
    let y = Column::categorical("y", vec!["no".into(), "yes".into()], &class);
    let forest = ForestModel::fit(&x, &y, &ForestParams { n_trees: 100, seed: 1, ..Default::default() }).unwrap();
    assert!(forest.oob_error(&x, &y) < 0.1);
    let imp = forest.permutation_importance(&x, &y, 1);
    assert_eq!(imp.argmax(), 0);
    assert!(imp.scores()[0] > 0.2);
}

#[test]
fn categorical_predictor_splits_on_level_sets() {
    let n = 240;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g: Vec<usize> = (0..n).map(|r| r % 4).collect();
    let y: Vec<f64> = g
        .iter()
        .map(|&l| [3.0, -3.0, 3.0, -3.0][l] + 0.3 * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let levels = vec!["a".into(), "b".into(), "c".into(), "d".into()];
    let x = MixedDataset::new(vec![
        Column::categorical("g", levels, &g),
        Column::continuous("z", noise(&mut rng, n)),
    ])
    .unwrap();
    let y = Column::continuous("y", y);
    let forest = ForestModel::fit(&x, &y, &ForestParams { n_trees: 50, mtry: Some(2), ..Default::default() }).unwrap();
    assert!(forest.oob_error(&x, &y) < 0.5);
    assert!(forest.trees()[0].dump(&x.names()).starts_with("g in [0, 2]"));
}

#[test]
fn same_seed_same_importance() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let x = MixedDataset::new((0..4).map(|j| Column::continuous(format!("x{j}"), noise(&mut rng, 80))).collect()).unwrap();
    let y = Column::continuous("y", noise(&mut rng, 80));
    let params = ForestParams { n_trees: 40, seed: 9, ..Default::default() };
    let a = ForestModel::fit(&x, &y, &params).unwrap().permutation_importance(&x, &y, 4);
    let b = ForestModel::fit(&x, &y, &params).unwrap().permutation_importance(&x, &y, 4);
    assert_eq!(a, b);
}

#[test]
fn predictor_with_too_many_levels_is_rejected() {
    let levels: Vec<String> = (0..11).map(|l| l.to_string()).collect();
    let codes: Vec<usize> = (0..44).map(|r| r % 11).collect();
    let x = MixedDataset::new(vec![Column::categorical("c", levels, &codes)]).unwrap();
    let y = Column::continuous("y", (0..44).map(f64::from).collect());
    let err = ForestModel::fit(&x, &y, &ForestParams::default()).unwrap_err();
    assert!(matches!(err, Error::TooManyLevels { levels: 11, max: 10, .. }));
}

#[test]
fn too_few_rows_for_node_size() {
    let x = MixedDataset::new(vec![Column::continuous("a", vec![1.0, 2.0, 3.0])]).unwrap();
    let y = Column::continuous("y", vec![1.0, 0.0, 1.0]);
    assert_eq!(ForestModel::fit(&x, &y, &ForestParams::default()).unwrap_err().kind(), "param");
}

#[test]
fn grafo_ranks_strong_edges_first() {
    let model = sample_with_edge_prob(DagKind::Gaussian, 8, 0.25, 3).unwrap();
    let data = model.sample_data(300, 3).unwrap();
    let truth = model.moralize();
    let ranked = grafo_rank(&data, &ForestParams { n_trees: 100, seed: 2, ..Default::default() }).unwrap();
    assert_eq!(ranked.entries.len(), 28);
    let top = select_top_q(&ranked, 3);
    assert!(!top.is_empty());
    assert!(top.iter().all(|e| truth.contains(*e)), "{top:?} vs {:?}", truth.edges);
}

#[test]
fn grafo_handles_mixed_data() {
    let model = sample_with_edge_prob(DagKind::Mixed, 6, 0.4, 1).unwrap();
    let data = model.sample_data(120, 1).unwrap();
    let ranked = grafo_rank(&data, &ForestParams { n_trees: 30, ..Default::default() }).unwrap();
    assert!(ranked.entries.iter().all(|e| e.selectable && e.rank >= 1.0));
}

#[test]
fn edge_takes_worse_of_two_local_ranks() {
    // local ranks of the other two variables in each regression
    let ranked = combine_local_ranks(&[
        Some(vec![f64::NAN, 1.0, 2.0]),
        Some(vec![1.0, f64::NAN, 2.0]),
        Some(vec![1.0, 2.0, f64::NAN]),
    ]);
    let rank = |i, j| ranked.rank_of(Edge::new(i, j)).unwrap().rank;
    assert_eq!(rank(0, 1), 1.0);
    assert_eq!(rank(0, 2), 2.0);
    assert_eq!(rank(1, 2), 2.0);
}
