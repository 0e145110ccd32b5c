//! Fit a forest with one informative predictor among noise and rank the
//! predictors by out-of-bag permutation importance.
//!
//! `cargo run --example forest_importance`

use grafo::forest::{ForestModel, ForestParams};
use grafo::{Column, MixedDataset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn run() -> grafo::Result<()> {
    let n = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut columns: Vec<Column> = (1..=6)
        .map(|j| Column::continuous(format!("x{j}"), (0..n).map(|_| rng.sample(StandardNormal)).collect()))
        .collect();
    // a categorical predictor with a real effect too
    let group: Vec<usize> = (0..n).map(|_| rng.random_range(0..3)).collect();
    let y: Vec<f64> = (0..n)
        .map(|r| {
            2.0 * columns[0].values()[r] + [0.0, 1.5, -1.5][group[r]] + rng.sample::<f64, _>(StandardNormal)
        })
        .collect();
    columns.push(Column::categorical("group", vec!["a".into(), "b".into(), "c".into()], &group));
    let x = MixedDataset::new(columns)?;
    let y = Column::continuous("y", y);

    let params = ForestParams {
        n_trees: 200,
        seed: 3,
        ..Default::default()
    };
    let forest = ForestModel::fit(&x, &y, &params)?;
    println!("OOB mean squared error: {:.3}", forest.oob_error(&x, &y));
    let importance = forest.permutation_importance(&x, &y, 3);
    for (name, score) in x.names().iter().zip(importance.scores()) {
        println!("{name:>6} {score:>8.4}");
    }
    println!("\nfirst tree, top levels:");
    for line in forest.trees()[0].dump(&x.names()).lines().take(6) {
        println!("  {line}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> grafo::Result<()> {
    run()
}
