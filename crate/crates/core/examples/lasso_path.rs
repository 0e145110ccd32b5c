//! Compute a LASSO path and read off the penalty at which each predictor
//! enters.
//!
//! `cargo run --example lasso_path`

use grafo::lasso::{lasso_path, Family, LassoParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn run() -> grafo::Result<()> {
    let (n, p) = (100, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let x: Vec<Vec<f64>> = (0..p)
        .map(|_| (0..n).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    let y: Vec<f64> = (0..n)
        .map(|r| 1.5 * x[0][r] - 0.8 * x[2][r] + 0.3 * x[4][r] + rng.sample::<f64, _>(StandardNormal))
        .collect();

    let path = lasso_path(&x, &y, Family::Linear, &LassoParams::default())?;
    println!("{} penalties from {:.4} to {:.4}", path.lambdas.len(), path.lambdas[0], path.lambdas.last().unwrap());
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| path.entry_lambda[b].total_cmp(&path.entry_lambda[a]));
    for j in order {
        let last = path.coefs.last().unwrap()[j];
        println!("x{j}: enters at {:.4}, final coefficient {last:+.3}", path.entry_lambda[j]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> grafo::Result<()> {
    run()
}
