//! Draw from a small Ising model by Gibbs sampling and compare against the
//! exactly enumerated distribution.
//!
//! `cargo run --release --example ising_gibbs`

use grafo::simulate::{gibbs_sample, sample_ising, DEFAULT_BURN_IN};

pub fn run() -> grafo::Result<()> {
    let model = sample_ising(4, 2)?;
    println!("theta:");
    for row in &model.theta {
        println!("  {row:?}");
    }
    let exact = model.exact_distribution();
    let n = 20_000;
    let data = gibbs_sample(&model, n, DEFAULT_BURN_IN, 20, 9)?;
    let mut freq = vec![0.0; exact.len()];
    for r in 0..n {
        let state = (0..4).filter(|&i| data.column(i).level(r) == 1).fold(0, |m, i| m | 1 << i);
        freq[state] += 1.0 / n as f64;
    }
    let tv = 0.5 * freq.iter().zip(&exact).map(|(a, b)| (a - b).abs()).sum::<f64>();
    println!("total variation distance to exact: {tv:.4}");
    println!("true edges: {:?}", model.true_cig().edges.iter().map(|e| e.to_string()).collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() -> grafo::Result<()> {
    run()
}
