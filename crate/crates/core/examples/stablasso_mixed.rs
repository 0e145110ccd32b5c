//! The LASSO ranker needs all-continuous or all-binary input; mixed data
//! goes through the ±1 transform first.
//!
//! `cargo run --release --example stablasso_mixed`

use grafo::bench::evaluate;
use grafo::dataset::dichotomize;
use grafo::learner::LassoRanker;
use grafo::simulate::{sample_with_edge_prob, DagKind};
use grafo::stability::{stability_select, StabilityParams};
use grafo::Error;

pub fn run() -> grafo::Result<()> {
    let model = sample_with_edge_prob(DagKind::Mixed, 12, 0.2, 8)?;
    let data = model.sample_data(200, 8)?;
    let truth = model.moralize();
    let params = StabilityParams {
        expected_fp_bound: 1.0,
        n_sub: 30,
        seed: 1,
        ..Default::default()
    };

    match stability_select(&data, &LassoRanker::default(), &params) {
        Err(Error::NeedsDichotomization) => println!("raw mixed data rejected, dichotomizing"),
        other => println!("unexpected: {:?}", other.map(|g| g.selected)),
    }
    let binary = dichotomize(&data)?.to_mixed();
    let graph = stability_select(&binary, &LassoRanker::default(), &params)?;
    let e = evaluate(&graph.selected, &truth);
    println!(
        "{} edges selected: TP = {}, FP = {} ({} true edges)",
        graph.selected.len(),
        e.tp,
        e.fp,
        truth.len()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> grafo::Result<()> {
    run()
}
