//! Estimate a graph from Gaussian data with forest rankings and Stability
//! Selection, then score it against the known truth.
//!
//! `cargo run --release --example estimate_graph`

use grafo::bench::evaluate;
use grafo::forest::ForestParams;
use grafo::learner::ForestRanker;
use grafo::simulate::{sample_with_edge_prob, DagKind};
use grafo::stability::{fp_bound, raw_select, stability_select, StabilityParams};

pub fn run() -> grafo::Result<()> {
    let p = 15;
    let model = sample_with_edge_prob(DagKind::Gaussian, p, 0.15, 21)?;
    let data = model.sample_data(150, 21)?;
    let truth = model.moralize();

    let learner = ForestRanker {
        params: ForestParams {
            n_trees: 50,
            ..Default::default()
        },
    };
    let params = StabilityParams {
        expected_fp_bound: 1.0,
        n_sub: 20,
        seed: 5,
        ..Default::default()
    };
    let graph = stability_select(&data, &learner, &params)?;
    let e = evaluate(&graph.selected, &truth);
    println!(
        "stable: q = {}, bound on E[V] = {:.2}; {} selected, TP = {}, FP = {} of {} true edges",
        graph.q_used,
        fp_bound(graph.q_used, params.pi_thr, p),
        graph.selected.len(),
        e.tp,
        e.fp,
        truth.len()
    );
    for edge in &graph.selected {
        let mark = if truth.contains(*edge) { "" } else { "  (false)" };
        println!("  {edge}  freq {:.2}{mark}", graph.frequency(*edge));
    }

    let raw = raw_select(&data, &learner, graph.q_used, 5)?;
    let e = evaluate(&raw, &truth);
    println!("raw top-{}: TP = {}, FP = {}", graph.q_used, e.tp, e.fp);

    let mut dot = Vec::new();
    graph.write_dot(&mut dot, &data.names())?;
    println!("\n{}", String::from_utf8_lossy(&dot));
    Ok(())
}

#[allow(dead_code)]
fn main() -> grafo::Result<()> {
    run()
}
