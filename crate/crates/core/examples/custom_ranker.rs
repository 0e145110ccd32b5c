//! Plug a user-defined edge ranker into Stability Selection. This one ranks
//! edges by absolute Pearson correlation.
//!
//! `cargo run --example custom_ranker`

use grafo::learner::EdgeRanker;
use grafo::ranking::{all_edges, average_ranks, RankedEdge};
use grafo::simulate::{sample_with_edge_prob, DagKind};
use grafo::stability::{stability_select, StabilityParams};
use grafo::{Error, MixedDataset, RankedEdges};

struct Correlation;

fn corr(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

impl EdgeRanker for Correlation {
    fn name(&self) -> &str {
        "correlation"
    }

    fn rank(&self, data: &MixedDataset, _seed: u64) -> grafo::Result<RankedEdges> {
        if !data.all_continuous() {
            return Err(Error::Param("correlation ranker needs continuous data".into()));
        }
        let p = data.n_cols();
        let edges: Vec<_> = all_edges(p).collect();
        let scores: Vec<f64> = edges
            .iter()
            .map(|e| corr(data.column(e.i()).values(), data.column(e.j()).values()).abs())
            .collect();
        let ranks = average_ranks(&scores, |a, b| b.total_cmp(a));
        let entries = edges
            .into_iter()
            .zip(ranks)
            .map(|(edge, rank)| RankedEdge {
                edge,
                rank,
                selectable: true,
            })
            .collect();
        Ok(RankedEdges::new(p, entries))
    }
}

pub fn run() -> grafo::Result<()> {
    let model = sample_with_edge_prob(DagKind::Gaussian, 10, 0.2, 3)?;
    let data = model.sample_data(300, 3)?;
    let params = StabilityParams {
        expected_fp_bound: 1.0,
        n_sub: 50,
        ..Default::default()
    };
    let graph = stability_select(&data, &Correlation, &params)?;
    let truth = model.moralize();
    for e in &graph.selected {
        println!("{e}  freq {:.2}  true: {}", graph.frequency(*e), truth.contains(*e));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> grafo::Result<()> {
    run()
}
