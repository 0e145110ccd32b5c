//! A reduced error-control experiment: observed false positives against
//! the Stability Selection bound.
//!
//! `cargo run --release --example error_control_bench [out_dir]`

use grafo::bench::{run_bench, BenchConfig, LearnerKind};
use grafo::forest::ForestParams;
use grafo::simulate::{DagKind, ModelKind};

pub fn run() -> grafo::Result<()> {
    let cfg = BenchConfig {
        model: ModelKind::Dag(DagKind::Gaussian),
        p: 20,
        n: 100,
        repetitions: 3,
        ev_values: vec![1.0, 3.0],
        learners: vec![LearnerKind::Grafo, LearnerKind::Stablasso, LearnerKind::Oracle],
        forest: ForestParams {
            n_trees: 30,
            ..Default::default()
        },
        n_sub: 16,
        seed: 42,
        ..Default::default()
    };
    let result = run_bench(&cfg)?;
    println!("true edges per repetition: {:?}", result.true_edges);
    result.write_cells_tsv(std::io::stdout().lock())?;
    if let Some(dir) = std::env::args().nth(1) {
        result.write_all(dir.as_ref())?;
        println!("tables and gnuplot files written to {dir}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> grafo::Result<()> {
    run()
}
