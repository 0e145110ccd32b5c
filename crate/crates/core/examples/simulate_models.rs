//! Sample every simulation model and report the size of its true graph.
//!
//! `cargo run --example simulate_models`

use grafo::simulate::{simulate, ModelKind};

pub fn run() -> grafo::Result<()> {
    let (p, n, seed) = (30, 200, 11);
    for kind in ModelKind::all() {
        let sim = simulate(kind, p, n, seed)?;
        let categorical = sim.data.columns().iter().filter(|c| c.is_categorical()).count();
        println!(
            "{:<22} {:>3} true edges, {:>2}/{p} categorical columns",
            kind.name(),
            sim.truth.len(),
            categorical
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> grafo::Result<()> {
    run()
}
