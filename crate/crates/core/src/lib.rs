//! Conditional independence graph estimation with random forests and
//! Stability Selection.
//!
//! For each variable a random forest regresses it on all others; the
//! out-of-bag permutation importances rank candidate edges, and Stability
//! Selection over half-size subsamples turns those rankings into a graph
//! with a bound on the expected number of false edges. A LASSO-based
//! ranker, simulators with known ground truth, and a benchmark harness sit
//! alongside.
//!
//! ```no_run
//! use grafo::{learner::ForestRanker, simulate, stability};
//!
//! let sim = simulate::simulate("gaussian".parse()?, 20, 100, 7)?;
//! let params = stability::StabilityParams { expected_fp_bound: 2.0, ..Default::default() };
//! let graph = stability::stability_select(&sim.data, &ForestRanker::default(), &params)?;
//! println!("{} edges selected", graph.selected.len());
//! # Ok::<(), grafo::Error>(())
//! ```
//!
//! The `examples/` directory has one runnable program per capability.

pub mod bench;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod forest;
pub mod lasso;
pub mod learner;
pub mod ranking;
pub mod seed;
pub mod simulate;
pub mod stability;

pub use dataset::{Column, ColumnType, MixedDataset};
pub use error::{Error, Result};
pub use ranking::{Edge, RankedEdges};
