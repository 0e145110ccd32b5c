//! Base learners that turn a dataset into an edge ranking.

use crate::dataset::MixedDataset;
use crate::error::Result;
use crate::forest::{grafo_rank, ForestParams};
use crate::lasso::{stablasso_rank, LassoParams};
use crate::ranking::{all_edges, Edge, RankedEdge, RankedEdges};

/// Anything that ranks all candidate edges of a dataset.
pub trait EdgeRanker: Sync {
    fn name(&self) -> &str;

    /// Ranks edges of `data`; all randomness must derive from `seed`.
    fn rank(&self, data: &MixedDataset, seed: u64) -> Result<RankedEdges>;
}

/// Random-forest regressions with permutation-importance ranks.
#[derive(Debug, Clone, Default)]
pub struct ForestRanker {
    pub params: ForestParams,
}

impl EdgeRanker for ForestRanker {
    fn name(&self) -> &str {
        "grafo"
    }

    fn rank(&self, data: &MixedDataset, seed: u64) -> Result<RankedEdges> {
        let params = ForestParams {
            seed,
            ..self.params.clone()
        };
        grafo_rank(data, &params)
    }
}

/// LASSO regressions with entry-penalty ranks. Input must be all-continuous
/// or all two-level categorical.
#[derive(Debug, Clone, Default)]
pub struct LassoRanker {
    pub params: LassoParams,
}

impl EdgeRanker for LassoRanker {
    fn name(&self) -> &str {
        "stablasso"
    }

    fn rank(&self, data: &MixedDataset, _seed: u64) -> Result<RankedEdges> {
        stablasso_rank(data, &self.params)
    }
}

/// Ranks a fixed edge list 1, 2, … in the given order; everything else is
/// unrankable. Stands in for a learner in plumbing checks.
#[derive(Debug, Clone)]
pub struct FixedRanker {
    pub edges: Vec<Edge>,
}

impl EdgeRanker for FixedRanker {
    fn name(&self) -> &str {
        "fixed"
    }

    fn rank(&self, data: &MixedDataset, _seed: u64) -> Result<RankedEdges> {
        let p = data.n_cols();
        let entries = all_edges(p)
            .map(|edge| match self.edges.iter().position(|e| *e == edge) {
                Some(k) => RankedEdge {
                    edge,
                    rank: (k + 1) as f64,
                    selectable: true,
                },
                None => RankedEdge {
                    edge,
                    rank: f64::INFINITY,
                    selectable: false,
                },
            })
            .collect();
        Ok(RankedEdges::new(p, entries))
    }
}
