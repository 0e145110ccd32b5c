//! Bagged CART forests with out-of-bag permutation importance, and the
//! forest-based edge ranking built on them.

mod tree;

use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use tree::{Leaf, Node, SplitRule, Tree, TreeParams, MAX_SPLIT_LEVELS};

use crate::dataset::{Column, MixedDataset};
use crate::error::{Error, Result};
use crate::ranking::{all_edges, average_ranks, RankedEdge, RankedEdges};
use crate::seed::{self, tag};
use tree::{argmax, column_ranks, Target};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub n_trees: usize,
    /// Predictors tried per split; `None` picks ⌊k/3⌋ (regression) or
    /// ⌊√k⌋ (classification) for k predictors, at least 1.
    pub mtry: Option<usize>,
    /// Nodes smaller than this are not split; `None` means 5 for
    /// regression and 1 for classification.
    pub min_node_size: Option<usize>,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 500,
            mtry: None,
            min_node_size: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResponseKind {
    Regression,
    Classification,
}

impl ForestParams {
    fn resolve(&self, kind: ResponseKind, n_features: usize) -> Result<TreeParams> {
        if self.n_trees == 0 {
            return Err(Error::Param("n_trees must be positive".into()));
        }
        let mtry = match self.mtry {
            Some(m) if m == 0 || m > n_features => {
                return Err(Error::Param(format!(
                    "mtry = {m} must lie in 1..={n_features}"
                )))
            }
            Some(m) => m,
            None => match kind {
                ResponseKind::Regression => (n_features / 3).max(1),
                ResponseKind::Classification => ((n_features as f64).sqrt().floor() as usize).max(1),
            },
        };
        let min_node_size = match self.min_node_size {
            Some(0) => return Err(Error::Param("min_node_size must be at least 1".into())),
            Some(m) => m,
            None => match kind {
                ResponseKind::Regression => 5,
                ResponseKind::Classification => 1,
            },
        };
        Ok(TreeParams {
            mtry,
            min_node_size,
            max_depth: None,
        })
    }
}

/// Per-predictor mean increase in out-of-bag error under permutation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceVector(pub Vec<f64>);

impl ImportanceVector {
    pub fn scores(&self) -> &[f64] {
        &self.0
    }

    /// Index of the largest score (first on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (k, &v) in self.0.iter().enumerate() {
            if v > self.0[best] {
                best = k;
            }
        }
        best
    }
}

#[derive(Debug, Clone)]
pub struct ForestModel {
    trees: Vec<Tree>,
    oob: Vec<Vec<usize>>,
    kind: ResponseKind,
    n_classes: usize,
    constant_response: bool,
}

impl ForestModel {
    /// Fits `y` on every column of `x`, one bootstrap sample per tree.
    /// Tree `t` draws from the RNG stream `(params.seed, t)`.
    pub fn fit(x: &MixedDataset, y: &Column, params: &ForestParams) -> Result<ForestModel> {
        let n = x.n_rows();
        if x.n_cols() == 0 {
            return Err(Error::Param("forest needs at least one predictor".into()));
        }
        if y.len() != n {
            return Err(Error::Param(format!(
                "response has {} rows, predictors have {n}",
                y.len()
            )));
        }
        for col in x.columns() {
            if col.is_categorical() && col.distinct_count() > MAX_SPLIT_LEVELS {
                return Err(Error::TooManyLevels {
                    column: col.name().to_string(),
                    levels: col.distinct_count(),
                    max: MAX_SPLIT_LEVELS,
                });
            }
        }
        let kind = if y.is_categorical() {
            ResponseKind::Classification
        } else {
            ResponseKind::Regression
        };
        let tree_params = params.resolve(kind, x.n_cols())?;
        if n < 2 * tree_params.min_node_size {
            return Err(Error::Param(format!(
                "need at least {} rows for min_node_size {}, got {n}",
                2 * tree_params.min_node_size,
                tree_params.min_node_size
            )));
        }
        let constant_response = y.is_degenerate();
        if constant_response {
            log::warn!("response {:?} is constant; every tree is a single leaf", y.name());
        }

        let target = Target::from_column(y);
        let n_classes = y.kind().n_levels().unwrap_or(0);
        let ranks = column_ranks(x);
        let fitted: Vec<(Tree, Vec<usize>)> = (0..params.n_trees)
            .into_par_iter()
            .map(|t| {
                let mut rng = seed::stream(params.seed, t as u64);
                let mut in_bag = vec![false; n];
                let rows: Vec<usize> = (0..n)
                    .map(|_| {
                        let r = rng.random_range(0..n);
                        in_bag[r] = true;
                        r
                    })
                    .collect();
                let oob = (0..n).filter(|&r| !in_bag[r]).collect();
                (Tree::fit_target(x, &ranks, &target, &rows, tree_params, &mut rng), oob)
            })
            .collect();
        let (trees, oob) = fitted.into_iter().unzip();
        Ok(ForestModel {
            trees,
            oob,
            kind,
            n_classes,
            constant_response,
        })
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn oob_indices(&self) -> &[Vec<usize>] {
        &self.oob
    }

    pub fn kind(&self) -> ResponseKind {
        self.kind
    }

    /// Set when the response had a single distinct value.
    pub fn constant_response(&self) -> bool {
        self.constant_response
    }

    /// Bagged prediction: mean of tree predictions, or the majority class.
    pub fn predict(&self, x: &MixedDataset, row: usize) -> f64 {
        match self.kind {
            ResponseKind::Regression => {
                self.trees.iter().map(|t| t.predict(x, row)).sum::<f64>() / self.trees.len() as f64
            }
            ResponseKind::Classification => {
                let mut votes = vec![0u32; self.n_classes];
                for t in &self.trees {
                    votes[t.predict(x, row) as usize] += 1;
                }
                argmax(&votes) as f64
            }
        }
    }

    /// Out-of-bag mean squared error (regression) or misclassification rate
    /// (classification), over rows left out by at least one tree.
    pub fn oob_error(&self, x: &MixedDataset, y: &Column) -> f64 {
        let n = x.n_rows();
        let mut sums = vec![0.0; n];
        let mut counts = vec![0usize; n];
        let mut votes = vec![vec![0u32; self.n_classes]; n];
        for (tree, oob) in self.trees.iter().zip(&self.oob) {
            for &r in oob {
                let pred = tree.predict(x, r);
                counts[r] += 1;
                match self.kind {
                    ResponseKind::Regression => sums[r] += pred,
                    ResponseKind::Classification => votes[r][pred as usize] += 1,
                }
            }
        }
        let mut err = 0.0;
        let mut used = 0usize;
        for r in (0..n).filter(|&r| counts[r] > 0) {
            used += 1;
            err += match self.kind {
                ResponseKind::Regression => {
                    let d = sums[r] / counts[r] as f64 - y.values()[r];
                    d * d
                }
                ResponseKind::Classification => {
                    f64::from(u8::from(argmax(&votes[r]) != y.level(r)))
                }
            };
        }
        if used == 0 {
            0.0
        } else {
            err / used as f64
        }
    }

    /// Permutation importance on the data the model was fitted on. For each
    /// tree, each predictor's out-of-bag values are shuffled once and the
    /// increase in that tree's out-of-bag error is recorded; scores are the
    /// mean over trees with a non-empty out-of-bag set. Predictors a tree
    /// never splits on contribute exactly zero for that tree.
    pub fn permutation_importance(&self, x: &MixedDataset, y: &Column, seed: u64) -> ImportanceVector {
        let p = x.n_cols();
        let target = Target::from_column(y);
        let per_tree: Vec<Option<Vec<f64>>> = self
            .trees
            .par_iter()
            .zip(self.oob.par_iter())
            .enumerate()
            .map(|(t, (tree, oob))| {
                if oob.is_empty() {
                    return None;
                }
                let mut rng = seed::stream(seed, t as u64);
                let base = tree_error(tree, x, &target, oob, None);
                let used = tree.used_features();
                let mut shuffled = oob.clone();
                let diffs = (0..p)
                    .map(|f| {
                        if !used[f] {
                            return 0.0;
                        }
                        shuffled.copy_from_slice(oob);
                        shuffled.shuffle(&mut rng);
                        tree_error(tree, x, &target, oob, Some((f, &shuffled))) - base
                    })
                    .collect();
                Some(diffs)
            })
            .collect();

        let mut total = vec![0.0; p];
        let mut n_used = 0usize;
        for diffs in per_tree.into_iter().flatten() {
            n_used += 1;
            for (acc, d) in total.iter_mut().zip(diffs) {
                *acc += d;
            }
        }
        if n_used > 0 {
            for v in &mut total {
                *v /= n_used as f64;
            }
        }
        ImportanceVector(total)
    }
}

fn tree_error(
    tree: &Tree,
    x: &MixedDataset,
    target: &Target,
    oob: &[usize],
    permuted: Option<(usize, &[usize])>,
) -> f64 {
    let mut err = 0.0;
    for (k, &r) in oob.iter().enumerate() {
        let swap = permuted.map(|(f, rows)| (f, rows[k]));
        let leaf = tree.leaf_with(x, r, swap);
        err += match target {
            Target::Regression(y) => {
                let d = leaf.value() - y[r];
                d * d
            }
            Target::Classification { classes, .. } => {
                f64::from(u8::from(leaf.value() as usize != classes[r]))
            }
        };
    }
    debug_assert_eq!(target.len(), x.n_rows());
    err / oob.len() as f64
}

/// Ranks every edge by regressing each variable on all others with a forest.
///
/// Within regression `j`, predictors are ranked by decreasing permutation
/// importance (average ranks on ties). Edge `i-j` takes the worse of its two
/// ranks. A response that is constant in `data` yields no rankable edges.
pub fn grafo_rank(data: &MixedDataset, params: &ForestParams) -> Result<RankedEdges> {
    let p = data.n_cols();
    if p < 2 {
        return Err(Error::Param("need at least two variables".into()));
    }
    let local: Vec<Option<Vec<f64>>> = (0..p)
        .into_par_iter()
        .map(|j| -> Result<Option<Vec<f64>>> {
            let y = data.column(j);
            if y.is_degenerate() {
                log::warn!("response {:?} is degenerate; its edges are unrankable", y.name());
                return Ok(None);
            }
            let x = data.without_column(j);
            let fp = ForestParams {
                seed: seed::child(params.seed, j as u64),
                ..params.clone()
            };
            let model = ForestModel::fit(&x, y, &fp)?;
            let imp = model.permutation_importance(&x, y, seed::child(fp.seed, tag::IMPORTANCE));
            let ranks = average_ranks(imp.scores(), |a, b| b.total_cmp(a));
            // Re-insert the response slot so ranks are indexed by node.
            let mut by_node = ranks;
            by_node.insert(j, f64::NAN);
            Ok(Some(by_node))
        })
        .collect::<Result<_>>()?;

    Ok(combine_local_ranks(&local))
}

/// Edge ranks from per-response local ranks: `local[j][i]` is the rank of
/// predictor `i` in the regression of `j` (`None` when regression `j` is
/// unavailable). Edge `i-j` gets the worse (larger) of its two ranks.
pub fn combine_local_ranks(local: &[Option<Vec<f64>>]) -> RankedEdges {
    let p = local.len();
    let entries = all_edges(p)
        .map(|edge| match (&local[edge.j()], &local[edge.i()]) {
            (Some(rj), Some(ri)) => RankedEdge {
                edge,
                rank: rj[edge.i()].max(ri[edge.j()]),
                selectable: true,
            },
            _ => RankedEdge {
                edge,
                rank: f64::INFINITY,
                selectable: false,
            },
        })
        .collect();
    RankedEdges::new(p, entries)
}
