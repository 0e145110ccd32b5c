//! Stability selection over subsample rankings.

use std::io::Write;

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::MixedDataset;
use crate::error::{Error, Result};
use crate::learner::EdgeRanker;
use crate::ranking::{all_edges, n_pairs, select_top_q, Edge, RankedEdges};
use crate::seed::{self, tag};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StabilityParams {
    /// Bound on the expected number of falsely selected edges, E[V].
    pub expected_fp_bound: f64,
    pub pi_thr: f64,
    pub n_sub: usize,
    pub seed: u64,
}

impl Default for StabilityParams {
    fn default() -> Self {
        StabilityParams {
            expected_fp_bound: 1.0,
            pi_thr: 0.75,
            n_sub: 100,
            seed: 0,
        }
    }
}

impl StabilityParams {
    pub fn validate(&self) -> Result<()> {
        check_pi_thr(self.pi_thr)?;
        if !(self.expected_fp_bound > 0.0) || !self.expected_fp_bound.is_finite() {
            return Err(Error::Param(format!(
                "E[V] = {} must be positive",
                self.expected_fp_bound
            )));
        }
        if self.n_sub == 0 {
            return Err(Error::Param("n_sub must be positive".into()));
        }
        Ok(())
    }
}

pub fn check_pi_thr(pi_thr: f64) -> Result<()> {
    if pi_thr > 0.5 && pi_thr < 1.0 {
        Ok(())
    } else {
        Err(Error::Param(format!("pi_thr = {pi_thr} must lie in (0.5, 1)")))
    }
}

/// Edges kept per subsample for a given E[V]:
/// q = ⌊√((2π_thr − 1)·E[V]·p(p−1)/2)⌋.
pub fn compute_q(ev: f64, pi_thr: f64, p: usize) -> Result<usize> {
    check_pi_thr(pi_thr)?;
    if !(ev > 0.0) || !ev.is_finite() {
        return Err(Error::Param(format!("E[V] = {ev} must be positive")));
    }
    if p < 2 {
        return Err(Error::Param("need at least two variables".into()));
    }
    let target = (2.0 * pi_thr - 1.0) * ev * n_pairs(p) as f64;
    let mut q = target.sqrt().floor() as usize;
    // guard against sqrt rounding on perfect squares
    while ((q + 1) * (q + 1)) as f64 <= target {
        q += 1;
    }
    while q > 0 && (q * q) as f64 > target {
        q -= 1;
    }
    if q == 0 {
        log::warn!("q = 0 for E[V] = {ev}, pi_thr = {pi_thr}, p = {p}: nothing is selectable");
    }
    Ok(q.min(n_pairs(p)))
}

/// Bound on E[V] implied by selecting `q` edges per subsample:
/// q² / ((2π_thr − 1)·p(p−1)/2).
pub fn fp_bound(q: usize, pi_thr: f64, p: usize) -> f64 {
    (q * q) as f64 / ((2.0 * pi_thr - 1.0) * n_pairs(p) as f64)
}

/// Rows of subsample `k`: ⌊n/2⌋ distinct rows, ascending.
pub fn subsample_rows(n: usize, k: usize, seed: u64) -> Vec<usize> {
    let mut rng = seed::stream(seed::child(seed, tag::SUBSAMPLE_ROWS), k as u64);
    let mut rows = index::sample(&mut rng, n, n / 2).into_vec();
    rows.sort_unstable();
    rows
}

/// Learner seed used for subsample `k`.
pub fn subsample_seed(seed: u64, k: usize) -> u64 {
    seed::child(seed::child(seed, tag::SUBSAMPLE_LEARNER), k as u64)
}

/// Rankings from every subsample; `None` where the learner failed.
#[derive(Debug)]
pub struct SubsampleRankings {
    pub p: usize,
    pub rankings: Vec<Option<RankedEdges>>,
    /// Error from the lowest-numbered failed subsample.
    pub first_error: Option<Error>,
}

pub fn subsample_rankings(
    data: &MixedDataset,
    learner: &dyn EdgeRanker,
    n_sub: usize,
    seed: u64,
) -> SubsampleRankings {
    let n = data.n_rows();
    let results: Vec<Result<RankedEdges>> = (0..n_sub)
        .into_par_iter()
        .map(|k| {
            let sub = data.subset_rows(&subsample_rows(n, k, seed));
            learner.rank(&sub, subsample_seed(seed, k))
        })
        .collect();
    let mut first_error = None;
    let mut rankings = Vec::with_capacity(n_sub);
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok(r) => rankings.push(Some(r)),
            Err(e) => {
                log::warn!("subsample {k}: {} failed: {e}", learner.name());
                first_error.get_or_insert(e);
                rankings.push(None);
            }
        }
    }
    SubsampleRankings {
        p: data.n_cols(),
        rankings,
        first_error,
    }
}

impl SubsampleRankings {
    pub fn n_sub(&self) -> usize {
        self.rankings.len()
    }

    pub fn failed(&self) -> usize {
        self.rankings.iter().filter(|r| r.is_none()).count()
    }

    /// Per-edge selection counts after cutting every subsample at `q`,
    /// indexed by [`Edge::index`].
    pub fn counts(&self, q: usize) -> Vec<usize> {
        let mut counts = vec![0; n_pairs(self.p)];
        for ranked in self.rankings.iter().flatten() {
            for e in select_top_q(ranked, q) {
                counts[e.index(self.p)] += 1;
            }
        }
        counts
    }

    /// Edges whose selection frequency at cut `q` reaches `pi_thr`.
    pub fn stable_set(&self, q: usize, pi_thr: f64) -> Vec<Edge> {
        let n_sub = self.n_sub() as f64;
        let counts = self.counts(q);
        all_edges(self.p)
            .zip(counts)
            .filter(|&(_, c)| c as f64 / n_sub >= pi_thr)
            .map(|(e, _)| e)
            .collect()
    }

    pub fn to_graph(&self, q: usize, params: &StabilityParams) -> StableGraph {
        let n_sub = self.n_sub() as f64;
        let edges: Vec<EdgeFrequency> = all_edges(self.p)
            .zip(self.counts(q))
            .map(|(edge, count)| EdgeFrequency {
                edge,
                count,
                frequency: count as f64 / n_sub,
            })
            .collect();
        let selected = edges
            .iter()
            .filter(|e| e.frequency >= params.pi_thr)
            .map(|e| e.edge)
            .collect();
        StableGraph {
            p: self.p,
            edges,
            selected,
            q_used: q,
            failed_subsamples: self.failed(),
            params: params.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeFrequency {
    pub edge: Edge,
    pub count: usize,
    pub frequency: f64,
}

/// Final graph: every candidate edge with its selection frequency, and the
/// edges at or above `params.pi_thr`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StableGraph {
    pub p: usize,
    pub edges: Vec<EdgeFrequency>,
    pub selected: Vec<Edge>,
    pub q_used: usize,
    pub failed_subsamples: usize,
    pub params: StabilityParams,
}

/// Stability selection: q from E[V], `n_sub` half-size subsamples, and the
/// edges selected in at least a `pi_thr` fraction of them. Fails with the
/// learner's error if every subsample failed.
pub fn stability_select(
    data: &MixedDataset,
    learner: &dyn EdgeRanker,
    params: &StabilityParams,
) -> Result<StableGraph> {
    params.validate()?;
    if data.n_rows() < 4 {
        return Err(Error::Param("stability selection needs at least 4 rows".into()));
    }
    let q = compute_q(params.expected_fp_bound, params.pi_thr, data.n_cols())?;
    let mut subs = subsample_rankings(data, learner, params.n_sub, params.seed);
    if subs.failed() == subs.n_sub() {
        if let Some(e) = subs.first_error.take() {
            return Err(e);
        }
    }
    Ok(subs.to_graph(q, params))
}

/// One learner run on all rows, cut at `q`.
pub fn raw_select(data: &MixedDataset, learner: &dyn EdgeRanker, q: usize, seed: u64) -> Result<Vec<Edge>> {
    Ok(select_top_q(&learner.rank(data, seed)?, q))
}

/// Metadata block written next to an exported graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphMetadata {
    pub mode: String,
    pub learner: String,
    pub p: usize,
    pub n: usize,
    pub expected_fp_bound: Option<f64>,
    pub pi_thr: Option<f64>,
    pub q: usize,
    pub fp_bound: Option<f64>,
    pub n_sub: Option<usize>,
    pub seed: u64,
    pub n_selected: usize,
    pub failed_subsamples: usize,
    pub columns: Vec<String>,
}

impl StableGraph {
    pub fn frequency(&self, edge: Edge) -> f64 {
        self.edges[edge.index(self.p)].frequency
    }

    /// `i<TAB>j<TAB>frequency<TAB>selected` for every edge selected in at
    /// least one subsample, with a header row.
    pub fn write_tsv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "i\tj\tfrequency\tselected")?;
        for e in self.edges.iter().filter(|e| e.count > 0) {
            let sel = u8::from(e.frequency >= self.params.pi_thr);
            writeln!(w, "{}\t{}\t{}\t{}", e.edge.i(), e.edge.j(), e.frequency, sel)?;
        }
        Ok(())
    }

    pub fn write_dot<W: Write>(&self, w: W, names: &[String]) -> Result<()> {
        let labelled: Vec<(Edge, f64)> = self.selected.iter().map(|&e| (e, self.frequency(e))).collect();
        write_dot(w, names, &labelled)
    }

    pub fn metadata(&self, learner: &str, names: &[String], n: usize) -> GraphMetadata {
        GraphMetadata {
            mode: "stability".into(),
            learner: learner.into(),
            p: self.p,
            n,
            expected_fp_bound: Some(self.params.expected_fp_bound),
            pi_thr: Some(self.params.pi_thr),
            q: self.q_used,
            fp_bound: Some(fp_bound(self.q_used, self.params.pi_thr, self.p)),
            n_sub: Some(self.params.n_sub),
            seed: self.params.seed,
            n_selected: self.selected.len(),
            failed_subsamples: self.failed_subsamples,
            columns: names.to_vec(),
        }
    }
}

/// Undirected DOT graph of `edges` over all nodes, labelled by column name.
pub fn write_dot<W: Write>(mut w: W, names: &[String], edges: &[(Edge, f64)]) -> Result<()> {
    writeln!(w, "graph cig {{")?;
    for (k, name) in names.iter().enumerate() {
        writeln!(w, "  {k} [label={}];", serde_json::to_string(name)?)?;
    }
    for (e, weight) in edges {
        writeln!(w, "  {} -- {} [label=\"{weight}\"];", e.i(), e.j())?;
    }
    writeln!(w, "}}")?;
    Ok(())
}
