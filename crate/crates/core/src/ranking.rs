//! Edge rankings and the top-q cut shared by every base learner.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Undirected edge between nodes `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    i: usize,
    j: usize,
}

impl Edge {
    /// Normalizes the endpoint order. Panics on a self-loop.
    pub fn new(a: usize, b: usize) -> Edge {
        assert_ne!(a, b, "self-loop {a}-{a}");
        Edge {
            i: a.min(b),
            j: a.max(b),
        }
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// Position in the row-major enumeration of all pairs of `p` nodes.
    pub fn index(&self, p: usize) -> usize {
        self.i * (2 * p - self.i - 1) / 2 + (self.j - self.i - 1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.i, self.j)
    }
}

/// Number of node pairs, p(p−1)/2.
pub fn n_pairs(p: usize) -> usize {
    p * p.saturating_sub(1) / 2
}

/// All edges of a complete graph on `p` nodes, in [`Edge::index`] order.
pub fn all_edges(p: usize) -> impl Iterator<Item = Edge> {
    (0..p).flat_map(move |i| (i + 1..p).map(move |j| Edge { i, j }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankedEdge {
    pub edge: Edge,
    /// Smaller is better.
    pub rank: f64,
    /// Unrankable edges are never selected.
    pub selectable: bool,
}

/// Edges ranked by one learner run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEdges {
    pub p: usize,
    pub entries: Vec<RankedEdge>,
}

impl RankedEdges {
    pub fn new(p: usize, entries: Vec<RankedEdge>) -> Self {
        debug_assert!(entries.len() <= n_pairs(p));
        debug_assert!(entries
            .iter()
            .all(|e| !e.selectable || e.rank.is_finite()));
        RankedEdges { p, entries }
    }

    pub fn rank_of(&self, edge: Edge) -> Option<&RankedEdge> {
        self.entries.iter().find(|e| e.edge == edge)
    }
}

/// Average ranks (1-based) of `scores` sorted by `cmp`; equal scores share
/// the mean of the positions they occupy.
pub fn average_ranks<T, F>(scores: &[T], mut cmp: F) -> Vec<f64>
where
    F: FnMut(&T, &T) -> Ordering,
{
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| cmp(&scores[a], &scores[b]));
    let mut ranks = vec![0.0; scores.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && cmp(&scores[order[start]], &scores[order[end]]) == Ordering::Equal
        {
            end += 1;
        }
        // positions start+1 ..= end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = avg;
        }
        start = end;
    }
    ranks
}

/// The `q` best-ranked selectable edges. When the cut at `q` falls inside a
/// group of tied ranks, that whole group is left out, so fewer than `q`
/// edges may come back.
pub fn select_top_q(ranked: &RankedEdges, q: usize) -> Vec<Edge> {
    let mut pool: Vec<&RankedEdge> = ranked.entries.iter().filter(|e| e.selectable).collect();
    pool.sort_by(|a, b| a.rank.total_cmp(&b.rank).then(a.edge.cmp(&b.edge)));
    if pool.len() <= q {
        return pool.iter().map(|e| e.edge).collect();
    }
    if q == 0 {
        return Vec::new();
    }
    let boundary = pool[q - 1].rank;
    let take = if pool[q].rank == boundary {
        pool.iter().take_while(|e| e.rank < boundary).count()
    } else {
        q
    };
    pool[..take].iter().map(|e| e.edge).collect()
}
