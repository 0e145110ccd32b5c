//! CART regression and classification trees.

use std::fmt::Write as _;

use rand::seq::index;

use crate::dataset::{Column, MixedDataset};
use crate::seed::Rng;

/// Categorical predictors with more observed levels than this are rejected.
pub const MAX_SPLIT_LEVELS: usize = 10;

/// Response as seen by the tree builder.
#[derive(Debug, Clone)]
pub(crate) enum Target {
    Regression(Vec<f64>),
    Classification { classes: Vec<usize>, n_classes: usize },
}

impl Target {
    pub(crate) fn from_column(y: &Column) -> Target {
        match y.kind().n_levels() {
            None => Target::Regression(y.values().to_vec()),
            Some(n_classes) => Target::Classification {
                classes: (0..y.len()).map(|r| y.level(r)).collect(),
                n_classes,
            },
        }
    }

    pub(crate) fn len(&self) -> usize {
        match self {
            Target::Regression(v) => v.len(),
            Target::Classification { classes, .. } => classes.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SplitRule {
    /// Rows with value ≤ threshold go left.
    AtMost(f64),
    /// Rows whose level bit is set go left; any other level goes right.
    InLevels(u32),
}

impl SplitRule {
    fn goes_left(&self, value: f64) -> bool {
        match *self {
            SplitRule::AtMost(t) => value <= t,
            SplitRule::InLevels(mask) => {
                let level = value as u32;
                level < 32 && mask >> level & 1 == 1
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Leaf {
    Mean(f64),
    Votes { counts: Vec<u32>, class: usize },
}

impl Leaf {
    /// Regression mean, or the voted class index as `f64`.
    pub fn value(&self) -> f64 {
        match self {
            Leaf::Mean(m) => *m,
            Leaf::Votes { class, .. } => *class as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Leaf(Leaf),
    Split {
        feature: usize,
        rule: SplitRule,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, Copy)]
pub struct TreeParams {
    pub mtry: usize,
    pub min_node_size: usize,
    pub max_depth: Option<usize>,
}

/// A fitted binary tree stored as a flat node list; node 0 is the root.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    nodes: Vec<Node>,
    n_features: usize,
}

impl Tree {
    /// Grows a tree of `y` on the predictor columns of `x` using the given
    /// rows (repeats allowed, as in a bootstrap sample).
    pub fn fit(x: &MixedDataset, y: &Column, rows: &[usize], params: TreeParams, rng: &mut Rng) -> Tree {
        let target = Target::from_column(y);
        Self::fit_target(x, &column_ranks(x), &target, rows, params, rng)
    }

    pub(crate) fn fit_target(
        x: &MixedDataset,
        ranks: &[Vec<u32>],
        target: &Target,
        rows: &[usize],
        params: TreeParams,
        rng: &mut Rng,
    ) -> Tree {
        let mut builder = Builder {
            x,
            ranks,
            target,
            params,
            nodes: Vec::new(),
            scratch: Vec::with_capacity(rows.len()),
        };
        let mut rows = rows.to_vec();
        builder.grow(&mut rows, 0, rng);
        Tree {
            nodes: builder.nodes,
            n_features: x.n_cols(),
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf(_))).count()
    }

    /// Predictors used by at least one split.
    pub fn used_features(&self) -> Vec<bool> {
        let mut used = vec![false; self.n_features];
        for node in &self.nodes {
            if let Node::Split { feature, .. } = node {
                used[*feature] = true;
            }
        }
        used
    }

    pub fn leaf_for(&self, x: &MixedDataset, row: usize) -> &Leaf {
        self.leaf_with(x, row, None)
    }

    /// Leaf reached by `row`, optionally reading feature `f` from another row.
    pub(crate) fn leaf_with(&self, x: &MixedDataset, row: usize, swap: Option<(usize, usize)>) -> &Leaf {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf(leaf) => return leaf,
                Node::Split {
                    feature,
                    rule,
                    left,
                    right,
                } => {
                    let r = match swap {
                        Some((f, other)) if f == *feature => other,
                        _ => row,
                    };
                    at = if rule.goes_left(x.column(*feature).values()[r]) {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }

    pub fn predict(&self, x: &MixedDataset, row: usize) -> f64 {
        self.leaf_for(x, row).value()
    }

    /// Indented text rendering, one node per line.
    pub fn dump(&self, names: &[String]) -> String {
        let mut out = String::new();
        self.dump_node(0, 0, names, &mut out);
        out
    }

    fn dump_node(&self, at: usize, depth: usize, names: &[String], out: &mut String) {
        let pad = "  ".repeat(depth);
        match &self.nodes[at] {
            Node::Leaf(Leaf::Mean(m)) => {
                let _ = writeln!(out, "{pad}leaf mean={m}");
            }
            Node::Leaf(Leaf::Votes { counts, class }) => {
                let _ = writeln!(out, "{pad}leaf class={class} votes={counts:?}");
            }
            Node::Split {
                feature,
                rule,
                left,
                right,
            } => {
                let name = names.get(*feature).map_or("?", String::as_str);
                match rule {
                    SplitRule::AtMost(t) => {
                        let _ = writeln!(out, "{pad}{name} <= {t}");
                    }
                    SplitRule::InLevels(mask) => {
                        let levels: Vec<u32> = (0..32).filter(|l| mask >> l & 1 == 1).collect();
                        let _ = writeln!(out, "{pad}{name} in {levels:?}");
                    }
                }
                self.dump_node(*left, depth + 1, names, out);
                self.dump_node(*right, depth + 1, names, out);
            }
        }
    }
}

/// Dense ranks of each continuous column's values (empty for categorical
/// columns). Sorting rows by rank matches sorting by value.
pub(crate) fn column_ranks(x: &MixedDataset) -> Vec<Vec<u32>> {
    x.columns()
        .iter()
        .map(|col| {
            if col.is_categorical() {
                return Vec::new();
            }
            let v = col.values();
            let mut order: Vec<usize> = (0..v.len()).collect();
            order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
            let mut ranks = vec![0u32; v.len()];
            let mut rank = 0;
            for k in 1..order.len() {
                if v[order[k]].total_cmp(&v[order[k - 1]]).is_gt() {
                    rank += 1;
                }
                ranks[order[k]] = rank;
            }
            ranks
        })
        .collect()
}

struct Builder<'a> {
    x: &'a MixedDataset,
    ranks: &'a [Vec<u32>],
    target: &'a Target,
    params: TreeParams,
    nodes: Vec<Node>,
    /// (rank << 32 | row) sort keys.
    scratch: Vec<u64>,
}

struct Candidate {
    score: f64,
    feature: usize,
    rule: SplitRule,
}

impl Builder<'_> {
    fn grow(&mut self, rows: &mut [usize], depth: usize, rng: &mut Rng) -> usize {
        let at = self.nodes.len();
        self.nodes.push(Node::Leaf(Leaf::Mean(0.0)));
        let (leaf, pure, parent_score) = self.leaf_stats(rows);

        let depth_limited = self.params.max_depth.is_some_and(|d| depth >= d);
        if pure || rows.len() < self.params.min_node_size || depth_limited {
            self.nodes[at] = Node::Leaf(leaf);
            return at;
        }

        let n_features = self.x.n_cols();
        let mut features = index::sample(rng, n_features, self.params.mtry.min(n_features)).into_vec();
        features.sort_unstable();

        let mut best: Option<Candidate> = None;
        for f in features {
            if let Some(c) = self.best_split(f, rows) {
                if best.as_ref().is_none_or(|b| c.score > b.score) {
                    best = Some(c);
                }
            }
        }

        let tol = 1e-12 * parent_score.abs().max(1.0);
        match best {
            Some(c) if c.score - parent_score > tol => {
                let column = self.x.column(c.feature).values();
                let n_left = partition(rows, |r| c.rule.goes_left(column[r]));
                let (l, r) = rows.split_at_mut(n_left);
                let left = self.grow(l, depth + 1, rng);
                let right = self.grow(r, depth + 1, rng);
                self.nodes[at] = Node::Split {
                    feature: c.feature,
                    rule: c.rule,
                    left,
                    right,
                };
            }
            _ => self.nodes[at] = Node::Leaf(leaf),
        }
        at
    }

    /// Leaf value, purity, and the node's own split score (Σy²-style term).
    fn leaf_stats(&self, rows: &[usize]) -> (Leaf, bool, f64) {
        let n = rows.len() as f64;
        match self.target {
            Target::Regression(y) => {
                let sum: f64 = rows.iter().map(|&r| y[r]).sum();
                let first = y[rows[0]];
                let pure = rows.iter().all(|&r| y[r] == first);
                (Leaf::Mean(sum / n), pure, sum * sum / n)
            }
            Target::Classification { classes, n_classes } => {
                let mut counts = vec![0u32; *n_classes];
                for &r in rows {
                    counts[classes[r]] += 1;
                }
                let class = argmax(&counts);
                let pure = counts.iter().filter(|&&c| c > 0).count() == 1;
                let score = counts.iter().map(|&c| (c as f64) * (c as f64)).sum::<f64>() / n;
                (Leaf::Votes { counts, class }, pure, score)
            }
        }
    }

    fn best_split(&mut self, f: usize, rows: &[usize]) -> Option<Candidate> {
        let col = self.x.column(f);
        match col.kind().n_levels() {
            None => self.best_threshold(f, col.values(), rows),
            Some(n_levels) => self.best_subset(f, col.values(), n_levels, rows),
        }
    }

    fn best_threshold(&mut self, f: usize, xs: &[f64], rows: &[usize]) -> Option<Candidate> {
        let ranks = &self.ranks[f];
        self.scratch.clear();
        self.scratch
            .extend(rows.iter().map(|&r| (u64::from(ranks[r]) << 32) | r as u64));
        self.scratch.sort_unstable();
        let sorted = &self.scratch;
        let n = sorted.len();
        let rank = |k: usize| sorted[k] >> 32;
        let row = |k: usize| (sorted[k] & 0xffff_ffff) as usize;
        if rank(0) == rank(n - 1) {
            return None;
        }
        let mut best: Option<(f64, usize)> = None;
        match self.target {
            Target::Regression(y) => {
                let total: f64 = (0..n).map(|k| y[row(k)]).sum();
                let mut left = 0.0;
                for k in 0..n - 1 {
                    left += y[row(k)];
                    if rank(k) == rank(k + 1) {
                        continue;
                    }
                    let nl = (k + 1) as f64;
                    let nr = (n - k - 1) as f64;
                    let right = total - left;
                    let score = left * left / nl + right * right / nr;
                    if best.is_none_or(|(b, _)| score > b) {
                        best = Some((score, k));
                    }
                }
            }
            Target::Classification { classes, n_classes } => {
                let mut right_counts = vec![0f64; *n_classes];
                for k in 0..n {
                    right_counts[classes[row(k)]] += 1.0;
                }
                let mut left_counts = vec![0f64; *n_classes];
                let mut left_sq = 0.0;
                let mut right_sq: f64 = right_counts.iter().map(|c| c * c).sum();
                for k in 0..n - 1 {
                    let c = classes[row(k)];
                    left_sq += 2.0 * left_counts[c] + 1.0;
                    left_counts[c] += 1.0;
                    right_sq -= 2.0 * right_counts[c] - 1.0;
                    right_counts[c] -= 1.0;
                    if rank(k) == rank(k + 1) {
                        continue;
                    }
                    let nl = (k + 1) as f64;
                    let nr = (n - k - 1) as f64;
                    let score = left_sq / nl + right_sq / nr;
                    if best.is_none_or(|(b, _)| score > b) {
                        best = Some((score, k));
                    }
                }
            }
        }
        best.map(|(score, k)| {
            let (lo, hi) = (xs[row(k)], xs[row(k + 1)]);
            let mid = lo + (hi - lo) / 2.0;
            let threshold = if mid < hi { mid } else { lo };
            Candidate {
                score,
                feature: f,
                rule: SplitRule::AtMost(threshold),
            }
        })
    }

    fn best_subset(&self, f: usize, xs: &[f64], n_levels: usize, rows: &[usize]) -> Option<Candidate> {
        // Per-level sufficient statistics.
        let width = match self.target {
            Target::Regression(_) => 1,
            Target::Classification { n_classes, .. } => *n_classes,
        };
        let mut count = vec![0f64; n_levels];
        let mut stats = vec![0f64; n_levels * width];
        for &r in rows {
            let l = xs[r] as usize;
            count[l] += 1.0;
            match self.target {
                Target::Regression(y) => stats[l] += y[r],
                Target::Classification { classes, .. } => stats[l * width + classes[r]] += 1.0,
            }
        }
        let observed: Vec<usize> = (0..n_levels).filter(|&l| count[l] > 0.0).collect();
        let k = observed.len();
        if k < 2 {
            return None;
        }
        debug_assert!(k <= MAX_SPLIT_LEVELS);

        let total_n: f64 = count.iter().sum();
        let mut total = vec![0f64; width];
        for l in &observed {
            for c in 0..width {
                total[c] += stats[l * width + c];
            }
        }

        let mut best: Option<(f64, u32)> = None;
        let mut left = vec![0f64; width];
        // The first observed level always goes left; enumerate the rest.
        for bits in 0u32..(1 << (k - 1)) {
            if bits == (1 << (k - 1)) - 1 {
                continue;
            }
            let mut mask = 1u32 << observed[0];
            left.fill(0.0);
            let mut nl = count[observed[0]];
            for c in 0..width {
                left[c] = stats[observed[0] * width + c];
            }
            for (b, &l) in observed[1..].iter().enumerate() {
                if bits >> b & 1 == 1 {
                    mask |= 1 << l;
                    nl += count[l];
                    for c in 0..width {
                        left[c] += stats[l * width + c];
                    }
                }
            }
            let nr = total_n - nl;
            let score = match self.target {
                Target::Regression(_) => {
                    let right = total[0] - left[0];
                    left[0] * left[0] / nl + right * right / nr
                }
                Target::Classification { .. } => {
                    let mut ls = 0.0;
                    let mut rs = 0.0;
                    for c in 0..width {
                        ls += left[c] * left[c];
                        let rc = total[c] - left[c];
                        rs += rc * rc;
                    }
                    ls / nl + rs / nr
                }
            };
            let better = match best {
                None => true,
                Some((b, m)) => score > b || (score == b && mask < m),
            };
            if better {
                best = Some((score, mask));
            }
        }
        best.map(|(score, mask)| Candidate {
            score,
            feature: f,
            rule: SplitRule::InLevels(mask),
        })
    }
}

/// Lowest class index with the most votes.
pub(crate) fn argmax(counts: &[u32]) -> usize {
    let mut best = 0;
    for (c, &v) in counts.iter().enumerate() {
        if v > counts[best] {
            best = c;
        }
    }
    best
}

/// In-place stable-enough partition; returns the number of rows satisfying `pred`.
fn partition(rows: &mut [usize], pred: impl Fn(usize) -> bool) -> usize {
    let mut k = 0;
    for i in 0..rows.len() {
        if pred(rows[i]) {
            rows.swap(i, k);
            k += 1;
        }
    }
    k
}
