//! DAG-based generators and moralization.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{var_names, TrueCig};
use crate::dataset::{Column, MixedDataset};
use crate::error::{Error, Result};
use crate::ranking::Edge;
use crate::seed::{self, tag, Rng};

/// Probability that an upper-triangular weight is nonzero.
pub const EDGE_PROB: f64 = 0.01;

/// Factor applied to every weight in the nonlinear model.
pub const NONLINEAR_AMPLIFY: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DagKind {
    Gaussian,
    GaussianInteractions,
    GaussianNonlinear,
    Bernoulli,
    Multinomial,
    Mixed,
}

impl DagKind {
    pub const ALL: [DagKind; 6] = [
        DagKind::Gaussian,
        DagKind::GaussianInteractions,
        DagKind::GaussianNonlinear,
        DagKind::Bernoulli,
        DagKind::Multinomial,
        DagKind::Mixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DagKind::Gaussian => "gaussian",
            DagKind::GaussianInteractions => "gaussian_interactions",
            DagKind::GaussianNonlinear => "gaussian_nonlinear",
            DagKind::Bernoulli => "bernoulli",
            DagKind::Multinomial => "multinomial",
            DagKind::Mixed => "mixed",
        }
    }

    /// Whether variable `j` (0-based) is categorical with 3–5 levels.
    pub fn is_multinomial(self, j: usize) -> bool {
        match self {
            DagKind::Multinomial => true,
            // X1, X3, … are Gaussian; X2, X4, … multinomial
            DagKind::Mixed => j % 2 == 1,
            _ => false,
        }
    }
}

impl fmt::Display for DagKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DagKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DagKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Param(format!("unknown DAG model {s:?}")))
    }
}

/// Weight of an edge `i → j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    pub i: usize,
    pub j: usize,
    pub a: f64,
}

/// Interaction term b·x_i·x_k in the mean of x_j.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interaction {
    pub i: usize,
    pub k: usize,
    pub j: usize,
    pub b: f64,
}

/// Sign vectors for a nonzero a_ij in the multinomial and mixed models.
/// `u` is empty when x_i is continuous; `v` has length 1 when x_j is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignVectors {
    pub i: usize,
    pub j: usize,
    pub u: Vec<i8>,
    pub v: Vec<i8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DagModel {
    pub kind: DagKind,
    pub p: usize,
    /// Nonzero entries of the strictly upper-triangular weight matrix,
    /// ordered by (j, i).
    pub weights: Vec<Weight>,
    /// Level counts; 0 for continuous and binary variables.
    pub levels: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub interactions: Vec<Interaction>,
    /// Parents entering linearly, per variable (nonlinear model only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub linear_parents: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub signs: Vec<SignVectors>,
}

fn signed_weight(rng: &mut Rng) -> f64 {
    let magnitude = rng.random_range(0.1..=1.0);
    if rng.random_bool(0.5) {
        magnitude
    } else {
        -magnitude
    }
}

fn sign_vector(rng: &mut Rng, len: usize) -> Vec<i8> {
    loop {
        let v: Vec<i8> = (0..len).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
        // need both signs once there is room for them
        if len < 2 || v.iter().any(|&s| s != v[0]) {
            return v;
        }
    }
}

fn half(n: usize) -> usize {
    (n as f64 / 2.0).round() as usize
}

/// Random model with the default edge density of 1%.
pub fn sample_dag_model(kind: DagKind, p: usize, seed: u64) -> Result<DagModel> {
    sample_with_edge_prob(kind, p, EDGE_PROB, seed)
}

/// Random model in which each a_ij (i < j) is nonzero with probability
/// `edge_prob`.
pub fn sample_with_edge_prob(kind: DagKind, p: usize, edge_prob: f64, seed: u64) -> Result<DagModel> {
    if p < 2 {
        return Err(Error::Param(format!("p = {p}: need at least two variables")));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::Param(format!("edge probability {edge_prob} outside [0, 1]")));
    }
    let mut rng = seed::stream(seed, tag::MODEL);

    let mut weights = Vec::new();
    for j in 1..p {
        for i in 0..j {
            if rng.random_bool(edge_prob) {
                weights.push(Weight {
                    i,
                    j,
                    a: signed_weight(&mut rng),
                });
            }
        }
    }
    let parents = |j: usize| -> Vec<usize> { weights.iter().filter(|w| w.j == j).map(|w| w.i).collect() };

    let levels: Vec<usize> = (0..p)
        .map(|j| {
            if kind.is_multinomial(j) {
                rng.random_range(3..=5)
            } else {
                0
            }
        })
        .collect();

    let mut model = DagModel {
        kind,
        p,
        weights: weights.clone(),
        levels,
        interactions: Vec::new(),
        linear_parents: Vec::new(),
        signs: Vec::new(),
    };

    match kind {
        DagKind::GaussianInteractions => {
            for j in 1..p {
                let pa = parents(j);
                let pairs: Vec<(usize, usize)> = pa
                    .iter()
                    .enumerate()
                    .flat_map(|(x, &i)| pa[x + 1..].iter().map(move |&k| (i, k)))
                    .collect();
                let mut chosen = index::sample(&mut rng, pairs.len(), half(pairs.len())).into_vec();
                chosen.sort_unstable();
                for c in chosen {
                    let (i, k) = pairs[c];
                    model.interactions.push(Interaction {
                        i,
                        k,
                        j,
                        b: signed_weight(&mut rng),
                    });
                }
            }
        }
        DagKind::GaussianNonlinear => {
            model.linear_parents = (0..p)
                .map(|j| {
                    let pa = parents(j);
                    let mut chosen = index::sample(&mut rng, pa.len(), half(pa.len())).into_vec();
                    chosen.sort_unstable();
                    chosen.into_iter().map(|c| pa[c]).collect()
                })
                .collect();
        }
        DagKind::Multinomial | DagKind::Mixed => {
            for w in &weights {
                let u_len = model.levels[w.i];
                let v_len = model.levels[w.j].max(1);
                let u = sign_vector(&mut rng, u_len);
                let v = sign_vector(&mut rng, v_len);
                model.signs.push(SignVectors { i: w.i, j: w.j, u, v });
            }
        }
        DagKind::Gaussian | DagKind::Bernoulli => {}
    }
    Ok(model)
}

impl DagModel {
    pub fn parents(&self, j: usize) -> Vec<usize> {
        self.weights.iter().filter(|w| w.j == j).map(|w| w.i).collect()
    }

    /// The conditional independence graph: parent–child edges plus edges
    /// between every two parents of a common child.
    pub fn moralize(&self) -> TrueCig {
        let mut edges = Vec::new();
        for j in 0..self.p {
            let pa = self.parents(j);
            for (x, &i) in pa.iter().enumerate() {
                edges.push(Edge::new(i, j));
                for &k in &pa[x + 1..] {
                    edges.push(Edge::new(i, k));
                }
            }
        }
        for t in &self.interactions {
            edges.push(Edge::new(t.i, t.j));
            edges.push(Edge::new(t.k, t.j));
            edges.push(Edge::new(t.i, t.k));
        }
        TrueCig::new(self.p, edges)
    }

    /// Draws `n` rows, variables in index order.
    pub fn sample_data(&self, n: usize, seed: u64) -> Result<MixedDataset> {
        if n == 0 {
            return Err(Error::Param("n must be positive".into()));
        }
        let mut rng = seed::stream(seed, tag::DATA);
        let p = self.p;
        let names = var_names(p);
        let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); p];
        for (w, weight) in self.weights.iter().enumerate() {
            incoming[weight.j].push(w);
        }
        let is_linear = |i: usize, j: usize| match self.kind {
            DagKind::GaussianNonlinear => self.linear_parents[j].contains(&i),
            _ => true,
        };

        // row-major state, filled variable by variable within a row
        let mut cols: Vec<Vec<f64>> = vec![Vec::with_capacity(n); p];
        let mut eta = Vec::new();
        for _ in 0..n {
            for j in 0..p {
                let x = |i: usize, cols: &Vec<Vec<f64>>| *cols[i].last().expect("parent sampled first");
                let value = match self.kind {
                    DagKind::Gaussian | DagKind::GaussianInteractions | DagKind::GaussianNonlinear => {
                        let mut mu = 0.0;
                        for &w in &incoming[j] {
                            let Weight { i, a, .. } = self.weights[w];
                            let xi = x(i, &cols);
                            mu += match self.kind {
                                DagKind::GaussianNonlinear if is_linear(i, j) => NONLINEAR_AMPLIFY * a * xi,
                                DagKind::GaussianNonlinear if xi == 0.0 => 0.0,
                                DagKind::GaussianNonlinear => NONLINEAR_AMPLIFY * a * xi.abs().ln(),
                                _ => a * xi,
                            };
                        }
                        for t in self.interactions.iter().filter(|t| t.j == j) {
                            mu += t.b * x(t.i, &cols) * x(t.k, &cols);
                        }
                        mu + rng.sample::<f64, _>(StandardNormal)
                    }
                    DagKind::Bernoulli => {
                        let eta: f64 = incoming[j]
                            .iter()
                            .map(|&w| self.weights[w].a * x(self.weights[w].i, &cols))
                            .sum();
                        let prob = 1.0 / (1.0 + (-eta).exp());
                        if rng.random_bool(prob) {
                            1.0
                        } else {
                            -1.0
                        }
                    }
                    DagKind::Multinomial | DagKind::Mixed => {
                        let c = self.levels[j].max(1);
                        eta.clear();
                        eta.resize(c, 0.0);
                        for &w in &incoming[j] {
                            let Weight { i, a, .. } = self.weights[w];
                            let sv = &self.signs[w];
                            let xi = x(i, &cols);
                            let effect = if self.levels[i] > 0 {
                                let level = xi as usize;
                                sv.u
                                    .iter()
                                    .enumerate()
                                    .map(|(l, &u)| f64::from(u) * if l == level { 1.0 } else { -1.0 })
                                    .sum::<f64>()
                            } else {
                                xi
                            };
                            for (s, e) in eta.iter_mut().enumerate() {
                                *e += f64::from(sv.v[s]) * a * effect;
                            }
                        }
                        if self.levels[j] > 0 {
                            draw_softmax(&eta, &mut rng) as f64
                        } else {
                            eta[0] + rng.sample::<f64, _>(StandardNormal)
                        }
                    }
                };
                cols[j].push(value);
            }
        }

        let columns = cols
            .into_iter()
            .zip(names)
            .enumerate()
            .map(|(j, (values, name))| {
                if self.kind == DagKind::Bernoulli {
                    Column::signs(name, &values)
                } else if self.levels[j] > 0 {
                    let labels = (1..=self.levels[j]).map(|l| l.to_string()).collect();
                    let codes: Vec<usize> = values.iter().map(|&v| v as usize).collect();
                    Column::categorical(name, labels, &codes)
                } else {
                    Column::continuous(name, values)
                }
            })
            .collect();
        MixedDataset::from_columns(columns)
    }
}

fn draw_softmax(eta: &[f64], rng: &mut Rng) -> usize {
    let max = eta.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = eta.iter().map(|e| (e - max).exp()).collect();
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (s, w) in weights.iter().enumerate() {
        if u < *w {
            return s;
        }
        u -= w;
    }
    weights.len() - 1
}
