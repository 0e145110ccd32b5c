//! Ground-truth generators: DAG models with their moral graphs, and Ising
//! models sampled by Gibbs.

mod dag;
mod ising;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use dag::{
    sample_dag_model, sample_with_edge_prob, DagKind, DagModel, Interaction, SignVectors, Weight, EDGE_PROB,
    NONLINEAR_AMPLIFY,
};
pub use ising::{gibbs_sample, sample_ising, IsingModel, DEFAULT_BURN_IN, DEFAULT_THIN, MEAN_DEGREE};

use crate::dataset::MixedDataset;
use crate::error::{Error, Result};
use crate::ranking::Edge;

/// Column names `X1 … Xp`.
pub fn var_names(p: usize) -> Vec<String> {
    (1..=p).map(|j| format!("X{j}")).collect()
}

/// Undirected ground-truth graph, edges sorted and unique.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrueCig {
    pub p: usize,
    pub edges: Vec<Edge>,
}

impl TrueCig {
    pub fn new(p: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        TrueCig { p, edges }
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `i<TAB>j` per edge (0-based) under a header row.
    pub fn write_tsv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "i\tj")?;
        for e in &self.edges {
            writeln!(w, "{}\t{}", e.i(), e.j())?;
        }
        Ok(())
    }
}

/// Every model the simulator knows: the six DAG kinds plus `ising`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Dag(DagKind),
    Ising,
}

impl ModelKind {
    pub fn all() -> Vec<ModelKind> {
        let mut all: Vec<ModelKind> = DagKind::ALL.into_iter().map(ModelKind::Dag).collect();
        all.push(ModelKind::Ising);
        all
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Dag(k) => k.name(),
            ModelKind::Ising => "ising",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::all().into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<&str> = ModelKind::all().into_iter().map(ModelKind::name).collect();
            Error::Param(format!("unknown model {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

impl Serialize for ModelKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for ModelKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Model {
    Dag(DagModel),
    Ising(IsingModel),
}

impl Model {
    pub fn true_cig(&self) -> TrueCig {
        match self {
            Model::Dag(m) => m.moralize(),
            Model::Ising(m) => m.true_cig(),
        }
    }
}

/// A sampled model, its data, and its true graph.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub model: Model,
    pub data: MixedDataset,
    pub truth: TrueCig,
}

/// Samples a model of `kind` and `n` rows from it. Ising data uses the
/// default burn-in and thinning.
pub fn simulate(kind: ModelKind, p: usize, n: usize, seed: u64) -> Result<Simulation> {
    let (model, data) = match kind {
        ModelKind::Dag(k) => {
            let m = sample_dag_model(k, p, seed)?;
            let data = m.sample_data(n, seed)?;
            (Model::Dag(m), data)
        }
        ModelKind::Ising => {
            let m = sample_ising(p, seed)?;
            let data = gibbs_sample(&m, n, DEFAULT_BURN_IN, DEFAULT_THIN, seed)?;
            (Model::Ising(m), data)
        }
    };
    let truth = model.true_cig();
    Ok(Simulation { model, data, truth })
}
