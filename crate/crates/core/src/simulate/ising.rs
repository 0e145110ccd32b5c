//! Ising models and a systematic-scan Gibbs sampler.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{var_names, TrueCig};
use crate::dataset::{Column, MixedDataset};
use crate::error::{Error, Result};
use crate::ranking::Edge;
use crate::seed::{self, tag};

pub const DEFAULT_BURN_IN: usize = 1000;
pub const DEFAULT_THIN: usize = 100;

/// Expected neighbourhood size of a sampled model.
pub const MEAN_DEGREE: f64 = 4.0;

/// Symmetric interaction matrix with entries in {−1, 0, 1}; the diagonal
/// holds the node fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsingModel {
    pub theta: Vec<Vec<i8>>,
}

fn uniform_sign(rng: &mut seed::Rng) -> i8 {
    if rng.random_bool(0.5) {
        1
    } else {
        -1
    }
}

pub fn sample_ising(p: usize, seed: u64) -> Result<IsingModel> {
    if p < 2 {
        return Err(Error::Param(format!("p = {p}: need at least two variables")));
    }
    let mut rng = seed::stream(seed, tag::MODEL);
    let prob = (MEAN_DEGREE / (p - 1) as f64).min(1.0);
    let mut theta = vec![vec![0i8; p]; p];
    for i in 0..p {
        theta[i][i] = rng.random_range(-1..=1);
        for j in i + 1..p {
            if rng.random_bool(prob) {
                let s = uniform_sign(&mut rng);
                theta[i][j] = s;
                theta[j][i] = s;
            }
        }
    }
    Ok(IsingModel { theta })
}

impl IsingModel {
    pub fn p(&self) -> usize {
        self.theta.len()
    }

    /// Edges are the nonzero off-diagonal entries.
    pub fn true_cig(&self) -> TrueCig {
        let p = self.p();
        let edges = (0..p)
            .flat_map(|i| (i + 1..p).map(move |j| (i, j)))
            .filter(|&(i, j)| self.theta[i][j] != 0)
            .map(|(i, j)| Edge::new(i, j))
            .collect();
        TrueCig::new(p, edges)
    }

    /// Unnormalized log-probability of a ±1 state.
    pub fn energy(&self, x: &[f64]) -> f64 {
        let p = self.p();
        let mut e = 0.0;
        for i in 0..p {
            e += f64::from(self.theta[i][i]) * x[i];
            for j in i + 1..p {
                e += f64::from(self.theta[i][j]) * x[i] * x[j];
            }
        }
        e
    }

    /// Exact state distribution by enumeration. States are indexed by bit
    /// mask, bit i set meaning x_i = +1. Only sensible for small p.
    pub fn exact_distribution(&self) -> Vec<f64> {
        let p = self.p();
        assert!(p <= 20, "enumeration over 2^{p} states");
        let mut x = vec![0.0; p];
        let mut w: Vec<f64> = (0..1usize << p)
            .map(|mask| {
                for (i, xi) in x.iter_mut().enumerate() {
                    *xi = if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
                }
                self.energy(&x).exp()
            })
            .collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|v| *v /= total);
        w
    }
}

/// `n` draws taken every `thin` sweeps after `burn_in` sweeps.
pub fn gibbs_sample(model: &IsingModel, n: usize, burn_in: usize, thin: usize, seed: u64) -> Result<MixedDataset> {
    let p = model.p();
    if n == 0 || thin == 0 {
        return Err(Error::Param("n and thin must be positive".into()));
    }
    let mut rng = seed::stream(seed, tag::DATA);
    let theta: Vec<Vec<f64>> = model
        .theta
        .iter()
        .map(|row| row.iter().map(|&t| f64::from(t)).collect())
        .collect();
    let mut x: Vec<f64> = (0..p).map(|_| f64::from(uniform_sign(&mut rng))).collect();
    let mut sweep = |x: &mut Vec<f64>| {
        for i in 0..p {
            let field: f64 = theta[i][i]
                + (0..p)
                    .filter(|&j| j != i)
                    .map(|j| theta[i][j] * x[j])
                    .sum::<f64>();
            let prob = 1.0 / (1.0 + (-2.0 * field).exp());
            x[i] = if rng.random::<f64>() < prob { 1.0 } else { -1.0 };
        }
    };
    for _ in 0..burn_in {
        sweep(&mut x);
    }
    let mut cols = vec![Vec::with_capacity(n); p];
    for _ in 0..n {
        for _ in 0..thin {
            sweep(&mut x);
        }
        for (c, &v) in cols.iter_mut().zip(&x) {
            c.push(v);
        }
    }
    let columns = cols
        .iter()
        .zip(var_names(p))
        .map(|(values, name)| Column::signs(name, values))
        .collect();
    MixedDataset::from_columns(columns)
}
