//! Coordinate-descent LASSO paths for linear and logistic regression, and
//! the entry-penalty edge ranking built on them.
//!
//! Predictors are standardized internally (mean 0, variance 1 with the 1/n
//! convention); coefficients are reported on the original scale. The
//! objectives are
//!
//! ```text
//! linear:   (1/2n) Σ (y_i − β₀ − x_iᵀβ)²           + λ‖β‖₁
//! logistic: −(1/n) Σ log P(y_i | β₀ + x_iᵀβ)        + λ‖β‖₁   (y ∈ {−1, +1})
//! ```
//!
//! with an unpenalized intercept.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::MixedDataset;
use crate::error::{Error, Result};
use crate::ranking::{all_edges, average_ranks, Edge, RankedEdge, RankedEdges};

/// Fraction of deviance explained at which a path stops early.
pub const SATURATION_DEV_RATIO: f64 = 0.999;

const MIN_WEIGHT: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Linear,
    Logistic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LassoParams {
    pub n_lambda: usize,
    pub lambda_min_ratio: f64,
    pub tolerance: f64,
    /// Cap on coordinate-descent sweeps per penalty value.
    pub max_iter: usize,
}

impl Default for LassoParams {
    fn default() -> Self {
        LassoParams {
            n_lambda: 100,
            lambda_min_ratio: 0.01,
            tolerance: 1e-7,
            max_iter: 100_000,
        }
    }
}

impl LassoParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_lambda == 0 || self.max_iter == 0 {
            return Err(Error::Param("n_lambda and max_iter must be positive".into()));
        }
        if !(self.lambda_min_ratio > 0.0 && self.lambda_min_ratio < 1.0) {
            return Err(Error::Param("lambda_min_ratio must lie in (0, 1)".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Param("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LassoPath {
    pub family: Family,
    /// Strictly decreasing penalties. Shorter than `n_lambda` when the fit
    /// saturated before the end of the grid.
    pub lambdas: Vec<f64>,
    /// Coefficients on the original predictor scale, one vector per penalty.
    pub coefs: Vec<Vec<f64>>,
    pub intercepts: Vec<f64>,
    /// Largest penalty with a non-zero coefficient, 0 if never active.
    pub entry_lambda: Vec<f64>,
    /// Predictor standard deviations used for standardization.
    pub scale: Vec<f64>,
    pub center: Vec<f64>,
}

impl LassoPath {
    /// Coefficient of predictor `j` at grid point `k` on the standardized scale.
    pub fn standardized_coef(&self, k: usize, j: usize) -> f64 {
        self.coefs[k][j] * self.scale[j]
    }

    /// Grid index of `entry_lambda[j]`, if the predictor ever enters.
    pub fn entry_index(&self, j: usize) -> Option<usize> {
        self.coefs.iter().position(|c| c[j] != 0.0)
    }
}

fn soft_threshold(z: f64, gamma: f64) -> f64 {
    if z > gamma {
        z - gamma
    } else if z < -gamma {
        z + gamma
    } else {
        0.0
    }
}

fn sigmoid(eta: f64) -> f64 {
    1.0 / (1.0 + (-eta).exp())
}

/// Standardized design plus response, ready for coordinate descent.
pub(crate) struct Solver {
    z: Vec<Vec<f64>>,
    center: Vec<f64>,
    scale: Vec<f64>,
    /// Linear: centered y. Logistic: y recoded to {0, 1}.
    target: Vec<f64>,
    y_mean: f64,
    family: Family,
    tol: f64,
    max_iter: usize,
    // state
    beta: Vec<f64>,
    intercept: f64,
}

impl Solver {
    pub(crate) fn new(x: &[Vec<f64>], y: &[f64], family: Family, params: &LassoParams) -> Result<Solver> {
        params.validate()?;
        let n = y.len();
        if n < 2 {
            return Err(Error::Param("lasso needs at least two observations".into()));
        }
        let mut z = Vec::with_capacity(x.len());
        let mut center = Vec::with_capacity(x.len());
        let mut scale = Vec::with_capacity(x.len());
        for (j, col) in x.iter().enumerate() {
            if col.len() != n {
                return Err(Error::Param(format!("predictor {j} has {} rows, expected {n}", col.len())));
            }
            let mean = col.iter().sum::<f64>() / n as f64;
            let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
            let sd = var.sqrt();
            if !(sd > 1e-12 * mean.abs().max(1.0)) {
                return Err(Error::ZeroVariance { index: j });
            }
            z.push(col.iter().map(|v| (v - mean) / sd).collect());
            center.push(mean);
            scale.push(sd);
        }
        let (target, y_mean) = match family {
            Family::Linear => {
                let m = y.iter().sum::<f64>() / n as f64;
                (y.iter().map(|v| v - m).collect(), m)
            }
            Family::Logistic => {
                if y.iter().any(|&v| v != 1.0 && v != -1.0) {
                    return Err(Error::Param("logistic response must be coded -1/+1".into()));
                }
                let t: Vec<f64> = y.iter().map(|&v| (v + 1.0) / 2.0).collect();
                let m = t.iter().sum::<f64>() / n as f64;
                if m == 0.0 || m == 1.0 {
                    return Err(Error::SingleClass);
                }
                (t, m)
            }
        };
        let p = z.len();
        let intercept = match family {
            Family::Linear => 0.0,
            Family::Logistic => (y_mean / (1.0 - y_mean)).ln(),
        };
        Ok(Solver {
            z,
            center,
            scale,
            target,
            y_mean,
            family,
            tol: params.tolerance,
            max_iter: params.max_iter,
            beta: vec![0.0; p],
            intercept,
        })
    }

    fn n(&self) -> f64 {
        self.target.len() as f64
    }

    /// Smallest penalty at which every coefficient is zero.
    pub(crate) fn lambda_max(&self) -> f64 {
        let n = self.n();
        let resid: Vec<f64> = match self.family {
            Family::Linear => self.target.clone(),
            Family::Logistic => self.target.iter().map(|t| t - self.y_mean).collect(),
        };
        self.z
            .iter()
            .map(|zj| (dot(zj, &resid) / n).abs())
            .fold(0.0, f64::max)
    }

    fn linear_predictor(&self) -> Vec<f64> {
        let mut eta = vec![self.intercept; self.target.len()];
        for (zj, &b) in self.z.iter().zip(&self.beta) {
            if b != 0.0 {
                for (e, v) in eta.iter_mut().zip(zj) {
                    *e += b * v;
                }
            }
        }
        eta
    }

    /// Deviance of the current fit (up to a constant for the linear family).
    fn deviance(&self) -> f64 {
        let eta = self.linear_predictor();
        match self.family {
            Family::Linear => self.target.iter().zip(&eta).map(|(t, e)| (t - e) * (t - e)).sum(),
            Family::Logistic => {
                -2.0 * self
                    .target
                    .iter()
                    .zip(&eta)
                    .map(|(&t, &e)| {
                        // log-likelihood t·η − log(1 + e^η), evaluated stably
                        t * e - (e.max(0.0) + (-e.abs()).exp().ln_1p())
                    })
                    .sum::<f64>()
            }
        }
    }

    fn null_deviance(&self) -> f64 {
        let n = self.n();
        match self.family {
            Family::Linear => self.target.iter().map(|t| t * t).sum(),
            Family::Logistic => {
                let m = self.y_mean;
                -2.0 * n * (m * m.ln() + (1.0 - m) * (1.0 - m).ln())
            }
        }
    }

    /// Penalized objective at the current state.
    pub(crate) fn objective(&self, lambda: f64) -> f64 {
        let l1: f64 = self.beta.iter().map(|b| b.abs()).sum();
        self.deviance() / (2.0 * self.n()) + lambda * l1
    }

    /// Solves at `lambda` starting from the current state. `on_sweep` sees
    /// the objective after every coordinate sweep (linear family).
    pub(crate) fn solve(&mut self, lambda: f64, on_sweep: &mut dyn FnMut(f64)) -> bool {
        match self.family {
            Family::Linear => self.solve_linear(lambda, on_sweep),
            Family::Logistic => self.solve_logistic(lambda),
        }
    }

    fn solve_linear(&mut self, lambda: f64, on_sweep: &mut dyn FnMut(f64)) -> bool {
        let n = self.n();
        let eta = self.linear_predictor();
        let mut r: Vec<f64> = self.target.iter().zip(&eta).map(|(t, e)| t - e).collect();
        let p = self.beta.len();
        let mut sweeps = 0;
        loop {
            // full sweep, then iterate on the active set until it settles
            let (change, active) = self.linear_sweep(&mut r, lambda, n, 0..p);
            sweeps += 1;
            on_sweep(self.objective(lambda));
            if change < self.tol {
                return true;
            }
            loop {
                let (change, _) = self.linear_sweep(&mut r, lambda, n, active.iter().copied());
                sweeps += 1;
                on_sweep(self.objective(lambda));
                if change < self.tol || sweeps >= self.max_iter {
                    break;
                }
            }
            if sweeps >= self.max_iter {
                log::warn!("lasso did not converge at lambda = {lambda}");
                return false;
            }
        }
    }

    fn linear_sweep(
        &mut self,
        r: &mut [f64],
        lambda: f64,
        n: f64,
        coords: impl Iterator<Item = usize>,
    ) -> (f64, Vec<usize>) {
        let mut max_change: f64 = 0.0;
        let mut active = Vec::new();
        for j in coords {
            let zj = &self.z[j];
            let old = self.beta[j];
            let g = dot(zj, r) / n + old;
            let new = soft_threshold(g, lambda);
            if new != old {
                let d = new - old;
                for (ri, v) in r.iter_mut().zip(zj) {
                    *ri -= d * v;
                }
                self.beta[j] = new;
                max_change = max_change.max(d.abs());
            }
            if new != 0.0 {
                active.push(j);
            }
        }
        (max_change, active)
    }

    fn solve_logistic(&mut self, lambda: f64) -> bool {
        let n = self.n();
        let p = self.beta.len();
        let mut total_sweeps = 0;
        loop {
            let eta = self.linear_predictor();
            let mut w = Vec::with_capacity(eta.len());
            let mut r = Vec::with_capacity(eta.len());
            for (&e, &t) in eta.iter().zip(&self.target) {
                let mu = sigmoid(e);
                let wi = (mu * (1.0 - mu)).max(MIN_WEIGHT);
                w.push(wi);
                r.push((t - mu) / wi);
            }
            let xv: Vec<f64> = self
                .z
                .iter()
                .map(|zj| zj.iter().zip(&w).map(|(v, wi)| wi * v * v).sum::<f64>() / n)
                .collect();
            let w_sum: f64 = w.iter().sum();
            let start_beta = self.beta.clone();
            let start_intercept = self.intercept;

            // inner coordinate descent on the weighted least-squares problem
            let mut full = true;
            let mut active: Vec<usize> = Vec::new();
            loop {
                let mut max_change: f64 = 0.0;
                let coords: Vec<usize> = if full { (0..p).collect() } else { active.clone() };
                let mut now_active = Vec::new();
                for j in coords {
                    let zj = &self.z[j];
                    let old = self.beta[j];
                    let g = zj.iter().zip(&w).zip(&r).map(|((v, wi), ri)| wi * v * ri).sum::<f64>() / n
                        + xv[j] * old;
                    let new = soft_threshold(g, lambda) / xv[j];
                    if new != old {
                        let d = new - old;
                        for (ri, v) in r.iter_mut().zip(zj) {
                            *ri -= d * v;
                        }
                        self.beta[j] = new;
                        max_change = max_change.max(d.abs() * xv[j].sqrt());
                    }
                    if new != 0.0 {
                        now_active.push(j);
                    }
                }
                let d0 = w.iter().zip(&r).map(|(wi, ri)| wi * ri).sum::<f64>() / w_sum;
                if d0 != 0.0 {
                    self.intercept += d0;
                    for ri in r.iter_mut() {
                        *ri -= d0;
                    }
                    max_change = max_change.max(d0.abs() * (w_sum / n).sqrt());
                }
                total_sweeps += 1;
                if full {
                    active = now_active;
                }
                if max_change < self.tol {
                    if full {
                        break;
                    }
                    full = true;
                } else {
                    full = false;
                }
                if total_sweeps >= self.max_iter {
                    break;
                }
            }

            let outer_change = self
                .beta
                .iter()
                .zip(&start_beta)
                .map(|(a, b)| (a - b).abs())
                .fold((self.intercept - start_intercept).abs(), f64::max);
            if outer_change < self.tol {
                return true;
            }
            if total_sweeps >= self.max_iter {
                log::warn!("logistic lasso did not converge at lambda = {lambda}");
                return false;
            }
        }
    }

    fn original_scale(&self) -> (f64, Vec<f64>) {
        let coefs: Vec<f64> = self.beta.iter().zip(&self.scale).map(|(b, s)| b / s).collect();
        let shift: f64 = coefs.iter().zip(&self.center).map(|(c, m)| c * m).sum();
        let base = match self.family {
            Family::Linear => self.y_mean + self.intercept,
            Family::Logistic => self.intercept,
        };
        (base - shift, coefs)
    }

    fn reset_to_null(&mut self) {
        self.beta.fill(0.0);
        self.intercept = match self.family {
            Family::Linear => 0.0,
            Family::Logistic => (self.y_mean / (1.0 - self.y_mean)).ln(),
        };
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Computes the LASSO path of `y` on the predictor columns `x` over a
/// geometric grid from λ_max down to λ_max·`lambda_min_ratio`, with warm
/// starts. The path stops early once the fit explains
/// [`SATURATION_DEV_RATIO`] of the null deviance.
pub fn lasso_path(x: &[Vec<f64>], y: &[f64], family: Family, params: &LassoParams) -> Result<LassoPath> {
    let mut solver = Solver::new(x, y, family, params)?;
    let p = x.len();
    let lambda_max = solver.lambda_max();
    let mut path = LassoPath {
        family,
        lambdas: Vec::new(),
        coefs: Vec::new(),
        intercepts: Vec::new(),
        entry_lambda: vec![0.0; p],
        scale: solver.scale.clone(),
        center: solver.center.clone(),
    };
    if !(lambda_max > 0.0) {
        // nothing correlates with the response; no penalty activates anything
        return Ok(path);
    }
    let null_dev = solver.null_deviance();
    let steps = params.n_lambda.saturating_sub(1).max(1) as f64;
    for k in 0..params.n_lambda {
        let lambda = lambda_max * params.lambda_min_ratio.powf(k as f64 / steps);
        if k == 0 {
            solver.reset_to_null();
        } else {
            solver.solve(lambda, &mut |_| {});
        }
        let (b0, coefs) = solver.original_scale();
        for (j, &c) in coefs.iter().enumerate() {
            if c != 0.0 && path.entry_lambda[j] == 0.0 {
                path.entry_lambda[j] = lambda;
            }
        }
        path.lambdas.push(lambda);
        path.coefs.push(coefs);
        path.intercepts.push(b0);
        if null_dev > 0.0 && 1.0 - solver.deviance() / null_dev >= SATURATION_DEV_RATIO {
            break;
        }
    }
    Ok(path)
}

/// Cold-start fit at a single penalty: returns (intercept, coefficients) on
/// the original scale.
pub fn lasso_fit(
    x: &[Vec<f64>],
    y: &[f64],
    family: Family,
    lambda: f64,
    params: &LassoParams,
) -> Result<(f64, Vec<f64>)> {
    let mut solver = Solver::new(x, y, family, params)?;
    solver.solve(lambda, &mut |_| {});
    Ok(solver.original_scale())
}

/// Per-edge scores behind the LASSO ranking.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LassoEdgeScore {
    pub edge: Edge,
    /// min(λ_ij, λ_ji); 0 means the edge never entered in some direction.
    pub lambda: f64,
    /// |standardized coefficient| one grid step below `lambda` (tie-break).
    pub coef_below: f64,
    /// |standardized coefficient| at `lambda` itself.
    pub coef_at_entry: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Entry {
    lambda: f64,
    at: f64,
    below: f64,
}

/// Which family and ±1/continuous columns a dataset maps to.
pub fn lasso_design(data: &MixedDataset) -> Result<(Family, Vec<Vec<f64>>)> {
    if data.all_continuous() {
        return Ok((
            Family::Linear,
            data.columns().iter().map(|c| c.values().to_vec()).collect(),
        ));
    }
    let signs: Option<Vec<Vec<f64>>> = data.columns().iter().map(|c| c.as_signs()).collect();
    match signs {
        Some(cols) if data.columns().iter().all(|c| c.is_categorical()) => Ok((Family::Logistic, cols)),
        _ => Err(Error::NeedsDichotomization),
    }
}

/// The direction with the smaller entry penalty; on equal penalties the
/// smaller coefficients.
fn more_conservative(a: Entry, b: Entry) -> Entry {
    if a.lambda < b.lambda {
        a
    } else if b.lambda < a.lambda {
        b
    } else {
        Entry {
            lambda: a.lambda,
            at: a.at.min(b.at),
            below: a.below.min(b.below),
        }
    }
}

/// Entry-penalty scores for every edge of an all-continuous or all-±1 dataset.
pub fn stablasso_scores(data: &MixedDataset, params: &LassoParams) -> Result<Vec<LassoEdgeScore>> {
    let (family, cols) = lasso_design(data)?;
    let p = cols.len();
    if p < 2 {
        return Err(Error::Param("need at least two variables".into()));
    }
    let degenerate: Vec<bool> = data.columns().iter().map(|c| c.is_degenerate()).collect();

    let entries: Vec<Option<Vec<Entry>>> = (0..p)
        .into_par_iter()
        .map(|j| -> Result<Option<Vec<Entry>>> {
            if degenerate[j] {
                log::warn!("response {j} is degenerate; its edges are unrankable");
                return Ok(None);
            }
            let preds: Vec<usize> = (0..p).filter(|&i| i != j && !degenerate[i]).collect();
            let x: Vec<Vec<f64>> = preds.iter().map(|&i| cols[i].clone()).collect();
            let mut out = vec![Entry::default(); p];
            if x.is_empty() {
                return Ok(Some(out));
            }
            let path = lasso_path(&x, &cols[j], family, params)?;
            for (k, &i) in preds.iter().enumerate() {
                if let Some(at) = path.entry_index(k) {
                    let below = (at + 1).min(path.lambdas.len() - 1);
                    out[i] = Entry {
                        lambda: path.entry_lambda[k],
                        at: path.standardized_coef(at, k).abs(),
                        below: path.standardized_coef(below, k).abs(),
                    };
                }
            }
            Ok(Some(out))
        })
        .collect::<Result<_>>()?;

    Ok(all_edges(p)
        .map(|edge| {
            let (i, j) = (edge.i(), edge.j());
            match (&entries[j], &entries[i]) {
                (Some(ej), Some(ei)) => {
                    // i in the path of j, and j in the path of i
                    let pick = more_conservative(ej[i], ei[j]);
                    LassoEdgeScore {
                        edge,
                        lambda: pick.lambda,
                        coef_below: pick.below,
                        coef_at_entry: pick.at,
                    }
                }
                _ => LassoEdgeScore {
                    edge,
                    lambda: 0.0,
                    coef_below: 0.0,
                    coef_at_entry: 0.0,
                },
            }
        })
        .collect())
}

/// Global ranking by decreasing entry penalty (ties broken by the
/// coefficient just below it). Edges with zero penalty are unrankable.
pub fn rank_by_entry_lambda(p: usize, scores: &[LassoEdgeScore]) -> RankedEdges {
    let rankable: Vec<&LassoEdgeScore> = scores.iter().filter(|s| s.lambda > 0.0).collect();
    let ranks = average_ranks(&rankable, |a, b| {
        b.lambda.total_cmp(&a.lambda).then(b.coef_below.total_cmp(&a.coef_below))
    });
    let mut by_edge: Vec<RankedEdge> = scores
        .iter()
        .map(|s| RankedEdge {
            edge: s.edge,
            rank: f64::INFINITY,
            selectable: false,
        })
        .collect();
    let mut k = 0;
    for (slot, s) in by_edge.iter_mut().zip(scores) {
        if s.lambda > 0.0 {
            slot.rank = ranks[k];
            slot.selectable = true;
            k += 1;
        }
    }
    RankedEdges::new(p, by_edge)
}

/// LASSO neighbourhood ranking: every variable is regressed on all others
/// and edge `i-j` is scored by the smaller of its two entry penalties.
pub fn stablasso_rank(data: &MixedDataset, params: &LassoParams) -> Result<RankedEdges> {
    let scores = stablasso_scores(data, params)?;
    if log::log_enabled!(log::Level::Debug) {
        let by_coef = average_ranks(&scores, |a, b| b.coef_at_entry.total_cmp(&a.coef_at_entry));
        for (s, r) in scores.iter().zip(by_coef) {
            log::debug!(
                "edge {} lambda={} coef_below={} coef_at_entry={} coef_rank={r}",
                s.edge,
                s.lambda,
                s.coef_below,
                s.coef_at_entry
            );
        }
    }
    Ok(rank_by_entry_lambda(data.n_cols(), &scores))
}
