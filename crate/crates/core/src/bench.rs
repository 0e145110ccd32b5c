//! Benchmark harness: simulated models, repeated estimation, and true/false
//! positive counts against the known graph.

use std::borrow::Cow;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{dichotomize, MixedDataset};
use crate::error::{Error, Result};
use crate::forest::ForestParams;
use crate::lasso::{lasso_design, LassoParams};
use crate::learner::{EdgeRanker, FixedRanker, ForestRanker, LassoRanker};
use crate::ranking::{n_pairs, select_top_q, Edge};
use crate::seed::{self, tag};
use crate::simulate::{simulate, DagKind, ModelKind, TrueCig};
use crate::stability::{check_pi_thr, compute_q, fp_bound, subsample_rankings};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LearnerKind {
    Grafo,
    Stablasso,
    /// Ranks exactly the true edges.
    Oracle,
    /// Ranks nothing.
    Empty,
}

impl LearnerKind {
    pub fn name(self) -> &'static str {
        match self {
            LearnerKind::Grafo => "grafo",
            LearnerKind::Stablasso => "stablasso",
            LearnerKind::Oracle => "oracle",
            LearnerKind::Empty => "empty",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    pub model: ModelKind,
    pub p: usize,
    pub n: usize,
    pub repetitions: usize,
    pub ev_values: Vec<f64>,
    pub learners: Vec<LearnerKind>,
    pub forest: ForestParams,
    pub lasso: LassoParams,
    pub pi_thr: f64,
    pub n_sub: usize,
    pub seed: u64,
    /// q values for the rate curves; `None` uses [`default_q_grid`].
    pub q_grid: Option<Vec<usize>>,
    /// Skip the rate curves entirely.
    pub curves: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            model: ModelKind::Dag(DagKind::Gaussian),
            p: 50,
            n: 100,
            repetitions: 50,
            ev_values: vec![1.0, 5.0, 10.0],
            learners: vec![LearnerKind::Grafo, LearnerKind::Stablasso],
            forest: ForestParams::default(),
            lasso: LassoParams::default(),
            pi_thr: 0.75,
            n_sub: 100,
            seed: 0,
            q_grid: None,
            curves: true,
        }
    }
}

impl BenchConfig {
    pub fn from_path(path: &Path) -> Result<BenchConfig> {
        crate::dataset::read_json(path)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 2 {
            return Err(Error::Param(format!("p = {}: need at least two variables", self.p)));
        }
        if self.n < 4 {
            return Err(Error::Param("n must be at least 4".into()));
        }
        if self.repetitions == 0 || self.n_sub == 0 {
            return Err(Error::Param("repetitions and n_sub must be positive".into()));
        }
        if self.learners.is_empty() {
            return Err(Error::Param("no learners configured".into()));
        }
        check_pi_thr(self.pi_thr)?;
        for &ev in &self.ev_values {
            compute_q(ev, self.pi_thr, self.p)?;
        }
        self.lasso.validate()?;
        Ok(())
    }

    fn grid(&self) -> Vec<usize> {
        self.q_grid.clone().unwrap_or_else(|| default_q_grid(self.p))
    }
}

/// 20 geometrically spaced cuts from 1 to p(p−1)/8, rounded and deduplicated.
pub fn default_q_grid(p: usize) -> Vec<usize> {
    let top = (n_pairs(p) / 4).max(1) as f64;
    let mut grid: Vec<usize> = (0..20)
        .map(|k| top.powf(k as f64 / 19.0).round() as usize)
        .collect();
    grid.dedup();
    grid
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub tp: usize,
    pub fp: usize,
    pub tpr: f64,
    pub fpr: f64,
}

pub fn evaluate(estimated: &[Edge], truth: &TrueCig) -> Evaluation {
    let tp = estimated.iter().filter(|&&e| truth.contains(e)).count();
    let fp = estimated.len() - tp;
    let negatives = n_pairs(truth.p) - truth.len();
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    Evaluation {
        tp,
        fp,
        tpr: ratio(tp, truth.len()),
        fpr: ratio(fp, negatives),
    }
}

/// Mean TP/FP for one learner at one E[V].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub learner: LearnerKind,
    pub ev: f64,
    pub q: usize,
    pub fp_bound: f64,
    pub mean_tp: f64,
    pub mean_fp: f64,
    pub mean_tpr: f64,
    pub mean_fpr: f64,
    pub repetitions: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Selector {
    Stable,
    Raw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub learner: LearnerKind,
    pub selector: Selector,
    pub q: usize,
    pub mean_tp: f64,
    pub mean_fp: f64,
    pub mean_tpr: f64,
    pub mean_fpr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub config: BenchConfig,
    /// True edge count per repetition; `None` where simulation failed.
    pub true_edges: Vec<Option<usize>>,
    pub failed_repetitions: usize,
    /// Repetitions excluded per learner, in `config.learners` order.
    pub failed_per_learner: Vec<usize>,
    pub cells: Vec<Cell>,
    pub curves: Vec<CurvePoint>,
}

/// Everything one learner produced in one repetition.
struct LearnerRun {
    /// One per E[V].
    stable: Vec<Evaluation>,
    /// One per grid q.
    stable_curve: Vec<Evaluation>,
    raw_curve: Vec<Evaluation>,
}

struct Repetition {
    true_edges: usize,
    runs: Vec<Option<LearnerRun>>,
}

/// Data as the learner needs it: StabLASSO gets the ±1 transform of
/// anything that is not already all-continuous or all-binary.
fn learner_input(kind: LearnerKind, data: &MixedDataset) -> Result<Cow<'_, MixedDataset>> {
    if kind == LearnerKind::Stablasso {
        if let Err(Error::NeedsDichotomization) = lasso_design(data) {
            return Ok(Cow::Owned(dichotomize(data)?.to_mixed()));
        }
    }
    Ok(Cow::Borrowed(data))
}

fn ranker(kind: LearnerKind, cfg: &BenchConfig, truth: &TrueCig) -> Box<dyn EdgeRanker> {
    match kind {
        LearnerKind::Grafo => Box::new(ForestRanker {
            params: cfg.forest.clone(),
        }),
        LearnerKind::Stablasso => Box::new(LassoRanker {
            params: cfg.lasso.clone(),
        }),
        LearnerKind::Oracle => Box::new(FixedRanker {
            edges: truth.edges.clone(),
        }),
        LearnerKind::Empty => Box::new(FixedRanker { edges: Vec::new() }),
    }
}

fn run_learner(kind: LearnerKind, cfg: &BenchConfig, data: &MixedDataset, truth: &TrueCig, seed: u64) -> Result<LearnerRun> {
    let data = learner_input(kind, data)?;
    let learner = ranker(kind, cfg, truth);
    let mut subs = subsample_rankings(&data, learner.as_ref(), cfg.n_sub, seed::child(seed, tag::LEARNER));
    if subs.failed() == subs.n_sub() {
        if let Some(e) = subs.first_error.take() {
            return Err(e);
        }
    }
    let stable = cfg
        .ev_values
        .iter()
        .map(|&ev| {
            let q = compute_q(ev, cfg.pi_thr, cfg.p)?;
            Ok(evaluate(&subs.stable_set(q, cfg.pi_thr), truth))
        })
        .collect::<Result<Vec<_>>>()?;
    let (stable_curve, raw_curve) = if cfg.curves {
        let grid = cfg.grid();
        let full = learner.rank(&data, seed::child(seed, tag::RAW))?;
        (
            grid.iter()
                .map(|&q| evaluate(&subs.stable_set(q, cfg.pi_thr), truth))
                .collect(),
            grid.iter().map(|&q| evaluate(&select_top_q(&full, q), truth)).collect(),
        )
    } else {
        (Vec::new(), Vec::new())
    };
    Ok(LearnerRun {
        stable,
        stable_curve,
        raw_curve,
    })
}

fn run_repetition(cfg: &BenchConfig, r: usize) -> Result<Repetition> {
    let rep_seed = seed::child(cfg.seed, r as u64);
    let sim = simulate(cfg.model, cfg.p, cfg.n, rep_seed)?;
    let runs = cfg
        .learners
        .iter()
        .map(|&kind| match run_learner(kind, cfg, &sim.data, &sim.truth, rep_seed) {
            Ok(run) => Some(run),
            Err(e) => {
                log::warn!("repetition {r}: {} excluded: {e}", kind.name());
                None
            }
        })
        .collect();
    Ok(Repetition {
        true_edges: sim.truth.len(),
        runs,
    })
}

#[derive(Default)]
struct Mean {
    tp: f64,
    fp: f64,
    tpr: f64,
    fpr: f64,
    count: usize,
}

impl Mean {
    fn add(&mut self, e: &Evaluation) {
        self.tp += e.tp as f64;
        self.fp += e.fp as f64;
        self.tpr += e.tpr;
        self.fpr += e.fpr;
        self.count += 1;
    }

    fn finish(&self) -> (f64, f64, f64, f64) {
        let c = self.count.max(1) as f64;
        (self.tp / c, self.fp / c, self.tpr / c, self.fpr / c)
    }
}

/// Runs every repetition (in parallel) and averages in repetition order.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchResult> {
    cfg.validate()?;
    let reps: Vec<Result<Repetition>> = (0..cfg.repetitions)
        .into_par_iter()
        .map(|r| run_repetition(cfg, r))
        .collect();

    let mut failed_repetitions = 0;
    let mut true_edges = Vec::with_capacity(reps.len());
    for (r, rep) in reps.iter().enumerate() {
        match rep {
            Ok(rep) => true_edges.push(Some(rep.true_edges)),
            Err(e) => {
                log::warn!("repetition {r} failed: {e}");
                failed_repetitions += 1;
                true_edges.push(None);
            }
        }
    }
    let ok: Vec<&Repetition> = reps.iter().filter_map(|r| r.as_ref().ok()).collect();
    let grid = if cfg.curves { cfg.grid() } else { Vec::new() };

    let mut cells = Vec::new();
    let mut curves = Vec::new();
    let mut failed_per_learner = Vec::new();
    for (l, &kind) in cfg.learners.iter().enumerate() {
        let runs: Vec<&LearnerRun> = ok.iter().filter_map(|rep| rep.runs[l].as_ref()).collect();
        failed_per_learner.push(ok.len() - runs.len());
        for (e, &ev) in cfg.ev_values.iter().enumerate() {
            let mut m = Mean::default();
            runs.iter().for_each(|run| m.add(&run.stable[e]));
            let (mean_tp, mean_fp, mean_tpr, mean_fpr) = m.finish();
            let q = compute_q(ev, cfg.pi_thr, cfg.p)?;
            cells.push(Cell {
                learner: kind,
                ev,
                q,
                fp_bound: fp_bound(q, cfg.pi_thr, cfg.p),
                mean_tp,
                mean_fp,
                mean_tpr,
                mean_fpr,
                repetitions: m.count,
            });
        }
        for selector in [Selector::Stable, Selector::Raw] {
            for (g, &q) in grid.iter().enumerate() {
                let mut m = Mean::default();
                for run in &runs {
                    let curve = match selector {
                        Selector::Stable => &run.stable_curve,
                        Selector::Raw => &run.raw_curve,
                    };
                    m.add(&curve[g]);
                }
                let (mean_tp, mean_fp, mean_tpr, mean_fpr) = m.finish();
                curves.push(CurvePoint {
                    learner: kind,
                    selector,
                    q,
                    mean_tp,
                    mean_fp,
                    mean_tpr,
                    mean_fpr,
                });
            }
        }
    }

    Ok(BenchResult {
        config: cfg.clone(),
        true_edges,
        failed_repetitions,
        failed_per_learner,
        cells,
        curves,
    })
}

impl BenchResult {
    pub fn cell(&self, learner: LearnerKind, ev: f64) -> Option<&Cell> {
        self.cells.iter().find(|c| c.learner == learner && c.ev == ev)
    }

    pub fn write_cells_tsv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "learner\tev\tq\tfp_bound\tmean_tp\tmean_fp\tmean_tpr\tmean_fpr\trepetitions")?;
        for c in &self.cells {
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                c.learner.name(),
                c.ev,
                c.q,
                c.fp_bound,
                c.mean_tp,
                c.mean_fp,
                c.mean_tpr,
                c.mean_fpr,
                c.repetitions
            )?;
        }
        Ok(())
    }

    pub fn write_curves_tsv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "learner\tselector\tq\tmean_tp\tmean_fp\tmean_tpr\tmean_fpr")?;
        for c in &self.curves {
            let selector = match c.selector {
                Selector::Stable => "stable",
                Selector::Raw => "raw",
            };
            writeln!(
                w,
                "{}\t{selector}\t{}\t{}\t{}\t{}\t{}",
                c.learner.name(),
                c.q,
                c.mean_tp,
                c.mean_fp,
                c.mean_tpr,
                c.mean_fpr
            )?;
        }
        Ok(())
    }

    /// Writes `cells.tsv`, `curves.tsv`, `summary.json` and gnuplot data
    /// files (`bound_<learner>.dat`, `curve_<learner>_<selector>.dat`) into
    /// `dir`, creating it if needed.
    pub fn write_all(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let create = |name: &str| -> Result<BufWriter<File>> { Ok(BufWriter::new(File::create(dir.join(name))?)) };
        self.write_cells_tsv(create("cells.tsv")?)?;
        self.write_curves_tsv(create("curves.tsv")?)?;
        let mut summary = create("summary.json")?;
        serde_json::to_writer_pretty(&mut summary, self)?;
        writeln!(summary)?;

        for &learner in &self.config.learners {
            let mut w = create(&format!("bound_{}.dat", learner.name()))?;
            writeln!(w, "# ev fp_bound mean_fp mean_tp")?;
            for c in self.cells.iter().filter(|c| c.learner == learner) {
                writeln!(w, "{} {} {} {}", c.ev, c.fp_bound, c.mean_fp, c.mean_tp)?;
            }
            if !self.config.curves {
                continue;
            }
            for (selector, tag) in [(Selector::Stable, "stable"), (Selector::Raw, "raw")] {
                let mut w = create(&format!("curve_{}_{tag}.dat", learner.name()))?;
                writeln!(w, "# q mean_fpr mean_tpr mean_fp mean_tp")?;
                for c in self.curves.iter().filter(|c| c.learner == learner && c.selector == selector) {
                    writeln!(w, "{} {} {} {} {}", c.q, c.mean_fpr, c.mean_tpr, c.mean_fp, c.mean_tp)?;
                }
            }
        }
        Ok(())
    }
}
