//! Command-line front end: `simulate`, `estimate` and `bench`.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bench::{run_bench, BenchConfig};
use crate::dataset::{dichotomize, ingest_csv, read_json, MixedDataset, Schema};
use crate::error::{Error, Result};
use crate::forest::ForestParams;
use crate::lasso::{lasso_design, LassoParams};
use crate::learner::{EdgeRanker, ForestRanker, LassoRanker};
use crate::ranking::select_top_q;
use crate::simulate::{simulate, ModelKind};
use crate::stability::{check_pi_thr, stability_select, write_dot, GraphMetadata, StabilityParams};

#[derive(Debug, Parser)]
#[command(name = "grafo", version, about = "Conditional independence graphs via random forests and Stability Selection")]
pub struct Cli {
    /// Worker threads for parallel jobs; results do not depend on it.
    #[arg(long, global = true, env = "GRAFO_WORKERS", value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a model and data from it; writes data.csv, schema.json,
    /// truth.tsv and model.json.
    Simulate(SimulateArgs),
    /// Estimate a graph from a CSV file.
    Estimate(EstimateArgs),
    /// Run a benchmark described by a JSON config.
    Bench(BenchArgs),
}

fn parse_model(s: &str) -> std::result::Result<ModelKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_pi_thr(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    check_pi_thr(v).map_err(|e| e.to_string())?;
    Ok(v)
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_parser = parse_model)]
    pub model: ModelKind,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub p: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LearnerName {
    Grafo,
    Stablasso,
}

/// Estimation settings as read from `--config`; flags override fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimateConfig {
    pub learner: LearnerName,
    pub ev: f64,
    pub pi_thr: f64,
    pub n_sub: usize,
    pub seed: u64,
    /// Single run on all rows cut at this q instead of Stability Selection.
    pub raw_q: Option<usize>,
    pub dichotomize: bool,
    pub forest: ForestParams,
    pub lasso: LassoParams,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        let s = StabilityParams::default();
        EstimateConfig {
            learner: LearnerName::Grafo,
            ev: s.expected_fp_bound,
            pi_thr: s.pi_thr,
            n_sub: s.n_sub,
            seed: s.seed,
            raw_q: None,
            dichotomize: false,
            forest: ForestParams::default(),
            lasso: LassoParams::default(),
        }
    }
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub schema: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// JSON file with defaults for every option below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub learner: Option<LearnerName>,
    /// Bound on the expected number of false edges.
    #[arg(long)]
    pub ev: Option<f64>,
    #[arg(long, value_parser = parse_pi_thr)]
    pub pi_thr: Option<f64>,
    #[arg(long)]
    pub n_sub: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Skip Stability Selection and keep the top q edges of one full run.
    #[arg(long)]
    pub raw_q: Option<usize>,
    /// Recode every column to ±1 before running the LASSO learner.
    #[arg(long)]
    pub dichotomize: bool,
    #[arg(long)]
    pub n_trees: Option<usize>,
    #[arg(long)]
    pub mtry: Option<usize>,
    #[arg(long)]
    pub min_node_size: Option<usize>,
    #[arg(long)]
    pub n_lambda: Option<usize>,
    #[arg(long)]
    pub lambda_min_ratio: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Overrides the master seed in the config.
    #[arg(long)]
    pub seed: Option<u64>,
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut w = create(dir, name)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let sim = simulate(args.model, args.p as usize, args.n as usize, args.seed)?;
    fs::create_dir_all(&args.out_dir)?;
    let dir = args.out_dir.as_path();
    let mut w = create(dir, "data.csv")?;
    sim.data.write_csv(&mut w)?;
    w.flush()?;
    write_json(dir, "schema.json", &sim.data.schema())?;
    let mut w = create(dir, "truth.tsv")?;
    sim.truth.write_tsv(&mut w)?;
    w.flush()?;
    write_json(dir, "model.json", &sim.model)?;
    log::info!("{} rows, {} true edges", sim.data.n_rows(), sim.truth.len());
    Ok(())
}

impl EstimateArgs {
    /// Config file values with flags applied on top.
    pub fn resolve(&self) -> Result<EstimateConfig> {
        let mut cfg: EstimateConfig = match &self.config {
            Some(path) => read_json(path)?,
            None => EstimateConfig::default(),
        };
        macro_rules! set {
            ($flag:expr => $field:expr) => {
                if let Some(v) = $flag {
                    $field = v;
                }
            };
        }
        set!(self.learner => cfg.learner);
        set!(self.ev => cfg.ev);
        set!(self.pi_thr => cfg.pi_thr);
        set!(self.n_sub => cfg.n_sub);
        set!(self.seed => cfg.seed);
        set!(self.n_trees => cfg.forest.n_trees);
        set!(self.n_lambda => cfg.lasso.n_lambda);
        set!(self.lambda_min_ratio => cfg.lasso.lambda_min_ratio);
        if self.raw_q.is_some() {
            cfg.raw_q = self.raw_q;
        }
        if self.mtry.is_some() {
            cfg.forest.mtry = self.mtry;
        }
        if self.min_node_size.is_some() {
            cfg.forest.min_node_size = self.min_node_size;
        }
        cfg.dichotomize |= self.dichotomize;
        Ok(cfg)
    }
}

/// Input prepared for the chosen learner.
fn learner_data(cfg: &EstimateConfig, data: MixedDataset) -> Result<MixedDataset> {
    if cfg.learner != LearnerName::Stablasso {
        if cfg.dichotomize {
            log::warn!("--dichotomize only applies to the stablasso learner; ignored");
        }
        return Ok(data);
    }
    match lasso_design(&data) {
        Ok(_) => Ok(data),
        Err(Error::NeedsDichotomization) if cfg.dichotomize => {
            let binary = dichotomize(&data)?;
            for (name, rule) in binary.names().iter().zip(binary.mapping()) {
                log::info!("{name}: {rule:?}");
            }
            Ok(binary.to_mixed())
        }
        Err(e) => Err(e),
    }
}

pub fn cmd_estimate(args: &EstimateArgs) -> Result<()> {
    let cfg = args.resolve()?;
    check_pi_thr(cfg.pi_thr)?;
    let schema = Schema::from_path(&args.schema)?;
    let ingested = ingest_csv(&args.data, &schema)?;
    if ingested.rows_dropped > 0 {
        log::warn!("{} rows with missing values dropped", ingested.rows_dropped);
    }
    let data = learner_data(&cfg, ingested.data)?;
    let learner: Box<dyn EdgeRanker> = match cfg.learner {
        LearnerName::Grafo => Box::new(ForestRanker {
            params: cfg.forest.clone(),
        }),
        LearnerName::Stablasso => Box::new(LassoRanker {
            params: cfg.lasso.clone(),
        }),
    };
    let names = data.names();
    fs::create_dir_all(&args.out_dir)?;
    let dir = args.out_dir.as_path();

    match cfg.raw_q {
        Some(q) => {
            let ranked = learner.rank(&data, cfg.seed)?;
            let selected = select_top_q(&ranked, q);
            let mut w = create(dir, "edges.tsv")?;
            writeln!(w, "i\tj\trank")?;
            let mut labelled = Vec::with_capacity(selected.len());
            for &e in &selected {
                let rank = ranked.rank_of(e).map_or(f64::NAN, |r| r.rank);
                writeln!(w, "{}\t{}\t{rank}", e.i(), e.j())?;
                labelled.push((e, rank));
            }
            w.flush()?;
            let mut w = create(dir, "graph.dot")?;
            write_dot(&mut w, &names, &labelled)?;
            w.flush()?;
            let meta = GraphMetadata {
                mode: "raw".into(),
                learner: learner.name().into(),
                p: data.n_cols(),
                n: data.n_rows(),
                expected_fp_bound: None,
                pi_thr: None,
                q,
                fp_bound: None,
                n_sub: None,
                seed: cfg.seed,
                n_selected: selected.len(),
                failed_subsamples: 0,
                columns: names.clone(),
            };
            write_json(dir, "metadata.json", &meta)?;
        }
        None => {
            let params = StabilityParams {
                expected_fp_bound: cfg.ev,
                pi_thr: cfg.pi_thr,
                n_sub: cfg.n_sub,
                seed: cfg.seed,
            };
            let graph = stability_select(&data, learner.as_ref(), &params)?;
            let mut w = create(dir, "edges.tsv")?;
            graph.write_tsv(&mut w)?;
            w.flush()?;
            let mut w = create(dir, "graph.dot")?;
            graph.write_dot(&mut w, &names)?;
            w.flush()?;
            write_json(dir, "metadata.json", &graph.metadata(learner.name(), &names, data.n_rows()))?;
        }
    }
    Ok(())
}

pub fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let mut cfg = BenchConfig::from_path(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let result = run_bench(&cfg)?;
    result.write_all(&args.out_dir)
}

pub fn run(cli: &Cli) -> Result<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        pool = pool.num_threads(w as usize);
    }
    let pool = pool.build().map_err(|e| Error::Param(format!("worker pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Bench(a) => cmd_bench(a),
    })
}

/// Parses `args`, runs the command and returns the process exit code.
/// Failures print one `error[<kind>]: <message>` line to stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let text = e.render().to_string();
            let line: Vec<&str> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with("For more information"))
                .collect();
            let msg = line.join(" ");
            eprintln!("error[usage]: {}", msg.strip_prefix("error: ").unwrap_or(&msg));
            return 2;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error[{}]: {}", e.kind(), e.to_string().replace('\n', " "));
            1
        }
    }
}
