//! Experiment runner: seed panels, reports, and method comparisons.
//!
//! A run executes one task/optimizer pairing over a list of seeds. Every
//! seed gets an independent [`RandomSource`] built from its own seed value,
//! so per-seed results do not depend on which other seeds run or in what
//! order; seeds execute in parallel. A report always carries one row per
//! seed — aborted runs appear with their error instead of silently
//! disappearing.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::benchfns::{Bench, BenchId};
use crate::error::{Error, Result};
use crate::ga::{ga_optimize, GaConfig};
use crate::gradopt::{minimize, GradConfig, GradMethod};
use crate::most::{self, MostConfig};
use crate::rng::RandomSource;
use crate::space::Interval;
use crate::trace::Trace;
use crate::xornet::{
    self, loss, outputs, weight_space, NetConfig, TargetConvention, XorDataset, XorObjective,
};

/// Gradient-trained XOR runs initialize weights uniformly in this bound
/// (the truth-table task is initialization-dependent; this range is small
/// enough to avoid saturated starts and large enough to break symmetry).
pub const GRAD_INIT_BOUND: f64 = 1.0;

/// What to optimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    /// A registered benchmark function at a given dimension.
    Bench { function: BenchId, dimension: usize },
    /// The 2-2-1 truth-table network over its 9 weights.
    Xor { targets: TargetConvention },
}

impl Task {
    pub fn label(&self) -> String {
        match self {
            Task::Bench {
                function,
                dimension,
            } => format!("{}(dim={dimension})", function.name()),
            Task::Xor { targets } => format!("xor(targets={})", targets.name()),
        }
    }
}

/// Which optimizer family runs the task.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizerKind {
    Most,
    Ga,
    Grad(GradMethod),
}

impl OptimizerKind {
    pub fn name(&self) -> &'static str {
        match self {
            OptimizerKind::Most => "most",
            OptimizerKind::Ga => "ga",
            OptimizerKind::Grad(m) => m.name(),
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "most" => Some(OptimizerKind::Most),
            "ga" => Some(OptimizerKind::Ga),
            _ => GradMethod::from_name(name).map(OptimizerKind::Grad),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub task: Task,
    pub optimizer: OptimizerKind,
    pub seeds: Vec<u64>,
    pub most: MostConfig,
    pub ga: GaConfig,
    pub grad: GradConfig,
    /// Step budget for gradient methods.
    pub grad_max_steps: usize,
    /// Early-stop loss for gradient methods (0 disables in practice, since
    /// losses are nonnegative and rarely exactly zero).
    pub grad_loss_tolerance: f64,
    /// When set, a completed run counts as a success iff its final value is
    /// at or below this.
    pub success_tolerance: Option<f64>,
    /// When set, the run writes one trace CSV per seed plus a report file
    /// (and, for XOR tasks, the final weight vectors) under this prefix.
    pub out_prefix: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Task-appropriate defaults: benchmark tasks use 2000 samples per
    /// region and the relative width threshold (20 epochs); the XOR task
    /// uses 4000 samples, 30 epochs, and no width threshold so the epoch
    /// budget governs.
    pub fn new(task: Task, optimizer: OptimizerKind) -> Self {
        let most = match task {
            Task::Xor { .. } => MostConfig {
                samples_per_region: 4000,
                max_epochs: 30,
                width_threshold: Some(0.0),
                ..MostConfig::default()
            },
            Task::Bench { .. } => MostConfig::default(),
        };
        let grad = match optimizer {
            OptimizerKind::Grad(method) => GradConfig::with_method(method),
            _ => GradConfig::default(),
        };
        Self {
            task,
            optimizer,
            seeds: (1..=10).collect(),
            most,
            ga: GaConfig::default(),
            grad,
            grad_max_steps: 50_000,
            grad_loss_tolerance: 0.0,
            success_tolerance: None,
            out_prefix: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::InvalidConfig("need at least one seed".into()));
        }
        if let Task::Bench {
            function,
            dimension,
        } = self.task
        {
            Bench::new(function, dimension)?;
            if let OptimizerKind::Grad(method) = self.optimizer {
                return Err(Error::InvalidConfig(format!(
                    "optimizer '{}' needs analytic gradients, and benchmark \
                     function '{}' provides none; use 'most' or 'ga' for \
                     benchmark tasks",
                    method.name(),
                    function.name()
                )));
            }
        }
        match self.optimizer {
            OptimizerKind::Most => self.most.validate()?,
            OptimizerKind::Ga => self.ga.validate()?,
            OptimizerKind::Grad(_) => self.grad.validate()?,
        }
        Ok(())
    }

    /// One-line parameter echo for reports.
    pub fn summary(&self) -> String {
        let opt = match self.optimizer {
            OptimizerKind::Most => {
                let pp = match self.most.pre_partition {
                    Some(pp) => format!(" pre-partition={}x{}", pp.region_count, pp.keep_count),
                    None => String::new(),
                };
                format!(
                    "most(samples={} epochs={}{}{})",
                    self.most.samples_per_region,
                    self.most.max_epochs,
                    match self.most.width_threshold {
                        Some(t) => format!(" width-threshold={t}"),
                        None => String::new(),
                    },
                    pp
                )
            }
            OptimizerKind::Ga => format!(
                "ga(pop={} gens={} cx={} mut={} scale={} elites={})",
                self.ga.population_size,
                self.ga.generations,
                self.ga.crossover_rate,
                self.ga
                    .mutation_rate
                    .map_or("1/n".to_string(), |r| r.to_string()),
                self.ga.mutation_scale,
                self.ga.elitism_count
            ),
            OptimizerKind::Grad(method) => format!(
                "{}(eta={} gamma={} beta1={} beta2={} eps={} steps<={})",
                method.name(),
                self.grad.eta,
                self.grad.gamma,
                self.grad.beta1,
                self.grad.beta2,
                self.grad.epsilon,
                self.grad_max_steps
            ),
        };
        format!(
            "task={} optimizer={} seeds={}",
            self.task.label(),
            opt,
            seeds_summary(&self.seeds)
        )
    }
}

/// Compact seed-list rendering: contiguous runs print as `a..b`.
fn seeds_summary(seeds: &[u64]) -> String {
    if seeds.len() > 1 && seeds.windows(2).all(|pair| pair[1] == pair[0] + 1) {
        format!("{}..{}", seeds[0], seeds[seeds.len() - 1])
    } else {
        seeds
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// The result of one seed's run. Failed runs keep their seed and error
/// message; their numeric fields are empty/NaN.
#[derive(Debug, Clone)]
pub struct SeedOutcome {
    pub seed: u64,
    pub estimate: Vec<f64>,
    pub final_value: f64,
    /// Epochs, generations, or gradient steps, depending on the optimizer.
    pub steps: usize,
    pub seconds: f64,
    /// Truth-table outputs at the final weights (XOR task only).
    pub xor_outputs: Option<[f64; 4]>,
    pub trace: Option<Trace>,
    pub error: Option<String>,
}

impl SeedOutcome {
    pub fn completed(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub completed: usize,
    pub failed: usize,
    pub median_value: Option<f64>,
    pub min_value: Option<f64>,
    pub max_value: Option<f64>,
    /// Present iff a success tolerance was configured.
    pub success_count: Option<usize>,
    pub total_seconds: f64,
}

impl Aggregate {
    pub fn compute(outcomes: &[SeedOutcome], tolerance: Option<f64>) -> Self {
        let mut values: Vec<f64> = outcomes
            .iter()
            .filter(|o| o.completed())
            .map(|o| o.final_value)
            .collect();
        values.sort_by(f64::total_cmp);
        let median = if values.is_empty() {
            None
        } else if values.len() % 2 == 1 {
            Some(values[values.len() / 2])
        } else {
            Some((values[values.len() / 2 - 1] + values[values.len() / 2]) / 2.0)
        };
        Self {
            completed: values.len(),
            failed: outcomes.len() - values.len(),
            median_value: median,
            min_value: values.first().copied(),
            max_value: values.last().copied(),
            success_count: tolerance.map(|tol| {
                outcomes
                    .iter()
                    .filter(|o| o.completed() && o.final_value <= tol)
                    .count()
            }),
            total_seconds: outcomes.iter().map(|o| o.seconds).sum(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    /// Parameter echo from the config that produced this report.
    pub config_summary: String,
    pub optimizer: OptimizerKind,
    pub outcomes: Vec<SeedOutcome>,
    pub aggregate: Aggregate,
    pub success_tolerance: Option<f64>,
}

impl Report {
    pub fn has_failures(&self) -> bool {
        self.aggregate.failed > 0
    }

    pub fn outcome_for_seed(&self, seed: u64) -> Option<&SeedOutcome> {
        self.outcomes.iter().find(|o| o.seed == seed)
    }
}

struct RunArtifacts {
    estimate: Vec<f64>,
    final_value: f64,
    steps: usize,
    xor_outputs: Option<[f64; 4]>,
    trace: Trace,
}

fn execute_seed(config: &ExperimentConfig, seed: u64) -> Result<RunArtifacts> {
    let mut rng = RandomSource::new(seed);
    match (config.task, config.optimizer) {
        (
            Task::Bench {
                function,
                dimension,
            },
            OptimizerKind::Most,
        ) => {
            let bench = Bench::new(function, dimension)?;
            let space = bench.default_space();
            let result = if config.most.pre_partition.is_some() {
                most::optimize_pre_partitioned(&bench, &space, &config.most, &mut rng)?
            } else {
                most::optimize(&bench, &space, &config.most, &mut rng)?
            };
            Ok(RunArtifacts {
                estimate: result.estimate,
                final_value: result.final_value,
                steps: result.epochs_run,
                xor_outputs: None,
                trace: result.trace,
            })
        }
        (
            Task::Bench {
                function,
                dimension,
            },
            OptimizerKind::Ga,
        ) => {
            let bench = Bench::new(function, dimension)?;
            let space = bench.default_space();
            let result = ga_optimize(&bench, &space, &config.ga, &mut rng)?;
            Ok(RunArtifacts {
                estimate: result.best.genes,
                final_value: result.best.fitness,
                steps: result.generations_run,
                xor_outputs: None,
                trace: result.trace,
            })
        }
        (Task::Xor { targets }, OptimizerKind::Most) => {
            let net = NetConfig::sigmoid_squared_error();
            let data = XorDataset::new(targets);
            let objective = XorObjective::new(data.clone(), net);
            let space = weight_space();
            let result = if config.most.pre_partition.is_some() {
                most::optimize_pre_partitioned(&objective, &space, &config.most, &mut rng)?
            } else {
                most::optimize(&objective, &space, &config.most, &mut rng)?
            };
            let y = outputs(&result.estimate, &data, &net);
            Ok(RunArtifacts {
                estimate: result.estimate,
                final_value: result.final_value,
                steps: result.epochs_run,
                xor_outputs: Some(y),
                trace: result.trace,
            })
        }
        (Task::Xor { targets }, OptimizerKind::Ga) => {
            let net = NetConfig::sigmoid_squared_error();
            let data = XorDataset::new(targets);
            let objective = XorObjective::new(data.clone(), net);
            let result = ga_optimize(&objective, &weight_space(), &config.ga, &mut rng)?;
            let y = outputs(&result.best.genes, &data, &net);
            Ok(RunArtifacts {
                estimate: result.best.genes,
                final_value: result.best.fitness,
                steps: result.generations_run,
                xor_outputs: Some(y),
                trace: result.trace,
            })
        }
        (Task::Xor { targets }, OptimizerKind::Grad(method)) => {
            let net = NetConfig::relu_cross_entropy();
            let data = XorDataset::new(targets);
            let init_box =
                Interval::new(-GRAD_INIT_BOUND, GRAD_INIT_BOUND).expect("static bounds are valid");
            let w0: Vec<f64> = (0..xornet::WEIGHT_COUNT)
                .map(|_| rng.sample_uniform(init_box))
                .collect();
            let mut grad_cfg = config.grad.clone();
            grad_cfg.method = method;
            let result = minimize(
                |w| loss(w, &data, &net),
                |w| xornet::gradient(w, &data, &net).to_vec(),
                &w0,
                &grad_cfg,
                config.grad_max_steps,
                config.grad_loss_tolerance,
            )?;
            let y = outputs(&result.weights, &data, &net);
            Ok(RunArtifacts {
                estimate: result.weights,
                final_value: result.final_loss,
                steps: result.steps_run,
                xor_outputs: Some(y),
                trace: result.trace,
            })
        }
        (Task::Bench { .. }, OptimizerKind::Grad(_)) => {
            unreachable!("validate() rejects gradient optimizers on benchmark tasks")
        }
    }
}

fn run_seed(config: &ExperimentConfig, seed: u64) -> SeedOutcome {
    let started = Instant::now();
    match execute_seed(config, seed) {
        Ok(artifacts) => SeedOutcome {
            seed,
            estimate: artifacts.estimate,
            final_value: artifacts.final_value,
            steps: artifacts.steps,
            seconds: started.elapsed().as_secs_f64(),
            xor_outputs: artifacts.xor_outputs,
            trace: Some(artifacts.trace),
            error: None,
        },
        Err(e) => SeedOutcome {
            seed,
            estimate: vec![],
            final_value: f64::NAN,
            steps: 0,
            seconds: started.elapsed().as_secs_f64(),
            xor_outputs: None,
            trace: None,
            error: Some(e.to_string()),
        },
    }
}

/// Runs the experiment over all seeds (in parallel) and returns the report.
/// Per-seed aborts are recorded in the report, not raised; only invalid
/// configurations and output I/O problems are errors.
pub fn run(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let outcomes: Vec<SeedOutcome> = config
        .seeds
        .par_iter()
        .map(|&seed| run_seed(config, seed))
        .collect();
    let aggregate = Aggregate::compute(&outcomes, config.success_tolerance);
    let report = Report {
        config_summary: config.summary(),
        optimizer: config.optimizer,
        outcomes,
        aggregate,
        success_tolerance: config.success_tolerance,
    };
    if let Some(prefix) = &config.out_prefix {
        write_artifacts(&report, config, prefix)?;
    }
    Ok(report)
}

fn write_artifacts(report: &Report, config: &ExperimentConfig, prefix: &Path) -> Result<()> {
    if let Some(parent) = prefix.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let with_suffix = |suffix: &str| -> PathBuf {
        let mut name = prefix
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".to_string());
        name.push_str(suffix);
        prefix.with_file_name(name)
    };

    for outcome in &report.outcomes {
        if let Some(trace) = &outcome.trace {
            if !trace.is_empty() {
                let file = fs::File::create(with_suffix(&format!("-seed{}.csv", outcome.seed)))?;
                trace.write_csv(file)?;
            }
        }
    }
    if matches!(config.task, Task::Xor { .. }) {
        let rows: Vec<Vec<f64>> = report
            .outcomes
            .iter()
            .filter(|o| o.completed())
            .map(|o| o.estimate.clone())
            .collect();
        if !rows.is_empty() {
            let file = fs::File::create(with_suffix("-weights.csv"))?;
            xornet::write_weights_csv(&rows, file)?;
        }
    }
    fs::write(with_suffix("-report.txt"), format!("{report}"))?;
    Ok(())
}

/// Runs several configs that share a task and bundles their reports for
/// side-by-side rendering.
pub fn compare(configs: &[ExperimentConfig]) -> Result<CompareReport> {
    let first = configs
        .first()
        .ok_or_else(|| Error::InvalidConfig("compare needs at least one config".into()))?;
    for c in configs {
        if c.task != first.task {
            return Err(Error::InvalidConfig(format!(
                "compare requires a shared task, got '{}' and '{}'",
                first.task.label(),
                c.task.label()
            )));
        }
    }
    let reports = configs.iter().map(run).collect::<Result<Vec<_>>>()?;
    Ok(CompareReport { reports })
}

#[derive(Debug, Clone)]
pub struct CompareReport {
    pub reports: Vec<Report>,
}

impl CompareReport {
    pub fn has_failures(&self) -> bool {
        self.reports.iter().any(Report::has_failures)
    }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

fn fmt_value(v: f64) -> String {
    if v.is_nan() {
        "-".to_string()
    } else {
        format!("{v:.6e}")
    }
}

fn fmt_outputs(y: &[f64; 4]) -> String {
    format!("[{:.3e} {:.3e} {:.3e} {:.3e}]", y[0], y[1], y[2], y[3])
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.config_summary)?;
        let has_outputs = self.outcomes.iter().any(|o| o.xor_outputs.is_some());
        write!(
            f,
            "{:>6}  {:>14}  {:>8}  {:>9}",
            "seed", "final value", "steps", "seconds"
        )?;
        if has_outputs {
            write!(f, "  {:>42}", "outputs (0,0) (0,1) (1,0) (1,1)")?;
        }
        writeln!(f, "  status")?;
        for o in &self.outcomes {
            write!(
                f,
                "{:>6}  {:>14}  {:>8}  {:>9.3}",
                o.seed,
                fmt_value(o.final_value),
                o.steps,
                o.seconds
            )?;
            if has_outputs {
                match &o.xor_outputs {
                    Some(y) => write!(f, "  {:>42}", fmt_outputs(y))?,
                    None => write!(f, "  {:>42}", "-")?,
                }
            }
            match &o.error {
                Some(e) => writeln!(f, "  aborted: {e}")?,
                None => {
                    let status = match self.success_tolerance {
                        Some(tol) if o.final_value <= tol => "ok (success)",
                        Some(_) => "ok (above tol)",
                        None => "ok",
                    };
                    writeln!(f, "  {status}")?
                }
            }
        }
        let a = &self.aggregate;
        write!(f, "completed {}/{}", a.completed, a.completed + a.failed)?;
        if let (Some(median), Some(min), Some(max)) = (a.median_value, a.min_value, a.max_value) {
            write!(
                f,
                "  median {}  min {}  max {}",
                fmt_value(median),
                fmt_value(min),
                fmt_value(max)
            )?;
        }
        if let (Some(successes), Some(tol)) = (a.success_count, self.success_tolerance) {
            write!(
                f,
                "  successes {}/{} (tol {tol:e})",
                successes,
                a.completed + a.failed
            )?;
        }
        writeln!(f, "  total {:.3}s", a.total_seconds)
    }
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for report in &self.reports {
            writeln!(f, "--- {} ---", report.optimizer.name())?;
            writeln!(f, "{report}")?;
        }
        // Side-by-side final values per seed.
        writeln!(f, "--- final values by seed ---")?;
        write!(f, "{:>6}", "seed")?;
        for report in &self.reports {
            write!(f, "  {:>14}", report.optimizer.name())?;
        }
        writeln!(f)?;
        let seeds: Vec<u64> = self
            .reports
            .first()
            .map(|r| r.outcomes.iter().map(|o| o.seed).collect())
            .unwrap_or_default();
        for seed in seeds {
            write!(f, "{seed:>6}")?;
            for report in &self.reports {
                let cell = report
                    .outcome_for_seed(seed)
                    .map(|o| fmt_value(o.final_value))
                    .unwrap_or_else(|| "-".into());
                write!(f, "  {cell:>14}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
