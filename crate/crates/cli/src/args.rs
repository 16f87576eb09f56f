//! Command-line definitions and their translation into experiment configs.
//!
//! Each subcommand collects flags into the shared [`ExperimentConfig`] from
//! the core library; defaults that depend on the task (sample counts, epoch
//! budgets) come from [`ExperimentConfig::new`] so the CLI and library always
//! agree.

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use most_core::benchfns::BenchId;
use most_core::gradopt::GradMethod;
use most_core::harness::{ExperimentConfig, OptimizerKind, Task};
use most_core::most::PrePartitionConfig;
use most_core::xornet::TargetConvention;

#[derive(Debug, Parser)]
#[command(
    name = "most",
    version,
    about = "Benchmark runner for a Monte Carlo bisection optimizer, \
             gradient-descent baselines, and a genetic algorithm"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimize a registered benchmark function.
    Bench(BenchArgs),
    /// Train the 2-2-1 truth-table network over its 9 weights.
    Xor(XorArgs),
    /// Deceptive 1-D demo: a narrow deep well that plain bisection misses
    /// unless pre-partitioning screens the slices first.
    Figa(FigaArgs),
    /// Run several optimizers on one task and print a side-by-side table.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Benchmark function: cubic | schwefel | sphere | sphere-as-printed | fig-a.
    #[arg(long, value_parser = parse_function)]
    pub function: BenchId,

    /// Optimizer: most | ga. Gradient methods are rejected here because the
    /// benchmark functions carry no analytic gradients.
    #[arg(long, default_value = "most", value_parser = parse_optimizer)]
    pub optimizer: OptimizerKind,

    /// Number of variables (cubic and fig-a are fixed at 1).
    #[arg(long)]
    pub dim: Option<usize>,

    #[command(flatten)]
    pub most: MostArgs,

    #[command(flatten)]
    pub ga: GaArgs,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct XorArgs {
    /// Optimizer: most | ga | sgd | momentum | nag | adagrad | rmsprop |
    /// adadelta | adam.
    #[arg(long, default_value = "most", value_parser = parse_optimizer)]
    pub optimizer: OptimizerKind,

    /// Truth-table convention: "paper" maps (0,0) and (1,1) to 1;
    /// "standard" is ordinary XOR.
    #[arg(long, default_value = "paper", value_parser = parse_targets)]
    pub targets: TargetConvention,

    #[command(flatten)]
    pub most: MostArgs,

    #[command(flatten)]
    pub ga: GaArgs,

    #[command(flatten)]
    pub grad: GradArgs,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct FigaArgs {
    /// Optimizer: most | ga.
    #[arg(long, default_value = "most", value_parser = parse_optimizer)]
    pub optimizer: OptimizerKind,

    #[command(flatten)]
    pub most: MostArgs,

    #[command(flatten)]
    pub ga: GaArgs,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Shared task: xor | cubic | schwefel | sphere | sphere-as-printed | fig-a.
    #[arg(long, value_parser = parse_task_name)]
    pub task: TaskName,

    /// Comma-separated optimizers to run side by side. Defaults to
    /// most,adam,ga for xor and most,ga for benchmark tasks.
    #[arg(long, value_delimiter = ',', value_parser = parse_optimizer)]
    pub optimizers: Option<Vec<OptimizerKind>>,

    /// Number of variables for benchmark tasks.
    #[arg(long)]
    pub dim: Option<usize>,

    /// Truth-table convention for the xor task.
    #[arg(long, default_value = "paper", value_parser = parse_targets)]
    pub targets: TargetConvention,

    #[command(flatten)]
    pub most: MostArgs,

    #[command(flatten)]
    pub ga: GaArgs,

    #[command(flatten)]
    pub grad: GradArgs,

    #[command(flatten)]
    pub common: CommonArgs,
}

/// Flags every subcommand shares.
#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Seeds to run: a single value (7), a list (1,2,5), an inclusive range
    /// (1..10), or a mix (1..3,8).
    #[arg(long, default_value = "1..10", value_parser = parse_seeds)]
    pub seeds: SeedList,

    /// Count a completed run as a success iff its final value is <= TOL.
    #[arg(long, value_name = "TOL", allow_negative_numbers = true)]
    pub tol: Option<f64>,

    /// Write one trace CSV per seed plus the report (and, for xor, the final
    /// weight vectors) under this path prefix.
    #[arg(long, value_name = "PREFIX")]
    pub out: Option<PathBuf>,
}

/// Bisection-optimizer flags.
#[derive(Debug, Args)]
pub struct MostArgs {
    /// Monte Carlo samples per half-region sum (default: 2000 for benchmark
    /// tasks, 4000 for xor).
    #[arg(long)]
    pub samples: Option<usize>,

    /// Epoch budget; each epoch halves every variable's interval once
    /// (default: 20 for benchmark tasks, 30 for xor).
    #[arg(long)]
    pub epochs: Option<usize>,

    /// Stop once every interval is at or below this absolute width
    /// (default: 1e-6 x the widest initial interval; 0 disables).
    #[arg(long, value_name = "WIDTH")]
    pub width_threshold: Option<f64>,

    /// Screen each variable into K equal slices and keep the best KEEP
    /// candidate spaces before bisecting (for example "10,2").
    #[arg(long, value_name = "K,KEEP", value_parser = parse_pre_partition)]
    pub pre_partition: Option<PrePartitionConfig>,
}

/// Genetic-algorithm flags.
#[derive(Debug, Args)]
pub struct GaArgs {
    /// Population size.
    #[arg(long, default_value_t = 100)]
    pub population: usize,

    /// Number of generations.
    #[arg(long, default_value_t = 200)]
    pub generations: usize,

    /// Probability that a parent pair is blended rather than cloned.
    #[arg(long, default_value_t = 0.9)]
    pub crossover_rate: f64,

    /// Per-gene mutation probability (default: 1/dimension).
    #[arg(long)]
    pub mutation_rate: Option<f64>,

    /// Gaussian mutation spread as a fraction of each variable's range.
    #[arg(long, default_value_t = 0.1)]
    pub mutation_scale: f64,

    /// Number of best individuals copied through unchanged each generation.
    #[arg(long, default_value_t = 1)]
    pub elitism: usize,

    /// Every gene of one seeded individual starts at this value.
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    pub init_value: f64,

    /// Start fully random instead of seeding one individual.
    #[arg(long)]
    pub no_seeded_individual: bool,
}

/// Gradient-descent flags (xor task only).
#[derive(Debug, Args)]
pub struct GradArgs {
    /// Learning rate (ignored by adadelta).
    #[arg(long, default_value_t = 0.001)]
    pub eta: f64,

    /// Momentum / decay factor for momentum, nag, rmsprop, adadelta.
    #[arg(long, default_value_t = 0.9)]
    pub gamma: f64,

    /// First-moment decay for adam.
    #[arg(long, default_value_t = 0.9)]
    pub beta1: f64,

    /// Second-moment decay for adam.
    #[arg(long, default_value_t = 0.999)]
    pub beta2: f64,

    /// Denominator guard.
    #[arg(long, default_value_t = 1e-8)]
    pub epsilon: f64,

    /// Full-batch step budget.
    #[arg(long, default_value_t = 50_000)]
    pub steps: usize,

    /// Stop early once the loss falls to or below this.
    #[arg(long, default_value_t = 0.0)]
    pub loss_tol: f64,
}

/// Parsed seed list; a newtype so clap treats it as one value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedList(pub Vec<u64>);

/// A compare task: either the network or a named benchmark function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskName {
    Xor,
    Bench(BenchId),
}

fn parse_seeds(s: &str) -> Result<SeedList, String> {
    let mut seeds = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let lo: u64 = a
                .trim()
                .parse()
                .map_err(|_| format!("bad seed range start {a:?}"))?;
            let hi: u64 = b
                .trim()
                .parse()
                .map_err(|_| format!("bad seed range end {b:?}"))?;
            if lo > hi {
                return Err(format!("seed range {part:?} runs backwards"));
            }
            seeds.extend(lo..=hi);
        } else {
            seeds.push(
                part.parse()
                    .map_err(|_| format!("bad seed {part:?} (expected 7, 1,2,5, or 1..10)"))?,
            );
        }
    }
    if seeds.is_empty() {
        return Err("need at least one seed".into());
    }
    Ok(SeedList(seeds))
}

fn parse_pre_partition(s: &str) -> Result<PrePartitionConfig, String> {
    let (k, keep) = s
        .split_once(',')
        .ok_or("expected K,KEEP (for example 10,2)")?;
    Ok(PrePartitionConfig {
        region_count: k
            .trim()
            .parse()
            .map_err(|_| format!("bad slice count {k:?}"))?,
        keep_count: keep
            .trim()
            .parse()
            .map_err(|_| format!("bad keep count {keep:?}"))?,
    })
}

fn parse_function(s: &str) -> Result<BenchId, String> {
    BenchId::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = BenchId::all().iter().map(|id| id.name()).collect();
        format!(
            "unknown function {s:?}; expected one of {}",
            names.join(", ")
        )
    })
}

fn parse_optimizer(s: &str) -> Result<OptimizerKind, String> {
    OptimizerKind::from_name(s).ok_or_else(|| {
        let mut names = vec!["most", "ga"];
        names.extend(GradMethod::all().iter().map(|m| m.name()));
        format!(
            "unknown optimizer {s:?}; expected one of {}",
            names.join(", ")
        )
    })
}

fn parse_targets(s: &str) -> Result<TargetConvention, String> {
    TargetConvention::from_name(s)
        .ok_or_else(|| format!("unknown target convention {s:?}; expected paper or standard"))
}

fn parse_task_name(s: &str) -> Result<TaskName, String> {
    if s == "xor" {
        return Ok(TaskName::Xor);
    }
    parse_function(s).map(TaskName::Bench).map_err(|e| {
        e.replace("unknown function", "unknown task")
            .replace("expected one of", "expected xor or one of")
    })
}

/// What the process should do after parsing.
#[derive(Debug)]
pub enum Invocation {
    Run(Box<ExperimentConfig>),
    Compare(Vec<ExperimentConfig>),
}

impl Cli {
    /// Translates parsed flags into validated experiment configs.
    pub fn into_invocation(self) -> anyhow::Result<Invocation> {
        match self.command {
            Command::Bench(args) => {
                let task = bench_task(args.function, args.dim)?;
                let config = build_config(
                    task,
                    args.optimizer,
                    &args.most,
                    &args.ga,
                    None,
                    &args.common,
                )?;
                Ok(Invocation::Run(Box::new(config)))
            }
            Command::Xor(args) => {
                let task = Task::Xor {
                    targets: args.targets,
                };
                let config = build_config(
                    task,
                    args.optimizer,
                    &args.most,
                    &args.ga,
                    Some(&args.grad),
                    &args.common,
                )?;
                Ok(Invocation::Run(Box::new(config)))
            }
            Command::Figa(args) => {
                let task = bench_task(BenchId::FigA, None)?;
                let config = build_config(
                    task,
                    args.optimizer,
                    &args.most,
                    &args.ga,
                    None,
                    &args.common,
                )?;
                Ok(Invocation::Run(Box::new(config)))
            }
            Command::Compare(args) => {
                let task = match args.task {
                    TaskName::Xor => Task::Xor {
                        targets: args.targets,
                    },
                    TaskName::Bench(function) => bench_task(function, args.dim)?,
                };
                let optimizers = match &args.optimizers {
                    Some(list) => list.clone(),
                    None => match task {
                        Task::Xor { .. } => vec![
                            OptimizerKind::Most,
                            OptimizerKind::Grad(GradMethod::Adam),
                            OptimizerKind::Ga,
                        ],
                        Task::Bench { .. } => vec![OptimizerKind::Most, OptimizerKind::Ga],
                    },
                };
                if optimizers.is_empty() {
                    bail!("--optimizers needs at least one entry");
                }
                let mut configs = Vec::with_capacity(optimizers.len());
                for optimizer in optimizers {
                    let mut common = args.common.clone();
                    // Distinct prefixes keep per-optimizer artifacts apart.
                    if let Some(prefix) = &args.common.out {
                        let mut name = prefix
                            .file_name()
                            .map(|n| n.to_string_lossy().into_owned())
                            .unwrap_or_else(|| "compare".into());
                        name.push('-');
                        name.push_str(optimizer.name());
                        common.out = Some(prefix.with_file_name(name));
                    }
                    configs.push(build_config(
                        task,
                        optimizer,
                        &args.most,
                        &args.ga,
                        Some(&args.grad),
                        &common,
                    )?);
                }
                Ok(Invocation::Compare(configs))
            }
        }
    }
}

fn bench_task(function: BenchId, dim: Option<usize>) -> anyhow::Result<Task> {
    let dimension = dim.unwrap_or_else(|| function.default_dimension());
    Ok(Task::Bench {
        function,
        dimension,
    })
}

fn build_config(
    task: Task,
    optimizer: OptimizerKind,
    most: &MostArgs,
    ga: &GaArgs,
    grad: Option<&GradArgs>,
    common: &CommonArgs,
) -> anyhow::Result<ExperimentConfig> {
    let mut config = ExperimentConfig::new(task, optimizer);
    if let Some(samples) = most.samples {
        config.most.samples_per_region = samples;
    }
    if let Some(epochs) = most.epochs {
        config.most.max_epochs = epochs;
    }
    if let Some(width) = most.width_threshold {
        config.most.width_threshold = Some(width);
    }
    if most.pre_partition.is_some() {
        config.most.pre_partition = most.pre_partition;
    }

    config.ga.population_size = ga.population;
    config.ga.generations = ga.generations;
    config.ga.crossover_rate = ga.crossover_rate;
    config.ga.mutation_rate = ga.mutation_rate;
    config.ga.mutation_scale = ga.mutation_scale;
    config.ga.elitism_count = ga.elitism;
    config.ga.init_value = if ga.no_seeded_individual {
        None
    } else {
        Some(ga.init_value)
    };

    if let Some(grad) = grad {
        config.grad.eta = grad.eta;
        config.grad.gamma = grad.gamma;
        config.grad.beta1 = grad.beta1;
        config.grad.beta2 = grad.beta2;
        config.grad.epsilon = grad.epsilon;
        config.grad_max_steps = grad.steps;
        config.grad_loss_tolerance = grad.loss_tol;
    }

    config.seeds = common.seeds.0.clone();
    config.success_tolerance = common.tol;
    config.out_prefix = common.out.clone();
    config
        .validate()
        .context("invalid experiment configuration")?;
    Ok(config)
}
