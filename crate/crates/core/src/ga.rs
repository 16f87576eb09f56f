//! A real-coded genetic algorithm baseline (single-objective).
//!
//! Each generation sorts the population by fitness, carries the best
//! individuals over unchanged (elitism), pairs the sorted parents with their
//! fitness neighbors, and fills the remaining slots with blended, mutated,
//! bound-clamped children. One individual of the initial population can be
//! seeded at a fixed gene value; the rest initialize uniformly in the search
//! space.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::objective::{eval_checked, Objective};
use crate::rng::RandomSource;
use crate::space::{Interval, SearchSpace};
use crate::trace::{Trace, TraceRecord};

/// Blend factor for BLX-alpha crossover: children draw uniformly from the
/// parents' per-gene range extended by this fraction of its span on each
/// side.
pub const BLX_ALPHA: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    /// Probability that a parent pair is blended rather than cloned.
    pub crossover_rate: f64,
    /// Per-gene mutation probability; `None` resolves to `1/n`.
    pub mutation_rate: Option<f64>,
    /// Gaussian mutation spread as a fraction of each variable's range.
    pub mutation_scale: f64,
    /// Number of best individuals copied through unchanged each generation.
    pub elitism_count: usize,
    /// When set, one individual of the initial population has every gene at
    /// this value (clamped into the space).
    pub init_value: Option<f64>,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            generations: 200,
            crossover_rate: 0.9,
            mutation_rate: None,
            mutation_scale: 0.1,
            elitism_count: 1,
            init_value: Some(0.05),
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::InvalidConfig(
                "population_size must be at least 2".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(Error::InvalidConfig(format!(
                "crossover_rate must be in [0, 1], got {}",
                self.crossover_rate
            )));
        }
        if let Some(r) = self.mutation_rate {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::InvalidConfig(format!(
                    "mutation_rate must be in [0, 1], got {r}"
                )));
            }
        }
        if !self.mutation_scale.is_finite() || self.mutation_scale < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "mutation_scale must be finite and >= 0, got {}",
                self.mutation_scale
            )));
        }
        if self.elitism_count > self.population_size {
            return Err(Error::InvalidConfig(format!(
                "elitism_count {} exceeds population size {}",
                self.elitism_count, self.population_size
            )));
        }
        if let Some(v) = self.init_value {
            if !v.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "init_value must be finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    fn resolved_mutation_rate(&self, dim: usize) -> f64 {
        self.mutation_rate.unwrap_or(1.0 / dim as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genes: Vec<f64>,
    pub fitness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaResult {
    /// Best individual seen in any generation.
    pub best: Individual,
    pub generations_run: usize,
    /// Per-generation best (step 0 is the initial population).
    pub trace: Trace,
}

/// Builds and evaluates the initial population: one optional seeded
/// individual, the rest uniform in the space.
pub fn initial_population(
    objective: &dyn Objective,
    space: &SearchSpace,
    cfg: &GaConfig,
    rng: &mut RandomSource,
) -> Result<Vec<Individual>> {
    cfg.validate()?;
    if objective.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: objective.dim(),
            actual: space.dim(),
        });
    }
    let mut population = Vec::with_capacity(cfg.population_size);
    for i in 0..cfg.population_size {
        let genes: Vec<f64> = match (i, cfg.init_value) {
            (0, Some(v)) => space.intervals().iter().map(|iv| iv.clamp(v)).collect(),
            _ => space
                .intervals()
                .iter()
                .map(|iv| rng.sample_uniform(*iv))
                .collect(),
        };
        let fitness = eval_checked(objective, &genes)?;
        population.push(Individual { genes, fitness });
    }
    Ok(population)
}

fn blx_crossover(a: &[f64], b: &[f64], rng: &mut RandomSource) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = Vec::with_capacity(a.len());
    let mut c2 = Vec::with_capacity(a.len());
    for (&x, &y) in a.iter().zip(b) {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        let spread = BLX_ALPHA * (hi - lo);
        let range =
            Interval::new(lo - spread, hi + spread).expect("blend range is finite and ordered");
        c1.push(rng.sample_uniform(range));
        c2.push(rng.sample_uniform(range));
    }
    (c1, c2)
}

fn mutate(genes: &mut [f64], rate: f64, sigmas: &[f64], rng: &mut RandomSource) {
    for (g, &sigma) in genes.iter_mut().zip(sigmas) {
        if rng.chance(rate) {
            *g += sigma * rng.standard_normal();
        }
    }
}

fn clamp_into(genes: &mut [f64], space: &SearchSpace) {
    for (g, iv) in genes.iter_mut().zip(space.intervals()) {
        *g = iv.clamp(*g);
    }
}

/// Advances the population by one generation in place.
///
/// The population is sorted ascending by fitness (stable, so ties keep their
/// order); the first `elitism_count` individuals survive unchanged, and
/// fitness-adjacent pairs `(1st, 2nd), (3rd, 4th), ...` produce the children
/// that fill the remaining slots. Children are BLX-alpha blends of their
/// parents with probability `crossover_rate` (otherwise clones), then
/// per-gene Gaussian mutation and clamping to the space's bounds. Population
/// size never changes.
pub fn ga_generation(
    population: &mut Vec<Individual>,
    objective: &dyn Objective,
    space: &SearchSpace,
    cfg: &GaConfig,
    rng: &mut RandomSource,
) -> Result<()> {
    cfg.validate()?;
    assert_eq!(
        population.len(),
        cfg.population_size,
        "population size must match the config"
    );
    population.sort_by(|a, b| a.fitness.total_cmp(&b.fitness));

    let needed = cfg.population_size - cfg.elitism_count;
    let rate = cfg.resolved_mutation_rate(space.dim());
    let sigmas: Vec<f64> = space
        .widths()
        .iter()
        .map(|w| cfg.mutation_scale * w)
        .collect();

    let mut children: Vec<Vec<f64>> = Vec::with_capacity(cfg.population_size + 1);
    for pair in population.chunks(2) {
        if children.len() >= needed {
            break;
        }
        let p1 = &pair[0];
        let p2 = pair.get(1).unwrap_or(&pair[0]);
        let (mut c1, mut c2) = if rng.chance(cfg.crossover_rate) {
            blx_crossover(&p1.genes, &p2.genes, rng)
        } else {
            (p1.genes.clone(), p2.genes.clone())
        };
        for child in [&mut c1, &mut c2] {
            mutate(child, rate, &sigmas, rng);
            clamp_into(child, space);
        }
        children.push(c1);
        children.push(c2);
    }
    children.truncate(needed);

    let mut next = population[..cfg.elitism_count].to_vec();
    for genes in children {
        let fitness = eval_checked(objective, &genes)?;
        next.push(Individual { genes, fitness });
    }
    *population = next;
    Ok(())
}

/// Runs the configured number of generations and returns the best-ever
/// individual plus the per-generation best-fitness trace.
pub fn ga_optimize(
    objective: &dyn Objective,
    space: &SearchSpace,
    cfg: &GaConfig,
    rng: &mut RandomSource,
) -> Result<GaResult> {
    let started = Instant::now();
    let mut population = initial_population(objective, space, cfg, rng)?;

    let generation_best = |pop: &[Individual]| -> Individual {
        pop.iter()
            .min_by(|a, b| a.fitness.total_cmp(&b.fitness))
            .expect("population is never empty")
            .clone()
    };

    let mut trace = Trace::new();
    let mut best_ever = generation_best(&population);
    trace.push(TraceRecord {
        step: 0,
        estimate: best_ever.genes.clone(),
        value: best_ever.fitness,
        widths: vec![],
        seconds: started.elapsed().as_secs_f64(),
    });

    for generation in 1..=cfg.generations {
        ga_generation(&mut population, objective, space, cfg, rng)?;
        let best = generation_best(&population);
        if best.fitness < best_ever.fitness {
            best_ever = best.clone();
        }
        trace.push(TraceRecord {
            step: generation,
            estimate: best.genes.clone(),
            value: best.fitness,
            widths: vec![],
            seconds: started.elapsed().as_secs_f64(),
        });
    }

    Ok(GaResult {
        best: best_ever,
        generations_run: cfg.generations,
        trace,
    })
}
