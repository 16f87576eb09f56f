//! MOST: minimization by Monte Carlo interval bisection.
//!
//! The optimizer keeps one interval per variable. Each epoch sweeps the
//! variables in index order; for the variable under test it splits the
//! current interval at its midpoint, estimates the objective's unnormalized
//! Monte Carlo sum over each half, and keeps the half with the smaller sum.
//! The two sums are paired: each sample draws the variable under test once
//! from each half while every other variable contributes one shared draw
//! from its current interval to both sums. Sharing the non-split draws makes
//! the comparison depend only on the variable being bisected — for an
//! additively separable objective the other variables cancel exactly — so
//! the half-choice is far less noisy than two independent estimates would
//! be. After a full sweep every width has halved, so the search volume
//! shrinks by 2^n per epoch and the estimate — the vector of interval
//! midpoints — converges geometrically toward the region the sums favor.
//!
//! No gradients, no smoothness assumptions: the objective is a black box.
//! An optional pre-partition stage (see [`pre_partition`]) screens each
//! variable's range for promising slices first, which rescues functions whose
//! global minimum hides in a spike that integrates to less than a broad
//! shallow basin.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::objective::{eval_checked, Objective};
use crate::rng::RandomSource;
use crate::space::{Interval, SearchSpace};
use crate::trace::{Trace, TraceRecord};

/// Fallback width threshold, as a fraction of the initial maximum width.
pub const DEFAULT_WIDTH_THRESHOLD_RATIO: f64 = 1e-6;

/// Pre-partition screening parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrePartitionConfig {
    /// Number of equal slices each variable's interval is cut into.
    pub region_count: usize,
    /// Number of ranked candidate spaces to keep (1 ≤ keep ≤ regions).
    pub keep_count: usize,
}

impl Default for PrePartitionConfig {
    fn default() -> Self {
        Self {
            region_count: 10,
            keep_count: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MostConfig {
    /// Monte Carlo samples per region sum (M). Each half-interval comparison
    /// spends 2M objective evaluations: M paired samples per half, with the
    /// non-split variables shared between the pair.
    pub samples_per_region: usize,
    /// Epoch budget (N). One epoch halves every variable's interval once.
    pub max_epochs: usize,
    /// Stop once every interval width is ≤ this. `None` resolves to
    /// [`DEFAULT_WIDTH_THRESHOLD_RATIO`] × the initial maximum width.
    pub width_threshold: Option<f64>,
    /// When present, [`optimize_pre_partitioned`] screens slices first.
    pub pre_partition: Option<PrePartitionConfig>,
}

impl Default for MostConfig {
    fn default() -> Self {
        Self {
            samples_per_region: 2000,
            max_epochs: 20,
            width_threshold: None,
            pre_partition: None,
        }
    }
}

impl MostConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples_per_region == 0 {
            return Err(Error::InvalidConfig(
                "samples_per_region must be at least 1".into(),
            ));
        }
        if self.max_epochs == 0 {
            return Err(Error::InvalidConfig("max_epochs must be at least 1".into()));
        }
        if let Some(t) = self.width_threshold {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "width_threshold must be finite and >= 0, got {t}"
                )));
            }
        }
        if let Some(pp) = &self.pre_partition {
            if pp.region_count == 0 {
                return Err(Error::InvalidConfig(
                    "region_count must be at least 1".into(),
                ));
            }
            if pp.keep_count == 0 || pp.keep_count > pp.region_count {
                return Err(Error::InvalidConfig(format!(
                    "keep_count must be in 1..={}, got {}",
                    pp.region_count, pp.keep_count
                )));
            }
        }
        Ok(())
    }

    /// The absolute stopping width for a run starting from `space`.
    pub fn resolved_width_threshold(&self, space: &SearchSpace) -> f64 {
        self.width_threshold
            .unwrap_or(DEFAULT_WIDTH_THRESHOLD_RATIO * space.max_width())
    }
}

/// Mutable run state: the shrinking space plus bookkeeping.
#[derive(Debug, Clone)]
pub struct MostState {
    initial: SearchSpace,
    current: SearchSpace,
    epoch: usize,
    trace: Trace,
    started: Instant,
}

impl MostState {
    pub fn new(space: SearchSpace) -> Self {
        Self {
            initial: space.clone(),
            current: space,
            epoch: 0,
            trace: Trace::new(),
            started: Instant::now(),
        }
    }

    pub fn initial(&self) -> &SearchSpace {
        &self.initial
    }

    pub fn current(&self) -> &SearchSpace {
        &self.current
    }

    /// Completed epochs.
    pub fn epoch(&self) -> usize {
        self.epoch
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MostResult {
    /// Midpoints of the final intervals.
    pub estimate: Vec<f64>,
    /// Objective value at the estimate.
    pub final_value: f64,
    pub epochs_run: usize,
    pub trace: Trace,
}

/// Unnormalized Monte Carlo sum of `objective` over the box `regions`:
/// `samples` points, each coordinate drawn uniformly from its region, values
/// summed without dividing by the count. Every call draws fresh samples.
///
/// Returns an error naming the offending point if the objective produces a
/// non-finite value.
pub fn mc_sum(
    objective: &dyn Objective,
    regions: &[Interval],
    samples: usize,
    rng: &mut RandomSource,
) -> Result<f64> {
    if objective.dim() != regions.len() {
        return Err(Error::DimensionMismatch {
            expected: objective.dim(),
            actual: regions.len(),
        });
    }
    let mut point = vec![0.0; regions.len()];
    let mut sum = 0.0;
    for _ in 0..samples {
        for (slot, region) in point.iter_mut().zip(regions) {
            *slot = rng.sample_uniform(*region);
        }
        sum += eval_checked(objective, &point)?;
    }
    Ok(sum)
}

/// Paired Monte Carlo sums over the two halves of variable `j`.
///
/// Per sample: every variable except `j` contributes one shared draw from
/// its interval in `regions` to *both* points, then `j` draws once from
/// `lower` and once from `upper`. Because the non-split coordinates are
/// identical across the pair, their contribution cancels in the comparison
/// (exactly so for additively separable objectives) and the half-choice is
/// driven by the variable under test alone.
fn paired_half_sums(
    objective: &dyn Objective,
    regions: &[Interval],
    j: usize,
    lower: Interval,
    upper: Interval,
    samples: usize,
    rng: &mut RandomSource,
) -> Result<(f64, f64)> {
    let mut point_lower = vec![0.0; regions.len()];
    let mut point_upper = vec![0.0; regions.len()];
    let mut sum_lower = 0.0;
    let mut sum_upper = 0.0;
    for _ in 0..samples {
        for (k, region) in regions.iter().enumerate() {
            if k == j {
                continue;
            }
            let shared = rng.sample_uniform(*region);
            point_lower[k] = shared;
            point_upper[k] = shared;
        }
        point_lower[j] = rng.sample_uniform(lower);
        point_upper[j] = rng.sample_uniform(upper);
        sum_lower += eval_checked(objective, &point_lower)?;
        sum_upper += eval_checked(objective, &point_upper)?;
    }
    Ok((sum_lower, sum_upper))
}

/// Runs one epoch: a full sweep over the variables in index order.
///
/// For variable `j`, the two candidate boxes agree everywhere except slot
/// `j`, which holds the lower resp. upper half. Variables before `j` have
/// already been halved this epoch, so they contribute their updated
/// intervals; variables after `j` still hold their epoch-start intervals.
/// The two sums are paired per [`paired_half_sums`]. The half with the
/// smaller sampled sum is kept; ties keep the lower half.
/// Appends one trace record (epoch index, midpoint estimate, objective value
/// there, widths, elapsed seconds).
pub fn epoch(
    objective: &dyn Objective,
    state: &mut MostState,
    config: &MostConfig,
    rng: &mut RandomSource,
) -> Result<()> {
    config.validate()?;
    if objective.dim() != state.current.dim() {
        return Err(Error::DimensionMismatch {
            expected: objective.dim(),
            actual: state.current.dim(),
        });
    }

    let mut regions = state.current.intervals().to_vec();
    for j in 0..regions.len() {
        let (lower, upper) = regions[j].split();
        let (sum_lower, sum_upper) = paired_half_sums(
            objective,
            &regions,
            j,
            lower,
            upper,
            config.samples_per_region,
            rng,
        )?;
        let keep = if sum_lower <= sum_upper { lower } else { upper };
        regions[j] = keep;
        state.current.set_interval(j, keep);
    }

    state.epoch += 1;
    let estimate = state.current.midpoints();
    let value = eval_checked(objective, &estimate)?;
    state.trace.push(TraceRecord {
        step: state.epoch,
        estimate,
        value,
        widths: state.current.widths(),
        seconds: state.started.elapsed().as_secs_f64(),
    });
    Ok(())
}

/// Runs epochs until the epoch budget is exhausted or every width has shrunk
/// to the threshold. The returned estimate is the midpoint vector of the
/// final intervals, which by construction lies inside the initial space.
pub fn optimize(
    objective: &dyn Objective,
    space: &SearchSpace,
    config: &MostConfig,
    rng: &mut RandomSource,
) -> Result<MostResult> {
    config.validate()?;
    if objective.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: objective.dim(),
            actual: space.dim(),
        });
    }
    let threshold = config.resolved_width_threshold(space);
    let mut state = MostState::new(space.clone());
    while state.epoch < config.max_epochs && state.current.max_width() > threshold {
        epoch(objective, &mut state, config, rng)?;
    }
    let estimate = state.current.midpoints();
    let final_value = eval_checked(objective, &estimate)?;
    Ok(MostResult {
        estimate,
        final_value,
        epochs_run: state.epoch,
        trace: state.trace,
    })
}

/// Screens each variable's interval for promising slices before bisection.
///
/// Each variable's interval is cut into `region_count` equal slices. A slice
/// is scored by the Monte Carlo sum with the variable under test drawn from
/// the slice and every other variable drawn from its full interval. Slices
/// are ranked per variable independently (smaller sum first; ties by slice
/// order), and the k-th candidate space combines the k-th ranked slice of
/// every variable. Returns `keep_count` candidates, best-ranked first.
pub fn pre_partition(
    objective: &dyn Objective,
    space: &SearchSpace,
    config: &MostConfig,
    rng: &mut RandomSource,
) -> Result<Vec<SearchSpace>> {
    config.validate()?;
    let pp = config.pre_partition.ok_or_else(|| {
        Error::InvalidConfig("pre_partition called without a pre-partition config".into())
    })?;
    if objective.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: objective.dim(),
            actual: space.dim(),
        });
    }

    let n = space.dim();
    let k = pp.region_count;
    let full = space.intervals().to_vec();
    let mut ranked: Vec<Vec<Interval>> = Vec::with_capacity(n);

    for j in 0..n {
        let iv = space.interval(j);
        let slice_width = iv.width() / k as f64;
        let mut scored: Vec<(f64, usize, Interval)> = Vec::with_capacity(k);
        for r in 0..k {
            // Clamp against rounding so the last slice ends exactly at hi.
            let lo = iv.clamp(iv.lo() + r as f64 * slice_width);
            let hi = if r + 1 == k {
                iv.hi()
            } else {
                iv.clamp(iv.lo() + (r + 1) as f64 * slice_width)
            };
            let slice = Interval::new(lo, hi)?;
            let mut regions = full.clone();
            regions[j] = slice;
            let score = mc_sum(objective, &regions, config.samples_per_region, rng)?;
            scored.push((score, r, slice));
        }
        scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        ranked.push(scored.into_iter().map(|(_, _, s)| s).collect());
    }

    (0..pp.keep_count)
        .map(|rank| SearchSpace::new((0..n).map(|j| ranked[j][rank]).collect()))
        .collect()
}

/// Pre-partitions, bisects each candidate independently, and returns the
/// result with the smallest final value (ties favor the better-ranked
/// candidate). Each candidate run gets its own random source forked from
/// `rng`, so the whole procedure is deterministic per seed.
pub fn optimize_pre_partitioned(
    objective: &dyn Objective,
    space: &SearchSpace,
    config: &MostConfig,
    rng: &mut RandomSource,
) -> Result<MostResult> {
    let candidates = pre_partition(objective, space, config, rng)?;
    let mut best: Option<MostResult> = None;
    for candidate in &candidates {
        let mut child = rng.fork();
        let result = optimize(objective, candidate, config, &mut child)?;
        if best
            .as_ref()
            .is_none_or(|b| result.final_value < b.final_value)
        {
            best = Some(result);
        }
    }
    // keep_count >= 1 is enforced by validation, so a best always exists.
    Ok(best.expect("pre_partition returned no candidates"))
}
