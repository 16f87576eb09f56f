//! Derivative-free and gradient-based optimizers with a shared benchmark
//! harness.
//!
//! The centerpiece is a Monte Carlo bisection search ([`most`]): each epoch
//! splits every coordinate interval at its midpoint, compares the two halves
//! by sampled objective sums, and keeps the better half, shrinking the box
//! geometrically without ever evaluating a derivative. An optional
//! pre-partition screen slices each axis first so deceptive objectives with
//! narrow wells still get found.
//!
//! Around it sit the pieces needed to measure it fairly:
//!
//! - [`benchfns`] — classic test functions (sphere, Schwefel, a cubic,
//!   a deceptive piecewise well) with their known optima.
//! - [`gradopt`] — first-order baselines (SGD, momentum, NAG, AdaGrad,
//!   RMSprop, AdaDelta, Adam) behind one stepping interface.
//! - [`ga`] — a real-coded genetic algorithm baseline (blend crossover,
//!   Gaussian mutation, elitism).
//! - [`xornet`] — a fixed 2-2-1 network on the XOR truth table, the
//!   smallest interesting non-convex training task; usable both as a
//!   black-box objective and through its analytic gradient.
//! - [`harness`] — seed-panel experiment runner producing per-seed reports
//!   and side-by-side comparisons.
//!
//! Everything randomized draws from an explicitly seeded [`RandomSource`],
//! so every result in every report is reproducible from its seed.
//!
//! ```
//! use most_core::most::{self, MostConfig};
//! use most_core::{FnObjective, RandomSource, SearchSpace};
//!
//! # fn main() -> most_core::Result<()> {
//! let objective = FnObjective::new(2, |x: &[f64]| x.iter().map(|v| v * v).sum());
//! let space = SearchSpace::uniform(2, -1.0, 1.0)?;
//! let mut rng = RandomSource::new(1);
//! let result = most::optimize(&objective, &space, &MostConfig::default(), &mut rng)?;
//! assert!(result.estimate.iter().all(|x| x.abs() < 1e-3));
//! # Ok(())
//! # }
//! ```

pub mod benchfns;
mod error;
pub mod ga;
pub mod gradopt;
pub mod harness;
pub mod most;
mod objective;
mod rng;
mod space;
mod trace;
pub mod xornet;

pub use error::{Error, Result};
pub use objective::{FnObjective, Objective};
pub use rng::RandomSource;
pub use space::{Interval, SearchSpace};
pub use trace::{Trace, TraceRecord};
