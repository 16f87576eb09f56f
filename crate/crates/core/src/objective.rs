//! The objective-function contract shared by all optimizers.

use crate::error::{Error, Result};

/// A deterministic, total, scalar function to minimize over a fixed number of
/// variables. Implementations must return the same value for the same point;
/// randomness lives in the optimizers, never in the objective. Non-finite
/// return values are treated as a failure by every driver (the run aborts
/// with the offending point), so implementations need not guard against them.
pub trait Objective {
    fn dim(&self) -> usize;
    fn eval(&self, point: &[f64]) -> f64;
}

impl<T: Objective + ?Sized> Objective for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, point: &[f64]) -> f64 {
        (**self).eval(point)
    }
}

/// Adapter turning a closure into an [`Objective`].
pub struct FnObjective<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64> FnObjective<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64]) -> f64> Objective for FnObjective<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, point: &[f64]) -> f64 {
        (self.f)(point)
    }
}

/// Evaluates and rejects non-finite values with the offending point attached.
pub(crate) fn eval_checked(objective: &dyn Objective, point: &[f64]) -> Result<f64> {
    let value = objective.eval(point);
    if !value.is_finite() {
        return Err(Error::NonFiniteObjective {
            value,
            point: point.to_vec(),
        });
    }
    Ok(value)
}
