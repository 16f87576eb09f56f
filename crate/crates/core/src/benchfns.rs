//! Benchmark objectives with known optima.

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::space::SearchSpace;

/// `2x^3 - 2.5x^2 + 0.5x + 0.5` on `[0, 1]`.
///
/// Its derivative `6x^2 - 5x + 0.5` has its larger root at `(5 + sqrt(13))/12
/// ≈ 0.7171293`, the interior minimizer (see [`cubic_minimizer`]).
pub fn cubic1d(x: f64) -> f64 {
    2.0 * x.powi(3) - 2.5 * x.powi(2) + 0.5 * x + 0.5
}

/// Location of the cubic's interior minimum on `[0, 1]`.
pub fn cubic_minimizer() -> f64 {
    (5.0 + 13f64.sqrt()) / 12.0
}

/// Schwefel function: `-sum x_i * sin(sqrt(|x_i|))`, usually on `[-500, 500]^n`.
///
/// Separable but highly multimodal; its global minimum sits near the bound at
/// [`SCHWEFEL_MINIMIZER`] per coordinate, far from the second-best basin.
pub fn schwefel(x: &[f64]) -> f64 {
    -x.iter().map(|&v| v * v.abs().sqrt().sin()).sum::<f64>()
}

/// Per-coordinate minimizer of [`schwefel`] on `[-500, 500]` (to ~1e-6; the
/// tests re-derive it by grid scan).
pub const SCHWEFEL_MINIMIZER: f64 = 420.968746;

/// Schwefel's per-coordinate minimum value, ~ -418.9829.
pub const SCHWEFEL_MIN_VALUE_1D: f64 = -418.9828872724337;

/// Sphere function: `sum x_i^2`, minimum 0 at the origin.
pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|&v| v * v).sum()
}

/// Negated sphere, `-sum x_i^2`. Kept only for documentation of the sign
/// convention: this variant's minimum on a bounded box is at the corners,
/// not the origin, so it is not a sensible minimization target. Select it
/// explicitly by the name `sphere-as-printed`.
pub fn sphere_as_printed(x: &[f64]) -> f64 {
    -sphere(x)
}

/// Lower edge of the deceptive well of [`fig_a_deceptive`].
pub const FIG_A_WELL_LO: f64 = 0.10;
/// Upper edge of the deceptive well.
pub const FIG_A_WELL_HI: f64 = 0.14;
/// Objective value inside the well (the global minimum).
pub const FIG_A_WELL_VALUE: f64 = -3.0;
/// Objective value on the broad shelf `[0.5, 1]`.
pub const FIG_A_SHELF_VALUE: f64 = -0.5;

/// A 1-D trap for integral-guided search on `[0, 1]`: a deep, narrow well
/// (`-3` on `[0.10, 0.14]`) against a broad, shallow shelf (`-0.5` on
/// `[0.5, 1]`), zero elsewhere. The shelf's integral (-0.25) beats the
/// well's half (-0.12), so plain bisection walks away from the global
/// minimum — the motivating case for pre-partitioning.
pub fn fig_a_deceptive(x: f64) -> f64 {
    if (FIG_A_WELL_LO..=FIG_A_WELL_HI).contains(&x) {
        FIG_A_WELL_VALUE
    } else if x >= 0.5 {
        FIG_A_SHELF_VALUE
    } else {
        0.0
    }
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

/// Identifier for a registered benchmark function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchId {
    Cubic,
    Schwefel,
    Sphere,
    SphereAsPrinted,
    FigA,
}

impl BenchId {
    pub fn all() -> &'static [BenchId] {
        &[
            BenchId::Cubic,
            BenchId::Schwefel,
            BenchId::Sphere,
            BenchId::SphereAsPrinted,
            BenchId::FigA,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            BenchId::Cubic => "cubic",
            BenchId::Schwefel => "schwefel",
            BenchId::Sphere => "sphere",
            BenchId::SphereAsPrinted => "sphere-as-printed",
            BenchId::FigA => "fig-a",
        }
    }

    pub fn from_name(name: &str) -> Option<BenchId> {
        BenchId::all().iter().copied().find(|id| id.name() == name)
    }

    /// 1-D functions are fixed; the separable families default to 5.
    pub fn default_dimension(&self) -> usize {
        match self {
            BenchId::Cubic | BenchId::FigA => 1,
            _ => 5,
        }
    }

    pub fn dimension_is_fixed(&self) -> bool {
        matches!(self, BenchId::Cubic | BenchId::FigA)
    }

    /// Per-variable default bounds `(lo, hi)`.
    pub fn default_bounds(&self) -> (f64, f64) {
        match self {
            BenchId::Cubic | BenchId::FigA => (0.0, 1.0),
            BenchId::Schwefel => (-500.0, 500.0),
            BenchId::Sphere | BenchId::SphereAsPrinted => (-1.0, 1.0),
        }
    }
}

/// A benchmark instance: a registered function at a concrete dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bench {
    id: BenchId,
    dim: usize,
}

impl Bench {
    pub fn new(id: BenchId, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig(format!(
                "{} needs at least one variable",
                id.name()
            )));
        }
        if id.dimension_is_fixed() && dim != 1 {
            return Err(Error::InvalidConfig(format!(
                "{} is one-dimensional, got dim {dim}",
                id.name()
            )));
        }
        Ok(Self { id, dim })
    }

    pub fn id(&self) -> BenchId {
        self.id
    }

    /// The default search space for this instance.
    pub fn default_space(&self) -> SearchSpace {
        let (lo, hi) = self.id.default_bounds();
        SearchSpace::uniform(self.dim, lo, hi).expect("registry bounds are valid")
    }

    /// Known optimum `(point, value)` within the default bounds. For the
    /// negated sphere the minimum is any corner of the box; one is returned.
    /// For the deceptive well any point of the well works; its center is
    /// returned.
    pub fn known_optimum(&self) -> (Vec<f64>, f64) {
        let n = self.dim;
        match self.id {
            BenchId::Cubic => {
                let x = cubic_minimizer();
                (vec![x], cubic1d(x))
            }
            BenchId::Schwefel => (
                vec![SCHWEFEL_MINIMIZER; n],
                SCHWEFEL_MIN_VALUE_1D * n as f64,
            ),
            BenchId::Sphere => (vec![0.0; n], 0.0),
            BenchId::SphereAsPrinted => (vec![1.0; n], -(n as f64)),
            BenchId::FigA => (vec![0.12], FIG_A_WELL_VALUE),
        }
    }
}

impl Objective for Bench {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, point: &[f64]) -> f64 {
        debug_assert_eq!(point.len(), self.dim);
        match self.id {
            BenchId::Cubic => cubic1d(point[0]),
            BenchId::Schwefel => schwefel(point),
            BenchId::Sphere => sphere(point),
            BenchId::SphereAsPrinted => sphere_as_printed(point),
            BenchId::FigA => fig_a_deceptive(point[0]),
        }
    }
}
