//! Benchmark objectives and function-evaluation accounting.

mod griewank;
mod sphere;
mod summation;
mod vector;

pub use griewank::{
    griewank_value, Griewank, GriewankState, DEFAULT_REFRESH_PERIOD, DEFAULT_ZERO_GUARD,
};
pub use sphere::{sphere_shifted, ShiftedSphere};
pub use summation::{CompensatedSum, ScaledProduct};
pub use vector::{BoxBounds, DecisionVector};

pub(crate) use vector::check_finite;

use crate::{Error, Real, Result};

/// Number of objective invocations, split by evaluation path.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct EvalCounter {
    pub full_evals: u64,
    pub incremental_evals: u64,
}

impl EvalCounter {
    pub fn total(&self) -> u64 {
        self.full_evals + self.incremental_evals
    }

    /// Counts accumulated since `earlier`.
    pub fn since(&self, earlier: EvalCounter) -> EvalCounter {
        EvalCounter {
            full_evals: self.full_evals - earlier.full_evals,
            incremental_evals: self.incremental_evals - earlier.incremental_evals,
        }
    }
}

impl std::ops::Add for EvalCounter {
    type Output = EvalCounter;

    fn add(self, rhs: EvalCounter) -> EvalCounter {
        EvalCounter {
            full_evals: self.full_evals + rhs.full_evals,
            incremental_evals: self.incremental_evals + rhs.incremental_evals,
        }
    }
}

/// A minimization objective over `d`-dimensional points stored in `T`.
///
/// Objectives that can re-evaluate after a single-coordinate change in O(1)
/// report it through [`Objective::supports_incremental`]. The incremental
/// protocol is: [`Objective::begin_incremental`] once with the starting
/// point (one full evaluation), then any number of
/// [`Objective::update_coordinate`] calls, each of which writes the new value
/// into the caller's vector and returns the updated objective.
pub trait Objective<T: Real> {
    fn dim(&self) -> usize;

    fn evaluate(&mut self, x: &[T]) -> Result<f64>;

    fn counter(&self) -> EvalCounter;

    fn supports_incremental(&self) -> bool {
        false
    }

    fn begin_incremental(&mut self, _x: &[T]) -> Result<f64> {
        Err(Error::IncrementalUnsupported)
    }

    fn update_coordinate(&mut self, _x: &mut [T], _i: usize, _value: T) -> Result<f64> {
        Err(Error::IncrementalUnsupported)
    }
}

/// Adapts a closure over `f64` coordinates into a counted [`Objective`].
pub struct FnObjective<F> {
    dim: usize,
    f: F,
    counter: EvalCounter,
}

impl<F> FnObjective<F>
where
    F: FnMut(&[f64]) -> f64,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self {
            dim,
            f,
            counter: EvalCounter::default(),
        }
    }
}

impl<F> Objective<f64> for FnObjective<F>
where
    F: FnMut(&[f64]) -> f64,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        check_len(x, self.dim)?;
        check_finite(x)?;
        self.counter.full_evals += 1;
        Ok((self.f)(x))
    }

    fn counter(&self) -> EvalCounter {
        self.counter
    }
}

pub(crate) fn check_len<T>(x: &[T], dim: usize) -> Result<()> {
    if x.len() != dim {
        return Err(Error::InvalidInput(format!(
            "point has {} coordinates, objective expects {dim}",
            x.len()
        )));
    }
    Ok(())
}
