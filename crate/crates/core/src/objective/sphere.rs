use super::{check_finite, check_len, CompensatedSum, EvalCounter, Objective};
use crate::{Error, Real, Result};

/// `sum_i (x_i - center)^2`, uncounted.
pub fn sphere_shifted<T: Real>(x: &[T], center: f64) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::InvalidInput("empty point".into()));
    }
    check_finite(x)?;
    let s: CompensatedSum = x
        .iter()
        .map(|&v| {
            let t = v.to_f64() - center;
            t * t
        })
        .collect();
    Ok(s.value())
}

/// Convex separable smoke-test objective with its minimum at `(center, ..., center)`.
#[derive(Debug, Clone)]
pub struct ShiftedSphere {
    dim: usize,
    center: f64,
    counter: EvalCounter,
}

impl ShiftedSphere {
    pub fn new(dim: usize, center: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be >= 1".into()));
        }
        if !center.is_finite() {
            return Err(Error::InvalidInput("non-finite center".into()));
        }
        Ok(Self {
            dim,
            center,
            counter: EvalCounter::default(),
        })
    }
}

impl<T: Real> Objective<T> for ShiftedSphere {
    fn dim(&self) -> usize {
        self.dim
    }

    fn evaluate(&mut self, x: &[T]) -> Result<f64> {
        check_len(x, self.dim)?;
        let v = sphere_shifted(x, self.center)?;
        self.counter.full_evals += 1;
        Ok(v)
    }

    fn counter(&self) -> EvalCounter {
        self.counter
    }
}
