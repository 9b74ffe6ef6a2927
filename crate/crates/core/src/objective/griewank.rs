//! Griewank function with full and incremental evaluation.
//!
//! `f(x) = sum_i x_i^2 / 4000 - prod_i cos(x_i / sqrt(i)) + 1` with 1-based
//! `i`; storage is 0-based so coordinate `i` uses `sqrt(i + 1)`.

use super::{check_finite, check_len, CompensatedSum, EvalCounter, Objective, ScaledProduct};
use crate::{Error, Real, Result};

/// Updates between forced full recomputations of the incremental state.
pub const DEFAULT_REFRESH_PERIOD: u64 = 1 << 20;
/// Cosines below this magnitude are never divided out of the running product.
pub const DEFAULT_ZERO_GUARD: f64 = 1e-8;

const MAX_ZERO_GUARD: f64 = 1e-4;

#[inline]
fn sum_term(v: f64) -> f64 {
    v * v / 4000.0
}

#[inline]
fn cos_term(v: f64, i: usize) -> f64 {
    (v / ((i + 1) as f64).sqrt()).cos()
}

#[inline]
fn combine(sum: &CompensatedSum, product: &ScaledProduct) -> f64 {
    sum.value().max(0.0) - product.value() + 1.0
}

fn full_sum<T: Real>(x: &[T]) -> CompensatedSum {
    x.iter().map(|v| sum_term(v.to_f64())).collect()
}

/// Griewank value of `x`, uncounted.
pub fn griewank_value<T: Real>(x: &[T]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::InvalidInput("empty point".into()));
    }
    check_finite(x)?;
    let sum = full_sum(x);
    let product: ScaledProduct = x
        .iter()
        .enumerate()
        .map(|(i, v)| cos_term(v.to_f64(), i))
        .collect();
    Ok(combine(&sum, &product))
}

/// Cached partial terms that let a single-coordinate change be re-evaluated
/// in O(1) amortized time.
///
/// The running product is maintained by dividing out the old cosine and
/// multiplying in the new one. It is rebuilt from the cosine cache whenever
/// the cosine being divided out is smaller than `zero_guard`, and at least
/// every `refresh_period` updates to bound multiplicative drift.
#[derive(Debug, Clone)]
pub struct GriewankState {
    sum: CompensatedSum,
    cos_cache: Vec<f64>,
    product: ScaledProduct,
    value: f64,
    updates_since_refresh: u64,
    refresh_period: u64,
    zero_guard: f64,
    refreshes: u64,
}

impl GriewankState {
    pub fn new<T: Real>(x: &[T], refresh_period: u64, zero_guard: f64) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidInput("empty point".into()));
        }
        if refresh_period == 0 {
            return Err(Error::InvalidConfig("refresh_period must be >= 1".into()));
        }
        if !(zero_guard > 0.0 && zero_guard <= MAX_ZERO_GUARD) {
            return Err(Error::InvalidConfig(format!(
                "zero_guard must lie in (0, {MAX_ZERO_GUARD:e}], got {zero_guard:e}"
            )));
        }
        check_finite(x)?;
        let mut state = Self {
            sum: CompensatedSum::new(),
            cos_cache: x
                .iter()
                .enumerate()
                .map(|(i, v)| cos_term(v.to_f64(), i))
                .collect(),
            product: ScaledProduct::one(),
            value: 0.0,
            updates_since_refresh: 0,
            refresh_period,
            zero_guard,
            refreshes: 0,
        };
        state.rebuild(x);
        Ok(state)
    }

    fn rebuild<T: Real>(&mut self, x: &[T]) {
        self.sum = full_sum(x);
        self.product = self.cos_cache.iter().copied().collect();
        self.value = combine(&self.sum, &self.product);
        self.updates_since_refresh = 0;
    }

    /// Recomputes the sum from `x` and the product from the cosine cache.
    pub fn refresh<T: Real>(&mut self, x: &[T]) -> Result<()> {
        check_len(x, self.cos_cache.len())?;
        self.rebuild(x);
        self.refreshes += 1;
        Ok(())
    }

    /// Sets `x[i] = value` and returns the updated objective.
    pub fn update<T: Real>(&mut self, x: &mut [T], i: usize, value: T) -> Result<f64> {
        let dim = self.cos_cache.len();
        check_len(x, dim)?;
        if i >= dim {
            return Err(Error::InvalidIndex { index: i, dim });
        }
        if !value.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite coordinate {value}")));
        }
        let old = x[i];
        if old.to_f64().to_bits() == value.to_f64().to_bits() {
            return Ok(self.value);
        }
        let (old, new) = (old.to_f64(), value.to_f64());
        x[i] = value;

        self.sum.add(-sum_term(old));
        self.sum.add(sum_term(new));

        let old_cos = self.cos_cache[i];
        let new_cos = cos_term(new, i);
        self.cos_cache[i] = new_cos;
        self.updates_since_refresh += 1;

        if old_cos.abs() < self.zero_guard || self.updates_since_refresh >= self.refresh_period {
            self.rebuild(x);
            self.refreshes += 1;
        } else {
            if old_cos != new_cos {
                self.product.div(old_cos);
                self.product.mul(new_cos);
            }
            self.value = combine(&self.sum, &self.product);
        }
        Ok(self.value)
    }

    #[inline]
    pub fn objective(&self) -> f64 {
        self.value
    }

    pub fn sum_term(&self) -> f64 {
        self.sum.value().max(0.0)
    }

    pub fn product(&self) -> f64 {
        self.product.value()
    }

    pub fn cos_cache(&self) -> &[f64] {
        &self.cos_cache
    }

    pub fn updates_since_refresh(&self) -> u64 {
        self.updates_since_refresh
    }

    pub fn refresh_period(&self) -> u64 {
        self.refresh_period
    }

    pub fn zero_guard(&self) -> f64 {
        self.zero_guard
    }

    /// Full rebuilds performed after construction.
    pub fn refresh_count(&self) -> u64 {
        self.refreshes
    }
}

/// Counted Griewank objective.
///
/// Created with [`Griewank::new`] it only evaluates in full; with
/// [`Griewank::incremental`] it also serves single-coordinate updates
/// through a [`GriewankState`].
#[derive(Debug, Clone)]
pub struct Griewank {
    dim: usize,
    incremental: bool,
    refresh_period: u64,
    zero_guard: f64,
    state: Option<GriewankState>,
    counter: EvalCounter,
}

impl Griewank {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be >= 1".into()));
        }
        Ok(Self {
            dim,
            incremental: false,
            refresh_period: DEFAULT_REFRESH_PERIOD,
            zero_guard: DEFAULT_ZERO_GUARD,
            state: None,
            counter: EvalCounter::default(),
        })
    }

    pub fn incremental(dim: usize) -> Result<Self> {
        let mut g = Self::new(dim)?;
        g.incremental = true;
        Ok(g)
    }

    pub fn with_refresh(mut self, refresh_period: u64, zero_guard: f64) -> Self {
        self.refresh_period = refresh_period;
        self.zero_guard = zero_guard;
        self
    }

    pub fn state(&self) -> Option<&GriewankState> {
        self.state.as_ref()
    }

    /// Drops the incremental state, releasing its cosine cache.
    pub fn release_state(&mut self) {
        self.state = None;
    }
}

impl<T: Real> Objective<T> for Griewank {
    fn dim(&self) -> usize {
        self.dim
    }

    fn evaluate(&mut self, x: &[T]) -> Result<f64> {
        check_len(x, self.dim)?;
        let v = griewank_value(x)?;
        self.counter.full_evals += 1;
        Ok(v)
    }

    fn counter(&self) -> EvalCounter {
        self.counter
    }

    fn supports_incremental(&self) -> bool {
        self.incremental
    }

    fn begin_incremental(&mut self, x: &[T]) -> Result<f64> {
        if !self.incremental {
            return Err(Error::IncrementalUnsupported);
        }
        check_len(x, self.dim)?;
        let state = GriewankState::new(x, self.refresh_period, self.zero_guard)?;
        let v = state.objective();
        self.state = Some(state);
        self.counter.full_evals += 1;
        Ok(v)
    }

    fn update_coordinate(&mut self, x: &mut [T], i: usize, value: T) -> Result<f64> {
        let state = self.state.as_mut().ok_or_else(|| {
            Error::InvalidInput("update_coordinate called before begin_incremental".into())
        })?;
        let v = state.update(x, i, value)?;
        self.counter.incremental_evals += 1;
        Ok(v)
    }
}
