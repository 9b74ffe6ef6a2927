use crate::{Error, Precision, Real, Result};

/// An N-dimensional point being optimized. Every entry is finite and the
/// length is fixed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionVector<T> {
    values: Vec<T>,
}

impl<T: Real> DecisionVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("decision vector must have d >= 1".into()));
        }
        check_finite(&values)?;
        Ok(Self { values })
    }

    pub fn filled(dim: usize, value: T) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("decision vector must have d >= 1".into()));
        }
        if !value.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite fill value {value}")));
        }
        Ok(Self {
            values: vec![value; dim],
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn precision(&self) -> Precision {
        T::PRECISION
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.values
    }

    /// Mutable access for optimizers in this crate, which keep entries finite.
    #[inline]
    pub(crate) fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn get(&self, i: usize) -> Option<T> {
        self.values.get(i).copied()
    }

    pub fn set(&mut self, i: usize, value: T) -> Result<()> {
        let dim = self.dim();
        let slot = self
            .values
            .get_mut(i)
            .ok_or(Error::InvalidIndex { index: i, dim })?;
        if !value.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite coordinate {value}")));
        }
        *slot = value;
        Ok(())
    }

    pub fn into_vec(self) -> Vec<T> {
        self.values
    }
}

pub(crate) fn check_finite<T: Real>(x: &[T]) -> Result<()> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::InvalidInput(format!(
            "coordinate {i} is not finite ({})",
            x[i]
        ))),
        None => Ok(()),
    }
}

/// Box constraints on the decision vector.
///
/// Uniform bounds cost no per-dimension storage; per-dimension bounds hold two
/// extra `d`-length arrays in the vector's precision.
#[derive(Debug, Clone, PartialEq)]
pub enum BoxBounds<T> {
    Uniform { lo: T, hi: T },
    PerDimension { lo: Vec<T>, hi: Vec<T> },
}

impl<T: Real> BoxBounds<T> {
    pub fn uniform(lo: T, hi: T) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidBounds(format!("non-finite bounds [{lo}, {hi}]")));
        }
        if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
            return Err(Error::InvalidBounds(format!(
                "zero-volume bounds: lo {lo} must be below hi {hi}"
            )));
        }
        Ok(BoxBounds::Uniform { lo, hi })
    }

    pub fn per_dimension(lo: Vec<T>, hi: Vec<T>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidBounds(format!(
                "per-dimension bounds need equal non-zero lengths, got {} and {}",
                lo.len(),
                hi.len()
            )));
        }
        for (i, (&l, &h)) in lo.iter().zip(&hi).enumerate() {
            if !l.is_finite() || !h.is_finite() || l.partial_cmp(&h) != Some(std::cmp::Ordering::Less) {
                return Err(Error::InvalidBounds(format!(
                    "dimension {i}: need finite lo < hi, got [{l}, {h}]"
                )));
            }
        }
        Ok(BoxBounds::PerDimension { lo, hi })
    }

    /// Dimension the bounds are tied to, `None` for uniform bounds.
    pub fn dim(&self) -> Option<usize> {
        match self {
            BoxBounds::Uniform { .. } => None,
            BoxBounds::PerDimension { lo, .. } => Some(lo.len()),
        }
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self.dim() {
            Some(d) if d != dim => Err(Error::InvalidBounds(format!(
                "bounds have dimension {d}, objective has {dim}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, BoxBounds::Uniform { .. })
    }

    /// Bounds of coordinate `i`.
    #[inline]
    pub fn get(&self, i: usize) -> (T, T) {
        match self {
            BoxBounds::Uniform { lo, hi } => (*lo, *hi),
            BoxBounds::PerDimension { lo, hi } => (lo[i], hi[i]),
        }
    }

    #[inline]
    pub fn clamp(&self, i: usize, v: T) -> T {
        let (lo, hi) = self.get(i);
        if v < lo {
            lo
        } else if v > hi {
            hi
        } else {
            v
        }
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.iter().enumerate().all(|(i, &v)| {
            let (lo, hi) = self.get(i);
            lo <= v && v <= hi
        })
    }

    /// Number of `d`-length arrays an optimizer holds with these bounds,
    /// counting the decision vector itself.
    pub fn array_count(&self) -> usize {
        if self.is_uniform() {
            1
        } else {
            3
        }
    }
}
