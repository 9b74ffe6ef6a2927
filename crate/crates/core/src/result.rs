use std::fmt;

use serde::{Deserialize, Serialize};

use crate::objective::DecisionVector;
use crate::Real;

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    BudgetExhausted,
    ToleranceMet,
    SweepLimit,
    /// Set by the benchmark harness when a simplex would not fit under the
    /// configured memory ceiling; optimizers never return it.
    MemoryRefused,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::BudgetExhausted => "budget_exhausted",
            Termination::ToleranceMet => "tolerance_met",
            Termination::SweepLimit => "sweep_limit",
            Termination::MemoryRefused => "memory_refused",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "budget_exhausted" => Termination::BudgetExhausted,
            "tolerance_met" => Termination::ToleranceMet,
            "sweep_limit" => Termination::SweepLimit,
            "memory_refused" => Termination::MemoryRefused,
            _ => return None,
        })
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const DIGEST_LEN: usize = 8;

/// The best point found, or only its first and last eight coordinates when
/// the dimension is above the configured digest threshold.
#[derive(Debug, Clone, PartialEq)]
pub enum BestPoint<T> {
    Full(DecisionVector<T>),
    Digest { dim: usize, head: Vec<T>, tail: Vec<T> },
}

impl<T: Real> BestPoint<T> {
    pub(crate) fn from_vector(x: DecisionVector<T>, digest_threshold: usize) -> Self {
        let dim = x.dim();
        if dim <= digest_threshold {
            return BestPoint::Full(x);
        }
        let s = x.as_slice();
        let n = DIGEST_LEN.min(dim);
        BestPoint::Digest {
            dim,
            head: s[..n].to_vec(),
            tail: s[dim - n..].to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            BestPoint::Full(x) => x.dim(),
            BestPoint::Digest { dim, .. } => *dim,
        }
    }

    pub fn as_full(&self) -> Option<&DecisionVector<T>> {
        match self {
            BestPoint::Full(x) => Some(x),
            BestPoint::Digest { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult<T> {
    pub best_f: f64,
    pub best_x: BestPoint<T>,
    /// Objective invocations, full and incremental.
    pub fe_used: u64,
    pub wall_seconds: f64,
    pub termination: Termination,
    /// Completed sweeps (coordinate search) or iterations (simplex search).
    pub iterations: u64,
}
