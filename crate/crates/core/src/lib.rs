//! Memory-lean large-scale derivative-free optimization.
//!
//! The crate provides:
//!
//! * [`objective`]: the Griewank benchmark with full and O(1)-per-coordinate
//!   incremental evaluation, a shifted sphere smoke test, and exact
//!   function-evaluation accounting.
//! * [`abo`]: cyclic coordinate line sampling with geometrically shrinking
//!   brackets. It keeps no auxiliary per-dimension storage beyond the decision
//!   vector (and the bounds, when they differ per dimension).
//! * [`nelder_mead`]: a multi-start downhill simplex baseline whose
//!   `(d + 1) x d` vertex store is the quadratic-memory comparison point.
//! * [`metrics`]: in-process byte accounting, wall clocks and log-log
//!   complexity fits.
//! * [`bench`]: the benchmark harness behind the `sweepopt-bench` binary.

pub mod abo;
pub mod bench;
mod error;
pub mod metrics;
pub mod nelder_mead;
pub mod objective;
mod real;
mod result;

pub use error::{Error, Result};
pub use real::{Precision, Real};
pub use result::{BestPoint, OptimizationResult, Termination, DIGEST_LEN};

#[cfg(feature = "global-tracker")]
#[global_allocator]
static GLOBAL: metrics::alloc::TrackingAllocator = metrics::alloc::TrackingAllocator::new();
