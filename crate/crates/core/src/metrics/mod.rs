//! Resource instrumentation and empirical complexity fits.

pub mod alloc;
mod fit;
mod timer;

pub use alloc::{track_peak, MemoryReport};
pub use fit::{fit_loglog, ComplexityFit};
pub use timer::{median, Stopwatch, StopwatchRecord};

use crate::{Error, Precision, Result};

/// Bytes needed to store `dim` decision variables at `precision`.
pub fn theoretical_memory(dim: usize, precision: Precision) -> Result<u64> {
    if dim == 0 {
        return Err(Error::InvalidInput("dimension must be >= 1".into()));
    }
    Ok(dim as u64 * precision.bytes())
}

/// Bytes rounded to hundredths of a kilobyte (1 KB = 1000 bytes), the
/// resolution memory tables are usually quoted at.
pub fn centi_kb(bytes: u64) -> u64 {
    (bytes + 5) / 10
}
