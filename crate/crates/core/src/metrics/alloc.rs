//! Byte-accounting global allocator and scoped peak tracking.
//!
//! [`TrackingAllocator`] wraps the system allocator and keeps, per thread,
//! the net live bytes, the peak of that figure, and the cumulative bytes
//! acquired. [`track_peak`] reads those counters around a closure, so a
//! measured scope must run on a single thread. Accounting can be switched off
//! at runtime, in which case the allocator only forwards calls.

use std::alloc::{GlobalAlloc, Layout, System};
use std::cell::Cell;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use crate::{Error, Precision, Result};

use super::theoretical_memory;

/// Environment variable read by [`init_from_env`]; `off`, `0` or `false`
/// disable byte accounting.
pub const TRACKING_ENV: &str = "SWEEPOPT_TRACK_MEMORY";

static INSTALLED: AtomicBool = AtomicBool::new(false);
static ENABLED: AtomicBool = AtomicBool::new(true);
static TOTAL_ACQUIRED: AtomicU64 = AtomicU64::new(0);

thread_local! {
    static LIVE: Cell<i64> = const { Cell::new(0) };
    static PEAK: Cell<i64> = const { Cell::new(0) };
    static ACQUIRED: Cell<u64> = const { Cell::new(0) };
}

pub struct TrackingAllocator {
    inner: System,
}

impl TrackingAllocator {
    pub const fn new() -> Self {
        Self { inner: System }
    }
}

impl Default for TrackingAllocator {
    fn default() -> Self {
        Self::new()
    }
}

#[inline]
fn on_acquire(size: usize) {
    if !INSTALLED.load(Ordering::Relaxed) {
        INSTALLED.store(true, Ordering::Relaxed);
    }
    if !ENABLED.load(Ordering::Relaxed) {
        return;
    }
    TOTAL_ACQUIRED.fetch_add(size as u64, Ordering::Relaxed);
    let _ = ACQUIRED.try_with(|a| a.set(a.get() + size as u64));
    let _ = LIVE.try_with(|live| {
        let now = live.get() + size as i64;
        live.set(now);
        let _ = PEAK.try_with(|p| {
            if now > p.get() {
                p.set(now);
            }
        });
    });
}

#[inline]
fn on_release(size: usize) {
    if !ENABLED.load(Ordering::Relaxed) {
        return;
    }
    let _ = LIVE.try_with(|live| live.set(live.get() - size as i64));
}

unsafe impl GlobalAlloc for TrackingAllocator {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = self.inner.alloc(layout);
        if !p.is_null() {
            on_acquire(layout.size());
        }
        p
    }

    unsafe fn alloc_zeroed(&self, layout: Layout) -> *mut u8 {
        let p = self.inner.alloc_zeroed(layout);
        if !p.is_null() {
            on_acquire(layout.size());
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        self.inner.dealloc(ptr, layout);
        on_release(layout.size());
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let p = self.inner.realloc(ptr, layout, new_size);
        if !p.is_null() {
            on_release(layout.size());
            on_acquire(new_size);
        }
        p
    }
}

/// Whether a [`TrackingAllocator`] is serving this process's allocations.
pub fn hooks_installed() -> bool {
    if INSTALLED.load(Ordering::Relaxed) {
        return true;
    }
    // Any allocation routed through the tracker flips the flag.
    drop(std::hint::black_box(Box::new(0u8)));
    INSTALLED.load(Ordering::Relaxed)
}

pub fn tracking_enabled() -> bool {
    ENABLED.load(Ordering::Relaxed)
}

pub fn set_tracking_enabled(on: bool) {
    ENABLED.store(on, Ordering::Relaxed);
}

/// Applies [`TRACKING_ENV`] and returns the resulting state.
pub fn init_from_env() -> bool {
    if let Ok(v) = std::env::var(TRACKING_ENV) {
        let off = matches!(v.trim().to_ascii_lowercase().as_str(), "off" | "0" | "false");
        set_tracking_enabled(!off);
    }
    tracking_enabled()
}

/// Bytes acquired process-wide since start-up while accounting was enabled.
pub fn total_acquired_bytes() -> u64 {
    TOTAL_ACQUIRED.load(Ordering::Relaxed)
}

fn check_available() -> Result<()> {
    if !hooks_installed() {
        return Err(Error::TrackingUnavailable);
    }
    if !tracking_enabled() {
        return Err(Error::TrackingDisabled);
    }
    Ok(())
}

/// Result of one measured scope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryReport {
    pub scope_label: String,
    /// Precision bytes times dimension, zero until [`MemoryReport::with_theory`].
    pub theoretical_bytes: u64,
    /// Peak net bytes held by the scope above its starting level.
    pub measured_peak_bytes: u64,
    /// `measured_peak_bytes - theoretical_bytes`.
    pub overhead_bytes: i64,
    /// Total bytes acquired inside the scope, released or not.
    pub acquired_bytes: u64,
}

impl MemoryReport {
    pub fn with_theory(mut self, dim: usize, precision: Precision) -> Result<Self> {
        self.theoretical_bytes = theoretical_memory(dim, precision)?;
        self.overhead_bytes = self.measured_peak_bytes as i64 - self.theoretical_bytes as i64;
        Ok(self)
    }

    pub fn peak_kb(&self) -> f64 {
        self.measured_peak_bytes as f64 / 1000.0
    }
}

/// Runs `f` and reports the peak dynamic memory it held on this thread.
///
/// Scopes nest: an inner scope's peak also counts toward every enclosing one.
pub fn track_peak<R>(label: &str, f: impl FnOnce() -> R) -> Result<(R, MemoryReport)> {
    check_available()?;
    let live0 = LIVE.with(Cell::get);
    let acquired0 = ACQUIRED.with(Cell::get);
    let outer_peak = PEAK.with(|p| p.replace(live0));

    let out = f();

    let peak = PEAK.with(Cell::get);
    let acquired = ACQUIRED.with(Cell::get) - acquired0;
    PEAK.with(|p| p.set(outer_peak.max(peak)));

    let measured = (peak - live0).max(0) as u64;
    let report = MemoryReport {
        scope_label: label.to_owned(),
        theoretical_bytes: 0,
        measured_peak_bytes: measured,
        overhead_bytes: measured as i64,
        acquired_bytes: acquired,
    };
    Ok((out, report))
}
