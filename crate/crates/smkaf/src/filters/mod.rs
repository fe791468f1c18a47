//! Online adaptive filters behind one step interface.
//!
//! Each filter consumes `(x, d)` pairs one at a time and reports the
//! prediction made *before* seeing `d`, the a-priori error, the step size it
//! applied and whether it updated. The set-membership algorithms update only
//! when the error magnitude exceeds the bound `gamma`; the baselines update
//! unconditionally.

mod kernel;
mod linear;
pub mod ops;

pub use kernel::{Admission, CsmKnlms, Klms, Knlms, NlrSmKnlms, SmKnlmsParams};
pub use linear::{LmsFilter, NlmsFilter, SmNlmsFilter};

use crate::Result;

/// Result of one filter step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    /// Filter output for `x` before the update.
    pub prediction: f64,
    /// A-priori error `d - prediction`.
    pub error: f64,
    /// Step size applied; 0 when no update occurred.
    pub step_size: f64,
    /// Whether the coefficients (or the dictionary) changed.
    pub updated: bool,
}

/// Set-membership step size: `1 - gamma/|e|` when `|e| > gamma`, else 0.
///
/// `gamma = 0` with `e != 0` gives 1, the normalized-LMS limit; the bound is
/// vacuous there.
pub fn step_size(e: f64, gamma: f64) -> f64 {
    if e.abs() > gamma {
        1.0 - gamma / e.abs()
    } else {
        0.0
    }
}

/// Common surface of every adaptive filter in this crate.
pub trait AdaptiveFilter {
    /// Consume one training pair, adapting in place.
    fn step(&mut self, x: &[f64], d: f64) -> Result<StepOutcome>;

    /// Output for `x` without adapting (test-set evaluation).
    fn predict(&self, x: &[f64]) -> Result<f64>;

    /// Current model order: stored centers for kernel machines, tap count
    /// for the linear filters.
    fn model_size(&self) -> usize;

    /// Number of steps that performed an update.
    fn update_count(&self) -> u64;

    /// Number of steps consumed.
    fn iteration(&self) -> u64;
}
