//! Instrumented arithmetic counters for the kernel filters.
//!
//! The counters tally work at per-center-touch granularity: every stored
//! center visited in a pass costs one fused kernel evaluation (one add and
//! one multiply per input component) plus one accumulate (one add, one
//! multiply). Scalar work (error, step scaling, the analytic Gaussian
//! self-term) is counted individually. Each touch can misstate the exact
//! flop count by O(1), so totals carry an uncertainty of the order of the
//! dictionary size — which is the granularity the per-iteration cost models
//! in [`crate::analysis::complexity_count`] are validated at.
//!
//! KLMS visits the dictionary once per iteration (output only; its update
//! touches just the new coefficient). The regression-form KNLMS visits it
//! twice, matching its published two-phase structure: one kernel vector for
//! the output, one extended kernel vector for the normalized update.

use crate::Result;

use super::{AdaptiveFilter, Klms, Knlms, StepOutcome};

/// Accumulated addition and multiplication counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub adds: u64,
    pub mults: u64,
}

impl OpCounts {
    fn center_touch(&mut self, input_dim: usize) {
        // Kernel evaluation fused per component, plus the accumulate that
        // consumes the value (output dot, norm or coefficient axpy).
        self.adds += input_dim as u64 + 1;
        self.mults += input_dim as u64 + 1;
    }

    fn scalar_add(&mut self) {
        self.adds += 1;
    }

    fn scalar_mult(&mut self) {
        self.mults += 1;
    }
}

/// Step a KLMS filter while tallying its per-iteration arithmetic.
pub fn instrumented_klms_step(
    filter: &mut Klms,
    x: &[f64],
    d: f64,
    counts: &mut OpCounts,
) -> Result<StepOutcome> {
    let m = filter.model_size();
    let out = filter.step(x, d)?;
    // Output pass over the stored centers.
    for _ in 0..m {
        counts.center_touch(x.len());
    }
    // Error, then the single new-coefficient product eta * e.
    counts.scalar_add();
    if out.updated {
        counts.scalar_mult();
    }
    Ok(out)
}

/// Step a regression-form KNLMS filter while tallying its per-iteration
/// arithmetic.
pub fn instrumented_knlms_step(
    filter: &mut Knlms,
    x: &[f64],
    d: f64,
    counts: &mut OpCounts,
) -> Result<StepOutcome> {
    let m = filter.model_size();
    let out = filter.step(x, d)?;
    // Output pass.
    for _ in 0..m {
        counts.center_touch(x.len());
    }
    counts.scalar_add();
    // Update pass: extended kernel vector, squared norm and coefficient
    // update accumulate within the same per-center touches.
    for _ in 0..m {
        counts.center_touch(x.len());
    }
    // Self-term: kappa(x, x) is analytic for the Gaussian kernel; its norm
    // contribution is one add, the update scale factor one multiply.
    counts.scalar_add();
    counts.scalar_mult();
    Ok(out)
}
