//! Set-membership kernel adaptive filters.
//!
//! Online nonlinear filtering with kernel expansions and bounded-error
//! (set-membership) updates. The crate bundles:
//!
//! - [`kernels`]: Gaussian and polynomial kernel evaluation, kernel vectors
//!   against a dictionary, Gram matrices.
//! - [`dictionary`]: the growing expansion structure (centers + coefficients)
//!   with novelty/coherence admission and fixed-size FIFO replacement.
//! - [`filters`]: the step-based adaptive algorithms — C-SM-KNLMS and
//!   NLR-SM-KNLMS with adaptive step sizes and data-selective updates, plus
//!   KLMS/KNLMS and linear LMS/NLMS/SM-NLMS baselines behind one interface.
//! - [`analysis`]: the statistical engine predicting the MSE transient of the
//!   regression-form set-membership filter (kernelized input moments, Wiener
//!   solution, coefficient-error covariance recursion) and per-iteration
//!   operation-count models.
//! - [`datagen`]: seeded generators for the benchmark systems (nonlinear
//!   recursions, switching system, correlated inputs, Hammerstein cascade,
//!   Mackey-Glass series).
//! - [`experiment`]: the experiment runner behind the `smkaf` CLI — ensemble
//!   simulation, learning-curve CSV output, theory overlays and summaries.
//!
//! Everything is deterministic given a seed; ensemble members run in parallel
//! but reduce in a fixed order.

pub mod analysis;
pub mod datagen;
pub mod dictionary;
mod error;
pub mod experiment;
pub mod filters;
pub mod kernels;

pub use error::{Error, Result};
