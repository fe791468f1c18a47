//! Statistical MSE-transient machinery for the regression-form
//! set-membership kernel filter, plus per-iteration cost models.
//!
//! The pipeline: kernelized-input moments from Gaussian quadratic forms
//! ([`moments`]), the Wiener solution from Monte-Carlo cross-correlation
//! estimates ([`estimate`]), and the coefficient-error covariance recursion
//! that yields the theoretical learning curve ([`transient`]).

mod complexity;
mod estimate;
mod moments;
mod transient;

pub use complexity::{complexity_count, CountedAlgorithm, OpPolynomial};
pub use estimate::{estimate_pkd, wiener_solution, PkdEstimate, WienerSolution};
pub use moments::{
    block_diag, compute_rkk, mu_coefficients, q2, q3, q3_prime, q4, q5, quadratic_form_mgf,
    MomentParams, MuCoefficients,
};
pub use transient::{cv_step, t_matrix, theoretical_mse_curve, update_probability, CvState, TheoryModel};
