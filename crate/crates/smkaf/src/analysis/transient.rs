//! Coefficient-error covariance recursion and the theoretical MSE curve.
//!
//! The model tracks `C_v(i) = E[v v^T]`, the covariance of the coefficient
//! error `v = a - a_o`, for the regression-form set-membership filter with a
//! fixed-size, i.i.d.-refreshed dictionary. The instantaneous model MSE is
//! `J_ms(i) = J_min + tr(R_kk C_v(i))`, reported with the observation-noise
//! floor added so the curve is comparable to measured ensemble averages.

use nalgebra::{DMatrix, DVector};
use statrs::function::erf::erfc;

use crate::{Error, Result};

use super::moments::MuCoefficients;

/// Probability that a zero-mean Gaussian error of deviation `sigma_e`
/// exceeds the bound: `2 Q(gamma / sigma_e)`.
pub fn update_probability(gamma: f64, sigma_e: f64) -> Result<f64> {
    if !(sigma_e > 0.0) {
        return Err(Error::InvalidParameter {
            name: "sigma_e",
            value: sigma_e,
            reason: "error deviation must be positive",
        });
    }
    if gamma < 0.0 {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "bound must be non-negative",
        });
    }
    Ok(erfc(gamma / (sigma_e * std::f64::consts::SQRT_2)))
}

/// Everything the covariance recursion needs, frozen per experiment phase.
#[derive(Debug, Clone)]
pub struct TheoryModel {
    pub r_kk: DMatrix<f64>,
    pub p_kd: DVector<f64>,
    pub e_d2: f64,
    pub a_o: DVector<f64>,
    pub j_min: f64,
    pub r_md: f64,
    pub r_od: f64,
    pub mu: MuCoefficients,
    /// Set-membership error bound of the modeled filter.
    pub gamma: f64,
    /// Observation-noise variance added on top of `J_min + tr(R C_v)`.
    /// Leave at zero when `J_min` was estimated from the noisy desired
    /// signal, which already carries the floor; double counting otherwise.
    pub noise_var: f64,
}

impl TheoryModel {
    pub fn new(
        r_kk: DMatrix<f64>,
        p_kd: DVector<f64>,
        e_d2: f64,
        mu: MuCoefficients,
        gamma: f64,
        noise_var: f64,
    ) -> Result<Self> {
        let wiener = super::estimate::wiener_solution(&r_kk, &p_kd, e_d2)?;
        let r_md = r_kk[(0, 0)];
        let r_od = if r_kk.nrows() > 1 { r_kk[(0, 1)] } else { 0.0 };
        Ok(TheoryModel {
            a_o: wiener.a_o,
            j_min: wiener.j_min,
            r_kk,
            p_kd,
            e_d2,
            r_md,
            r_od,
            mu,
            gamma,
            noise_var,
        })
    }

    pub fn dict_size(&self) -> usize {
        self.r_kk.nrows()
    }

    /// Covariance of the coefficient error for a filter starting from zero
    /// coefficients: `v(0) = -a_o`, so `C_v(0) = a_o a_o^T` and the modeled
    /// MSE starts at `E[d^2]`.
    pub fn cv0_zero_start(&self) -> DMatrix<f64> {
        &self.a_o * self.a_o.transpose()
    }

    /// Model MSE for a given covariance state, measured convention.
    pub fn mse_of(&self, c_v: &DMatrix<f64>) -> f64 {
        self.j_min + self.noise_var + (&self.r_kk * c_v).trace()
    }
}

/// Evolving state of the covariance recursion.
#[derive(Debug, Clone)]
pub struct CvState {
    pub c_v: DMatrix<f64>,
    pub iteration: usize,
    /// Current model error power, fed into the update probability and the
    /// sign-correlation coefficients.
    pub sigma_e2: f64,
}

impl CvState {
    pub fn initial(model: &TheoryModel, c_v0: DMatrix<f64>) -> Result<Self> {
        let m = model.dict_size();
        if c_v0.nrows() != m || c_v0.ncols() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: c_v0.nrows(),
            });
        }
        let sigma_e2 = model.mse_of(&c_v0);
        if !(sigma_e2 > 0.0) || !sigma_e2.is_finite() {
            return Err(Error::ModelDivergence {
                iteration: 0,
                sigma_e2,
            });
        }
        Ok(CvState {
            c_v: c_v0,
            iteration: 0,
            sigma_e2,
        })
    }
}

/// Fourth-moment contraction
/// `T = E[kd kd^T v v^T kd kd^T]` expressed entrywise through the five
/// kernel moments; linear in `C_v`, symmetric for symmetric input.
///
/// Diagonal: `T_jj = mu1 C_jj + sum_{l != j} (2 mu2 C_jl + mu3 C_ll
/// + mu4 sum_{p not in {j,l}} C_lp)`. Off-diagonal:
/// `T_jk = mu2 (C_jj + C_kk) + 2 mu3 C_jk + sum_{l not in {j,k}} (2 mu4 C_kl
/// + 2 mu4 C_jl + mu4 C_ll + mu5 sum_{p not in {j,k,l}} C_lp)`.
/// Row-sum bookkeeping keeps it O(M^2).
pub fn t_matrix(c_v: &DMatrix<f64>, mu: &MuCoefficients) -> DMatrix<f64> {
    let m = c_v.nrows();
    let row_sum: Vec<f64> = (0..m).map(|j| c_v.row(j).sum()).collect();
    let total: f64 = row_sum.iter().sum();
    let trace = c_v.trace();

    DMatrix::from_fn(m, m, |j, k| {
        if j == k {
            let off_row = row_sum[j] - c_v[(j, j)];
            // sum_{l != j} sum_{p not in {j, l}} C_lp
            let double = (total - row_sum[j]) - off_row - (trace - c_v[(j, j)]);
            mu.mu1 * c_v[(j, j)]
                + 2.0 * mu.mu2 * off_row
                + mu.mu3 * (trace - c_v[(j, j)])
                + mu.mu4 * double
        } else {
            let cjj = c_v[(j, j)];
            let ckk = c_v[(k, k)];
            let cjk = c_v[(j, k)];
            let sum_kl = row_sum[k] - cjk - ckk; // sum_{l not in {j,k}} C_kl
            let sum_jl = row_sum[j] - cjj - cjk; // sum_{l not in {j,k}} C_jl
            let sum_ll = trace - cjj - ckk;
            // sum_{l not in {j,k}} sum_{p not in {j,k,l}} C_lp
            let double = (total - row_sum[j] - row_sum[k]) - sum_jl - sum_kl - sum_ll;
            mu.mu2 * (cjj + ckk)
                + 2.0 * mu.mu3 * cjk
                + 2.0 * mu.mu4 * (sum_kl + sum_jl)
                + mu.mu4 * sum_ll
                + mu.mu5 * double
        }
    })
}

/// One step of the covariance recursion:
/// `C_v(i+1) = C_v(i) + P^2 beta (J_min R_kk + T(i))
/// + P alpha (C_v R_kk + R_kk C_v) + P^2 gamma^2 R_kk`, with
/// `alpha = gamma sqrt(2/(pi sigma_e^2)) - 1`,
/// `beta = 1 - 2 gamma sqrt(2/(pi sigma_e^2))` and
/// `P = 2 Q(gamma / sigma_e)`, all at the state's current error power; the
/// error power is then refreshed from the new covariance.
pub fn cv_step(state: &CvState, model: &TheoryModel) -> Result<CvState> {
    if !(state.sigma_e2 > 0.0) {
        return Err(Error::ModelDivergence {
            iteration: state.iteration,
            sigma_e2: state.sigma_e2,
        });
    }
    let sigma_e = state.sigma_e2.sqrt();
    let gamma = model.gamma;
    let p_up = update_probability(gamma, sigma_e)?;
    let price = gamma * (2.0 / (std::f64::consts::PI * state.sigma_e2)).sqrt();
    let alpha = price - 1.0;
    let beta = 1.0 - 2.0 * price;

    let t = t_matrix(&state.c_v, &model.mu);
    let cross = &state.c_v * &model.r_kk;
    // C R + R C is symmetric for symmetric C, R; assemble it that way.
    let cross_sym = &cross + cross.transpose();

    let c_next = &state.c_v
        + (model.j_min * &model.r_kk + t) * (p_up * p_up * beta)
        + cross_sym * (p_up * alpha)
        + &model.r_kk * (p_up * p_up * gamma * gamma);

    let sigma_e2 = model.mse_of(&c_next);
    let iteration = state.iteration + 1;
    if !(sigma_e2 > 0.0) || !sigma_e2.is_finite() {
        return Err(Error::ModelDivergence {
            iteration,
            sigma_e2,
        });
    }
    Ok(CvState {
        c_v: c_next,
        iteration,
        sigma_e2,
    })
}

/// Iterate the recursion and emit the modeled MSE per iteration (measured
/// convention: `J_min + tr(R_kk C_v(i)) + sigma_n^2`), starting from the
/// supplied initial covariance. `curve[0]` is the pre-adaptation value.
pub fn theoretical_mse_curve(
    model: &TheoryModel,
    iterations: usize,
    c_v0: DMatrix<f64>,
) -> Result<Vec<f64>> {
    if iterations == 0 {
        return Err(Error::InvalidParameter {
            name: "iterations",
            value: 0.0,
            reason: "curve needs at least one iteration",
        });
    }
    let mut state = CvState::initial(model, c_v0)?;
    let mut curve = Vec::with_capacity(iterations);
    curve.push(state.sigma_e2);
    while curve.len() < iterations {
        state = cv_step(&state, model)?;
        curve.push(state.sigma_e2);
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn toy_mu() -> MuCoefficients {
        MuCoefficients {
            mu1: 0.9,
            mu2: 0.5,
            mu3: 0.4,
            mu4: 0.25,
            mu5: 0.1,
        }
    }

    fn toy_model(m: usize, gamma: f64, j_min: f64, noise_var: f64) -> TheoryModel {
        let r_kk = DMatrix::from_fn(m, m, |i, j| if i == j { 0.6 } else { 0.2 });
        let p_kd = DVector::zeros(m);
        TheoryModel {
            a_o: DVector::zeros(m),
            j_min,
            e_d2: j_min,
            r_md: 0.6,
            r_od: 0.2,
            mu: toy_mu(),
            gamma,
            noise_var,
            r_kk,
            p_kd,
        }
    }

    fn random_sym(m: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::from_fn(m, m, |_, _| rng.gen_range(-0.5..0.5));
        let sym = (&a + a.transpose()) * 0.5;
        // Shift to positive semidefinite territory for realism.
        sym * 0.1 + DMatrix::identity(m, m) * 0.3
    }

    #[test]
    fn update_probability_limits() {
        assert_relative_eq!(update_probability(0.0, 1.0).unwrap(), 1.0);
        assert!(update_probability(100.0, 1.0).unwrap() < 1e-20);
        assert!(update_probability(1.0, 0.0).is_err());
        assert!(update_probability(-1.0, 1.0).is_err());
    }

    #[test]
    fn update_probability_matches_quadrature() {
        // Oracle: Simpson integration of the standard normal density.
        let z = 1.0f64;
        let pdf = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let (a, b, steps) = (z, 12.0, 20_000);
        let h = (b - a) / steps as f64;
        let mut tail = pdf(a) + pdf(b);
        for i in 1..steps {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            tail += w * pdf(a + i as f64 * h);
        }
        tail *= h / 3.0;
        assert_relative_eq!(
            update_probability(1.0, 1.0).unwrap(),
            2.0 * tail,
            max_relative = 1e-8
        );
        // Known value 2 Q(1).
        assert_relative_eq!(
            update_probability(1.0, 1.0).unwrap(),
            0.31731050786291415,
            max_relative = 1e-10
        );
    }

    #[test]
    fn t_matrix_zero_input_gives_zero() {
        let c = DMatrix::zeros(5, 5);
        assert_eq!(t_matrix(&c, &toy_mu()), DMatrix::zeros(5, 5));
    }

    #[test]
    fn t_matrix_single_entry_is_mu1_scaled() {
        let c = DMatrix::from_element(1, 1, 0.7);
        let t = t_matrix(&c, &toy_mu());
        assert_relative_eq!(t[(0, 0)], 0.9 * 0.7, max_relative = 1e-15);
    }

    /// Literal index-by-index transcription of the two entry formulas,
    /// independent of the row-sum bookkeeping in the implementation.
    fn t_matrix_literal(c: &DMatrix<f64>, mu: &MuCoefficients) -> DMatrix<f64> {
        let m = c.nrows();
        DMatrix::from_fn(m, m, |j, k| {
            if j == k {
                let mut v = mu.mu1 * c[(j, j)];
                for l in 0..m {
                    if l == j {
                        continue;
                    }
                    v += 2.0 * mu.mu2 * c[(j, l)] + mu.mu3 * c[(l, l)];
                    for p in 0..m {
                        if p == j || p == l {
                            continue;
                        }
                        v += mu.mu4 * c[(l, p)];
                    }
                }
                v
            } else {
                let mut v = mu.mu2 * (c[(j, j)] + c[(k, k)]) + 2.0 * mu.mu3 * c[(j, k)];
                for l in 0..m {
                    if l == j || l == k {
                        continue;
                    }
                    v += 2.0 * mu.mu4 * c[(k, l)] + 2.0 * mu.mu4 * c[(j, l)] + mu.mu4 * c[(l, l)];
                    for p in 0..m {
                        if p == j || p == k || p == l {
                            continue;
                        }
                        v += mu.mu5 * c[(l, p)];
                    }
                }
                v
            }
        })
    }

    #[test]
    fn t_matrix_matches_literal_transcription() {
        for m in [2usize, 3, 5, 8] {
            let c = random_sym(m, m as u64);
            let fast = t_matrix(&c, &toy_mu());
            let slow = t_matrix_literal(&c, &toy_mu());
            for j in 0..m {
                for k in 0..m {
                    assert_relative_eq!(fast[(j, k)], slow[(j, k)], max_relative = 1e-12, epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn cv_zero_is_fixed_point_without_bound_or_floor() {
        // J_min = 0, gamma = 0, C_v = 0: every additive term vanishes.
        let model = toy_model(3, 0.0, 0.0, 0.01);
        let state = CvState::initial(&model, DMatrix::zeros(3, 3)).unwrap();
        let next = cv_step(&state, &model).unwrap();
        assert_eq!(next.c_v, DMatrix::zeros(3, 3));
        assert_relative_eq!(next.sigma_e2, 0.01, max_relative = 1e-15);
    }

    /// Entrywise transcription of the final covariance recursion (diagonal
    /// and off-diagonal update equations), used as the cross-check oracle
    /// against the matrix-form implementation.
    fn cv_step_entrywise(state: &CvState, model: &TheoryModel) -> DMatrix<f64> {
        let m = model.dict_size();
        let c = &state.c_v;
        let mu = &model.mu;
        let sigma_e = state.sigma_e2.sqrt();
        let p = update_probability(model.gamma, sigma_e).unwrap();
        let price = model.gamma * (2.0 / (std::f64::consts::PI * state.sigma_e2)).sqrt();
        let (alpha, beta) = (price - 1.0, 1.0 - 2.0 * price);
        let (rmd, rod) = (model.r_md, model.r_od);
        let (g, jm) = (model.gamma, model.j_min);

        DMatrix::from_fn(m, m, |j, k| {
            if j == k {
                let mut v = (1.0 + 2.0 * p * alpha * rmd + p * p * beta * mu.mu1) * c[(j, j)];
                for l in 0..m {
                    if l == j {
                        continue;
                    }
                    v += p * p * beta * mu.mu3 * c[(l, l)];
                    v += (2.0 * p * p * beta * mu.mu2 + 2.0 * p * alpha * rod) * c[(j, l)];
                    for q in 0..m {
                        if q == j || q == l {
                            continue;
                        }
                        v += p * p * beta * mu.mu4 * c[(l, q)];
                    }
                }
                v + (p * p * beta * jm + p * p * g * g) * rmd
            } else {
                let mut v = (1.0 + 2.0 * p * alpha * rmd + 2.0 * p * p * beta * mu.mu3) * c[(j, k)];
                v += (p * p * beta * mu.mu2 + p * alpha * rod) * (c[(j, j)] + c[(k, k)]);
                for l in 0..m {
                    if l == j || l == k {
                        continue;
                    }
                    v += p * p * beta * mu.mu4 * c[(l, l)];
                    v += (2.0 * p * p * beta * mu.mu4 + p * alpha * rod) * (c[(k, l)] + c[(j, l)]);
                    for q in 0..m {
                        if q == j || q == k || q == l {
                            continue;
                        }
                        v += p * p * beta * mu.mu5 * c[(l, q)];
                    }
                }
                v + (p * p * beta * jm + p * p * g * g) * rod
            }
        })
    }

    #[test]
    fn matrix_form_matches_entrywise_recursion() {
        for m in [2usize, 3, 4] {
            let model = toy_model(m, 0.02, 0.05, 0.0);
            let state = CvState::initial(&model, random_sym(m, 10 + m as u64)).unwrap();
            let matrix = cv_step(&state, &model).unwrap().c_v;
            let entry = cv_step_entrywise(&state, &model);
            for j in 0..m {
                for k in 0..m {
                    assert_relative_eq!(
                        matrix[(j, k)],
                        entry[(j, k)],
                        max_relative = 1e-10,
                        epsilon = 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn cv_step_preserves_symmetry() {
        // Realistic moments so the recursion is stable over many steps.
        use crate::analysis::moments::{compute_rkk, mu_coefficients, MomentParams};
        let p = MomentParams::iid(1, 6, 0.15, 0.025).unwrap();
        let (r_kk, rmd, rod) = compute_rkk(&p).unwrap();
        let mu = mu_coefficients(&p).unwrap();
        let model = TheoryModel {
            a_o: DVector::from_element(6, 0.3),
            j_min: 0.02,
            e_d2: 0.05,
            r_md: rmd,
            r_od: rod,
            mu,
            gamma: 0.03,
            noise_var: 1e-4,
            r_kk,
            p_kd: DVector::zeros(6),
        };
        let mut state = CvState::initial(&model, model.cv0_zero_start()).unwrap();
        for _ in 0..50 {
            state = cv_step(&state, &model).unwrap();
            for j in 0..6 {
                for k in 0..j {
                    assert!((state.c_v[(j, k)] - state.c_v[(k, j)]).abs() <= 1e-12);
                }
            }
        }
        assert!(state.sigma_e2.is_finite());
    }

    #[test]
    fn curve_is_flat_at_noise_floor_in_degenerate_config() {
        let model = toy_model(3, 0.0, 0.0, 2.5e-3);
        let curve = theoretical_mse_curve(&model, 20, DMatrix::zeros(3, 3)).unwrap();
        for v in curve {
            assert_relative_eq!(v, 2.5e-3, max_relative = 1e-12);
        }
    }

    #[test]
    fn curve_initial_value_is_definitional() {
        let model = toy_model(4, 0.03, 0.02, 1e-3);
        let c0 = random_sym(4, 8);
        let expect = model.j_min + model.noise_var + (&model.r_kk * &c0).trace();
        let curve = theoretical_mse_curve(&model, 5, c0).unwrap();
        assert_relative_eq!(curve[0], expect, max_relative = 1e-14);
    }

    #[test]
    fn initial_state_rejects_wrong_dimension() {
        let model = toy_model(4, 0.03, 0.02, 1e-3);
        assert!(CvState::initial(&model, DMatrix::zeros(3, 3)).is_err());
    }
}
