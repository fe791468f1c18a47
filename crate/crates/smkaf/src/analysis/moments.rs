//! Moments of the kernelized input under i.i.d. Gaussian data.
//!
//! Every moment of Gaussian-kernel values reduces to the moment generating
//! function of a Gaussian quadratic form `z = y^T Q y`,
//! `E[exp(s z)] = det(I - 2 s Q R_y)^{-1/2}`, evaluated at a negative `s`
//! determined by the kernel exponents. [`quadratic_form_mgf`] is the single
//! source of truth; the named moments just pick `(Q, R, s)` triples.

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Input-side parameters of the statistical model.
#[derive(Debug, Clone)]
pub struct MomentParams {
    /// Input dimension N.
    pub input_dim: usize,
    /// Fixed dictionary size M.
    pub dict_size: usize,
    /// Gaussian kernel bandwidth.
    pub bandwidth: f64,
    /// Input autocorrelation matrix (N x N), `sigma_x^2 I` for i.i.d. data.
    pub r_xx: DMatrix<f64>,
}

impl MomentParams {
    /// i.i.d. components: `R_xx = sigma_x^2 I`.
    pub fn iid(input_dim: usize, dict_size: usize, sigma_x2: f64, bandwidth: f64) -> Result<Self> {
        if !(sigma_x2 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "sigma_x2",
                value: sigma_x2,
                reason: "input variance must be positive",
            });
        }
        if !(bandwidth > 0.0) {
            return Err(Error::InvalidParameter {
                name: "bandwidth",
                value: bandwidth,
                reason: "bandwidth must be positive",
            });
        }
        if input_dim == 0 || dict_size == 0 {
            return Err(Error::InvalidParameter {
                name: "input_dim/dict_size",
                value: 0.0,
                reason: "dimensions must be at least 1",
            });
        }
        Ok(MomentParams {
            input_dim,
            dict_size,
            bandwidth,
            r_xx: DMatrix::identity(input_dim, input_dim) * sigma_x2,
        })
    }

    fn nu2(&self) -> f64 {
        self.bandwidth * self.bandwidth
    }

    /// Stacked covariance of `k` independent input blocks.
    pub fn stacked_cov(&self, k: usize) -> DMatrix<f64> {
        block_diag(&self.r_xx, k)
    }
}

/// Block-diagonal stack of `k` copies of `block`.
pub fn block_diag(block: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    let n = block.nrows();
    let mut out = DMatrix::zeros(n * k, n * k);
    for b in 0..k {
        out.view_mut((b * n, b * n), (n, n)).copy_from(block);
    }
    out
}

/// Kronecker expansion `pattern ⊗ I_n`.
fn expand_pattern(pattern: &[&[f64]], n: usize) -> DMatrix<f64> {
    let k = pattern.len();
    let mut out = DMatrix::zeros(k * n, k * n);
    for (bi, row) in pattern.iter().enumerate() {
        for (bj, &v) in row.iter().enumerate() {
            if v != 0.0 {
                for d in 0..n {
                    out[(bi * n + d, bj * n + d)] = v;
                }
            }
        }
    }
    out
}

/// `||x - x_j||^2` as a quadratic form in `[x; x_j]`.
pub fn q2(n: usize) -> DMatrix<f64> {
    expand_pattern(&[&[1.0, -1.0], &[-1.0, 1.0]], n)
}

/// `||x - x_j||^2 + ||x - x_l||^2` in `[x; x_j; x_l]`.
pub fn q3(n: usize) -> DMatrix<f64> {
    expand_pattern(
        &[&[2.0, -1.0, -1.0], &[-1.0, 1.0, 0.0], &[-1.0, 0.0, 1.0]],
        n,
    )
}

/// `3||x - x_j||^2 + ||x - x_l||^2` in `[x; x_j; x_l]`.
pub fn q3_prime(n: usize) -> DMatrix<f64> {
    expand_pattern(
        &[&[4.0, -3.0, -1.0], &[-3.0, 3.0, 0.0], &[-1.0, 0.0, 1.0]],
        n,
    )
}

/// `2||x - x_j||^2 + ||x - x_l||^2 + ||x - x_p||^2` in `[x; x_j; x_l; x_p]`.
pub fn q4(n: usize) -> DMatrix<f64> {
    expand_pattern(
        &[
            &[4.0, -2.0, -1.0, -1.0],
            &[-2.0, 2.0, 0.0, 0.0],
            &[-1.0, 0.0, 1.0, 0.0],
            &[-1.0, 0.0, 0.0, 1.0],
        ],
        n,
    )
}

/// Sum of four squared distances from `x` in `[x; x_j; x_k; x_l; x_p]`.
pub fn q5(n: usize) -> DMatrix<f64> {
    expand_pattern(
        &[
            &[4.0, -1.0, -1.0, -1.0, -1.0],
            &[-1.0, 1.0, 0.0, 0.0, 0.0],
            &[-1.0, 0.0, 1.0, 0.0, 0.0],
            &[-1.0, 0.0, 0.0, 1.0, 0.0],
            &[-1.0, 0.0, 0.0, 0.0, 1.0],
        ],
        n,
    )
}

/// Moment generating function of the Gaussian quadratic form
/// `z = y^T Q y`, `y ~ N(0, R_y)`: `E[e^{sz}] = det(I - 2 s Q R_y)^{-1/2}`.
///
/// The determinant is computed by a pivoted LU factorization and must be
/// positive; parameters outside the validity region are reported as
/// [`Error::MomentUndefined`].
pub fn quadratic_form_mgf(q: &DMatrix<f64>, r_y: &DMatrix<f64>, s: f64) -> Result<f64> {
    let dim = q.nrows();
    if q.ncols() != dim || r_y.nrows() != dim || r_y.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: r_y.nrows(),
        });
    }
    let a = DMatrix::identity(dim, dim) - (q * r_y) * (2.0 * s);
    let det = a.lu().determinant();
    if !(det > 0.0) || !det.is_finite() {
        return Err(Error::MomentUndefined { det });
    }
    Ok(det.powf(-0.5))
}

/// Diagonal moment `E[kappa^2(x, x_j)]` of the kernelized-input
/// autocorrelation.
pub fn r_md(p: &MomentParams) -> Result<f64> {
    quadratic_form_mgf(&q2(p.input_dim), &p.stacked_cov(2), -1.0 / p.nu2())
}

/// Off-diagonal moment `E[kappa(x, x_j) kappa(x, x_l)]`, `j != l`.
pub fn r_od(p: &MomentParams) -> Result<f64> {
    quadratic_form_mgf(&q3(p.input_dim), &p.stacked_cov(3), -0.5 / p.nu2())
}

/// Autocorrelation matrix of the kernelized input: `r_md` on the diagonal,
/// `r_od` everywhere else (dictionary entries are i.i.d., hence
/// exchangeable).
pub fn compute_rkk(p: &MomentParams) -> Result<(DMatrix<f64>, f64, f64)> {
    let rmd = r_md(p)?;
    let rod = r_od(p)?;
    let m = p.dict_size;
    let r_kk = DMatrix::from_fn(m, m, |i, j| if i == j { rmd } else { rod });
    Ok((r_kk, rmd, rod))
}

/// The five fourth-order kernel moments feeding the covariance recursion.
///
/// Over one input `x` and distinct i.i.d. dictionary entries:
/// `mu1 = E[k_j^4]`, `mu2 = E[k_j^3 k_l]`, `mu3 = E[k_j^2 k_l^2]`,
/// `mu4 = E[k_j^2 k_l k_p]`, `mu5 = E[k_j k_k k_l k_p]`, where
/// `k_j = kappa(x, x_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuCoefficients {
    pub mu1: f64,
    pub mu2: f64,
    pub mu3: f64,
    pub mu4: f64,
    pub mu5: f64,
}

/// Evaluate the five moments by picking the `(Q, R, s)` triple that encodes
/// each product of kernel powers as `exp(s y^T Q y)`.
pub fn mu_coefficients(p: &MomentParams) -> Result<MuCoefficients> {
    let n = p.input_dim;
    let nu2 = p.nu2();
    Ok(MuCoefficients {
        // k^4 = exp(-2 z_j / nu^2)
        mu1: quadratic_form_mgf(&q2(n), &p.stacked_cov(2), -2.0 / nu2)?,
        // k^3 k' = exp(-(3 z_j + z_l) / (2 nu^2))
        mu2: quadratic_form_mgf(&q3_prime(n), &p.stacked_cov(3), -0.5 / nu2)?,
        // k^2 k'^2 = exp(-(z_j + z_l) / nu^2)
        mu3: quadratic_form_mgf(&q3(n), &p.stacked_cov(3), -1.0 / nu2)?,
        // k^2 k' k'' = exp(-(2 z_j + z_l + z_p) / (2 nu^2))
        mu4: quadratic_form_mgf(&q4(n), &p.stacked_cov(4), -0.5 / nu2)?,
        // k k' k'' k''' = exp(-(z_j + z_k + z_l + z_p) / (2 nu^2))
        mu5: quadratic_form_mgf(&q5(n), &p.stacked_cov(5), -0.5 / nu2)?,
    })
}
