//! Monte-Carlo estimation of the cross-correlation vector and the Wiener
//! solution in kernelized coordinates.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::kernels::{self, KernelSpec};
use crate::{Error, Result};

use super::moments::MomentParams;

/// Sample-mean estimates of `p_kd = E[d kappa_delta]` and `E[d^2]`, with
/// standard errors so downstream tolerances can be chosen rationally.
#[derive(Debug, Clone)]
pub struct PkdEstimate {
    pub p_kd: DVector<f64>,
    pub p_kd_se: DVector<f64>,
    pub e_d2: f64,
    pub e_d2_se: f64,
    pub samples: usize,
}

impl PkdEstimate {
    /// Average the entries into the exchangeable form `p_bar * 1`; with
    /// i.i.d. dictionary draws every entry estimates the same scalar, so
    /// averaging only reduces variance.
    pub fn symmetrized(&self) -> DVector<f64> {
        let p_bar = self.p_kd.mean();
        DVector::from_element(self.p_kd.len(), p_bar)
    }
}

/// Estimate `p_kd` and `E[d^2]` by Monte-Carlo.
///
/// Each sample draws a fresh dictionary of `M` i.i.d. `N(0, R_xx)` entries
/// and asks `system` for a training pair `(x, d)`; the pair may depend on the
/// drawn dictionary (useful for self-consistency checks) but real generators
/// ignore it. Estimates are deterministic given the seed. The desired signal
/// should carry its observation noise so the minimum MSE reflects the
/// measured convention.
pub fn estimate_pkd<F>(
    mut system: F,
    p: &MomentParams,
    kernel: &KernelSpec,
    samples: usize,
    seed: u64,
) -> Result<PkdEstimate>
where
    F: FnMut(&mut ChaCha8Rng, &[Vec<f64>]) -> (Vec<f64>, f64),
{
    if samples < 10_000 {
        return Err(Error::InvalidParameter {
            name: "samples",
            value: samples as f64,
            reason: "Monte-Carlo estimation needs at least 1e4 samples",
        });
    }
    let m = p.dict_size;
    let n = p.input_dim;
    let chol = Cholesky::new(p.r_xx.clone()).ok_or(Error::IllConditioned { cond: f64::NAN })?;
    let l = chol.l();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dict: Vec<Vec<f64>> = vec![vec![0.0; n]; m];
    let mut sum = vec![0.0f64; m];
    let mut sum_sq = vec![0.0f64; m];
    let (mut d2_sum, mut d2_sq) = (0.0f64, 0.0f64);

    for _ in 0..samples {
        for entry in dict.iter_mut() {
            let z = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
            let v = &l * z;
            entry.copy_from_slice(v.as_slice());
        }
        let (x, d) = system(&mut rng, &dict);
        for (k, c) in dict.iter().enumerate() {
            let prod = d * kernels::evaluate_unchecked(kernel, &x, c);
            sum[k] += prod;
            sum_sq[k] += prod * prod;
        }
        d2_sum += d * d;
        d2_sq += d * d * d * d;
    }

    let ns = samples as f64;
    let mean = DVector::from_iterator(m, sum.iter().map(|s| s / ns));
    let se = DVector::from_iterator(
        m,
        sum.iter().zip(&sum_sq).map(|(s, sq)| {
            let mu = s / ns;
            ((sq / ns - mu * mu).max(0.0) / ns).sqrt()
        }),
    );
    let e_d2 = d2_sum / ns;
    let e_d2_se = ((d2_sq / ns - e_d2 * e_d2).max(0.0) / ns).sqrt();

    Ok(PkdEstimate {
        p_kd: mean,
        p_kd_se: se,
        e_d2,
        e_d2_se,
        samples,
    })
}

/// Wiener solution in expansion coordinates.
#[derive(Debug, Clone)]
pub struct WienerSolution {
    pub a_o: DVector<f64>,
    pub j_min: f64,
    /// Monte-Carlo noise can push the quadratic form past `E[d^2]`; the
    /// minimum MSE is clamped at zero and the event recorded here.
    pub clamped: bool,
}

/// Solve `R_kk a = p_kd` and evaluate the minimum MSE
/// `J_min = E[d^2] - p_kd^T a`.
pub fn wiener_solution(
    r_kk: &DMatrix<f64>,
    p_kd: &DVector<f64>,
    e_d2: f64,
) -> Result<WienerSolution> {
    if r_kk.nrows() != p_kd.len() {
        return Err(Error::DimensionMismatch {
            expected: r_kk.nrows(),
            got: p_kd.len(),
        });
    }
    let chol = Cholesky::new(r_kk.clone()).ok_or_else(|| {
        let eig = r_kk.clone().symmetric_eigen().eigenvalues;
        let max = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        Error::IllConditioned {
            cond: if min > 0.0 { max / min } else { f64::INFINITY },
        }
    })?;
    let a_o = chol.solve(p_kd);
    let raw = e_d2 - p_kd.dot(&a_o);
    Ok(WienerSolution {
        a_o,
        j_min: raw.max(0.0),
        clamped: raw < 0.0,
    })
}
