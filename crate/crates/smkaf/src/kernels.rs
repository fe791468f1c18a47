//! Kernel evaluation, kernel vectors against a dictionary, and Gram matrices.
//!
//! The feature map is never materialized: every inner product in feature
//! space is computed here through a kernel evaluation.

use crate::{Error, Result};

/// Descriptor of a positive-definite kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    /// `exp(-||x - x'||^2 / (2 nu^2))` with bandwidth `nu > 0`.
    Gaussian { bandwidth: f64 },
    /// `(x^T x' + 1)^p` with integer degree `p >= 1`.
    Polynomial { degree: u32 },
}

impl KernelSpec {
    /// Gaussian kernel with the given bandwidth.
    pub fn gaussian(bandwidth: f64) -> Result<Self> {
        if !(bandwidth > 0.0) || !bandwidth.is_finite() {
            return Err(Error::InvalidParameter {
                name: "bandwidth",
                value: bandwidth,
                reason: "must be positive and finite",
            });
        }
        Ok(KernelSpec::Gaussian { bandwidth })
    }

    /// Polynomial kernel of the given degree.
    pub fn polynomial(degree: u32) -> Result<Self> {
        if degree < 1 {
            return Err(Error::InvalidParameter {
                name: "degree",
                value: degree as f64,
                reason: "must be at least 1",
            });
        }
        Ok(KernelSpec::Polynomial { degree })
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self, KernelSpec::Gaussian { .. })
    }

    /// `kappa(x, x)` without touching the data; 1 for the Gaussian kernel.
    pub fn self_eval(&self, x: &[f64]) -> f64 {
        match self {
            KernelSpec::Gaussian { .. } => 1.0,
            KernelSpec::Polynomial { degree } => {
                let sq: f64 = x.iter().map(|v| v * v).sum();
                (sq + 1.0).powi(*degree as i32)
            }
        }
    }
}

fn check_dims(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    Ok(())
}

/// Squared Euclidean distance, accumulated componentwise.
///
/// Deliberately not the `||x||^2 + ||x'||^2 - 2 x^T x'` form: at small
/// bandwidths that shortcut cancels catastrophically.
#[inline]
fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let d = a - b;
            d * d
        })
        .sum()
}

/// Evaluate the kernel on a pair of equal-dimension vectors.
pub fn evaluate(spec: &KernelSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    check_dims(x, y)?;
    if x.is_empty() {
        return Err(Error::EmptyInput("kernel arguments must have dimension >= 1"));
    }
    Ok(evaluate_unchecked(spec, x, y))
}

/// Evaluation without the shape check, for hot loops that validated once.
#[inline]
pub(crate) fn evaluate_unchecked(spec: &KernelSpec, x: &[f64], y: &[f64]) -> f64 {
    match spec {
        KernelSpec::Gaussian { bandwidth } => {
            (-squared_distance(x, y) / (2.0 * bandwidth * bandwidth)).exp()
        }
        KernelSpec::Polynomial { degree } => {
            let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
            (dot + 1.0).powi(*degree as i32)
        }
    }
}

/// Kernel evaluations of `x` against every center, in center order.
///
/// An empty center list yields an empty vector.
pub fn kernel_vector(spec: &KernelSpec, x: &[f64], centers: &[Vec<f64>]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(centers.len());
    for c in centers {
        check_dims(x, c)?;
        out.push(evaluate_unchecked(spec, x, c));
    }
    Ok(out)
}

/// Gram matrix `K[i][j] = kappa(c_i, c_j)` in row-major order.
pub fn gram_matrix(spec: &KernelSpec, centers: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    if centers.is_empty() {
        return Err(Error::EmptyInput("gram matrix needs at least one center"));
    }
    let m = centers.len();
    let mut k = vec![vec![0.0; m]; m];
    for i in 0..m {
        check_dims(&centers[0], &centers[i])?;
        for j in 0..=i {
            let v = evaluate_unchecked(spec, &centers[i], &centers[j]);
            k[i][j] = v;
            k[j][i] = v;
        }
    }
    Ok(k)
}
