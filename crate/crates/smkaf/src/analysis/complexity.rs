//! Per-iteration operation-count models of the kernel algorithms.
//!
//! Polynomials in the input dimension `N`, dictionary size `m` and update
//! rate `UR` (fraction of iterations whose error exceeds the bound). The
//! instrumented counters in [`crate::filters::ops`] validate the KLMS and
//! KNLMS rows empirically at per-center-touch granularity.

use crate::{Error, Result};

/// Algorithms with a published cost model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountedAlgorithm {
    Klms,
    Knlms,
    CsmKnlms,
    NlrSmKnlms,
}

/// Additions and multiplications per iteration; fractional under partial
/// update rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpPolynomial {
    pub adds: f64,
    pub mults: f64,
}

/// Evaluate the cost model of `algorithm` at input dimension `n`,
/// dictionary size `m` and update rate `ur`.
pub fn complexity_count(
    algorithm: CountedAlgorithm,
    n: usize,
    m: usize,
    ur: f64,
) -> Result<OpPolynomial> {
    if n < 1 || m < 1 {
        return Err(Error::InvalidParameter {
            name: "n/m",
            value: 0.0,
            reason: "dimension and dictionary size must be at least 1",
        });
    }
    if !(0.0..=1.0).contains(&ur) {
        return Err(Error::InvalidParameter {
            name: "ur",
            value: ur,
            reason: "update rate must lie in [0, 1]",
        });
    }
    let (n, m) = (n as f64, m as f64);
    let counts = match algorithm {
        CountedAlgorithm::Klms => OpPolynomial {
            adds: m * (n + 1.0) + 1.0,
            mults: m * (n + 1.0),
        },
        CountedAlgorithm::Knlms => OpPolynomial {
            adds: m * (2.0 * n + 1.0) + 2.0,
            mults: m * (2.0 * n + 1.0) + 1.0,
        },
        CountedAlgorithm::CsmKnlms => OpPolynomial {
            adds: m * (2.0 * n) + 1.0 + ur,
            mults: m * (2.0 * n + 1.0) + ur,
        },
        CountedAlgorithm::NlrSmKnlms => OpPolynomial {
            adds: (m + 1.0) * (n - 1.0) + 1.0 + ur * (n + 2.0 * m + 1.0),
            mults: (m + 1.0) * (2.0 * n) + ur * (n + m + 2.0),
        },
    };
    Ok(counts)
}
