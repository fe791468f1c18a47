//! Linear baselines: LMS, NLMS and the set-membership NLMS.
//!
//! Textbook recursions on a fixed-length weight vector, kept behind the same
//! step interface as the kernel machines so the experiment runner treats all
//! algorithms identically.

use crate::{Error, Result};

use super::{step_size, AdaptiveFilter, StepOutcome};

#[derive(Debug, Clone)]
struct Taps {
    w: Vec<f64>,
    update_count: u64,
    iteration: u64,
}

impl Taps {
    fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter {
                name: "dim",
                value: 0.0,
                reason: "weight vector needs at least one tap",
            });
        }
        Ok(Taps {
            w: vec![0.0; dim],
            update_count: 0,
            iteration: 0,
        })
    }

    fn output(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.w.len() {
            return Err(Error::DimensionMismatch {
                expected: self.w.len(),
                got: x.len(),
            });
        }
        Ok(self.w.iter().zip(x).map(|(w, v)| w * v).sum())
    }
}

/// `w <- w + eta e x`.
#[derive(Debug, Clone)]
pub struct LmsFilter {
    taps: Taps,
    eta: f64,
}

impl LmsFilter {
    pub fn new(dim: usize, eta: f64) -> Result<Self> {
        Ok(LmsFilter {
            taps: Taps::new(dim)?,
            eta,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.taps.w
    }
}

impl AdaptiveFilter for LmsFilter {
    fn step(&mut self, x: &[f64], d: f64) -> Result<StepOutcome> {
        let prediction = self.taps.output(x)?;
        let error = d - prediction;
        self.taps.iteration += 1;
        self.taps.update_count += 1;
        for (w, v) in self.taps.w.iter_mut().zip(x) {
            *w += self.eta * error * v;
        }
        Ok(StepOutcome {
            prediction,
            error,
            step_size: self.eta,
            updated: true,
        })
    }

    fn predict(&self, x: &[f64]) -> Result<f64> {
        self.taps.output(x)
    }

    fn model_size(&self) -> usize {
        self.taps.w.len()
    }

    fn update_count(&self) -> u64 {
        self.taps.update_count
    }

    fn iteration(&self) -> u64 {
        self.taps.iteration
    }
}

/// `w <- w + eta e x / (eps + ||x||^2)`.
#[derive(Debug, Clone)]
pub struct NlmsFilter {
    taps: Taps,
    eta: f64,
    epsilon: f64,
}

impl NlmsFilter {
    pub fn new(dim: usize, eta: f64, epsilon: f64) -> Result<Self> {
        Ok(NlmsFilter {
            taps: Taps::new(dim)?,
            eta,
            epsilon,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.taps.w
    }
}

impl AdaptiveFilter for NlmsFilter {
    fn step(&mut self, x: &[f64], d: f64) -> Result<StepOutcome> {
        let prediction = self.taps.output(x)?;
        let error = d - prediction;
        self.taps.iteration += 1;
        self.taps.update_count += 1;
        let norm_sq: f64 = x.iter().map(|v| v * v).sum();
        let t = self.eta * error / (self.epsilon + norm_sq);
        for (w, v) in self.taps.w.iter_mut().zip(x) {
            *w += t * v;
        }
        Ok(StepOutcome {
            prediction,
            error,
            step_size: self.eta,
            updated: true,
        })
    }

    fn predict(&self, x: &[f64]) -> Result<f64> {
        self.taps.output(x)
    }

    fn model_size(&self) -> usize {
        self.taps.w.len()
    }

    fn update_count(&self) -> u64 {
        self.taps.update_count
    }

    fn iteration(&self) -> u64 {
        self.taps.iteration
    }
}

/// Set-membership NLMS: updates only on `|e| > gamma`, with the adaptive
/// step size `mu = 1 - gamma/|e|`.
#[derive(Debug, Clone)]
pub struct SmNlmsFilter {
    taps: Taps,
    gamma: f64,
    epsilon: f64,
}

impl SmNlmsFilter {
    pub fn new(dim: usize, gamma: f64, epsilon: f64) -> Result<Self> {
        if !(gamma >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
                reason: "error bound must be non-negative",
            });
        }
        Ok(SmNlmsFilter {
            taps: Taps::new(dim)?,
            gamma,
            epsilon,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.taps.w
    }
}

impl AdaptiveFilter for SmNlmsFilter {
    fn step(&mut self, x: &[f64], d: f64) -> Result<StepOutcome> {
        let prediction = self.taps.output(x)?;
        let error = d - prediction;
        self.taps.iteration += 1;
        if error.abs() <= self.gamma {
            return Ok(StepOutcome {
                prediction,
                error,
                step_size: 0.0,
                updated: false,
            });
        }
        self.taps.update_count += 1;
        let mu = step_size(error, self.gamma);
        let norm_sq: f64 = x.iter().map(|v| v * v).sum();
        let t = mu * error / (self.epsilon + norm_sq);
        for (w, v) in self.taps.w.iter_mut().zip(x) {
            *w += t * v;
        }
        Ok(StepOutcome {
            prediction,
            error,
            step_size: mu,
            updated: true,
        })
    }

    fn predict(&self, x: &[f64]) -> Result<f64> {
        self.taps.output(x)
    }

    fn model_size(&self) -> usize {
        self.taps.w.len()
    }

    fn update_count(&self) -> u64 {
        self.taps.update_count
    }

    fn iteration(&self) -> u64 {
        self.taps.iteration
    }
}
