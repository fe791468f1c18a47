//! Seeded generators for the benchmark systems and series utilities.
//!
//! Every generator is a pure function of its parameters and seed; rerunning
//! with the same seed reproduces the output bit for bit.

mod mackey_glass;
mod systems;

pub use mackey_glass::{mackey_glass, mackey_glass_series, MackeyGlassParams};
pub use systems::{
    correlated_input_system, hammerstein_system, hammerstein_system_with, nonlinear_system1,
    switching_system, HAMMERSTEIN_COEFFS,
};

use std::path::Path;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

/// A training sequence of `(input vector, desired output)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence {
    pub inputs: Vec<Vec<f64>>,
    pub desired: Vec<f64>,
    /// Standard deviation of the observation noise applied to `desired`.
    pub noise_std: f64,
    pub seed: u64,
}

impl Sequence {
    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.inputs
            .iter()
            .map(|x| x.as_slice())
            .zip(self.desired.iter().copied())
    }
}

pub(crate) fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn normal(rng: &mut ChaCha8Rng, std: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    std * z
}

/// Time-delay embedding: input `i` is the window
/// `[s(i), ..., s(i + window - 1)]` and the desired output is
/// `s(i + window + horizon - 1)`.
pub fn embed_series(series: &[f64], window: usize, horizon: usize) -> Result<Sequence> {
    if window == 0 || horizon == 0 {
        return Err(Error::InvalidParameter {
            name: "window/horizon",
            value: 0.0,
            reason: "embedding window and horizon must be positive",
        });
    }
    if series.len() <= window + horizon - 1 {
        return Err(Error::EmptyInput("series too short for the embedding"));
    }
    let count = series.len() - window - horizon + 1;
    let mut inputs = Vec::with_capacity(count);
    let mut desired = Vec::with_capacity(count);
    for i in 0..count {
        inputs.push(series[i..i + window].to_vec());
        desired.push(series[i + window + horizon - 1]);
    }
    Ok(Sequence {
        inputs,
        desired,
        noise_std: 0.0,
        seed: 0,
    })
}

/// Corrupt the desired outputs with i.i.d. zero-mean Gaussian noise of
/// standard deviation `sigma`; inputs are untouched.
pub fn add_awgn(seq: &Sequence, sigma: f64, seed: u64) -> Result<Sequence> {
    if sigma < 0.0 {
        return Err(Error::InvalidParameter {
            name: "sigma",
            value: sigma,
            reason: "noise standard deviation must be non-negative",
        });
    }
    if sigma == 0.0 {
        return Ok(seq.clone());
    }
    let mut rng = rng_from(seed);
    let desired = seq
        .desired
        .iter()
        .map(|d| d + normal(&mut rng, sigma))
        .collect();
    Ok(Sequence {
        inputs: seq.inputs.clone(),
        desired,
        noise_std: sigma,
        seed,
    })
}

/// Corrupt a raw series with i.i.d. Gaussian noise (the time-series
/// experiments corrupt the series before embedding, so inputs and targets
/// are both noisy).
pub fn add_noise_series(series: &[f64], sigma: f64, seed: u64) -> Vec<f64> {
    if sigma == 0.0 {
        return series.to_vec();
    }
    let mut rng = rng_from(seed);
    series.iter().map(|v| v + normal(&mut rng, sigma)).collect()
}

/// Load a one-value-per-line numeric series (the laser dataset format).
pub fn load_series<P: AsRef<Path>>(path: P) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Data(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let v: f64 = t.parse().map_err(|_| {
            Error::Data(format!(
                "{}:{}: not a number: {t:?}",
                path.display(),
                lineno + 1
            ))
        })?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::Data(format!("{}: no samples", path.display())));
    }
    Ok(out)
}
