//! Kernel expansion filters: the set-membership algorithms and the kernel
//! baselines.
//!
//! All four machines share the same storage (a [`Dictionary`]) and the same
//! step skeleton: evaluate the kernel vector against the stored centers, form
//! the output and the a-priori error, then apply the algorithm's update rule.
//!
//! With `max_dict` set, an update on a full dictionary overwrites the oldest
//! center instead of appending (FIFO analysis mode). The incoming center
//! enters with coefficient zero and the error is re-derived against the
//! post-replacement expansion before the coefficient update, which keeps the
//! a-posteriori error pinned at the bound for the set-membership rules. The
//! re-derivation is algebraic (the evicted center's contribution is
//! subtracted and the self-kernel substituted); no second evaluation pass is
//! needed.

use crate::dictionary::Dictionary;
use crate::kernels::{self, KernelSpec};
use crate::{Error, Result};

use super::{step_size, AdaptiveFilter, StepOutcome};

/// Hyperparameters shared by the set-membership kernel filters.
#[derive(Debug, Clone)]
pub struct SmKnlmsParams {
    /// Error bound defining the constraint set; updates fire on `|e| > gamma`.
    pub gamma: f64,
    /// Regularizer in the update denominators.
    pub epsilon: f64,
    pub kernel: KernelSpec,
    /// Fixed dictionary budget; `None` grows without bound.
    pub max_dict: Option<usize>,
}

impl SmKnlmsParams {
    pub fn new(gamma: f64, kernel: KernelSpec) -> Result<Self> {
        Self::with_options(gamma, 1e-8, kernel, None)
    }

    pub fn with_options(
        gamma: f64,
        epsilon: f64,
        kernel: KernelSpec,
        max_dict: Option<usize>,
    ) -> Result<Self> {
        if !(gamma >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
                reason: "error bound must be non-negative",
            });
        }
        if !(epsilon >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: epsilon,
                reason: "regularizer must be non-negative",
            });
        }
        Ok(SmKnlmsParams {
            gamma,
            epsilon,
            kernel,
            max_dict,
        })
    }
}

/// Dictionary admission policy for the KLMS baseline.
#[derive(Debug, Clone, Copy)]
pub enum Admission {
    /// Store every input (plain KLMS; the dictionary grows linearly).
    Always,
    /// Novelty criterion: minimum distance and error magnitude thresholds.
    Novelty { delta1: f64, delta2: f64 },
    /// Coherence criterion: maximum kernel value threshold.
    Coherence { mu0: f64 },
}

/// Shared state and helpers.
#[derive(Debug, Clone)]
struct Machine {
    dict: Dictionary,
    kernel: KernelSpec,
    update_count: u64,
    iteration: u64,
}

impl Machine {
    fn new(kernel: KernelSpec, max_dict: Option<usize>) -> Self {
        Machine {
            dict: Dictionary::new(max_dict),
            kernel,
            update_count: 0,
            iteration: 0,
        }
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.is_empty() {
            return Err(Error::EmptyInput("input vector must have dimension >= 1"));
        }
        if let Some(d) = self.dict.dim() {
            if x.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: x.len(),
                });
            }
        }
        Ok(())
    }

    fn kernel_vector(&self, x: &[f64]) -> Vec<f64> {
        self.dict
            .centers()
            .iter()
            .map(|c| kernels::evaluate_unchecked(&self.kernel, x, c))
            .collect()
    }

    /// Plain expansion output `sum_k a_k kappa(x, c_k)`.
    fn predict_plain(&self, kv: &[f64]) -> f64 {
        kv.iter().zip(self.dict.coeffs()).map(|(k, a)| k * a).sum()
    }

    /// Center-normalized output `sum_k a_k kappa(x, c_k) / (eps + kappa(c_k, c_k))`.
    fn predict_normalized(&self, kv: &[f64], epsilon: f64) -> f64 {
        if self.kernel.is_gaussian() {
            // kappa(c, c) = 1 for every center.
            self.predict_plain(kv) / (epsilon + 1.0)
        } else {
            kv.iter()
                .zip(self.dict.coeffs())
                .zip(self.dict.centers())
                .map(|((k, a), c)| a * k / (epsilon + self.kernel.self_eval(c)))
                .sum()
        }
    }
}

/// Centroid-based set-membership kernel NLMS.
///
/// Output `f(x) = sum_k a_k kappa(x, c_k) / (eps + kappa(c_k, c_k))`; on
/// innovation (`|e| > gamma`) the input is stored with coefficient
/// `mu e`, `mu = 1 - gamma/|e|`. Nothing changes otherwise, which is what
/// bounds the dictionary growth.
#[derive(Debug, Clone)]
pub struct CsmKnlms {
    machine: Machine,
    params: SmKnlmsParams,
}

impl CsmKnlms {
    pub fn new(params: SmKnlmsParams) -> Self {
        let machine = Machine::new(params.kernel, params.max_dict);
        CsmKnlms { machine, params }
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.machine.dict
    }

    pub fn params(&self) -> &SmKnlmsParams {
        &self.params
    }
}

impl AdaptiveFilter for CsmKnlms {
    fn step(&mut self, x: &[f64], d: f64) -> Result<StepOutcome> {
        self.machine.check_input(x)?;
        self.machine.iteration += 1;
        let eps = self.params.epsilon;
        let kv = self.machine.kernel_vector(x);
        let prediction = self.machine.predict_normalized(&kv, eps);
        let error = d - prediction;

        if error.abs() <= self.params.gamma {
            return Ok(StepOutcome {
                prediction,
                error,
                step_size: 0.0,
                updated: false,
            });
        }
        self.machine.update_count += 1;

        let mu;
        if self.machine.dict.is_full() {
            // Evict the oldest center: drop its contribution from the output,
            // then size the new coefficient against the corrected error.
            let slot = self.machine.dict.oldest_slot();
            let evicted = kv[slot] * self.machine.dict.coeffs()[slot]
                / (eps + self.machine.kernel.self_eval(&self.machine.dict.centers()[slot]));
            let eff_error = error + evicted;
            mu = step_size(eff_error, self.params.gamma);
            self.machine
                .dict
                .replace_oldest(x.to_vec(), mu * eff_error)?;
        } else {
            mu = step_size(error, self.params.gamma);
            self.machine.dict.append(x.to_vec(), mu * error)?;
        }

        Ok(StepOutcome {
            prediction,
            error,
            step_size: mu,
            updated: true,
        })
    }

    fn predict(&self, x: &[f64]) -> Result<f64> {
        self.machine.check_input(x)?;
        let kv = self.machine.kernel_vector(x);
        Ok(self.machine.predict_normalized(&kv, self.params.epsilon))
    }

    fn model_size(&self) -> usize {
        self.machine.dict.len()
    }

    fn update_count(&self) -> u64 {
        self.machine.update_count
    }

    fn iteration(&self) -> u64 {
        self.machine.iteration
    }
}

/// Nonlinear-regression set-membership kernel NLMS.
///
/// Output `y = kappa_delta^T a`; on innovation the coefficient vector is
/// zero-extended and updated along the extended kernel vector,
/// `a <- [a; 0] + mu e kappa_delta / (eps + ||kappa_delta||^2)`, with the
/// self-evaluation `kappa(x, x)` included.
#[derive(Debug, Clone)]
pub struct NlrSmKnlms {
    machine: Machine,
    params: SmKnlmsParams,
}

impl NlrSmKnlms {
    pub fn new(params: SmKnlmsParams) -> Self {
        let machine = Machine::new(params.kernel, params.max_dict);
        NlrSmKnlms { machine, params }
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.machine.dict
    }
}

/// Shared normalized-regression update; `Knlms` reuses it with a constant
/// step size and no innovation gate.
fn nlr_update(
    machine: &mut Machine,
    x: &[f64],
    error: f64,
    kv: Vec<f64>,
    epsilon: f64,
    mu_of: impl Fn(f64) -> f64,
) -> Result<f64> {
    let self_k = machine.kernel.self_eval(x);
    if machine.dict.is_full() {
        let slot = machine.dict.oldest_slot();
        // Swap the evicted center's kernel value for the self-evaluation and
        // re-derive the error against the zero-coefficient replacement.
        let mut kv = kv;
        let eff_error = error + kv[slot] * machine.dict.coeffs()[slot];
        kv[slot] = self_k;
        machine.dict.replace_oldest(x.to_vec(), 0.0)?;
        let mu = mu_of(eff_error);
        let norm_sq: f64 = kv.iter().map(|k| k * k).sum();
        let t = mu * eff_error / (epsilon + norm_sq);
        for (a, k) in machine.dict.coeffs_mut().iter_mut().zip(&kv) {
            *a += t * k;
        }
        Ok(mu)
    } else {
        let mu = mu_of(error);
        let norm_sq: f64 = kv.iter().map(|k| k * k).sum::<f64>() + self_k * self_k;
        let t = mu * error / (epsilon + norm_sq);
        for (a, k) in machine.dict.coeffs_mut().iter_mut().zip(&kv) {
            *a += t * k;
        }
        machine.dict.append(x.to_vec(), t * self_k)?;
        Ok(mu)
    }
}

impl AdaptiveFilter for NlrSmKnlms {
    fn step(&mut self, x: &[f64], d: f64) -> Result<StepOutcome> {
        self.machine.check_input(x)?;
        self.machine.iteration += 1;
        let kv = self.machine.kernel_vector(x);
        let prediction = self.machine.predict_plain(&kv);
        let error = d - prediction;

        if error.abs() <= self.params.gamma {
            return Ok(StepOutcome {
                prediction,
                error,
                step_size: 0.0,
                updated: false,
            });
        }
        self.machine.update_count += 1;
        let gamma = self.params.gamma;
        let mu = nlr_update(&mut self.machine, x, error, kv, self.params.epsilon, |e| {
            step_size(e, gamma)
        })?;

        Ok(StepOutcome {
            prediction,
            error,
            step_size: mu,
            updated: true,
        })
    }

    fn predict(&self, x: &[f64]) -> Result<f64> {
        self.machine.check_input(x)?;
        let kv = self.machine.kernel_vector(x);
        Ok(self.machine.predict_plain(&kv))
    }

    fn model_size(&self) -> usize {
        self.machine.dict.len()
    }

    fn update_count(&self) -> u64 {
        self.machine.update_count
    }

    fn iteration(&self) -> u64 {
        self.machine.iteration
    }
}

/// Kernel LMS baseline: plain expansion output, unconditional coefficient
/// append `eta e`, optionally gated by a dictionary admission criterion.
#[derive(Debug, Clone)]
pub struct Klms {
    machine: Machine,
    eta: f64,
    admission: Admission,
}

impl Klms {
    pub fn new(kernel: KernelSpec, eta: f64, max_dict: Option<usize>) -> Self {
        Klms {
            machine: Machine::new(kernel, max_dict),
            eta,
            admission: Admission::Always,
        }
    }

    pub fn with_admission(kernel: KernelSpec, eta: f64, admission: Admission) -> Self {
        Klms {
            machine: Machine::new(kernel, None),
            eta,
            admission,
        }
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.machine.dict
    }
}

impl AdaptiveFilter for Klms {
    fn step(&mut self, x: &[f64], d: f64) -> Result<StepOutcome> {
        self.machine.check_input(x)?;
        self.machine.iteration += 1;
        let kv = self.machine.kernel_vector(x);
        let prediction = self.machine.predict_plain(&kv);
        let error = d - prediction;

        let admit = match self.admission {
            Admission::Always => true,
            Admission::Novelty { delta1, delta2 } => {
                self.machine.dict.novelty_admit(x, error, delta1, delta2)?
            }
            Admission::Coherence { mu0 } => {
                self.machine.dict.coherence_admit(x, &self.machine.kernel, mu0)?
            }
        };
        if !admit {
            return Ok(StepOutcome {
                prediction,
                error,
                step_size: 0.0,
                updated: false,
            });
        }
        self.machine.update_count += 1;

        if self.machine.dict.is_full() {
            let slot = self.machine.dict.oldest_slot();
            let evicted = kv[slot] * self.machine.dict.coeffs()[slot];
            let eff_error = error + evicted;
            self.machine
                .dict
                .replace_oldest(x.to_vec(), self.eta * eff_error)?;
        } else {
            self.machine.dict.append(x.to_vec(), self.eta * error)?;
        }

        Ok(StepOutcome {
            prediction,
            error,
            step_size: self.eta,
            updated: true,
        })
    }

    fn predict(&self, x: &[f64]) -> Result<f64> {
        self.machine.check_input(x)?;
        let kv = self.machine.kernel_vector(x);
        Ok(self.machine.predict_plain(&kv))
    }

    fn model_size(&self) -> usize {
        self.machine.dict.len()
    }

    fn update_count(&self) -> u64 {
        self.machine.update_count
    }

    fn iteration(&self) -> u64 {
        self.machine.iteration
    }
}

/// Kernel NLMS in regression form: the [`NlrSmKnlms`] recursion with a
/// constant step size and no innovation gate.
#[derive(Debug, Clone)]
pub struct Knlms {
    machine: Machine,
    eta: f64,
    epsilon: f64,
}

impl Knlms {
    pub fn new(kernel: KernelSpec, eta: f64, epsilon: f64, max_dict: Option<usize>) -> Self {
        Knlms {
            machine: Machine::new(kernel, max_dict),
            eta,
            epsilon,
        }
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.machine.dict
    }
}

impl AdaptiveFilter for Knlms {
    fn step(&mut self, x: &[f64], d: f64) -> Result<StepOutcome> {
        self.machine.check_input(x)?;
        self.machine.iteration += 1;
        let kv = self.machine.kernel_vector(x);
        let prediction = self.machine.predict_plain(&kv);
        let error = d - prediction;
        self.machine.update_count += 1;

        let eta = self.eta;
        nlr_update(&mut self.machine, x, error, kv, self.epsilon, |_| eta)?;

        Ok(StepOutcome {
            prediction,
            error,
            step_size: eta,
            updated: true,
        })
    }

    fn predict(&self, x: &[f64]) -> Result<f64> {
        self.machine.check_input(x)?;
        let kv = self.machine.kernel_vector(x);
        Ok(self.machine.predict_plain(&kv))
    }

    fn model_size(&self) -> usize {
        self.machine.dict.len()
    }

    fn update_count(&self) -> u64 {
        self.machine.update_count
    }

    fn iteration(&self) -> u64 {
        self.machine.iteration
    }
}
