//! Experiment configuration: identifiers, hyperparameters, defaults and the
//! key-value config file format.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::{Error, Result};

/// The algorithms the runner can instantiate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgorithmId {
    Lms,
    Nlms,
    SmNlms,
    Klms,
    /// KLMS gated by the novelty criterion.
    KlmsNovelty,
    /// KLMS gated by the coherence criterion.
    KlmsCoherence,
    /// Regression-form kernel NLMS (also known by its nonlinear-regression
    /// label NLR-KLMS).
    Knlms,
    CsmKnlms,
    NlrSmKnlms,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 9] = [
        AlgorithmId::Lms,
        AlgorithmId::Nlms,
        AlgorithmId::SmNlms,
        AlgorithmId::Klms,
        AlgorithmId::KlmsNovelty,
        AlgorithmId::KlmsCoherence,
        AlgorithmId::Knlms,
        AlgorithmId::CsmKnlms,
        AlgorithmId::NlrSmKnlms,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            AlgorithmId::Lms => "lms",
            AlgorithmId::Nlms => "nlms",
            AlgorithmId::SmNlms => "sm-nlms",
            AlgorithmId::Klms => "klms",
            AlgorithmId::KlmsNovelty => "klms-nc",
            AlgorithmId::KlmsCoherence => "klms-cc",
            AlgorithmId::Knlms => "knlms",
            AlgorithmId::CsmKnlms => "c-sm-knlms",
            AlgorithmId::NlrSmKnlms => "nlr-sm-knlms",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        // "knlms" and the regression label "nlr-klms" name the same recursion;
        // both are accepted and reported under their own label.
        Ok(match key.as_str() {
            "lms" => AlgorithmId::Lms,
            "nlms" => AlgorithmId::Nlms,
            "sm-nlms" | "smnlms" => AlgorithmId::SmNlms,
            "klms" => AlgorithmId::Klms,
            "klms-nc" => AlgorithmId::KlmsNovelty,
            "klms-cc" => AlgorithmId::KlmsCoherence,
            "knlms" | "nlr-klms" => AlgorithmId::Knlms,
            "c-sm-knlms" | "csm-knlms" | "csmknlms" => AlgorithmId::CsmKnlms,
            "nlr-sm-knlms" | "nlrsmknlms" => AlgorithmId::NlrSmKnlms,
            _ => return Err(Error::Config(format!("unknown algorithm {s:?}"))),
        })
    }

    /// Whether the algorithm keeps a kernel dictionary (and so has size and
    /// update-rate traces).
    pub fn is_kernel(&self) -> bool {
        !matches!(
            self,
            AlgorithmId::Lms | AlgorithmId::Nlms | AlgorithmId::SmNlms
        )
    }
}

/// The experiments the runner knows how to set up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentId {
    /// Nonlinear recursion identification, fixed dictionary.
    SysId1,
    /// Transient validation of the statistical model.
    Transient,
    /// Non-stationary switching system.
    Switching,
    /// Correlated three-component inputs through a Wiener-type system.
    Correlated,
    /// Cubic Hammerstein cascade, 24-dimensional inputs.
    Hammerstein,
    /// Mackey-Glass one-step-ahead prediction.
    MackeyGlass,
    /// Laser series prediction from an external data file.
    Laser,
    /// Dictionary-growth comparison on the Mackey-Glass task.
    DictGrowth,
    /// Noise-robustness sweep on the Mackey-Glass task.
    Robustness,
}

impl ExperimentId {
    pub fn label(&self) -> &'static str {
        match self {
            ExperimentId::SysId1 => "sysid1",
            ExperimentId::Transient => "transient",
            ExperimentId::Switching => "switching",
            ExperimentId::Correlated => "correlated",
            ExperimentId::Hammerstein => "hammerstein",
            ExperimentId::MackeyGlass => "mackey_glass",
            ExperimentId::Laser => "laser",
            ExperimentId::DictGrowth => "dict_growth",
            ExperimentId::Robustness => "robustness",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Ok(match key.as_str() {
            "sysid1" => ExperimentId::SysId1,
            "transient" => ExperimentId::Transient,
            "switching" => ExperimentId::Switching,
            "correlated" => ExperimentId::Correlated,
            "hammerstein" => ExperimentId::Hammerstein,
            "mackey_glass" | "mackeyglass" | "mg" => ExperimentId::MackeyGlass,
            "laser" => ExperimentId::Laser,
            "dict_growth" | "dictgrowth" => ExperimentId::DictGrowth,
            "robustness" => ExperimentId::Robustness,
            _ => return Err(Error::Config(format!("unknown experiment {s:?}"))),
        })
    }
}

/// Error bound specification: absolute, or relative to the noise deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaSpec {
    Absolute(f64),
    /// `sqrtK`: `sqrt(K) * sigma_n`.
    SqrtMultiple(f64),
    /// `Ksigma`: `K * sigma_n`.
    Multiple(f64),
}

impl GammaSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if let Some(rest) = t.strip_prefix("sqrt") {
            let k: f64 = rest
                .parse()
                .map_err(|_| Error::Config(format!("bad gamma spec {s:?}")))?;
            if k < 0.0 {
                return Err(Error::Config(format!("negative gamma spec {s:?}")));
            }
            return Ok(GammaSpec::SqrtMultiple(k));
        }
        if let Some(rest) = t.strip_suffix("sigma") {
            let k: f64 = rest
                .parse()
                .map_err(|_| Error::Config(format!("bad gamma spec {s:?}")))?;
            return Ok(GammaSpec::Multiple(k));
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::Config(format!("bad gamma spec {s:?}")))?;
        if v < 0.0 {
            return Err(Error::Config(format!("negative gamma spec {s:?}")));
        }
        Ok(GammaSpec::Absolute(v))
    }

    /// Resolve against the experiment's noise standard deviation.
    pub fn resolve(&self, sigma_n: f64) -> f64 {
        match self {
            GammaSpec::Absolute(v) => *v,
            GammaSpec::SqrtMultiple(k) => k.sqrt() * sigma_n,
            GammaSpec::Multiple(k) => k * sigma_n,
        }
    }
}

/// Full configuration of one experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    pub algorithms: Vec<AlgorithmId>,
    pub gamma: GammaSpec,
    pub epsilon: f64,
    pub bandwidth: f64,
    /// Step size of the non-set-membership algorithms.
    pub eta: f64,
    pub ensemble: usize,
    /// Training iterations (total sequence length for the sysid family).
    pub iterations: usize,
    /// Held-out pairs for the prediction tasks.
    pub test_len: usize,
    pub seed: u64,
    /// Fixed dictionary budget; `None` grows without bound.
    pub max_dict: Option<usize>,
    pub sigma_x: f64,
    pub sigma_n: f64,
    /// Embedding window and prediction horizon for the series tasks.
    pub window: usize,
    pub horizon: usize,
    /// Novelty thresholds (distance, error) for klms-nc.
    pub novelty: (f64, f64),
    /// Coherence threshold for klms-cc.
    pub coherence_mu0: f64,
    /// Switching experiment segment lengths.
    pub segments: (usize, usize, usize),
    /// External series file (laser experiment).
    pub data_path: Option<PathBuf>,
    /// Also emit the analytical curve where the experiment supports it.
    pub with_theory: bool,
    /// Monte-Carlo samples for the cross-correlation estimate.
    pub mc_samples: usize,
    /// Noise grid for the robustness sweep.
    pub noise_grid: Vec<f64>,
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    /// Paper-grade defaults per experiment; everything is overridable.
    pub fn defaults(experiment: ExperimentId) -> Self {
        let mut cfg = ExperimentConfig {
            experiment,
            algorithms: vec![AlgorithmId::NlrSmKnlms],
            gamma: GammaSpec::SqrtMultiple(5.0),
            epsilon: 1e-8,
            bandwidth: 0.025,
            eta: 0.05,
            ensemble: 500,
            iterations: 1500,
            test_len: 0,
            seed: 1,
            max_dict: Some(16),
            sigma_x: 0.15f64.sqrt(),
            sigma_n: 0.01,
            window: 7,
            horizon: 1,
            novelty: (0.1, 0.1),
            coherence_mu0: 0.5,
            segments: (4000, 50, 3950),
            data_path: None,
            with_theory: false,
            mc_samples: 200_000,
            noise_grid: vec![0.01, 0.02, 0.04, 0.08],
            out_dir: PathBuf::from("out"),
        };
        match experiment {
            ExperimentId::SysId1 => {
                cfg.algorithms = vec![
                    AlgorithmId::CsmKnlms,
                    AlgorithmId::NlrSmKnlms,
                    AlgorithmId::Knlms,
                ];
            }
            ExperimentId::Transient => {
                cfg.gamma = GammaSpec::SqrtMultiple(10.0);
                cfg.iterations = 3000;
                cfg.with_theory = true;
            }
            ExperimentId::Switching => {
                cfg.sigma_x = 0.15;
                cfg.iterations = 4000 + 50 + 3950;
                cfg.with_theory = true;
            }
            ExperimentId::Correlated => {
                cfg.sigma_n = 0.001;
                cfg.bandwidth = 1.0;
                cfg.iterations = 3000;
                cfg.ensemble = 100;
            }
            ExperimentId::Hammerstein => {
                cfg.sigma_x = (4e-4f64).sqrt();
                cfg.sigma_n = (1e-6f64).sqrt();
                cfg.bandwidth = 0.048;
                cfg.iterations = 3000;
                cfg.ensemble = 100;
                cfg.with_theory = true;
            }
            ExperimentId::MackeyGlass | ExperimentId::DictGrowth | ExperimentId::Robustness => {
                cfg.algorithms = match experiment {
                    ExperimentId::DictGrowth => vec![
                        AlgorithmId::Klms,
                        AlgorithmId::KlmsNovelty,
                        AlgorithmId::KlmsCoherence,
                        AlgorithmId::CsmKnlms,
                    ],
                    ExperimentId::Robustness => {
                        vec![AlgorithmId::Klms, AlgorithmId::CsmKnlms]
                    }
                    _ => vec![
                        AlgorithmId::Lms,
                        AlgorithmId::Nlms,
                        AlgorithmId::SmNlms,
                        AlgorithmId::Klms,
                        AlgorithmId::CsmKnlms,
                    ],
                };
                cfg.sigma_n = 0.04;
                cfg.bandwidth = 1.0;
                cfg.iterations = 1500;
                cfg.test_len = 100;
                cfg.ensemble = 50;
                cfg.max_dict = None;
                cfg.epsilon = 1e-2;
            }
            ExperimentId::Laser => {
                cfg.algorithms = vec![
                    AlgorithmId::Lms,
                    AlgorithmId::Nlms,
                    AlgorithmId::SmNlms,
                    AlgorithmId::Klms,
                    AlgorithmId::CsmKnlms,
                ];
                cfg.sigma_n = 0.04;
                cfg.bandwidth = 1.0;
                cfg.iterations = 3500;
                cfg.test_len = 100;
                cfg.ensemble = 50;
                cfg.max_dict = None;
                cfg.epsilon = 1e-2;
            }
        }
        cfg
    }

    pub fn resolved_gamma(&self) -> f64 {
        self.gamma.resolve(self.sigma_n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ensemble < 1 {
            return Err(Error::Config("ensemble size must be at least 1".into()));
        }
        if self.iterations < 2 {
            return Err(Error::Config("iterations must be at least 2".into()));
        }
        if self.experiment == ExperimentId::Laser && self.data_path.is_none() {
            return Err(Error::Data(
                "laser experiment needs --data <file> (one sample per line)".into(),
            ));
        }
        Ok(())
    }
}

/// Key-value config file: one `key = value` per line, `#` comments. Keys
/// mirror the CLI flags; flags override file values.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "{}:{}: expected key = value",
                path.display(),
                lineno + 1
            ))
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}
