//! Experiment configuration: JSON-file backed, CLI-overridable, echoed
//! into run output for provenance.

use crate::error::{Error, Result};
use crate::limits::{Regime, TimeForm};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Which verification suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Profile,
    Moments,
    Couplings,
    Asymptotics,
    All,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Profile => "profile",
            Suite::Moments => "moments",
            Suite::Couplings => "couplings",
            Suite::Asymptotics => "asymptotics",
            Suite::All => "all",
        }
    }
}

/// Output table format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// The window-coordinate grid: either explicit points or a linear range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaGrid {
    Explicit(Vec<f64>),
    Linear { min: f64, max: f64, steps: usize },
}

impl ThetaGrid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            ThetaGrid::Explicit(v) => v.clone(),
            ThetaGrid::Linear { min, max, steps } => {
                if *steps <= 1 {
                    return vec![*min];
                }
                let h = (max - min) / (*steps as f64 - 1.0);
                (0..*steps).map(|i| min + i as f64 * h).collect()
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let pts = self.points();
        if pts.is_empty() {
            return Err(Error::contract("theta grid must be non-empty"));
        }
        if pts.iter().any(|t| !t.is_finite()) {
            return Err(Error::contract("theta grid must be finite"));
        }
        if pts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::contract("theta grid must be strictly increasing"));
        }
        Ok(())
    }
}

/// Full description of a run. Serialized verbatim into run provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: Suite,
    /// Population sizes, increasing. `k` per ladder point comes from the
    /// regime rule unless `k_ladder` pins it explicitly.
    pub n_ladder: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_ladder: Option<Vec<u64>>,
    pub regime: Regime,
    pub theta_grid: ThetaGrid,
    pub seed: u64,
    /// Trajectory count for coupled-pair and path statistics.
    pub samples: u64,
    /// Sample count for the Kolmogorov–Smirnov checks.
    pub ks_samples: u64,
    /// Named tolerance overrides; missing names fall back to the
    /// registry in [`crate::tolerances`].
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            suite: Suite::All,
            n_ladder: vec![512, 2048, 8192],
            k_ladder: None,
            regime: Regime::Large,
            theta_grid: ThetaGrid::Explicit(vec![-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]),
            seed: 20260810,
            samples: 100_000,
            ks_samples: 1_000_000,
            tolerances: BTreeMap::new(),
            output: None,
            format: OutputFormat::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_ladder.is_empty() {
            return Err(Error::contract("n_ladder must be non-empty"));
        }
        if self.n_ladder.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::contract("n_ladder must be strictly increasing"));
        }
        if let Some(ks) = &self.k_ladder {
            if ks.len() != self.n_ladder.len() {
                return Err(Error::contract(
                    "k_ladder must match n_ladder in length when given",
                ));
            }
        }
        self.theta_grid.validate()?;
        if self.samples == 0 || self.ks_samples == 0 {
            return Err(Error::contract("sample counts must be positive"));
        }
        for (name, tol) in &self.tolerances {
            if !tol.is_finite() || *tol <= 0.0 {
                return Err(Error::contract(format!(
                    "tolerance override {name} = {tol} must be finite and > 0"
                )));
            }
        }
        if let Regime::Critical { alpha, .. } = self.regime {
            if !alpha.is_finite() || alpha <= 0.0 {
                return Err(Error::contract(format!(
                    "critical regime alpha {alpha} must be finite and > 0"
                )));
            }
        }
        Ok(())
    }

    /// Tolerance override by name, else the registry default.
    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    /// The `(n, k)` pairs of the ladder, `k` from the override or the
    /// regime rule.
    pub fn ladder(&self) -> Vec<(u64, u64)> {
        self.n_ladder
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let k = self
                    .k_ladder
                    .as_ref()
                    .map(|ks| ks[i])
                    .unwrap_or_else(|| self.regime.ladder_k(n));
                (n, k)
            })
            .collect()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| Error::contract(format!("config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Canonical JSON used for provenance echoes and determinism checks.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    /// Default configuration for the critical-regime profile ladder.
    pub fn critical_profile_defaults() -> Self {
        ExperimentConfig {
            suite: Suite::Profile,
            n_ladder: vec![10_000, 100_000, 1_000_000],
            regime: Regime::Critical {
                alpha: 1.0,
                time_form: TimeForm::HalfLogK,
            },
            ..Default::default()
        }
    }

    /// Default configuration for the small-regime profile ladder.
    pub fn small_profile_defaults() -> Self {
        ExperimentConfig {
            suite: Suite::Profile,
            n_ladder: vec![10_000, 100_000, 1_000_000],
            regime: Regime::Small,
            ..Default::default()
        }
    }
}
