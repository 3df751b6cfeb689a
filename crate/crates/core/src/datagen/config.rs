use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::DataGenError;
use crate::graphio::GraphFormat;

/// The reasoning task a sample asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    Grounded,
    Complete,
}

impl TaskKind {
    pub const ALL: [TaskKind; 2] = [TaskKind::Grounded, TaskKind::Complete];
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TaskKind::Grounded => "grounded",
            TaskKind::Complete => "complete",
        })
    }
}

impl FromStr for TaskKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "grounded" | "grd" => Ok(TaskKind::Grounded),
            "complete" | "com" => Ok(TaskKind::Complete),
            _ => Err(format!("unknown task `{s}` (expected grounded or complete)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenerationConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub per_n_train: usize,
    pub per_n_test: usize,
    /// Closed interval; each framework draws its own attack probability from it.
    pub attack_probability_range: (f64, f64),
    /// Whether `(a, a)` pairs are drawn at all.
    pub self_attacks: bool,
    pub master_seed: u64,
    pub task_mix: BTreeMap<TaskKind, f64>,
    pub format_mix: BTreeMap<GraphFormat, f64>,
    pub with_explanation: bool,
    /// Complete tasks embed the grounded labelling in the problem text.
    pub given_grounded: bool,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        Self {
            n_min: 6,
            n_max: 25,
            per_n_train: 3000,
            per_n_test: 100,
            attack_probability_range: DEFAULT_ATTACK_PROBABILITY_RANGE,
            self_attacks: false,
            master_seed: 0,
            task_mix: TaskKind::ALL.iter().map(|&t| (t, 0.5)).collect(),
            format_mix: GraphFormat::ALL.iter().map(|&f| (f, 1.0 / 3.0)).collect(),
            with_explanation: true,
            given_grounded: true,
        }
    }
}

/// Tuned so that extensions per framework land near 1.0 / 2.4 / 1.4 / 1.1
/// (grounded / complete / preferred / stable) over n in 6..=25.
pub const DEFAULT_ATTACK_PROBABILITY_RANGE: (f64, f64) = (0.05, 0.20);

const MIX_TOLERANCE: f64 = 1e-6;

fn check_mix<K: fmt::Debug>(name: &str, mix: &BTreeMap<K, f64>) -> Result<(), DataGenError> {
    if mix.is_empty() {
        return Err(DataGenError::Config(format!("{name} is empty")));
    }
    if let Some((k, w)) = mix.iter().find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
        return Err(DataGenError::Config(format!("{name} weight for {k:?} is {w}")));
    }
    let total: f64 = mix.values().sum();
    if (total - 1.0).abs() > MIX_TOLERANCE {
        return Err(DataGenError::Config(format!("{name} sums to {total}, not 1")));
    }
    Ok(())
}

impl GenerationConfig {
    /// Desk-scale variant of the defaults.
    pub fn smoke() -> Self {
        Self {
            per_n_train: 100,
            per_n_test: 10,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), DataGenError> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(DataGenError::Config(format!(
                "argument range {}..={} is empty or starts at 0",
                self.n_min, self.n_max
            )));
        }
        let (lo, hi) = self.attack_probability_range;
        if !(lo > 0.0 && hi < 1.0 && lo <= hi) {
            return Err(DataGenError::Config(format!(
                "attack probability range [{lo}, {hi}] must lie inside (0, 1)"
            )));
        }
        check_mix("task_mix", &self.task_mix)?;
        check_mix("format_mix", &self.format_mix)?;
        Ok(())
    }

    pub fn sizes(&self) -> impl Iterator<Item = usize> {
        self.n_min..=self.n_max
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorruptionConfig {
    /// Fraction of training samples to corrupt.
    pub noise_ratio: f64,
    pub seed: u64,
}

impl Default for CorruptionConfig {
    fn default() -> Self {
        Self {
            noise_ratio: 0.0,
            seed: 0,
        }
    }
}

impl CorruptionConfig {
    pub fn validate(&self) -> Result<(), DataGenError> {
        if !(0.0..=1.0).contains(&self.noise_ratio) {
            return Err(DataGenError::Config(format!(
                "noise ratio {} is outside [0, 1]",
                self.noise_ratio
            )));
        }
        Ok(())
    }
}
