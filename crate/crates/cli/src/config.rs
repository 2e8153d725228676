use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use symsens::SystemSpec;

use crate::error::{HarnessError, Result};

/// Default seed; runs are reproducible unless a seed is chosen explicitly.
pub const DEFAULT_SEED: u64 = 20_050_301;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Sensitivity,
    Entropy,
    Certificate,
    Recurrence,
    Selftest,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Sensitivity,
        Command::Entropy,
        Command::Certificate,
        Command::Recurrence,
        Command::Selftest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Sensitivity => "sensitivity",
            Command::Entropy => "entropy",
            Command::Certificate => "certificate",
            Command::Recurrence => "recurrence",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(HarnessError::field("format", format!("expected json or csv, got `{s}`"))),
        }
    }
}

/// `start:stop:steps`, evenly spaced and inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaGrid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl DeltaGrid {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let width = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.stop } else { self.start + i as f64 * width })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let bad = |reason: &str| Err(HarnessError::field("delta-grid", reason));
        if !(self.start > 0.0) || !self.stop.is_finite() {
            return bad("levels must be positive and finite");
        }
        if self.steps == 0 {
            return bad("need at least one step");
        }
        if self.steps > 1 && self.start >= self.stop {
            return bad("start must be below stop");
        }
        Ok(())
    }
}

impl FromStr for DeltaGrid {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || HarnessError::field("delta-grid", format!("expected start:stop:steps, got `{s}`"));
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, steps] = parts[..] else {
            return Err(bad());
        };
        let grid = DeltaGrid {
            start: start.trim().parse().map_err(|_| bad())?,
            stop: stop.trim().parse().map_err(|_| bad())?,
            steps: steps.trim().parse().map_err(|_| bad())?,
        };
        grid.validate()?;
        Ok(grid)
    }
}

impl fmt::Display for DeltaGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.steps)
    }
}

/// Comma-separated interior breakpoints, e.g. `0.25,0.5`.
pub fn parse_partition(s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    let points = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| HarnessError::field("partition", format!("`{p}` is not a number")))
        })
        .collect::<Result<Vec<f64>>>()?;
    check_partition(&points)?;
    Ok(points)
}

fn check_partition(points: &[f64]) -> Result<()> {
    if points.iter().any(|&b| !(b > 0.0 && b < 1.0)) {
        return Err(HarnessError::field("partition", "breakpoints must lie strictly inside (0, 1)"));
    }
    if points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HarnessError::field("partition", "breakpoints must be strictly increasing"));
    }
    Ok(())
}

/// The fully resolved configuration of one run; echoed verbatim in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub system: SystemSpec,
    pub pairs: usize,
    pub orbits: usize,
    pub orbit_length: usize,
    pub horizon: usize,
    pub delta_grid: DeltaGrid,
    /// Probe level for exceedance counts.
    pub delta: f64,
    pub partition: Vec<f64>,
    pub n_max: usize,
    pub quantile: f64,
    pub threshold: f64,
    /// Slack in the equipartition split.
    pub epsilon: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub workers: usize,
}

impl ExperimentConfig {
    /// Defaults for `command`.
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            command,
            system: SystemSpec::tent(),
            pairs: 10_000,
            orbits: 2_000,
            orbit_length: 256,
            horizon: 200,
            delta_grid: DeltaGrid {
                start: 0.05,
                stop: 1.0,
                steps: 20,
            },
            delta: 0.5,
            partition: vec![0.5],
            n_max: 12,
            quantile: 0.01,
            threshold: 0.01,
            epsilon: 0.1,
            seed: DEFAULT_SEED,
            out: None,
            format: Format::Json,
            workers: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |field: &'static str, v: usize| {
            if v == 0 {
                Err(HarnessError::field(field, "must be at least 1"))
            } else {
                Ok(())
            }
        };
        positive("pairs", self.pairs)?;
        positive("orbits", self.orbits)?;
        positive("orbit-length", self.orbit_length)?;
        positive("horizon", self.horizon)?;
        positive("n-max", self.n_max)?;
        positive("workers", self.workers)?;
        if self.orbit_length < self.n_max {
            return Err(HarnessError::field("orbit-length", "must be at least --n-max"));
        }
        self.delta_grid.validate()?;
        check_partition(&self.partition)?;
        if !(self.delta > 0.0) {
            return Err(HarnessError::field("delta", "must be positive"));
        }
        if !(0.0..=1.0).contains(&self.quantile) {
            return Err(HarnessError::field("quantile", "must lie in [0, 1]"));
        }
        if !(self.threshold > 0.0 && self.threshold <= 1.0) {
            return Err(HarnessError::field("threshold", "must lie in (0, 1]"));
        }
        if !(self.epsilon > 0.0) {
            return Err(HarnessError::field("epsilon", "must be positive"));
        }
        Ok(())
    }

    /// Fields that must agree for two runs to be comparable. Seed, output
    /// location, format and worker count are excluded.
    pub(crate) fn comparable(&self) -> ExperimentConfig {
        ExperimentConfig {
            seed: 0,
            out: None,
            format: Format::Json,
            workers: 1,
            ..self.clone()
        }
    }
}

pub fn parse_system(s: &str) -> Result<SystemSpec> {
    s.parse()
        .map_err(|e: symsens::Error| HarnessError::field("system", e.to_string()))
}
