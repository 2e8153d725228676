use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use symsens::divergence::{self, DivergenceRecord, SensitivityConfig, TrapEstimate};
use symsens::entropy::{
    self, BlockEntropyConfig, BlockEntropyCurve, Certificate, IntervalPartition, Word, WordCount,
};
use symsens::systems::{distance, Orbit};
use symsens::SystemSpec;

use crate::config::{Command, ExperimentConfig, Format};
use crate::error::{HarnessError, Result};
use crate::selftest;

pub const TOOL: &str = "symsens";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub tool: String,
    pub version: String,
    pub timestamp_unix: u64,
    pub config: ExperimentConfig,
    pub results: Value,
}

/// Tables exported with `--format csv`.
enum Table {
    Records(Vec<DivergenceRecord>),
    Words(Vec<WordCount>),
    Checks(Vec<selftest::Check>),
}

#[derive(Debug, Clone, Serialize)]
struct EquipartitionSummary {
    word_length: usize,
    h_bits: f64,
    epsilon: f64,
    threshold: f64,
    good_count: usize,
    bad_count: usize,
    good_mass: f64,
    bad_mass: f64,
    bad_words: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
struct EntropyPayload {
    system: SystemSpec,
    partition: IntervalPartition,
    curve: BlockEntropyCurve,
    known_entropy_bits: Option<f64>,
    equipartition: EquipartitionSummary,
}

#[derive(Debug, Clone, Serialize)]
struct CertificatePayload {
    system: SystemSpec,
    partition: IntervalPartition,
    curve: BlockEntropyCurve,
    h_hat: f64,
    certificate: Certificate,
    certificate_known_entropy: Option<Certificate>,
    /// Observed trap probability at the certified level.
    trap_at_delta_star: Option<TrapEstimate>,
    certified_sensitive: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
struct RecurrencePayload {
    system: SystemSpec,
    delta: f64,
    horizon: usize,
    pairs: usize,
    /// Mean over pairs of `exceed_count / (horizon + 1)`.
    time_average: f64,
    /// Fraction of initial pairs at distance at least `delta`.
    space_average: f64,
    pairs_with_exceedance: usize,
    horizon_checkpoints: Vec<usize>,
    /// Mean exceedance count up to each checkpoint.
    mean_exceed_count: Vec<f64>,
    /// `Σ_i mu(P_i^{-delta})` for the configured partition.
    boundary_mass: f64,
    /// Mean fraction of time the first coordinate spends in the boundary strips.
    boundary_visit_frequency: f64,
}

fn partition_for(cfg: &ExperimentConfig) -> Result<IntervalPartition> {
    IntervalPartition::for_system(&cfg.system, cfg.partition.clone())
        .map_err(|e| HarnessError::field("partition", e.to_string()))
}

fn block_config(cfg: &ExperimentConfig) -> BlockEntropyConfig {
    BlockEntropyConfig {
        n_max: cfg.n_max,
        orbits: cfg.orbits,
        orbit_length: cfg.orbit_length,
        seed: cfg.seed,
    }
}

fn run_sensitivity(cfg: &ExperimentConfig) -> Result<(Value, Table)> {
    let mut scfg = SensitivityConfig::new(cfg.delta_grid.values(), cfg.horizon, cfg.pairs, cfg.seed);
    scfg.quantile = cfg.quantile;
    scfg.threshold = cfg.threshold;
    scfg.probe_delta = cfg.delta;
    let (report, records) = divergence::sensitivity(&cfg.system, &scfg)?;
    Ok((serde_json::to_value(report)?, Table::Records(records)))
}

fn run_entropy(cfg: &ExperimentConfig) -> Result<(Value, Table)> {
    let partition = partition_for(cfg)?;
    let (curve, table) = entropy::block_entropy(&cfg.system, &partition, &block_config(cfg))?;
    let measures: BTreeMap<Word, f64> = table
        .iter()
        .map(|w| (w.symbols.clone(), w.probability))
        .collect();
    let h = curve.rate_estimate;
    let split = entropy::equipartition_classify(&measures, cfg.n_max, h, cfg.epsilon)?;
    let equipartition = EquipartitionSummary {
        word_length: split.word_length,
        h_bits: split.h_bits,
        epsilon: split.epsilon,
        threshold: split.threshold,
        good_count: split.good_words.len(),
        bad_count: split.bad_words.len(),
        good_mass: split.good_mass,
        bad_mass: split.bad_mass,
        bad_words: split.bad_words.iter().map(|w| entropy::format_word(w)).collect(),
    };
    let payload = EntropyPayload {
        system: cfg.system,
        partition,
        curve,
        known_entropy_bits: cfg.system.known_entropy_bits(),
        equipartition,
    };
    Ok((serde_json::to_value(payload)?, Table::Words(table)))
}

fn run_certificate(cfg: &ExperimentConfig) -> Result<(Value, Table)> {
    let partition = partition_for(cfg)?;
    let density = cfg.system.density();
    let (curve, table) = entropy::block_entropy(&cfg.system, &partition, &block_config(cfg))?;
    let h_hat = curve.rate_estimate;
    let certificate = entropy::certificate_delta(&partition, h_hat, density)?;
    let certificate_known_entropy = cfg
        .system
        .known_entropy_bits()
        .map(|h| entropy::certificate_delta(&partition, h, density))
        .transpose()?;
    let trap_at_delta_star = certificate
        .delta_star
        .map(|d| divergence::trap_probability(&cfg.system, d, cfg.horizon, cfg.pairs, cfg.seed))
        .transpose()?;
    let payload = CertificatePayload {
        system: cfg.system,
        partition,
        curve,
        h_hat,
        certificate,
        certificate_known_entropy,
        certified_sensitive: trap_at_delta_star.map(|t| t.is_sensitive(cfg.threshold)),
        trap_at_delta_star,
    };
    Ok((serde_json::to_value(payload)?, Table::Words(table)))
}

fn run_recurrence(cfg: &ExperimentConfig) -> Result<(Value, Table)> {
    let partition = partition_for(cfg)?;
    let boundary = partition.boundary_union(cfg.delta)?;
    let boundary_mass = (0..partition.len())
        .map(|i| entropy::internal_boundary_measure(&partition, i, cfg.delta, partition.density()))
        .sum::<symsens::Result<f64>>()?;
    let checkpoints = divergence::horizon_checkpoints(cfg.horizon);
    let system = cfg.system;
    let metric = system.metric();

    struct PairRun {
        record: DivergenceRecord,
        counts_at: Vec<usize>,
        boundary_hits: usize,
    }
    let runs = (0..cfg.pairs as u64)
        .into_par_iter()
        .map(|i| {
            let (x, y) = divergence::sample_pair(&system, cfg.seed, i);
            let record = divergence::divergence_record(&system, &x, &y, cfg.delta, cfg.horizon)?;
            let mut counts_at = Vec::with_capacity(checkpoints.len());
            let mut count = 0;
            let mut boundary_hits = 0;
            let mut next = 0;
            let orbits = Orbit::new(&system, &x)?.zip(Orbit::new(&system, &y)?);
            for (n, (a, b)) in orbits.take(cfg.horizon + 1).enumerate() {
                if distance(metric, a.value, b.value) >= cfg.delta {
                    count += 1;
                }
                if boundary.contains(a.value) {
                    boundary_hits += 1;
                }
                if next < checkpoints.len() && checkpoints[next] == n {
                    counts_at.push(count);
                    next += 1;
                }
            }
            Ok(PairRun {
                record,
                counts_at,
                boundary_hits,
            })
        })
        .collect::<symsens::Result<Vec<_>>>()?;

    let n = runs.len() as f64;
    let steps = (cfg.horizon + 1) as f64;
    let payload = RecurrencePayload {
        system,
        delta: cfg.delta,
        horizon: cfg.horizon,
        pairs: runs.len(),
        time_average: runs.iter().map(|r| r.record.exceed_count as f64 / steps).sum::<f64>() / n,
        space_average: runs
            .iter()
            .filter(|r| distance(metric, r.record.x, r.record.y) >= cfg.delta)
            .count() as f64
            / n,
        pairs_with_exceedance: runs.iter().filter(|r| r.record.exceed_count > 0).count(),
        mean_exceed_count: (0..checkpoints.len())
            .map(|j| runs.iter().map(|r| r.counts_at[j] as f64).sum::<f64>() / n)
            .collect(),
        horizon_checkpoints: checkpoints,
        boundary_mass,
        boundary_visit_frequency: runs.iter().map(|r| r.boundary_hits as f64 / steps).sum::<f64>() / n,
    };
    let records = runs.into_iter().map(|r| r.record).collect();
    Ok((serde_json::to_value(payload)?, Table::Records(records)))
}

fn run_selftest(cfg: &ExperimentConfig) -> Result<(Value, Table)> {
    let outcome = selftest::run_suite(cfg.seed)?;
    Ok((serde_json::to_value(&outcome)?, Table::Checks(outcome.checks)))
}

fn execute(cfg: &ExperimentConfig) -> Result<(Value, Table)> {
    match cfg.command {
        Command::Sensitivity => run_sensitivity(cfg),
        Command::Entropy => run_entropy(cfg),
        Command::Certificate => run_certificate(cfg),
        Command::Recurrence => run_recurrence(cfg),
        Command::Selftest => run_selftest(cfg),
    }
}

fn write_csv(path: &Path, table: &Table) -> Result<()> {
    let file = File::create(path).map_err(|source| HarnessError::Write {
        path: path.to_path_buf(),
        source,
    })?;
    let mut w = csv::Writer::from_writer(file);
    match table {
        Table::Records(rows) => rows.iter().try_for_each(|r| w.serialize(r))?,
        Table::Words(rows) => rows.iter().try_for_each(|r| w.serialize(r))?,
        Table::Checks(rows) => rows.iter().try_for_each(|r| w.serialize(r))?,
    }
    w.flush().map_err(|source| HarnessError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn write_json(path: &Path, report: &ExperimentReport) -> Result<()> {
    let mut file = File::create(path).map_err(|source| HarnessError::Write {
        path: path.to_path_buf(),
        source,
    })?;
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    file.write_all(text.as_bytes()).map_err(|source| HarnessError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Execute `config` on `config.workers` threads and write the report (or
/// the command's table, for `--format csv`) to `config.out` if set.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;
    let (results, table) = pool.install(|| execute(config))?;
    let report = ExperimentReport {
        tool: TOOL.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        config: config.clone(),
        results,
    };
    if let Some(path) = &config.out {
        match config.format {
            Format::Json => write_json(path, &report)?,
            Format::Csv => write_csv(path, &table)?,
        }
    }
    Ok(report)
}

fn num(v: &Value, key: &str) -> String {
    match v.get(key) {
        Some(Value::Number(n)) => format!("{:.6}", n.as_f64().unwrap_or(f64::NAN)),
        Some(Value::Null) | None => "-".to_string(),
        Some(other) => other.to_string(),
    }
}

/// A few human-readable lines describing `report`.
pub fn summary(report: &ExperimentReport) -> String {
    let cfg = &report.config;
    let r = &report.results;
    let mut lines = vec![format!("{} on {} (seed {})", cfg.command.name(), cfg.system, cfg.seed)];
    match cfg.command {
        Command::Sensitivity => {
            if let Some(Value::Array(traps)) = r.get("trap_probability") {
                for t in traps {
                    lines.push(format!(
                        "  delta {:>8}  trap {} ± {}",
                        num(t, "delta"),
                        num(t, "probability"),
                        num(t, "half_width")
                    ));
                }
            }
            lines.push(format!(
                "  delta_hat(q={}) {}  min {}  a_mu {}  diam {}",
                cfg.quantile,
                num(r, "delta_hat"),
                num(r, "delta_hat_min"),
                num(r, "a_mu_hat"),
                num(r, "diam_supp_hat")
            ));
            lines.push(format!("  largest sensitive level {}", num(r, "largest_sensitive_delta")));
        }
        Command::Entropy | Command::Certificate => {
            let curve = &r["curve"];
            lines.push(format!(
                "  h_hat {} bits/symbol (H_n/n {}), {} windows",
                num(curve, "rate_estimate"),
                num(curve, "per_symbol_estimate"),
                curve["sample_size"]
            ));
            if cfg.command == Command::Certificate {
                lines.push(format!(
                    "  delta* {}  K {}",
                    num(&r["certificate"], "delta_star"),
                    num(&r["certificate"], "k_delta")
                ));
                lines.push(format!(
                    "  trap at delta* {}",
                    num(&r["trap_at_delta_star"], "probability")
                ));
            } else {
                lines.push(format!("  equipartition bad mass {}", num(&r["equipartition"], "bad_mass")));
            }
        }
        Command::Recurrence => {
            lines.push(format!(
                "  time average {}  space average {}  pairs exceeding {}",
                num(r, "time_average"),
                num(r, "space_average"),
                r["pairs_with_exceedance"]
            ));
            lines.push(format!(
                "  boundary visits {}  boundary mass {}",
                num(r, "boundary_visit_frequency"),
                num(r, "boundary_mass")
            ));
        }
        Command::Selftest => {
            if let Some(Value::Array(checks)) = r.get("checks") {
                for c in checks {
                    let ok = c["passed"].as_bool().unwrap_or(false);
                    lines.push(format!(
                        "  [{}] {}",
                        if ok { "pass" } else { "FAIL" },
                        c["name"].as_str().unwrap_or("?")
                    ));
                }
            }
        }
    }
    lines.join("\n")
}
