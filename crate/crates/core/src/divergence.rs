//! Pair-divergence estimators.
//!
//! Pairs `(x, y)` are drawn independently from `mu x mu` and pushed forward by
//! `T x T`. A pair is *trapped* at level `delta` up to horizon `N` when
//! `d(T^n x, T^n y) < delta` for every `0 <= n <= N`; equivalently when its
//! running supremum of distances stays below `delta`. The fraction of trapped
//! pairs estimates the measure of the set that must be null for `delta` to be
//! a sensitivity constant.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{self, Proportion};
use crate::stream::stream;
use crate::systems::{self, distance, Metric, Orbit, StatePoint, SystemSpec};

/// Orbit-distance statistics of a single pair up to a horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceRecord {
    pub x: f64,
    pub y: f64,
    /// `max_{0<=n<=N} d(T^n x, T^n y)`.
    pub sup_distance: f64,
    /// Least `n` with `d(T^n x, T^n y) >= delta`.
    pub first_exceed: Option<usize>,
    /// Number of `n <= N` with `d(T^n x, T^n y) >= delta`.
    pub exceed_count: usize,
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 {
        Ok(())
    } else {
        Err(Error::param("delta", format!("must be positive, got {delta}")))
    }
}

/// Distances `d(T^n x, T^n y)` for `n = 0, 1, ...`.
pub fn pair_distances(
    system: &SystemSpec,
    x: &StatePoint,
    y: &StatePoint,
) -> Result<impl Iterator<Item = f64>> {
    let metric = system.metric();
    Ok(Orbit::new(system, x)?
        .zip(Orbit::new(system, y)?)
        .map(move |(a, b)| distance(metric, a.value, b.value)))
}

pub fn divergence_record(
    system: &SystemSpec,
    x: &StatePoint,
    y: &StatePoint,
    delta: f64,
    horizon: usize,
) -> Result<DivergenceRecord> {
    check_delta(delta)?;
    let mut record = DivergenceRecord {
        x: x.value,
        y: y.value,
        sup_distance: 0.0,
        first_exceed: None,
        exceed_count: 0,
    };
    for (n, d) in pair_distances(system, x, y)?.take(horizon + 1).enumerate() {
        record.sup_distance = record.sup_distance.max(d);
        if d >= delta {
            record.exceed_count += 1;
            record.first_exceed.get_or_insert(n);
        }
    }
    Ok(record)
}

pub fn sup_divergence(system: &SystemSpec, x: &StatePoint, y: &StatePoint, horizon: usize) -> Result<f64> {
    Ok(pair_distances(system, x, y)?
        .take(horizon + 1)
        .fold(0.0, f64::max))
}

/// `(exceed_count, first_exceed)` at level `delta`.
pub fn exceed_statistics(
    system: &SystemSpec,
    x: &StatePoint,
    y: &StatePoint,
    delta: f64,
    horizon: usize,
) -> Result<(usize, Option<usize>)> {
    let r = divergence_record(system, x, y, delta, horizon)?;
    Ok((r.exceed_count, r.first_exceed))
}

/// Pair `index` under `seed`: both coordinates come from stream `(seed, index)`.
pub fn sample_pair(system: &SystemSpec, seed: u64, index: u64) -> (StatePoint, StatePoint) {
    let mut rng = stream(seed, index);
    let x = systems::draw(system, &mut rng);
    let y = systems::draw(system, &mut rng);
    (x, y)
}

pub fn sample_pairs(system: &SystemSpec, seed: u64, count: usize) -> Vec<(StatePoint, StatePoint)> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| sample_pair(system, seed, i))
        .collect()
}

/// Trap-probability estimate at one level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapEstimate {
    pub delta: f64,
    pub probability: f64,
    pub half_width: f64,
    pub trapped: usize,
    pub pairs: usize,
}

impl TrapEstimate {
    fn from_counts(delta: f64, trapped: usize, pairs: usize) -> Self {
        let p = Proportion::new(trapped, pairs);
        TrapEstimate {
            delta,
            probability: p.estimate,
            half_width: p.half_width,
            trapped,
            pairs,
        }
    }

    /// The estimate plus its half-width is below `threshold`.
    pub fn is_sensitive(&self, threshold: f64) -> bool {
        self.probability + self.half_width < threshold
    }
}

/// Monte Carlo estimate of `mu x mu` of the pairs that stay closer than
/// `delta` at every step up to `horizon`.
pub fn trap_probability(
    system: &SystemSpec,
    delta: f64,
    horizon: usize,
    pairs: usize,
    seed: u64,
) -> Result<TrapEstimate> {
    check_delta(delta)?;
    if pairs == 0 {
        return Err(Error::param("pairs", "need at least one pair"));
    }
    let flags = (0..pairs as u64)
        .into_par_iter()
        .map(|i| {
            let (x, y) = sample_pair(system, seed, i);
            Ok(pair_distances(system, &x, &y)?
                .take(horizon + 1)
                .all(|d| d < delta))
        })
        .collect::<Result<Vec<bool>>>()?;
    let trapped = flags.iter().filter(|&&t| t).count();
    Ok(TrapEstimate::from_counts(delta, trapped, pairs))
}

/// Empirical lower-bound proxy for the largest sensitivity constant: the
/// `quantile` of the per-pair supremum distances.
pub fn delta_hat(records: &[DivergenceRecord], quantile: f64) -> Result<f64> {
    let sups: Vec<f64> = records.iter().map(|r| r.sup_distance).collect();
    stats::quantile(&sups, quantile)
}

/// Empirical `sup{delta : fraction of pairs with d < delta is below 1}`,
/// which is the largest observed pair distance.
pub fn a_mu_estimate(pairs: &[(f64, f64)], metric: Metric) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(pairs
        .iter()
        .map(|&(x, y)| distance(metric, x, y))
        .fold(0.0, f64::max))
}

/// Horizons at which the trap curve is reported: `0, 1, 2, 5, 10, 20, ...`
/// up to and including `horizon`.
pub fn horizon_checkpoints(horizon: usize) -> Vec<usize> {
    let mut out = vec![0];
    let mut decade = 1usize;
    'outer: loop {
        for m in [1, 2, 5] {
            let h = m * decade;
            if h >= horizon {
                break 'outer;
            }
            out.push(h);
        }
        decade *= 10;
    }
    if horizon > 0 {
        out.push(horizon);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityConfig {
    /// Ascending positive levels.
    pub delta_grid: Vec<f64>,
    pub horizon: usize,
    pub pairs: usize,
    pub seed: u64,
    /// Quantile used for the headline `delta_hat`.
    pub quantile: f64,
    /// A level is declared sensitive when trap estimate + half-width < threshold.
    pub threshold: f64,
    /// Level used for the per-pair exceedance counts.
    pub probe_delta: f64,
}

impl SensitivityConfig {
    pub fn new(delta_grid: Vec<f64>, horizon: usize, pairs: usize, seed: u64) -> Self {
        SensitivityConfig {
            delta_grid,
            horizon,
            pairs,
            seed,
            quantile: 0.01,
            threshold: 0.01,
            probe_delta: 0.5,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.pairs == 0 {
            return Err(Error::param("pairs", "need at least one pair"));
        }
        if self.delta_grid.is_empty() {
            return Err(Error::param("delta_grid", "empty grid"));
        }
        if self.delta_grid[0] <= 0.0 || self.delta_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("delta_grid", "levels must be positive and strictly increasing"));
        }
        if !(0.0..=1.0).contains(&self.quantile) {
            return Err(Error::param("quantile", "must lie in [0, 1]"));
        }
        check_delta(self.probe_delta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub system: SystemSpec,
    pub horizon: usize,
    pub pair_count: usize,
    pub seed: u64,
    pub delta_grid: Vec<f64>,
    /// One estimate per grid level at the full horizon.
    pub trap_probability: Vec<TrapEstimate>,
    pub sensitive: Vec<bool>,
    pub threshold: f64,
    /// Largest grid level declared sensitive.
    pub largest_sensitive_delta: Option<f64>,
    pub horizon_checkpoints: Vec<usize>,
    /// `trap_curve[i][j]`: trap fraction at `delta_grid[i]` and `horizon_checkpoints[j]`.
    pub trap_curve: Vec<Vec<f64>>,
    pub quantile: f64,
    pub delta_hat: f64,
    pub delta_hat_min: f64,
    /// Largest distance within the initial pairs.
    pub a_mu_hat: f64,
    /// Diameter of all states visited by the sampled orbits.
    pub diam_supp_hat: f64,
    /// Diameter of the initial sample only.
    pub diam_initial_sample: f64,
    pub known_diam_supp: f64,
    pub probe_delta: f64,
    /// Mean of `exceed_count / (horizon + 1)` at the probe level.
    pub mean_exceed_fraction: f64,
}

struct PairOutcome {
    record: DivergenceRecord,
    running_sup: Vec<f64>,
    visited: Visited,
}

enum Visited {
    Range(f64, f64),
    All(Vec<f64>),
}

fn run_pair(
    system: &SystemSpec,
    cfg: &SensitivityConfig,
    checkpoints: &[usize],
    index: u64,
) -> Result<PairOutcome> {
    let (x, y) = sample_pair(system, cfg.seed, index);
    let metric = system.metric();
    let mut record = DivergenceRecord {
        x: x.value,
        y: y.value,
        sup_distance: 0.0,
        first_exceed: None,
        exceed_count: 0,
    };
    let mut running_sup = Vec::with_capacity(checkpoints.len());
    let mut next_checkpoint = 0;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut all = Vec::new();
    let keep_all = metric == Metric::CircleDistance;
    let orbits = Orbit::new(system, &x)?.zip(Orbit::new(system, &y)?);
    for (n, (a, b)) in orbits.take(cfg.horizon + 1).enumerate() {
        let d = distance(metric, a.value, b.value);
        record.sup_distance = record.sup_distance.max(d);
        if d >= cfg.probe_delta {
            record.exceed_count += 1;
            record.first_exceed.get_or_insert(n);
        }
        if keep_all {
            all.extend([a.value, b.value]);
        } else {
            lo = lo.min(a.value.min(b.value));
            hi = hi.max(a.value.max(b.value));
        }
        while next_checkpoint < checkpoints.len() && checkpoints[next_checkpoint] == n {
            running_sup.push(record.sup_distance);
            next_checkpoint += 1;
        }
    }
    let visited = if keep_all {
        Visited::All(all)
    } else {
        Visited::Range(lo, hi)
    };
    Ok(PairOutcome {
        record,
        running_sup,
        visited,
    })
}

/// Full sensitivity sweep over a grid of levels. Returns the report and the
/// per-pair records (exceedances counted at `probe_delta`).
pub fn sensitivity(
    system: &SystemSpec,
    cfg: &SensitivityConfig,
) -> Result<(SensitivityReport, Vec<DivergenceRecord>)> {
    cfg.validate()?;
    let checkpoints = horizon_checkpoints(cfg.horizon);
    let outcomes = (0..cfg.pairs as u64)
        .into_par_iter()
        .map(|i| run_pair(system, cfg, &checkpoints, i))
        .collect::<Result<Vec<_>>>()?;

    let metric = system.metric();
    let n_pairs = outcomes.len();
    let trap_probability: Vec<TrapEstimate> = cfg
        .delta_grid
        .iter()
        .map(|&delta| {
            let trapped = outcomes
                .iter()
                .filter(|o| o.record.sup_distance < delta)
                .count();
            TrapEstimate::from_counts(delta, trapped, n_pairs)
        })
        .collect();
    let sensitive: Vec<bool> = trap_probability
        .iter()
        .map(|t| t.is_sensitive(cfg.threshold))
        .collect();
    let largest_sensitive_delta = trap_probability
        .iter()
        .zip(&sensitive)
        .filter(|(_, &s)| s)
        .map(|(t, _)| t.delta)
        .last();
    let trap_curve = cfg
        .delta_grid
        .iter()
        .map(|&delta| {
            (0..checkpoints.len())
                .map(|j| {
                    let trapped = outcomes.iter().filter(|o| o.running_sup[j] < delta).count();
                    trapped as f64 / n_pairs as f64
                })
                .collect()
        })
        .collect();

    let records: Vec<DivergenceRecord> = outcomes.iter().map(|o| o.record).collect();
    let initial_pairs: Vec<(f64, f64)> = records.iter().map(|r| (r.x, r.y)).collect();
    let initial_points: Vec<f64> = initial_pairs.iter().flat_map(|&(x, y)| [x, y]).collect();
    let diam_supp_hat = match metric {
        Metric::AbsoluteDifference => {
            let (lo, hi) = outcomes.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), o| {
                match o.visited {
                    Visited::Range(a, b) => (lo.min(a), hi.max(b)),
                    Visited::All(_) => (lo, hi),
                }
            });
            hi - lo
        }
        Metric::CircleDistance => {
            let all: Vec<f64> = outcomes
                .iter()
                .flat_map(|o| match &o.visited {
                    Visited::All(v) => v.clone(),
                    Visited::Range(..) => Vec::new(),
                })
                .collect();
            systems::diam_supp_estimate(&all, metric)?
        }
    };
    let mean_exceed_fraction = records
        .iter()
        .map(|r| r.exceed_count as f64 / (cfg.horizon + 1) as f64)
        .sum::<f64>()
        / n_pairs as f64;

    let report = SensitivityReport {
        system: *system,
        horizon: cfg.horizon,
        pair_count: n_pairs,
        seed: cfg.seed,
        delta_grid: cfg.delta_grid.clone(),
        trap_probability,
        sensitive,
        threshold: cfg.threshold,
        largest_sensitive_delta,
        horizon_checkpoints: checkpoints,
        trap_curve,
        quantile: cfg.quantile,
        delta_hat: delta_hat(&records, cfg.quantile)?,
        delta_hat_min: delta_hat(&records, 0.0)?,
        a_mu_hat: a_mu_estimate(&initial_pairs, metric)?,
        diam_supp_hat,
        diam_initial_sample: systems::diam_supp_estimate(&initial_points, metric)?,
        known_diam_supp: system.known_diam_supp(),
        probe_delta: cfg.probe_delta,
        mean_exceed_fraction,
    };
    Ok((report, records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::sample_measure;
    use proptest::prelude::*;

    fn p(v: f64) -> StatePoint {
        StatePoint::new(v).unwrap()
    }

    #[test]
    fn sup_divergence_examples() {
        let rot = SystemSpec::golden_rotation();
        for n in [0, 1, 10, 1000] {
            let s = sup_divergence(&rot, &p(0.1), &p(0.3), n).unwrap();
            assert!((s - 0.2).abs() < 1e-12, "{s}");
        }
        let doubling = SystemSpec::radic(2).unwrap();
        let a = StatePoint::rational(1, 3).unwrap();
        let b = StatePoint::rational(2, 3).unwrap();
        for n in [0, 1, 5, 100] {
            let s = sup_divergence(&doubling, &a, &b, n).unwrap();
            assert!((s - 1.0 / 3.0).abs() < 1e-15);
        }
        let tent = SystemSpec::tent();
        assert_eq!(sup_divergence(&tent, &p(0.0), &p(0.5), 1).unwrap(), 1.0);
        assert_eq!(sup_divergence(&tent, &p(0.0), &p(0.5), 0).unwrap(), 0.5);
    }

    #[test]
    fn exceedance_examples() {
        let rot = SystemSpec::golden_rotation();
        assert_eq!(
            exceed_statistics(&rot, &p(0.1), &p(0.3), 0.1, 50).unwrap(),
            (51, Some(0))
        );
        assert_eq!(
            exceed_statistics(&rot, &p(0.1), &p(0.15), 0.1, 50).unwrap(),
            (0, None)
        );
        assert!(exceed_statistics(&rot, &p(0.1), &p(0.15), 0.0, 50).is_err());
    }

    #[test]
    fn doubling_time_average_of_exceedances() {
        let sys = SystemSpec::radic(2).unwrap();
        let (x, y) = sample_pair(&sys, 2024, 0);
        let n = 10_000;
        let (count, _) = exceed_statistics(&sys, &x, &y, 0.5, n).unwrap();
        let frac = count as f64 / (n + 1) as f64;
        assert!((frac - 0.25).abs() <= 0.02, "{frac}");
    }

    #[test]
    fn trap_probability_examples() {
        let tent = SystemSpec::tent();
        let tiny = trap_probability(&tent, 1e-300, 10, 2000, 1).unwrap();
        assert_eq!(tiny.probability, 0.0);

        let rot = SystemSpec::golden_rotation();
        let est = trap_probability(&rot, 0.1, 50, 10_000, 3).unwrap();
        assert!((est.probability - 0.2).abs() <= 0.012, "{est:?}");

        let mixing = trap_probability(&tent, 0.5, 100, 10_000, 3).unwrap();
        assert!(mixing.probability <= 0.01, "{mixing:?}");
        assert!(mixing.is_sensitive(0.01));

        assert!(trap_probability(&tent, -1.0, 10, 10, 1).is_err());
        assert!(trap_probability(&tent, 0.1, 10, 0, 1).is_err());
    }

    #[test]
    fn trap_probability_decreases_with_horizon() {
        let sys = SystemSpec::logistic();
        let mut last = 1.0;
        for h in [0, 1, 2, 5, 10, 20] {
            let t = trap_probability(&sys, 0.6, h, 3000, 8).unwrap().probability;
            assert!(t <= last);
            last = t;
        }
    }

    #[test]
    fn delta_hat_examples() {
        let rec = |s| DivergenceRecord {
            x: 0.0,
            y: 0.0,
            sup_distance: s,
            first_exceed: None,
            exceed_count: 0,
        };
        let records = [rec(1.0), rec(0.98), rec(0.9)];
        assert_eq!(delta_hat(&records, 0.0).unwrap(), 0.9);
        let flat = [rec(0.7); 5];
        for q in [0.0, 0.3, 1.0] {
            assert_eq!(delta_hat(&flat, q).unwrap(), 0.7);
        }
        assert_eq!(delta_hat(&[], 0.5), Err(Error::EmptySample));
    }

    #[test]
    fn a_mu_examples() {
        // Lebesgue pairs: P(max |x - y| < 1 - s) = (1 - s^2)^m, so with
        // m = 10^4 the bound 0.97 fails with probability about e^-9.
        // Arcsine mass piles up at both endpoints and the range is far tighter.
        for (sys, bound) in [(SystemSpec::tent(), 0.97), (SystemSpec::logistic(), 0.999)] {
            let pairs: Vec<(f64, f64)> = sample_pairs(&sys, 4, 10_000)
                .iter()
                .map(|(x, y)| (x.value, y.value))
                .collect();
            let a_mu = a_mu_estimate(&pairs, sys.metric()).unwrap();
            assert!(a_mu >= bound, "{sys}: {a_mu}");
        }
        assert_eq!(
            a_mu_estimate(&[(0.3, 0.3), (0.3, 0.3)], Metric::AbsoluteDifference).unwrap(),
            0.0
        );
        assert_eq!(a_mu_estimate(&[], Metric::CircleDistance), Err(Error::EmptySample));
    }

    #[test]
    fn checkpoints() {
        assert_eq!(horizon_checkpoints(0), vec![0]);
        assert_eq!(horizon_checkpoints(1), vec![0, 1]);
        assert_eq!(horizon_checkpoints(200), vec![0, 1, 2, 5, 10, 20, 50, 100, 200]);
        assert_eq!(horizon_checkpoints(7), vec![0, 1, 2, 5, 7]);
    }

    #[test]
    fn sensitivity_sweep_agrees_with_direct_trap_estimates() {
        let sys = SystemSpec::logistic();
        let grid = vec![0.1, 0.3, 0.5, 0.9, 0.99];
        let cfg = SensitivityConfig::new(grid.clone(), 30, 2000, 77);
        let (report, records) = sensitivity(&sys, &cfg).unwrap();
        assert_eq!(records.len(), 2000);
        for (i, &delta) in grid.iter().enumerate() {
            let direct = trap_probability(&sys, delta, 30, 2000, 77).unwrap();
            assert_eq!(report.trap_probability[i], direct);
            assert_eq!(*report.trap_curve[i].last().unwrap(), direct.probability);
        }
        assert!(report
            .trap_probability
            .windows(2)
            .all(|w| w[0].probability <= w[1].probability));
        for row in &report.trap_curve {
            assert!(row.windows(2).all(|w| w[0] >= w[1]));
        }
        assert!(report.delta_hat_min <= report.delta_hat);
        assert!(report.delta_hat <= report.diam_supp_hat + 1e-12);
    }

    #[test]
    fn rotation_trap_does_not_decay() {
        let rot = SystemSpec::golden_rotation();
        let cfg = SensitivityConfig::new(vec![0.05, 0.1, 0.2], 1000, 1000, 5);
        let (report, _) = sensitivity(&rot, &cfg).unwrap();
        for row in &report.trap_curve {
            assert!(row[0] > 0.0);
            assert!(row.iter().all(|&v| v == row[0]), "{row:?}");
        }
        assert!(report.sensitive.iter().all(|s| !s));
        assert_eq!(report.largest_sensitive_delta, None);
    }

    #[test]
    fn sensitivity_rejects_bad_grid() {
        let sys = SystemSpec::tent();
        let bad = SensitivityConfig::new(vec![0.5, 0.2], 10, 10, 1);
        assert!(sensitivity(&sys, &bad).is_err());
        let zero = SensitivityConfig::new(vec![0.0, 0.2], 10, 10, 1);
        assert!(sensitivity(&sys, &zero).is_err());
    }

    #[test]
    fn results_do_not_depend_on_worker_count() {
        let sys = SystemSpec::tent();
        let cfg = SensitivityConfig::new(vec![0.2, 0.6], 40, 500, 13);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| sensitivity(&sys, &cfg).unwrap())
        };
        assert_eq!(run(1), run(8));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn sup_divergence_grows_with_horizon(seed in any::<u64>(), sys_ix in 0usize..4) {
            let sys = [
                SystemSpec::tent(),
                SystemSpec::logistic(),
                SystemSpec::radic(3).unwrap(),
                SystemSpec::golden_rotation(),
            ][sys_ix];
            let (x, y) = sample_pair(&sys, seed, 0);
            let mut last = 0.0;
            for h in [0, 1, 3, 10, 40] {
                let s = sup_divergence(&sys, &x, &y, h).unwrap();
                prop_assert!(s >= last);
                prop_assert!(s <= sys.space_diameter());
                last = s;
            }
        }

        #[test]
        fn trap_monotone_in_delta(seed in any::<u64>(), a in 0.01f64..1.0, b in 0.01f64..1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let sys = SystemSpec::logistic();
            let t_lo = trap_probability(&sys, lo, 15, 200, seed).unwrap();
            let t_hi = trap_probability(&sys, hi, 15, 200, seed).unwrap();
            prop_assert!(t_lo.probability <= t_hi.probability);
        }

        #[test]
        fn delta_hat_bounded_by_visited_diameter(seed in any::<u64>(), q1 in 0.0f64..=1.0, q2 in 0.0f64..=1.0, sys_ix in 0usize..3) {
            let sys = [SystemSpec::tent(), SystemSpec::logistic(), SystemSpec::golden_rotation()][sys_ix];
            let cfg = SensitivityConfig::new(vec![0.5], 20, 100, seed);
            let (report, records) = sensitivity(&sys, &cfg).unwrap();
            let (lo, hi) = if q1 <= q2 { (q1, q2) } else { (q2, q1) };
            let (d_lo, d_hi) = (delta_hat(&records, lo).unwrap(), delta_hat(&records, hi).unwrap());
            prop_assert!(d_lo <= d_hi);
            prop_assert!(d_hi <= report.diam_supp_hat + 1e-12);
        }

        #[test]
        fn records_respect_their_invariants(seed in any::<u64>(), delta in 0.01f64..1.0) {
            let sys = SystemSpec::tent();
            let (x, y) = sample_pair(&sys, seed, 0);
            let r = divergence_record(&sys, &x, &y, delta, 30).unwrap();
            prop_assert!(r.exceed_count <= 31);
            prop_assert_eq!(r.first_exceed.is_some(), r.exceed_count > 0);
            prop_assert!(r.sup_distance <= 1.0);
        }
    }

    #[test]
    fn pair_and_sample_diameters_agree() {
        for sys in [SystemSpec::tent(), SystemSpec::logistic()] {
            let xs: Vec<f64> = sample_measure(&sys, 21, 10_000).unwrap().iter().map(|s| s.value).collect();
            let pairs: Vec<(f64, f64)> = sample_pairs(&sys, 22, 10_000)
                .iter()
                .map(|(x, y)| (x.value, y.value))
                .collect();
            let diam = systems::diam_supp_estimate(&xs, sys.metric()).unwrap();
            let a_mu = a_mu_estimate(&pairs, sys.metric()).unwrap();
            assert!((diam - a_mu).abs() <= 0.02);
        }
    }
}
