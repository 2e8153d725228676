use serde::{Deserialize, Serialize};

use super::partition::{k_epsilon, IntervalPartition, IntervalSet};
use crate::error::{Error, Result};
use crate::systems::{Density, Metric, Orbit, StatePoint, SystemSpec};

/// Bisection tolerance on `delta`.
pub const BISECTION_TOLERANCE: f64 = 1e-12;

/// A level `delta*` at which `K_delta * 2^(-h/2) < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub delta_star: Option<f64>,
    pub k_delta: Option<f64>,
    /// `K_{delta*} * 2^(-h/2)`.
    pub criterion_value: Option<f64>,
    pub entropy_used: f64,
}

/// `K_delta * 2^(-h/2)`, exactly as the criterion is written: natural
/// exponential in `K`, entropy in bits.
pub fn criterion_value(partition: &IntervalPartition, delta: f64, h_bits: f64, density: Density) -> Result<f64> {
    Ok(k_epsilon(partition, delta, density)? * 2f64.powf(-h_bits / 2.0))
}

/// Largest `delta` satisfying the criterion, found by bisection and backed
/// off by one bisection step. Absent when `h_bits = 0`.
pub fn certificate_delta(partition: &IntervalPartition, h_bits: f64, density: Density) -> Result<Certificate> {
    if !(h_bits >= 0.0) || !h_bits.is_finite() {
        return Err(Error::param("h_bits", format!("must be finite and nonnegative, got {h_bits}")));
    }
    let absent = Certificate {
        delta_star: None,
        k_delta: None,
        criterion_value: None,
        entropy_used: h_bits,
    };
    if h_bits == 0.0 {
        return Ok(absent);
    }
    let holds = |d: f64| criterion_value(partition, d, h_bits, density).map(|v| v < 1.0);

    let diameter = match partition.metric() {
        Metric::AbsoluteDifference => 1.0,
        Metric::CircleDistance => 0.5,
    };
    let delta = if holds(diameter)? {
        // Strips already cover every cell; any level works.
        diameter
    } else {
        let (mut lo, mut hi) = (0.0f64, diameter);
        while hi - lo > BISECTION_TOLERANCE / 2.0 || lo == 0.0 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if holds(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if lo == 0.0 {
            return Ok(absent);
        }
        lo - (hi - lo).min(lo / 2.0)
    };
    let k = k_epsilon(partition, delta, density)?;
    Ok(Certificate {
        delta_star: Some(delta),
        k_delta: Some(k),
        criterion_value: Some(k * 2f64.powf(-h_bits / 2.0)),
        entropy_used: h_bits,
    })
}

/// Fraction of `k in 0..=horizon` with `T^k x` in `target`.
pub fn visit_frequency(system: &SystemSpec, x: &StatePoint, target: &IntervalSet, horizon: usize) -> Result<f64> {
    if horizon == 0 {
        return Err(Error::param("horizon", "must be at least 1"));
    }
    let hits = Orbit::new(system, x)?
        .take(horizon + 1)
        .filter(|s| target.contains(s.value))
        .count();
    Ok(hits as f64 / (horizon + 1) as f64)
}

/// Counts behind the word-count bound along one orbit.
///
/// A time `k` is ambiguous when the ball `B(T^k x, delta)` leaves the cell
/// containing `T^k x`. Words agreeing with the coding of `x` off the
/// ambiguous times number `l^ambiguous`, which is at most `K_delta^n` once the
/// ambiguous fraction is below twice the boundary mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WordCountBound {
    pub steps: usize,
    pub ambiguous: usize,
    /// `Σ_i mu(P_i^{-delta})`.
    pub boundary_mass: f64,
    /// `ln card S_n = ambiguous * ln l`.
    pub log_word_count: f64,
    /// `ln K_delta^n`.
    pub log_bound: f64,
}

impl WordCountBound {
    pub fn holds(&self) -> bool {
        self.log_word_count <= self.log_bound + 1e-12
    }
}

pub fn word_count_bound(
    system: &SystemSpec,
    partition: &IntervalPartition,
    x: &StatePoint,
    delta: f64,
    n: usize,
) -> Result<WordCountBound> {
    let density = partition.density();
    let boundary = partition.boundary_union(delta)?;
    let mut boundary_mass = 0.0;
    for i in 0..partition.len() {
        boundary_mass += partition.internal_boundary(i, delta)?.measure(density);
    }
    let ambiguous = Orbit::new(system, x)?
        .take(n + 1)
        .filter(|s| boundary.contains(s.value))
        .count();
    let l = partition.len() as f64;
    Ok(WordCountBound {
        steps: n + 1,
        ambiguous,
        boundary_mass,
        log_word_count: ambiguous as f64 * l.ln(),
        log_bound: n as f64 * k_epsilon(partition, delta, density)?.ln(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::sample_pair;
    use crate::systems::sample_measure;
    use std::f64::consts::LN_2;

    #[test]
    fn binary_certificate_matches_closed_form() {
        for sys in [SystemSpec::tent(), SystemSpec::radic(2).unwrap()] {
            let p = IntervalPartition::for_system(&sys, vec![0.5]).unwrap();
            let c = certificate_delta(&p, 1.0, sys.density()).unwrap();
            let d = c.delta_star.unwrap();
            assert!((d - LN_2 / 16.0).abs() <= 1e-12, "{d}");
            assert!(c.criterion_value.unwrap() < 1.0);
            // Independent re-evaluation: K = e^{8 delta}.
            assert!((8.0 * d).exp() * 2f64.powf(-0.5) < 1.0);
        }
    }

    #[test]
    fn zero_entropy_gives_no_certificate() {
        let p = IntervalPartition::new(vec![0.3, 0.6], Metric::AbsoluteDifference, Density::Arcsine).unwrap();
        let c = certificate_delta(&p, 0.0, Density::Arcsine).unwrap();
        assert_eq!(c.delta_star, None);
        assert!(certificate_delta(&p, -1.0, Density::Arcsine).is_err());
    }

    #[test]
    fn certificates_satisfy_the_criterion() {
        let p = IntervalPartition::new(vec![0.2, 0.45, 0.9], Metric::AbsoluteDifference, Density::Arcsine).unwrap();
        for h in [1e-6, 0.01, 0.3, 1.0, 2.0, 5.0, 50.0] {
            let c = certificate_delta(&p, h, Density::Arcsine).unwrap();
            let d = c.delta_star.expect("positive entropy certifies some level");
            let k = k_epsilon(&p, d, Density::Arcsine).unwrap();
            assert!(k * 2f64.powf(-h / 2.0) < 1.0, "h={h}");
        }
        // Large enough entropy: the whole space is certified.
        let c = certificate_delta(&p, 50.0, Density::Arcsine).unwrap();
        assert_eq!(c.delta_star, Some(1.0));
    }

    #[test]
    fn visit_frequency_examples() {
        let sys = SystemSpec::radic(2).unwrap();
        let x = sample_measure(&sys, 99, 1).unwrap()[0];
        let target = IntervalSet::from_intervals([(0.45, 0.55)]).unwrap();
        let f = visit_frequency(&sys, &x, &target, 100_000).unwrap();
        assert!((f - 0.1).abs() <= 0.01, "{f}");
        assert_eq!(visit_frequency(&sys, &x, &IntervalSet::whole(), 50).unwrap(), 1.0);
        assert_eq!(visit_frequency(&sys, &x, &IntervalSet::empty(), 50).unwrap(), 0.0);
        assert!(visit_frequency(&sys, &x, &IntervalSet::whole(), 0).is_err());
    }

    #[test]
    fn boundary_visits_match_boundary_mass() {
        let sys = SystemSpec::logistic();
        let p = IntervalPartition::for_system(&sys, vec![0.3, 0.5]).unwrap();
        let delta = 0.04;
        let union = p.boundary_union(delta).unwrap();
        let (x, _) = sample_pair(&sys, 8, 0);
        let f = visit_frequency(&sys, &x, &union, 200_000).unwrap();
        let m = union.measure(Density::Arcsine);
        assert!((f - m).abs() < 0.02, "{f} vs {m}");
    }

    #[test]
    fn word_count_bound_along_typical_orbits() {
        let sys = SystemSpec::tent();
        let p = IntervalPartition::for_system(&sys, vec![0.5]).unwrap();
        let delta = LN_2 / 16.0;
        let (x, _) = sample_pair(&sys, 3, 0);
        let b = word_count_bound(&sys, &p, &x, delta, 20_000).unwrap();
        assert!((b.boundary_mass - 2.0 * delta).abs() < 1e-12);
        let frac = b.ambiguous as f64 / b.steps as f64;
        assert!(frac <= 2.0 * b.boundary_mass);
        assert!(b.holds());
    }
}
