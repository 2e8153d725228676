//! Oracle-versus-float and closed-form-versus-Monte-Carlo checks.

use rand::Rng;
use serde::{Deserialize, Serialize};
use symsens::entropy::{self, IntervalPartition};
use symsens::oracle;
use symsens::stream::stream;
use symsens::systems::{self, distance, Density, Metric, Orbit, StatePoint};
use symsens::{RationalState, SystemSpec};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestOutcome {
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn tent_float_vs_exact() -> Result<Check> {
    let tent = SystemSpec::tent();
    let exact = oracle::exact_orbit(&tent, RationalState::new(1, 3)?, 30)?;
    let float = systems::orbit(&tent, &StatePoint::new(1.0 / 3.0)?, 30)?;
    let worst = exact
        .iter()
        .zip(&float)
        .enumerate()
        .map(|(n, (e, f))| (f.value - e.to_f64()).abs() / (2f64.powi(n as i32) * 2f64.powi(-50)))
        .fold(0.0, f64::max);
    Ok(check(
        "tent float orbit from 1/3 within 2^n 2^-50 of exact orbit (n <= 30)",
        worst <= 1.0,
        format!("worst gap / bound = {worst:.3e}"),
    ))
}

fn doubling_period() -> Result<Check> {
    let orbit = oracle::exact_orbit(&SystemSpec::radic(2)?, RationalState::new(1, 3)?, 6)?;
    let ok = orbit.iter().enumerate().all(|(n, q)| *q == orbit[n % 2]) && orbit[0] != orbit[1];
    Ok(check(
        "exact doubling orbit of 1/3 has period 2",
        ok,
        orbit.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" "),
    ))
}

fn full_shift_entropy() -> Result<Check> {
    let sys = SystemSpec::radic(2)?;
    let mut worst = 0.0f64;
    let mut mass_gap = 0.0f64;
    for n in 0..=12 {
        let measures = entropy::exact_word_measures(&sys, n)?;
        mass_gap = mass_gap.max((measures.values().sum::<f64>() - 1.0).abs());
        worst = worst.max((entropy::shannon_entropy_bits(measures.into_values()) - n as f64).abs());
    }
    Ok(check(
        "full 2-shift cylinders: H_n = n bits and total mass 1 (n <= 12)",
        worst == 0.0 && mass_gap < 1e-12,
        format!("max |H_n - n| = {worst:e}, max |mass - 1| = {mass_gap:e}"),
    ))
}

fn boundary_closed_form_vs_mc(seed: u64) -> Result<Check> {
    let draws = 20_000;
    let mut worst = 0.0f64;
    let mut compared = 0;
    for trial in 0..3u64 {
        let mut rng = stream(seed, 1_000 + trial);
        let cuts = rng.random_range(1..5);
        let mut points: Vec<f64> = (0..cuts).map(|_| rng.random_range(0.02..0.98)).collect();
        points.sort_by(f64::total_cmp);
        points.dedup();
        let (metric, density) = if trial % 2 == 0 {
            (Metric::AbsoluteDifference, Density::Arcsine)
        } else {
            (Metric::CircleDistance, Density::Lebesgue)
        };
        let partition = IntervalPartition::new(points, metric, density)?;
        let epsilon = rng.random_range(0.005..0.2);
        for cell in 0..partition.len() {
            let exact = entropy::internal_boundary_measure(&partition, cell, epsilon, density)?;
            let mc = entropy::internal_boundary_measure_mc(&partition, cell, epsilon, density, draws, seed ^ trial)?;
            let sigma = (exact * (1.0 - exact) / draws as f64).sqrt();
            let z = if sigma > 0.0 { (mc.estimate - exact).abs() / sigma } else if mc.estimate == exact { 0.0 } else { f64::INFINITY };
            worst = worst.max(z);
            compared += 1;
        }
    }
    Ok(check(
        "internal boundary measure: closed form within 3 sigma of Monte Carlo",
        worst <= 3.0,
        format!("{compared} cells, max |z| = {worst:.3}"),
    ))
}

fn k_epsilon_binary() -> Result<Check> {
    let p = IntervalPartition::new(vec![0.5], Metric::AbsoluteDifference, Density::Lebesgue)?;
    let k = entropy::k_epsilon(&p, 0.05, Density::Lebesgue)?;
    let gap = (k - 0.4f64.exp()).abs();
    Ok(check("K_0.05 of the binary partition equals e^0.4", gap <= 1e-12, format!("K = {k}, gap {gap:e}")))
}

fn certificate_binary() -> Result<Check> {
    let p = IntervalPartition::new(vec![0.5], Metric::AbsoluteDifference, Density::Lebesgue)?;
    let c = entropy::certificate_delta(&p, 1.0, Density::Lebesgue)?;
    let d = c.delta_star.unwrap_or(f64::NAN);
    let gap = (d - std::f64::consts::LN_2 / 16.0).abs();
    Ok(check(
        "certified level for the binary partition at h = 1 bit equals ln 2 / 16",
        gap <= 1e-12,
        format!("delta* = {d}, gap {gap:e}"),
    ))
}

fn conjugacy(seed: u64) -> Result<Check> {
    let mut rng = stream(seed, 2_000);
    let mut worst = 0.0f64;
    for _ in 0..1_000 {
        let u: f64 = rng.random();
        let x = StatePoint::new(Density::Arcsine.transport(u))?;
        let lhs = systems::evaluate(&SystemSpec::logistic(), &x)?.value;
        let tu = systems::evaluate(&SystemSpec::tent(), &StatePoint::new(u)?)?.value;
        worst = worst.max((lhs - Density::Arcsine.transport(tu)).abs());
    }
    Ok(check(
        "logistic map conjugate to tent map through sin^2(pi u / 2)",
        worst <= 1e-12,
        format!("max gap {worst:e} over 1000 draws"),
    ))
}

fn rotation_isometry(seed: u64) -> Result<Check> {
    let rot = SystemSpec::golden_rotation();
    let mut worst = 0.0f64;
    for i in 0..100u64 {
        let mut rng = stream(seed, 3_000 + i);
        let x = StatePoint::new(rng.random())?;
        let y = StatePoint::new(rng.random())?;
        let d0 = distance(Metric::CircleDistance, x.value, y.value);
        for (a, b) in Orbit::new(&rot, &x)?.zip(Orbit::new(&rot, &y)?).take(1_001) {
            worst = worst.max((distance(Metric::CircleDistance, a.value, b.value) - d0).abs());
        }
    }
    Ok(check(
        "golden rotation preserves pair distances",
        worst <= 1e-9,
        format!("max deviation {worst:e}"),
    ))
}

pub fn run_suite(seed: u64) -> Result<SelftestOutcome> {
    let checks = vec![
        tent_float_vs_exact()?,
        doubling_period()?,
        full_shift_entropy()?,
        boundary_closed_form_vs_mc(seed)?,
        k_epsilon_binary()?,
        certificate_binary()?,
        conjugacy(seed)?,
        rotation_isometry(seed)?,
    ];
    Ok(SelftestOutcome {
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}
