//! The built-in endomorphisms of `[0, 1]` and the circle.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{self, RationalState};
use crate::stream::{stream, StreamRng};

/// Denominator of the rational lattice used for r-adic and tent samples.
///
/// A safe prime `q = 2p + 1` (with `p` prime) and `q ≡ 3 (mod 8)`: every
/// multiplier `2 <= r < q` has multiplicative order at least `p`, so lattice
/// orbits never close up at any practical horizon. It is below `2^53`, so
/// every `k/q` is distinct as a double.
pub const LATTICE_DENOMINATOR: u128 = 9_007_199_254_739_723;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemId {
    /// `x -> r x mod 1`.
    Radic(u32),
    /// `x -> 1 - |1 - 2x|`.
    Tent,
    /// `x -> 4x(1 - x)`.
    Logistic,
    /// `x -> x + theta mod 1` on the circle.
    Rotation(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSpace {
    UnitInterval,
    Circle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    AbsoluteDifference,
    CircleDistance,
}

/// Invariant densities of the built-ins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Density {
    Lebesgue,
    /// `1 / (pi sqrt(x (1 - x)))`.
    Arcsine,
}

impl Density {
    pub fn cdf(self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match self {
            Density::Lebesgue => x,
            Density::Arcsine => std::f64::consts::FRAC_2_PI * x.sqrt().asin(),
        }
    }

    /// Measure of `[a, b)`; zero when `b <= a`.
    pub fn interval_measure(self, a: f64, b: f64) -> f64 {
        if b <= a {
            0.0
        } else {
            (self.cdf(b) - self.cdf(a)).max(0.0)
        }
    }

    /// Transport a uniform variate `u` in `[0, 1)` to this density.
    pub fn transport(self, u: f64) -> f64 {
        match self {
            Density::Lebesgue => u,
            Density::Arcsine => {
                let s = (std::f64::consts::FRAC_PI_2 * u).sin();
                (s * s).min(1.0)
            }
        }
    }
}

/// An endomorphism together with its state space, metric and known facts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct SystemSpec {
    id: SystemId,
    state_space: StateSpace,
    metric: Metric,
    known_weak_mixing: bool,
    known_entropy_bits: Option<f64>,
    known_diam_supp: f64,
}

impl SystemSpec {
    pub fn radic(r: u32) -> Result<Self> {
        if r < 2 {
            return Err(Error::param("r", format!("r-adic map needs r >= 2, got {r}")));
        }
        Ok(SystemSpec {
            id: SystemId::Radic(r),
            state_space: StateSpace::UnitInterval,
            metric: Metric::AbsoluteDifference,
            known_weak_mixing: true,
            known_entropy_bits: Some(f64::from(r).log2()),
            known_diam_supp: 1.0,
        })
    }

    pub fn tent() -> Self {
        SystemSpec {
            id: SystemId::Tent,
            state_space: StateSpace::UnitInterval,
            metric: Metric::AbsoluteDifference,
            known_weak_mixing: true,
            known_entropy_bits: Some(1.0),
            known_diam_supp: 1.0,
        }
    }

    pub fn logistic() -> Self {
        SystemSpec {
            id: SystemId::Logistic,
            state_space: StateSpace::UnitInterval,
            metric: Metric::AbsoluteDifference,
            known_weak_mixing: true,
            known_entropy_bits: Some(1.0),
            known_diam_supp: 1.0,
        }
    }

    pub fn rotation(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::param("theta", format!("rotation angle must lie in (0, 1), got {theta}")));
        }
        Ok(SystemSpec {
            id: SystemId::Rotation(theta),
            state_space: StateSpace::Circle,
            metric: Metric::CircleDistance,
            known_weak_mixing: false,
            known_entropy_bits: Some(0.0),
            known_diam_supp: 1.0,
        })
    }

    /// Rotation by the golden mean `(sqrt 5 - 1) / 2`.
    pub fn golden_rotation() -> Self {
        Self::rotation((5f64.sqrt() - 1.0) / 2.0).expect("golden mean lies in (0, 1)")
    }

    pub fn id(&self) -> SystemId {
        self.id
    }

    pub fn state_space(&self) -> StateSpace {
        self.state_space
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn known_weak_mixing(&self) -> bool {
        self.known_weak_mixing
    }

    pub fn known_entropy_bits(&self) -> Option<f64> {
        self.known_entropy_bits
    }

    pub fn known_diam_supp(&self) -> f64 {
        self.known_diam_supp
    }

    pub fn density(&self) -> Density {
        match self.id {
            SystemId::Logistic => Density::Arcsine,
            _ => Density::Lebesgue,
        }
    }

    /// Whether orbits of rational points can be followed exactly.
    pub fn has_exact_dynamics(&self) -> bool {
        matches!(self.id, SystemId::Radic(_) | SystemId::Tent)
    }

    /// Largest possible distance between two states.
    pub fn space_diameter(&self) -> f64 {
        match self.metric {
            Metric::AbsoluteDifference => 1.0,
            Metric::CircleDistance => 0.5,
        }
    }

    fn apply(&self, x: f64) -> f64 {
        match self.id {
            SystemId::Radic(r) => (f64::from(r) * x).fract(),
            SystemId::Tent => 1.0 - (1.0 - 2.0 * x).abs(),
            SystemId::Logistic => 4.0 * x * (1.0 - x),
            SystemId::Rotation(theta) => (x + theta).fract(),
        }
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.id {
            SystemId::Radic(r) => write!(f, "radic:{r}"),
            SystemId::Tent => f.write_str("tent"),
            SystemId::Logistic => f.write_str("logistic"),
            SystemId::Rotation(theta) => write!(f, "rotation:{theta}"),
        }
    }
}

impl FromStr for SystemSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownSystem(s.to_string());
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("tent", None) => Ok(SystemSpec::tent()),
            ("logistic", None) => Ok(SystemSpec::logistic()),
            ("radic", Some(a)) => SystemSpec::radic(a.parse().map_err(|_| unknown())?),
            ("rotation", Some(a)) => SystemSpec::rotation(a.parse().map_err(|_| unknown())?),
            _ => Err(unknown()),
        }
    }
}

impl From<SystemSpec> for String {
    fn from(s: SystemSpec) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for SystemSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// A state, optionally carrying the exact rational it stands for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatePoint {
    pub value: f64,
    pub exact_form: Option<RationalState>,
}

impl StatePoint {
    pub fn new(value: f64) -> Result<Self> {
        check_domain(value)?;
        Ok(StatePoint {
            value,
            exact_form: None,
        })
    }

    pub fn exact(q: RationalState) -> Self {
        StatePoint {
            value: q.to_f64(),
            exact_form: Some(q),
        }
    }

    pub fn rational(numerator: u128, denominator: u128) -> Result<Self> {
        RationalState::new(numerator, denominator).map(StatePoint::exact)
    }
}

fn check_domain(value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain { value })
    }
}

/// One application of the map.
pub fn evaluate(system: &SystemSpec, x: &StatePoint) -> Result<StatePoint> {
    check_domain(x.value)?;
    match x.exact_form {
        Some(q) if system.has_exact_dynamics() => oracle::exact_step(system, &q).map(StatePoint::exact),
        _ => Ok(StatePoint {
            value: system.apply(x.value),
            exact_form: None,
        }),
    }
}

/// Lazy orbit `x, Tx, T^2 x, ...`.
///
/// Rotations are evaluated by the direct formula `frac(x + frac(k theta))`
/// so that rounding does not accumulate along the orbit.
#[derive(Debug, Clone)]
pub struct Orbit {
    system: SystemSpec,
    start: f64,
    current: StatePoint,
    k: u64,
}

impl Orbit {
    pub fn new(system: &SystemSpec, x: &StatePoint) -> Result<Self> {
        check_domain(x.value)?;
        let mut current = *x;
        if !system.has_exact_dynamics() {
            current.exact_form = None;
        }
        if let Some(q) = current.exact_form {
            oracle::check_width(system, q.denominator())?;
        }
        Ok(Orbit {
            system: *system,
            start: x.value,
            current,
            k: 0,
        })
    }

    fn advance(&mut self) {
        self.k += 1;
        self.current = match (self.system.id, self.current.exact_form) {
            (SystemId::Rotation(theta), _) => {
                let shift = (self.k as f64 * theta).fract();
                StatePoint {
                    value: (self.start + shift).fract(),
                    exact_form: None,
                }
            }
            (_, Some(q)) => StatePoint::exact(oracle::step_unchecked(&self.system, &q)),
            (_, None) => StatePoint {
                value: self.system.apply(self.current.value),
                exact_form: None,
            },
        };
    }
}

impl Iterator for Orbit {
    type Item = StatePoint;

    fn next(&mut self) -> Option<StatePoint> {
        let out = self.current;
        self.advance();
        Some(out)
    }
}

/// The orbit `(x, Tx, ..., T^n x)`.
pub fn orbit(system: &SystemSpec, x: &StatePoint, n: usize) -> Result<Vec<StatePoint>> {
    Ok(Orbit::new(system, x)?.take(n + 1).collect())
}

pub fn distance(metric: Metric, x: f64, y: f64) -> f64 {
    let d = (x - y).abs();
    match metric {
        Metric::AbsoluteDifference => d,
        Metric::CircleDistance => d.min(1.0 - d),
    }
}

/// One draw from the invariant measure of `system`.
pub fn draw(system: &SystemSpec, rng: &mut StreamRng) -> StatePoint {
    if system.has_exact_dynamics() {
        let k = rng.random_range(0..LATTICE_DENOMINATOR as u64);
        StatePoint::exact(
            RationalState::new(u128::from(k), LATTICE_DENOMINATOR).expect("k < q"),
        )
    } else {
        StatePoint {
            value: system.density().transport(rng.random::<f64>()),
            exact_form: None,
        }
    }
}

/// `m` independent draws from the invariant measure; draw `j` uses stream `(seed, j)`.
pub fn sample_measure(system: &SystemSpec, seed: u64, m: usize) -> Result<Vec<StatePoint>> {
    if m == 0 {
        return Err(Error::EmptySample);
    }
    Ok((0..m as u64)
        .into_par_iter()
        .map(|j| draw(system, &mut stream(seed, j)))
        .collect())
}

/// Largest pairwise distance in the sample.
pub fn diam_supp_estimate(samples: &[f64], metric: Metric) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
    match metric {
        Metric::AbsoluteDifference => Ok(hi - lo),
        Metric::CircleDistance => {
            // The farthest partner of x sits next to the antipode x + 1/2.
            let mut best = 0.0f64;
            let n = sorted.len();
            for &x in &sorted {
                let antipode = (x + 0.5).fract();
                let idx = sorted.partition_point(|&v| v < antipode);
                for j in [idx % n, (idx + n - 1) % n] {
                    best = best.max(distance(metric, x, sorted[j]));
                }
            }
            Ok(best)
        }
    }
}
