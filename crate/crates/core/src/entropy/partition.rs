use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::Proportion;
use crate::stream::stream;
use crate::systems::{distance, Density, Metric, Orbit, StatePoint, SystemSpec};
use rand::Rng;

/// A finite partition of the state space into intervals
/// `[a_0, a_1), [a_1, a_2), ..., [a_{l-1}, a_l]` with `a_0 = 0`, `a_l = 1`.
///
/// Cells are labelled `1..=l`; methods taking a `cell` argument use the
/// zero-based index `label - 1`. The boundary is a finite set, so every cell
/// is a continuity set for the non-atomic built-in measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalPartition {
    breakpoints: Vec<f64>,
    metric: Metric,
    density: Density,
    cell_measures: Vec<f64>,
}

impl IntervalPartition {
    /// `breakpoints` are the interior cut points, strictly increasing in `(0, 1)`.
    pub fn new(breakpoints: Vec<f64>, metric: Metric, density: Density) -> Result<Self> {
        if breakpoints.iter().any(|&b| !(b > 0.0 && b < 1.0)) {
            return Err(Error::param("partition", "breakpoints must lie strictly inside (0, 1)"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("partition", "breakpoints must be strictly increasing"));
        }
        let mut p = IntervalPartition {
            breakpoints,
            metric,
            density,
            cell_measures: Vec::new(),
        };
        p.cell_measures = (0..p.len())
            .map(|i| {
                let (a, b) = p.cell(i);
                density.interval_measure(a, b)
            })
            .collect();
        Ok(p)
    }

    pub fn for_system(system: &SystemSpec, breakpoints: Vec<f64>) -> Result<Self> {
        Self::new(breakpoints, system.metric(), system.density())
    }

    /// Cells `[i/r, (i+1)/r)`, the natural partition for `x -> r x mod 1`.
    pub fn uniform(cells: usize, system: &SystemSpec) -> Result<Self> {
        if cells == 0 {
            return Err(Error::param("partition", "need at least one cell"));
        }
        let breakpoints = (1..cells).map(|i| i as f64 / cells as f64).collect();
        Self::for_system(system, breakpoints)
    }

    /// Number of cells `l`.
    pub fn len(&self) -> usize {
        self.breakpoints.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn density(&self) -> Density {
        self.density
    }

    pub fn cell_measures(&self) -> &[f64] {
        &self.cell_measures
    }

    /// Endpoints `(a, b)` of cell `i`.
    pub fn cell(&self, i: usize) -> (f64, f64) {
        let a = if i == 0 { 0.0 } else { self.breakpoints[i - 1] };
        let b = self.breakpoints.get(i).copied().unwrap_or(1.0);
        (a, b)
    }

    /// Zero-based index of the cell containing `x` (binary search).
    pub fn index_of(&self, x: f64) -> usize {
        self.breakpoints.partition_point(|&b| b <= x)
    }

    /// Label in `1..=l` of the cell containing `x`.
    pub fn label_of(&self, x: f64) -> u32 {
        self.index_of(x) as u32 + 1
    }

    fn check_cell(&self, cell: usize) -> Result<()> {
        if cell < self.len() {
            Ok(())
        } else {
            Err(Error::param("cell_index", format!("{cell} out of range for {} cells", self.len())))
        }
    }

    /// Whether the left and right endpoints of cell `i` touch the complement.
    fn open_edges(&self, i: usize) -> (bool, bool) {
        let l = self.len();
        match self.metric {
            _ if l == 1 => (false, false),
            Metric::AbsoluteDifference => (i > 0, i + 1 < l),
            Metric::CircleDistance => (true, true),
        }
    }

    /// `d(x, P_i^c)` computed directly as the smallest distance from `x` to
    /// any other cell; infinite when the complement is empty.
    pub fn distance_to_complement(&self, cell: usize, x: f64) -> f64 {
        (0..self.len())
            .filter(|&j| j != cell)
            .map(|j| {
                let (c, d) = self.cell(j);
                if (c..d).contains(&x) {
                    0.0
                } else {
                    // The closure of the cell is within distance 0 of the cell.
                    distance(self.metric, x, c).min(distance(self.metric, x, d))
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// The internal strip `P_i^{-eps} = {x in P_i : d(x, P_i^c) < eps}` as a
    /// union of at most two intervals.
    pub fn internal_boundary(&self, cell: usize, epsilon: f64) -> Result<IntervalSet> {
        self.check_cell(cell)?;
        if !(epsilon > 0.0) {
            return Err(Error::param("epsilon", format!("must be positive, got {epsilon}")));
        }
        let (a, b) = self.cell(cell);
        let (left, right) = self.open_edges(cell);
        let mut set = IntervalSet::empty();
        if left && right && 2.0 * epsilon >= b - a {
            set.push(a, b);
            return Ok(set);
        }
        if left {
            set.push(a, (a + epsilon).min(b));
        }
        if right {
            set.push((b - epsilon).max(a), b);
        }
        Ok(set)
    }

    /// `⋃_i P_i^{-eps}`.
    pub fn boundary_union(&self, epsilon: f64) -> Result<IntervalSet> {
        let mut set = IntervalSet::empty();
        for i in 0..self.len() {
            for &(a, b) in self.internal_boundary(i, epsilon)?.intervals() {
                set.push(a, b);
            }
        }
        Ok(set)
    }
}

/// A finite union of half-open intervals `[a, b)` in `[0, 1]`; an interval
/// ending at 1 also contains 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { intervals: Vec::new() }
    }

    pub fn whole() -> Self {
        IntervalSet {
            intervals: vec![(0.0, 1.0)],
        }
    }

    pub fn from_intervals(intervals: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut set = IntervalSet::empty();
        for (a, b) in intervals {
            if !(0.0 <= a && a <= b && b <= 1.0) {
                return Err(Error::param("target", format!("[{a}, {b}) is not an interval of [0, 1]")));
            }
            set.push(a, b);
        }
        Ok(set)
    }

    fn push(&mut self, a: f64, b: f64) {
        if b > a {
            self.intervals.push((a, b));
        }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals
            .iter()
            .any(|&(a, b)| (a <= x && x < b) || (b >= 1.0 && x == 1.0))
    }

    /// Measure under `density`, counting overlaps once.
    pub fn measure(&self, density: Density) -> f64 {
        let mut sorted = self.intervals.clone();
        sorted.sort_by(|p, q| p.0.total_cmp(&q.0));
        let mut total = 0.0;
        let mut current: Option<(f64, f64)> = None;
        for (a, b) in sorted {
            current = match current {
                Some((ca, cb)) if a <= cb => Some((ca, cb.max(b))),
                Some((ca, cb)) => {
                    total += density.interval_measure(ca, cb);
                    Some((a, b))
                }
                None => Some((a, b)),
            };
        }
        if let Some((ca, cb)) = current {
            total += density.interval_measure(ca, cb);
        }
        total
    }
}

/// Closed-form `mu(P_i^{-eps})`.
pub fn internal_boundary_measure(
    partition: &IntervalPartition,
    cell: usize,
    epsilon: f64,
    density: Density,
) -> Result<f64> {
    Ok(partition.internal_boundary(cell, epsilon)?.measure(density))
}

/// Monte Carlo estimate of `mu(P_i^{-eps})` from `draws` samples of
/// `density`, testing membership through [`IntervalPartition::distance_to_complement`].
pub fn internal_boundary_measure_mc(
    partition: &IntervalPartition,
    cell: usize,
    epsilon: f64,
    density: Density,
    draws: usize,
    seed: u64,
) -> Result<Proportion> {
    partition.check_cell(cell)?;
    if !(epsilon > 0.0) {
        return Err(Error::param("epsilon", format!("must be positive, got {epsilon}")));
    }
    let mut rng = stream(seed, cell as u64);
    let hits = (0..draws)
        .filter(|_| {
            let x = density.transport(rng.random::<f64>());
            partition.index_of(x) == cell && partition.distance_to_complement(cell, x) < epsilon
        })
        .count();
    Ok(Proportion::new(hits, draws))
}

/// `K_eps = exp(2 l Σ_i mu(P_i^{-eps}))`.
pub fn k_epsilon(partition: &IntervalPartition, epsilon: f64, density: Density) -> Result<f64> {
    let mut total = 0.0;
    for i in 0..partition.len() {
        total += internal_boundary_measure(partition, i, epsilon, density)?;
    }
    Ok(k_from_boundary_mass(partition.len(), total))
}

/// `exp(2 l m)` for total boundary mass `m`.
pub fn k_from_boundary_mass(cells: usize, boundary_mass: f64) -> f64 {
    (2.0 * cells as f64 * boundary_mass).exp()
}

/// Labels `(i_0, ..., i_n)` with `T^k x in P_{i_k}`.
pub fn encode_orbit(
    system: &SystemSpec,
    partition: &IntervalPartition,
    x: &StatePoint,
    n: usize,
) -> Result<Vec<u32>> {
    Ok(Orbit::new(system, x)?
        .take(n + 1)
        .map(|s| partition.label_of(s.value))
        .collect())
}
