//! Small statistical helpers shared by the estimators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A binomial proportion with a three-sigma half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Proportion {
    pub estimate: f64,
    pub half_width: f64,
    pub successes: usize,
    pub trials: usize,
}

impl Proportion {
    pub fn new(successes: usize, trials: usize) -> Self {
        let n = trials.max(1) as f64;
        let p = successes as f64 / n;
        Proportion {
            estimate: p,
            half_width: 3.0 * (p * (1.0 - p) / n).sqrt(),
            successes,
            trials,
        }
    }

    pub fn upper(&self) -> f64 {
        self.estimate + self.half_width
    }
}

/// Lower empirical quantile: the value at rank `floor(q (n - 1))` of the
/// sorted sample, so `q = 0` is the minimum and `q = 1` the maximum.
pub fn quantile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::param("quantile", format!("must lie in [0, 1], got {q}")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = (q * (sorted.len() - 1) as f64).floor() as usize;
    Ok(sorted[rank.min(sorted.len() - 1)])
}

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let mx = xs[..n].iter().sum::<f64>() / n as f64;
    let my = ys[..n].iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    (sxx > 0.0).then(|| sxy / sxx)
}
