use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::partition::{encode_orbit, IntervalPartition};
use crate::error::{Error, Result};
use crate::oracle;
use crate::stats;
use crate::stream::stream;
use crate::systems::{self, SystemId, SystemSpec};

/// A word of cell labels `1..=l`.
pub type Word = Vec<u32>;

/// Concatenated labels when every label is a single digit, dash-separated otherwise.
pub fn format_word(word: &[u32]) -> String {
    if word.iter().all(|&s| s < 10) {
        word.iter().map(|s| char::from_digit(*s, 10).unwrap()).collect()
    } else {
        word.iter().map(u32::to_string).collect::<Vec<_>>().join("-")
    }
}

/// Shannon entropy in bits. Terms are summed in the order given.
pub fn shannon_entropy_bits(probabilities: impl IntoIterator<Item = f64>) -> f64 {
    let h: f64 = probabilities
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum();
    h.max(0.0)
}

/// Exact cylinder measures of all `r^n` words of the r-adic map under the
/// canonical partition, keyed by label word.
pub fn exact_word_measures(system: &SystemSpec, n: usize) -> Result<BTreeMap<Word, f64>> {
    let r = match system.id() {
        SystemId::Radic(r) => r,
        _ => {
            return Err(Error::Unsupported {
                system: system.to_string(),
                operation: "exact word measures",
            })
        }
    };
    let count = (r as usize)
        .checked_pow(n as u32)
        .filter(|&c| c <= 1 << 24)
        .ok_or_else(|| Error::param("n", "too many words to enumerate"))?;
    let mut out = BTreeMap::new();
    let mut digits = vec![0u32; n];
    for _ in 0..count {
        let measure = oracle::exact_word_measure(system, &digits)?;
        out.insert(digits.iter().map(|d| d + 1).collect(), measure.to_f64());
        // Odometer increment, last digit fastest.
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < r {
                break;
            }
            *d = 0;
        }
    }
    Ok(out)
}

/// `H_n` from exact word measures.
pub fn exact_block_entropy(system: &SystemSpec, n: usize) -> Result<f64> {
    Ok(shannon_entropy_bits(exact_word_measures(system, n)?.into_values()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockEntropyConfig {
    pub n_max: usize,
    pub orbits: usize,
    /// Symbols recorded per orbit; every window of length `n_max` is a sample.
    pub orbit_length: usize,
    pub seed: u64,
}

impl BlockEntropyConfig {
    pub fn new(n_max: usize, orbits: usize, seed: u64) -> Self {
        BlockEntropyConfig {
            n_max,
            orbits,
            orbit_length: 256,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordCount {
    #[serde(skip)]
    pub symbols: Word,
    pub word: String,
    pub count: u64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockEntropyCurve {
    pub lengths: Vec<usize>,
    pub block_entropy_bits: Vec<f64>,
    /// `H_{n_max} - H_{n_max - 1}`, clamped at zero.
    pub rate_estimate: f64,
    /// `H_{n_max} / n_max`.
    pub per_symbol_estimate: f64,
    /// Least-squares slope of `H_n` against `n`.
    pub slope_estimate: Option<f64>,
    /// Number of length-`n` windows counted, the same for every `n`.
    pub sample_size: usize,
    pub orbits: usize,
    pub orbit_length: usize,
    pub distinct_words: Vec<usize>,
    /// Words at `n_max` with estimated probability below `1 / (10 * orbits)`.
    pub unreliable_words: usize,
    /// `l^{n_max}` is not small compared with the sample.
    pub undersampled: bool,
    /// Every sampled orbit produced the same symbol sequence.
    pub degenerate: bool,
}

enum Counter {
    Dense(Vec<u64>),
    Sparse(HashMap<u128, u64>),
}

impl Counter {
    fn new(space: Option<u128>) -> Self {
        match space {
            Some(s) if s <= 1 << 22 => Counter::Dense(vec![0; s as usize]),
            _ => Counter::Sparse(HashMap::new()),
        }
    }

    fn add(&mut self, code: u128) {
        match self {
            Counter::Dense(v) => v[code as usize] += 1,
            Counter::Sparse(m) => *m.entry(code).or_insert(0) += 1,
        }
    }

    /// Non-zero counts in increasing code order.
    fn sorted(&self) -> Vec<(u128, u64)> {
        match self {
            Counter::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, &c)| (i as u128, c))
                .collect(),
            Counter::Sparse(m) => {
                let mut out: Vec<_> = m.iter().map(|(&k, &c)| (k, c)).collect();
                out.sort_unstable();
                out
            }
        }
    }
}

fn decode(code: u128, n: usize, l: u128) -> Word {
    let mut word = vec![0u32; n];
    let mut c = code;
    for slot in word.iter_mut().rev() {
        *slot = (c % l) as u32 + 1;
        c /= l;
    }
    word
}

/// Symbol sequences of `orbits` sampled orbits, orbit `i` started from stream `(seed, i)`.
pub fn sample_codings(
    system: &SystemSpec,
    partition: &IntervalPartition,
    orbits: usize,
    length: usize,
    seed: u64,
) -> Result<Vec<Vec<u32>>> {
    (0..orbits as u64)
        .into_par_iter()
        .map(|i| {
            let x = systems::draw(system, &mut stream(seed, i));
            encode_orbit(system, partition, &x, length.saturating_sub(1))
        })
        .collect()
}

/// Plug-in block entropies from sliding windows over sampled orbits, with
/// the word table at `n_max`.
pub fn block_entropy(
    system: &SystemSpec,
    partition: &IntervalPartition,
    cfg: &BlockEntropyConfig,
) -> Result<(BlockEntropyCurve, Vec<WordCount>)> {
    if cfg.n_max == 0 {
        return Err(Error::param("n_max", "must be at least 1"));
    }
    if cfg.orbits == 0 {
        return Err(Error::param("orbits", "need at least one orbit"));
    }
    if cfg.orbit_length < cfg.n_max {
        return Err(Error::param("orbit_length", "must be at least n_max"));
    }
    let l = partition.len() as u128;
    let space_bits = (cfg.n_max as f64) * (l as f64).log2();
    if space_bits > 127.0 {
        return Err(Error::param("n_max", "word codes exceed 128 bits"));
    }
    let codings = sample_codings(system, partition, cfg.orbits, cfg.orbit_length, cfg.seed)?;

    let mut counters: Vec<Counter> = (1..=cfg.n_max)
        .map(|n| Counter::new(l.checked_pow(n as u32)))
        .collect();
    let windows = cfg.orbit_length - cfg.n_max + 1;
    for coding in &codings {
        for start in 0..windows {
            let mut code = 0u128;
            for (k, counter) in counters.iter_mut().enumerate() {
                code = code * l + u128::from(coding[start + k] - 1);
                counter.add(code);
            }
        }
    }
    let sample_size = windows * codings.len();
    let total = sample_size as f64;

    let mut entropies = Vec::with_capacity(cfg.n_max);
    let mut distinct = Vec::with_capacity(cfg.n_max);
    let mut table = Vec::new();
    for (k, counter) in counters.iter().enumerate() {
        let counts = counter.sorted();
        entropies.push(shannon_entropy_bits(counts.iter().map(|&(_, c)| c as f64 / total)));
        distinct.push(counts.len());
        if k + 1 == cfg.n_max {
            table = counts
                .iter()
                .map(|&(code, count)| {
                    let symbols = decode(code, cfg.n_max, l);
                    WordCount {
                        word: format_word(&symbols),
                        symbols,
                        count,
                        probability: count as f64 / total,
                    }
                })
                .collect();
        }
    }
    let unreliable_words = table
        .iter()
        .filter(|w| w.probability < 1.0 / (10.0 * cfg.orbits as f64))
        .count();

    let h_last = entropies[cfg.n_max - 1];
    let h_prev = if cfg.n_max >= 2 { entropies[cfg.n_max - 2] } else { 0.0 };
    let lengths: Vec<usize> = (1..=cfg.n_max).collect();
    let xs: Vec<f64> = lengths.iter().map(|&n| n as f64).collect();
    let curve = BlockEntropyCurve {
        rate_estimate: (h_last - h_prev).max(0.0),
        per_symbol_estimate: h_last / cfg.n_max as f64,
        slope_estimate: stats::slope(&xs, &entropies).map(|s| s.max(0.0)),
        lengths,
        block_entropy_bits: entropies,
        sample_size,
        orbits: cfg.orbits,
        orbit_length: cfg.orbit_length,
        distinct_words: distinct,
        unreliable_words,
        undersampled: space_bits > (sample_size as f64 / 10.0).log2(),
        degenerate: codings.windows(2).all(|w| w[0] == w[1]),
    };
    Ok((curve, table))
}
