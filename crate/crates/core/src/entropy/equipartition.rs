use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::block::Word;
use crate::error::{Error, Result};

/// Split of length-`n` words into small-measure (good) and remaining (bad) words.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquipartitionReport {
    pub word_length: usize,
    pub h_bits: f64,
    pub epsilon: f64,
    /// `2^(-n (h - epsilon))`.
    pub threshold: f64,
    pub good_words: Vec<Word>,
    pub bad_words: Vec<Word>,
    pub good_mass: f64,
    pub bad_mass: f64,
}

/// Words with measure at most `2^(-n (h - epsilon))` are good, the rest bad.
pub fn equipartition_classify(
    word_measures: &BTreeMap<Word, f64>,
    n: usize,
    h_bits: f64,
    epsilon: f64,
) -> Result<EquipartitionReport> {
    if !(epsilon > 0.0) {
        return Err(Error::param("epsilon", format!("must be positive, got {epsilon}")));
    }
    let threshold = (-(n as f64) * (h_bits - epsilon)).exp2();
    let mut report = EquipartitionReport {
        word_length: n,
        h_bits,
        epsilon,
        threshold,
        good_words: Vec::new(),
        bad_words: Vec::new(),
        good_mass: 0.0,
        bad_mass: 0.0,
    };
    for (word, &p) in word_measures {
        if p <= threshold {
            report.good_words.push(word.clone());
            report.good_mass += p;
        } else {
            report.bad_words.push(word.clone());
            report.bad_mass += p;
        }
    }
    report.bad_mass = report.bad_mass.min(1.0);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::super::block::exact_word_measures;
    use super::*;
    use crate::systems::SystemSpec;

    #[test]
    fn full_shift_words_are_all_good() {
        let m = exact_word_measures(&SystemSpec::radic(2).unwrap(), 8).unwrap();
        let r = equipartition_classify(&m, 8, 1.0, 0.1).unwrap();
        assert_eq!(r.good_words.len(), 256);
        assert!(r.bad_words.is_empty());
        assert_eq!(r.bad_mass, 0.0);
        assert!((r.good_mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn heavy_word_is_bad() {
        let m = BTreeMap::from([(vec![1, 1], 0.7), (vec![1, 2], 0.1), (vec![2, 1], 0.2)]);
        let r = equipartition_classify(&m, 2, 1.0, 0.1).unwrap();
        // threshold 2^{-1.8} ≈ 0.287
        assert_eq!(r.bad_words, vec![vec![1, 1]]);
        assert!((r.bad_mass - 0.7).abs() < 1e-15);
        assert_eq!(r.good_words.len() + r.bad_words.len(), m.len());
    }

    #[test]
    fn zero_entropy_makes_everything_good() {
        let m = BTreeMap::from([(vec![1, 1, 1], 1.0)]);
        let r = equipartition_classify(&m, 3, 0.0, 0.2).unwrap();
        assert!(r.threshold > 1.0);
        assert_eq!(r.bad_mass, 0.0);
        assert!(equipartition_classify(&m, 3, 0.0, 0.0).is_err());
    }
}
