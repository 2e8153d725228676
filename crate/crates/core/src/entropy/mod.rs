//! Partition entropy and the entropy-based sensitivity certificate.
//!
//! An ergodic map with positive entropy `h(T, alpha)` relative to a partition
//! into continuity sets is symmetrically sensitive at every level `delta`
//! where `K_delta * 2^(-h/2) < 1`, with
//! `K_delta = exp(2 l Σ_i mu(P_i^{-delta}))` built from the internal
//! `delta`-boundaries of the cells. This module computes each ingredient:
//! interval partitions and their boundary strips, symbolic codings and
//! block entropies, the certified level itself, visit frequencies of the
//! boundary strips, and the good/bad word split of the equipartition
//! property.

mod block;
mod certificate;
mod equipartition;
mod partition;

pub use block::{
    block_entropy, exact_block_entropy, exact_word_measures, format_word, sample_codings,
    shannon_entropy_bits, BlockEntropyConfig, BlockEntropyCurve, Word, WordCount,
};
pub use certificate::{
    certificate_delta, criterion_value, visit_frequency, word_count_bound, Certificate,
    WordCountBound, BISECTION_TOLERANCE,
};
pub use equipartition::{equipartition_classify, EquipartitionReport};
pub use partition::{
    encode_orbit, internal_boundary_measure, internal_boundary_measure_mc, k_epsilon,
    k_from_boundary_mass, IntervalPartition, IntervalSet,
};
