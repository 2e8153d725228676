//! Counter-based random streams.
//!
//! Every unit of work (a pair, an orbit, a sample point) draws from its own
//! ChaCha stream addressed by `(seed, index)`. Streams do not depend on the
//! order in which work is scheduled, so results are identical for any number
//! of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// The independent stream for work item `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
