//! Reproducible random streams.
//!
//! A stream is a ChaCha8 keystream selected by `(seed, stream_id)`; the
//! generator's word position is the counter. Work split by stream id gives
//! the same draws no matter how many threads consume the streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type RandomStream = ChaCha8Rng;

pub fn stream(seed: u64, stream_id: u64) -> RandomStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}
