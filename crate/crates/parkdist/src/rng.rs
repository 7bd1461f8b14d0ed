use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// RNG for one logical stream of a seeded run.
///
/// Stream `k` under master seed `s` is ChaCha8 keyed by `seed_from_u64(s)`
/// with its 64-bit stream counter set to `k`. Monte Carlo code derives one
/// stream per sample index, so results are byte-identical for any number of
/// worker threads and any work-stealing order.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
