//! Seeded randomness with reproducible parallel aggregation.
//!
//! Contract: a master 64-bit seed fully determines every random result, no
//! matter how many worker threads participate. Trials are partitioned into
//! fixed blocks of [`TRIALS_PER_BLOCK`]; block `b` always draws from the
//! ChaCha substream with stream id `b`, and partial results are combined with
//! commutative, rounding-exact merges (integer counts, `f64` min/max). Thread
//! scheduling therefore cannot change any aggregate.
//!
//! Independent phases of one experiment (tomography repetitions, acceptance
//! cells) derive their own master seeds through [`mix`], keeping the block
//! ids within each phase private to it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Number of trials served by one RNG substream block.
pub const TRIALS_PER_BLOCK: u64 = 1 << 16;

/// The generator for one substream of a master seed.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derive an independent master seed for a named phase of an experiment.
pub fn mix(seed: u64, phase: u64) -> u64 {
    // SplitMix64 finalizer over the seed offset by the phase index.
    let mut z = seed ^ phase.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Run `trials` independent random trials and merge per-block accumulators.
///
/// `step` advances one trial; `merge` must be commutative and associative
/// (exactly, not merely up to rounding) for the result to be independent of
/// the number of threads.
pub fn parallel_trials<A, I, S, M>(trials: u64, seed: u64, init: I, step: S, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    S: Fn(&mut A, &mut ChaCha8Rng) + Sync,
    M: Fn(A, A) -> A + Send + Sync,
{
    let blocks = trials.div_ceil(TRIALS_PER_BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = substream(seed, block);
            let first = block * TRIALS_PER_BLOCK;
            let count = (trials - first).min(TRIALS_PER_BLOCK);
            let mut acc = init();
            for _ in 0..count {
                step(&mut acc, &mut rng);
            }
            acc
        })
        .reduce_with(&merge)
        .unwrap_or_else(init)
}
