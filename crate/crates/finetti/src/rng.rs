//! Counter-based pseudorandom generator for reproducible parallel sampling.
//!
//! Every draw is a pure function of `(seed, stream, counter)`, so experiment
//! `j` of a Monte-Carlo run always sees the same randomness no matter how the
//! experiments are scheduled across threads. The generator is SplitMix64: a
//! Weyl sequence keyed by `(seed, stream)` pushed through the finalizer mix.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic counter-based generator.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    /// Generator for stream `stream` of master seed `seed`.
    ///
    /// Distinct `(seed, stream)` pairs yield statistically independent
    /// sequences; the same pair always yields the same sequence.
    pub fn new(seed: u64, stream: u64) -> Self {
        let key = mix(mix(seed ^ GOLDEN).wrapping_add(mix(stream.wrapping_mul(GOLDEN) ^ !seed)));
        CounterRng { key, counter: 0 }
    }

    /// Next 64 uniform bits.
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform double in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Unbiased uniform integer in `[0, bound)`.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        // Rejection below 2^64 mod bound removes the modulo bias.
        let cutoff = bound.wrapping_neg() % bound;
        loop {
            let v = self.next_u64();
            if v >= cutoff {
                return v % bound;
            }
        }
    }
}
