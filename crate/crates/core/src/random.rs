use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Seed for one independent random stream.
///
/// `(master_seed, stream_index)` selects a ChaCha8 stream; every trial of an
/// experiment gets its own `stream_index`. Each stream is further carved into
/// sub-streams so that the defective-set draw and the algorithm's coin flips
/// never share words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomSeed {
    pub master_seed: u64,
    pub stream_index: u64,
}

const SUBSTREAM_SHIFT: u32 = 56;
const DEFECTIVES_SUBSTREAM: u64 = 0;
const ALGORITHM_SUBSTREAM: u64 = 1;

impl RandomSeed {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        RandomSeed { master_seed, stream_index }
    }

    /// Generator positioned at the start of sub-stream `substream` (at most 4095).
    pub fn substream(&self, substream: u64) -> ChaCha8Rng {
        assert!(substream < 1 << (68 - SUBSTREAM_SHIFT), "substream index out of range");
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng.set_word_pos(u128::from(substream) << SUBSTREAM_SHIFT);
        rng
    }

    /// Stream used to draw the hidden defective set in simulations.
    pub fn defectives_rng(&self) -> ChaCha8Rng {
        self.substream(DEFECTIVES_SUBSTREAM)
    }

    /// Stream consumed by the randomized algorithms.
    pub fn algorithm_rng(&self) -> ChaCha8Rng {
        self.substream(ALGORITHM_SUBSTREAM)
    }
}

/// A random function `[domain] → [codomain]`, evaluated lazily.
///
/// The function is fixed by a 128-bit key drawn from the caller's generator;
/// `eval(x)` hashes `(key, x)` through two rounds of the SplitMix64 finalizer
/// and maps the 64-bit result onto `1..=codomain` with a widening multiply.
/// Distinct items therefore receive (pseudo-)independent uniform values without
/// ever materializing the `domain` draws, which keeps a query against a
/// preimage `f⁻¹(j)` proportional to the number of defectives rather than `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomFunction {
    domain: u64,
    codomain: u64,
    key: [u64; 2],
}

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RandomFunction {
    pub fn draw<R: Rng + ?Sized>(domain: u64, codomain: u64, rng: &mut R) -> Self {
        assert!(codomain >= 1, "codomain must be non-empty");
        RandomFunction { domain, codomain, key: [rng.random(), rng.random()] }
    }

    pub fn domain(&self) -> u64 {
        self.domain
    }

    pub fn codomain(&self) -> u64 {
        self.codomain
    }

    /// Value in `1..=codomain` for item `x`.
    #[inline]
    pub fn eval(&self, x: u64) -> u64 {
        let h = mix64(mix64(x ^ self.key[0]).wrapping_add(self.key[1]));
        ((u128::from(h) * u128::from(self.codomain)) >> 64) as u64 + 1
    }
}
