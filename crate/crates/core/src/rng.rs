//! Counter-based random streams.
//!
//! Every stream is addressed by `(master_seed, stream_id)` and produces the
//! value at position `n` as a pure function of the key and `n`. Replicas and
//! swap pairs each own a stream, so the numbers a replica consumes never
//! depend on which worker advanced it or in what order.
//!
//! The block function is the SplitMix64 finalizer applied to
//! `key + (n + 1) * GAMMA`; the key itself is a mix of the seed and the
//! stream id, which spreads distinct streams to unrelated offsets of the
//! 2^64 cycle.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable hash of a sequence of words, used to derive seeds.
pub fn stable_hash(words: &[u64]) -> u64 {
    words.iter().fold(0x243F_6A88_85A3_08D3, |acc, &w| {
        mix64(acc.wrapping_add(GAMMA) ^ mix64(w.wrapping_add(GAMMA)))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    key: u64,
    position: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        Self::at(master_seed, stream_id, 0)
    }

    /// Stream positioned at an arbitrary counter value.
    pub fn at(master_seed: u64, stream_id: u64, position: u64) -> Self {
        RngStream {
            master_seed,
            stream_id,
            key: stable_hash(&[master_seed, stream_id]),
            position,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Number of draws consumed so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    /// Value at `position` without advancing the stream.
    #[inline]
    pub fn peek_at(&self, position: u64) -> u64 {
        mix64(self.key.wrapping_add(position.wrapping_add(1).wrapping_mul(GAMMA)))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let value = self.peek_at(self.position);
        self.position += 1;
        value
    }

    /// Uniform in `[0, 1)` with 53 bits of resolution. One draw.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)` by multiply-shift. One draw; the bias
    /// is below `bound / 2^64`.
    #[inline]
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }
}
