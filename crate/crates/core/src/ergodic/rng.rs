//! SplitMix64 as a counter-based generator.
//!
//! The `i`-th output for key `k` is `mix(k + (i + 1)·γ)` with
//! `γ = 0x9E3779B97F4A7C15` and the finalizer
//! `z ← (z ⊕ z≫30)·0xBF58476D1CE4E5B9; z ← (z ⊕ z≫27)·0x94D049BB133111EB; z ⊕ z≫31`,
//! which is exactly the sequential SplitMix64 stream seeded with `k`.

pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const MIX1: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX2: u64 = 0x94D0_49BB_1331_11EB;

pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(MIX1);
    z = (z ^ (z >> 27)).wrapping_mul(MIX2);
    z ^ (z >> 31)
}

/// `i`-th 64-bit output of the stream keyed by `key`.
pub fn output(key: u64, index: u64) -> u64 {
    mix64(key.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
}

/// Key of the independent sub-stream `stream` of `seed`.
pub fn stream_key(seed: u64, stream: u64) -> u64 {
    mix64(seed ^ mix64(stream.wrapping_add(1).wrapping_mul(GAMMA)))
}

/// Uniform on `(0, 1]` from the top 53 bits.
pub fn unit_open_closed(bits: u64) -> f64 {
    ((bits >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Sequential view of one stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    key: u64,
    index: u64,
}

impl SplitMix64 {
    pub fn new(key: u64) -> Self {
        Self { key, index: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        let x = output(self.key, self.index);
        self.index += 1;
        x
    }

    pub fn next_unit(&mut self) -> f64 {
        unit_open_closed(self.next_u64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // sequential SplitMix64 seeded with 1234567
        let mut g = SplitMix64::new(1_234_567);
        let expected = [6_457_827_717_110_365_317u64, 3_203_168_211_198_807_973, 9_817_491_932_198_370_423];
        for e in expected {
            assert_eq!(g.next_u64(), e);
        }
        assert_eq!(output(1_234_567, 2), expected[2]);
    }

    #[test]
    fn unit_interval_bounds() {
        assert_eq!(unit_open_closed(u64::MAX), 1.0);
        assert!(unit_open_closed(0) > 0.0);
    }
}
