//! SplitMix64, the only random source in the crate.
//!
//! The stream layout is part of the on-disk contract: a vocabulary file stores
//! only `(dim, seed)` and every word vector is regenerated from it, so the
//! constants and the seeding rule below must never change.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Stream for the `index`-th vector under `seed`.
    pub fn for_vector(seed: u64, index: u64) -> Self {
        Self::new(seed ^ index.wrapping_mul(GOLDEN_GAMMA))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}
