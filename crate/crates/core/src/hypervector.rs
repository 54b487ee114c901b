//! Dense bipolar hypervectors, bit-packed 64 components per word.
//!
//! Component `j` lives in bit `63 - (j % 64)` of word `j / 64`; a set bit
//! means `+1`, a clear bit `-1`. Bits past `dim` in the last word are always
//! zero so that whole-word XOR/popcount never sees garbage.
//!
//! The `1/sqrt(d)` normalisation is implicit: [`Hypervector::dot`] divides the
//! integer agreement by `d` once, which makes `dot(v, v) == 1.0` exact.

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypervector {
    dim: usize,
    words: Vec<u64>,
}

#[inline]
pub(crate) fn words_for(dim: usize) -> usize {
    dim.div_ceil(64)
}

#[inline]
fn bit_mask(j: usize) -> u64 {
    1u64 << (63 - (j % 64))
}

/// Mask of the valid bits in the last word of a `dim`-bit vector.
#[inline]
fn tail_mask(dim: usize) -> u64 {
    match dim % 64 {
        0 => u64::MAX,
        r => !(u64::MAX >> r),
    }
}

impl Hypervector {
    /// Random vector number `index` of the family identified by `seed`.
    pub fn generate(dim: usize, seed: u64, index: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut rng = SplitMix64::for_vector(seed, index);
        let mut words: Vec<u64> = (0..words_for(dim)).map(|_| rng.next_u64()).collect();
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(dim);
        }
        Ok(Self { dim, words })
    }

    /// Builds a vector from explicit signs (`true` is `+1`).
    pub fn from_signs(signs: &[bool]) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let mut words = vec![0u64; words_for(signs.len())];
        for (j, _) in signs.iter().enumerate().filter(|(_, &s)| s) {
            words[j / 64] |= bit_mask(j);
        }
        Ok(Self {
            dim: signs.len(),
            words,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Component `j` as `+1` or `-1`.
    #[inline]
    pub fn sign(&self, j: usize) -> i32 {
        if self.words[j / 64] & bit_mask(j) != 0 {
            1
        } else {
            -1
        }
    }

    pub fn signs(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.dim).map(move |j| self.sign(j))
    }

    pub fn negate(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(self.dim);
        }
        Self {
            dim: self.dim,
            words,
        }
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim,
            })
        }
    }

    /// Unscaled dot product `sum a_i b_i`, i.e. matches minus mismatches.
    pub fn agreement(&self, other: &Self) -> Result<i64> {
        other.check_dim(self.dim)?;
        let mismatches: u64 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| u64::from((a ^ b).count_ones()))
            .sum();
        Ok(self.dim as i64 - 2 * mismatches as i64)
    }

    /// Scaled dot product `(1/d) sum a_i b_i`, in `[-1, 1]`.
    pub fn dot(&self, other: &Self) -> Result<f64> {
        Ok(self.agreement(other)? as f64 / self.dim as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let a = Hypervector::generate(4, 99, 7).unwrap();
        let b = Hypervector::generate(4, 99, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(
            Hypervector::generate(256, 99, 7).unwrap(),
            Hypervector::generate(256, 99, 8).unwrap()
        );
    }

    #[test]
    fn rejects_zero_dim() {
        assert!(matches!(
            Hypervector::generate(0, 1, 1),
            Err(Error::ZeroDimension)
        ));
        assert!(Hypervector::from_signs(&[]).is_err());
    }

    #[test]
    fn bits_follow_stream_msb_first() {
        let dim = 130;
        let v = Hypervector::generate(dim, 5, 3).unwrap();
        let mut rng = SplitMix64::for_vector(5, 3);
        let draws: Vec<u64> = (0..3).map(|_| rng.next_u64()).collect();
        for j in 0..dim {
            let bit = (draws[j / 64] >> (63 - (j % 64))) & 1;
            assert_eq!(v.sign(j), if bit == 1 { 1 } else { -1 }, "component {j}");
        }
    }

    #[test]
    fn self_and_antipodal_dot() {
        for dim in [1, 63, 64, 65, 1000] {
            let v = Hypervector::generate(dim, 11, 0).unwrap();
            assert_eq!(v.dot(&v).unwrap(), 1.0);
            assert_eq!(v.dot(&v.negate()).unwrap(), -1.0);
        }
    }

    #[test]
    fn dot_matches_componentwise_sum() {
        let a = Hypervector::generate(77, 1, 1).unwrap();
        let b = Hypervector::generate(77, 1, 2).unwrap();
        let naive: i64 = a.signs().zip(b.signs()).map(|(x, y)| i64::from(x * y)).sum();
        assert_eq!(a.agreement(&b).unwrap(), naive);
    }

    #[test]
    fn dimension_mismatch() {
        let a = Hypervector::generate(10, 1, 1).unwrap();
        let b = Hypervector::generate(11, 1, 1).unwrap();
        assert!(matches!(
            a.dot(&b),
            Err(Error::DimensionMismatch {
                expected: 10,
                found: 11
            })
        ));
    }

    #[test]
    fn from_signs_round_trip() {
        let signs = [true, false, false, true, true];
        let v = Hypervector::from_signs(&signs).unwrap();
        let back: Vec<i32> = v.signs().collect();
        assert_eq!(back, vec![1, -1, -1, 1, 1]);
    }
}
