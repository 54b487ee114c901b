//! Integer sums of hypervectors.
//!
//! A [`BundleVector`] is the memory of a multiset of hypervectors: component
//! `i` is the sum of the `i`-th signs of everything added so far. Weights are
//! realised by repeated addition, so `count` is always the multiset size and
//! every component has the parity of `count`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypervector::{words_for, Hypervector};
use crate::membership::MembershipScore;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleVector {
    components: Vec<i32>,
    count: u64,
}

impl BundleVector {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self {
            components: vec![0; dim],
            count: 0,
        })
    }

    /// Rebuilds a bundle from stored parts, checking the magnitude and parity
    /// invariants.
    pub fn from_parts(components: Vec<i32>, count: u64) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::ZeroDimension);
        }
        for (i, &c) in components.iter().enumerate() {
            if u64::from(c.unsigned_abs()) > count || (i64::from(c) - count as i64) % 2 != 0 {
                return Err(Error::Format(format!(
                    "component {i} = {c} inconsistent with count {count}"
                )));
            }
        }
        Ok(Self { components, count })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn components(&self) -> &[i32] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn add(&mut self, v: &Hypervector) -> Result<()> {
        self.add_weighted(v, 1)
    }

    /// Adds `v` exactly `weight` times.
    pub fn add_weighted(&mut self, v: &Hypervector, weight: u32) -> Result<()> {
        v.check_dim(self.dim())?;
        let w = weight as i32;
        for (chunk, &word) in self.components.chunks_mut(64).zip(v.words()) {
            for (b, c) in chunk.iter_mut().enumerate() {
                // +w when the bit is set, -w otherwise
                let bit = ((word >> (63 - b)) & 1) as i32;
                *c += (2 * bit - 1) * w;
            }
        }
        self.count += u64::from(weight);
        Ok(())
    }

    /// The bundle obtained by adding every constituent `factor` times.
    pub fn scaled(&self, factor: u32) -> Self {
        Self {
            components: self.components.iter().map(|&c| c * factor as i32).collect(),
            count: self.count * u64::from(factor),
        }
    }

    /// `sum_i sign(q, i) * components[i]`, without the `1/d` scale.
    pub fn raw_score(&self, query: &Hypervector) -> Result<i64> {
        query.check_dim(self.dim())?;
        let mut total = 0i64;
        for (chunk, &word) in self.components.chunks(64).zip(query.words()) {
            for (b, &c) in chunk.iter().enumerate() {
                let c = i64::from(c);
                if (word >> (63 - b)) & 1 == 1 {
                    total += c;
                } else {
                    total -= c;
                }
            }
        }
        Ok(total)
    }

    /// Membership score `(1/d) q . bundle` with the default threshold.
    pub fn membership_score(&self, query: &Hypervector) -> Result<MembershipScore> {
        Ok(MembershipScore::new(
            self.raw_score(query)? as f64 / self.dim() as f64,
        ))
    }

    pub fn dot(&self, other: &Self) -> Result<i64> {
        dot_i32(&self.components, &other.components)
    }

    pub fn norm_squared(&self) -> i64 {
        norm_squared(&self.components)
    }

    pub fn cosine(&self, other: &Self) -> Result<f64> {
        let dot = self.dot(other)?;
        cosine_from_parts(dot, self.norm_squared(), other.norm_squared()).ok_or(Error::ZeroVector)
    }
}

pub(crate) fn dot_i32(a: &[i32], b: &[i32]) -> Result<i64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(&x, &y)| i64::from(x) * i64::from(y)).sum())
}

pub(crate) fn norm_squared(a: &[i32]) -> i64 {
    a.iter().map(|&x| i64::from(x) * i64::from(x)).sum()
}

/// `dot / sqrt(na * nb)`, or `None` when either norm is zero.
///
/// The product is formed before the square root so that `cos(v, v)` is
/// exactly `1.0` whenever `na * nb` is representable.
pub fn cosine_from_parts(dot: i64, na: i64, nb: i64) -> Option<f64> {
    if na == 0 || nb == 0 {
        None
    } else {
        Some(dot as f64 / (na as f64 * nb as f64).sqrt())
    }
}

/// Bit-sliced counter that bundles many hypervectors at word speed.
///
/// Plane `p` holds bit `p` of the per-component count of `+1` signs; adding a
/// vector is a ripple-carry over the planes, so the cost per vector is
/// `O(d / 64)` amortised instead of `O(d)`.
#[derive(Debug, Clone)]
pub struct BundleAccumulator {
    dim: usize,
    planes: Vec<Vec<u64>>,
    count: u64,
}

impl BundleAccumulator {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self {
            dim,
            planes: Vec::new(),
            count: 0,
        })
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn add(&mut self, v: &Hypervector) -> Result<()> {
        v.check_dim(self.dim)?;
        let needed = (64 - (self.count + 1).leading_zeros()) as usize;
        while self.planes.len() < needed {
            self.planes.push(vec![0; words_for(self.dim)]);
        }
        for (w, &word) in v.words().iter().enumerate() {
            let mut carry = word;
            for plane in self.planes.iter_mut() {
                if carry == 0 {
                    break;
                }
                let next = plane[w] & carry;
                plane[w] ^= carry;
                carry = next;
            }
        }
        self.count += 1;
        Ok(())
    }

    pub fn finish(&self) -> BundleVector {
        let count = self.count as i64;
        let components = (0..self.dim)
            .map(|j| {
                let shift = 63 - (j % 64);
                let positives: i64 = self
                    .planes
                    .iter()
                    .enumerate()
                    .map(|(p, plane)| (((plane[j / 64] >> shift) & 1) as i64) << p)
                    .sum();
                (2 * positives - count) as i32
            })
            .collect();
        BundleVector {
            components,
            count: self.count,
        }
    }
}
