//! Threshold decisions on bundle scores and exact arg-max search.

use crate::error::{Error, Result};
use crate::hypervector::Hypervector;

/// Midpoint between the member mean (1) and non-member mean (0).
pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipScore {
    pub value: f64,
    pub threshold: f64,
}

impl MembershipScore {
    pub fn new(value: f64) -> Self {
        Self {
            value,
            threshold: DEFAULT_THRESHOLD,
        }
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn is_member(&self) -> bool {
        self.value > self.threshold
    }
}

pub fn decide_membership(score: MembershipScore) -> bool {
    score.is_member()
}

/// Index of the candidate with the largest dot product against `query`.
/// Ties go to the lowest index.
pub fn nearest_in_set(candidates: &[Hypervector], query: &Hypervector) -> Result<usize> {
    let mut best: Option<(usize, i64)> = None;
    for (i, c) in candidates.iter().enumerate() {
        let a = c.agreement(query)?;
        if best.is_none_or(|(_, b)| a > b) {
            best = Some((i, a));
        }
    }
    best.map(|(i, _)| i).ok_or(Error::EmptyCandidates)
}
