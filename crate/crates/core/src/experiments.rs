//! Monte Carlo experiments on random bundles.
//!
//! Every random vector is addressed by an index under the experiment seed, so
//! results do not depend on evaluation order or thread count. Trial `t` of a
//! run with `k` members uses indices `(k << 40) | (t (k + 1) + j)`: `j < k` are
//! the bundled members and `j = k` is the non-member probe.

use rayon::prelude::*;

use crate::analytics::FilterAnalytics;
use crate::bundle::BundleAccumulator;
use crate::error::{Error, Result};
use crate::hypervector::Hypervector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipTrial {
    pub member: f64,
    pub nonmember: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator).
    pub std: f64,
}

pub fn summarize(values: &[f64]) -> Summary {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Summary {
        mean,
        std: var.sqrt(),
    }
}

fn trial_index(k: usize, trial: usize, j: usize) -> u64 {
    ((k as u64) << 40) | (trial as u64 * (k as u64 + 1) + j as u64)
}

fn validate(dim: usize, k: usize, trials: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    Ok(())
}

/// For each trial, bundles `k` fresh vectors and scores one member (member
/// `trial % k`) and one fresh non-member.
pub fn membership_trials(
    dim: usize,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<MembershipTrial>> {
    validate(dim, k, trials)?;
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut acc = BundleAccumulator::new(dim)?;
            let mut probe = None;
            for j in 0..k {
                let v = Hypervector::generate(dim, seed, trial_index(k, t, j))?;
                acc.add(&v)?;
                if j == t % k {
                    probe = Some(v);
                }
            }
            let bundle = acc.finish();
            let outsider = Hypervector::generate(dim, seed, trial_index(k, t, k))?;
            Ok(MembershipTrial {
                member: bundle.membership_score(&probe.expect("k > 0"))?.value,
                nonmember: bundle.membership_score(&outsider)?.value,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoPoint {
    pub k: usize,
    pub sigma: f64,
    pub rho_analytic: f64,
    pub precision_emp: Option<f64>,
    pub recall_emp: Option<f64>,
}

/// Empirical precision and recall at `threshold` from `trials` member and
/// `trials` non-member probes, next to the analytic prediction.
pub fn rho_point(dim: usize, k: usize, trials: usize, seed: u64, threshold: f64) -> Result<RhoPoint> {
    let analytic = FilterAnalytics::predict(k, dim)?;
    let scores = membership_trials(dim, k, trials, seed)?;
    let tp = scores.iter().filter(|s| s.member > threshold).count();
    let fp = scores.iter().filter(|s| s.nonmember > threshold).count();
    let ratio = |num: usize, den: usize| (den > 0).then(|| num as f64 / den as f64);
    Ok(RhoPoint {
        k,
        sigma: analytic.sigma,
        rho_analytic: analytic.precision_recall,
        precision_emp: ratio(tp, tp + fp),
        recall_emp: ratio(tp, trials),
    })
}

pub fn rho_curve(
    dim: usize,
    k_min: usize,
    k_max: usize,
    trials: usize,
    seed: u64,
    threshold: f64,
) -> Result<Vec<RhoPoint>> {
    if !(1 <= k_min && k_min <= k_max && k_max <= dim) {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k_min <= k_max <= dim, got k_min={k_min} k_max={k_max} dim={dim}"
        )));
    }
    (k_min..=k_max)
        .map(|k| rho_point(dim, k, trials, seed, threshold))
        .collect()
}

/// Scaled dot products of `pairs` independent random pairs.
pub fn random_pair_dots(dim: usize, pairs: usize, seed: u64) -> Result<Vec<f64>> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    (0..pairs as u64)
        .into_par_iter()
        .map(|p| {
            let a = Hypervector::generate(dim, seed, 2 * p)?;
            let b = Hypervector::generate(dim, seed, 2 * p + 1)?;
            a.dot(&b)
        })
        .collect()
}
