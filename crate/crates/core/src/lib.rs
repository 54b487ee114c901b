//! Vector semantics with random bipolar hypervectors.
//!
//! Words, sentences and messages are represented by sums ("bundles") of
//! almost orthogonal random vectors. A single dot product against a bundle
//! answers a probabilistic set-membership query; the same primitive drives
//! word-context embeddings, sentence retrieval and a nearest-neighbour spam
//! filter.

pub mod analytics;
pub mod bundle;
pub mod context;
pub mod error;
pub mod experiments;
pub mod hypervector;
pub mod membership;
pub mod rng;
pub mod sentence;
pub mod spam;
pub mod textpipe;

pub use analytics::{normal_cdf, orthogonality_bound, FilterAnalytics};
pub use bundle::{BundleAccumulator, BundleVector};
pub use error::{Error, Result};
pub use hypervector::Hypervector;
pub use membership::{decide_membership, nearest_in_set, MembershipScore, DEFAULT_THRESHOLD};

/// Seed used by every command when none is given.
pub const DEFAULT_SEED: u64 = 42;
