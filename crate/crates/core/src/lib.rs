//! Exact-arithmetic analysis of binary voting rules: responsiveness,
//! robustness certificates, weighted-majority detection and efficiency.

pub mod cli;
pub mod distribution;
pub mod efficiency;
pub mod enumerate;
pub mod error;
pub mod gamma;
pub mod io;
pub mod lp;
pub mod profile;
pub mod random_rules;
pub mod rational;
pub mod report;
pub mod respond;
pub mod robustness;
pub mod rule;
pub mod wmr;

/// Largest number of individuals any operation accepts.
pub const MAX_VOTERS: usize = 16;

pub use distribution::{Distribution, DistributionSet};
pub use error::{Error, Result};
pub use profile::{DecisionProfile, Permutation};
pub use rational::{ExtendedRational, Rational};
pub use rule::{AnyRule, RandomVotingRule, VotingRule};
