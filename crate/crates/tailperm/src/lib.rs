//! Tail-error codes over variable-length partial permutations.
//!
//! The alphabet of this crate is the set of all partial permutations over
//! `[q]` (distinct symbols, any length 1..=q, leftmost = weakest rank), the
//! rank-modulated reading of composite DNA symbols. Errors are deletions and
//! insertions acting on the left tail. The crate provides:
//!
//! - the tail operators and their balls/spheres ([`tail`]);
//! - detecting/correcting predicates, an exact maximum-code oracle, and the
//!   model-equivalence suite ([`check`]);
//! - the optimal detecting and correcting constructions with a decoder
//!   ([`construct`]);
//! - tensor codes over vectors of partial permutations ([`tensor`]) with
//!   pluggable outer block codes ([`outer`]);
//! - an exact and Monte Carlo simulator of the composite read channel
//!   ([`channel`]), generic over the probability scalar;
//! - a JSON certificate format for codes ([`cert`]).

pub mod cert;
pub mod channel;
pub mod check;
pub mod construct;
pub mod outer;
pub mod perm;
pub mod tail;
pub mod tensor;

pub use check::{Capability, TailCode};
pub use perm::{PartialPermutation, PermUniverse};
pub use tail::ErrorModel;

/// Exact probability scalar: arbitrary-precision rationals.
pub type ExactWeight = num_rational::BigRational;

/// Floating-point probability scalar.
pub type FloatWeight = f64;

/// Outcome distribution computed in exact rational arithmetic.
pub type ExactDistribution = channel::OutcomeDistribution<ExactWeight>;

/// Outcome distribution computed in f64 arithmetic.
pub type FloatDistribution = channel::OutcomeDistribution<FloatWeight>;
