//! Exact verification kernels for counting nonnegative k-subset sums of a
//! zero-sum weight vector.
//!
//! The crate is organized bottom-up:
//!
//! - [`combinatorics`]: big-integer binomials, colex ranking and the
//!   revolving-door k-subset stream.
//! - [`weights`]: parsing, normalization and generation of weight vectors,
//!   plus the vector of k-subset sums.
//! - [`counting`]: exact nonnegative counts by enumeration and over
//!   multiplicity patterns, and closed-form family sizes.
//! - [`scheme`]: inclusion, Kneser and Bose–Mesner matrices of the Johnson
//!   scheme and the eigenvector identities they satisfy.
//! - [`lemmas`]: instance verifiers for each step of the quadratic-range
//!   argument, the random-partition simulator and the scalar inequality suite.
//! - [`search`]: exhaustive grid search for extremal and violating patterns.
//!
//! All arithmetic that decides a claim is exact (`BigInt` / `BigRational`).

pub mod combinatorics;
pub mod counting;
pub mod error;
pub mod lemmas;
pub mod report;
pub mod scheme;
pub mod search;
pub mod weights;

pub use error::{Error, Result};

/// Exact rational scalar used for weights and every reported value.
pub type Rational = num_rational::BigRational;
