//! Binomial coefficients and k-subset primitives.
//!
//! Subsets are index sets over `[0, n)`. The canonical indexing of any vector
//! over k-subsets is colexicographic rank, which does not depend on `n`.
//! Enumeration uses the revolving-door Gray code so that callers can keep a
//! running subset sum with one swap per step.

mod binomial;
mod revolving;
mod subset;

pub use binomial::{binomial, binomial_u128, BinomialTable};
pub use revolving::{
    iterate_ksubsets, rank_revolving, unrank_revolving, KSubsetStream, RevolvingDoor, Swap,
};
pub use subset::{rank_colex, unrank_colex, KSubset, MAX_MASK_N};
pub(crate) use subset::rank_colex_slice;
