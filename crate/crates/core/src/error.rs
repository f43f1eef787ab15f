use crate::Rational;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A weight entry could not be read as an exact rational. `entry` is 1-based.
    #[error("parse error at entry {entry}: {message}")]
    Parse { entry: usize, message: String },

    #[error("malformed weight document: {0}")]
    Document(String),

    #[error("weight list is empty")]
    Empty,

    #[error("weights must sum to zero (residual {residual})")]
    NonZeroSum { residual: Rational },

    #[error("weights have negative sum {sum}, outside the hypothesis")]
    NegativeSum { sum: Rational },

    #[error("rank {rank} out of range: only C({n},{k}) = {total} subsets")]
    RankOutOfRange {
        rank: u128,
        n: usize,
        k: usize,
        total: u128,
    },

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("invalid restriction: {0}")]
    Restriction(String),

    #[error("parameter out of range: {0}")]
    Domain(String),

    #[error("dense materialization needs {needed} entries but the budget is {budget}; use the entry accessor instead")]
    DenseBudget { needed: u128, budget: u128 },

    #[error("search space has {candidates} candidates, budget is {budget}; {advice}")]
    SearchBudget {
        candidates: u128,
        budget: u128,
        advice: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
