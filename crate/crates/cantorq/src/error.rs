use thiserror::Error;

use crate::word_measure::Word;

/// Errors surfaced by library operations. Preconditions that are cheap to
/// state are validated and rejected rather than assumed.
#[derive(Debug, Error)]
pub enum Error {
    #[error("words {0} and {1} are prefix-related; their cylinders overlap")]
    PrefixRelated(Word, Word),

    #[error("word set is not prefix-free: {0} is a prefix of {1}")]
    NotPrefixFree(Word, Word),

    #[error("word set is not a complete cut: total mass {0} != 1")]
    IncompleteCut(String),

    #[error("codebook must contain at least one point")]
    EmptyCodebook,

    #[error("codebook points must be strictly increasing (violation at index {0})")]
    UnsortedCodebook(usize),

    #[error("split victim {0} does not attain the maximal leaf weight")]
    VictimNotMaximal(Word),

    #[error("n must satisfy 1 <= n <= {max}, got {n}")]
    StageOutOfRange { n: u64, max: u64 },

    #[error("depth must satisfy {min} <= depth <= {max}, got {depth}")]
    DepthOutOfRange { depth: u32, min: u32, max: u32 },

    #[error("cannot place {n} codes on {atoms} atoms")]
    TooManyClusters { n: u64, atoms: usize },

    #[error("refinement budget of {budget} cylinder expansions exhausted (gap {gap} not reached)")]
    BudgetExhausted { budget: u64, gap: String },

    #[error("stage {n} has {count} optimal sets, which exceeds the limit {limit}")]
    EnumerationLimit { n: u64, count: String, limit: u64 },

    #[error("invalid range: {0}")]
    BadRange(String),

    #[error("invalid rational: {0}")]
    BadRational(String),

    #[error("invalid word {0:?}: words are strings over {{1,2}} of length <= 64")]
    BadWord(String),

    #[error("invalid parameters: {0}")]
    BadParams(String),
}
