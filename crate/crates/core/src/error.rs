use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expansion parameter N must be at least 1, got {0}")]
    InvalidParameter(u64),

    #[error("{what} = {value} is outside {domain}")]
    Domain {
        what: &'static str,
        value: String,
        domain: &'static str,
    },

    #[error("digit {digit} at position {position} is below N = {n}")]
    Inadmissible { digit: u64, position: usize, n: u64 },

    #[error("digit word is empty")]
    EmptyWord,

    #[error("digit {digit} is below N = {n}")]
    DigitRange { digit: u64, n: u64 },

    #[error("digit does not fit in 64 bits")]
    DigitOverflow,

    #[error("{what} = {value} must be at least {min}")]
    Range {
        what: &'static str,
        value: String,
        min: String,
    },

    #[error("no root in (1/2, 1]: alpha = {alpha} is below N + 2 = {needed}")]
    NoRoot { alpha: f64, needed: u64 },

    #[error("the tail sum of k^(-2s) diverges for s = {0} <= 1/2")]
    Divergence(f64),

    #[error("no beta <= {cap} satisfies the mass-distribution condition")]
    CapExceeded { cap: u64 },

    #[error("power iteration did not stabilize within {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("enumerating {words} words exceeds the budget of {budget}")]
    BudgetExceeded { words: u128, budget: u128 },

    #[error("comparison for word {word:?} is within the {bits}-bit margin; raise NEXP_PRECISION_BITS")]
    PrecisionInsufficient { word: Vec<u64>, bits: usize },

    #[error("identity violated: {0}")]
    IdentityViolation(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: impl ToString, domain: &'static str) -> Self {
        Error::Domain {
            what,
            value: value.to_string(),
            domain,
        }
    }

    pub(crate) fn range(what: &'static str, value: impl ToString, min: impl ToString) -> Self {
        Error::Range {
            what,
            value: value.to_string(),
            min: min.to_string(),
        }
    }
}
