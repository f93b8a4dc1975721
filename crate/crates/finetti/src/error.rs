//! Error type shared by every module in the crate.

use crate::rational::Rational;

/// Errors produced by validation, exact-mode caps, and numerical recovery.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Alphabet size outside the supported range.
    #[error("alphabet size must be between 1 and {max}, got {size}")]
    InvalidAlphabetSize {
        /// Requested size.
        size: usize,
        /// Largest supported size.
        max: usize,
    },

    /// A state index does not belong to the alphabet.
    #[error("state {state} is outside alphabet of size {size}")]
    StateOutOfRange {
        /// Offending state.
        state: usize,
        /// Alphabet size.
        size: usize,
    },

    /// Two values were built over different alphabets.
    #[error("alphabet mismatch: expected size {expected}, found size {found}")]
    AlphabetMismatch {
        /// Size expected by the receiver.
        expected: usize,
        /// Size actually supplied.
        found: usize,
    },

    /// A probability vector failed validation.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// A model definition failed validation.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// A rational that must lie in [0, 1] does not.
    #[error("probability {0} lies outside [0, 1]")]
    InvalidProbability(Rational),

    /// An event tuple longer than the enumeration cap.
    #[error("event tuple of length {len} exceeds the cap of {cap}")]
    TooManyEvents {
        /// Supplied tuple length.
        len: usize,
        /// Cap.
        cap: usize,
    },

    /// A joint-table query longer than the stored horizon.
    #[error("joint table has horizon {horizon}, cannot answer length {requested}")]
    HorizonExceeded {
        /// Table horizon.
        horizon: usize,
        /// Requested length.
        requested: usize,
    },

    /// Exact count-vector enumeration refused; use Monte Carlo instead.
    #[error(
        "exact mode supports sample sizes up to {cap} (FINETTI_MAX_EXACT_N raises it), \
         got {requested}; use Monte Carlo estimation for larger samples"
    )]
    ExactCapExceeded {
        /// Current cap.
        cap: u64,
        /// Requested sample size.
        requested: u64,
    },

    /// An operation that assumes exchangeability was given a model that is not.
    #[error("model is not exchangeable: deviation {deviation} on the {k}-dimensional marginal")]
    NotExchangeable {
        /// Maximal deviation found by the permutation check.
        deviation: Rational,
        /// Marginal dimension at which it was found.
        k: usize,
    },

    /// Empirical evaluation of an empty sample.
    #[error("empty sample")]
    EmptySample,

    /// Partition classes must be pairwise disjoint.
    #[error("partition events must be pairwise disjoint")]
    OverlappingPartition,

    /// A count vector exceeding its sample size.
    #[error("counts sum to {total}, exceeding sample size {sample_size}")]
    CountsExceedSampleSize {
        /// Sum of the count vector.
        total: u64,
        /// Sample size.
        sample_size: u64,
    },

    /// A moment sequence whose zeroth entry is not 1.
    #[error("moment sequence must start at 1, got {0}")]
    BadLeadingMoment(Rational),

    /// Complete-monotonicity validation failed.
    #[error("moments are not completely monotone: violation at difference order {j}, index {k}")]
    NotCompletelyMonotone {
        /// Difference order of the first violation.
        j: usize,
        /// Moment index of the first violation.
        k: usize,
    },

    /// Singular Hankel system during atomic recovery.
    #[error("Hankel system of order {order} is rank deficient; retry with fewer atoms")]
    RankDeficient {
        /// Order of the singular system.
        order: usize,
    },

    /// Solver stopped at the iteration cap without meeting its tolerance.
    #[error("solver did not converge within {iterations} iterations; last residual {residual}")]
    NoConvergence {
        /// Iterations performed.
        iterations: usize,
        /// Residual when the cap was hit.
        residual: f64,
    },

    /// Atomic recovery produced an unusable root or weight.
    #[error("atomic recovery failed: {0}")]
    RecoveryFailed(String),

    /// Generic parameter validation failure.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Malformed textual input (rationals, event lists, model files).
    #[error("parse error: {0}")]
    Parse(String),

    /// Failure reading or writing a file.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of the numerical recovery layer (as opposed to
    /// validation); the command-line front end maps these to exit code 3.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RankDeficient { .. } | Error::NoConvergence { .. } | Error::RecoveryFailed(_)
        )
    }
}
