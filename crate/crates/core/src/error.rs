use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Variant names are stable; the CLI reports them verbatim on stderr.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QriError {
    #[error("partition cuts must be strictly increasing (found {prev} then {next})")]
    NonIncreasingCuts { prev: f64, next: f64 },
    #[error("partition cut {cut} lies outside the open interval (0, 1/2)")]
    CutOutOfRange { cut: f64 },
    #[error("partition must have at least one member")]
    ZeroK,
    #[error("partition has {members} members, more than the cap of {cap}")]
    TooManyMembers { members: usize, cap: usize },
    #[error("coarse cut {cut} is not one of the fine partition's cuts")]
    NotARefinement { cut: f64 },
    #[error("expected {expected} values for the fine partition, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("probability {p} is out of range")]
    ProbabilityOutOfRange { p: f64 },
    #[error("parameter {name} = {value} is invalid")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("could not invert the cdf at p = {p}")]
    InversionFailure { p: f64 },
    #[error("cannot parse distribution literal `{0}`")]
    BadDistributionLiteral(String),

    #[error("quantile ratio denominator is zero at p = {p}")]
    ZeroDenominator { p: f64 },
    #[error("quadrature did not converge (estimated error {error:e}, tolerance {tolerance:e})")]
    QuadratureNonConvergence { error: f64, tolerance: f64 },

    #[error("negative income {value}")]
    NegativeIncome { value: f64 },
    #[error("non-finite income {value}")]
    NonFiniteIncome { value: f64 },
    #[error("need at least 2 observations, got {n}")]
    TooFewObservations { n: usize },
    #[error("fraction of zero incomes {fraction} is not below 1/2")]
    ZeroMassTooLarge { fraction: f64 },
    #[error("quantile density window collapsed at p = {p} (sample too small)")]
    DegenerateWindow { p: f64 },
    #[error("grid size must be at least 2, got {0}")]
    InvalidGrid(usize),
    #[error("alpha must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("block boundary n*p = {position} is not a distinct integer")]
    NonIntegerBlockBoundary { position: f64 },

    #[error("bins {first} and {second} overlap")]
    OverlappingBins { first: usize, second: usize },
    #[error("open-ended bin must be the last row (found at row {row})")]
    OpenBinNotLast { row: usize },
    #[error("bin table is empty or has zero total count")]
    EmptyTable,
    #[error("bin table has no open-ended top bin")]
    NoOpenBin,
    #[error("bad bin row {row}: {reason}")]
    BadBinRow { row: usize, reason: String },
    #[error("open-ended bin holds fraction {fraction} of the total, not below 1/2")]
    OpenBinTooLarge { fraction: f64 },
}

impl QriError {
    /// The variant name, e.g. `"TooFewObservations"`.
    pub fn name(&self) -> &'static str {
        use QriError::*;
        match self {
            NonIncreasingCuts { .. } => "NonIncreasingCuts",
            CutOutOfRange { .. } => "CutOutOfRange",
            ZeroK => "ZeroK",
            TooManyMembers { .. } => "TooManyMembers",
            NotARefinement { .. } => "NotARefinement",
            LengthMismatch { .. } => "LengthMismatch",
            ProbabilityOutOfRange { .. } => "ProbabilityOutOfRange",
            InvalidParameter { .. } => "InvalidParameter",
            InversionFailure { .. } => "InversionFailure",
            BadDistributionLiteral(_) => "BadDistributionLiteral",
            ZeroDenominator { .. } => "ZeroDenominator",
            QuadratureNonConvergence { .. } => "QuadratureNonConvergence",
            NegativeIncome { .. } => "NegativeIncome",
            NonFiniteIncome { .. } => "NonFiniteIncome",
            TooFewObservations { .. } => "TooFewObservations",
            ZeroMassTooLarge { .. } => "ZeroMassTooLarge",
            DegenerateWindow { .. } => "DegenerateWindow",
            InvalidGrid(_) => "InvalidGrid",
            InvalidAlpha(_) => "InvalidAlpha",
            NonIntegerBlockBoundary { .. } => "NonIntegerBlockBoundary",
            OverlappingBins { .. } => "OverlappingBins",
            OpenBinNotLast { .. } => "OpenBinNotLast",
            EmptyTable => "EmptyTable",
            NoOpenBin => "NoOpenBin",
            BadBinRow { .. } => "BadBinRow",
            OpenBinTooLarge { .. } => "OpenBinTooLarge",
        }
    }
}

pub type Result<T> = std::result::Result<T, QriError>;
