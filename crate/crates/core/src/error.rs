use thiserror::Error;

/// Errors raised by every module of the crate.
///
/// Variants fall into two classes: input validation failures (bad
/// signatures, non-dominant weights, wrong shapes) and numerical failures
/// (spectra that do not match, degenerate eigenvalue gaps, diverging
/// iterations). [`Error::is_numerical`] tells them apart.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ambient dimension {n} is too small (need n >= {min})")]
    AmbientTooSmall { n: usize, min: usize },
    #[error("flag signature needs at least one subspace dimension")]
    EmptyKs,
    #[error("subspace dimension {k} is outside (0, {n})")]
    KOutOfRange { k: usize, n: usize },
    #[error("subspace dimensions {ks:?} are not strictly increasing")]
    NonIncreasingKs { ks: Vec<usize> },

    #[error("spectrum has {got} values, signature needs {expected}")]
    SpectrumLength { expected: usize, got: usize },
    #[error("spectrum values {i} and {j} are separated by {gap:e}, below the gap tolerance")]
    SpectrumNotDistinct { i: usize, j: usize, gap: f64 },
    #[error("spectrum contains a non-finite value")]
    NonFiniteSpectrum,

    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    DimensionMismatch {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("matrix is not symmetric (asymmetry {defect:e})")]
    NotSymmetric { defect: f64 },
    #[error("matrix is not special orthogonal (orthogonality defect {defect:e}, det {det})")]
    NotSpecialOrthogonal { defect: f64, det: f64 },
    #[error("operands belong to different flag signatures")]
    SignatureMismatch,
    #[error("tangent block ({i},{j}) should be {rows}x{cols}")]
    BlockShape {
        i: usize,
        j: usize,
        rows: usize,
        cols: usize,
    },

    #[error("eigenvalue {eigenvalue} is {distance:e} away from the nearest spectrum value")]
    SpectrumMismatch { eigenvalue: f64, distance: f64 },
    #[error("spectrum gap {gap:e} is too small to assign eigenvalues unambiguously")]
    EigenvalueGapTooSmall { gap: f64 },
    #[error("eigenvalue gap {gap:e} at block boundary {position} makes the nearest point non-unique")]
    DegenerateBoundaryGap { position: usize, gap: f64 },
    #[error("objective gradient has non-finite entries at iteration {iteration}")]
    StepNotFinite { iteration: usize },

    #[error("weight has {got} entries, SO({n}) needs {expected}")]
    WeightLength { n: usize, expected: usize, got: usize },
    #[error("weight mixes integer and half-integer entries")]
    MixedParity,
    #[error("weight is not dominant: {reason}")]
    NotDominant { reason: String },
    #[error("index {i} is outside 1..={m}")]
    IndexOutOfRange { i: usize, m: usize },
    #[error("shift {delta} is not in (0, last nonzero entry]")]
    DeltaOutOfRange { delta: String },
    #[error("enumeration cap {cap} is below 2")]
    CapTooSmall { cap: String },
    #[error("classification needs n >= 17, got {n}")]
    HypothesisViolated { n: usize },
    #[error("dimension product is not an integer ({numerator}/{denominator})")]
    NonIntegralDimension {
        numerator: String,
        denominator: String,
    },
    #[error("cannot parse weight entry {entry:?}")]
    WeightParse { entry: String },

    #[error("Stiefel manifold V({k}, R^{n}) needs 1 <= k < n")]
    InvalidStiefel { k: usize, n: usize },
}

impl Error {
    /// Stable, machine-parsable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::AmbientTooSmall { .. } => "AmbientTooSmall",
            Error::EmptyKs => "EmptyKs",
            Error::KOutOfRange { .. } => "KOutOfRange",
            Error::NonIncreasingKs { .. } => "NonIncreasingKs",
            Error::SpectrumLength { .. } => "SpectrumLength",
            Error::SpectrumNotDistinct { .. } => "SpectrumNotDistinct",
            Error::NonFiniteSpectrum => "NonFiniteSpectrum",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotSymmetric { .. } => "NotSymmetric",
            Error::NotSpecialOrthogonal { .. } => "NotSpecialOrthogonal",
            Error::SignatureMismatch => "SignatureMismatch",
            Error::BlockShape { .. } => "BlockShape",
            Error::SpectrumMismatch { .. } => "SpectrumMismatch",
            Error::EigenvalueGapTooSmall { .. } => "EigenvalueGapTooSmall",
            Error::DegenerateBoundaryGap { .. } => "DegenerateBoundaryGap",
            Error::StepNotFinite { .. } => "StepNotFinite",
            Error::WeightLength { .. } => "WeightLength",
            Error::MixedParity => "MixedParity",
            Error::NotDominant { .. } => "NotDominant",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::DeltaOutOfRange { .. } => "DeltaOutOfRange",
            Error::CapTooSmall { .. } => "CapTooSmall",
            Error::HypothesisViolated { .. } => "HypothesisViolated",
            Error::NonIntegralDimension { .. } => "NonIntegralDimension",
            Error::WeightParse { .. } => "WeightParse",
            Error::InvalidStiefel { .. } => "InvalidStiefel",
        }
    }

    /// True for failures of a numerical computation on otherwise valid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SpectrumMismatch { .. }
                | Error::EigenvalueGapTooSmall { .. }
                | Error::DegenerateBoundaryGap { .. }
                | Error::StepNotFinite { .. }
                | Error::NonIntegralDimension { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
