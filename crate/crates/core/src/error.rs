use thiserror::Error;

pub type Result<T, E = SimError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("label '{0}' appears in both layouts")]
    LayoutConflict(String),
    #[error("unknown factor label '{0}'")]
    UnknownLabel(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("layout mismatch: expected {expected}, found {found}")]
    LayoutMismatch { expected: String, found: String },
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("state norm is {0}, expected 1")]
    NotNormalized(f64),
    #[error("operator is not unitary (‖U†U − I‖_F = {defect:e})")]
    NotUnitary { defect: f64 },
    #[error("expectation value has imaginary part {0:e}")]
    NonRealExpectation(f64),
    #[error("Π completeness violated: {0}")]
    IncompleteProjectors(String),
    #[error("observer eigenvalues β must be distinct: {0:?}")]
    DegenerateEigenvalues(Vec<f64>),
    #[error("outcome index {index} out of range 1..={max}")]
    OutcomeOutOfRange { index: usize, max: usize },
    #[error("operator is not supported on the single factor '{label}' (support: {support:?})")]
    NotLocallySupported { label: String, support: Vec<String> },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
}
