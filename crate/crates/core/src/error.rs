use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid Pauli string {text:?}: {reason}")]
    PauliParse { text: String, reason: String },

    #[error("invalid rational {0:?}")]
    RationalParse(String),

    #[error("term {pauli} has imaginary phase; Hermitian couplings require a real sign")]
    ImaginaryPhase { pauli: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("tableau is not a valid Clifford action: {0}")]
    InvalidTableau(String),

    #[error("pulse {0} is not self-inverse")]
    NotInvolution(String),

    #[error("sequence is not a closed cycle; residual action: {residual}")]
    CycleNotClosed { residual: String },

    #[error("total free-evolution weight must be positive")]
    NonPositiveWeight,

    #[error("bath label {0:?} has no matrix in the bath model")]
    MissingBathLabel(String),

    #[error("dense dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("error group is not Abelian")]
    NonAbelian,

    #[error("all sweep points at numerical floor")]
    AllAtFloor,

    #[error("malformed input: {0}")]
    Format(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::PauliParse { .. } => "pauli_parse",
            Error::RationalParse(_) => "rational_parse",
            Error::ImaginaryPhase { .. } => "imaginary_phase",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::InvalidTableau(_) => "invalid_tableau",
            Error::NotInvolution(_) => "not_involution",
            Error::CycleNotClosed { .. } => "cycle_not_closed",
            Error::NonPositiveWeight => "non_positive_weight",
            Error::MissingBathLabel(_) => "missing_bath_label",
            Error::DimensionCap { .. } => "dimension_cap",
            Error::NotHermitian(_) => "not_hermitian",
            Error::NonAbelian => "non_abelian",
            Error::AllAtFloor => "all_at_floor",
            Error::Format(_) => "format",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
