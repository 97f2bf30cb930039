use thiserror::Error;

use crate::dyadic::DyadicCube;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("the zero polynomial has no leading term")]
    ZeroPolynomial,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid grid window: {0}")]
    InvalidWindow(String),

    #[error("cube {0} lies outside the grid window")]
    OutsideWindow(DyadicCube),

    #[error("piece on cube {piece} lies outside cube {cube}")]
    PieceOutsideCube { piece: DyadicCube, cube: DyadicCube },

    #[error("pieces on cubes {0} and {1} overlap")]
    OverlappingPieces(DyadicCube, DyadicCube),

    #[error("monomial order {0} is not graded")]
    NonGradedOrder(crate::polynomial::MonomialOrder),

    #[error("hilbert dimension supports at most 16 variables, got {0}")]
    TooManyVariables(usize),

    #[error("buchberger exceeded its budget of {0} S-pair reductions")]
    BudgetExceeded(usize),

    #[error("invalid family assignment: {} violation(s), first: {}", .0.len(), .0.first().map(|v| v.to_string()).unwrap_or_default())]
    InvalidAssignment(Vec<crate::basis::Violation>),

    #[error("hypothesis violated; see weaker chained identity: {0}")]
    HypothesisViolated(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::Parse(_) => "parse",
            Error::InvalidMeasure(_) => "invalid_measure",
            Error::InvalidWindow(_) => "invalid_window",
            Error::OutsideWindow(_) => "outside_window",
            Error::PieceOutsideCube { .. } => "piece_outside_cube",
            Error::OverlappingPieces(..) => "overlapping_pieces",
            Error::NonGradedOrder(_) => "non_graded_order",
            Error::TooManyVariables(_) => "too_many_variables",
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::InvalidAssignment(_) => "invalid_assignment",
            Error::HypothesisViolated(_) => "hypothesis_violated",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
