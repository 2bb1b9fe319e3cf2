use num_bigint::BigInt;
use thiserror::Error;

use crate::ratlinalg::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix dimensions {rows}x{cols} do not match {len} entries")]
    BadDimensions { rows: usize, cols: usize, len: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("rank mismatch: expected {expected}, got {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("linear form is identically zero")]
    ZeroForm,

    #[error("point lies on a wall translate: <t, {normal:?}> = {value} is an integer")]
    OnWall { normal: Vec<BigInt>, value: Rational },

    #[error("point is not adjacent to the origin: <t, {normal:?}> = {value} leaves (-1, 1)")]
    NotAdjacentToOrigin { normal: Vec<BigInt>, value: Rational },

    #[error("series window too narrow: variable {variable} needs exponents in [{needed_lo}, {needed_hi}]")]
    WindowOverflow {
        variable: usize,
        needed_lo: i64,
        needed_hi: i64,
    },

    #[error("denominator forms do not span the ambient space")]
    NotGenerating,

    #[error("diagonal basis verification failed: Res^{tau:?}(phi_{sigma:?}) = {value}")]
    DualityFailure {
        tau: Vec<usize>,
        sigma: Vec<usize>,
        value: Rational,
    },

    #[error("lattice sum does not converge absolutely: {0}")]
    NonConvergent(String),

    #[error("point is not regular: {0}")]
    NonRegularPoint(String),

    #[error("result changed under window doubling")]
    StabilityFailure,
}

impl Error {
    /// True for violations of a mathematical precondition (as opposed to
    /// malformed input or an internal consistency failure).
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::OnWall { .. }
                | Error::NotAdjacentToOrigin { .. }
                | Error::NotGenerating
                | Error::NonConvergent(_)
                | Error::NonRegularPoint(_)
                | Error::Singular
                | Error::ZeroForm
        )
    }
}
