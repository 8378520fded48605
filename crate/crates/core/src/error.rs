use alloc::boxed::Box;
use core::fmt;

use crate::protocol::RankDeficiency;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Matrix dimension outside {2, 4, 8} or a product exceeding 8.
    Dimension { dim: usize },
    /// Operand shapes disagree.
    DimensionMismatch { expected: usize, found: usize },
    NonFinite,
    NotHermitian { deviation: f64 },
    /// Trace differs from one by more than the tolerance.
    Trace { trace: f64 },
    /// Bloch vector outside the unit ball.
    UnphysicalState { bloch_norm: f64 },
    /// Density matrix with an eigenvalue below `-tol::PSD`.
    UnphysicalChannel { min_eigenvalue: f64 },
    /// Correlation entry out of range or `r00 != 1`.
    InvalidCorrelation { row: usize, col: usize, value: f64 },
    InvalidParameter { name: &'static str, value: f64 },
    /// `|det(a)| < tol::RANK * ||a||^3`.
    SingularSystem { det: f64, scale: f64 },
    /// Outcome probability too small for Bob's state to be defined.
    UndefinedCollapse { probability: f64 },
    /// Coefficient matrix singular; carries the rank diagnosis and whatever
    /// partial solutions exist.
    RankDeficient(Box<RankDeficiency>),
    /// SVD term whose identity component vanishes and so cannot be scaled
    /// to a Pauli-form factor.
    Normalization { term: usize, leading: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Dimension { dim } => write!(f, "unsupported matrix dimension {dim}"),
            Self::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Self::NonFinite => write!(f, "non-finite matrix entry"),
            Self::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (max deviation {deviation:e})")
            }
            Self::Trace { trace } => write!(f, "trace {trace} differs from 1"),
            Self::UnphysicalState { bloch_norm } => {
                write!(f, "Bloch vector norm {bloch_norm} exceeds 1")
            }
            Self::UnphysicalChannel { min_eigenvalue } => {
                write!(f, "state is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")
            }
            Self::InvalidCorrelation { row, col, value } => {
                write!(f, "invalid correlation entry r[{row}][{col}] = {value}")
            }
            Self::InvalidParameter { name, value } => write!(f, "invalid {name}: {value}"),
            Self::SingularSystem { det, scale } => {
                write!(f, "singular linear system (det {det:e}, scale {scale:e})")
            }
            Self::UndefinedCollapse { probability } => {
                write!(f, "outcome probability {probability:e} too small for a defined collapse")
            }
            Self::RankDeficient(d) => write!(
                f,
                "coefficient matrix is rank deficient (correlation rank {})",
                d.rank.rank
            ),
            Self::Normalization { term, leading } => write!(
                f,
                "pseudo-mixture term {term} has vanishing identity component ({leading:e})"
            ),
        }
    }
}

impl core::error::Error for Error {}
