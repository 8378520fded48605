//! Small dense linear algebra: complex matrices of dimension 2, 4 or 8 and
//! real `N×N` arrays for `N ≤ 4`.

mod complex;
mod real;

pub use complex::{hermitian_eig, kron, partial_trace, pauli, ComplexMatrix, HermitianEigen};
pub use real::{
    det, mat_mul, mat_vec, singular_values_of_rows, solve3, svd, svd4, transpose, Matrix3,
    RealMatrix4, Solution, Svd,
};
