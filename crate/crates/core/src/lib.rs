//! Density-matrix kernel for sending the information of an unknown qubit
//! through a correlated two-qubit channel.
//!
//! Alice holds qubit `A` of a shared channel `ρ_AB` and an unknown input
//! qubit `C`. She measures `CA` in the Bell basis and announces the two
//! outcome bits; Bob's qubit collapses to a state whose Bloch vector is a
//! fractional-linear function of the input's Bloch vector. Whenever the
//! channel's 4×4 correlation matrix has full rank that map can be inverted,
//! whether or not the channel is entangled.
//!
//! The crate is `no_std` (it needs `alloc`). Modules, bottom-up:
//!
//! * [`linalg`]: fixed-size complex and real matrices, Jacobi eigen/SVD
//!   solvers, Kronecker products and partial traces.
//! * [`states`]: Pauli-basis qubits, correlation matrices, density states and
//!   the SVD pseudo-mixture.
//! * [`protocol`]: Bell outcomes, collapse, analytic s-vector, reconstruction
//!   and rank geometry.
//! * [`measures`]: entropies, concurrence and projective-measurement discord.
//! * [`tomography`]: seeded finite-shot estimates of Bob's state and error
//!   propagation back to the input.
//! * [`sampling`]: random states and channels (Haar and friends).

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod linalg;
pub mod measures;
pub mod protocol;
pub mod sampling;
pub mod states;
pub mod tomography;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Numerical tolerances shared across modules.
pub mod tol {
    /// Max-entry deviation from Hermiticity, unit trace and Bloch-ball bounds.
    pub const HERM: f64 = 1e-9;
    /// Eigen-decomposition residual.
    pub const EIG: f64 = 1e-10;
    /// SVD residual and orthogonality defect.
    pub const SVD: f64 = 1e-10;
    /// Linear-solve residual.
    pub const SOLVE: f64 = 1e-9;
    /// Relative threshold below which a singular value (or determinant,
    /// or probability) counts as zero.
    pub const RANK: f64 = 1e-8;
    /// Most negative eigenvalue a density matrix may have.
    pub const PSD: f64 = 1e-8;
    /// Discord optimizer tolerance, in bits.
    pub const OPT: f64 = 1e-4;
}
