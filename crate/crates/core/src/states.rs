//! Qubit and two-qubit state representations.
//!
//! A single qubit is `ρ = ½ Σ c_i σ_i` with `c_0 = 1`; a two-qubit channel is
//! `ρ_AB = ¼ Σ r_ij σ_i ⊗ σ_j` with `r_00 = 1`. The correlation matrix `r`
//! and the dense density matrix carry the same information and convert into
//! each other losslessly.

use alloc::vec::Vec;

use num_complex::Complex64;
// Float supplies libm math when std is absent from the build graph.
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::linalg::{self, hermitian_eig, kron, partial_trace, pauli, ComplexMatrix, Matrix3, RealMatrix4};
use crate::{tol, Error, Result};

/// Single-qubit Pauli coefficients `(1, c1, c2, c3)`, inside the Bloch ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliVector([f64; 4]);

impl PauliVector {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        if ![c1, c2, c3].iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = (c1 * c1 + c2 * c2 + c3 * c3).sqrt();
        if norm > 1.0 + tol::HERM {
            return Err(Error::UnphysicalState { bloch_norm: norm });
        }
        Ok(Self([1.0, c1, c2, c3]))
    }

    pub fn from_bloch(c: [f64; 3]) -> Result<Self> {
        Self::new(c[0], c[1], c[2])
    }

    pub fn maximally_mixed() -> Self {
        Self([1.0, 0.0, 0.0, 0.0])
    }

    /// `(c0, c1, c2, c3)` with `c0 = 1`.
    pub fn coeffs(&self) -> [f64; 4] {
        self.0
    }

    pub fn bloch(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    pub fn norm(&self) -> f64 {
        let [_, a, b, c] = self.0;
        (a * a + b * b + c * c).sqrt()
    }

    pub fn to_state(&self) -> DensityState {
        DensityState { rho: bloch_matrix(self.bloch()) }
    }
}

fn bloch_matrix(c: [f64; 3]) -> ComplexMatrix {
    let mut rho = ComplexMatrix::zeros_unchecked(2);
    rho[(0, 0)] = Complex64::new(0.5 * (1.0 + c[2]), 0.0);
    rho[(1, 1)] = Complex64::new(0.5 * (1.0 - c[2]), 0.0);
    rho[(0, 1)] = Complex64::new(0.5 * c[0], -0.5 * c[1]);
    rho[(1, 0)] = Complex64::new(0.5 * c[0], 0.5 * c[1]);
    rho
}

/// Validated density matrix of one or two qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityState {
    rho: ComplexMatrix,
}

impl DensityState {
    /// Checks Hermiticity, unit trace and positivity; the stored matrix is the
    /// Hermitian part of `rho`.
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        if !matches!(rho.dim(), 2 | 4) {
            return Err(Error::Dimension { dim: rho.dim() });
        }
        rho.check_finite()?;
        let deviation = rho.hermiticity_defect();
        if deviation > tol::HERM {
            return Err(Error::NotHermitian { deviation });
        }
        let rho = (&rho + &rho.adjoint()).scale(0.5);
        let trace = rho.trace().re;
        if (trace - 1.0).abs() > tol::HERM {
            return Err(Error::Trace { trace });
        }
        let min_eigenvalue = hermitian_eig(&rho)?.values[0];
        if min_eigenvalue < -tol::PSD {
            return Err(Error::UnphysicalChannel { min_eigenvalue });
        }
        Ok(Self { rho })
    }

    /// `|ψ⟩⟨ψ|` for the normalized `psi` (length 2 or 4).
    pub fn from_pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidParameter { name: "state vector norm", value: norm });
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v)?)
    }

    pub(crate) fn from_trusted(rho: ComplexMatrix) -> Self {
        Self { rho }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn qubits(&self) -> usize {
        if self.rho.dim() == 2 {
            1
        } else {
            2
        }
    }

    pub fn purity(&self) -> f64 {
        self.rho.trace_product(&self.rho).re
    }

    /// Ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eig(&self.rho).map(|e| e.values).unwrap_or_default()
    }

    /// Reduced state of qubit `keep` (0 = A, 1 = B) of a two-qubit state.
    pub fn marginal(&self, keep: usize) -> Result<DensityState> {
        self.require_qubits(2)?;
        Ok(Self { rho: partial_trace(&self.rho, keep, &[2, 2])? })
    }

    pub(crate) fn require_qubits(&self, n: usize) -> Result<()> {
        if self.qubits() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: 1 << n, found: self.rho.dim() })
        }
    }
}

/// `½ Σ c_i σ_i` for a Bloch vector inside the unit ball.
pub fn qubit_from_bloch(c1: f64, c2: f64, c3: f64) -> Result<DensityState> {
    Ok(PauliVector::new(c1, c2, c3)?.to_state())
}

/// `c_i = Tr(ρ σ_i)` of a single-qubit state.
pub fn to_bloch(rho: &DensityState) -> Result<PauliVector> {
    rho.require_qubits(1)?;
    let m = rho.matrix();
    let c = [1, 2, 3].map(|i| m.trace_product(&pauli(i)).re);
    // A valid state can sit a hair outside the ball after rounding.
    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    let c = if norm > 1.0 { c.map(|x| x / norm) } else { c };
    PauliVector::from_bloch(c)
}

/// Two-qubit correlation matrix `r_ij = Tr(ρ σ_i ⊗ σ_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMatrix(RealMatrix4);

impl CorrelationMatrix {
    /// Validates `r00 = 1`, `|r_ij| ≤ 1` and positivity of the state it
    /// describes.
    pub fn new(r: RealMatrix4) -> Result<Self> {
        let r = check_entries(r)?;
        let rho = density_from_entries(&r);
        let min_eigenvalue = hermitian_eig(&rho)?.values[0];
        if min_eigenvalue < -tol::PSD {
            return Err(Error::UnphysicalChannel { min_eigenvalue });
        }
        Ok(Self(r))
    }

    /// `diag(1, d1, d2, d3)`.
    pub fn diag(d1: f64, d2: f64, d3: f64) -> Result<Self> {
        let mut r = [[0.0; 4]; 4];
        r[0][0] = 1.0;
        r[1][1] = d1;
        r[2][2] = d2;
        r[3][3] = d3;
        Self::new(r)
    }

    pub fn entries(&self) -> &RealMatrix4 {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    /// `(r10, r20, r30)`: Bloch vector of A's marginal.
    pub fn local_a(&self) -> [f64; 3] {
        [self.0[1][0], self.0[2][0], self.0[3][0]]
    }

    /// `(r01, r02, r03)`: Bloch vector of B's marginal.
    pub fn local_b(&self) -> [f64; 3] {
        [self.0[0][1], self.0[0][2], self.0[0][3]]
    }

    /// `r_jk` for `j, k ≥ 1`.
    pub fn block(&self) -> Matrix3 {
        core::array::from_fn(|j| core::array::from_fn(|k| self.0[j + 1][k + 1]))
    }

    pub fn det(&self) -> f64 {
        linalg::det(&self.0)
    }

    /// Correlations with A and B swapped.
    pub fn transposed(&self) -> Self {
        Self(linalg::transpose(&self.0))
    }

    /// A's marginal is maximally mixed, i.e. `r_j0 = 0` for `j = 1, 2, 3`.
    /// Such a channel can be written `½ I ⊗ ρ_B + ¼ Σ Λ_ij σ_i ⊗ σ_j` and all
    /// four Bell outcomes are equally likely for every input.
    pub fn is_security_form(&self) -> bool {
        self.local_a().iter().all(|x| x.abs() <= tol::HERM)
    }
}

fn check_entries(mut r: RealMatrix4) -> Result<RealMatrix4> {
    for (i, row) in r.iter().enumerate() {
        for (j, &value) in row.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite);
            }
            if value.abs() > 1.0 + tol::HERM {
                return Err(Error::InvalidCorrelation { row: i, col: j, value });
            }
        }
    }
    if (r[0][0] - 1.0).abs() > tol::HERM {
        return Err(Error::InvalidCorrelation { row: 0, col: 0, value: r[0][0] });
    }
    r[0][0] = 1.0;
    Ok(r)
}

pub(crate) fn pauli_pair(i: usize, j: usize) -> ComplexMatrix {
    kron(&pauli(i), &pauli(j)).expect("2x2 kron 2x2 fits")
}

fn density_from_entries(r: &RealMatrix4) -> ComplexMatrix {
    let mut rho = ComplexMatrix::zeros_unchecked(4);
    for (i, row) in r.iter().enumerate() {
        for (j, &rij) in row.iter().enumerate() {
            if rij != 0.0 {
                rho = &rho + &pauli_pair(i, j).scale(0.25 * rij);
            }
        }
    }
    rho
}

/// `ρ_AB = ¼ Σ r_ij σ_i ⊗ σ_j`.
pub fn channel_from_correlation(r: &CorrelationMatrix) -> Result<DensityState> {
    DensityState::new(density_from_entries(&r.0))
}

/// `r_ij = Tr(ρ σ_i ⊗ σ_j)` of a two-qubit state.
pub fn correlation_from_channel(rho: &DensityState) -> Result<CorrelationMatrix> {
    rho.require_qubits(2)?;
    let mut r = [[0.0; 4]; 4];
    for (i, row) in r.iter_mut().enumerate() {
        for (j, rij) in row.iter_mut().enumerate() {
            *rij = rho.matrix().trace_product(&pauli_pair(i, j)).re;
        }
    }
    // The state is already validated; only pin r00 and clamp rounding overshoot.
    r[0][0] = 1.0;
    r.iter_mut().flatten().for_each(|x| *x = x.clamp(-1.0, 1.0));
    Ok(CorrelationMatrix(r))
}

/// `(|00⟩ + |11⟩)/√2`.
pub(crate) fn phi_plus() -> [Complex64; 4] {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    [Complex64::new(h, 0.0), Complex64::zero(), Complex64::zero(), Complex64::new(h, 0.0)]
}

/// Werner channel `x |β00⟩⟨β00| + (1 − x) I/4`, correlation matrix
/// `diag(1, x, −x, x)`.
pub fn werner(x: f64) -> Result<DensityState> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter { name: "Werner mixing parameter", value: x });
    }
    let bell = ComplexMatrix::outer(&phi_plus())?;
    let noise = ComplexMatrix::identity(4)?.scale(0.25 * (1.0 - x));
    Ok(DensityState::from_trusted(&bell.scale(x) + &noise))
}

/// See [`CorrelationMatrix::is_security_form`].
pub fn is_security_form(rho: &DensityState) -> Result<bool> {
    Ok(correlation_from_channel(rho)?.is_security_form())
}

/// Pauli-form factors `μ = ½ Σ α_j σ_j` (with `α_0 = 1`) of a pseudo-mixture
/// term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliFactors {
    pub alpha_a: [f64; 4],
    pub alpha_b: [f64; 4],
    pub physical_a: bool,
    pub physical_b: bool,
}

/// One rank-one term `¼ d · A ⊗ B` of the SVD expansion, where `A = Σ a_j σ_j`
/// and `B = Σ b_j σ_j` come from the singular vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureTerm {
    pub singular_value: f64,
    /// Left singular vector (column of `U`).
    pub a: [f64; 4],
    /// Right singular vector (column of `W`).
    pub b: [f64; 4],
    /// `p = d · a_0 · b_0`; may be negative.
    pub weight: f64,
    /// `None` when `|a_0|` or `|b_0|` is below `tol::RANK`, where the
    /// division by the identity component is undefined.
    pub factors: Option<PauliFactors>,
}

/// `ρ_AB = ¼ Σ d_i A_i ⊗ B_i = Σ p_i μ_A^i ⊗ μ_B^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoMixture {
    pub singular_values: [f64; 4],
    pub terms: Vec<MixtureTerm>,
}

impl PseudoMixture {
    pub fn weight_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    /// `Σ d_i a_i b_iᵀ` over retained terms.
    pub fn rebuild(&self) -> RealMatrix4 {
        let mut r = [[0.0; 4]; 4];
        for t in &self.terms {
            for (i, row) in r.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    *x += t.singular_value * t.a[i] * t.b[j];
                }
            }
        }
        r
    }

    pub fn rebuild_density(&self) -> ComplexMatrix {
        density_from_entries(&self.rebuild())
    }

    /// `(p_i, factors_i)` for every term, or the first term whose
    /// normalization is undefined.
    pub fn normalized(&self) -> Result<Vec<(f64, PauliFactors)>> {
        self.terms
            .iter()
            .enumerate()
            .map(|(i, t)| match t.factors {
                Some(f) => Ok((t.weight, f)),
                None => Err(Error::Normalization { term: i, leading: t.a[0].abs().min(t.b[0].abs()) }),
            })
            .collect()
    }
}

/// SVD expansion of the channel, truncated at `tol::RANK · d_max`.
///
/// Terms with a vanishing identity component are kept as raw SVD terms
/// (`factors = None`) so the rebuild stays exact.
pub fn pseudo_mixture(r: &CorrelationMatrix) -> PseudoMixture {
    let dec = linalg::svd4(&r.0).expect("validated correlation entries are finite");
    let cut = tol::RANK * dec.values[0];
    let mut terms = Vec::new();
    for i in 0..4 {
        let d = dec.values[i];
        if d <= cut {
            continue;
        }
        let mut a: [f64; 4] = core::array::from_fn(|j| dec.u[j][i]);
        let mut b: [f64; 4] = core::array::from_fn(|j| dec.w[j][i]);
        // Fix the joint sign: leading non-negligible component of `a` positive.
        let lead = a.iter().copied().find(|x| x.abs() > tol::RANK).unwrap_or(1.0);
        if lead < 0.0 {
            a = a.map(|x| -x);
            b = b.map(|x| -x);
        }
        let factors = (a[0].abs() >= tol::RANK && b[0].abs() >= tol::RANK).then(|| {
            let alpha_a = a.map(|x| x / a[0]);
            let alpha_b = b.map(|x| x / b[0]);
            let physical = |al: &[f64; 4]| al[1..].iter().map(|x| x * x).sum::<f64>() <= 1.0 + tol::HERM;
            PauliFactors {
                physical_a: physical(&alpha_a),
                physical_b: physical(&alpha_b),
                alpha_a,
                alpha_b,
            }
        });
        terms.push(MixtureTerm { singular_value: d, a, b, weight: d * a[0] * b[0], factors });
    }
    PseudoMixture { singular_values: dec.values, terms }
}
