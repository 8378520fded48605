//! Finite-shot estimation of Bob's collapsed qubit and propagation of the
//! sampling error back to the input Bloch vector.
//!
//! Each Pauli axis gets its own ChaCha20 stream (`stream = axis index`)
//! keyed by the caller's seed, and counts are drawn from an exact binomial.
//! The same seed therefore gives the same counts on every platform.

use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Binomial, Distribution};

use crate::linalg::{self, pauli, Matrix3};
use crate::protocol::{coefficient_matrix, collapse, reconstruct, BellOutcome};
use crate::states::{correlation_from_channel, CorrelationMatrix, DensityState};
use crate::{Error, Result};

/// Identifies the sampling scheme; recorded in output metadata.
pub const GENERATOR: &str = "ChaCha20 (rand_chacha 0.9), stream = axis index, binomial counts (rand_distr 0.5.1)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Pauli index, 1 to 3.
    pub fn pauli_index(self) -> usize {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
            Axis::Z => 3,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotRecord {
    pub axis: Axis,
    pub shots: u64,
    /// Number of `+1` outcomes.
    pub plus_counts: u64,
    pub seed: u64,
}

/// Measures `σ_axis` on `shots` copies of a qubit.
pub fn sample_pauli(rho: &DensityState, axis: Axis, shots: u64, seed: u64) -> Result<ShotRecord> {
    rho.require_qubits(1)?;
    if shots == 0 {
        return Err(Error::InvalidParameter { name: "shots", value: 0.0 });
    }
    let expectation = rho.matrix().trace_product(&pauli(axis.pauli_index())).re;
    let p = ((1.0 + expectation) / 2.0).clamp(0.0, 1.0);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(axis.pauli_index() as u64);
    let dist = Binomial::new(shots, p).map_err(|_| Error::InvalidParameter { name: "probability", value: p })?;
    Ok(ShotRecord { axis, shots, plus_counts: dist.sample(&mut rng), seed })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochEstimate {
    /// Per-axis frequency estimates `2·plus/shots − 1`, each in `[−1, 1]`.
    pub s_hat: [f64; 3],
    /// `2·√(p̂(1 − p̂)/n)` per axis.
    pub s_stderr: [f64; 3],
    /// The estimate lies outside the Bloch ball. It is reported as is.
    pub unphysical: bool,
}

/// Frequency estimate from one record per axis, in any order.
pub fn estimate_bloch(records: &[ShotRecord; 3]) -> Result<BlochEstimate> {
    let mut s_hat = [f64::NAN; 3];
    let mut stderr = [f64::NAN; 3];
    for rec in records {
        let k = rec.axis.pauli_index() - 1;
        if !s_hat[k].is_nan() {
            return Err(Error::InvalidParameter { name: "duplicate axis", value: k as f64 + 1.0 });
        }
        if rec.shots == 0 || rec.plus_counts > rec.shots {
            return Err(Error::InvalidParameter { name: "counts", value: rec.plus_counts as f64 });
        }
        let n = rec.shots as f64;
        let p = rec.plus_counts as f64 / n;
        s_hat[k] = (2.0 * p - 1.0).clamp(-1.0, 1.0);
        stderr[k] = 2.0 * (p * (1.0 - p) / n).sqrt();
    }
    let unphysical = s_hat.iter().map(|x| x * x).sum::<f64>() > 1.0 + crate::tol::HERM;
    Ok(BlochEstimate { s_hat, s_stderr: stderr, unphysical })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagated {
    pub c_hat: [f64; 3],
    pub c_cov: Matrix3,
    /// `1/σ_min` of the coefficient matrix at `ŝ`; infinite when singular.
    pub cond: f64,
}

/// Linearized error propagation from `ŝ` to the input estimate.
///
/// Differentiating `s·D = r_0· + Σ_j ε_j r_j· c_j` gives `∂s/∂c = T/D`, so
/// `Cov(ĉ) = D² T⁻¹ diag(σ²) T⁻ᵀ`. When the noisy system is singular the
/// minimum-norm solution is returned with infinite variances.
pub fn propagate(r: &CorrelationMatrix, outcome: BellOutcome, s_hat: &[f64; 3], s_stderr: &[f64; 3]) -> Propagated {
    let t = coefficient_matrix(r, s_hat, outcome);
    let rhs: [f64; 3] = core::array::from_fn(|k| s_hat[k] - r.get(0, k + 1));
    let Ok(dec) = linalg::svd(&t) else {
        return Propagated { c_hat: [f64::NAN; 3], c_cov: [[f64::INFINITY; 3]; 3], cond: f64::INFINITY };
    };
    let cut = crate::tol::RANK * dec.values[0].max(1.0);
    let singular = dec.values[2] <= cut;
    // T⁻¹ = W Σ⁻¹ Uᵀ, restricted to the non-null part.
    let inv: Matrix3 = core::array::from_fn(|i| {
        core::array::from_fn(|k| {
            (0..3).filter(|&m| dec.values[m] > cut).map(|m| dec.w[i][m] * dec.u[k][m] / dec.values[m]).sum()
        })
    });
    let c_hat = linalg::mat_vec(&inv, &rhs);
    if singular {
        return Propagated { c_hat, c_cov: [[f64::INFINITY; 3]; 3], cond: f64::INFINITY };
    }
    let eps = outcome.signs();
    let a = r.local_a();
    let d = 1.0 + (0..3).map(|j| eps[j] * a[j] * c_hat[j]).sum::<f64>();
    let var = s_stderr.map(|x| x * x);
    let c_cov = core::array::from_fn(|i| {
        core::array::from_fn(|j| d * d * (0..3).map(|k| inv[i][k] * var[k] * inv[j][k]).sum::<f64>())
    });
    Propagated { c_hat, c_cov, cond: 1.0 / dec.values[2] }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TomographyEstimate {
    pub outcome: BellOutcome,
    pub probability: f64,
    pub seed: u64,
    pub records: [ShotRecord; 3],
    /// Noise-free Bloch vector of Bob's qubit.
    pub s_exact: [f64; 3],
    pub s_hat: [f64; 3],
    pub s_stderr: [f64; 3],
    pub unphysical: bool,
    pub c_hat: [f64; 3],
    pub c_cov: Matrix3,
    pub cond: f64,
}

impl TomographyEstimate {
    /// `(c − ĉ)ᵀ Cov⁻¹ (c − ĉ)`, or `None` when the covariance is singular.
    pub fn mahalanobis2(&self, c: &[f64; 3]) -> Option<f64> {
        let diff: [f64; 3] = core::array::from_fn(|k| c[k] - self.c_hat[k]);
        let y = linalg::solve3(&self.c_cov, &diff).ok()?.x;
        Some((0..3).map(|k| diff[k] * y[k]).sum())
    }

    /// Square roots of the covariance diagonal.
    pub fn c_stderr(&self) -> [f64; 3] {
        core::array::from_fn(|k| self.c_cov[k][k].sqrt())
    }
}

/// Splits `total` shots over the three axes, remainder to the first axes.
pub fn split_shots(total: u64) -> [u64; 3] {
    let base = total / 3;
    let extra = total % 3;
    core::array::from_fn(|k| base + u64::from((k as u64) < extra))
}

/// Collapses the input with the given outcome, samples Bob's qubit along
/// x, y and z with `shots` total measurements, and reconstructs the input.
///
/// The channel must have a full-rank correlation matrix; otherwise the
/// rank-deficiency error from the noise-free reconstruction is returned.
pub fn remote_tomography(
    rho_c: &DensityState,
    rho_ab: &DensityState,
    outcome: BellOutcome,
    shots: u64,
    seed: u64,
) -> Result<TomographyEstimate> {
    if shots < 3 {
        return Err(Error::InvalidParameter { name: "shots", value: shots as f64 });
    }
    let r = correlation_from_channel(rho_ab)?;
    let col = collapse(rho_c, rho_ab, outcome)?;
    reconstruct(&r, &col.s, outcome)?;

    let per_axis = split_shots(shots);
    let mut records = [ShotRecord { axis: Axis::X, shots: 0, plus_counts: 0, seed }; 3];
    for (k, axis) in Axis::ALL.into_iter().enumerate() {
        records[k] = sample_pauli(&col.rho_b, axis, per_axis[k], seed)?;
    }
    let est = estimate_bloch(&records)?;
    let prop = propagate(&r, outcome, &est.s_hat, &est.s_stderr);
    Ok(TomographyEstimate {
        outcome,
        probability: col.probability,
        seed,
        records,
        s_exact: col.s,
        s_hat: est.s_hat,
        s_stderr: est.s_stderr,
        unphysical: est.unphysical,
        c_hat: prop.c_hat,
        c_cov: prop.c_cov,
        cond: prop.cond,
    })
}
