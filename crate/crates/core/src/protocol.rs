//! The transmission protocol.
//!
//! Qubit order throughout is `C, A, B`: the unknown input `C`, Alice's half
//! `A` of the channel and Bob's half `B`. Alice projects `CA` onto a Bell
//! state `|β_mn⟩`, Bob's qubit collapses, and Bob inverts the collapse map
//! knowing `(m, n)` and the channel's correlation matrix.
//!
//! For outcome `(m, n)` define signs `ε_j = (−1)^{φ_j} τ_j` with
//! `φ = (m, m + n, n)` and `τ = (+1, −1, +1)` (the `⟨β00|σ_j ⊗ σ_j|β00⟩`
//! eigenvalues). Then Bob's Bloch vector is
//!
//! ```text
//! s_k = (r_0k + Σ_j ε_j r_jk c_j) / (1 + Σ_j ε_j r_j0 c_j)
//! ```
//!
//! and the outcome probability is a quarter of the denominator. The 8×8
//! projection in [`collapse`] is the reference; [`s_vector_analytic`] must
//! agree with it.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
// Float supplies libm math when std is absent from the build graph.
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::linalg::{self, kron, partial_trace, pauli, ComplexMatrix, Matrix3, Svd};
use crate::states::{
    correlation_from_channel, pseudo_mixture, to_bloch, CorrelationMatrix, DensityState, PauliVector,
    PseudoMixture,
};
use crate::{tol, Error, Result};

/// Alice's two classical bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BellOutcome {
    m: u8,
    n: u8,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [
        BellOutcome { m: 0, n: 0 },
        BellOutcome { m: 0, n: 1 },
        BellOutcome { m: 1, n: 0 },
        BellOutcome { m: 1, n: 1 },
    ];

    pub fn new(m: u8, n: u8) -> Result<Self> {
        if m > 1 || n > 1 {
            return Err(Error::InvalidParameter { name: "Bell outcome bit", value: m.max(n) as f64 });
        }
        Ok(Self { m, n })
    }

    pub fn m(&self) -> u8 {
        self.m
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    /// `2m + n`.
    pub fn index(&self) -> usize {
        (2 * self.m + self.n) as usize
    }

    /// `ε_j` for `j = 1, 2, 3`.
    pub fn signs(&self) -> [f64; 3] {
        let parity = |k: u8| if k % 2 == 0 { 1.0 } else { -1.0 };
        [parity(self.m), -parity(self.m + self.n), parity(self.n)]
    }

    /// `(|0, n⟩ + (−1)^m |1, 1−n⟩)/√2` in the computational basis.
    pub fn vector(&self) -> [Complex64; 4] {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let mut v = [Complex64::zero(); 4];
        v[self.n as usize] = Complex64::new(h, 0.0);
        v[2 + (1 - self.n) as usize] = Complex64::new(if self.m == 0 { h } else { -h }, 0.0);
        v
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.m, self.n)
    }
}

impl FromStr for BellOutcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s.as_bytes();
        let bit = |b: u8| match b {
            b'0' => Ok(0),
            b'1' => Ok(1),
            _ => Err(Error::InvalidParameter { name: "Bell outcome bit", value: f64::NAN }),
        };
        match bits {
            [m, n] => Self::new(bit(*m)?, bit(*n)?),
            _ => Err(Error::InvalidParameter { name: "Bell outcome length", value: bits.len() as f64 }),
        }
    }
}

pub fn bell_state(outcome: BellOutcome) -> DensityState {
    let v = outcome.vector();
    DensityState::from_trusted(ComplexMatrix::outer(&v).expect("length-4 vector"))
}

/// Bob's post-measurement state for one outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollapseResult {
    pub outcome: BellOutcome,
    pub probability: f64,
    pub s: [f64; 3],
    pub rho_b: DensityState,
}

/// Projects `ρ_C ⊗ ρ_AB` onto `|β_mn⟩⟨β_mn| ⊗ I_B`, traces out `CA` and
/// renormalizes.
pub fn collapse(rho_c: &DensityState, rho_ab: &DensityState, outcome: BellOutcome) -> Result<CollapseResult> {
    rho_c.require_qubits(1)?;
    rho_ab.require_qubits(2)?;
    let full = kron(rho_c.matrix(), rho_ab.matrix())?;
    let projector = kron(&ComplexMatrix::outer(&outcome.vector())?, &ComplexMatrix::identity(2)?)?;
    let projected = &projector * &full;
    let probability = projected.trace().re;
    if !(probability > tol::RANK) {
        return Err(Error::UndefinedCollapse { probability });
    }
    let b = partial_trace(&projected, 2, &[2, 2, 2])?.scale(1.0 / probability);
    let b = (&b + &b.adjoint()).scale(0.5);
    let s = [1, 2, 3].map(|k| b.trace_product(&pauli(k)).re);
    Ok(CollapseResult { outcome, probability, s, rho_b: DensityState::from_trusted(b) })
}

/// `1 + Σ_j ε_j r_j0 c_j`, four times the outcome probability.
pub fn denominator(r: &CorrelationMatrix, c: &PauliVector, outcome: BellOutcome) -> f64 {
    let eps = outcome.signs();
    let a = r.local_a();
    let c = c.bloch();
    1.0 + (0..3).map(|j| eps[j] * a[j] * c[j]).sum::<f64>()
}

/// Closed-form Bloch vector of Bob's collapsed state.
pub fn s_vector_analytic(r: &CorrelationMatrix, c: &PauliVector, outcome: BellOutcome) -> Result<[f64; 3]> {
    let den = denominator(r, c, outcome);
    if den.abs() <= tol::RANK {
        return Err(Error::UndefinedCollapse { probability: den / 4.0 });
    }
    let eps = outcome.signs();
    let cb = c.bloch();
    Ok(core::array::from_fn(|k| {
        let num = r.get(0, k + 1) + (0..3).map(|j| eps[j] * r.get(j + 1, k + 1) * cb[j]).sum::<f64>();
        num / den
    }))
}

/// Matrix of the linear system `T·c = s − r_0·` that Bob solves.
///
/// Row `k`, column `j` holds `ε_j (r_jk − r_j0 s_k)`, so the unknown Bloch
/// vector multiplies from the right.
pub fn coefficient_matrix(r: &CorrelationMatrix, s: &[f64; 3], outcome: BellOutcome) -> Matrix3 {
    let eps = outcome.signs();
    core::array::from_fn(|k| core::array::from_fn(|j| eps[j] * (r.get(j + 1, k + 1) - r.get(j + 1, 0) * s[k])))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reconstruction {
    pub bloch: [f64; 3],
    /// `‖T⁻¹‖₂ = 1/σ_min(T)`: worst-case amplification of an error in `s`.
    pub cond: f64,
    /// `σ_max(T) / σ_min(T)`.
    pub relative_cond: f64,
    pub det_t: f64,
}

impl Reconstruction {
    pub fn pauli(&self) -> Result<PauliVector> {
        PauliVector::from_bloch(self.bloch)
    }
}

/// Why a reconstruction is not unique, plus the partial answers available.
#[derive(Debug, Clone, PartialEq)]
pub struct RankDeficiency {
    pub rank: RankReport,
    pub det_t: f64,
    /// Minimum-norm least-squares solution; present when the channel has
    /// rank 3.
    pub least_squares: Option<[f64; 3]>,
    /// Unit-norm members of the one-parameter solution family (pure inputs);
    /// empty unless the channel has rank 3.
    pub pure_candidates: Vec<[f64; 3]>,
}

/// Solves for the input Bloch vector given Bob's `s` and the outcome.
pub fn reconstruct(r: &CorrelationMatrix, s: &[f64; 3], outcome: BellOutcome) -> Result<Reconstruction> {
    let t = coefficient_matrix(r, s, outcome);
    let rhs: [f64; 3] = core::array::from_fn(|k| s[k] - r.get(0, k + 1));
    let det_t = linalg::det(&t);
    // Entries of R are bounded by r_00 = 1, so T is judged on an absolute
    // scale as well as relative to its own largest singular value.
    match linalg::solve3(&t, &rhs) {
        Ok(sol) if sol.svd.values[2] <= tol::RANK => Err(rank_deficiency(r, &t, &rhs, det_t)),
        Ok(sol) => Ok(Reconstruction {
            bloch: sol.x,
            cond: 1.0 / sol.svd.values[2],
            relative_cond: sol.cond,
            det_t,
        }),
        Err(Error::SingularSystem { .. }) => Err(rank_deficiency(r, &t, &rhs, det_t)),
        Err(e) => Err(e),
    }
}

fn rank_deficiency(r: &CorrelationMatrix, t: &Matrix3, rhs: &[f64; 3], det_t: f64) -> Error {
    let rank = rank_classify(r);
    let (least_squares, pure_candidates) = if rank.rank == 3 {
        let dec = linalg::svd(t).expect("finite coefficient matrix");
        let ls = min_norm_solution(&dec, rhs);
        (Some(ls), pure_candidates(&dec, &ls))
    } else {
        (None, Vec::new())
    };
    Error::RankDeficient(Box::new(RankDeficiency { rank, det_t, least_squares, pure_candidates }))
}

fn min_norm_solution(dec: &Svd<3>, rhs: &[f64; 3]) -> [f64; 3] {
    let cut = tol::RANK * dec.values[0];
    let mut x = [0.0; 3];
    for k in 0..3 {
        if dec.values[k] <= cut {
            continue;
        }
        let coef = (0..3).map(|i| dec.u[i][k] * rhs[i]).sum::<f64>() / dec.values[k];
        for (i, xi) in x.iter_mut().enumerate() {
            *xi += coef * dec.w[i][k];
        }
    }
    x
}

/// Points where the line `ls + t·null` meets the unit sphere, or the
/// nearest sphere point when the line misses it.
fn pure_candidates(dec: &Svd<3>, ls: &[f64; 3]) -> Vec<[f64; 3]> {
    let cut = tol::RANK * dec.values[0];
    let null: Vec<usize> = (0..3).filter(|&k| dec.values[k] <= cut).collect();
    if null.len() != 1 {
        return Vec::new();
    }
    let dir: [f64; 3] = core::array::from_fn(|i| dec.w[i][null[0]]);
    let norm2 = ls.iter().map(|x| x * x).sum::<f64>();
    if norm2 > 1.0 {
        let n = norm2.sqrt();
        return alloc::vec![ls.map(|x| x / n)];
    }
    let t = (1.0 - norm2).sqrt();
    let at = |t: f64| core::array::from_fn(|i| ls[i] + t * dir[i]);
    if t <= tol::RANK {
        alloc::vec![at(0.0)]
    } else {
        alloc::vec![at(t), at(-t)]
    }
}

/// Rank of the correlation matrix and the dimension of the region Bob's
/// collapsed states can occupy.
#[derive(Debug, Clone, PartialEq)]
pub struct RankReport {
    pub rank: usize,
    /// `rank − 1`: a point, line, plane or solid.
    pub affine_dim: usize,
    pub singular_values: [f64; 4],
    pub mixture: PseudoMixture,
}

pub fn rank_classify(r: &CorrelationMatrix) -> RankReport {
    let mixture = pseudo_mixture(r);
    let rank = mixture.terms.len();
    RankReport { rank, affine_dim: rank.saturating_sub(1), singular_values: mixture.singular_values, mixture }
}

/// Singular values (descending) of a point cloud after subtracting its mean.
pub fn centered_spectrum(points: &[[f64; 3]]) -> [f64; 3] {
    if points.is_empty() {
        return [0.0; 3];
    }
    let n = points.len() as f64;
    let mean: [f64; 3] = core::array::from_fn(|k| points.iter().map(|p| p[k]).sum::<f64>() / n);
    let centered: Vec<[f64; 3]> = points.iter().map(|p| core::array::from_fn(|k| p[k] - mean[k])).collect();
    linalg::singular_values_of_rows(&centered)
}

#[derive(Debug, Clone, PartialEq)]
pub enum OutcomeStatus {
    Reconstructed(Reconstruction),
    RankDeficient(Box<RankDeficiency>),
    /// The outcome cannot occur; Bob's state is undefined.
    Skipped { probability: f64 },
    Failed(Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeRecord {
    pub outcome: BellOutcome,
    pub probability: f64,
    pub collapse: Option<CollapseResult>,
    pub det_t: Option<f64>,
    /// `(1 + Σ ε_j r_j0 c_j) · det(T)`; equals `−det(R)`.
    pub det_identity: Option<f64>,
    pub status: OutcomeStatus,
}

/// All four outcomes of one run of the protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionRecord {
    pub input: PauliVector,
    pub channel: CorrelationMatrix,
    pub rank: RankReport,
    /// Determinant of the full 4×4 correlation matrix.
    pub det_r: f64,
    /// Determinant of the 3×3 block `r_jk`, `j, k ≥ 1`.
    pub det_r_block: f64,
    pub outcomes: Vec<OutcomeRecord>,
}

impl TransmissionRecord {
    pub fn reconstructions(&self) -> impl Iterator<Item = (BellOutcome, &Reconstruction)> {
        self.outcomes.iter().filter_map(|o| match &o.status {
            OutcomeStatus::Reconstructed(r) => Some((o.outcome, r)),
            _ => None,
        })
    }

    /// Largest Euclidean distance between a reconstruction and the input.
    pub fn max_error(&self) -> Option<f64> {
        let c = self.input.bloch();
        self.reconstructions()
            .map(|(_, r)| (0..3).map(|k| (r.bloch[k] - c[k]).powi(2)).sum::<f64>().sqrt())
            .reduce(f64::max)
    }

    pub fn probability_sum(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    /// Largest `|D·det(T) + det(R)|` over outcomes with a defined collapse.
    pub fn det_identity_residual(&self) -> f64 {
        self.outcomes
            .iter()
            .filter_map(|o| o.det_identity)
            .map(|v| (v + self.det_r).abs())
            .fold(0.0, f64::max)
    }

    /// Same residual against the 3×3 block determinant instead of `det(R)`.
    pub fn det_block_residual(&self) -> f64 {
        self.outcomes
            .iter()
            .filter_map(|o| o.det_identity)
            .map(|v| (v + self.det_r_block).abs())
            .fold(0.0, f64::max)
    }

    pub fn all_reconstructed(&self) -> bool {
        self.outcomes.iter().all(|o| matches!(o.status, OutcomeStatus::Reconstructed(_)))
    }
}

/// Runs collapse and reconstruction for all four outcomes. Per-outcome
/// failures are recorded in the outcome's status; only invalid inputs abort.
pub fn transmit(rho_c: &DensityState, rho_ab: &DensityState) -> Result<TransmissionRecord> {
    let input = to_bloch(rho_c)?;
    let channel = correlation_from_channel(rho_ab)?;
    let outcomes = BellOutcome::ALL
        .iter()
        .map(|&outcome| match collapse(rho_c, rho_ab, outcome) {
            Err(Error::UndefinedCollapse { probability }) => OutcomeRecord {
                outcome,
                probability: probability.max(0.0),
                collapse: None,
                det_t: None,
                det_identity: None,
                status: OutcomeStatus::Skipped { probability },
            },
            Err(e) => OutcomeRecord {
                outcome,
                probability: 0.0,
                collapse: None,
                det_t: None,
                det_identity: None,
                status: OutcomeStatus::Failed(e),
            },
            Ok(col) => {
                let det_t = linalg::det(&coefficient_matrix(&channel, &col.s, outcome));
                let status = match reconstruct(&channel, &col.s, outcome) {
                    Ok(rec) => OutcomeStatus::Reconstructed(rec),
                    Err(Error::RankDeficient(d)) => OutcomeStatus::RankDeficient(d),
                    Err(e) => OutcomeStatus::Failed(e),
                };
                OutcomeRecord {
                    outcome,
                    probability: col.probability,
                    collapse: Some(col),
                    det_t: Some(det_t),
                    det_identity: Some(denominator(&channel, &input, outcome) * det_t),
                    status,
                }
            }
        })
        .collect();
    Ok(TransmissionRecord {
        input,
        rank: rank_classify(&channel),
        det_r: channel.det(),
        det_r_block: linalg::det(&channel.block()),
        channel,
        outcomes,
    })
}
