//! Random states and channels for tests, sweeps and Monte Carlo runs.
//!
//! Everything takes a caller-supplied generator so runs are reproducible
//! from a seed.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::linalg::{kron, ComplexMatrix};
use crate::states::{DensityState, PauliVector};

/// Haar-random unit vector in `C^dim`.
pub fn haar_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-random pure state of one or two qubits.
pub fn haar_pure_state<R: Rng + ?Sized>(rng: &mut R, qubits: usize) -> DensityState {
    let v = haar_vector(rng, 1 << qubits);
    DensityState::from_pure(&v).expect("normalized vector")
}

/// Uniform point on the Bloch sphere (a Haar-random pure qubit).
pub fn random_pure_bloch<R: Rng + ?Sized>(rng: &mut R) -> PauliVector {
    random_bloch_with_norm(rng, 1.0)
}

/// Uniform point in the Bloch ball.
pub fn random_mixed_bloch<R: Rng + ?Sized>(rng: &mut R) -> PauliVector {
    let radius = rng.random::<f64>().cbrt();
    random_bloch_with_norm(rng, radius)
}

/// Uniform direction, fixed length `norm ≤ 1`.
pub fn random_bloch_with_norm<R: Rng + ?Sized>(rng: &mut R, norm: f64) -> PauliVector {
    let dir = unit_vector3(rng);
    PauliVector::from_bloch(dir.map(|x| x * norm)).expect("norm within the ball")
}

fn unit_vector3<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = core::array::from_fn(|_| StandardNormal.sample(rng));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.map(|x| x / n);
        }
    }
}

/// Flat-Dirichlet weights.
fn simplex_weights<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

fn mixture(weights: &[f64], states: &[ComplexMatrix]) -> DensityState {
    let mut acc = ComplexMatrix::zeros(states[0].dim()).expect("valid dim");
    for (w, s) in weights.iter().zip(states) {
        acc = &acc + &s.scale(*w);
    }
    DensityState::new(acc).expect("convex mixture of states is a state")
}

/// Convex mixture of four Haar-random pure two-qubit states; generically full
/// rank.
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R) -> DensityState {
    let states: Vec<ComplexMatrix> = (0..4).map(|_| *haar_pure_state(rng, 2).matrix()).collect();
    let weights = simplex_weights(rng, 4);
    mixture(&weights, &states)
}

/// `ρ_A ⊗ ρ_B` with independent Bloch vectors uniform in the ball.
pub fn random_product_channel<R: Rng + ?Sized>(rng: &mut R) -> DensityState {
    let a = random_mixed_bloch(rng).to_state();
    let b = random_mixed_bloch(rng).to_state();
    DensityState::new(kron(a.matrix(), b.matrix()).expect("2x2 kron")).expect("product of states")
}

/// Mixture of `rank` random pure product states: a classical-classical-like
/// channel whose correlation matrix has exactly that rank (generically).
///
/// # Panics
///
/// If `rank` is not in `1..=4`.
pub fn channel_of_rank<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> DensityState {
    assert!((1..=4).contains(&rank), "correlation rank must be 1..=4");
    let states: Vec<ComplexMatrix> = (0..rank)
        .map(|_| {
            let a = random_pure_bloch(rng).to_state();
            let b = random_pure_bloch(rng).to_state();
            kron(a.matrix(), b.matrix()).expect("2x2 kron")
        })
        .collect();
    let weights = simplex_weights(rng, rank);
    mixture(&weights, &states)
}

/// Haar-random 2×2 unitary.
pub fn random_unitary2<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    // Unit quaternion (a, b, c, d) -> [[a + ib, c + id], [-c + id, a - ib]],
    // times a global phase.
    let q: [f64; 4] = loop {
        let v: [f64; 4] = core::array::from_fn(|_| StandardNormal.sample(rng));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            break v.map(|x| x / n);
        }
    };
    let phase = Complex64::from_polar(1.0, rng.random::<f64>() * core::f64::consts::TAU);
    let rows = [
        [Complex64::new(q[0], q[1]), Complex64::new(q[2], q[3])],
        [Complex64::new(-q[2], q[3]), Complex64::new(q[0], -q[1])],
    ];
    ComplexMatrix::from_fn(2, |i, j| rows[i][j] * phase).expect("finite entries")
}

/// `U_A ⊗ U_B` with independent Haar factors.
pub fn random_local_unitary<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let a = random_unitary2(rng);
    let b = random_unitary2(rng);
    kron(&a, &b).expect("2x2 kron")
}

/// `U ρ U†`.
pub fn conjugate(rho: &DensityState, u: &ComplexMatrix) -> DensityState {
    let m = &(u * rho.matrix()) * &u.adjoint();
    DensityState::new(m).expect("unitary conjugation preserves states")
}
