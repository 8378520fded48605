//! Entropies, concurrence and quantum discord of two-qubit channels. All
//! information quantities are in bits.

use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{hermitian_eig, kron, pauli, ComplexMatrix};
use crate::states::{correlation_from_channel, CorrelationMatrix, DensityState};
use crate::{Error, Result};

/// `−Σ λ log₂ λ`, skipping non-positive eigenvalues.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// von Neumann entropy.
pub fn entropy(rho: &DensityState) -> f64 {
    entropy_of_spectrum(&rho.eigenvalues())
}

/// Entropy of a qubit whose Bloch vector has length `len`.
fn qubit_entropy(len: f64) -> f64 {
    let len = len.clamp(0.0, 1.0);
    entropy_of_spectrum(&[(1.0 + len) / 2.0, (1.0 - len) / 2.0])
}

fn norm3(v: &[f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `S(A) + S(B) − S(AB)`.
pub fn mutual_information(rho: &DensityState) -> Result<f64> {
    let r = correlation_from_channel(rho)?;
    Ok(mutual_information_with(&r, rho))
}

fn mutual_information_with(r: &CorrelationMatrix, rho: &DensityState) -> f64 {
    qubit_entropy(norm3(&r.local_a())) + qubit_entropy(norm3(&r.local_b())) - entropy(rho)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceResult {
    pub concurrence: f64,
    /// Square roots of the eigenvalues of `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`,
    /// descending.
    pub spin_flip_eigs: [f64; 4],
}

/// Wootters concurrence.
///
/// The `λ_i` are the singular values of `A = √ρ (σ_y⊗σ_y) √ρ*`, since
/// `A A† = √ρ ρ̃ √ρ` shares its spectrum with `ρ ρ̃`. They are read off as the
/// positive eigenvalues of the Hermitian dilation `[[0, A], [A†, 0]]`, which
/// keeps full precision near zero where taking square roots of eigenvalues
/// would not.
pub fn concurrence(rho: &DensityState) -> Result<ConcurrenceResult> {
    rho.require_qubits(2)?;
    let yy = kron(&pauli(2), &pauli(2))?;
    let sqrt_rho = hermitian_eig(rho.matrix())?.map_values(|x| x.max(0.0).sqrt());
    let a = &(&sqrt_rho * &yy) * &sqrt_rho.conj();
    let dilation = ComplexMatrix::from_fn(8, |i, j| match (i < 4, j < 4) {
        (true, false) => a[(i, j - 4)],
        (false, true) => a[(j, i - 4)].conj(),
        _ => Complex64::new(0.0, 0.0),
    })?;
    let mu = hermitian_eig(&dilation)?.values;
    // Ascending spectrum ±λ_i: the top four, reversed, are λ descending.
    let lambda: [f64; 4] = core::array::from_fn(|i| mu[7 - i].max(0.0));
    let c = (lambda[0] - lambda[1] - lambda[2] - lambda[3]).clamp(0.0, 1.0);
    Ok(ConcurrenceResult { concurrence: c, spin_flip_eigs: lambda })
}

/// Which qubit the discord measurement acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Side {
    #[default]
    A,
    B,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Side::A),
            "B" | "b" => Ok(Side::B),
            _ => Err(Error::InvalidParameter { name: "measured side", value: f64::NAN }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordResult {
    pub discord: f64,
    pub classical_correlation: f64,
    pub mutual_information: f64,
    /// Bloch angles `(θ, φ)` of the optimal projective measurement.
    pub optimal_measurement: (f64, f64),
    pub optimizer_evals: usize,
}

pub const GRID_THETA: usize = 64;
pub const GRID_PHI: usize = 32;
pub const REFINE_EVALS: usize = 200;

/// Average entropy of the unmeasured qubit after a projective measurement
/// along `(θ, φ)` on the measured qubit.
///
/// `r` is oriented so that rows index the measured qubit. For outcome `±`
/// the probability is `½(1 ± n·a)` and the conditional Bloch vector is
/// `(b ± Mᵀn) / (1 ± n·a)`.
fn conditional_entropy(r: &CorrelationMatrix, theta: f64, phi: f64) -> f64 {
    let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
    let a = r.local_a();
    let b = r.local_b();
    let na: f64 = (0..3).map(|i| n[i] * a[i]).sum();
    let mn: [f64; 3] = core::array::from_fn(|k| (0..3).map(|i| n[i] * r.get(i + 1, k + 1)).sum());
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        let den = 1.0 + sign * na;
        let p = 0.5 * den;
        if p <= 1e-15 {
            continue;
        }
        let v: [f64; 3] = core::array::from_fn(|k| (b[k] + sign * mn[k]) / den);
        total += p * qubit_entropy(norm3(&v));
    }
    total
}

/// Quantum discord `I(A:B) − J`, with `J` maximized over projective
/// measurements on `side`.
///
/// The measurement direction is searched on a fixed `64 × 32` (θ, φ) grid,
/// then refined by Nelder–Mead from the best grid point with at most 200
/// further evaluations. Deterministic for a given state.
pub fn discord(rho: &DensityState, side: Side) -> Result<DiscordResult> {
    let r = correlation_from_channel(rho)?;
    let oriented = match side {
        Side::A => r,
        Side::B => r.transposed(),
    };
    let mutual = mutual_information_with(&r, rho).max(0.0);
    let s_unmeasured = qubit_entropy(norm3(&oriented.local_b()));

    let f = |x: [f64; 2]| conditional_entropy(&oriented, x[0], x[1]);
    let mut evals = 0;
    let mut best = ([0.0, 0.0], f64::INFINITY);
    for i in 0..GRID_THETA {
        let theta = core::f64::consts::PI * i as f64 / (GRID_THETA - 1) as f64;
        for j in 0..GRID_PHI {
            let phi = core::f64::consts::TAU * j as f64 / GRID_PHI as f64;
            let v = f([theta, phi]);
            evals += 1;
            if v < best.1 {
                best = ([theta, phi], v);
            }
        }
    }
    let step = [
        core::f64::consts::PI / (GRID_THETA - 1) as f64,
        core::f64::consts::TAU / GRID_PHI as f64,
    ];
    let (point, value, used) = nelder_mead(f, best.0, step, REFINE_EVALS);
    evals += used;
    let (point, value) = if value < best.1 { (point, value) } else { best };

    let classical = (s_unmeasured - value).clamp(0.0, mutual);
    Ok(DiscordResult {
        discord: mutual - classical,
        classical_correlation: classical,
        mutual_information: mutual,
        optimal_measurement: (point[0], point[1]),
        optimizer_evals: evals,
    })
}

/// Minimizes `f` over the plane from a right-angled starting simplex.
/// Returns `(point, value, evaluations)`.
fn nelder_mead(f: impl Fn([f64; 2]) -> f64, start: [f64; 2], step: [f64; 2], budget: usize) -> ([f64; 2], f64, usize) {
    let mut evals = 0;
    let eval = |x: [f64; 2], evals: &mut usize| {
        *evals += 1;
        f(x)
    };
    let mut simplex = [start, [start[0] + step[0], start[1]], [start[0], start[1] + step[1]]];
    let mut values = simplex.map(|x| eval(x, &mut evals));

    while evals + 4 <= budget {
        // Sort ascending.
        let mut idx = [0, 1, 2];
        idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = idx.map(|i| simplex[i]);
        values = idx.map(|i| values[i]);
        if values[2] - values[0] <= 1e-14 {
            break;
        }
        let centroid = [(simplex[0][0] + simplex[1][0]) / 2.0, (simplex[0][1] + simplex[1][1]) / 2.0];
        let along = |t: f64| [centroid[0] + t * (simplex[2][0] - centroid[0]), centroid[1] + t * (simplex[2][1] - centroid[1])];

        let reflected = along(-1.0);
        let fr = eval(reflected, &mut evals);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = eval(expanded, &mut evals);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let contracted = if fr < values[2] { along(-0.5) } else { along(0.5) };
            let fc = eval(contracted, &mut evals);
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for k in 1..3 {
                    simplex[k] = [
                        simplex[0][0] + 0.5 * (simplex[k][0] - simplex[0][0]),
                        simplex[0][1] + 0.5 * (simplex[k][1] - simplex[0][1]),
                    ];
                    values[k] = eval(simplex[k], &mut evals);
                }
            }
        }
    }
    let best = (0..3).min_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap_or(0);
    (simplex[best], values[best], evals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{qubit_from_bloch, werner};
    use crate::tol;

    /// Closed-form Werner discord: `I = 2 − S(ρ)` and `J = 1 − h((1+x)/2)`,
    /// independent of the measurement direction.
    fn werner_discord_oracle(x: f64) -> f64 {
        let h = |ps: &[f64]| -> f64 { ps.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum() };
        let i = 2.0 - h(&[(1.0 + 3.0 * x) / 4.0, (1.0 - x) / 4.0, (1.0 - x) / 4.0, (1.0 - x) / 4.0]);
        let j = 1.0 - h(&[(1.0 + x) / 2.0, (1.0 - x) / 2.0]);
        i - j
    }

    #[test]
    fn entropy_examples() {
        let mixed = qubit_from_bloch(0.0, 0.0, 0.0).unwrap();
        assert!((entropy(&mixed) - 1.0).abs() < 1e-15);
        let pure = qubit_from_bloch(0.6, 0.0, 0.8).unwrap();
        assert!(entropy(&pure).abs() < 1e-12);
        // Frozen from an mpmath evaluation of the 0.125×3, 0.625 spectrum.
        assert!((entropy(&werner(0.5).unwrap()) - 1.548_794_940_695_398_5).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_examples() {
        let product = DensityState::new(
            kron(qubit_from_bloch(0.1, 0.2, 0.3).unwrap().matrix(), qubit_from_bloch(0.0, -0.5, 0.0).unwrap().matrix())
                .unwrap(),
        )
        .unwrap();
        assert!(mutual_information(&product).unwrap().abs() < 1e-12);
        assert!((mutual_information(&werner(1.0).unwrap()).unwrap() - 2.0).abs() < 1e-12);
        assert!((mutual_information(&werner(0.5).unwrap()).unwrap() - 0.451_205_059_304_601_47).abs() < 1e-12);
    }

    #[test]
    fn concurrence_werner_anchors() {
        assert!((concurrence(&werner(1.0).unwrap()).unwrap().concurrence - 1.0).abs() < 1e-9);
        assert!(concurrence(&werner(1.0 / 3.0).unwrap()).unwrap().concurrence < 1e-9);
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            let c = concurrence(&werner(x).unwrap()).unwrap().concurrence;
            assert!((c - ((3.0 * x - 1.0) / 2.0).max(0.0)).abs() < 1e-9, "x = {x}");
        }
    }

    #[test]
    fn concurrence_of_product_is_zero() {
        let a = qubit_from_bloch(0.6, 0.0, 0.8).unwrap();
        let b = qubit_from_bloch(0.0, 1.0, 0.0).unwrap();
        let rho = DensityState::new(kron(a.matrix(), b.matrix()).unwrap()).unwrap();
        assert!(concurrence(&rho).unwrap().concurrence < 1e-9);
    }

    #[test]
    fn discord_werner_closed_form() {
        for x in [0.0, 0.05, 0.2, 1.0 / 3.0, 0.5, 1.0] {
            let d = discord(&werner(x).unwrap(), Side::A).unwrap();
            assert!((d.discord - werner_discord_oracle(x)).abs() < 1e-5, "x = {x}: {}", d.discord);
            assert!((d.discord + d.classical_correlation - d.mutual_information).abs() < 1e-12);
            assert!(d.optimizer_evals <= GRID_THETA * GRID_PHI + REFINE_EVALS);
        }
        // Frozen golden value from the same closed form evaluated in mpmath.
        let d = discord(&werner(0.2).unwrap(), Side::A).unwrap().discord;
        assert!((d - 0.049_022_499_567_306_291).abs() < 1e-5);
    }

    #[test]
    fn discord_of_product_vanishes() {
        let a = qubit_from_bloch(0.3, 0.1, -0.2).unwrap();
        let b = qubit_from_bloch(-0.4, 0.4, 0.1).unwrap();
        let rho = DensityState::new(kron(a.matrix(), b.matrix()).unwrap()).unwrap();
        for side in [Side::A, Side::B] {
            assert!(discord(&rho, side).unwrap().discord < tol::OPT);
        }
    }

    #[test]
    fn classical_classical_state_has_zero_discord() {
        // ½(|00⟩⟨00| + |11⟩⟨11|): correlated but classical.
        let rho = DensityState::new(ComplexMatrix::diag(&[0.5, 0.0, 0.0, 0.5]).unwrap()).unwrap();
        let d = discord(&rho, Side::A).unwrap();
        assert!(d.discord < tol::OPT);
        assert!((d.mutual_information - 1.0).abs() < 1e-12);
    }

    #[test]
    fn side_parsing() {
        assert_eq!("B".parse::<Side>().unwrap(), Side::B);
        assert!("C".parse::<Side>().is_err());
        assert_eq!(Side::default(), Side::A);
    }
}
