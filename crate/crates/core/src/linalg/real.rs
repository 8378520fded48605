use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{tol, Error, Result};

pub type RealMatrix4 = [[f64; 4]; 4];
pub type Matrix3 = [[f64; 3]; 3];

/// `m = u · diag(values) · wᵀ` with orthogonal `u`, `w` and `values`
/// non-negative, descending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Svd<const N: usize> {
    pub u: [[f64; N]; N],
    pub values: [f64; N],
    pub w: [[f64; N]; N],
}

impl<const N: usize> Svd<N> {
    pub fn reconstruct(&self) -> [[f64; N]; N] {
        let mut out = [[0.0; N]; N];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..N).map(|k| self.u[i][k] * self.values[k] * self.w[j][k]).sum();
            }
        }
        out
    }

    /// Number of singular values above `rel * values[0]`.
    pub fn rank(&self, rel: f64) -> usize {
        let cut = rel * self.values[0];
        self.values.iter().filter(|&&d| d > cut).count()
    }

    /// `σ_max / σ_min`; infinite when the smallest value is zero.
    pub fn condition(&self) -> f64 {
        self.values[0] / self.values[N - 1]
    }
}

pub fn transpose<const N: usize>(m: &[[f64; N]; N]) -> [[f64; N]; N] {
    let mut t = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..N {
            t[j][i] = m[i][j];
        }
    }
    t
}

pub fn mat_mul<const N: usize>(a: &[[f64; N]; N], b: &[[f64; N]; N]) -> [[f64; N]; N] {
    let mut out = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..N {
            out[i][j] = (0..N).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn mat_vec<const N: usize>(a: &[[f64; N]; N], x: &[f64; N]) -> [f64; N] {
    let mut out = [0.0; N];
    for (o, row) in out.iter_mut().zip(a) {
        *o = row.iter().zip(x).map(|(p, q)| p * q).sum();
    }
    out
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det<const N: usize>(m: &[[f64; N]; N]) -> f64 {
    let mut a = *m;
    let mut acc = 1.0;
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            acc = -acc;
        }
        acc *= a[col][col];
        for row in col + 1..N {
            let f = a[row][col] / a[col][col];
            for k in col..N {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    acc
}

fn column_dot<const N: usize>(a: &[[f64; N]; N], p: usize, q: usize) -> f64 {
    a.iter().map(|row| row[p] * row[q]).sum()
}

const MAX_SWEEPS: usize = 60;

/// One-sided (Hestenes) Jacobi SVD.
///
/// Columns of a working copy are rotated pairwise until mutually orthogonal;
/// their norms are the singular values and the accumulated rotations form `w`.
pub fn svd<const N: usize>(m: &[[f64; N]; N]) -> Result<Svd<N>> {
    if m.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut a = *m;
    let mut w = [[0.0; N]; N];
    for (i, row) in w.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..N {
            for q in p + 1..N {
                let alpha = column_dot(&a, p, p);
                let beta = column_dot(&a, q, q);
                let gamma = column_dot(&a, p, q);
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for row in a.iter_mut().chain(w.iter_mut()) {
                    let (x, y) = (row[p], row[q]);
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: [f64; N] = core::array::from_fn(|j| column_dot(&a, j, j).sqrt());
    let mut order: [usize; N] = core::array::from_fn(|j| j);
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let d_max = norms[order[0]];
    let mut out = Svd {
        u: [[0.0; N]; N],
        values: [0.0; N],
        w: [[0.0; N]; N],
    };
    let mut missing = Vec::new();
    for (dst, &src) in order.iter().enumerate() {
        let d = norms[src];
        out.values[dst] = d;
        for i in 0..N {
            out.w[i][dst] = w[i][src];
        }
        if d > f64::EPSILON * d_max && d > f64::MIN_POSITIVE {
            for i in 0..N {
                out.u[i][dst] = a[i][src] / d;
            }
        } else {
            missing.push(dst);
        }
    }
    for col in missing {
        complete_column(&mut out.u, col);
    }
    Ok(out)
}

/// Fills column `col` of `u` with a unit vector orthogonal to every other
/// already-populated column.
fn complete_column<const N: usize>(u: &mut [[f64; N]; N], col: usize) {
    let filled: Vec<usize> = (0..N)
        .filter(|&j| j != col && u.iter().any(|row| row[j] != 0.0))
        .collect();
    let mut best = [0.0; N];
    let mut best_norm = -1.0;
    for e in 0..N {
        let mut v = [0.0; N];
        v[e] = 1.0;
        for _ in 0..2 {
            for &j in &filled {
                let proj: f64 = (0..N).map(|i| u[i][j] * v[i]).sum();
                for i in 0..N {
                    v[i] -= proj * u[i][j];
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > best_norm {
            best_norm = norm;
            best = v;
        }
    }
    for i in 0..N {
        u[i][col] = best[i] / best_norm;
    }
}

pub fn svd4(m: &RealMatrix4) -> Result<Svd<4>> {
    svd(m)
}

/// Solution of a 3×3 system with its spectral condition number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Solution {
    pub x: [f64; 3],
    /// `σ_max / σ_min` of the coefficient matrix.
    pub cond: f64,
    pub svd: Svd<3>,
}

/// Solves `a·x = b`, rejecting systems with `|det a| < tol::RANK · σ_max³`.
pub fn solve3(a: &Matrix3, b: &[f64; 3]) -> Result<Solution> {
    if b.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let dec = svd(a)?;
    let determinant = det(a);
    let scale = dec.values[0];
    if scale == 0.0 || determinant.abs() < tol::RANK * scale.powi(3) {
        return Err(Error::SingularSystem { det: determinant, scale });
    }
    // x = W · diag(1/d) · Uᵀ · b
    let mut y = [0.0; 3];
    for (k, yk) in y.iter_mut().enumerate() {
        *yk = (0..3).map(|i| dec.u[i][k] * b[i]).sum::<f64>() / dec.values[k];
    }
    let x = mat_vec(&dec.w, &y);
    Ok(Solution { x, cond: dec.condition(), svd: dec })
}

/// Singular values (descending) of the tall matrix whose rows are `rows`.
pub fn singular_values_of_rows<const N: usize>(rows: &[[f64; N]]) -> [f64; N] {
    let mut cols: Vec<Vec<f64>> = (0..N).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..N {
            for q in p + 1..N {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (lo, hi) = cols.split_at_mut(q);
                for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = c * xp - s * yq;
                    *y = s * xp + c * yq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut values: [f64; N] = core::array::from_fn(|j| dot(&cols[j], &cols[j]).sqrt());
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs<const N: usize>(a: &[[f64; N]; N], b: &[[f64; N]; N]) -> f64 {
        a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    fn identity<const N: usize>() -> [[f64; N]; N] {
        core::array::from_fn(|i| core::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }))
    }

    #[test]
    fn svd_of_identity() {
        let s = svd4(&identity()).unwrap();
        assert_eq!(s.values, [1.0; 4]);
    }

    #[test]
    fn svd_of_signed_diagonal_takes_absolute_values() {
        let x = 0.5;
        let m = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, x, 0.0, 0.0],
            [0.0, 0.0, -x, 0.0],
            [0.0, 0.0, 0.0, x],
        ];
        let s = svd4(&m).unwrap();
        assert_eq!(s.values, [1.0, 0.5, 0.5, 0.5]);
        assert!(max_abs(&s.reconstruct(), &m) < 1e-15);
    }

    #[test]
    fn svd_completes_basis_for_rank_deficient_input() {
        let m = [
            [1.0, 2.0, 0.0, 0.0],
            [2.0, 4.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ];
        let s = svd4(&m).unwrap();
        assert_eq!(s.rank(1e-8), 1);
        let utu = mat_mul(&transpose(&s.u), &s.u);
        assert!(max_abs(&utu, &identity()) < 1e-14);
        assert!(max_abs(&s.reconstruct(), &m) < 1e-14);
    }

    #[test]
    fn svd_rejects_non_finite() {
        let mut m = identity::<4>();
        m[1][2] = f64::NAN;
        assert_eq!(svd4(&m), Err(Error::NonFinite));
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let m = [[2.0, -1.0, 0.5], [0.3, 4.0, 1.0], [-2.0, 0.7, 3.0]];
        let cof = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        assert!((det(&m) - cof).abs() < 1e-13);
    }

    #[test]
    fn solve3_identity() {
        let sol = solve3(&identity(), &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(sol.x, [1.0, 2.0, 3.0]);
        assert_eq!(sol.cond, 1.0);
    }

    #[test]
    fn solve3_rank_two_is_singular() {
        let a = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]];
        assert!(matches!(solve3(&a, &[1.0, 1.0, 1.0]), Err(Error::SingularSystem { .. })));
    }

    #[test]
    fn solve3_is_scale_invariant() {
        let a = [[1e-6, 0.0, 0.0], [0.0, 1e-6, 0.0], [0.0, 0.0, 1e-6]];
        let sol = solve3(&a, &[1e-6, 2e-6, 3e-6]).unwrap();
        assert!((sol.x[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn tall_singular_values_of_line_cloud() {
        let rows: Vec<[f64; 3]> = (0..50)
            .map(|i| {
                let t = i as f64 / 7.0 - 3.0;
                [t, 2.0 * t, -t]
            })
            .collect();
        let sv = singular_values_of_rows(&rows);
        let expected = rows.iter().map(|r| r.iter().map(|x| x * x).sum::<f64>()).sum::<f64>().sqrt();
        assert!((sv[0] - expected).abs() < 1e-12);
        assert!(sv[1] < 1e-13 && sv[2] < 1e-13);
    }
}
