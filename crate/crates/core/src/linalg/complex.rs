use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
// Float supplies libm math when std is absent from the build graph.
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::{tol, Error, Result};

const MAX_DIM: usize = 8;

/// Dense complex square matrix of dimension 2, 4 or 8, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [Complex64; MAX_DIM * MAX_DIM],
}

impl core::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let mut list = f.debug_list();
        for i in 0..self.dim {
            list.entry(&&self.data[i * self.dim..(i + 1) * self.dim]);
        }
        list.finish()
    }
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 | 8 => Ok(()),
        _ => Err(Error::Dimension { dim }),
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::zeros_unchecked(dim))
    }

    pub(crate) fn zeros_unchecked(dim: usize) -> Self {
        Self {
            dim,
            data: [Complex64::zero(); MAX_DIM * MAX_DIM],
        }
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m.check_finite()?;
        Ok(m)
    }

    /// Builds a matrix from row slices; the row count fixes the dimension.
    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self> {
        let dim = rows.len();
        check_dim(dim)?;
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.len() });
        }
        Self::from_fn(dim, |i, j| rows[i][j])
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Result<Self> {
        Self::from_fn(values.len(), |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::zero()
            }
        })
    }

    /// Projector `|v⟩⟨v|` (no normalization applied).
    pub fn outer(v: &[Complex64]) -> Result<Self> {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.entries().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    fn entries(&self) -> impl Iterator<Item = &Complex64> {
        self.data[..self.dim * self.dim].iter()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros_unchecked(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z = z.conj());
        out
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z *= k);
        out
    }

    /// `Tr(self · other)`, without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = Complex64::zero();
        for i in 0..n {
            for k in 0..n {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.dim && j < self.dim);
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.dim && j < self.dim);
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros_unchecked(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = *self;
        out.data.iter_mut().zip(rhs.data.iter()).for_each(|(a, b)| *a += b);
        out
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = *self;
        out.data.iter_mut().zip(rhs.data.iter()).for_each(|(a, b)| *a -= b);
        out
    }
}

/// Pauli matrix `σ_i`, with `σ_0 = I`.
///
/// # Panics
///
/// If `i > 3`.
pub fn pauli(i: usize) -> ComplexMatrix {
    let o = Complex64::zero();
    let one = Complex64::new(1.0, 0.0);
    let im = Complex64::new(0.0, 1.0);
    let rows: [[Complex64; 2]; 2] = match i {
        0 => [[one, o], [o, one]],
        1 => [[o, one], [one, o]],
        2 => [[o, -im], [im, o]],
        3 => [[one, o], [o, -one]],
        _ => panic!("Pauli index {i} out of range"),
    };
    let mut m = ComplexMatrix::zeros_unchecked(2);
    for (r, row) in rows.iter().enumerate() {
        for (c, z) in row.iter().enumerate() {
            m[(r, c)] = *z;
        }
    }
    m
}

/// Kronecker product `a ⊗ b`. The result may not exceed dimension 8.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = a.dim * b.dim;
    if dim > MAX_DIM {
        return Err(Error::Dimension { dim });
    }
    let mut out = ComplexMatrix::zeros_unchecked(dim);
    for i in 0..a.dim {
        for j in 0..a.dim {
            let aij = a[(i, j)];
            for k in 0..b.dim {
                for l in 0..b.dim {
                    out[(i * b.dim + k, j * b.dim + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Traces out every subsystem except `keep`.
///
/// `dims` lists subsystem dimensions, most significant first; their product
/// must equal `rho.dim()`.
pub fn partial_trace(rho: &ComplexMatrix, keep: usize, dims: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if total != rho.dim {
        return Err(Error::DimensionMismatch { expected: rho.dim, found: total });
    }
    if keep >= dims.len() {
        return Err(Error::DimensionMismatch { expected: dims.len(), found: keep + 1 });
    }
    let kept = dims[keep];
    check_dim(kept)?;
    // Stride of the kept subsystem within the flat index.
    let stride: usize = dims[keep + 1..].iter().product();
    let rest = total / kept;

    // Flat index of (rest-multi-index r, kept value a).
    let index = |r: usize, a: usize| {
        let low = r % stride;
        let high = r / stride;
        (high * kept + a) * stride + low
    };

    let mut out = ComplexMatrix::zeros_unchecked(kept);
    for a in 0..kept {
        for b in 0..kept {
            let mut acc = Complex64::zero();
            for r in 0..rest {
                acc += rho[(index(r, a), index(r, b))];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Rebuilds `Σ λ_k v_k v_k†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_values(|x| x)
    }

    /// `Σ f(λ_k) v_k v_k†`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.vectors.dim;
        let mut out = ComplexMatrix::zeros_unchecked(n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            for i in 0..n {
                let vi = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

const MAX_SWEEPS: usize = 100;

/// Cyclic complex Jacobi eigen-solver.
///
/// Each rotation first removes the phase of the pivot `h_pq`, then applies a
/// real Givens rotation that zeroes it.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    h.check_finite()?;
    let deviation = h.hermiticity_defect();
    if deviation > tol::HERM {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.dim;
    let mut a = (h + &h.adjoint()).scale(0.5);
    let mut v = ComplexMatrix::identity(n)?;
    let scale = a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= f64::EPSILON * 1e-2 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros_unchecked(n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let b = a[(p, q)];
    let mag = b.norm();
    if mag == 0.0 {
        return;
    }
    let phase = b / mag;
    let zeta = (a[(p, p)].re - a[(q, q)].re) / (2.0 * mag);
    let t = if zeta >= 0.0 {
        -1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // Q = diag(1, conj(phase)) · [[c, s], [-s, c]] restricted to (p, q).
    let qpp = Complex64::new(c, 0.0);
    let qpq = Complex64::new(s, 0.0);
    let qqp = phase.conj() * (-s);
    let qqq = phase.conj() * c;
    let n = a.dim;

    for k in 0..n {
        let (hp, hq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = hp * qpp + hq * qqp;
        a[(k, q)] = hp * qpq + hq * qqq;
        let (vp, vq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vp * qpp + vq * qqp;
        v[(k, q)] = vp * qpq + vq * qqq;
    }
    for k in 0..n {
        let (hp, hq) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = qpp.conj() * hp + qqp.conj() * hq;
        a[(q, k)] = qpq.conj() * hp + qqq.conj() * hq;
    }
    a[(p, q)] = Complex64::zero();
    a[(q, p)] = Complex64::zero();
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
}
