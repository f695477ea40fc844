//! Dense symmetric positive-definite kernels.
//!
//! Every matrix in the model is small (`m` is 2 in practice, a few tens at
//! most), square and real. [`Matrix`] is a plain row-major square array;
//! [`SpdMatrix`] adds the symmetric positive-definite guarantee and carries
//! its Cholesky factor so determinants, inverses and solves are cheap after
//! construction. [`CorrelationMatrix`] is the unit-diagonal rescaling.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Relative asymmetry above which a matrix is refused instead of symmetrized.
const ASYMMETRY_REJECT: f64 = 1e-8;

/// Eigenvalues below this fraction of the largest eigenvalue are treated as
/// a loss of positive definiteness.
pub const EIGEN_FLOOR: f64 = 1e-12;

const JACOBI_MAX_SWEEPS: usize = 64;

/// Square dense real matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out.data[i * dim + i] = 1.0;
        }
        out
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut out = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            out.set(i, i, v);
        }
        out
    }

    /// Builds a matrix from rows; fails unless the rows form a square array.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DomainError(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from a flat row-major slice of length `dim * dim`.
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DomainError(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    /// `v vᵀ`.
    pub fn outer(v: &[f64]) -> Self {
        let dim = v.len();
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                out.data[i * dim + j] = v[i] * v[j];
            }
        }
        out
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j];
            }
        }
        out
    }

    pub fn matmul(&self, other: &Matrix) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matmul");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch in matvec");
        self.data
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_of_product(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in trace_of_product");
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        acc
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add");
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in sub");
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `(self + selfᵀ) / 2`.
    pub fn symmetrized(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (self.data[i * n + j] + self.data[j * n + i]);
                out.data[i * n + j] = avg;
                out.data[j * n + i] = avg;
            }
        }
        out
    }

    /// Symmetric within `|a_ij − a_ji| ≤ tol · max(1, |a_ij|)`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.dim;
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let a = self.get(i, j);
                let b = self.get(j, i);
                (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
            })
        })
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.dim)).finish()
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(deserializer)?;
        Matrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Cholesky factor `L` (lower triangular, positive diagonal) with `L Lᵀ = m`.
///
/// Only the lower triangle of `m` is read; callers are expected to pass a
/// symmetric matrix.
pub fn cholesky(m: &Matrix) -> Result<Matrix> {
    let n = m.dim();
    let mut l = Matrix::zeros(n);
    for j in 0..n {
        let mut pivot = m.get(j, j);
        for k in 0..j {
            pivot -= l.get(j, k) * l.get(j, k);
        }
        if !(pivot > 0.0) || !pivot.is_finite() {
            return Err(Error::NotPositiveDefinite(format!(
                "non-positive pivot {pivot:e} at column {j}"
            )));
        }
        let ljj = pivot.sqrt();
        l.set(j, j, ljj);
        for i in (j + 1)..n {
            let mut s = m.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, s / ljj);
        }
    }
    Ok(l)
}

/// Symmetric positive-definite matrix together with its Cholesky factor.
#[derive(Clone, PartialEq)]
pub struct SpdMatrix {
    mat: Matrix,
    chol: Matrix,
}

impl SpdMatrix {
    /// Symmetrizes `m` by averaging with its transpose, then checks positive
    /// definiteness through a Cholesky factorization.
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NotPositiveDefinite("non-finite entries".into()));
        }
        if !m.is_symmetric(ASYMMETRY_REJECT) {
            return Err(Error::DomainError("matrix is not symmetric".into()));
        }
        let mat = m.symmetrized();
        let chol = cholesky(&mat)?;
        Ok(Self { mat, chol })
    }

    /// `B Bᵀ` for a lower-triangular `B` with positive diagonal.
    ///
    /// The product is refactorized so that the stored factor depends on the
    /// entries only; a matrix read back from disk then behaves identically.
    pub(crate) fn from_lower_factor(b: Matrix) -> Result<Self> {
        let n = b.dim();
        for i in 0..n {
            let v = b.get(i, i);
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::NotPositiveDefinite(format!(
                    "factor diagonal {v:e} at {i}"
                )));
            }
            for j in (i + 1)..n {
                debug_assert_eq!(b.get(i, j), 0.0);
            }
        }
        let mat = b.matmul(&b.transpose()).symmetrized();
        if !mat.is_finite() {
            return Err(Error::NotPositiveDefinite("non-finite entries".into()));
        }
        let chol = cholesky(&mat)?;
        Ok(Self { mat, chol })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: Matrix::identity(dim),
            chol: Matrix::identity(dim),
        }
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        Self::new(Matrix::from_diag(diag))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.mat.get(i, j)
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix {
        self.mat
    }

    /// Lower Cholesky factor.
    pub fn cholesky(&self) -> &Matrix {
        &self.chol
    }

    /// `ln |M| = 2 Σ ln L_ii`.
    pub fn log_det(&self) -> f64 {
        2.0 * (0..self.dim()).map(|i| self.chol.get(i, i).ln()).sum::<f64>()
    }

    /// Solves `M x = b` with the stored factor.
    pub fn solve_vec(&self, b: &[f64]) -> Vec<f64> {
        let z = forward_substitute(&self.chol, b);
        backward_substitute_transposed(&self.chol, &z)
    }

    /// `bᵀ M⁻¹ b`.
    pub fn inv_quad_form(&self, b: &[f64]) -> f64 {
        let z = forward_substitute(&self.chol, b);
        z.iter().map(|v| v * v).sum()
    }

    /// `M⁻¹` through the Cholesky factor.
    pub fn inverse(&self) -> Result<SpdMatrix> {
        let n = self.dim();
        let linv = lower_triangular_inverse(&self.chol);
        // M⁻¹ = L⁻ᵀ L⁻¹
        let mut inv = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = 0.0;
                for k in i..n {
                    s += linv.get(k, i) * linv.get(k, j);
                }
                inv.set(i, j, s);
                inv.set(j, i, s);
            }
        }
        SpdMatrix::new(inv)
    }

    /// `Tr(M⁻¹ X)` computed by solving against the columns of `X`.
    pub fn trace_inv_times(&self, x: &Matrix) -> f64 {
        let n = self.dim();
        let linv = lower_triangular_inverse(&self.chol);
        // Tr(L⁻ᵀ L⁻¹ X) = Tr(L⁻¹ X L⁻ᵀ)
        let mut acc = 0.0;
        for i in 0..n {
            for a in 0..=i {
                let la = linv.get(i, a);
                if la == 0.0 {
                    continue;
                }
                for b in 0..=i {
                    acc += la * x.get(a, b) * linv.get(i, b);
                }
            }
        }
        acc
    }

    /// Scales by a positive constant.
    pub fn scale(&self, s: f64) -> Result<SpdMatrix> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::DomainError(format!("scale factor {s} must be positive")));
        }
        let mat = self.mat.scale(s);
        let chol = cholesky(&mat)?;
        Ok(SpdMatrix { mat, chol })
    }

    /// `A · M · A` for symmetric `A`; the result is re-checked.
    pub fn congruence(&self, a: &Matrix) -> Result<SpdMatrix> {
        SpdMatrix::new(a.matmul(&self.mat).matmul(a))
    }
}

impl fmt::Debug for SpdMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.mat.fmt(f)
    }
}

impl Serialize for SpdMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.mat.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SpdMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let m = Matrix::deserialize(deserializer)?;
        SpdMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

fn forward_substitute(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.dim();
    let mut z = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l.get(i, k) * z[k];
        }
        z[i] = s / l.get(i, i);
    }
    z
}

fn backward_substitute_transposed(l: &Matrix, z: &[f64]) -> Vec<f64> {
    let n = l.dim();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = z[i];
        for k in (i + 1)..n {
            s -= l.get(k, i) * x[k];
        }
        x[i] = s / l.get(i, i);
    }
    x
}

fn lower_triangular_inverse(l: &Matrix) -> Matrix {
    let n = l.dim();
    let mut inv = Matrix::zeros(n);
    for j in 0..n {
        inv.set(j, j, 1.0 / l.get(j, j));
        for i in (j + 1)..n {
            let mut s = 0.0;
            for k in j..i {
                s -= l.get(i, k) * inv.get(k, j);
            }
            inv.set(i, j, s / l.get(i, i));
        }
    }
    inv
}

/// `ln |M|`.
pub fn log_det(m: &SpdMatrix) -> f64 {
    m.log_det()
}

/// Symmetric eigendecomposition `M = V diag(λ) Vᵀ`, eigenvectors in the
/// columns of `V`. Closed form for 2×2, cyclic Jacobi otherwise.
pub fn symmetric_eigen(m: &Matrix) -> (Vec<f64>, Matrix) {
    match m.dim() {
        1 => (vec![m.get(0, 0)], Matrix::identity(1)),
        2 => eigen_2x2(m.get(0, 0), m.get(0, 1), m.get(1, 1)),
        _ => eigen_jacobi(m),
    }
}

fn eigen_2x2(a: f64, b: f64, c: f64) -> (Vec<f64>, Matrix) {
    if b == 0.0 {
        return (vec![a, c], Matrix::identity(2));
    }
    // rotation angle that annihilates the off-diagonal entry
    let theta = 0.5 * (2.0 * b).atan2(a - c);
    let (s, co) = theta.sin_cos();
    let l1 = a * co * co + 2.0 * b * s * co + c * s * s;
    let l2 = a * s * s - 2.0 * b * s * co + c * co * co;
    let v = Matrix {
        dim: 2,
        data: vec![co, -s, s, co],
    };
    (vec![l1, l2], v)
}

fn eigen_jacobi(m: &Matrix) -> (Vec<f64>, Matrix) {
    let n = m.dim();
    let mut a = m.symmetrized();
    let mut v = Matrix::identity(n);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| a.get(i, j) * a.get(i, j))
            .sum();
        let scale: f64 = (0..n).map(|i| a.get(i, i) * a.get(i, i)).sum();
        if off <= 1e-30 * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    (a.diag(), v)
}

/// `M^p = V diag(λᵢᵖ) Vᵀ`.
///
/// Fails with `NotPositiveDefinite` when the smallest eigenvalue is below
/// [`EIGEN_FLOOR`] times the largest.
pub fn frac_power(m: &SpdMatrix, p: f64) -> Result<SpdMatrix> {
    if p == 1.0 {
        return Ok(m.clone());
    }
    if p == 0.0 {
        return Ok(SpdMatrix::identity(m.dim()));
    }
    let (lambda, v) = symmetric_eigen(m.as_matrix());
    let max = lambda.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = lambda.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(max > 0.0) || !(min > EIGEN_FLOOR * max) {
        return Err(Error::NotPositiveDefinite(format!(
            "eigenvalue {min:e} below floor relative to {max:e}"
        )));
    }
    let n = m.dim();
    let powered: Vec<f64> = lambda.iter().map(|l| l.powf(p)).collect();
    let mut out = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..n).map(|k| v.get(i, k) * powered[k] * v.get(j, k)).sum();
            out.set(i, j, s);
            out.set(j, i, s);
        }
    }
    SpdMatrix::new(out)
}

/// Diagonal matrix of square roots of the diagonal of `q`.
pub fn diag_sqrt(q: &Matrix) -> Result<Matrix> {
    let mut out = Matrix::zeros(q.dim());
    for i in 0..q.dim() {
        let v = q.get(i, i);
        if !(v > 0.0) {
            return Err(Error::DomainError(format!(
                "diagonal entry {i} is {v}, must be positive"
            )));
        }
        out.set(i, i, v.sqrt());
    }
    Ok(out)
}

/// Unit-diagonal correlation matrix.
#[derive(Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix(Matrix);

impl CorrelationMatrix {
    pub fn identity(dim: usize) -> Self {
        Self(Matrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    /// Strict upper-triangle entries in row order: (0,1), (0,2), …, (m−2,m−1).
    pub fn off_diagonals(&self) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect()
    }

    /// As an SPD matrix, for use as a covariance.
    pub fn to_spd(&self) -> Result<SpdMatrix> {
        SpdMatrix::new(self.0.clone())
    }
}

impl fmt::Debug for CorrelationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Strict upper-triangle index pairs `(i, j)` for dimension `m`.
pub fn off_diagonal_pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m)
        .flat_map(|i| ((i + 1)..m).map(move |j| (i, j)))
        .collect()
}

/// `Ω_ij = Q_ij / √(Q_ii Q_jj)`.
pub fn to_correlation(q: &SpdMatrix) -> Result<CorrelationMatrix> {
    let n = q.dim();
    let mut inv_sd = Vec::with_capacity(n);
    for i in 0..n {
        let v = q.get(i, i);
        if !(v > 0.0) {
            return Err(Error::NotPositiveDefinite(format!(
                "diagonal entry {i} is {v}"
            )));
        }
        inv_sd.push(1.0 / v.sqrt());
    }
    let mut out = Matrix::identity(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let r = (q.get(i, j) * inv_sd[i] * inv_sd[j]).clamp(-1.0, 1.0);
            out.set(i, j, r);
            out.set(j, i, r);
        }
    }
    Ok(CorrelationMatrix(out))
}

/// `ln Γ_m(x) = (m(m−1)/4) ln π + Σ_{i=1..m} ln Γ(x − (i−1)/2)`.
///
/// The Wishart normalizer uses `x = ν/2`.
pub fn mv_log_gamma(m: usize, x: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::DomainError("dimension must be positive".into()));
    }
    let smallest = x - (m as f64 - 1.0) / 2.0;
    if !(smallest > 0.0) {
        return Err(Error::DomainError(format!(
            "multivariate gamma of order {m} needs x > {}, got {x}",
            (m as f64 - 1.0) / 2.0
        )));
    }
    let mut acc = if m == 1 {
        0.0
    } else {
        (m * (m - 1)) as f64 / 4.0 * std::f64::consts::PI.ln()
    };
    for i in 0..m {
        acc += statrs::function::gamma::ln_gamma(x - i as f64 / 2.0);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spd(rows: &[[f64; 2]]) -> SpdMatrix {
        SpdMatrix::from_rows(rows).unwrap()
    }

    fn assert_mat_close(a: &Matrix, b: &Matrix, tol: f64) {
        assert_eq!(a.dim(), b.dim());
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn cholesky_examples() {
        let l = cholesky(&Matrix::identity(2)).unwrap();
        assert_mat_close(&l, &Matrix::identity(2), 0.0);

        let l = cholesky(&Matrix::from_diag(&[4.0, 9.0])).unwrap();
        assert_mat_close(&l, &Matrix::from_diag(&[2.0, 3.0]), 1e-15);

        let m = Matrix::from_rows(&[[4.0, 2.0], [2.0, 5.0]]).unwrap();
        let l = cholesky(&m).unwrap();
        assert_mat_close(&l, &Matrix::from_rows(&[[2.0, 0.0], [1.0, 2.0]]).unwrap(), 1e-15);
        // L Lᵀ reproduces the input
        assert_mat_close(&l.matmul(&l.transpose()), &m, 1e-12);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = Matrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]).unwrap();
        assert!(matches!(cholesky(&m), Err(Error::NotPositiveDefinite(_))));
        assert!(matches!(
            SpdMatrix::from_diag(&[1.0, 0.0]),
            Err(Error::NotPositiveDefinite(_))
        ));
    }

    #[test]
    fn construction_symmetrizes_and_rejects_asymmetry() {
        let m = SpdMatrix::from_rows(&[[2.0, 1.0 + 1e-14], [1.0, 2.0]]).unwrap();
        assert_eq!(m.get(0, 1), m.get(1, 0));
        assert!(matches!(
            SpdMatrix::from_rows(&[[2.0, 1.5], [1.0, 2.0]]),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn log_det_examples() {
        assert_eq!(log_det(&SpdMatrix::identity(3)), 0.0);
        assert_abs_diff_eq!(log_det(&spd(&[[4.0, 0.0], [0.0, 9.0]])), 36f64.ln(), epsilon = 1e-14);
        // ad - bc = 20 - 4 = 16
        assert_abs_diff_eq!(log_det(&spd(&[[4.0, 2.0], [2.0, 5.0]])), 16f64.ln(), epsilon = 1e-14);
    }

    #[test]
    fn frac_power_examples() {
        let id = SpdMatrix::identity(2);
        assert_mat_close(frac_power(&id, -0.4).unwrap().as_matrix(), &Matrix::identity(2), 1e-15);

        let d = spd(&[[4.0, 0.0], [0.0, 9.0]]);
        assert_mat_close(
            frac_power(&d, 0.5).unwrap().as_matrix(),
            &Matrix::from_diag(&[2.0, 3.0]),
            1e-14,
        );

        let m = spd(&[[4.0, 2.0], [2.0, 5.0]]);
        let sq = m.as_matrix().matmul(m.as_matrix());
        assert_mat_close(&sq, &Matrix::from_rows(&[[20.0, 18.0], [18.0, 29.0]]).unwrap(), 0.0);
        assert_mat_close(frac_power(&m, 2.0).unwrap().as_matrix(), &sq, 1e-12);
        assert_mat_close(frac_power(&m, 1.0).unwrap().as_matrix(), m.as_matrix(), 0.0);
        assert_mat_close(frac_power(&m, 0.0).unwrap().as_matrix(), &Matrix::identity(2), 0.0);
    }

    #[test]
    fn frac_power_eigen_floor() {
        // eigenvalues 1 and 1e-14
        let m = SpdMatrix::from_diag(&[1.0, 1e-14]).unwrap();
        assert!(matches!(frac_power(&m, 0.5), Err(Error::NotPositiveDefinite(_))));
    }

    #[test]
    fn jacobi_matches_closed_form_reconstruction() {
        let m = Matrix::from_rows(&[[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]]).unwrap();
        let (lambda, v) = symmetric_eigen(&m);
        let recon = v.matmul(&Matrix::from_diag(&lambda)).matmul(&v.transpose());
        assert_mat_close(&recon, &m, 1e-12);
        let vtv = v.transpose().matmul(&v);
        assert_mat_close(&vtv, &Matrix::identity(3), 1e-12);
    }

    #[test]
    fn inverse_and_solves() {
        let m = spd(&[[4.0, 2.0], [2.0, 5.0]]);
        let inv = m.inverse().unwrap();
        assert_mat_close(&m.as_matrix().matmul(inv.as_matrix()), &Matrix::identity(2), 1e-14);
        let x = m.solve_vec(&[1.0, 2.0]);
        assert_abs_diff_eq!(4.0 * x[0] + 2.0 * x[1], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(2.0 * x[0] + 5.0 * x[1], 2.0, epsilon = 1e-14);
        let b = [1.0, -3.0];
        let direct: f64 = inv.as_matrix().matvec(&b).iter().zip(&b).map(|(a, c)| a * c).sum();
        assert_abs_diff_eq!(m.inv_quad_form(&b), direct, epsilon = 1e-13);
        let x = Matrix::from_rows(&[[1.0, 0.3], [0.3, 2.0]]).unwrap();
        assert_abs_diff_eq!(
            m.trace_inv_times(&x),
            inv.as_matrix().matmul(&x).trace(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn to_correlation_examples() {
        let c = to_correlation(&SpdMatrix::identity(2)).unwrap();
        assert_eq!(c, CorrelationMatrix::identity(2));
        let c = to_correlation(&spd(&[[4.0, 2.0], [2.0, 9.0]])).unwrap();
        assert_abs_diff_eq!(c.get(0, 1), 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(c.get(0, 0), 1.0);
        assert_eq!(c.get(1, 1), 1.0);
        let c = to_correlation(&spd(&[[7.0, 0.0], [0.0, 3.0]])).unwrap();
        assert_eq!(c, CorrelationMatrix::identity(2));
    }

    #[test]
    fn diag_sqrt_examples() {
        assert_eq!(diag_sqrt(&Matrix::identity(2)).unwrap(), Matrix::identity(2));
        assert_eq!(
            diag_sqrt(&Matrix::from_diag(&[4.0, 9.0])).unwrap(),
            Matrix::from_diag(&[2.0, 3.0])
        );
        let q = Matrix::from_rows(&[[4.0, 2.0], [2.0, 9.0]]).unwrap();
        assert_eq!(diag_sqrt(&q).unwrap(), Matrix::from_diag(&[2.0, 3.0]));
        let bad = Matrix::from_diag(&[1.0, 0.0]);
        assert!(matches!(diag_sqrt(&bad), Err(Error::DomainError(_))));
    }

    #[test]
    fn mv_log_gamma_examples() {
        assert_abs_diff_eq!(mv_log_gamma(1, 2.0).unwrap(), 0.0, epsilon = 1e-14);
        // 0.5 ln π + ln Γ(2.5) + ln Γ(2)
        assert_abs_diff_eq!(mv_log_gamma(2, 2.5).unwrap(), 0.857_047_813_397_619_2, epsilon = 1e-12);
        assert!(matches!(mv_log_gamma(2, 0.5), Err(Error::DomainError(_))));
        assert!(matches!(mv_log_gamma(2, -1.0), Err(Error::DomainError(_))));
        assert_eq!(
            mv_log_gamma(1, 3.7).unwrap(),
            statrs::function::gamma::ln_gamma(3.7)
        );
    }

    #[test]
    fn serde_round_trip() {
        let m = spd(&[[4.0, 2.0], [2.0, 5.0]]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[4.0,2.0],[2.0,5.0]]");
        let back: SpdMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<SpdMatrix>("[[1.0,2.0],[2.0,1.0]]").is_err());
    }
}
