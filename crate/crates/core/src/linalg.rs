// Copyright 2026 The qcapacity Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Dense complex linear algebra.
//!
//! Everything downstream (entropies, fidelities, Holevo quantities) reduces
//! to the spectrum of small Hermitian matrices, so this module only carries
//! what that needs: a square complex matrix type, a cyclic Jacobi
//! eigensolver for Hermitian input and spectral matrix functions built on
//! top of it.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Inputs to [`hermitian_eigen`] may deviate from Hermitian by this much.
pub const HERMITIAN_TOLERANCE: f64 = 1e-9;

/// Eigenvalues in `[-CLIP_TOLERANCE, 0)` are treated as exact zeros by
/// [`apply_spectral_function`].
pub const CLIP_TOLERANCE: f64 = 1e-12;

/// Jacobi stops once the off-diagonal Frobenius norm drops below
/// `CONVERGENCE_FACTOR * (1 + ‖m‖_F)`.
pub const CONVERGENCE_FACTOR: f64 = 1e-12;

/// Maximum number of full Jacobi sweeps.
pub const MAX_SWEEPS: usize = 100;

/// Dense square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a `dim × dim` matrix from row-major entries.
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("matrix dimension must be at least 1"));
        }
        if data.len() != dim * dim {
            return Err(Error::invalid(format!(
                "matrix of dimension {dim} needs {} entries, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from rows, rejecting ragged or non-square input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::invalid("matrix rows must form a square array"));
        }
        Self::new(dim, rows.iter().flatten().copied().collect())
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be at least 1");
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Outer product `|a⟩⟨b|`.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        assert_eq!(a.len(), b.len(), "outer product of unequal lengths");
        let dim = a.len();
        let mut m = Self::zeros(dim);
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                m.data[i * dim + j] = ai * bj.conj();
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
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

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of the strictly off-diagonal part.
    pub fn off_diagonal_norm(&self) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += self.data[i * n + j].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self†`. NaN entries propagate.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                if d.is_nan() {
                    return f64::NAN;
                }
                worst = worst.max(d);
            }
        }
        worst
    }

    /// `(m + m†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            out.data[i * n + i] = C64::new(self.data[i * n + i].re, 0.0);
            for j in i + 1..n {
                let v = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
                out.data[i * n + j] = v;
                out.data[j * n + i] = v.conj();
            }
        }
        out
    }

    /// Kronecker product with `self`'s indices major.
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        let n = a * b;
        let mut out = Self::zeros(n);
        for i in 0..a {
            for j in 0..a {
                let s = self.data[i * a + j];
                if s == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        out.data[(i * b + k) * n + j * b + l] = s * other.data[k * b + l];
                    }
                }
            }
        }
        out
    }

    /// Largest entrywise deviation of `self† self` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// `u · self · u†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                let out_row = &mut out.data[i * n..(i + 1) * n];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
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
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Eigendecomposition `m = V · diag(λ) · V†` of a Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianEigen {
    /// Non-decreasing.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V · diag(f(λ)) · V†` for already transformed eigenvalues.
    pub fn compose(&self, values: &[f64]) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.dim();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = C64::new(0.0, 0.0);
                for (k, &lambda) in values.iter().enumerate() {
                    if lambda != 0.0 {
                        acc += v[(i, k)] * v[(j, k)].conj() * lambda;
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)] = C64::new(out[(i, i)].re, 0.0);
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.compose(&self.eigenvalues)
    }
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized as `(m + m†)/2` first. Sweeps visit the pairs
/// `(p, q)`, `p < q`, in row order, so the result is a deterministic function
/// of the input bits.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let deviation = m.hermitian_deviation();
    if !(deviation <= HERMITIAN_TOLERANCE) {
        return Err(Error::invalid(format!(
            "matrix is not Hermitian (max |m - m†| = {deviation:e})"
        )));
    }
    let n = m.dim();
    if m.as_slice().iter().all(|z| z.im == 0.0) {
        return real_symmetric_eigen(m);
    }
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = CONVERGENCE_FACTOR * (1.0 + a.frobenius_norm());

    let mut sweeps = 0;
    loop {
        let residual = a.off_diagonal_norm();
        if residual < threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NumericalFailure { residual, sweeps });
        }
        // Elements below `skip` cannot keep the residual above threshold.
        let skip = threshold / n as f64;
        for p in 0..n {
            for q in p + 1..n {
                if a[(p, q)].norm() >= skip {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
        sweeps += 1;
    }

    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    Ok(sorted_eigen(&diag, |row, col| v[(row, col)]))
}

/// Sorts eigenpairs by ascending eigenvalue; `vector(row, col)` reads the
/// unsorted eigenvector matrix.
fn sorted_eigen(diag: &[f64], vector: impl Fn(usize, usize) -> C64) -> HermitianEigen {
    let n = diag.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors[(row, col)] = vector(row, src);
        }
    }
    HermitianEigen {
        eigenvalues,
        eigenvectors,
    }
}

/// Real symmetric input: the same cyclic sweep in `f64` arithmetic.
fn real_symmetric_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = m.dim();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = 0.5 * (m[(i, j)].re + m[(j, i)].re);
        }
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = CONVERGENCE_FACTOR * (1.0 + norm);
    let off_norm = |a: &[f64]| {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += a[i * n + j] * a[i * n + j];
                }
            }
        }
        acc.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let residual = off_norm(&a);
        if residual < threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NumericalFailure { residual, sweeps });
        }
        let skip = threshold / n as f64;
        for p in 0..n {
            for q in p + 1..n {
                if a[p * n + q].abs() >= skip {
                    rotate_real(&mut a, &mut v, n, p, q);
                }
            }
        }
        sweeps += 1;
    }
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    Ok(sorted_eigen(&diag, |row, col| {
        C64::new(v[row * n + col], 0.0)
    }))
}

fn rotate_real(a: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for row in a.chunks_exact_mut(n) {
        let (akp, akq) = (row[p], row[q]);
        row[p] = c * akp - s * akq;
        row[q] = s * akp + c * akq;
    }
    let (head, tail) = a.split_at_mut(q * n);
    let row_p = &mut head[p * n..(p + 1) * n];
    let row_q = &mut tail[..n];
    for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
        let (apk, aqk) = (*x, *y);
        *x = c * apk - s * aqk;
        *y = s * apk + c * aqk;
    }
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;

    for row in v.chunks_exact_mut(n) {
        let (vkp, vkq) = (row[p], row[q]);
        row[p] = c * vkp - s * vkq;
        row[q] = s * vkp + c * vkq;
    }
}

/// One complex Jacobi rotation annihilating `a[p][q]`.
///
/// With `a[p][q] = r·e^{iφ}`, the phase `diag(1, e^{-iφ})` on `(p, q)` makes
/// the pair real, and a real rotation then zeroes it. The combined unitary
/// `G` is applied as `a ← G† a G`, `v ← v G`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = (apq / r).conj();
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = phase * -s;
    let g_qq = phase * c;

    let n = a.dim();
    let data = a.as_mut_slice();
    for row in data.chunks_exact_mut(n) {
        let (akp, akq) = (row[p], row[q]);
        row[p] = akp * g_pp + akq * g_qp;
        row[q] = akp * g_pq + akq * g_qq;
    }
    let (head, tail) = data.split_at_mut(q * n);
    let row_p = &mut head[p * n..(p + 1) * n];
    let row_q = &mut tail[..n];
    let (h_pp, h_qp, h_pq, h_qq) = (g_pp.conj(), g_qp.conj(), g_pq.conj(), g_qq.conj());
    for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
        let (apk, aqk) = (*x, *y);
        *x = h_pp * apk + h_qp * aqk;
        *y = h_pq * apk + h_qq * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for row in v.as_mut_slice().chunks_exact_mut(n) {
        let (vkp, vkq) = (row[p], row[q]);
        row[p] = vkp * g_pp + vkq * g_qp;
        row[q] = vkp * g_pq + vkq * g_qq;
    }
}

/// Clips round-off negatives in `[-CLIP_TOLERANCE, 0)` to zero.
#[inline]
pub fn clip_eigenvalue(lambda: f64) -> f64 {
    if (-CLIP_TOLERANCE..0.0).contains(&lambda) {
        0.0
    } else {
        lambda
    }
}

/// `V · diag(f(λ)) · V†` for Hermitian `m`.
///
/// `f` sees clipped eigenvalues (see [`clip_eigenvalue`]). A non-finite
/// `f(λ)` is reported as [`Error::Domain`] carrying the original eigenvalue.
pub fn apply_spectral_function<F>(m: &ComplexMatrix, f: F) -> Result<ComplexMatrix>
where
    F: Fn(f64) -> f64,
{
    let eig = hermitian_eigen(m)?;
    spectral_function_of(&eig, f)
}

/// As [`apply_spectral_function`] on an existing decomposition.
pub fn spectral_function_of<F>(eig: &HermitianEigen, f: F) -> Result<ComplexMatrix>
where
    F: Fn(f64) -> f64,
{
    let values = eig
        .eigenvalues
        .iter()
        .map(|&lambda| {
            let y = f(clip_eigenvalue(lambda));
            if y.is_finite() {
                Ok(y)
            } else {
                Err(Error::Domain { eigenvalue: lambda })
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(eig.compose(&values))
}
