//! Dense complex linear algebra on small matrices.
//!
//! Everything here works on [`Matrix`], a row-major array of `Complex64`.
//! Matrices are values: every operation returns a fresh matrix.

mod lu;
mod qr;
mod schur;
mod svd;
mod sylvester;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

pub use qr::{complete_basis, qr, random_unitary};
pub use schur::{schur, Schur};
pub use svd::{svd, Svd};
pub use sylvester::sylvester_solve;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Unit roundoff for `f64`.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row-major data, rejecting NaN/Inf entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols.max(1),
                col: pos % cols.max(1),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Convenience constructor for real square matrices given by rows.
    ///
    /// Panics if the rows are ragged; intended for literals.
    pub fn real(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix::from_fn(n, cols, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn complex(rows: &[&[C64]]) -> Self {
        let n = rows.len();
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix::from_fn(n, cols, |i, j| rows[i][j])
    }

    pub fn diag(values: &[C64]) -> Self {
        let n = values.len();
        Matrix::from_fn(n, n, |i, j| if i == j { values[i] } else { ZERO })
    }

    pub fn from_columns(rows: usize, columns: &[Vec<C64>]) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows));
        Matrix::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, c: C64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_re(&self, c: f64) -> Matrix {
        self.scale(C64::new(c, 0.0))
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul: {}x{} times {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `self^H * self`, computed on the upper triangle and mirrored so the
    /// result is exactly Hermitian.
    pub fn gram(&self) -> Matrix {
        let n = self.cols;
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = ZERO;
                for k in 0..self.rows {
                    acc += self[(k, i)].conj() * self[(k, j)];
                }
                if i == j {
                    out[(i, i)] = C64::new(acc.re, 0.0);
                } else {
                    out[(i, j)] = acc;
                    out[(j, i)] = acc.conj();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `A^k` by repeated multiplication; `A^0 = I`.
    pub fn pow(&self, k: usize) -> Matrix {
        assert!(self.is_square(), "pow of a non-square matrix");
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..k {
            acc = self.matmul(&acc);
        }
        acc
    }

    /// All powers `A^0, ..., A^k`.
    pub fn powers(&self, k: usize) -> Vec<Matrix> {
        let mut out = Vec::with_capacity(k + 1);
        out.push(Matrix::identity(self.rows));
        for j in 1..=k {
            let next = self.matmul(&out[j - 1]);
            out.push(next);
        }
        out
    }

    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let (r2, c2) = (rhs.rows, rhs.cols);
        Matrix::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            self[(i / r2, j / c2)] * rhs[(i % r2, j % c2)]
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        svd(self).singular_values[0]
    }

    pub fn singular_values(&self) -> Vec<f64> {
        svd(self).singular_values
    }

    /// Smallest singular value of a square matrix (0 for an empty one).
    pub fn min_singular_value(&self) -> f64 {
        self.singular_values().last().copied().unwrap_or(0.0)
    }

    /// Numerical rank: singular values above `rank_tol * sigma_max`.
    pub fn rank(&self, rank_tol: f64) -> usize {
        let s = self.singular_values();
        let cutoff = rank_tol * s.first().copied().unwrap_or(0.0);
        s.iter().filter(|&&v| v > cutoff && v > 0.0).count()
    }

    /// Eigenvalues with algebraic multiplicity, from the complex Schur form.
    pub fn spectrum(&self) -> Result<Vec<C64>> {
        Ok(schur(self)?.eigenvalues())
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        Ok(self.spectrum()?.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        lu::inverse(self)
    }

    /// Orthonormal bases for the column space and its orthogonal complement.
    pub fn range_basis(&self, rank_tol: f64) -> RangeSplit {
        range_split(self, rank_tol)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        Matrix::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Keeps the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])])
    }

    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows);
        Matrix::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                rhs[(i, j - self.cols)]
            }
        })
    }

    /// Assembles `[[a, b], [c, d]]`.
    pub fn block2x2(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let (r, c0) = (a.rows, a.cols);
        Matrix::from_fn(a.rows + c.rows, a.cols + b.cols, |i, j| match (i < r, j < c0) {
            (true, true) => a[(i, j)],
            (true, false) => b[(i, j - c0)],
            (false, true) => c[(i - r, j)],
            (false, false) => d[(i - r, j - c0)],
        })
    }

    pub fn direct_sum(&self, rhs: &Matrix) -> Matrix {
        Matrix::block2x2(
            self,
            &Matrix::zeros(self.rows, rhs.cols),
            &Matrix::zeros(rhs.rows, self.cols),
            rhs,
        )
    }

    /// `AB - BA`.
    pub fn commutator(&self, rhs: &Matrix) -> Matrix {
        &self.matmul(rhs) - &rhs.matmul(self)
    }

    /// `||A - A^H||_F`, zero for Hermitian matrices.
    pub fn hermitian_defect(&self) -> f64 {
        (self - &self.adjoint()).frobenius_norm()
    }
}

/// Orthonormal column bases of `R(A)` and `N(A^*)`; together they form a
/// unitary matrix.
#[derive(Clone, Debug)]
pub struct RangeSplit {
    pub range: Matrix,
    pub complement: Matrix,
}

impl RangeSplit {
    pub fn rank(&self) -> usize {
        self.range.cols()
    }

    /// `[range complement]`.
    pub fn unitary(&self) -> Matrix {
        self.range.hstack(&self.complement)
    }
}

fn range_split(a: &Matrix, rank_tol: f64) -> RangeSplit {
    let d = a.rows();
    if a.cols() == 0 || d == 0 {
        return RangeSplit {
            range: Matrix::zeros(d, 0),
            complement: Matrix::identity(d),
        };
    }
    let dec = svd(a);
    let cutoff = rank_tol * dec.singular_values[0];
    let r = dec
        .singular_values
        .iter()
        .filter(|&&s| s > cutoff && s > 0.0)
        .count();
    // Left singular vectors of the kept values, then a Householder completion
    // so that [U V] is unitary by construction.
    let kept: Vec<usize> = (0..r).collect();
    let u = dec.u.select_columns(&kept);
    let full = complete_basis(&u);
    let range = full.submatrix(0, d, 0, r);
    let complement = full.submatrix(0, d, r, d);
    RangeSplit { range, complement }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

fn zip_with(a: &Matrix, b: &Matrix, f: impl Fn(C64, C64) -> C64) -> Matrix {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols), "shape mismatch");
    Matrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(x, y)| f(*x, *y)).collect(),
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Add for Matrix {
    type Output = Matrix;
    fn add(self, rhs: Matrix) -> Matrix {
        &self + &rhs
    }
}

impl Sub for Matrix {
    type Output = Matrix;
    fn sub(self, rhs: Matrix) -> Matrix {
        &self - &rhs
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}

impl Mul for Matrix {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        self.matmul(&rhs)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale_re(-1.0)
    }
}

/// Euclidean inner product `<x, y> = sum conj(x_i) y_i`.
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm_sqr(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn adjoint_examples() {
        let j = Matrix::real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(j.adjoint(), Matrix::real(&[&[0.0, 0.0], &[1.0, 0.0]]));
        assert_eq!(Matrix::identity(3).adjoint(), Matrix::identity(3));
        let a = Matrix::diag(&[c(0.0, 1.0), ZERO]);
        assert_eq!(a.adjoint(), Matrix::diag(&[c(0.0, -1.0), ZERO]));
    }

    #[test]
    fn powers() {
        let a = Matrix::real(&[&[2.0, 1.0], &[0.0, 3.0]]);
        assert_eq!(a.pow(0), Matrix::identity(2));
        let j = Matrix::real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(j.pow(2), Matrix::zeros(2, 2));
        let t = Matrix::real(&[&[-1.0, -1.0], &[3.0, 2.0]]);
        assert_eq!(t.pow(3), Matrix::identity(2).scale_re(-1.0));
        let ps = a.powers(3);
        assert_eq!(ps[3], a.pow(3));
    }

    #[test]
    fn op_norm_examples() {
        assert!((Matrix::identity(2).op_norm() - 1.0).abs() < 1e-15);
        let a = Matrix::real(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!((a.op_norm() - 2.0).abs() < 1e-15);
        let j = Matrix::real(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((j.op_norm() - golden).abs() < 1e-14);
    }

    #[test]
    fn kron_examples() {
        let a = Matrix::real(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let k = Matrix::identity(2).kron(&a);
        assert_eq!(k, a.direct_sum(&a));
        let b = Matrix::identity(3);
        assert_eq!(a.kron(&b).rows(), 6);
    }

    #[test]
    fn gram_is_exactly_hermitian() {
        let a = Matrix::complex(&[&[c(1.0, 2.0), c(0.3, -1.0)], &[c(-0.7, 0.1), c(2.0, 0.5)]]);
        let g = a.gram();
        assert_eq!(g, g.adjoint());
        assert!((&g - &(&a.adjoint() * &a)).max_abs() < 1e-14);
    }

    #[test]
    fn range_basis_examples() {
        let j = Matrix::real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let split = j.range_basis(1e-10);
        assert_eq!(split.rank(), 1);
        assert!((split.range[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert!(split.range[(1, 0)].norm() < 1e-14);

        let inv = Matrix::real(&[&[2.0, 1.0], &[1.0, 3.0]]);
        let split = inv.range_basis(1e-10);
        assert_eq!(split.rank(), 2);
        assert_eq!(split.complement.cols(), 0);

        let z = Matrix::zeros(3, 3);
        let split = z.range_basis(1e-10);
        assert_eq!(split.rank(), 0);
        assert_eq!(split.complement.cols(), 3);
    }

    #[test]
    fn rejects_non_finite() {
        let err = Matrix::from_row_major(1, 1, vec![c(f64::NAN, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
        let err = Matrix::from_row_major(2, 2, vec![ONE; 3]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }
}
