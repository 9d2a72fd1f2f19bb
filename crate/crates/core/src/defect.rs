//! Defect operators `beta_m(T)`, `beta_{m,n}(T)` and the quadratic form
//! `Delta_{m,n}(T, x)`.
//!
//! Since `T^{*n} T^{*k} T^k T^n = (T^{k+n})^* T^{k+n}`, every defect is a signed
//! binomial combination of the Gram matrices `G_j = (T^j)^* T^j`. [`DefectCache`]
//! computes those once and serves the whole `(m, n)` lattice from them.

use serde::Serialize;

use crate::combinatorics::signed_binomial;
use crate::linalg::{norm_sqr, Matrix, C64};
use crate::tolerance::{scale_from_norms, Decision, ToleranceProfile};

/// Leading coordinate window `{e_1, ..., e_size}`.
///
/// Truncating an infinite operator to `C^N` disturbs the last few basis
/// vectors. A defect is then judged by its compression to the window, i.e. the
/// leading `size x size` block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub size: usize,
}

impl Window {
    pub fn leading(size: usize) -> Self {
        Window { size }
    }

    pub fn compress(&self, a: &Matrix) -> Matrix {
        let w = self.size.min(a.rows());
        a.submatrix(0, w, 0, w)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectReport {
    pub m: usize,
    pub n: usize,
    /// `beta_{m,n}(T)`, compressed to the window when one was given.
    #[serde(skip)]
    pub defect: Matrix,
    /// `||defect||_op`.
    pub residual: f64,
    pub scale: f64,
    /// `residual / scale`.
    pub normalized: f64,
    pub accepted: bool,
    pub decision: Decision,
}

/// `beta_m(T) = sum_k (-1)^{m-k} C(m,k) T^{*k} T^k`. `beta_0(T) = I`.
pub fn beta(t: &Matrix, m: usize) -> Matrix {
    DefectCache::new(t, m).beta_mn(m, 0)
}

/// `beta_{m,n}(T) = T^{*n} beta_m(T) T^n` with its acceptance decision.
pub fn beta_qn(t: &Matrix, m: usize, n: usize, tol: &ToleranceProfile) -> DefectReport {
    beta_qn_on(t, m, n, tol, None)
}

/// As [`beta_qn`], judged on a coordinate window.
pub fn beta_qn_on(
    t: &Matrix,
    m: usize,
    n: usize,
    tol: &ToleranceProfile,
    window: Option<Window>,
) -> DefectReport {
    DefectCache::new(t, m + n).report(m, n, tol, window)
}

/// `Delta_{m,n}(T, x) = sum_k (-1)^{m-k} C(m,k) ||T^{k+n} x||^2`.
pub fn delta(t: &Matrix, m: usize, n: usize, x: &[C64]) -> f64 {
    assert_eq!(x.len(), t.rows(), "vector length must equal dim(T)");
    let seq = norm_sequence(t, x, n, m.max(1));
    (0..=m).map(|k| signed_binomial(m, k) * seq.values[k]).sum()
}

/// `a_k = ||T^{n+k} x||^2` for `k = 0..=len`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormSequence {
    pub offset: usize,
    pub values: Vec<f64>,
}

pub fn norm_sequence(t: &Matrix, x: &[C64], n: usize, len: usize) -> NormSequence {
    assert_eq!(x.len(), t.rows(), "vector length must equal dim(T)");
    let mut v = x.to_vec();
    for _ in 0..n {
        v = t.mul_vec(&v);
    }
    let mut values = Vec::with_capacity(len + 1);
    values.push(norm_sqr(&v));
    for _ in 0..len {
        v = t.mul_vec(&v);
        values.push(norm_sqr(&v));
    }
    NormSequence { offset: n, values }
}

/// Powers of `T`, their Gram matrices and norms up to a fixed exponent.
#[derive(Clone, Debug)]
pub struct DefectCache {
    powers: Vec<Matrix>,
    grams: Vec<Matrix>,
    norms: Vec<f64>,
}

impl DefectCache {
    /// Caches `T^j` for `j = 0..=max_power`.
    pub fn new(t: &Matrix, max_power: usize) -> Self {
        assert!(t.is_square(), "defects need a square matrix");
        let powers = t.powers(max_power);
        let grams = powers.iter().map(Matrix::gram).collect();
        let norms = powers.iter().map(Matrix::op_norm).collect();
        DefectCache {
            powers,
            grams,
            norms,
        }
    }

    pub fn max_power(&self) -> usize {
        self.powers.len() - 1
    }

    pub fn power(&self, j: usize) -> &Matrix {
        &self.powers[j]
    }

    pub fn power_norm(&self, j: usize) -> f64 {
        self.norms[j]
    }

    /// `beta_{m,n}(T)`; needs `m + n <= max_power`.
    pub fn beta_mn(&self, m: usize, n: usize) -> Matrix {
        assert!(m + n <= self.max_power(), "power cache too short");
        let d = self.powers[0].rows();
        let mut acc = Matrix::zeros(d, d);
        for k in 0..=m {
            acc = &acc + &self.grams[k + n].scale_re(signed_binomial(m, k));
        }
        acc
    }

    pub fn scale(&self, m: usize, n: usize) -> f64 {
        scale_from_norms(&self.norms, m, n)
    }

    pub fn report(
        &self,
        m: usize,
        n: usize,
        tol: &ToleranceProfile,
        window: Option<Window>,
    ) -> DefectReport {
        let full = self.beta_mn(m, n);
        let defect = match window {
            Some(w) => w.compress(&full),
            None => full,
        };
        let residual = defect.op_norm();
        let scale = self.scale(m, n);
        let normalized = residual / scale;
        DefectReport {
            m,
            n,
            defect,
            residual,
            scale,
            normalized,
            accepted: tol.accept(normalized),
            decision: tol.decide(normalized),
        }
    }
}
