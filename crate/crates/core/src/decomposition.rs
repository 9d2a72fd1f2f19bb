//! Block form of `T` on `cl R(T^n) (+) N(T^{*n})`:
//!
//! ```text
//! T = | T1  T2 |
//!     | 0   T3 |
//! ```
//!
//! `T` is n-quasi-m-isometric exactly when `T1` is m-isometric and
//! `T3^n = 0`. When `T1` is invertible, a Sylvester solve removes `T2`.

use crate::classifier::clusters;
use crate::defect::{DefectCache, Window};
use crate::error::{Error, Result};
use crate::linalg::{schur, sylvester_solve, Matrix, C64, UNIT_ROUNDOFF};
use crate::tolerance::ToleranceProfile;

#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub n: usize,
    /// Orthonormal basis of `cl R(T^n)`, `d x r`.
    pub u: Matrix,
    /// Orthonormal basis of `N(T^{*n})`, `d x (d - r)`.
    pub v: Matrix,
    pub t1: Matrix,
    pub t2: Matrix,
    pub t3: Matrix,
    /// `||V^* T U||`, zero in exact arithmetic.
    pub lower_residual: f64,
    /// `||T||`, kept for normalizing block checks.
    pub t_norm: f64,
}

impl BlockDecomposition {
    pub fn dim(&self) -> usize {
        self.u.rows()
    }

    pub fn rank(&self) -> usize {
        self.u.cols()
    }

    /// `[U V]`.
    pub fn basis(&self) -> Matrix {
        self.u.hstack(&self.v)
    }

    /// `T` expressed in the basis `[U V]`, lower-left block included.
    pub fn rotated(&self, t: &Matrix) -> Matrix {
        let w = self.basis();
        w.adjoint().matmul(&t.matmul(&w))
    }
}

pub fn block_decompose(t: &Matrix, n: usize, tol: &ToleranceProfile) -> BlockDecomposition {
    let split = t.pow(n).range_basis(tol.rank_tol);
    let (u, v) = (split.range, split.complement);
    let tu = t.matmul(&u);
    let tv = t.matmul(&v);
    let t1 = u.adjoint().matmul(&tu);
    let t2 = u.adjoint().matmul(&tv);
    let t3 = v.adjoint().matmul(&tv);
    let lower_residual = v.adjoint().matmul(&tu).op_norm();
    BlockDecomposition {
        n,
        u,
        v,
        t1,
        t2,
        t3,
        lower_residual,
        t_norm: t.op_norm(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockFormCheck {
    pub t1_m_isometric: bool,
    pub t3_nilpotent_n: bool,
    /// Normalized `||beta_m(T1)||`.
    pub t1_residual: f64,
    /// `||T3^n|| / max(1, ||T||^n)`.
    pub t3_residual: f64,
    /// Lower block relative to `1 + ||T||`.
    pub lower_residual: f64,
    /// `r = 0` or `r = d`: at least one block is empty.
    pub degenerate: bool,
}

impl BlockFormCheck {
    pub fn holds(&self) -> bool {
        self.t1_m_isometric && self.t3_nilpotent_n
    }
}

/// Checks `beta_m(T1) = 0` and `T3^n = 0`. Empty blocks pass vacuously.
pub fn verify_block_form(d: &BlockDecomposition, m: usize, tol: &ToleranceProfile) -> BlockFormCheck {
    verify_block_form_on(d, m, tol, None)
}

/// As [`verify_block_form`], with both blocks compressed to the parts of
/// their subspaces that lie inside a coordinate window.
pub fn verify_block_form_on(
    d: &BlockDecomposition,
    m: usize,
    tol: &ToleranceProfile,
    window: Option<Window>,
) -> BlockFormCheck {
    let restrict = |basis: &Matrix| -> Matrix {
        match window {
            Some(w) => window_intersection(basis, w),
            None => Matrix::identity(basis.cols()),
        }
    };
    let y1 = restrict(&d.u);
    let y3 = restrict(&d.v);

    let t1_residual = if d.t1.rows() == 0 || y1.cols() == 0 {
        0.0
    } else {
        let cache = DefectCache::new(&d.t1, m);
        let b = cache.beta_mn(m, 0);
        y1.adjoint().matmul(&b.matmul(&y1)).op_norm() / cache.scale(m, 0)
    };
    let t3_residual = if d.t3.rows() == 0 || y3.cols() == 0 {
        0.0
    } else {
        let p = d.t3.pow(d.n);
        let norm = p.matmul(&y3).op_norm();
        norm / d.t_norm.powi(d.n as i32).max(1.0)
    };
    let lower_residual = d.lower_residual / (1.0 + d.t_norm);
    BlockFormCheck {
        t1_m_isometric: tol.accept(t1_residual),
        t3_nilpotent_n: tol.accept(t3_residual),
        t1_residual,
        t3_residual,
        lower_residual,
        degenerate: d.rank() == 0 || d.rank() == d.dim(),
    }
}

/// Coordinates (in `basis`) of an orthonormal basis of
/// `span(basis) ∩ span{e_1, ..., e_w}`: eigenvectors of `B^* P_W B` with
/// eigenvalue one.
fn window_intersection(basis: &Matrix, w: Window) -> Matrix {
    let k = basis.cols();
    if k == 0 {
        return Matrix::zeros(0, 0);
    }
    let rows = w.size.min(basis.rows());
    let top = basis.submatrix(0, rows, 0, k);
    let g = top.gram();
    let Ok(s) = schur(&g) else {
        return Matrix::zeros(k, 0);
    };
    let keep: Vec<usize> = (0..k).filter(|&i| s.t[(i, i)].re > 1.0 - 1e-8).collect();
    s.z.select_columns(&keep)
}

#[derive(Clone, Debug)]
pub struct SimilaritySplit {
    pub decomposition: BlockDecomposition,
    /// Solution of `T1 A - A T3 = T2`.
    pub a: Matrix,
    /// `[[I, A], [0, I]]` in the basis `[U V]`.
    pub x: Matrix,
    /// `diag(T1, T3)`.
    pub block_diag: Matrix,
    /// `||X T~ X^{-1} - diag(T1, T3)||` with `T~` the rotated `T`.
    pub residual: f64,
    /// `||X|| ||X^{-1}||`.
    pub cond_x: f64,
}

impl SimilaritySplit {
    /// `X` mapped back to the original coordinates, so that
    /// `X_full T X_full^{-1} = W diag(T1, T3) W^*`.
    pub fn x_original(&self) -> Matrix {
        let w = self.decomposition.basis();
        w.matmul(&self.x.matmul(&w.adjoint()))
    }
}

/// Similarity `T ~ T1 (+) T3`. Requires `T1` invertible and the spectra of
/// `T1` and `T3` separated.
pub fn similarity_split(t: &Matrix, n: usize, tol: &ToleranceProfile) -> Result<SimilaritySplit> {
    let dec = block_decompose(t, n, tol);
    let (r, d) = (dec.rank(), dec.dim());
    if r > 0 {
        let sigma_min = dec.t1.min_singular_value();
        if sigma_min <= tol.sylvester_sep * (1.0 + dec.t_norm) {
            return Err(Error::T1Singular { sigma_min });
        }
    }
    let a = sylvester_solve(&dec.t1, &dec.t3, &dec.t2, tol.sylvester_sep)?;
    let x = Matrix::block2x2(
        &Matrix::identity(r),
        &a,
        &Matrix::zeros(d - r, r),
        &Matrix::identity(d - r),
    );
    let x_inv = Matrix::block2x2(
        &Matrix::identity(r),
        &(-&a),
        &Matrix::zeros(d - r, r),
        &Matrix::identity(d - r),
    );
    let block_diag = dec.t1.direct_sum(&dec.t3);
    let rotated = dec.rotated(t);
    let residual = (&x.matmul(&rotated.matmul(&x_inv)) - &block_diag).op_norm();
    let cond_x = x.op_norm() * x_inv.op_norm();
    Ok(SimilaritySplit {
        decomposition: dec,
        a,
        x,
        block_diag,
        residual,
        cond_x,
    })
}

#[derive(Clone, Debug)]
pub struct SpectralReport {
    pub sigma_t: Vec<C64>,
    pub sigma_t1: Vec<C64>,
    /// `sigma(T) = sigma(T1) ∪ {0, ..., 0}` as multisets.
    pub union_check: bool,
    pub t1_min_singular: f64,
    /// Every eigenvalue of `T1` has modulus one.
    pub t1_unimodular_check: bool,
    /// Matching radius used for both checks.
    pub radius: f64,
    pub rank: usize,
}

/// Matching radius for eigenvalues of a `d x d` operator of norm `norm`.
/// Eigenvalues in a Jordan block of size `k` are only determined to about
/// `u^{1/k}`, so the radius grows with the dimension.
pub fn eigen_match_radius(d: usize, norm: f64, tol: &ToleranceProfile) -> f64 {
    let defective = (8.0 * d.max(1) as f64 * UNIT_ROUNDOFF).powf(1.0 / d.max(1) as f64);
    (1.0 + norm) * tol.eig_match.max(defective)
}

pub fn spectral_report(t: &Matrix, n: usize, tol: &ToleranceProfile) -> Result<SpectralReport> {
    let dec = block_decompose(t, n, tol);
    let d = dec.dim();
    let sigma_t = t.spectrum()?;
    let sigma_t1 = dec.t1.spectrum()?;
    let radius = eigen_match_radius(d, dec.t_norm, tol);
    let mut target = sigma_t1.clone();
    target.resize(d, C64::new(0.0, 0.0));
    let union_check = multiset_match(&sigma_t, &target, radius);
    // Eigenvalues of T1 sitting in one Jordan block spread around a circle of
    // radius ~u^{1/k}; their mean is accurate.
    let t1_unimodular_check = clusters(&sigma_t1, radius)
        .iter()
        .all(|c| ((c.iter().sum::<C64>() / c.len() as f64).norm() - 1.0).abs() <= radius);
    Ok(SpectralReport {
        sigma_t,
        sigma_t1,
        union_check,
        t1_min_singular: dec.t1.min_singular_value(),
        t1_unimodular_check,
        radius,
        rank: dec.rank(),
    })
}

/// Greedy nearest-pair matching of two equally sized multisets.
pub fn multiset_match(a: &[C64], b: &[C64], radius: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut matched = 0;
    for (dist, i, j) in pairs {
        if used_a[i] || used_b[j] {
            continue;
        }
        if dist > radius {
            return false;
        }
        used_a[i] = true;
        used_b[j] = true;
        matched += 1;
    }
    matched == a.len()
}
