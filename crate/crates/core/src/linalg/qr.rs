//! Householder QR, basis completion and Haar-random unitaries.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{Matrix, C64, ONE};

/// Full QR: `a = q * r` with `q` unitary (`rows x rows`) and `r` upper
/// trapezoidal.
pub fn qr(a: &Matrix) -> (Matrix, Matrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut r = a.clone();
    let mut q = Matrix::identity(m);
    for k in 0..n.min(m.saturating_sub(1)) {
        let x: Vec<C64> = (k..m).map(|i| r[(i, k)]).collect();
        let Some(v) = householder(&x) else {
            continue;
        };
        // r <- (I - 2 v v^H) r on rows k..m
        for j in 0..n {
            let dot: C64 = (k..m).map(|i| v[i - k].conj() * r[(i, j)]).sum();
            for i in k..m {
                r[(i, j)] -= v[i - k] * dot * 2.0;
            }
        }
        // q <- q (I - 2 v v^H) on columns k..m
        for i in 0..m {
            let dot: C64 = (k..m).map(|l| q[(i, l)] * v[l - k]).sum();
            for l in k..m {
                q[(i, l)] -= dot * v[l - k].conj() * 2.0;
            }
        }
    }
    (q, r)
}

/// Unit Householder vector `v` with `(I - 2 v v^H) x = alpha e_1`; `None`
/// when `x` is already a multiple of `e_1`.
pub(crate) fn householder(x: &[C64]) -> Option<Vec<C64>> {
    let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
    if norm == 0.0 || tail == 0.0 {
        return None;
    }
    let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
    let alpha = -phase * norm;
    let mut v = x.to_vec();
    v[0] -= alpha;
    let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= vn;
    }
    Some(v)
}

/// Extends orthonormal columns `u` (`d x r`) to a `d x d` unitary whose first
/// `r` columns span the same space as `u`.
pub fn complete_basis(u: &Matrix) -> Matrix {
    let d = u.rows();
    let r = u.cols();
    if r == 0 {
        return Matrix::identity(d);
    }
    let (q, rr) = qr(u);
    // Undo the phases Householder put on the diagonal so that the leading
    // columns equal u itself when u is already orthonormal.
    let mut q = q;
    for j in 0..r {
        let dj = rr[(j, j)];
        if dj.norm() > 0.0 {
            let ph = dj / dj.norm();
            for i in 0..d {
                q[(i, j)] *= ph;
            }
        }
    }
    q
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// diagonal phases of `R` folded back into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Matrix {
    let z = Matrix::from_fn(d, d, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let (q, r) = qr(&z);
    let mut q = q;
    for j in 0..d {
        let dj = r[(j, j)];
        let ph = if dj.norm() > 0.0 { dj / dj.norm() } else { ONE };
        for i in 0..d {
            q[(i, j)] *= ph;
        }
    }
    q
}
