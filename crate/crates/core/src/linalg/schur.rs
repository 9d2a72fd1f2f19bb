//! Complex Schur decomposition `A = Z T Z^H`.
//!
//! Householder reduction to Hessenberg form, then single-shift QR sweeps with
//! Wilkinson shifts and Givens rotations. Exceptional shifts break the rare
//! cycles of the plain iteration.

use super::qr::householder;
use super::{Matrix, C64, ZERO};
use crate::error::{Error, Result};

const ITERS_PER_EIGENVALUE: usize = 60;

#[derive(Clone, Debug)]
pub struct Schur {
    /// Unitary.
    pub z: Matrix,
    /// Upper triangular.
    pub t: Matrix,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<C64> {
        (0..self.t.rows()).map(|i| self.t[(i, i)]).collect()
    }
}

pub fn schur(a: &Matrix) -> Result<Schur> {
    assert!(a.is_square(), "schur of a non-square matrix");
    let n = a.rows();
    let (mut h, mut z) = hessenberg(a);
    if n <= 1 {
        return Ok(Schur { z, t: h });
    }
    let scale = h.max_abs().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;

    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        // Deflation search.
        let mut lo = hi;
        while lo > 0 {
            let mut s = h[(lo - 1, lo - 1)].l1_norm() + h[(lo, lo)].l1_norm();
            if s == 0.0 {
                s = scale;
            }
            if h[(lo, lo - 1)].l1_norm() <= eps * s {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > ITERS_PER_EIGENVALUE * n {
            return Err(Error::NoConvergence {
                what: "Schur QR iteration",
            });
        }

        let mu = if iter.is_multiple_of(10) {
            // Exceptional shift.
            let t = h[(hi, hi - 1)].l1_norm()
                + if hi >= 2 { h[(hi - 1, hi - 2)].l1_norm() } else { 0.0 };
            h[(hi, hi)] + C64::new(0.75 * t, 0.4 * t)
        } else {
            wilkinson(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for k in lo..=hi {
            h[(k, k)] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let (x, y) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = ZERO;
            rots.push((c, s));
        }
        for (off, &(c, s)) in rots.iter().enumerate() {
            let k = lo + off;
            // Columns k, k+1 times G^H = [[c, -s], [conj(s), c]].
            for i in 0..=(k + 1).min(hi) {
                let (x, y) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = x * c + s.conj() * y;
                h[(i, k + 1)] = -s * x + y * c;
            }
            for i in 0..n {
                let (x, y) = (z[(i, k)], z[(i, k + 1)]);
                z[(i, k)] = x * c + s.conj() * y;
                z[(i, k + 1)] = -s * x + y * c;
            }
        }
        for k in lo..=hi {
            h[(k, k)] += mu;
        }
    }

    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok(Schur { z, t: h })
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let l1 = d + half + disc;
    let l2 = d + half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// `(c, s)` with `c` real so that `[[c, s], [-conj(s), c]] [a; b] = [r; 0]`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    if an == 0.0 {
        return (0.0, C64::new(1.0, 0.0));
    }
    let r = an.hypot(bn);
    let c = an / r;
    let s = (a / an) * b.conj() / r;
    (c, s)
}

/// `A = Q H Q^H` with `H` upper Hessenberg; returns `(H, Q)`.
fn hessenberg(a: &Matrix) -> (Matrix, Matrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = Matrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = ((k + 1)..n).map(|i| h[(i, k)]).collect();
        let Some(v) = householder(&x) else {
            continue;
        };
        let off = k + 1;
        for j in 0..n {
            let dot: C64 = (off..n).map(|i| v[i - off].conj() * h[(i, j)]).sum();
            for i in off..n {
                h[(i, j)] -= v[i - off] * dot * 2.0;
            }
        }
        for i in 0..n {
            let dot: C64 = (off..n).map(|l| h[(i, l)] * v[l - off]).sum();
            for l in off..n {
                h[(i, l)] -= dot * v[l - off].conj() * 2.0;
            }
        }
        for i in 0..n {
            let dot: C64 = (off..n).map(|l| q[(i, l)] * v[l - off]).sum();
            for l in off..n {
                q[(i, l)] -= dot * v[l - off].conj() * 2.0;
            }
        }
        for i in (k + 2)..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}
