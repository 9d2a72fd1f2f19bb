//! One-sided (Hestenes) Jacobi SVD for complex matrices.
//!
//! Columns of a working copy of `A` are rotated pairwise until mutually
//! orthogonal. Singular values come out with high relative accuracy, which
//! matters for the rank decisions on `T^n`.

use super::{inner, Matrix, C64, ONE, ZERO};

const MAX_SWEEPS: usize = 80;

#[derive(Clone, Debug)]
pub struct Svd {
    /// Left singular vectors, `rows x cols` (thin). Columns belonging to zero
    /// singular values are zero.
    pub u: Matrix,
    /// Descending.
    pub singular_values: Vec<f64>,
    /// Right singular vectors, `cols x cols`.
    pub v: Matrix,
}

pub fn svd(a: &Matrix) -> Svd {
    let (m, n) = (a.rows(), a.cols());
    // Work column-major: w[j] is column j of A V.
    let mut w: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { ONE } else { ZERO }).collect())
        .collect();
    let tol = f64::EPSILON * (m.max(1) as f64);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = w[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = inner(&w[p], &w[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // [w_p, w_q] <- [w_p, w_q] diag(1, e^{-i phi}) [[c, s], [-s, c]]
                let ph = phase.conj();
                rotate(&mut w, p, q, c, s, ph);
                rotate(&mut v, p, q, c, s, ph);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = w
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let u = Matrix::from_fn(m, n, |i, k| {
        let j = order[k];
        if norms[j] > 0.0 {
            w[j][i] / norms[j]
        } else {
            ZERO
        }
    });
    let v = Matrix::from_fn(n, n, |i, k| v[order[k]][i]);
    Svd {
        u,
        singular_values,
        v,
    }
}

fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, ph: C64) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yp = *y * ph;
        let nx = *x * c - yp * s;
        let ny = *x * s + yp * c;
        *x = nx;
        *y = ny;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(d: &Svd) -> Matrix {
        let s = Matrix::diag(
            &d.singular_values
                .iter()
                .map(|&x| C64::new(x, 0.0))
                .collect::<Vec<_>>(),
        );
        &(&d.u * &s) * &d.v.adjoint()
    }

    #[test]
    fn reconstructs_complex_matrix() {
        let a = Matrix::from_fn(4, 4, |i, j| {
            C64::new((i * 3 + j) as f64 * 0.37 - 1.0, ((i + 2 * j) % 5) as f64 * 0.21)
        });
        let d = svd(&a);
        assert!((&reconstruct(&d) - &a).max_abs() < 1e-13);
        let vv = d.v.adjoint().matmul(&d.v);
        assert!((&vv - &Matrix::identity(4)).max_abs() < 1e-14);
        assert!(d.singular_values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rank_deficient() {
        // rank one: outer product
        let a = Matrix::from_fn(3, 3, |i, j| C64::new((i + 1) as f64, 0.0) * C64::new(1.0, j as f64));
        let d = svd(&a);
        assert!(d.singular_values[1] < 1e-14 * d.singular_values[0]);
        assert_eq!(a.rank(1e-10), 1);
    }

    #[test]
    fn adjoint_has_same_norm() {
        let a = Matrix::from_fn(3, 3, |i, j| C64::new((i as f64 - j as f64).sin(), (i * j) as f64));
        let n1 = a.op_norm();
        let n2 = a.adjoint().op_norm();
        assert!((n1 - n2).abs() <= 1e-12 * n1);
    }
}
