//! Bartels-Stewart for `A X - X B = C` over the complex field.
//!
//! 1. Schur forms `A = Qa Ra Qa^H`, `B = Qb Rb Qb^H`.
//! 2. `F = Qa^H C Qb`.
//! 3. Column sweep: `(Ra - rb_jj I) y_j = f_j + sum_{k<j} rb_kj y_k`.
//! 4. `X = Qa Y Qb^H`.

use super::{schur, Matrix, C64, ZERO};
use crate::error::{Error, Result};

/// Solves `A X - X B = C`.
///
/// Refuses with [`Error::SpectraOverlap`] when some eigenvalue of `A` lies
/// within `separation_tol * (||A|| + ||B||)` of an eigenvalue of `B`.
pub fn sylvester_solve(a: &Matrix, b: &Matrix, c: &Matrix, separation_tol: f64) -> Result<Matrix> {
    assert!(a.is_square() && b.is_square());
    assert_eq!((c.rows(), c.cols()), (a.rows(), b.rows()), "C must be dim(A) x dim(B)");
    let (na, nb) = (a.rows(), b.rows());
    if na == 0 || nb == 0 {
        return Ok(Matrix::zeros(na, nb));
    }

    let sa = schur(a)?;
    let sb = schur(b)?;
    let ea = sa.eigenvalues();
    let eb = sb.eigenvalues();
    let threshold = separation_tol * (a.op_norm() + b.op_norm());
    let gap = ea
        .iter()
        .flat_map(|x| eb.iter().map(move |y| (x - y).norm()))
        .fold(f64::INFINITY, f64::min);
    if gap <= threshold {
        return Err(Error::SpectraOverlap { gap, threshold });
    }

    let ra = &sa.t;
    let rb = &sb.t;
    let f = &(&sa.z.adjoint() * c) * &sb.z;
    let mut y = Matrix::zeros(na, nb);
    for j in 0..nb {
        let mut rhs: Vec<C64> = (0..na).map(|i| f[(i, j)]).collect();
        for k in 0..j {
            let coef = rb[(k, j)];
            if coef == ZERO {
                continue;
            }
            for (i, r) in rhs.iter_mut().enumerate() {
                *r += coef * y[(i, k)];
            }
        }
        let shift = rb[(j, j)];
        // back substitution with (Ra - shift I)
        for i in (0..na).rev() {
            let mut acc = rhs[i];
            for l in (i + 1)..na {
                acc -= ra[(i, l)] * y[(l, j)];
            }
            y[(i, j)] = acc / (ra[(i, i)] - shift);
        }
    }
    Ok(&(&sa.z * &y) * &sb.z.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(a: &Matrix, b: &Matrix, c: &Matrix, x: &Matrix) -> f64 {
        (&(&a.matmul(x) - &x.matmul(b)) - c).op_norm()
    }

    #[test]
    fn scalar_case() {
        let a = Matrix::identity(2).scale_re(2.0);
        let b = Matrix::identity(2);
        let c = Matrix::identity(2);
        let x = sylvester_solve(&a, &b, &c, 1e-8).unwrap();
        assert!((&x - &Matrix::identity(2)).max_abs() < 1e-14);
    }

    #[test]
    fn overlapping_spectra_refused() {
        let i = Matrix::identity(2);
        let err = sylvester_solve(&i, &i, &i, 1e-8).unwrap_err();
        assert!(matches!(err, Error::SpectraOverlap { .. }));
    }

    #[test]
    fn rectangular_blocks() {
        let a = Matrix::real(&[&[2.0, 1.0, 0.5], &[0.0, -1.5, 1.0], &[0.3, 0.0, 3.0]]);
        let b = Matrix::real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let c = Matrix::real(&[&[1.0, 2.0], &[3.0, 4.0], &[5.0, 6.0]]);
        let x = sylvester_solve(&a, &b, &c, 1e-8).unwrap();
        assert!(residual(&a, &b, &c, &x) < 1e-12);
    }
}
