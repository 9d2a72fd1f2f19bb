//! Membership, minimal `(m, n)` profiles, strictness and the upgrade
//! conditions.

use serde::Serialize;

use crate::defect::{DefectCache, DefectReport, Window};
use crate::error::Result;
use crate::linalg::{svd, Matrix, C64};
use crate::tolerance::ToleranceProfile;

/// Whether `T` is n-quasi-m-isometric at tolerance, with the evidence.
pub fn is_nqmi(t: &Matrix, m: usize, n: usize, tol: &ToleranceProfile) -> (bool, DefectReport) {
    is_nqmi_on(t, m, n, tol, None)
}

pub fn is_nqmi_on(
    t: &Matrix,
    m: usize,
    n: usize,
    tol: &ToleranceProfile,
    window: Option<Window>,
) -> (bool, DefectReport) {
    let r = DefectCache::new(t, m + n).report(m, n, tol, window);
    (r.accepted, r)
}

/// Accepted at `(m, n)` and rejected, beyond the hysteresis band, at
/// `(m - 1, n)`. For `m = 1` the lower row is `beta_{0,n} = T^{*n} T^n`, so
/// strictness means `T^n != 0`.
pub fn is_strict(t: &Matrix, m: usize, n: usize, tol: &ToleranceProfile) -> bool {
    is_strict_on(t, m, n, tol, None)
}

pub fn is_strict_on(
    t: &Matrix,
    m: usize,
    n: usize,
    tol: &ToleranceProfile,
    window: Option<Window>,
) -> bool {
    assert!(m >= 1, "strictness needs m >= 1");
    let cache = DefectCache::new(t, m + n);
    let upper = cache.report(m, n, tol, window);
    let lower = cache.report(m - 1, n, tol, window);
    upper.accepted && tol.decided_reject(lower.normalized)
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiProfile {
    pub m_max: usize,
    pub n_max: usize,
    /// `staircase[n]`: least accepted `m` in `1..=m_max`, if any.
    pub staircase: Vec<Option<usize>>,
    /// `(m, n)` pairs that are strict.
    pub strict_pairs: Vec<(usize, usize)>,
    /// `residual_table[m - 1][n]`: normalized residual of `beta_{m,n}`.
    pub residual_table: Vec<Vec<f64>>,
    /// Normalized residual of `beta_{0,n} = T^{*n} T^n`.
    pub zero_row: Vec<f64>,
    /// Cells of the table inside the hysteresis band.
    pub band_cells: usize,
}

impl QuasiProfile {
    pub fn residual(&self, m: usize, n: usize) -> f64 {
        if m == 0 {
            self.zero_row[n]
        } else {
            self.residual_table[m - 1][n]
        }
    }

    pub fn is_strict(&self, m: usize, n: usize) -> bool {
        self.strict_pairs.contains(&(m, n))
    }

    /// Staircase is nonincreasing in `n` (absent counts as infinite).
    pub fn is_monotone(&self) -> bool {
        let key = |s: Option<usize>| s.unwrap_or(usize::MAX);
        self.staircase.windows(2).all(|w| key(w[1]) <= key(w[0]))
    }
}

pub fn minimal_profile(t: &Matrix, m_max: usize, n_max: usize, tol: &ToleranceProfile) -> QuasiProfile {
    minimal_profile_on(t, m_max, n_max, tol, None)
}

pub fn minimal_profile_on(
    t: &Matrix,
    m_max: usize,
    n_max: usize,
    tol: &ToleranceProfile,
    window: Option<Window>,
) -> QuasiProfile {
    assert!(m_max >= 1, "m_max must be at least 1");
    let cache = DefectCache::new(t, m_max + n_max);
    let cell = |m: usize, n: usize| cache.report(m, n, tol, window).normalized;
    let zero_row: Vec<f64> = (0..=n_max).map(|n| cell(0, n)).collect();
    let residual_table: Vec<Vec<f64>> = (1..=m_max)
        .map(|m| (0..=n_max).map(|n| cell(m, n)).collect())
        .collect();

    let residual = |m: usize, n: usize| {
        if m == 0 {
            zero_row[n]
        } else {
            residual_table[m - 1][n]
        }
    };
    let staircase = (0..=n_max)
        .map(|n| (1..=m_max).find(|&m| tol.accept(residual(m, n))))
        .collect();
    let mut strict_pairs = Vec::new();
    for n in 0..=n_max {
        for m in 1..=m_max {
            if tol.accept(residual(m, n)) && tol.decided_reject(residual(m - 1, n)) {
                strict_pairs.push((m, n));
            }
        }
    }
    let band_cells = residual_table
        .iter()
        .flatten()
        .filter(|&&r| !tol.accept(r) && !tol.decided_reject(r))
        .count();
    QuasiProfile {
        m_max,
        n_max,
        staircase,
        strict_pairs,
        residual_table,
        zero_row,
        band_cells,
    }
}

/// Largest principal angle between the column spans of two orthonormal
/// bases of equal width, via `sin(theta) = ||(I - V1 V1^*) V2||`.
pub fn max_principal_angle(v1: &Matrix, v2: &Matrix) -> f64 {
    if v2.cols() == 0 {
        return 0.0;
    }
    let proj = &v1.matmul(&v1.adjoint().matmul(v2));
    let s = (v2 - proj).op_norm();
    s.clamp(0.0, 1.0).asin()
}

/// `N(T^*) = N(T^{*2})`, compared by dimension and then principal angle.
pub fn kernel_condition(t: &Matrix, tol: &ToleranceProfile) -> bool {
    let k1 = t.range_basis(tol.rank_tol).complement;
    let k2 = t.pow(2).range_basis(tol.rank_tol).complement;
    k1.cols() == k2.cols() && max_principal_angle(&k1, &k2) < tol.angle_tol
}

/// Finite-dimensional power boundedness: spectral radius below one, or at
/// most one with every peripheral eigenvalue semisimple.
pub fn power_bounded(t: &Matrix, tol: &ToleranceProfile) -> Result<bool> {
    let d = t.rows();
    let spec = t.spectrum()?;
    let rho = spec.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let delta = tol.eig_match;
    if rho < 1.0 - delta {
        return Ok(true);
    }
    if rho > 1.0 + delta {
        return Ok(false);
    }
    let radius = tol.eigen_radius(t.op_norm());
    for cluster in clusters(&spec, radius) {
        let lambda = cluster.iter().sum::<C64>() / cluster.len() as f64;
        if lambda.norm() < 1.0 - delta {
            continue;
        }
        let shifted = t - &Matrix::identity(d).scale(lambda);
        let geometric = d - shifted.rank(tol.rank_tol);
        if geometric < cluster.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Groups eigenvalues lying within `radius` of each other (single linkage).
pub(crate) fn clusters(values: &[C64], radius: f64) -> Vec<Vec<C64>> {
    let mut label: Vec<usize> = (0..values.len()).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            if (values[i] - values[j]).norm() <= radius {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<(usize, Vec<C64>)> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        let root = find(&mut label, i);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, g)) => g.push(v),
            None => groups.push((root, vec![v])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Independence {
    pub rank: usize,
    pub independent: bool,
}

/// Rank of `{beta_{k,n}(T) : k = 0..m-1}` after vectorizing and normalizing
/// each member.
pub fn beta_independence(t: &Matrix, m: usize, n: usize, tol: &ToleranceProfile) -> Independence {
    assert!(m >= 1, "independence needs m >= 1");
    let d = t.rows();
    let cache = DefectCache::new(t, m - 1 + n);
    let columns: Vec<Vec<C64>> = (0..m)
        .map(|k| {
            let b = cache.beta_mn(k, n);
            let norm = b.frobenius_norm();
            let mut v = b.as_slice().to_vec();
            if norm > 0.0 {
                v.iter_mut().for_each(|z| *z /= norm);
            }
            v
        })
        .collect();
    let stack = Matrix::from_columns(d * d, &columns);
    let cutoff = tol.hysteresis * tol.eps_rel;
    let rank = svd(&stack)
        .singular_values
        .iter()
        .filter(|&&s| s > cutoff)
        .count();
    Independence {
        rank,
        independent: rank == m,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    fn jordan() -> Matrix {
        Matrix::real(&[&[1.0, 1.0], &[0.0, 1.0]])
    }

    fn nil2() -> Matrix {
        Matrix::real(&[&[0.0, 1.0], &[0.0, 0.0]])
    }

    #[test]
    fn membership_examples() {
        assert!(is_nqmi(&jordan(), 3, 1, &tol()).0);
        assert!(!is_nqmi(&jordan(), 2, 1, &tol()).0);
        let s = Matrix::real(&[&[2.0, 1.0], &[-1.0, 0.0]]);
        assert!(is_nqmi(&s, 3, 2, &tol()).0);
    }

    #[test]
    fn profiles() {
        let p = minimal_profile(&nil2(), 5, 3, &tol());
        assert_eq!(p.staircase, vec![None, None, Some(1), Some(1)]);
        let p = minimal_profile(&jordan(), 5, 2, &tol());
        assert_eq!(p.staircase, vec![Some(3); 3]);
        assert!(p.is_strict(3, 0) && p.is_strict(3, 1) && p.is_strict(3, 2));
        assert!(p.is_monotone());
        let u = Matrix::real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let p = minimal_profile(&u, 3, 2, &tol());
        assert_eq!(p.staircase, vec![Some(1); 3]);
    }

    #[test]
    fn strictness() {
        assert!(is_strict(&jordan(), 3, 1, &tol()));
        assert!(!is_strict(&jordan(), 4, 1, &tol()));
        assert!(!is_strict(&Matrix::identity(2), 2, 0, &tol()));
        assert!(is_strict(&Matrix::identity(2), 1, 0, &tol()));
        assert!(!is_strict(&nil2(), 1, 2, &tol()));
    }

    #[test]
    fn kernels() {
        assert!(!kernel_condition(&nil2(), &tol()));
        assert!(kernel_condition(&jordan(), &tol()));
        let normal = Matrix::real(&[&[0.0, 0.0], &[0.0, 2.0]]);
        assert!(kernel_condition(&normal, &tol()));
    }

    #[test]
    fn power_boundedness() {
        let u = Matrix::real(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert!(power_bounded(&u, &tol()).unwrap());
        assert!(!power_bounded(&jordan(), &tol()).unwrap());
        let d = Matrix::real(&[&[0.5, 0.0], &[0.0, 1.0]]);
        assert!(power_bounded(&d, &tol()).unwrap());
        assert!(power_bounded(&nil2(), &tol()).unwrap());
        assert!(!power_bounded(&Matrix::identity(2).scale_re(1.1), &tol()).unwrap());
    }

    #[test]
    fn independence() {
        assert_eq!(beta_independence(&jordan(), 3, 1, &tol()).rank, 3);
        assert!(!beta_independence(&Matrix::identity(2), 2, 1, &tol()).independent);
        let j = beta_independence(&nil2(), 2, 1, &tol());
        assert_eq!(j.rank, 1);
        assert!(!j.independent);
    }
}
