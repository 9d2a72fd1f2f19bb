//! Matrix factories: catalog examples, truncated weighted shifts, nilpotent
//! Jordan forms, isometry-plus-nilpotent generators and block bidiagonal
//! operators.

use crate::classifier::minimal_profile_on;
use crate::defect::Window;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, C64, ONE};
use crate::tolerance::ToleranceProfile;

/// Weighted shift `T e_k = w_k e_{k+1}` truncated to `C^dim` with
/// `e_dim -> 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftSpec {
    /// `weights[k]` is `w_{k+1}`; at least `dim - 1` entries are used.
    pub weights: Vec<f64>,
    pub dim: usize,
    /// Membership at `(m, n)` is only judged on `{e_1, ..., e_{dim - margin}}`
    /// and only for `m + n <= margin`.
    pub interior_margin: usize,
}

impl ShiftSpec {
    pub fn from_fn(dim: usize, interior_margin: usize, w: impl Fn(usize) -> f64) -> Self {
        ShiftSpec {
            weights: (1..dim).map(w).collect(),
            dim,
            interior_margin,
        }
    }

    /// `T e_1 = 2 e_2`, `T e_2 = 3 e_3`, `T e_k = e_{k+1}` otherwise.
    pub fn two_three(dim: usize) -> Self {
        Self::from_fn(dim, dim / 2, |k| match k {
            1 => 2.0,
            2 => 3.0,
            _ => 1.0,
        })
    }

    /// `T e_1 = a e_2`, `T e_p = sqrt((p+1)/p) e_{p+1}` for `p >= 2`.
    pub fn root_ratio(a: f64, dim: usize) -> Self {
        Self::from_fn(dim, dim / 2, |p| {
            if p == 1 {
                a
            } else {
                ((p as f64 + 1.0) / p as f64).sqrt()
            }
        })
    }

    pub fn window(&self) -> Window {
        Window::leading(self.dim.saturating_sub(self.interior_margin))
    }
}

pub fn truncated_weighted_shift(spec: &ShiftSpec) -> Result<Matrix> {
    let n = spec.dim;
    if n < 2 {
        return Err(Error::InvalidArgument("shift truncation needs dim >= 2".into()));
    }
    if spec.weights.len() < n - 1 {
        return Err(Error::InvalidArgument(format!(
            "{} weights given, {} needed",
            spec.weights.len(),
            n - 1
        )));
    }
    if let Some(w) = spec.weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
        return Err(Error::InvalidArgument(format!("shift weight {w} is not positive")));
    }
    if spec.interior_margin >= n {
        return Err(Error::InvalidArgument("interior window is empty".into()));
    }
    let mut t = Matrix::zeros(n, n);
    for k in 0..n - 1 {
        t[(k + 1, k)] = C64::new(spec.weights[k], 0.0);
    }
    Ok(t)
}

/// Direct sum of Jordan blocks of size `p` plus one smaller block for the
/// remainder, so that `Q^p = 0 != Q^{p-1}`.
pub fn nilpotent_jordan(dim: usize, p: usize) -> Result<Matrix> {
    if p == 0 || p > dim {
        return Err(Error::InvalidArgument(format!(
            "nilpotency order {p} must lie in 1..={dim}"
        )));
    }
    Ok(Matrix::from_fn(dim, dim, |i, j| {
        if j == i + 1 && j % p != 0 {
            ONE
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// `phase * I + Q` with `Q` from [`nilpotent_jordan`]; a strict
/// `(2p - 1)`-isometry. Returns the matrix and its expected `(m, n)`.
pub fn isometry_plus_nilpotent(dim: usize, p: usize, phase: C64) -> Result<(Matrix, (usize, usize))> {
    if (phase.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument("phase must be unimodular".into()));
    }
    let q = nilpotent_jordan(dim, p)?;
    Ok((&Matrix::identity(dim).scale(phase) + &q, (2 * p - 1, 0)))
}

/// Block upper bidiagonal operator with `operators` on the diagonal and
/// `alphas[j] * I` on the superdiagonal.
pub fn block_corollary_s(operators: &[Matrix], alphas: &[C64]) -> Result<Matrix> {
    let Some(first) = operators.first() else {
        return Err(Error::InvalidArgument("at least one block is required".into()));
    };
    let h = first.rows();
    if let Some(bad) = operators.iter().find(|t| !t.is_square() || t.rows() != h) {
        return Err(Error::DimensionMismatch {
            expected: h,
            found: bad.rows(),
        });
    }
    if alphas.len() + 1 != operators.len() {
        return Err(Error::DimensionMismatch {
            expected: operators.len() - 1,
            found: alphas.len(),
        });
    }
    let d = operators.len();
    let mut s = Matrix::zeros(h * d, h * d);
    for (b, t) in operators.iter().enumerate() {
        for i in 0..h {
            for j in 0..h {
                s[(b * h + i, b * h + j)] = t[(i, j)];
            }
            if b + 1 < d {
                s[(b * h + i, (b + 1) * h + i)] = alphas[b];
            }
        }
    }
    Ok(s)
}

/// Staircase `m(n)` for `n = 0..=3` with `m` searched in `1..=5`.
pub type Staircase = [Option<usize>; 4];

pub const CATALOG_M_MAX: usize = 5;
pub const CATALOG_N_MAX: usize = 3;
pub const DEFAULT_SHIFT_DIM: usize = 16;

pub const CATALOG_IDS: &[&str] = &[
    "nilpotent2",
    "jordan_unit",
    "cube_minus_identity",
    "product_pair",
    "noncommuting_sum",
    "shift_2q2i",
    "shift_quasi_strict2",
];

#[derive(Clone, Debug)]
pub struct CatalogMatrix {
    pub label: &'static str,
    pub matrix: Matrix,
    /// What the classifier must find.
    pub expected: Staircase,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub claim: &'static str,
    pub members: Vec<CatalogMatrix>,
    pub interior_margin: Option<usize>,
    /// Set when the recorded claim disagrees with direct computation; the
    /// expected staircases then hold the computed verdict.
    pub discrepancy: Option<&'static str>,
    pub verify_on_load: bool,
}

impl CatalogEntry {
    pub fn window(&self) -> Option<Window> {
        self.interior_margin
            .map(|m| Window::leading(self.members[0].matrix.rows() - m))
    }
}

pub fn catalog_example(id: &str) -> Result<CatalogEntry> {
    catalog_example_sized(id, DEFAULT_SHIFT_DIM)
}

/// As [`catalog_example`]; `shift_dim` sets the truncation of shift ids.
pub fn catalog_example_sized(id: &str, shift_dim: usize) -> Result<CatalogEntry> {
    let one = |label, matrix, expected| CatalogMatrix {
        label,
        matrix,
        expected,
    };
    let plain = |id, claim, members| CatalogEntry {
        id,
        claim,
        members,
        interior_margin: None,
        discrepancy: None,
        verify_on_load: false,
    };
    let nil2 = Matrix::real(&[&[0.0, 1.0], &[0.0, 0.0]]);
    let jordan = Matrix::real(&[&[1.0, 1.0], &[0.0, 1.0]]);
    let entry = match id {
        "nilpotent2" => plain(
            "nilpotent2",
            "2-quasi-isometry, not a quasi-isometry",
            vec![one("T", nil2, [None, None, Some(1), Some(1)])],
        ),
        "jordan_unit" => plain(
            "jordan_unit",
            "quasi strict 3-isometry",
            vec![one("T", jordan, [Some(3); 4])],
        ),
        "cube_minus_identity" => plain(
            "cube_minus_identity",
            "T^3 is a quasi-3-isometry, T is not",
            vec![one(
                "T",
                Matrix::real(&[&[-1.0, -1.0], &[3.0, 2.0]]),
                [None; 4],
            )],
        ),
        "product_pair" => plain(
            "product_pair",
            "T quasi-3, S 2-quasi-3, neither TS nor ST 2-quasi-5",
            vec![
                one("T", jordan, [Some(3); 4]),
                one(
                    "S",
                    Matrix::real(&[&[2.0, 1.0], &[-1.0, 0.0]]),
                    [Some(3); 4],
                ),
            ],
        ),
        "noncommuting_sum" => CatalogEntry {
            id: "noncommuting_sum",
            claim: "T quasi-3-isometry, Q^2 = 0, T + Q not 5-quasi-5",
            members: vec![
                one("T", Matrix::real(&[&[-5.0, 0.0], &[0.0, -1.0]]), [None; 4]),
                one("Q", nil2, [None, None, Some(1), Some(1)]),
            ],
            interior_margin: None,
            discrepancy: Some(
                "claimed quasi-3-isometry, but beta_{3,1}(diag(-5,-1)) = diag(25*24^3, 0) != 0",
            ),
            verify_on_load: true,
        },
        "shift_2q2i" => shift_entry(
            "shift_2q2i",
            "2-quasi-2-isometry, not a quasi-2-isometry",
            ShiftSpec::two_three(shift_dim),
            [None, None, Some(1), Some(1)],
        )?,
        "shift_quasi_strict2" => shift_entry(
            "shift_quasi_strict2",
            "quasi strict 2-isometry (a = 2)",
            ShiftSpec::root_ratio(2.0, shift_dim),
            [None, Some(2), Some(2), Some(2)],
        )?,
        other => return Err(Error::UnknownExample(other.to_string())),
    };
    Ok(entry)
}

fn shift_entry(
    id: &'static str,
    claim: &'static str,
    spec: ShiftSpec,
    expected: Staircase,
) -> Result<CatalogEntry> {
    Ok(CatalogEntry {
        id,
        claim,
        members: vec![CatalogMatrix {
            label: "T",
            matrix: truncated_weighted_shift(&spec)?,
            expected,
        }],
        interior_margin: Some(spec.interior_margin),
        discrepancy: None,
        verify_on_load: false,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogCheck {
    pub label: &'static str,
    pub expected: Staircase,
    pub found: Vec<Option<usize>>,
    pub matches: bool,
}

/// Classifies every member and compares with the stored staircase.
pub fn verify_catalog_entry(entry: &CatalogEntry, tol: &ToleranceProfile) -> Vec<CatalogCheck> {
    let window = entry.window();
    entry
        .members
        .iter()
        .map(|c| {
            let p = minimal_profile_on(&c.matrix, CATALOG_M_MAX, CATALOG_N_MAX, tol, window);
            CatalogCheck {
                label: c.label,
                expected: c.expected,
                matches: p.staircase == c.expected,
                found: p.staircase,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jordan_forms() {
        assert_eq!(nilpotent_jordan(2, 2).unwrap(), Matrix::real(&[&[0.0, 1.0], &[0.0, 0.0]]));
        let q = nilpotent_jordan(4, 2).unwrap();
        assert_eq!(q.pow(2), Matrix::zeros(4, 4));
        assert_eq!(q[(1, 2)], C64::new(0.0, 0.0));
        let q = nilpotent_jordan(3, 3).unwrap();
        assert!(q.pow(2).max_abs() > 0.0);
        assert_eq!(q.pow(3), Matrix::zeros(3, 3));
        assert!(nilpotent_jordan(2, 3).is_err());
    }

    #[test]
    fn shifts() {
        let t = truncated_weighted_shift(&ShiftSpec::two_three(8)).unwrap();
        assert_eq!(t[(1, 0)], C64::new(2.0, 0.0));
        assert_eq!(t[(2, 1)], C64::new(3.0, 0.0));
        assert_eq!(t[(7, 6)], C64::new(1.0, 0.0));
        let ones = ShiftSpec::from_fn(5, 2, |_| 1.0);
        let t = truncated_weighted_shift(&ones).unwrap();
        assert_eq!(t.pow(5), Matrix::zeros(5, 5));
        let bad = ShiftSpec::from_fn(4, 1, |k| if k == 2 { 0.0 } else { 1.0 });
        assert!(truncated_weighted_shift(&bad).is_err());
    }

    #[test]
    fn isometry_plus_nilpotent_examples() {
        let (t, mn) = isometry_plus_nilpotent(2, 2, ONE).unwrap();
        assert_eq!(t, Matrix::real(&[&[1.0, 1.0], &[0.0, 1.0]]));
        assert_eq!(mn, (3, 0));
        let (t, mn) = isometry_plus_nilpotent(3, 1, C64::new(0.0, 1.0)).unwrap();
        assert_eq!(t, Matrix::identity(3).scale(C64::new(0.0, 1.0)));
        assert_eq!(mn, (1, 0));
    }

    #[test]
    fn block_s() {
        let t = Matrix::real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(block_corollary_s(std::slice::from_ref(&t), &[]).unwrap(), t);
        let s = block_corollary_s(&[t.clone(), t.clone()], &[ONE]).unwrap();
        let q = &s - &t.direct_sum(&t);
        assert_eq!(q.pow(2), Matrix::zeros(4, 4));
        assert!(q.max_abs() > 0.0);
        assert!(block_corollary_s(&[t.clone(), Matrix::identity(3)], &[ONE]).is_err());
        assert!(block_corollary_s(&[t.clone(), t], &[]).is_err());
    }

    #[test]
    fn catalog_reproduces() {
        let tol = ToleranceProfile::default();
        for id in CATALOG_IDS {
            let e = catalog_example(id).unwrap();
            for c in verify_catalog_entry(&e, &tol) {
                assert!(c.matches, "{id}/{}: found {:?}", c.label, c.found);
            }
        }
        assert!(matches!(catalog_example("nope"), Err(Error::UnknownExample(_))));
    }
}
