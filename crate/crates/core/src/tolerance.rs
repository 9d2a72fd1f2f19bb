//! Floating-point acceptance policy for defect operators.
//!
//! A defect `beta_{m,n}(T)` is accepted as zero when its operator norm is at
//! most `eps_rel` times the magnitude of the terms that were summed to form it:
//!
//! ```text
//! scale(T, m, n) = max(1, sum_k C(m,k) ||T^{k+n}||^2)
//! ```

use serde::Serialize;

use crate::combinatorics::binomial_f64;
use crate::linalg::Matrix;

/// Environment variable overriding [`ToleranceProfile::eps_rel`].
pub const EPS_ENV: &str = "QIL_EPS_REL";

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ToleranceProfile {
    /// Relative acceptance threshold for normalized residuals.
    pub eps_rel: f64,
    /// Singular values below `rank_tol * sigma_max` count as zero.
    pub rank_tol: f64,
    /// A residual counts as a decided rejection only above
    /// `hysteresis * eps_rel`.
    pub hysteresis: f64,
    /// Largest principal angle (radians) between subspaces deemed equal.
    pub angle_tol: f64,
    /// Eigenvalue matching radius, relative to `1 + ||T||`.
    pub eig_match: f64,
    /// Minimum spectral gap for Sylvester solves, relative to `||A|| + ||B||`.
    pub sylvester_sep: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        ToleranceProfile {
            eps_rel: 1e-9,
            rank_tol: 1e-10,
            hysteresis: 10.0,
            angle_tol: 1e-7,
            eig_match: 1e-6,
            sylvester_sep: 1e-8,
        }
    }
}

/// Which side of the acceptance threshold a normalized residual falls on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Accept,
    /// Above `eps_rel` but not above `hysteresis * eps_rel`.
    Band,
    Reject,
}

impl ToleranceProfile {
    pub fn with_eps(eps_rel: f64) -> Self {
        ToleranceProfile {
            eps_rel,
            ..Default::default()
        }
    }

    /// Default profile, with `eps_rel` taken from `QIL_EPS_REL` when set and
    /// parseable as a nonnegative number.
    pub fn from_env() -> Self {
        std::env::var(EPS_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|e| e.is_finite() && *e >= 0.0)
            .map(Self::with_eps)
            .unwrap_or_default()
    }

    /// Scale for `beta_{m,n}(T)`; computes the needed powers of `T`.
    pub fn scale(&self, t: &Matrix, m: usize, n: usize) -> f64 {
        let powers = t.powers(m + n);
        let norms: Vec<f64> = powers.iter().map(|p| p.op_norm()).collect();
        scale_from_norms(&norms, m, n)
    }

    pub fn accept(&self, normalized: f64) -> bool {
        normalized <= self.eps_rel
    }

    pub fn decide(&self, normalized: f64) -> Decision {
        if normalized <= self.eps_rel {
            Decision::Accept
        } else if normalized <= self.hysteresis * self.eps_rel {
            Decision::Band
        } else {
            Decision::Reject
        }
    }

    /// Rejection that survives the hysteresis band.
    pub fn decided_reject(&self, normalized: f64) -> bool {
        self.decide(normalized) == Decision::Reject
    }

    /// Radius for matching eigenvalues of an operator of norm `norm`.
    pub fn eigen_radius(&self, norm: f64) -> f64 {
        self.eig_match * (1.0 + norm)
    }
}

/// `max(1, sum_k C(m,k) norms[k+n]^2)` where `norms[j] = ||T^j||`.
pub fn scale_from_norms(norms: &[f64], m: usize, n: usize) -> f64 {
    let s: f64 = (0..=m)
        .map(|k| binomial_f64(m, k) * norms[k + n] * norms[k + n])
        .sum();
    s.max(1.0)
}
