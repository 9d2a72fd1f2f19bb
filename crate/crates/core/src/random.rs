//! Seeded instance generators. Every generator draws from a caller-owned
//! `ChaCha8Rng`, so a seed fixes the whole instance stream.
//!
//! Members of a known class are built as
//!
//! ```text
//! T = W | A  B | W^*
//!       | 0  N |
//! ```
//!
//! with `W` Haar unitary, `A` an m-isometry (`m` in {1, 3}) and `N` nilpotent
//! of index `n`. Then `R(T^n)` is the first block, `T` acts there as `A`, and
//! `T` is a strict n-quasi-m-isometry whenever `A` is nonempty.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::constructions::nilpotent_jordan;
use crate::linalg::{random_unitary, Matrix, C64};

pub const DEFAULT_SEED: u64 = 42;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, sigma: f64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * sigma
    })
}

/// Complex Ginibre matrix scaled to operator norm about one.
pub fn generic<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Matrix {
    gaussian(rng, dim, dim, 1.0 / (2.0 * (2 * dim) as f64).sqrt())
}

pub fn unit_phase<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Unit vector drawn uniformly from the sphere of `C^dim`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    let v = gaussian(rng, dim, 1, 1.0).column(0);
    let n = crate::linalg::norm_sqr(&v).sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// Strictly upper triangular `k x k` matrix of nilpotency index exactly
/// `index` (`index = 0` only for `k = 0`).
pub fn nilpotent<R: Rng + ?Sized>(rng: &mut R, k: usize, index: usize) -> Matrix {
    if k == 0 {
        return Matrix::zeros(0, 0);
    }
    let j = nilpotent_jordan(k, index.clamp(1, k)).expect("index within 1..=k");
    // Unit upper triangular similarity keeps the index and the triangle.
    let mut u = Matrix::identity(k);
    let mut u_inv_src = Matrix::identity(k);
    for i in 0..k {
        for c in (i + 1)..k {
            let z = gaussian(rng, 1, 1, 0.5)[(0, 0)];
            u[(i, c)] = z;
            u_inv_src[(i, c)] = z;
        }
    }
    let u_inv = u_inv_src.inverse().expect("unit triangular");
    let scale = 0.5 + rng.random::<f64>();
    u.matmul(&j.matmul(&u_inv)).scale_re(scale)
}

/// `m`-isometry of size `r`: unitary, or (when `coupled` and `r >= 2`) a
/// unitary conjugate of `diag(lambda (I + c J_2), phases)`.
pub fn m_isometry<R: Rng + ?Sized>(rng: &mut R, r: usize, coupled: bool) -> (Matrix, usize) {
    if r == 0 {
        return (Matrix::zeros(0, 0), 1);
    }
    let mut d = Matrix::zeros(r, r);
    for i in 0..r {
        d[(i, i)] = unit_phase(rng);
    }
    let m = if coupled && r >= 2 {
        d[(1, 1)] = d[(0, 0)];
        let c = C64::from_polar(0.5 + rng.random::<f64>(), rng.random_range(0.0..6.0));
        d[(0, 1)] = c;
        3
    } else {
        1
    };
    let w = random_unitary(r, rng);
    (w.matmul(&d.matmul(&w.adjoint())), m)
}

#[derive(Clone, Debug)]
pub struct Member {
    pub t: Matrix,
    /// Least `m` with `T` n-quasi-m-isometric.
    pub m: usize,
    /// Nilpotency index of the lower block; least `n` with membership.
    pub n: usize,
    /// `dim R(T^n)`.
    pub range_dim: usize,
}

impl Member {
    /// Strict at `(m, n')` for every `n' >= n`.
    pub fn is_strict_member(&self) -> bool {
        self.range_dim > 0
    }
}

/// Assembles `W [[A, B], [0, N]] W^*` around a given `A`.
pub fn wrap<R: Rng + ?Sized>(rng: &mut R, a: &Matrix, k: usize, index: usize) -> Matrix {
    let r = a.rows();
    let nil = nilpotent(rng, k, index);
    let b = gaussian(rng, r, k, 0.5);
    let block = Matrix::block2x2(a, &b, &Matrix::zeros(k, r), &nil);
    let w = random_unitary(r + k, rng);
    w.matmul(&block.matmul(&w.adjoint()))
}

pub fn member<R: Rng + ?Sized>(rng: &mut R, r: usize, coupled: bool, k: usize, index: usize) -> Member {
    let (a, m) = m_isometry(rng, r, coupled);
    let index = if k == 0 { 0 } else { index.clamp(1, k) };
    Member {
        t: wrap(rng, &a, k, index),
        m,
        n: index,
        range_dim: r,
    }
}

/// Member of dimension `dim` with random block sizes, coupling and index;
/// the range block is never empty and the index stays at most `max_n`.
pub fn random_member<R: Rng + ?Sized>(rng: &mut R, dim: usize, max_n: usize) -> Member {
    let k = rng.random_range(0..dim).min(max_n.max(1) * 2).min(dim - 1);
    let r = dim - k;
    let coupled = r >= 2 && rng.random_bool(0.5);
    let index = if k == 0 { 0 } else { rng.random_range(1..=k.min(max_n)) };
    member(rng, r, coupled, k, index)
}

/// Instance for the gcd theorem: `A` with `A^q` an m-isometry (`m` in
/// {1, 3}) while `A` itself is not unitarily an m-isometry.
#[derive(Clone, Debug)]
pub struct GcdInstance {
    pub t: Matrix,
    pub q: usize,
    pub m: usize,
    pub n: usize,
}

pub fn gcd_instance<R: Rng + ?Sized>(rng: &mut R, q: usize, max_dim: usize) -> GcdInstance {
    let roots = |rng: &mut R| C64::from_polar(1.0, std::f64::consts::TAU * rng.random_range(0..q) as f64 / q as f64);
    let coupled = max_dim >= 4 && rng.random_bool(0.5);
    let diag_size = if coupled { rng.random_range(1..=2) } else { 2 };
    // S D S^{-1} with D made of q-th roots of unity: its q-th power is I.
    let mut dmat = Matrix::zeros(diag_size, diag_size);
    for i in 0..diag_size {
        dmat[(i, i)] = roots(rng);
    }
    let (s, s_inv) = loop {
        let s = &Matrix::identity(diag_size) + &gaussian(rng, diag_size, diag_size, 0.3);
        if s.min_singular_value() > 0.2 {
            let inv = s.inverse().expect("well conditioned");
            break (s, inv);
        }
    };
    let mut a = s.matmul(&dmat.matmul(&s_inv));
    let mut m = 1;
    if coupled {
        // omega (I + c J): its q-th power is I + q c J, a strict 3-isometry.
        let omega = roots(rng);
        let c = C64::from_polar(0.5 + rng.random::<f64>(), rng.random_range(0.0..6.0));
        let jb = Matrix::complex(&[&[omega, omega * c], &[C64::new(0.0, 0.0), omega]]);
        a = a.direct_sum(&jb);
        m = 3;
    }
    let room = max_dim - a.rows();
    let k = rng.random_range(0..=room.min(2));
    let index = if k == 0 { 0 } else { rng.random_range(1..=k) };
    GcdInstance {
        t: wrap(rng, &a, k, index),
        q,
        m,
        n: index,
    }
}

/// `(T (x) I_b, I_a (x) S)`: a doubly commuting pair.
pub fn kron_pair(t: &Matrix, s: &Matrix) -> (Matrix, Matrix) {
    let (a, b) = (t.rows(), s.rows());
    (t.kron(&Matrix::identity(b)), Matrix::identity(a).kron(s))
}

/// Commuting nilpotent partner for `T (x) I_p`: `I (x) N` with `N` of index
/// `p`.
pub fn kron_nilpotent<R: Rng + ?Sized>(rng: &mut R, outer: usize, p: usize) -> Matrix {
    let n = if p == 1 { Matrix::zeros(1, 1) } else { nilpotent(rng, p, p) };
    Matrix::identity(outer).kron(&n)
}

/// `lambda I + Q` style commuting pair with `Q` a unitary-conjugated Jordan
/// form; used by tests needing non-kron commuting instances.
pub fn phase_plus_jordan<R: Rng + ?Sized>(rng: &mut R, dim: usize, p: usize) -> (Matrix, Matrix) {
    let w = random_unitary(dim, rng);
    let q = nilpotent_jordan(dim, p).expect("p <= dim");
    let q = w.matmul(&q.matmul(&w.adjoint()));
    (Matrix::identity(dim).scale(unit_phase(rng)), q)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{is_nqmi, is_strict, minimal_profile};
    use crate::tolerance::ToleranceProfile;

    #[test]
    fn seeded_streams_repeat() {
        let a = generic(&mut rng(7), 4);
        let b = generic(&mut rng(7), 4);
        assert_eq!(a, b);
        assert_ne!(a, generic(&mut rng(8), 4));
    }

    #[test]
    fn nilpotent_index_is_exact() {
        let mut g = rng(1);
        for k in 1..=4 {
            for idx in 1..=k {
                let n = nilpotent(&mut g, k, idx);
                assert!(n.pow(idx).max_abs() < 1e-12);
                if idx > 1 {
                    assert!(n.pow(idx - 1).max_abs() > 1e-3);
                }
            }
        }
    }

    #[test]
    fn members_have_their_profile() {
        let tol = ToleranceProfile::default();
        let mut g = rng(DEFAULT_SEED);
        for dim in 2..=6 {
            for _ in 0..10 {
                let mb = random_member(&mut g, dim, 3);
                assert!(is_nqmi(&mb.t, mb.m, mb.n, &tol).0, "member {mb:?}");
                assert!(is_strict(&mb.t, mb.m, mb.n.max(1), &tol) || mb.m == 1);
                let p = minimal_profile(&mb.t, 4, 3, &tol);
                assert_eq!(p.staircase[mb.n], Some(mb.m));
            }
        }
    }

    #[test]
    fn gcd_instances_have_periodic_powers() {
        let tol = ToleranceProfile::default();
        let mut g = rng(3);
        for q in 2..=3 {
            for _ in 0..10 {
                let inst = gcd_instance(&mut g, q, 6);
                let tq = inst.t.pow(q);
                assert!(is_nqmi(&tq, inst.m, inst.n, &tol).0);
            }
        }
    }
}
