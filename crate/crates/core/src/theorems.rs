//! Executable checks of the structural theorems.
//!
//! Each `verify_*` function tests one implication on a concrete instance and
//! returns a [`TheoremVerdict`]. When the instance does not satisfy the
//! hypotheses the verdict is [`Outcome::Vacuous`]; only the conclusion of an
//! implication whose hypotheses hold can fail.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classifier::{beta_independence, is_nqmi, is_strict, kernel_condition, power_bounded};
use crate::combinatorics::{binomial_f64, gcd};
use crate::constructions::{block_corollary_s, catalog_example};
use crate::decomposition::{block_decompose, similarity_split, verify_block_form};
use crate::defect::{beta, delta, DefectCache};
use crate::linalg::{Matrix, C64, ONE};
use crate::random::{self, gaussian, generic, kron_pair, unit_phase, unit_vector, Member};
use crate::tolerance::ToleranceProfile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    /// Hypotheses not met; nothing was claimed.
    Vacuous,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremVerdict {
    pub theorem_id: String,
    pub instance_digest: String,
    pub claim: String,
    pub outcome: Outcome,
    pub passed: bool,
    /// Largest normalized residual among the checks that decide the
    /// conclusion.
    pub worst_residual: f64,
    pub notes: Vec<String>,
}

impl TheoremVerdict {
    fn new(id: TheoremId, digest: impl Into<String>, claim: impl Into<String>) -> Self {
        TheoremVerdict {
            theorem_id: id.as_str().to_string(),
            instance_digest: digest.into(),
            claim: claim.into(),
            outcome: Outcome::Vacuous,
            passed: false,
            worst_residual: 0.0,
            notes: Vec::new(),
        }
    }

    fn vacuous(mut self, why: impl Into<String>) -> Self {
        self.outcome = Outcome::Vacuous;
        self.passed = false;
        self.notes.push(format!("hypothesis not met: {}", why.into()));
        self
    }

    fn decide(mut self, pass: bool, worst: f64) -> Self {
        self.outcome = if pass { Outcome::Pass } else { Outcome::Fail };
        self.passed = pass;
        self.worst_residual = worst;
        self
    }

    fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    pub fn is_failure(&self) -> bool {
        self.outcome == Outcome::Fail
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    PowerClosure,
    GcdMin,
    GcdMinStrict,
    Product,
    NilpotentSum,
    Tensor,
    TensorStrict,
    StrictScaling,
    StrictProductCriterion,
    ExpansionProduct,
    ExpansionSum,
    NormLimit,
    BlockForm,
    SimilaritySplit,
    KernelUpgrade,
    PowerBoundedUpgrade,
    Independence,
    ProductPowers,
    TensorPowers,
    BlockCorollary,
    Catalog,
}

impl TheoremId {
    pub const ALL: [TheoremId; 21] = [
        TheoremId::PowerClosure,
        TheoremId::GcdMin,
        TheoremId::GcdMinStrict,
        TheoremId::Product,
        TheoremId::NilpotentSum,
        TheoremId::Tensor,
        TheoremId::TensorStrict,
        TheoremId::StrictScaling,
        TheoremId::StrictProductCriterion,
        TheoremId::ExpansionProduct,
        TheoremId::ExpansionSum,
        TheoremId::NormLimit,
        TheoremId::BlockForm,
        TheoremId::SimilaritySplit,
        TheoremId::KernelUpgrade,
        TheoremId::PowerBoundedUpgrade,
        TheoremId::Independence,
        TheoremId::ProductPowers,
        TheoremId::TensorPowers,
        TheoremId::BlockCorollary,
        TheoremId::Catalog,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::PowerClosure => "power_closure",
            TheoremId::GcdMin => "gcd_min",
            TheoremId::GcdMinStrict => "gcd_min_strict",
            TheoremId::Product => "product",
            TheoremId::NilpotentSum => "nilpotent_sum",
            TheoremId::Tensor => "tensor",
            TheoremId::TensorStrict => "tensor_strict",
            TheoremId::StrictScaling => "strict_scaling",
            TheoremId::StrictProductCriterion => "strict_product_criterion",
            TheoremId::ExpansionProduct => "expansion_product",
            TheoremId::ExpansionSum => "expansion_sum",
            TheoremId::NormLimit => "norm_limit",
            TheoremId::BlockForm => "block_form",
            TheoremId::SimilaritySplit => "similarity_split",
            TheoremId::KernelUpgrade => "kernel_upgrade",
            TheoremId::PowerBoundedUpgrade => "power_bounded_upgrade",
            TheoremId::Independence => "independence",
            TheoremId::ProductPowers => "product_powers",
            TheoremId::TensorPowers => "tensor_powers",
            TheoremId::BlockCorollary => "block_corollary",
            TheoremId::Catalog => "catalog",
        }
    }

    fn stream(self) -> u64 {
        TheoremId::ALL.iter().position(|&t| t == self).unwrap() as u64
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown theorem id `{s}`"))
    }
}

// ---------------------------------------------------------------------------
// hypothesis helpers

fn commutator_small(a: &Matrix, b: &Matrix, tol: &ToleranceProfile) -> (bool, f64) {
    let size = a.commutator(b).op_norm();
    let bound = tol.eps_rel * (2.0 * a.op_norm() * b.op_norm()).max(1.0);
    (size <= bound, size)
}

/// `[T, S] = [T, S^*] = 0` at tolerance.
pub fn doubly_commuting(t: &Matrix, s: &Matrix, tol: &ToleranceProfile) -> bool {
    commutator_small(t, s, tol).0 && commutator_small(t, &s.adjoint(), tol).0
}

pub fn commuting(t: &Matrix, s: &Matrix, tol: &ToleranceProfile) -> bool {
    commutator_small(t, s, tol).0
}

/// Least `p >= 1` with `Q^p = 0` at tolerance, up to `dim`.
pub fn nilpotency_order(q: &Matrix, tol: &ToleranceProfile) -> Option<usize> {
    let base = q.op_norm().max(1.0);
    let mut power = q.clone();
    for p in 1..=q.rows().max(1) {
        if power.op_norm() <= tol.eps_rel * base.powi(p as i32) {
            return Some(p);
        }
        power = power.matmul(q);
    }
    None
}

fn membership(t: &Matrix, m: usize, n: usize, tol: &ToleranceProfile) -> (bool, f64) {
    let (ok, r) = is_nqmi(t, m, n, tol);
    (ok, r.normalized)
}

// ---------------------------------------------------------------------------
// single-instance checks

/// Powers of an n-quasi-m-isometry stay n-quasi-m-isometric.
pub fn verify_power_closure(t: &Matrix, m: usize, n: usize, k: usize, tol: &ToleranceProfile) -> TheoremVerdict {
    let v = TheoremVerdict::new(
        TheoremId::PowerClosure,
        format!("dim {}, (m,n)=({m},{n}), k={k}", t.rows()),
        format!("T^{k} is {n}-quasi-{m}-isometric"),
    );
    let (pre, pre_res) = membership(t, m, n, tol);
    if !pre {
        return v.vacuous(format!("T rejected at ({m},{n}), residual {pre_res:.3e}"));
    }
    let (ok, res) = membership(&t.pow(k), m, n, tol);
    v.decide(ok, res)
}

/// `T^r` n-quasi-m and `T^s` n-quasi-l imply `T^{gcd(r,s)}` n-quasi-min(m,l).
pub fn verify_gcd_min(
    t: &Matrix,
    r: usize,
    s: usize,
    m: usize,
    l: usize,
    n: usize,
    tol: &ToleranceProfile,
) -> TheoremVerdict {
    let (q, p) = (gcd(r, s), m.min(l));
    let v = TheoremVerdict::new(
        TheoremId::GcdMin,
        format!("dim {}, r={r}, s={s}, m={m}, l={l}, n={n}", t.rows()),
        format!("T^{q} is {n}-quasi-{p}-isometric"),
    );
    let (a, ra) = membership(&t.pow(r), m, n, tol);
    let (b, rb) = membership(&t.pow(s), l, n, tol);
    if !(a && b) {
        return v.vacuous(format!("T^r residual {ra:.3e}, T^s residual {rb:.3e}"));
    }
    let (ok, res) = membership(&t.pow(q), p, n, tol);
    v.decide(ok, res)
}

/// Strict form: `T^r`, `T^s` strict imply `T^{gcd}` strict of order min(m,l).
pub fn verify_gcd_min_strict(
    t: &Matrix,
    r: usize,
    s: usize,
    m: usize,
    l: usize,
    n: usize,
    tol: &ToleranceProfile,
) -> TheoremVerdict {
    let (q, p) = (gcd(r, s), m.min(l));
    let v = TheoremVerdict::new(
        TheoremId::GcdMinStrict,
        format!("dim {}, r={r}, s={s}, m={m}, l={l}, n={n}", t.rows()),
        format!("T^{q} is {n}-quasi strict {p}-isometric"),
    );
    if !(is_strict(&t.pow(r), m, n, tol) && is_strict(&t.pow(s), l, n, tol)) {
        return v.vacuous("T^r or T^s not strict at the given order");
    }
    let tq = t.pow(q);
    let (member, res) = membership(&tq, p, n, tol);
    let strict = is_strict(&tq, p, n, tol);
    v.decide(strict, res)
        .note(format!("membership {member}, strictness {strict}"))
}

/// Doubly commuting `T` (n1-quasi-m) and `S` (n2-quasi-l) give `TS`
/// max(n1,n2)-quasi-(m+l-1).
pub fn verify_product(
    t: &Matrix,
    s: &Matrix,
    m: usize,
    l: usize,
    n1: usize,
    n2: usize,
    tol: &ToleranceProfile,
) -> TheoremVerdict {
    let (mc, nc) = (m + l - 1, n1.max(n2));
    let ts = t.matmul(s);
    let v = TheoremVerdict::new(
        TheoremId::Product,
        format!("dim {}, m={m}, l={l}, n1={n1}, n2={n2}", t.rows()),
        format!("TS is {nc}-quasi-{mc}-isometric"),
    );
    if !doubly_commuting(t, s, tol) {
        let (direct, res) = membership(&ts, mc, nc, tol);
        let (direct_st, res_st) = membership(&s.matmul(t), mc, nc, tol);
        return v
            .vacuous("T and S are not doubly commuting")
            .note(format!(
                "direct check: TS accepted {direct} ({res:.3e}), ST accepted {direct_st} ({res_st:.3e})"
            ));
    }
    let (a, ra) = membership(t, m, n1, tol);
    let (b, rb) = membership(s, l, n2, tol);
    if !(a && b) {
        return v.vacuous(format!("T residual {ra:.3e}, S residual {rb:.3e}"));
    }
    let (ok, res) = membership(&ts, mc, nc, tol);
    v.decide(ok, res)
}

/// Commuting `T` (n-quasi-m) and nilpotent `Q` of order `p` give `T + Q`
/// (n+p)-quasi-(m+2p-2). The order `2 max(n, p)` is checked as well and
/// reported in the notes only.
pub fn verify_nilpotent_sum(
    t: &Matrix,
    q: &Matrix,
    m: usize,
    n: usize,
    p: usize,
    tol: &ToleranceProfile,
) -> TheoremVerdict {
    let (mc, nc) = (m + 2 * p - 2, n + p);
    let sum = t + q;
    let v = TheoremVerdict::new(
        TheoremId::NilpotentSum,
        format!("dim {}, m={m}, n={n}, p={p}", t.rows()),
        format!("T+Q is {nc}-quasi-{mc}-isometric"),
    );
    let variant_n = 2 * n.max(p);
    let (variant, variant_res) = membership(&sum, mc, variant_n, tol);
    let variant_note = format!("variant order {variant_n}: accepted {variant} ({variant_res:.3e})");
    if !commuting(t, q, tol) {
        let (direct, res) = membership(&sum, mc, nc, tol);
        return v
            .vacuous("T and Q do not commute")
            .note(format!("direct check at ({mc},{nc}): accepted {direct} ({res:.3e})"))
            .note(variant_note);
    }
    if nilpotency_order(q, tol) != Some(p) {
        return v.vacuous(format!("Q is not nilpotent of order {p}"));
    }
    let (pre, pre_res) = membership(t, m, n, tol);
    if !pre {
        return v.vacuous(format!("T rejected at ({m},{n}), residual {pre_res:.3e}"));
    }
    let (ok, res) = membership(&sum, mc, nc, tol);
    v.decide(ok, res).note(variant_note)
}

/// `T (x) S` is max(n1,n2)-quasi-(m+l-1).
pub fn verify_tensor(
    t: &Matrix,
    s: &Matrix,
    m: usize,
    l: usize,
    n1: usize,
    n2: usize,
    tol: &ToleranceProfile,
) -> TheoremVerdict {
    let (mc, nc) = (m + l - 1, n1.max(n2));
    let v = TheoremVerdict::new(
        TheoremId::Tensor,
        format!("dims {}x{}, m={m}, l={l}, n1={n1}, n2={n2}", t.rows(), s.rows()),
        format!("T(x)S is {nc}-quasi-{mc}-isometric"),
    );
    let (a, ra) = membership(t, m, n1, tol);
    let (b, rb) = membership(s, l, n2, tol);
    if !(a && b) {
        return v.vacuous(format!("T residual {ra:.3e}, S residual {rb:.3e}"));
    }
    let (ok, res) = membership(&t.kron(s), mc, nc, tol);
    v.decide(ok, res)
}

/// Strict `T` (order m) and strict `S` (order l) at the same `n` give a strict
/// `T (x) S` of order m+l-1.
pub fn verify_tensor_strict(
    t: &Matrix,
    s: &Matrix,
    m: usize,
    l: usize,
    n: usize,
    tol: &ToleranceProfile,
) -> TheoremVerdict {
    let mc = m + l - 1;
    let v = TheoremVerdict::new(
        TheoremId::TensorStrict,
        format!("dims {}x{}, m={m}, l={l}, n={n}", t.rows(), s.rows()),
        format!("T(x)S is {n}-quasi strict {mc}-isometric"),
    );
    if !(is_strict(t, m, n, tol) && is_strict(s, l, n, tol)) {
        return v.vacuous("T or S not strict at the given order");
    }
    let ts = t.kron(s);
    let (_, res) = membership(&ts, mc, n, tol);
    v.decide(is_strict(&ts, mc, n, tol), res)
}

/// For strict `T` of order m: `Delta_{m-1,n}(T^k, x) = k^{m-1} Delta_{m-1,n}(T, x)`,
/// and `T^k` is strict of the same order.
pub fn verify_strict_scaling(
    t: &Matrix,
    m: usize,
    n: usize,
    k: usize,
    x: &[C64],
    tol: &ToleranceProfile,
) -> TheoremVerdict {
    let v = TheoremVerdict::new(
        TheoremId::StrictScaling,
        format!("dim {}, m={m}, n={n}, k={k}", t.rows()),
        format!("Delta_{{{},{n}}}(T^{k},x) = {k}^{} Delta_{{{},{n}}}(T,x)", m - 1, m - 1, m - 1),
    );
    if m == 0 || !is_strict(t, m, n, tol) {
        return v.vacuous(format!("T not strict at ({m},{n})"));
    }
    let tk = t.pow(k);
    let factor = (k as f64).powi(m as i32 - 1);
    let base = delta(t, m - 1, n, x);
    let lhs = delta(&tk, m - 1, n, x);
    let size = |a: &Matrix| -> f64 {
        let seq = crate::defect::norm_sequence(a, x, n, m - 1);
        (0..m).map(|j| binomial_f64(m - 1, j) * seq.values[j]).sum()
    };
    // Floating error of each side is proportional to the sum of its terms.
    let magnitude = 1.0 + size(&tk) + factor * size(t);
    let rel = (lhs - factor * base).abs() / magnitude;
    let ratio_ok = rel <= tol.hysteresis * tol.eps_rel;
    let strict_power = is_strict(&tk, m, n, tol);
    let ratio = if base != 0.0 { lhs / base } else { f64::NAN };
    v.decide(ratio_ok && strict_power, rel)
        .note(format!("ratio {ratio:.12}, expected {factor}"))
        .note(format!("T^k strict: {strict_power}"))
}

/// `W = T^{*(n+l-1)} beta_{m-1}(T) T^{n+l-1} S^{*n} beta_{l-1}(S) S^n`.
pub fn product_criterion_w(t: &Matrix, s: &Matrix, m: usize, l: usize, n: usize) -> Matrix {
    let tc = DefectCache::new(t, m - 1 + n + l - 1);
    let sc = DefectCache::new(s, l - 1 + n);
    tc.beta_mn(m - 1, n + l - 1).matmul(&sc.beta_mn(l - 1, n))
}

/// Doubly commuting strict `T` (order m) and `S` (order l) at level `n`:
/// `TS` is strict of order m+l-1 exactly when `W != 0`.
pub fn verify_strict_product_criterion(
    t: &Matrix,
    s: &Matrix,
    m: usize,
    l: usize,
    n: usize,
    tol: &ToleranceProfile,
) -> TheoremVerdict {
    let mc = m + l - 1;
    let v = TheoremVerdict::new(
        TheoremId::StrictProductCriterion,
        format!("dim {}, m={m}, l={l}, n={n}", t.rows()),
        format!("TS {n}-quasi strict {mc}-isometric <=> W != 0"),
    );
    if !doubly_commuting(t, s, tol) {
        return v.vacuous("T and S are not doubly commuting");
    }
    if !(is_strict(t, m, n, tol) && is_strict(s, l, n, tol)) {
        return v.vacuous("T or S not strict at the given order");
    }
    let w = product_criterion_w(t, s, m, l, n);
    let tc = DefectCache::new(t, m - 1 + n + l - 1);
    let sc = DefectCache::new(s, l - 1 + n);
    let w_norm = w.op_norm() / (tc.scale(m - 1, n + l - 1) * sc.scale(l - 1, n));
    let decision = tol.decide(w_norm);
    if decision == crate::tolerance::Decision::Band {
        return v.vacuous(format!("||W|| normalized {w_norm:.3e} inside the hysteresis band"));
    }
    let nonzero = decision == crate::tolerance::Decision::Reject;
    let strict = is_strict(&t.matmul(s), mc, n, tol);
    v.decide(nonzero == strict, w_norm)
        .note(format!("W nonzero: {nonzero}, TS strict: {strict}"))
}

/// `sum_i C(j, i) ||X^i||^2`: magnitude of the terms forming `beta_j(X)`.
fn term_size(norms: &[f64], j: usize) -> f64 {
    (0..=j).map(|i| binomial_f64(j, i) * norms[i] * norms[i]).sum()
}

fn power_norms(x: &Matrix, k: usize) -> Vec<f64> {
    x.powers(k).iter().map(Matrix::op_norm).collect()
}

/// `beta_q(TS) = sum_k C(q,k) T^{*k} beta_{q-k}(T) T^k beta_k(S)` for doubly
/// commuting `T`, `S`.
pub fn verify_expansion_product(t: &Matrix, s: &Matrix, q: usize, tol: &ToleranceProfile) -> TheoremVerdict {
    let v = TheoremVerdict::new(
        TheoremId::ExpansionProduct,
        format!("dim {}, q={q}", t.rows()),
        format!("beta_{q}(TS) product expansion"),
    );
    if !doubly_commuting(t, s, tol) {
        return v.vacuous("T and S are not doubly commuting");
    }
    let ts = t.matmul(s);
    let lhs = beta(&ts, q);
    let d = t.rows();
    let tp = t.powers(q);
    let (nt, ns, nts) = (power_norms(t, q), power_norms(s, q), power_norms(&ts, q));
    let mut rhs = Matrix::zeros(d, d);
    let mut magnitude = term_size(&nts, q);
    for k in 0..=q {
        let c = binomial_f64(q, k);
        let term = tp[k].adjoint().matmul(&beta(t, q - k).matmul(&tp[k].matmul(&beta(s, k))));
        rhs = &rhs + &term.scale_re(c);
        magnitude += c * nt[k] * nt[k] * term_size(&nt, q - k) * term_size(&ns, k);
    }
    let rel = (&lhs - &rhs).op_norm() / magnitude.max(1.0);
    v.decide(tol.accept(rel), rel)
}

/// `beta_q(T+Q) = sum_{k,j} C(q,k) C(q-k,j) (T+Q)^{*k} Q^{*j} beta_{q-k-j}(T) T^j Q^k`
/// for commuting `T`, `Q`.
pub fn verify_expansion_sum(t: &Matrix, q: &Matrix, order: usize, tol: &ToleranceProfile) -> TheoremVerdict {
    let v = TheoremVerdict::new(
        TheoremId::ExpansionSum,
        format!("dim {}, q={order}", t.rows()),
        format!("beta_{order}(T+Q) double-sum expansion"),
    );
    if !commuting(t, q, tol) {
        return v.vacuous("T and Q do not commute");
    }
    let sum = t + q;
    let lhs = beta(&sum, order);
    let d = t.rows();
    let (tp, qp, sp) = (t.powers(order), q.powers(order), sum.powers(order));
    let (nt, nq, ns) = (power_norms(t, order), power_norms(q, order), power_norms(&sum, order));
    let mut rhs = Matrix::zeros(d, d);
    let mut magnitude = term_size(&ns, order);
    for k in 0..=order {
        for j in 0..=(order - k) {
            let c = binomial_f64(order, k) * binomial_f64(order - k, j);
            let left = sp[k].adjoint().matmul(&qp[j].adjoint());
            let right = tp[j].matmul(&qp[k]);
            let term = left.matmul(&beta(t, order - k - j).matmul(&right));
            rhs = &rhs + &term.scale_re(c);
            magnitude += c * ns[k] * nq[j] * term_size(&nt, order - k - j) * nt[j] * nq[k];
        }
    }
    let rel = (&lhs - &rhs).op_norm() / magnitude.max(1.0);
    v.decide(tol.accept(rel), rel)
}

/// Lipschitz bound on `beta_{m,n}` near `T`: with `R = ||T|| + 1` and
/// `p = n + j`, `L = sum_j C(m,j) 2p R^{2p-1}`.
pub fn norm_limit_lipschitz(t_norm: f64, m: usize, n: usize) -> f64 {
    let r = t_norm + 1.0;
    (0..=m)
        .map(|j| {
            let p = (n + j) as f64;
            binomial_f64(m, j) * 2.0 * p * r.powf(2.0 * p - 1.0)
        })
        .sum()
}

/// Perturbations `T_k = T + 2^{-k} E` move `beta_{m,n}` by at most
/// `L ||T_k - T||`.
pub fn verify_norm_limit_continuity(
    t: &Matrix,
    e: &Matrix,
    m: usize,
    n: usize,
    steps: usize,
    tol: &ToleranceProfile,
) -> TheoremVerdict {
    let v = TheoremVerdict::new(
        TheoremId::NormLimit,
        format!("dim {}, (m,n)=({m},{n}), steps {steps}", t.rows()),
        "||beta_{m,n}(T_k) - beta_{m,n}(T)|| <= L ||T_k - T||",
    );
    let (pre, pre_res) = membership(t, m, n, tol);
    if !pre {
        return v.vacuous(format!("T rejected at ({m},{n}), residual {pre_res:.3e}"));
    }
    let cache = DefectCache::new(t, m + n);
    let base = cache.beta_mn(m, n);
    let slack = tol.eps_rel * cache.scale(m, n);
    let lip = norm_limit_lipschitz(t.op_norm(), m, n);
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for k in 1..=steps {
        let tk = t + &e.scale_re(0.5f64.powi(k as i32));
        let dist = (&tk - t).op_norm();
        let diff = (&DefectCache::new(&tk, m + n).beta_mn(m, n) - &base).op_norm();
        let bound = lip * dist + slack;
        worst = worst.max(diff / bound);
        ok &= diff <= bound;
    }
    v.decide(ok, worst).note(format!("L = {lip:.6e}; worst diff/bound {worst:.3e}"))
}

/// `T` n-quasi-m iff `T1` m-isometric and `T3^n = 0`. Instances whose
/// residuals fall in the hysteresis band are vacuous.
pub fn verify_block_equivalence(t: &Matrix, m: usize, n: usize, tol: &ToleranceProfile) -> TheoremVerdict {
    let v = TheoremVerdict::new(
        TheoremId::BlockForm,
        format!("dim {}, (m,n)=({m},{n})", t.rows()),
        "membership <=> (T1 m-isometric and T3^n = 0)",
    );
    let (_, rep) = is_nqmi(t, m, n, tol);
    let d = block_decompose(t, n, tol);
    let c = verify_block_form(&d, m, tol);
    let decided = |r: f64| tol.accept(r) || tol.decided_reject(r);
    let block_decided = if c.holds() {
        true
    } else {
        [c.t1_residual, c.t3_residual]
            .iter()
            .any(|&r| tol.decided_reject(r))
    };
    if !decided(rep.normalized) || !block_decided {
        return v.vacuous("a residual lies inside the hysteresis band");
    }
    v.decide(rep.accepted == c.holds(), rep.normalized)
        .note(format!(
            "direct {:.3e}; T1 {:.3e}; T3 {:.3e}; rank {}",
            rep.normalized,
            c.t1_residual,
            c.t3_residual,
            d.rank()
        ))
}

/// Round trip of the similarity split on an accepted instance.
pub fn verify_similarity_split(t: &Matrix, m: usize, n: usize, tol: &ToleranceProfile) -> TheoremVerdict {
    let v = TheoremVerdict::new(
        TheoremId::SimilaritySplit,
        format!("dim {}, (m,n)=({m},{n})", t.rows()),
        "X T X^{-1} = diag(T1, T3)",
    );
    let (pre, _) = membership(t, m, n, tol);
    if !pre {
        return v.vacuous(format!("T rejected at ({m},{n})"));
    }
    match similarity_split(t, n, tol) {
        Err(e) => v.vacuous(e.to_string()),
        Ok(split) => {
            let bound = 1e-8 * (1.0 + t.op_norm()) * split.cond_x;
            let rel = split.residual / bound;
            let t1_ok = DefectCache::new(&split.decomposition.t1, m).report(m, 0, tol, None).accepted;
            let t3 = &split.decomposition.t3;
            let t3_ok = t3.rows() == 0 || t3.pow(n).op_norm() <= tol.eps_rel * t.op_norm().powi(n as i32).max(1.0);
            v.decide(split.residual <= bound && t1_ok && t3_ok, rel)
                .note(format!("residual {:.3e}, cond(X) {:.3e}", split.residual, split.cond_x))
        }
    }
}

/// `N(T^*) = N(T^{*2})` and n-quasi-m with `n >= 2` imply quasi-m.
pub fn verify_kernel_upgrade(t: &Matrix, m: usize, n: usize, tol: &ToleranceProfile) -> TheoremVerdict {
    let v = TheoremVerdict::new(
        TheoremId::KernelUpgrade,
        format!("dim {}, (m,n)=({m},{n})", t.rows()),
        format!("T is 1-quasi-{m}-isometric"),
    );
    let (pre, _) = membership(t, m, n, tol);
    if n < 2 || !pre || !kernel_condition(t, tol) {
        return v.vacuous("needs n >= 2, membership and N(T*) = N(T*^2)");
    }
    let (ok, res) = membership(t, m, 1, tol);
    v.decide(ok, res)
}

/// A power bounded n-quasi-m-isometry is an n-quasi-isometry.
pub fn verify_power_bounded_upgrade(t: &Matrix, m: usize, n: usize, tol: &ToleranceProfile) -> TheoremVerdict {
    let v = TheoremVerdict::new(
        TheoremId::PowerBoundedUpgrade,
        format!("dim {}, (m,n)=({m},{n})", t.rows()),
        format!("T is {n}-quasi-1-isometric"),
    );
    let (pre, _) = membership(t, m, n, tol);
    match power_bounded(t, tol) {
        Ok(true) if pre => {
            let (ok, res) = membership(t, 1, n, tol);
            v.decide(ok, res)
        }
        Ok(_) => v.vacuous("needs membership and power boundedness"),
        Err(e) => v.vacuous(e.to_string()),
    }
}

/// A strict n-quasi-m-isometry has linearly independent `beta_{k,n}`,
/// `k < m`.
pub fn verify_independence(t: &Matrix, m: usize, n: usize, tol: &ToleranceProfile) -> TheoremVerdict {
    let v = TheoremVerdict::new(
        TheoremId::Independence,
        format!("dim {}, (m,n)=({m},{n})", t.rows()),
        format!("beta_{{k,{n}}}, k < {m}, independent"),
    );
    if !is_strict(t, m, n, tol) {
        return v.vacuous(format!("T not strict at ({m},{n})"));
    }
    let ind = beta_independence(t, m, n, tol);
    v.decide(ind.independent, 0.0).note(format!("rank {}", ind.rank))
}

/// `T^p S^q` for doubly commuting `T`, `S`: power closure chained with the
/// product theorem.
#[allow(clippy::too_many_arguments)]
pub fn verify_product_powers(
    t: &Matrix,
    s: &Matrix,
    m: usize,
    l: usize,
    n1: usize,
    n2: usize,
    p: usize,
    q: usize,
    tol: &ToleranceProfile,
) -> TheoremVerdict {
    let (mc, nc) = (m + l - 1, n1.max(n2));
    let v = TheoremVerdict::new(
        TheoremId::ProductPowers,
        format!("dim {}, m={m}, l={l}, n1={n1}, n2={n2}, p={p}, q={q}", t.rows()),
        format!("T^{p} S^{q} is {nc}-quasi-{mc}-isometric"),
    );
    let (tp, sq) = (t.pow(p), s.pow(q));
    let steps = [
        verify_power_closure(t, m, n1, p, tol),
        verify_power_closure(s, l, n2, q, tol),
        verify_product(&tp, &sq, m, l, n1, n2, tol),
    ];
    chain(v, &steps)
}

/// `T^p (x) S^q`: power closure chained with the tensor theorem.
#[allow(clippy::too_many_arguments)]
pub fn verify_tensor_powers(
    t: &Matrix,
    s: &Matrix,
    m: usize,
    l: usize,
    n1: usize,
    n2: usize,
    p: usize,
    q: usize,
    tol: &ToleranceProfile,
) -> TheoremVerdict {
    let (mc, nc) = (m + l - 1, n1.max(n2));
    let v = TheoremVerdict::new(
        TheoremId::TensorPowers,
        format!("dims {}x{}, m={m}, l={l}, n1={n1}, n2={n2}, p={p}, q={q}", t.rows(), s.rows()),
        format!("T^{p} (x) S^{q} is {nc}-quasi-{mc}-isometric"),
    );
    let steps = [
        verify_power_closure(t, m, n1, p, tol),
        verify_power_closure(s, l, n2, q, tol),
        verify_tensor(&t.pow(p), &s.pow(q), m, l, n1, n2, tol),
    ];
    chain(v, &steps)
}

fn chain(mut v: TheoremVerdict, steps: &[TheoremVerdict]) -> TheoremVerdict {
    for s in steps {
        v.notes.push(format!("{}: {:?}", s.theorem_id, s.outcome));
    }
    if let Some(s) = steps.iter().find(|s| s.outcome == Outcome::Vacuous) {
        let why = s.notes.first().cloned().unwrap_or_default();
        return v.vacuous(format!("{} step: {why}", s.theorem_id));
    }
    let worst = steps.iter().map(|s| s.worst_residual).fold(0.0, f64::max);
    let ok = steps.iter().all(|s| s.outcome == Outcome::Pass);
    v.decide(ok, worst)
}

/// Block bidiagonal `S` with diagonal blocks n_j-quasi-m_j is
/// (n+d)-quasi-(m+2d-2) with `n = max n_j`, `m = max m_j`.
pub fn verify_block_corollary(
    blocks: &[(Matrix, usize, usize)],
    alphas: &[C64],
    tol: &ToleranceProfile,
) -> TheoremVerdict {
    let d = blocks.len();
    let m = blocks.iter().map(|b| b.1).max().unwrap_or(1);
    let n = blocks.iter().map(|b| b.2).max().unwrap_or(0);
    let (mc, nc) = (m + 2 * d - 2, n + d);
    let v = TheoremVerdict::new(
        TheoremId::BlockCorollary,
        format!("d={d}, block dim {}, m={m}, n={n}", blocks.first().map_or(0, |b| b.0.rows())),
        format!("S is {nc}-quasi-{mc}-isometric"),
    );
    for (t, mj, nj) in blocks {
        if !membership(t, *mj, *nj, tol).0 {
            return v.vacuous(format!("a diagonal block is rejected at ({mj},{nj})"));
        }
    }
    let ops: Vec<Matrix> = blocks.iter().map(|b| b.0.clone()).collect();
    let s = match block_corollary_s(&ops, alphas) {
        Err(e) => return v.vacuous(e.to_string()),
        Ok(s) => s,
    };
    // S = diag(T_j) + Q; the nilpotent-sum theorem needs the two to commute.
    let zero = Matrix::zeros(ops[0].rows(), ops[0].rows());
    let diag = block_corollary_s(&ops, &vec![C64::new(0.0, 0.0); d - 1]).expect("same shapes");
    let shift = block_corollary_s(&vec![zero; d], alphas).expect("same shapes");
    let (ok, res) = membership(&s, mc, nc, tol);
    if !commuting(&diag, &shift, tol) {
        return v
            .vacuous("diagonal part and superdiagonal part do not commute")
            .note(format!("direct check: accepted {ok} ({res:.3e})"));
    }
    v.decide(ok, res)
}

// ---------------------------------------------------------------------------
// seeded batches

pub const DEFAULT_BATCH: usize = 100;

fn stream_rng(seed: u64, id: TheoremId) -> ChaCha8Rng {
    let mut g = random::rng(seed);
    g.set_stream(id.stream() + 1);
    g
}

fn tag(mut v: TheoremVerdict, seed: u64, i: usize) -> TheoremVerdict {
    v.instance_digest = format!("seed {seed} #{i}: {}", v.instance_digest);
    v
}

/// Member with dimension in `2..=max_dim` and index at most 3.
fn any_member(g: &mut ChaCha8Rng, max_dim: usize) -> Member {
    let dim = g.random_range(2..=max_dim);
    random::random_member(g, dim, 3)
}

fn kron_dims(g: &mut ChaCha8Rng) -> (usize, usize) {
    const PAIRS: [(usize, usize); 7] = [(1, 2), (2, 1), (2, 2), (2, 3), (3, 2), (1, 3), (3, 1)];
    PAIRS[g.random_range(0..PAIRS.len())]
}

fn member_of_dim(g: &mut ChaCha8Rng, dim: usize) -> Member {
    if dim == 1 {
        let (a, m) = random::m_isometry(g, 1, false);
        Member {
            t: a,
            m,
            n: 0,
            range_dim: 1,
        }
    } else {
        random::random_member(g, dim, 3)
    }
}

fn coprime_pair(g: &mut ChaCha8Rng) -> (usize, usize) {
    const PAIRS: [(usize, usize); 6] = [(1, 2), (2, 3), (3, 2), (1, 3), (3, 1), (2, 1)];
    PAIRS[g.random_range(0..PAIRS.len())]
}

/// One random instance of `id`, index `i` in the batch.
fn random_instance(id: TheoremId, g: &mut ChaCha8Rng, tol: &ToleranceProfile) -> TheoremVerdict {
    match id {
        TheoremId::PowerClosure => {
            let mb = any_member(g, 6);
            let m = (mb.m + g.random_range(0..=1)).min(4);
            verify_power_closure(&mb.t, m, mb.n, g.random_range(1..=3), tol)
        }
        TheoremId::GcdMin | TheoremId::GcdMinStrict => {
            let q0 = g.random_range(1..=3);
            let inst = random::gcd_instance(g, q0, 6);
            let (a, b) = coprime_pair(g);
            let (r, s) = (q0 * a, q0 * b);
            if id == TheoremId::GcdMin {
                let l = (inst.m + g.random_range(0..=1)).min(4);
                verify_gcd_min(&inst.t, r, s, inst.m, l, inst.n, tol)
            } else {
                verify_gcd_min_strict(&inst.t, r, s, inst.m, inst.m, inst.n, tol)
            }
        }
        TheoremId::Product => {
            let (a, b) = kron_dims(g);
            let (t0, s0) = (member_of_dim(g, a), member_of_dim(g, b));
            let (t, s) = kron_pair(&t0.t, &s0.t);
            verify_product(&t, &s, t0.m, s0.m, t0.n, s0.n, tol)
        }
        TheoremId::NilpotentSum => {
            let p = g.random_range(1..=3);
            let outer = g.random_range(1..=(6 / p).max(1));
            let t0 = member_of_dim(g, outer);
            let t = t0.t.kron(&Matrix::identity(p));
            let q = random::kron_nilpotent(g, outer, p);
            verify_nilpotent_sum(&t, &q, t0.m, t0.n, p, tol)
        }
        TheoremId::Tensor => {
            let (a, b) = kron_dims(g);
            let (t0, s0) = (member_of_dim(g, a), member_of_dim(g, b));
            verify_tensor(&t0.t, &s0.t, t0.m, s0.m, t0.n, s0.n, tol)
        }
        TheoremId::TensorStrict => {
            let (a, b) = kron_dims(g);
            let (t0, s0) = (member_of_dim(g, a), member_of_dim(g, b));
            let n = t0.n.max(s0.n);
            verify_tensor_strict(&t0.t, &s0.t, t0.m, s0.m, n, tol)
        }
        TheoremId::StrictScaling => {
            let mb = any_member(g, 6);
            let x = unit_vector(g, mb.t.rows());
            verify_strict_scaling(&mb.t, mb.m, mb.n, g.random_range(1..=3), &x, tol)
        }
        TheoremId::StrictProductCriterion => {
            if g.random_bool(0.5) {
                let (a, b) = kron_dims(g);
                let (t0, s0) = (member_of_dim(g, a), member_of_dim(g, b));
                let n = t0.n.max(s0.n);
                let (t, s) = kron_pair(&t0.t, &s0.t);
                verify_strict_product_criterion(&t, &s, t0.m, s0.m, n, tol)
            } else {
                // A (+) I and I (+) B: W vanishes and TS = A (+) B is not
                // strict of order 5.
                let (a, _) = random::m_isometry(g, 2, true);
                let (b, _) = random::m_isometry(g, 2, true);
                let t = a.direct_sum(&Matrix::identity(2));
                let s = Matrix::identity(2).direct_sum(&b);
                verify_strict_product_criterion(&t, &s, 3, 3, g.random_range(0..=2), tol)
            }
        }
        TheoremId::ExpansionProduct => {
            let (a, b) = kron_dims(g);
            let (t, s) = kron_pair(&generic(g, a), &generic(g, b));
            verify_expansion_product(&t, &s, g.random_range(0..=4), tol)
        }
        TheoremId::ExpansionSum => {
            let p = g.random_range(1..=3);
            let outer = g.random_range(1..=(6 / p).max(1));
            let t = generic(g, outer).kron(&Matrix::identity(p));
            let q = random::kron_nilpotent(g, outer, p);
            verify_expansion_sum(&t, &q, g.random_range(0..=4), tol)
        }
        TheoremId::NormLimit => {
            let mb = any_member(g, 6);
            let d = mb.t.rows();
            let e = gaussian(g, d, d, 1.0);
            let e = e.scale_re(1.0 / e.op_norm());
            verify_norm_limit_continuity(&mb.t, &e, mb.m, mb.n, 8, tol)
        }
        TheoremId::BlockForm => {
            let d = g.random_range(2..=6);
            let t = if g.random_bool(0.5) {
                random::random_member(g, d, 3).t
            } else {
                generic(g, d)
            };
            verify_block_equivalence(&t, g.random_range(1..=4), g.random_range(0..=3), tol)
        }
        TheoremId::SimilaritySplit => {
            let mb = any_member(g, 6);
            verify_similarity_split(&mb.t, mb.m, mb.n, tol)
        }
        TheoremId::KernelUpgrade => {
            // Normal part plus an isometric block: N(T*) = N(T*^2).
            let d = g.random_range(2..=6);
            let r = g.random_range(1..d);
            let coupled = g.random_bool(0.5);
            let (a, m) = random::m_isometry(g, r, coupled);
            let t = a.direct_sum(&Matrix::zeros(d - r, d - r));
            let w = crate::linalg::random_unitary(d, g);
            let t = w.matmul(&t.matmul(&w.adjoint()));
            verify_kernel_upgrade(&t, m, g.random_range(2..=3), tol)
        }
        TheoremId::PowerBoundedUpgrade => {
            // Unitary (+) nilpotent.
            let d = g.random_range(2..=6);
            let k = g.random_range(0..d);
            let index = if k == 0 { 0 } else { g.random_range(1..=k) };
            let (a, _) = random::m_isometry(g, d - k, false);
            let t = a.direct_sum(&random::nilpotent(g, k, index));
            verify_power_bounded_upgrade(&t, g.random_range(1..=4), index, tol)
        }
        TheoremId::Independence => {
            let mb = any_member(g, 6);
            verify_independence(&mb.t, mb.m, mb.n, tol)
        }
        TheoremId::ProductPowers => {
            let (a, b) = kron_dims(g);
            let (t0, s0) = (member_of_dim(g, a), member_of_dim(g, b));
            let (t, s) = kron_pair(&t0.t, &s0.t);
            let (p, q) = (g.random_range(1..=3), g.random_range(1..=3));
            verify_product_powers(&t, &s, t0.m, s0.m, t0.n, s0.n, p, q, tol)
        }
        TheoremId::TensorPowers => {
            let (a, b) = kron_dims(g);
            let (t0, s0) = (member_of_dim(g, a), member_of_dim(g, b));
            let (p, q) = (g.random_range(1..=3), g.random_range(1..=3));
            verify_tensor_powers(&t0.t, &s0.t, t0.m, s0.m, t0.n, s0.n, p, q, tol)
        }
        TheoremId::BlockCorollary => {
            let d = g.random_range(2..=3);
            let h = if d == 2 { g.random_range(1..=3) } else { g.random_range(1..=2) };
            // Mostly equal diagonal blocks, so the commuting hypothesis holds.
            let equal = g.random_bool(0.75);
            let first = member_of_dim(g, h);
            let blocks: Vec<(Matrix, usize, usize)> = (0..d)
                .map(|j| {
                    let mb = if equal || j == 0 { first.clone() } else { member_of_dim(g, h) };
                    (mb.t, mb.m, mb.n)
                })
                .collect();
            let alphas: Vec<C64> = (0..d - 1).map(|_| unit_phase(g) * (0.5 + g.random::<f64>())).collect();
            verify_block_corollary(&blocks, &alphas, tol)
        }
        TheoremId::Catalog => TheoremVerdict::new(id, "", "catalog scenarios").vacuous("not randomized"),
    }
}

/// `count` seeded random instances of one theorem.
pub fn run_random_batch(id: TheoremId, count: usize, seed: u64, tol: &ToleranceProfile) -> Vec<TheoremVerdict> {
    if id == TheoremId::Catalog {
        return catalog_verdicts(tol);
    }
    let mut g = stream_rng(seed, id);
    (0..count)
        .map(|i| tag(random_instance(id, &mut g, tol), seed, i))
        .collect()
}

/// Every randomized theorem plus the catalog scenarios.
pub fn run_all(count: usize, seed: u64, tol: &ToleranceProfile) -> Vec<TheoremVerdict> {
    TheoremId::ALL
        .iter()
        .flat_map(|&id| run_random_batch(id, count, seed, tol))
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub vacuous: usize,
}

pub fn tally(verdicts: &[TheoremVerdict]) -> Tally {
    let mut t = Tally::default();
    for v in verdicts {
        match v.outcome {
            Outcome::Pass => t.pass += 1,
            Outcome::Fail => t.fail += 1,
            Outcome::Vacuous => t.vacuous += 1,
        }
    }
    t
}

// ---------------------------------------------------------------------------
// catalog scenarios

fn catalog_matrix(id: &str, label: &str) -> Matrix {
    let e = catalog_example(id).expect("catalog id");
    e.members.into_iter().find(|c| c.label == label).expect("catalog label").matrix
}

/// `(theorem, catalog id)` pairs with a scenario, in report order.
pub const CATALOG_SCENARIOS: &[(TheoremId, &str)] = &[
    (TheoremId::Catalog, "nilpotent2"),
    (TheoremId::Catalog, "jordan_unit"),
    (TheoremId::Catalog, "cube_minus_identity"),
    (TheoremId::Catalog, "product_pair"),
    (TheoremId::Catalog, "noncommuting_sum"),
    (TheoremId::Catalog, "shift_2q2i"),
    (TheoremId::Catalog, "shift_quasi_strict2"),
    (TheoremId::PowerClosure, "jordan_unit"),
    (TheoremId::PowerClosure, "cube_minus_identity"),
    (TheoremId::GcdMin, "jordan_unit"),
    (TheoremId::GcdMinStrict, "jordan_unit"),
    (TheoremId::Product, "product_pair"),
    (TheoremId::ProductPowers, "product_pair"),
    (TheoremId::NilpotentSum, "noncommuting_sum"),
    (TheoremId::NilpotentSum, "nilpotent2"),
    (TheoremId::Tensor, "jordan_unit"),
    (TheoremId::TensorStrict, "jordan_unit"),
    (TheoremId::TensorPowers, "jordan_unit"),
    (TheoremId::StrictScaling, "jordan_unit"),
    (TheoremId::StrictScaling, "shift_quasi_strict2"),
    (TheoremId::ExpansionSum, "nilpotent2"),
    (TheoremId::Independence, "jordan_unit"),
    (TheoremId::NormLimit, "jordan_unit"),
    (TheoremId::KernelUpgrade, "jordan_unit"),
    (TheoremId::PowerBoundedUpgrade, "nilpotent2"),
    (TheoremId::BlockCorollary, "jordan_unit"),
];

/// Catalog ids with a scenario for `id`.
pub fn catalog_ids_for(id: TheoremId) -> Vec<&'static str> {
    CATALOG_SCENARIOS.iter().filter(|s| s.0 == id).map(|s| s.1).collect()
}

/// Verdicts of one catalog scenario; `k` overrides the default power where
/// the theorem takes one. `None` when the pair has no scenario.
pub fn catalog_scenario(
    id: TheoremId,
    catalog: &str,
    k: Option<usize>,
    tol: &ToleranceProfile,
) -> Option<Vec<TheoremVerdict>> {
    if !CATALOG_SCENARIOS.contains(&(id, catalog)) {
        return None;
    }
    let swap = Matrix::real(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let zero = C64::new(0.0, 0.0);
    let tag = |v: TheoremVerdict| TheoremVerdict {
        instance_digest: format!("catalog {catalog}: {}", v.instance_digest),
        ..v
    };
    let out = match (id, catalog) {
        (TheoremId::Catalog, "cube_minus_identity") => {
            let cube = cube_scenario(&catalog_matrix(catalog, "T"), tol);
            vec![reproduction_scenario(catalog, tol), cube]
        }
        (TheoremId::Catalog, _) => vec![reproduction_scenario(catalog, tol)],
        (TheoremId::PowerClosure, "jordan_unit") => {
            vec![verify_power_closure(&catalog_matrix(catalog, "T"), 3, 1, k.unwrap_or(2), tol)]
        }
        (TheoremId::PowerClosure, _) => {
            // T is rejected at (3,1) although T^3 is accepted.
            vec![verify_power_closure(&catalog_matrix(catalog, "T"), 3, 1, k.unwrap_or(3), tol)]
        }
        (TheoremId::GcdMin, _) => vec![verify_gcd_min(&catalog_matrix(catalog, "T"), 2, 3, 3, 3, 1, tol)],
        (TheoremId::GcdMinStrict, _) => {
            vec![verify_gcd_min_strict(&catalog_matrix(catalog, "T"), 2, 3, 3, 3, 1, tol)]
        }
        (TheoremId::Product, _) => {
            let (t, s) = (catalog_matrix(catalog, "T"), catalog_matrix(catalog, "S"));
            vec![verify_product(&t, &s, 3, 3, 1, 2, tol)]
        }
        (TheoremId::ProductPowers, _) => {
            let (t, s) = (catalog_matrix(catalog, "T"), catalog_matrix(catalog, "S"));
            let k = k.unwrap_or(2);
            vec![verify_product_powers(&t, &s, 3, 3, 1, 2, k, k, tol)]
        }
        (TheoremId::NilpotentSum, "noncommuting_sum") => {
            let (t, q) = (catalog_matrix(catalog, "T"), catalog_matrix(catalog, "Q"));
            let flag = catalog_example(catalog).ok().and_then(|e| e.discrepancy).unwrap_or_default();
            vec![verify_nilpotent_sum(&t, &q, 3, 1, 2, tol).note(format!("flagged example: {flag}"))]
        }
        (TheoremId::NilpotentSum, _) => {
            let q = catalog_matrix(catalog, "T");
            vec![verify_nilpotent_sum(&Matrix::identity(2), &q, 1, 0, 2, tol)]
        }
        (TheoremId::Tensor, _) => vec![verify_tensor(&catalog_matrix(catalog, "T"), &swap, 3, 1, 0, 0, tol)],
        (TheoremId::TensorStrict, _) => {
            vec![verify_tensor_strict(&catalog_matrix(catalog, "T"), &swap, 3, 1, 0, tol)]
        }
        (TheoremId::TensorPowers, _) => {
            let k = k.unwrap_or(2);
            vec![verify_tensor_powers(&catalog_matrix(catalog, "T"), &swap, 3, 1, 0, 0, k, k, tol)]
        }
        (TheoremId::StrictScaling, "jordan_unit") => {
            let x = [zero, ONE];
            vec![verify_strict_scaling(&catalog_matrix(catalog, "T"), 3, 1, k.unwrap_or(2), &x, tol)]
        }
        (TheoremId::StrictScaling, _) => {
            // Strict of order 2 at n = 1 on the interior window.
            let e = catalog_example(catalog).expect("catalog id");
            let t = &e.members[0].matrix;
            let mut x = vec![zero; t.rows()];
            x[0] = ONE;
            let window = e.window().expect("shift entries carry a window");
            vec![verify_strict_scaling_window(t, window, 2, 1, k.unwrap_or(3), &x, tol)]
        }
        (TheoremId::ExpansionSum, _) => {
            vec![verify_expansion_sum(&Matrix::identity(2), &catalog_matrix(catalog, "T"), 2, tol)]
        }
        (TheoremId::Independence, _) => vec![verify_independence(&catalog_matrix(catalog, "T"), 3, 1, tol)],
        (TheoremId::NormLimit, _) => {
            vec![verify_norm_limit_continuity(&catalog_matrix(catalog, "T"), &unit_direction(), 3, 1, 8, tol)]
        }
        (TheoremId::KernelUpgrade, _) => vec![verify_kernel_upgrade(&catalog_matrix(catalog, "T"), 3, 2, tol)],
        (TheoremId::PowerBoundedUpgrade, _) => {
            vec![verify_power_bounded_upgrade(&catalog_matrix(catalog, "T"), 1, 2, tol)]
        }
        (TheoremId::BlockCorollary, _) => {
            let j = catalog_matrix(catalog, "T");
            vec![
                verify_block_corollary(&[(j.clone(), 3, 0), (j.clone(), 3, 0)], &[ONE], tol),
                verify_block_corollary(
                    &[(j.clone(), 3, 0), (j.clone(), 3, 0), (j.clone(), 3, 0)],
                    &[ONE, C64::new(0.0, 2.0)],
                    tol,
                ),
                // Unequal blocks: S lies in no class; the verdict is vacuous.
                verify_block_corollary(&[(j, 3, 0), (swap, 1, 0)], &[ONE], tol),
            ]
        }
        _ => return None,
    };
    Some(out.into_iter().map(tag).collect())
}

/// Every catalog scenario with default arguments, in a fixed order.
pub fn catalog_verdicts(tol: &ToleranceProfile) -> Vec<TheoremVerdict> {
    CATALOG_SCENARIOS
        .iter()
        .flat_map(|&(id, cat)| catalog_scenario(id, cat, None, tol).unwrap_or_default())
        .collect()
}

/// The classifier reproduces every stored staircase of a catalog entry.
fn reproduction_scenario(catalog: &str, tol: &ToleranceProfile) -> TheoremVerdict {
    let v = TheoremVerdict::new(TheoremId::Catalog, "staircases n=0..3", "classifier reproduces the stored staircases");
    let entry = match catalog_example(catalog) {
        Ok(e) => e,
        Err(e) => return v.vacuous(e.to_string()),
    };
    let checks = crate::constructions::verify_catalog_entry(&entry, tol);
    let ok = checks.iter().all(|c| c.matches);
    let mut v = v.decide(ok, 0.0);
    for c in &checks {
        v = v.note(format!("{}: expected {:?}, found {:?}", c.label, c.expected, c.found));
    }
    if let Some(flag) = entry.discrepancy {
        v = v.note(format!("flagged example: {flag}"));
    }
    v
}

fn unit_direction() -> Matrix {
    let e = Matrix::real(&[&[0.3, -1.0], &[0.5, 0.2]]);
    e.scale_re(1.0 / e.op_norm())
}

fn cube_scenario(t: &Matrix, tol: &ToleranceProfile) -> TheoremVerdict {
    let v = TheoremVerdict::new(
        TheoremId::Catalog,
        "cube_minus_identity",
        "T^3 = -I is 1-quasi-3-isometric while T is not",
    );
    let t3 = t.pow(3);
    let (pow_ok, pow_res) = membership(&t3, 3, 1, tol);
    let (_, base) = is_nqmi(t, 3, 1, tol);
    let rejected = tol.decided_reject(base.normalized);
    v.decide(pow_ok && rejected, pow_res)
        .note(format!("T residual at (3,1): {:.3e}", base.normalized))
        .note(format!("||T^3 + I||_max = {:.3e}", (&t3 + &Matrix::identity(2)).max_abs()))
}

/// Scaling identity for a truncated shift: `x` must lie in the window with
/// its orbit; strictness is judged on the window.
fn verify_strict_scaling_window(
    t: &Matrix,
    window: crate::defect::Window,
    m: usize,
    n: usize,
    k: usize,
    x: &[C64],
    tol: &ToleranceProfile,
) -> TheoremVerdict {
    let v = TheoremVerdict::new(
        TheoremId::StrictScaling,
        format!("truncated shift dim {}, window {}, m={m}, n={n}, k={k}", t.rows(), window.size),
        format!("Delta_{{{},{n}}}(T^{k},x) = {k}^{} Delta_{{{},{n}}}(T,x)", m - 1, m - 1, m - 1),
    );
    if !crate::classifier::is_strict_on(t, m, n, tol, Some(window)) {
        return v.vacuous("T not strict on the window");
    }
    let factor = (k as f64).powi(m as i32 - 1);
    let base = delta(t, m - 1, n, x);
    let lhs = delta(&t.pow(k), m - 1, n, x);
    let rel = (lhs - factor * base).abs() / (1.0 + factor * base.abs());
    v.decide(rel <= tol.hysteresis * tol.eps_rel, rel)
        .note(format!("ratio {:.12}", lhs / base))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    #[test]
    fn ids_round_trip() {
        for id in TheoremId::ALL {
            assert_eq!(id.as_str().parse::<TheoremId>().unwrap(), id);
        }
        assert!("nope".parse::<TheoremId>().is_err());
    }

    #[test]
    fn catalog_scenarios_have_no_failures() {
        for &(id, cat) in CATALOG_SCENARIOS {
            let verdicts = catalog_scenario(id, cat, None, &tol()).expect("listed scenario");
            for v in verdicts {
                assert_ne!(v.outcome, Outcome::Fail, "{v:?}");
            }
        }
        assert!(catalog_scenario(TheoremId::Product, "nilpotent2", None, &tol()).is_none());
    }

    #[test]
    fn noncommuting_examples_are_vacuous() {
        let all = catalog_verdicts(&tol());
        let product = all.iter().find(|v| v.theorem_id == "product").unwrap();
        assert_eq!(product.outcome, Outcome::Vacuous);
        let sum = all
            .iter()
            .find(|v| v.theorem_id == "nilpotent_sum" && v.instance_digest.contains("m=3"))
            .unwrap();
        assert_eq!(sum.outcome, Outcome::Vacuous);
    }

    #[test]
    fn power_closure_scenario_takes_k() {
        let v = catalog_scenario(TheoremId::PowerClosure, "jordan_unit", Some(4), &tol()).unwrap();
        assert_eq!(v[0].outcome, Outcome::Pass);
        assert!(v[0].claim.contains("T^4"));
    }

    #[test]
    fn nilpotency_orders() {
        let q = crate::constructions::nilpotent_jordan(3, 3).unwrap();
        assert_eq!(nilpotency_order(&q, &tol()), Some(3));
        assert_eq!(nilpotency_order(&Matrix::zeros(2, 2), &tol()), Some(1));
        assert_eq!(nilpotency_order(&Matrix::identity(2), &tol()), None);
    }

    #[test]
    fn lipschitz_constant() {
        // m = 1, n = 1, ||T|| = 1: C(1,0) 2 R + C(1,1) 4 R^3 with R = 2
        assert_eq!(norm_limit_lipschitz(1.0, 1, 1), 4.0 + 32.0);
    }
}
