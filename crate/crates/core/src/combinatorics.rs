//! Exact binomial and multinomial coefficients, compositions, and the
//! polynomial identity behind the power formula for `Delta_{m,n}(T^k, x)`.

use crate::error::{Error, Result};

/// `C(n, k)` in exact arithmetic; `None` on overflow.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// `C(n, k)` as a float. Exact for every `n` this crate uses.
pub fn binomial_f64(n: usize, k: usize) -> f64 {
    binomial(n, k).map(|c| c as f64).unwrap_or(f64::INFINITY)
}

/// `(-1)^(m-k) C(m, k)`, the coefficient of `T^{*k} T^k` in `beta_m`.
pub fn signed_binomial(m: usize, k: usize) -> f64 {
    let c = binomial_f64(m, k);
    if (m - k).is_multiple_of(2) {
        c
    } else {
        -c
    }
}

/// `m! / (p_1! ... p_k!)` for `p_1 + ... + p_k = m`; `None` on overflow.
pub fn multinomial(parts: &[usize]) -> Option<u128> {
    let mut total = 0usize;
    let mut acc: u128 = 1;
    for &p in parts {
        total += p;
        acc = acc.checked_mul(binomial(total, p)?)?;
    }
    Some(acc)
}

/// All `(p_1, ..., p_k)` of nonnegative integers summing to `m`, in
/// lexicographic order.
pub fn compositions(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 {
        if m == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0; k];
    fill(m, 0, &mut cur, &mut out);
    out
}

fn fill(rest: usize, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if i + 1 == cur.len() {
        cur[i] = rest;
        out.push(cur.clone());
        return;
    }
    for p in 0..=rest {
        cur[i] = p;
        fill(rest - p, i + 1, cur, out);
    }
}

/// Dense integer polynomial, `coeffs[j]` multiplies `z^j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<i128>,
}

impl IntPoly {
    pub fn coeffs(&self) -> &[i128] {
        let mut end = self.coeffs.len();
        while end > 0 && self.coeffs[end - 1] == 0 {
            end -= 1;
        }
        &self.coeffs[..end]
    }

    /// Adds `c z^deg`; `None` on overflow.
    pub fn add_term(&mut self, deg: usize, c: i128) -> Option<()> {
        if self.coeffs.len() <= deg {
            self.coeffs.resize(deg + 1, 0);
        }
        self.coeffs[deg] = self.coeffs[deg].checked_add(c)?;
        Some(())
    }

    fn same(&self, other: &IntPoly) -> bool {
        self.coeffs() == other.coeffs()
    }
}

/// Left side: `sum_j (-1)^{m-j} C(m,j) z^{k(j+n)}`.
pub fn power_identity_lhs(k: usize, m: usize, n: usize) -> Option<IntPoly> {
    let mut p = IntPoly::default();
    for j in 0..=m {
        p.add_term(k * (j + n), signed(m, j)?)?;
    }
    Some(p)
}

/// Right side: `sum_{p_1+...+p_k=m} multinomial(m;p) sum_j (-1)^{m-j} C(m,j)
/// z^{j + kn + sum_i (i-1) p_i}`.
pub fn power_identity_rhs(k: usize, m: usize, n: usize) -> Option<IntPoly> {
    let mut p = IntPoly::default();
    for parts in compositions(m, k) {
        let w: i128 = multinomial(&parts)?.try_into().ok()?;
        let shift: usize = parts.iter().enumerate().map(|(i, &pi)| i * pi).sum();
        for j in 0..=m {
            let c = w.checked_mul(signed(m, j)?)?;
            p.add_term(j + k * n + shift, c)?;
        }
    }
    Some(p)
}

fn signed(m: usize, j: usize) -> Option<i128> {
    let c: i128 = binomial(m, j)?.try_into().ok()?;
    Some(if (m - j).is_multiple_of(2) { c } else { -c })
}

/// Compares both sides of the power identity exactly.
pub fn multinomial_identity_check(k: usize, m: usize, n: usize) -> Result<bool> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let overflow = || Error::ExactArithmeticRequired { k, m, n };
    let lhs = power_identity_lhs(k, m, n).ok_or_else(overflow)?;
    let rhs = power_identity_rhs(k, m, n).ok_or_else(overflow)?;
    Ok(lhs.same(&rhs))
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(0, 0), Some(1));
        assert_eq!(binomial(3, 4), Some(0));
        assert_eq!(binomial(60, 30), Some(118264581564861424));
        assert_eq!(signed_binomial(3, 1), 3.0);
        assert_eq!(signed_binomial(3, 2), -3.0);
    }

    #[test]
    fn multinomials_and_compositions() {
        assert_eq!(multinomial(&[1, 1, 1]), Some(6));
        assert_eq!(multinomial(&[2, 0, 1]), Some(3));
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(compositions(3, 3).len(), 10);
        assert_eq!(compositions(0, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn identity_small_cases() {
        assert!(multinomial_identity_check(1, 4, 2).unwrap());
        assert!(multinomial_identity_check(2, 2, 1).unwrap());
        assert!(multinomial_identity_check(3, 3, 0).unwrap());
        // (z^2 - 1)^2 z^2 = z^6 - 2 z^4 + z^2
        let lhs = power_identity_lhs(2, 2, 1).unwrap();
        assert_eq!(lhs.coeffs(), &[0, 0, 1, 0, -2, 0, 1]);
    }

    #[test]
    fn identity_rejects_zero_k() {
        assert!(multinomial_identity_check(0, 1, 1).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let err = multinomial_identity_check(2, 200, 0).unwrap_err();
        assert!(matches!(err, Error::ExactArithmeticRequired { .. }));
    }
}
