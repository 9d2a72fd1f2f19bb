//! Order of a real sequence as an arithmetic progression: the smallest `h`
//! whose `(h+1)`-th forward differences all vanish.

use crate::error::{Error, Result};

pub const DEFAULT_DIFF_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffOrder {
    /// All `(h+1)`-th differences vanish and, for `h > 0`, some `h`-th one
    /// does not.
    Exact(usize),
    /// No vanishing difference row within the sequence; the order is at
    /// least this value.
    AtLeast(usize),
}

pub fn forward_differences(seq: &[f64]) -> Vec<f64> {
    seq.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Differences count as zero when within `tol * max|seq|`; an all-zero
/// sequence has order 0.
pub fn finite_diff_strict_order(seq: &[f64], tol: f64) -> Result<DiffOrder> {
    if seq.len() < 2 {
        return Err(Error::SequenceTooShort { len: seq.len() });
    }
    let peak = seq.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let cutoff = tol * peak;
    let mut row = seq.to_vec();
    for h in 0..seq.len() - 1 {
        row = forward_differences(&row);
        if row.iter().all(|x| x.abs() <= cutoff) {
            return Ok(DiffOrder::Exact(h));
        }
    }
    Ok(DiffOrder::AtLeast(seq.len() - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let t = DEFAULT_DIFF_TOL;
        assert_eq!(finite_diff_strict_order(&[1.0; 5], t), Ok(DiffOrder::Exact(0)));
        let squares = [0.0, 1.0, 4.0, 9.0, 16.0, 25.0];
        assert_eq!(finite_diff_strict_order(&squares, t), Ok(DiffOrder::Exact(2)));
        assert_eq!(finite_diff_strict_order(&[0.0; 3], t), Ok(DiffOrder::Exact(0)));
        assert_eq!(finite_diff_strict_order(&[1.0, 2.0, 4.0], t), Ok(DiffOrder::AtLeast(2)));
    }

    #[test]
    fn too_short() {
        assert_eq!(
            finite_diff_strict_order(&[3.0], 1e-8),
            Err(Error::SequenceTooShort { len: 1 })
        );
    }
}
