use super::WeightVector;
use crate::error::{Error, Result};

/// Necessary conditions on a sorted `r` for some `f in M_{>=0}(r)` (`M_{>0}`
/// when `strict`) to have singular locus of dimension at most `s`:
///
/// 1. `t >= (n - s)/2 - 1`, where `t` is the last index with `r_t >= 0` (`> 0`);
/// 2. `r_0 + (d - 1) r_{n-1-s} >= 0` (`> 0`);
/// 3. `r_1 + ... + r_{n-2-s} >= 0` (`> 0`), skipped when `s = n - 2`.
///
/// A `false` result rules `r` out as a destabilizing direction for such `f`.
pub fn weight_inequality_filter(r: &WeightVector, s: usize, d: u32, strict: bool) -> Result<bool> {
    let n = r.n();
    if n < 2 || s > n - 2 {
        return Err(Error::InvalidArgument(format!("singular-locus dimension {s} outside [0, {}]", n.saturating_sub(2))));
    }
    if !r.is_sorted() {
        return Err(Error::Precondition(format!("weight vector {r} is not sorted descending")));
    }
    if d < 2 {
        return Err(Error::InvalidArgument(format!("degree {d} too small")));
    }
    let e = r.entries();
    let holds = |v: i128| if strict { v > 0 } else { v >= 0 };

    let Some(t) = r.last_nonnegative_index(strict) else {
        return Ok(false);
    };
    // t >= (n - s)/2 - 1  <=>  2(t + 1) >= n - s
    if 2 * (t + 1) < n - s {
        return Ok(false);
    }
    let second = i128::from(e[0]) + i128::from(d - 1) * i128::from(e[n - 1 - s]);
    if !holds(second) {
        return Ok(false);
    }
    if s < n - 2 {
        let third: i128 = e[1..=n - 2 - s].iter().map(|&x| i128::from(x)).sum();
        if !holds(third) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i64]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn example_certificate_passes() {
        assert!(weight_inequality_filter(&w(&[3, 1, -4]), 0, 3, false).unwrap());
        assert!(weight_inequality_filter(&w(&[3, 1, -4]), 0, 3, true).unwrap());
        assert!(weight_inequality_filter(&w(&[1, 0, -1]), 0, 3, false).unwrap());
    }

    #[test]
    fn too_few_nonnegative_weights() {
        assert!(!weight_inequality_filter(&w(&[5, -1, -1, -3]), 0, 3, false).unwrap());
    }

    #[test]
    fn third_condition() {
        // n = 4, s = 0: t = 1 passes, 6 + 2*(-1) >= 0 passes, r_1 + r_2 = -1 fails
        assert!(!weight_inequality_filter(&w(&[6, 0, -1, -1, -4]), 0, 3, false).unwrap());
        assert!(weight_inequality_filter(&w(&[6, 1, 0, -3, -4]), 0, 3, false).unwrap());
    }

    #[test]
    fn argument_errors() {
        assert!(matches!(weight_inequality_filter(&w(&[1, 3, -4]), 0, 3, false), Err(Error::Precondition(_))));
        assert!(matches!(weight_inequality_filter(&w(&[3, 1, -4]), 1, 3, false), Err(Error::InvalidArgument(_))));
    }
}
