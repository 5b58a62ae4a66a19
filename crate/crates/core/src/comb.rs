//! Exact binomial coefficients in 128-bit arithmetic.

use crate::error::{Error, Result};

/// Computes C(n, k) exactly, erroring on u128 overflow.
///
/// The multiplicative form keeps every intermediate value an exact
/// integer: after multiplying by (n - k + i) the product is divisible
/// by i.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc
            .checked_mul(u128::from(n - k + i))
            .ok_or(Error::BinomialOverflow { n, k })?;
        acc /= u128::from(i);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial(4, 1).unwrap(), 4);
        assert_eq!(binomial(4, 2).unwrap(), 6);
        assert_eq!(binomial(10, 2).unwrap(), 45);
        assert_eq!(binomial(2, 3).unwrap(), 0);
        assert_eq!(binomial(0, 0).unwrap(), 1);
        assert_eq!(binomial(7, 0).unwrap(), 1);
        assert_eq!(binomial(7, 7).unwrap(), 1);
    }

    #[test]
    fn matches_pascal_recurrence() {
        for n in 0..40u64 {
            for k in 0..=n {
                if k > 0 && k < n {
                    let lhs = binomial(n, k).unwrap();
                    let rhs = binomial(n - 1, k - 1).unwrap() + binomial(n - 1, k).unwrap();
                    assert_eq!(lhs, rhs, "C({n},{k})");
                }
            }
        }
    }

    #[test]
    fn overflow_is_an_error() {
        assert!(matches!(
            binomial(10_000_000_000, 5_000_000_000),
            Err(Error::BinomialOverflow { .. })
        ));
    }

    #[test]
    fn large_exact_value() {
        // C(67, 31) computed with big-integer arithmetic externally.
        assert_eq!(binomial(67, 31).unwrap(), 11_923_179_284_862_717_872);
    }
}
