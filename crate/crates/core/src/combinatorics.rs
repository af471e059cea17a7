//! Binomial coefficients and Stirling numbers of the second kind.
//!
//! Stirling numbers come in two independent flavours: [`stirling2`] uses the
//! triangle recurrence `S(n,k) = k S(n-1,k) + S(n-1,k-1)` and
//! [`stirling2_closed`] the alternating sum over surjections. They are meant
//! to be cross-checked against each other.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::{Error, Integer, Result};

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> Result<Integer> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!(
            "binomial: n must be nonnegative, got {n}"
        )));
    }
    if k < 0 || k > n {
        return Ok(Integer::zero());
    }
    let k = k.min(n - k);
    let mut acc = Integer::one();
    // acc = C(n - k + i, i) after step i; each division is exact
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    Ok(acc)
}

/// Binomial coefficient that treats every out-of-range argument, including
/// negative `n`, as zero. Used inside summations whose index runs past the
/// support of the terms.
pub(crate) fn binomial_or_zero(n: i64, k: i64) -> Integer {
    binomial(n, k).unwrap_or_else(|_| Integer::zero())
}

/// `n!`
pub fn factorial(n: u64) -> Integer {
    (2..=n).fold(Integer::one(), |acc, i| acc * i)
}

/// Stirling number of the second kind via the triangle recurrence.
pub fn stirling2(n: u64, k: u64) -> Integer {
    if k > n {
        return Integer::zero();
    }
    if n == 0 {
        return Integer::one();
    }
    if k == 0 {
        return Integer::zero();
    }
    let k = k as usize;
    // row[j] holds S(i, j) for the current i
    let mut row = vec![Integer::zero(); k + 1];
    row[0] = Integer::one();
    for i in 1..=n as usize {
        for j in (1..=k.min(i)).rev() {
            let carried = &row[j] * j;
            row[j] = carried + &row[j - 1];
        }
        row[0] = Integer::zero();
    }
    row.swap_remove(k)
}

/// Stirling number of the second kind via
/// `S(n,k) = (1/k!) * sum_j (-1)^(k-j) C(k,j) j^n`.
///
/// Fails with [`Error::Arithmetic`] if the alternating sum is not divisible
/// by `k!`, which can only happen through an arithmetic bug.
pub fn stirling2_closed(n: u64, k: u64) -> Result<Integer> {
    let kk = k as i64;
    let mut sum = Integer::zero();
    for j in 0..=kk {
        let term = binomial(kk, j)? * BigInt::from(j).pow(n as u32);
        if (kk - j) % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let denom = factorial(k);
    let (q, r) = sum.div_rem(&denom);
    if !r.is_zero() {
        return Err(Error::Arithmetic(format!(
            "alternating sum for S({n},{k}) is not divisible by {k}!"
        )));
    }
    debug_assert!(!q.is_negative());
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts set partitions of `{0..n}` into exactly `k` blocks by
    /// assigning each element to a block as a restricted growth string.
    fn brute_force_partitions(n: usize, k: usize) -> u64 {
        fn go(i: usize, n: usize, k: usize, used: usize) -> u64 {
            if i == n {
                return u64::from(used == k);
            }
            let mut total = 0;
            for b in 0..=used.min(k - 1) {
                total += go(i + 1, n, k, used.max(b + 1));
            }
            total
        }
        if k == 0 {
            return u64::from(n == 0);
        }
        go(0, n, k, 0)
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2).unwrap(), 6.into());
        assert_eq!(binomial(7, 0).unwrap(), 1.into());
        assert_eq!(binomial(5, 7).unwrap(), 0.into());
        assert_eq!(binomial(5, -1).unwrap(), 0.into());
        assert!(binomial(-1, 0).is_err());
        assert_eq!(binomial_or_zero(-3, 1), 0.into());
    }

    #[test]
    fn binomial_pascal() {
        for n in 1..40 {
            for k in -1..=n + 1 {
                assert_eq!(
                    binomial(n, k).unwrap(),
                    binomial(n - 1, k - 1).unwrap() + binomial(n - 1, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn stirling_matches_enumeration() {
        assert_eq!(brute_force_partitions(3, 2), 3);
        assert_eq!(brute_force_partitions(4, 2), 7);
        for n in 0..=9 {
            for k in 0..=n + 1 {
                let expected = Integer::from(brute_force_partitions(n, k));
                assert_eq!(stirling2(n as u64, k as u64), expected, "S({n},{k})");
            }
        }
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling2(3, 2), 3.into());
        assert_eq!(stirling2(4, 2), 7.into());
        assert_eq!(stirling2(0, 0), 1.into());
        assert_eq!(stirling2(5, 0), 0.into());
        assert_eq!(stirling2(3, 5), 0.into());
        for n in 0..12 {
            assert_eq!(stirling2(n, n), 1.into());
        }
        assert_eq!(stirling2_closed(4, 2).unwrap(), 7.into());
        assert_eq!(stirling2_closed(5, 1).unwrap(), 1.into());
        assert_eq!(stirling2_closed(6, 6).unwrap(), 1.into());
        assert_eq!(stirling2_closed(0, 0).unwrap(), 1.into());
    }

    #[test]
    fn two_stirling_routes_agree() {
        for n in 0..=30 {
            for k in 0..=n {
                assert_eq!(stirling2(n, k), stirling2_closed(n, k).unwrap());
            }
        }
    }

    #[test]
    fn values_exceed_u64() {
        let big = stirling2(60, 7);
        assert!(big > Integer::from(u64::MAX));
        assert_eq!(big, stirling2_closed(60, 7).unwrap());
    }

    #[test]
    fn alternating_binomial_identity() {
        for n in 1..=25i64 {
            for k in 0..n {
                let lhs = (0..=k).fold(Integer::zero(), |acc, j| {
                    let t = binomial(n, j).unwrap();
                    if j % 2 == 0 { acc + t } else { acc - t }
                });
                let rhs = binomial(n - 1, k).unwrap();
                let rhs = if k % 2 == 0 { rhs } else { -rhs };
                assert_eq!(lhs, rhs, "N={n} K={k}");
            }
        }
    }
}
