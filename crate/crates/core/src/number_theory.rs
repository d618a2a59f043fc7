//! Integer oracles: divisor sums, partition numbers, and four-square
//! representation counts by direct enumeration.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Largest `n` accepted by [`r4_bruteforce`]. Enumeration is `O(n^{3/2})`.
pub const R4_BRUTEFORCE_MAX: u64 = 1_000_000;

/// Which divisor-power sum to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DivisorSumKind {
    /// `sigma(n) = sum_{d | n} d`
    Sigma1,
    /// `sigma_3(n) = sum_{d | n} d^3`
    Sigma3,
}

impl DivisorSumKind {
    pub fn exponent(self) -> u32 {
        match self {
            DivisorSumKind::Sigma1 => 1,
            DivisorSumKind::Sigma3 => 3,
        }
    }
}

fn positive(n: i64, what: &str) -> Result<u64> {
    if n <= 0 {
        Err(Error::Precondition(format!("{what} needs n >= 1, got {n}")))
    } else {
        Ok(n as u64)
    }
}

/// Positive divisors of `n` in increasing order, by trial division up to `sqrt(n)`.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn divisor_sum(kind: DivisorSumKind, n: i64) -> Result<BigInt> {
    let n = positive(n, "divisor_sum")?;
    let e = kind.exponent();
    Ok(divisors(n)
        .into_iter()
        .map(|d| BigInt::from(d).pow(e))
        .sum())
}

pub fn sigma(n: i64) -> Result<BigInt> {
    divisor_sum(DivisorSumKind::Sigma1, n)
}

pub fn sigma3(n: i64) -> Result<BigInt> {
    divisor_sum(DivisorSumKind::Sigma3, n)
}

/// `[0, f(1), ..., f(n)]` for the chosen divisor sum, by a divisor sieve.
pub fn divisor_sum_table(kind: DivisorSumKind, n: usize) -> Vec<BigInt> {
    let e = kind.exponent();
    let mut table = vec![BigInt::zero(); n + 1];
    for d in 1..=n {
        let power = BigInt::from(d).pow(e);
        for m in (d..=n).step_by(d) {
            table[m] += &power;
        }
    }
    table
}

/// `8 * sum of the divisors of n that are not multiples of 4`.
pub fn jacobi_count(n: i64) -> Result<BigInt> {
    let n = positive(n, "jacobi_count")?;
    let s: BigInt = divisors(n)
        .into_iter()
        .filter(|d| d % 4 != 0)
        .map(BigInt::from)
        .sum();
    Ok(s * 8)
}

/// Partition numbers `p(0), ..., p(n)` from Euler's pentagonal recurrence
/// `p(m) = sum_{k>=1} (-1)^{k+1} [p(m - k(3k-1)/2) + p(m - k(3k+1)/2)]`.
pub fn partition_numbers(n: usize) -> Vec<BigInt> {
    let mut p: Vec<BigInt> = Vec::with_capacity(n + 1);
    p.push(BigInt::from(1));
    for m in 1..=n {
        let mut acc = BigInt::zero();
        let mut k = 1usize;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let mut term = p[m - g1].clone();
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= m {
                term += &p[m - g2];
            }
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
            k += 1;
        }
        p.push(acc);
    }
    p
}

pub fn partitions(n: usize) -> BigInt {
    partition_numbers(n).pop().expect("p(0) is always present")
}

/// Number of `(a, b, c, d) in Z^4` with `a^2 + b^2 + c^2 + d^2 = n`.
///
/// Enumerates `a, b, c >= 0` with the running residual kept non-negative,
/// solves for `d` with an integer square root, and weights each solution by
/// `2^(number of nonzero entries)` for the sign choices.
pub fn r4_bruteforce(n: u64) -> Result<BigInt> {
    if n > R4_BRUTEFORCE_MAX {
        return Err(Error::Precondition(format!(
            "r4_bruteforce supports n <= {R4_BRUTEFORCE_MAX}, got {n}"
        )));
    }
    let signs = |x: u64| if x == 0 { 1u64 } else { 2 };
    let mut count = 0u64;
    let mut a = 0u64;
    while a * a <= n {
        let ra = n - a * a;
        let mut b = 0u64;
        while b * b <= ra {
            let rb = ra - b * b;
            let mut c = 0u64;
            while c * c <= rb {
                let rc = rb - c * c;
                let d = rc.sqrt();
                if d * d == rc {
                    count += signs(a) * signs(b) * signs(c) * signs(d);
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    Ok(BigInt::from(count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    /// Literal signed enumeration over the full cube, for small n.
    fn r4_cube(n: i64) -> i64 {
        let s = (n as f64).sqrt() as i64 + 1;
        let mut count = 0;
        for a in -s..=s {
            for b in -s..=s {
                for c in -s..=s {
                    for d in -s..=s {
                        if a * a + b * b + c * c + d * d == n {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    /// Counts partitions of n into parts of size at most `max`.
    fn count_partitions(n: usize, max: usize) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=max.min(n)).map(|k| count_partitions(n - k, k)).sum()
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(1).unwrap(), big(1));
        assert_eq!(sigma(9).unwrap(), big(13));
        assert_eq!(sigma(7).unwrap(), big(8));
        assert_eq!(sigma3(1).unwrap(), big(1));
        assert_eq!(sigma3(2).unwrap(), big(1 + 8));
        assert_eq!(sigma3(6).unwrap(), big(1 + 8 + 27 + 216));
    }

    #[test]
    fn nonpositive_inputs_rejected() {
        for n in [0, -1, -12] {
            assert!(sigma(n).is_err());
            assert!(sigma3(n).is_err());
            assert!(jacobi_count(n).is_err());
        }
    }

    #[test]
    fn sieve_matches_trial_division() {
        for kind in [DivisorSumKind::Sigma1, DivisorSumKind::Sigma3] {
            let table = divisor_sum_table(kind, 500);
            assert_eq!(table[0], big(0));
            for n in 1..=500 {
                assert_eq!(table[n], divisor_sum(kind, n as i64).unwrap());
            }
        }
    }

    #[test]
    fn divisors_sorted() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    #[test]
    fn partition_examples() {
        assert_eq!(partitions(0), big(1));
        assert_eq!(partitions(5), big(count_partitions(5, 5) as i64));
        assert_eq!(partitions(5), big(7));
        assert_eq!(partitions(6), big(11));
        for n in 0..30 {
            assert_eq!(partitions(n), big(count_partitions(n, n) as i64), "p({n})");
        }
    }

    #[test]
    fn r4_examples() {
        assert_eq!(r4_bruteforce(0).unwrap(), big(1));
        assert_eq!(r4_bruteforce(1).unwrap(), big(8));
        assert_eq!(r4_bruteforce(2).unwrap(), big(24));
        for n in 0..=40 {
            assert_eq!(r4_bruteforce(n as u64).unwrap(), big(r4_cube(n)), "n = {n}");
        }
        assert!(r4_bruteforce(R4_BRUTEFORCE_MAX + 1).is_err());
    }

    #[test]
    fn jacobi_count_examples() {
        assert_eq!(jacobi_count(1).unwrap(), big(8));
        assert_eq!(jacobi_count(2).unwrap(), big(8 * (1 + 2)));
        assert_eq!(jacobi_count(10).unwrap(), big(8 * (1 + 2 + 5 + 10)));
    }

    #[test]
    fn jacobi_matches_bruteforce_to_2000() {
        for n in 1..=2000u64 {
            let brute = r4_bruteforce(n).unwrap();
            assert_eq!(brute, jacobi_count(n as i64).unwrap(), "n = {n}");
            assert!(brute >= big(1));
        }
    }

    proptest! {
        #[test]
        fn doubling_identity(a in -10_000i64..10_000, b in -10_000i64..10_000,
                             c in -10_000i64..10_000, d in -10_000i64..10_000) {
            let lhs = 2 * (a * a + b * b + c * c + d * d);
            let rhs = (a + b).pow(2) + (a - b).pow(2) + (c + d).pow(2) + (c - d).pow(2);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn sigma_multiplicative(m in 1i64..3000, n in 1i64..3000) {
            prop_assume!(m.gcd(&n) == 1);
            prop_assert_eq!(sigma(m * n).unwrap(), sigma(m).unwrap() * sigma(n).unwrap());
            prop_assert_eq!(sigma3(m * n).unwrap(), sigma3(m).unwrap() * sigma3(n).unwrap());
        }
    }
}
