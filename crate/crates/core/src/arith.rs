//! Divisors, divisor power sums and Euler's totient.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use crate::error::{Error, Result};

/// A positive integer together with its sorted divisors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorProfile {
    pub a: u64,
    pub divisors: Vec<u64>,
}

fn positive(what: &'static str, v: i64) -> Result<u64> {
    if v <= 0 {
        Err(Error::NonPositive { what, value: v })
    } else {
        Ok(v as u64)
    }
}

/// Sorted divisors of `a`, by trial division up to `sqrt(a)`.
pub fn divisors(a: i64) -> Result<DivisorProfile> {
    let a = positive("a", a)?;
    Ok(DivisorProfile { a, divisors: divisors_of(a) })
}

pub(crate) fn divisors_of(a: u64) -> Vec<u64> {
    debug_assert!(a > 0);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= a {
        if a % d == 0 {
            small.push(d);
            if d * d != a {
                large.push(a / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `sigma_k(a)`: the sum of the `k`-th powers of the divisors of `a`.
pub fn sigma(k: u32, a: i64) -> Result<BigInt> {
    let a = positive("a", a)?;
    Ok(sigma_of(k, a))
}

pub(crate) fn sigma_of(k: u32, a: u64) -> BigInt {
    divisors_of(a).into_iter().fold(BigInt::zero(), |acc, d| acc + BigInt::from(d).pow(k))
}

/// Euler's totient via the prime factorization of `k`.
pub fn euler_phi(k: i64) -> Result<u64> {
    let k = positive("k", k)?;
    Ok(phi_of(k))
}

pub(crate) fn phi_of(mut k: u64) -> u64 {
    let mut result = k;
    let mut p = 2;
    while p * p <= k {
        if k % p == 0 {
            while k % p == 0 {
                k /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if k > 1 {
        result -= result / k;
    }
    result
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_divisors(a: u64) -> Vec<u64> {
        (1..=a).filter(|d| a % d == 0).collect()
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisors(1).unwrap().divisors, vec![1]);
        assert_eq!(divisors(6).unwrap().divisors, vec![1, 2, 3, 6]);
        assert_eq!(divisors(12).unwrap().divisors, brute_divisors(12));
        assert_eq!(divisors(12).unwrap().divisors, vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(49).unwrap().divisors, vec![1, 7, 49]);
        assert!(divisors(0).is_err());
        assert!(divisors(-3).is_err());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(1, 1).unwrap(), BigInt::from(1));
        assert_eq!(sigma(1, 4).unwrap(), BigInt::from(1 + 2 + 4));
        assert_eq!(sigma(3, 2).unwrap(), BigInt::from(1 + 8));
        assert_eq!(sigma(0, 12).unwrap(), BigInt::from(6));
        assert!(sigma(1, 0).is_err());
    }

    #[test]
    fn phi_examples() {
        let brute = |k: u64| (1..=k).filter(|j| gcd(*j, k) == 1).count() as u64;
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(2).unwrap(), 1);
        assert_eq!(euler_phi(12).unwrap(), brute(12));
        assert_eq!(euler_phi(12).unwrap(), 4);
        for k in 1..=300 {
            assert_eq!(phi_of(k), brute(k), "phi({k})");
        }
        assert!(euler_phi(0).is_err());
    }

    #[test]
    fn totient_sums_to_identity() {
        for a in 1..=10_000u64 {
            let s: u64 = divisors_of(a).into_iter().map(phi_of).sum();
            assert_eq!(s, a);
        }
    }

    #[test]
    fn divisors_match_brute_force() {
        for a in 1..=500 {
            assert_eq!(divisors_of(a), brute_divisors(a));
        }
    }

    proptest! {
        #[test]
        fn sigma_multiplicative(a in 1u64..=1000, b in 1u64..=1000, k in 0u32..=5) {
            prop_assume!(gcd(a, b) == 1);
            prop_assert_eq!(sigma_of(k, a * b), sigma_of(k, a) * sigma_of(k, b));
        }
    }
}
