//! Elementary number theory backing the bound formulas and constructions:
//! trial-division primality and factorization, Euler's totient, modular
//! exponentiation, and the multiplicative order of 2.
//!
//! Everything here sees code lengths and their prime factors — small numbers
//! — so the quadratic-time algorithms are deliberate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumthError {
    #[error("order of 2 requires an odd modulus ≥ 3, got {0}")]
    BadModulus(u64),
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization as (prime, exponent) pairs in ascending prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize requires a positive integer");
    let mut factors = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push((n, 1));
    }
    factors
}

/// Euler's totient φ(n).
pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

/// base^exp mod modulus, with 128-bit intermediates.
pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    assert!(modulus >= 1, "modulus must be positive");
    let m = modulus as u128;
    let mut result = 1 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result as u64
}

/// Order data of 2 modulo an odd n ≥ 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderPair {
    pub n: u64,
    /// The least k ≥ 1 with 2^k ≡ 1 (mod n).
    pub order: u64,
    /// The least k with 2^k ≡ −1 (mod n) when −1 is a power of 2 — always
    /// exactly order/2 in that case — otherwise equal to `order`.
    pub suborder: u64,
}

/// Walks the powers of 2 modulo n until they return to 1.
pub fn orders(n: u64) -> Result<OrderPair, NumthError> {
    if n < 3 || n % 2 == 0 {
        return Err(NumthError::BadModulus(n));
    }
    let mut power = 2 % n;
    let mut k = 1;
    let mut suborder = None;
    while power != 1 {
        if power == n - 1 && suborder.is_none() {
            suborder = Some(k);
        }
        power = (power as u128 * 2 % n as u128) as u64;
        k += 1;
    }
    Ok(OrderPair {
        n,
        order: k,
        suborder: suborder.unwrap_or(k),
    })
}

/// A safe prime: p and (p−1)/2 both prime.
pub fn is_safe_prime(p: u64) -> bool {
    p >= 5 && is_prime(p) && is_prime((p - 1) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_values() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
    }

    #[test]
    fn factorization_examples() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert_eq!(factorize(1024), vec![(2, 10)]);
    }

    #[test]
    fn totient_examples() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(10), 4);
        assert_eq!(euler_phi(97), 96);
        assert_eq!(euler_phi(360), 96);
    }

    #[test]
    fn pow_mod_matches_naive() {
        for m in 1..30u64 {
            for b in 0..10 {
                let mut naive = 1 % m;
                for e in 0..12 {
                    assert_eq!(pow_mod(b, e, m), naive, "b={b} e={e} m={m}");
                    naive = naive * b % m;
                }
            }
        }
    }

    #[test]
    fn order_pairs_of_small_moduli() {
        let cases = [
            (3, 2, 1),
            (5, 4, 2),
            (7, 3, 3),
            (9, 6, 3),
            (11, 10, 5),
            (15, 4, 4),
            (17, 8, 4),
            (21, 6, 6),
            (23, 11, 11),
        ];
        for (n, order, suborder) in cases {
            assert_eq!(
                orders(n).unwrap(),
                OrderPair { n, order, suborder },
                "n = {n}"
            );
        }
        assert!(orders(1).is_err());
        assert!(orders(8).is_err());
    }

    #[test]
    fn order_pair_invariants() {
        // The order divides φ(n); the suborder is e or exactly e/2 and always
        // divides φ(n)/2 — checked exhaustively for odd n ≤ 999.
        for n in (3..1000u64).step_by(2) {
            let pair = orders(n).unwrap();
            assert_eq!(pow_mod(2, pair.order, n), 1 % n);
            assert_eq!(euler_phi(n) % pair.order, 0, "n = {n}");
            assert_eq!(euler_phi(n) / 2 % pair.suborder, 0, "n = {n}");
            assert!(
                pair.suborder == pair.order || pair.suborder * 2 == pair.order,
                "n = {n}"
            );
            if pair.suborder < pair.order {
                assert_eq!(pow_mod(2, pair.suborder, n), n - 1);
            }
        }
    }

    #[test]
    fn safe_primes_below_one_hundred() {
        let safe: Vec<u64> = (0..100).filter(|&p| is_safe_prime(p)).collect();
        assert_eq!(safe, vec![5, 7, 11, 23, 47, 59, 83]);
    }
}
