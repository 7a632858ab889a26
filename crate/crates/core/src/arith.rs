//! Prime-field arithmetic helpers: base-p digit manipulation, multinomial
//! coefficients mod p, and exact prime-power-in-interval queries.
//!
//! Multinomial residues and divisibility are computed by two independent
//! routes (digit-wise products vs. carry counting) so that one can validate
//! the other.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("multinomial parts sum to {parts_sum}, expected {top}")]
    PartsMismatch { top: u64, parts_sum: u128 },
}

/// Decomposition `d = quotient * p + remainder` with `1 <= remainder <= p`.
///
/// The remainder is `p`, never 0, when `p` divides `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PAdicSplit {
    pub quotient: u64,
    pub remainder: u64,
}

/// Splits `d >= 1` against `p >= 2` with the remainder in `1..=p`.
pub fn split_mod_p(d: u64, p: u64) -> PAdicSplit {
    debug_assert!(d >= 1, "split requires d >= 1");
    debug_assert!(p >= 2, "split requires p >= 2");
    let remainder = (d - 1) % p + 1;
    let quotient = (d - remainder) / p;
    PAdicSplit { quotient, remainder }
}

/// Base-p digits of `v`, least significant first. `0` has no digits.
fn base_p_digits(mut v: u64, p: u64) -> Vec<u64> {
    let mut digits = Vec::new();
    while v > 0 {
        digits.push(v % p);
        v /= p;
    }
    digits
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    base %= p;
    let mut acc = 1 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn factorial_mod(n: u64, p: u64) -> u64 {
    (2..=n).fold(1 % p, |acc, k| mul_mod(acc, k, p))
}

/// Multinomial coefficient of a single base-p digit position. All inputs are
/// below `p`, so the factorials are units and Fermat inversion applies.
fn digit_multinomial_mod(top: u64, parts: &[u64], p: u64) -> u64 {
    debug_assert!(top < p && parts.iter().all(|&k| k < p));
    debug_assert_eq!(top, parts.iter().sum::<u64>());
    let mut acc = factorial_mod(top, p);
    for &k in parts {
        acc = mul_mod(acc, pow_mod(factorial_mod(k, p), p - 2, p), p);
    }
    acc
}

fn checked_parts_sum(top: u64, parts: &[u64]) -> Result<(), ArithError> {
    let parts_sum: u128 = parts.iter().map(|&k| k as u128).sum();
    if parts_sum != top as u128 {
        return Err(ArithError::PartsMismatch { top, parts_sum });
    }
    Ok(())
}

/// `top! / (parts[0]! * ... * parts[r]!) mod p` by the digit-wise product
/// rule: the residue is the product over base-p digit positions of the digit
/// multinomials, and is 0 as soon as the digits of the parts fail to sum to
/// the digit of `top` without carry.
pub fn multinomial_mod_p(top: u64, parts: &[u64], p: u64) -> Result<u64, ArithError> {
    debug_assert!(p >= 2);
    checked_parts_sum(top, parts)?;
    let top_digits = base_p_digits(top, p);
    let part_digits: Vec<Vec<u64>> = parts.iter().map(|&k| base_p_digits(k, p)).collect();
    let mut acc = 1 % p;
    let mut position_parts = Vec::with_capacity(parts.len());
    for (pos, &top_digit) in top_digits.iter().enumerate() {
        position_parts.clear();
        position_parts.extend(
            part_digits
                .iter()
                .map(|digits| digits.get(pos).copied().unwrap_or(0)),
        );
        if position_parts.iter().sum::<u64>() != top_digit {
            return Ok(0);
        }
        acc = mul_mod(acc, digit_multinomial_mod(top_digit, &position_parts, p), p);
    }
    Ok(acc)
}

/// Number of carries when the parts are added together one at a time in
/// base p. The carry count equals the p-adic valuation of the multinomial
/// coefficient, but this routine never forms the coefficient itself; it is
/// the independent cross-check for [`multinomial_mod_p`].
pub fn multinomial_carry_count(top: u64, parts: &[u64], p: u64) -> Result<u64, ArithError> {
    debug_assert!(p >= 2);
    checked_parts_sum(top, parts)?;
    let mut carries = 0u64;
    let mut acc = 0u64;
    for &part in parts {
        let mut a = acc;
        let mut b = part;
        let mut carry = 0u64;
        while a > 0 || b > 0 || carry > 0 {
            let s = a % p + b % p + carry;
            carry = u64::from(s >= p);
            carries += carry;
            a /= p;
            b /= p;
        }
        acc += part;
    }
    Ok(carries)
}

/// Whether p divides the multinomial coefficient, decided by carry counting.
pub fn multinomial_divisible_by_p(top: u64, parts: &[u64], p: u64) -> Result<bool, ArithError> {
    Ok(multinomial_carry_count(top, parts, p)? > 0)
}

/// Exact rational bound `num / den` with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    num: i64,
    den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den > 0, "rational bounds require a positive denominator");
        Rational { num, den }
    }

    pub fn integer(num: i64) -> Self {
        Rational { num, den: 1 }
    }

    /// `self < v`, by cross multiplication.
    pub fn less_than(&self, v: u64) -> bool {
        (self.num as i128) < v as i128 * self.den as i128
    }

    /// `v < self`, by cross multiplication.
    pub fn greater_than(&self, v: u64) -> bool {
        v as i128 * (self.den as i128) < self.num as i128
    }
}

/// Least `e >= 1` with `lo < p^e < hi`, or `None`. Comparisons are exact
/// integer cross multiplications; no floating point is involved.
pub fn exists_prime_power_in_open_interval(p: u64, lo: Rational, hi: Rational) -> Option<u32> {
    debug_assert!(p >= 2);
    let mut power: u64 = 1;
    for e in 1..=127u32 {
        // An overflowing power already exceeds any representable bound.
        power = power.checked_mul(p)?;
        if !hi.greater_than(power) {
            return None;
        }
        if lo.less_than(power) {
            return Some(e);
        }
    }
    None
}

/// Deterministic Miller-Rabin primality test, valid for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    /// Exact multinomial via big-integer factorials; the reference the fast
    /// routes are checked against.
    fn multinomial_exact_mod(top: u64, parts: &[u64], p: u64) -> u64 {
        let fact = |n: u64| (1..=n).map(BigUint::from).product::<BigUint>();
        let mut v = fact(top);
        for &k in parts {
            v /= fact(k);
        }
        (v % BigUint::from(p)).try_into().unwrap()
    }

    #[test]
    fn split_examples() {
        assert_eq!(split_mod_p(12, 5), PAdicSplit { quotient: 2, remainder: 2 });
        assert_eq!(split_mod_p(9, 5), PAdicSplit { quotient: 1, remainder: 4 });
        assert_eq!(split_mod_p(10, 5), PAdicSplit { quotient: 1, remainder: 5 });
        assert_eq!(split_mod_p(3, 3), PAdicSplit { quotient: 0, remainder: 3 });
        assert_eq!(split_mod_p(1, 7), PAdicSplit { quotient: 0, remainder: 1 });
    }

    #[test]
    fn split_round_trip() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for d in 1..200 {
                let s = split_mod_p(d, p);
                assert_eq!(s.quotient * p + s.remainder, d);
                assert!((1..=p).contains(&s.remainder));
            }
        }
    }

    #[test]
    fn multinomial_examples() {
        // 8!/(1!1!1!5!) = 336 = 67*5 + 1.
        assert_eq!(multinomial_mod_p(8, &[1, 1, 1, 5], 5), Ok(1));
        assert_eq!(multinomial_exact_mod(8, &[1, 1, 1, 5], 5), 1);
        assert_eq!(multinomial_mod_p(15, &[1, 2, 2, 5, 5], 5), Ok(0));
        assert_eq!(
            multinomial_mod_p(14, &[2, 2, 5, 5], 5),
            Ok(multinomial_exact_mod(14, &[2, 2, 5, 5], 5))
        );
        for (d, p) in [(7, 3), (25, 5), (1, 2), (100, 13)] {
            assert_eq!(multinomial_mod_p(d, &[d], p), Ok(1 % p));
        }
        assert_eq!(
            multinomial_mod_p(5, &[1, 2], 7),
            Err(ArithError::PartsMismatch { top: 5, parts_sum: 3 })
        );
    }

    #[test]
    fn divisibility_examples() {
        assert_eq!(multinomial_divisible_by_p(8, &[1, 1, 1, 5], 5), Ok(false));
        assert_eq!(multinomial_divisible_by_p(14, &[2, 2, 5, 5], 5), Ok(false));
        assert_eq!(multinomial_divisible_by_p(15, &[1, 2, 2, 5, 5], 5), Ok(true));
    }

    /// The two independent routes and the exact reference agree on a dense
    /// grid of small compositions.
    #[test]
    fn digit_rule_matches_carry_rule_and_exact() {
        for p in [2u64, 3, 5, 7] {
            for top in 0..=36u64 {
                for a in 0..=top {
                    for b in 0..=(top - a) {
                        let c = top - a - b;
                        let parts = [a, b, c];
                        let fast = multinomial_mod_p(top, &parts, p).unwrap();
                        let exact = multinomial_exact_mod(top, &parts, p);
                        assert_eq!(fast, exact, "top={top} parts={parts:?} p={p}");
                        let div = multinomial_divisible_by_p(top, &parts, p).unwrap();
                        assert_eq!(div, fast == 0, "top={top} parts={parts:?} p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn prime_power_interval_examples() {
        // 3/2 < 2^1 < 3
        assert_eq!(
            exists_prime_power_in_open_interval(2, Rational::new(3, 2), Rational::integer(3)),
            Some(1)
        );
        // no power of 5 strictly between 3 and 4
        assert_eq!(
            exists_prime_power_in_open_interval(5, Rational::integer(3), Rational::integer(4)),
            None
        );
        // 8 < 3^2 < 10
        assert_eq!(
            exists_prime_power_in_open_interval(3, Rational::integer(8), Rational::integer(10)),
            Some(2)
        );
        // least exponent is reported: 8 < 2^4 = 16 < 100 but 2^4 is preceded by none in range
        assert_eq!(
            exists_prime_power_in_open_interval(2, Rational::integer(8), Rational::integer(100)),
            Some(4)
        );
        // unbounded growth without overflow panics
        assert_eq!(
            exists_prime_power_in_open_interval(2, Rational::new(i64::MAX, 1), Rational::new(i64::MAX, 1)),
            None
        );
    }

    #[test]
    fn primality_spot_checks() {
        let primes = [2u64, 3, 5, 7, 11, 13, 65521, 2_147_483_647];
        let composites = [0u64, 1, 4, 9, 15, 65535, 65521 * 3, 2_147_483_647u64 * 2];
        for p in primes {
            assert!(is_prime(p), "{p} is prime");
        }
        for c in composites {
            assert!(!is_prime(c), "{c} is composite");
        }
    }

    #[test]
    fn carry_count_is_p_adic_valuation() {
        // v_5(10!/(5!5!)) = v_5(252) = 0; v_5(10!/(2!8!)) = v_5(45) = 1.
        assert_eq!(multinomial_carry_count(10, &[5, 5], 5), Ok(0));
        assert_eq!(multinomial_carry_count(10, &[2, 8], 5), Ok(1));
        // v_2(binom(4,2)) = v_2(6) = 1; v_2(binom(8,4)) = v_2(70) = 1.
        assert_eq!(multinomial_carry_count(4, &[2, 2], 2), Ok(1));
        assert_eq!(multinomial_carry_count(8, &[4, 4], 2), Ok(1));
    }
}
