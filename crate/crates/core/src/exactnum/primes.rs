//! Primality, integer factorization and p-adic valuations.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::Rational;
use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = (x.abs_diff(y)).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_u64(d, out);
    factor_u64(n / d, out);
}

/// Prime factorization of a nonzero integer (sign ignored), primes ascending.
///
/// Fails with [`Error::PrimeTooLarge`] if a cofactor above 2^64 survives trial division.
pub fn factor(n: &BigUint) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut n = n.clone();
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p < 1 << 16 {
        if n.is_one() {
            break;
        }
        let bp = BigUint::from(p);
        while (&n % &bp).is_zero() {
            n /= &bp;
            primes.push(p);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        let small = n.to_u64().ok_or(Error::PrimeTooLarge)?;
        factor_u64(small, &mut primes);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((r, e)) if *r == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    Ok(out)
}

pub fn prime_divisors(n: &BigInt) -> Result<Vec<u64>> {
    Ok(factor(n.magnitude())?.into_iter().map(|(p, _)| p).collect())
}

/// p-adic valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let bp = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&bp);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn valuation(q: &Rational, p: u64) -> Option<i64> {
    Some(int_valuation(q.numer(), p)? - int_valuation(q.denom(), p).unwrap_or(0))
}

/// Primes dividing the numerator or denominator of a nonzero rational.
pub fn rational_support(q: &Rational) -> Result<Vec<u64>> {
    let mut ps = prime_divisors(q.numer())?;
    ps.extend(prime_divisors(q.denom())?);
    ps.sort_unstable();
    ps.dedup();
    Ok(ps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn small_primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }

    #[test]
    fn factorization() {
        let n = BigUint::from(2u64 * 2 * 3 * 65537 * 1_000_000_007);
        assert_eq!(factor(&n).unwrap(), vec![(2, 2), (3, 1), (65537, 1), (1_000_000_007, 1)]);
        assert!(factor(&BigUint::zero()).is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&rat(12, 1), 3), Some(1));
        assert_eq!(valuation(&rat(1, 8), 2), Some(-3));
        assert_eq!(valuation(&rat(0, 1), 2), None);
        assert_eq!(rational_support(&rat(-49, 10)).unwrap(), vec![2, 5, 7]);
    }
}
