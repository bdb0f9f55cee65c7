//! Cyclotomic polynomials and the inverse of Euler's totient.

use num_traits::One;

use super::{Rational, UniPoly};

pub fn euler_phi(mut n: u64) -> u64 {
    let mut r = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

/// The n-th cyclotomic polynomial, n >= 1.
pub fn cyclotomic(n: u64) -> UniPoly {
    assert!(n >= 1);
    let mut f = &UniPoly::monomial(Rational::one(), n as usize) - &UniPoly::one();
    for d in 1..n {
        if n % d == 0 {
            f = f.div_exact(&cyclotomic(d)).expect("cyclotomic division");
        }
    }
    f
}

/// All n with phi(n) = m, in increasing order. Uses phi(n) >= sqrt(n/2).
pub fn inverse_phi(m: u64) -> Vec<u64> {
    let bound = 2 * m * m;
    (1..=bound.max(2)).filter(|&n| euler_phi(n) == m).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), UniPoly::from_ints(&[-1, 1]));
        assert_eq!(cyclotomic(2), UniPoly::from_ints(&[1, 1]));
        assert_eq!(cyclotomic(3), UniPoly::from_ints(&[1, 1, 1]));
        assert_eq!(cyclotomic(4), UniPoly::from_ints(&[1, 0, 1]));
        assert_eq!(cyclotomic(12), UniPoly::from_ints(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic(24).deg(), 8);
    }

    #[test]
    fn totient_inverse() {
        assert_eq!(inverse_phi(1), vec![1, 2]);
        assert_eq!(inverse_phi(2), vec![3, 4, 6]);
        assert_eq!(inverse_phi(4), vec![5, 8, 10, 12]);
        for n in 1..200 {
            assert!(inverse_phi(euler_phi(n)).contains(&n));
        }
    }
}
