//! Exact numbers: rationals, places of Q, certified intervals, univariate
//! polynomials, complex root isolation, number fields and algebraic numbers.

pub mod algebraic;
pub mod cyclotomic;
pub mod factor;
pub mod fixed;
pub mod interval;
pub mod numfield;
pub mod place;
pub mod primes;
pub mod roots;
pub mod unipoly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use algebraic::{find_expanding_place, is_root_of_unity, AlgebraicNumber, ExpandingPlace, RootOfUnity};
pub use interval::RealInterval;
pub use numfield::{NfElem, NumberField};
pub use place::{abs_at_place, product_formula_check, Place, ProductFormula};
pub use unipoly::UniPoly;

/// Exact rational number, always stored in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Total bit size of numerator and denominator.
pub fn bit_size(q: &Rational) -> u64 {
    q.numer().bits() + q.denom().bits()
}

/// Parses "a" or "a/b" into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().ok()?;
        let b: BigInt = b.trim().parse().ok()?;
        if b.is_zero() {
            return None;
        }
        Some(Rational::new(a, b))
    } else {
        let a: BigInt = s.parse().ok()?;
        Some(Rational::from_integer(a))
    }
}

pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Floor of log2 |q| for nonzero q.
pub fn floor_log2(q: &Rational) -> i64 {
    debug_assert!(!q.is_zero());
    let n = q.numer().abs();
    let d = q.denom();
    let mut e = n.bits() as i64 - d.bits() as i64;
    // 2^e <= |q| < 2^(e+1) after adjustment
    if e >= 0 {
        if n < (d << e as usize) {
            e -= 1;
        }
    } else if (n << (-e) as usize) < *d {
        e -= 1;
    }
    e
}

/// Approximate conversion used only for display and heuristics.
pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        let e = floor_log2(q);
        let scaled = if e > 0 {
            q / Rational::from_integer(BigInt::one() << e as usize)
        } else {
            q * Rational::from_integer(BigInt::one() << (-e) as usize)
        };
        scaled.to_f64().unwrap_or(0.0) * 2f64.powi(e as i32)
    })
}

/// Nonnegative integer power of two as a rational (negative exponents allowed).
pub fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << e as usize)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}
