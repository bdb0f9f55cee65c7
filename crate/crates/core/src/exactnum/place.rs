//! Places of the rationals, normalized so that |p|_p = 1/p.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{primes, Rational, RealInterval};
use crate::error::{Error, Result};

/// An absolute value on Q. Local degrees are all 1 over the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Archimedean,
    Finite(u64),
}

impl Place {
    pub fn finite(p: u64) -> Result<Self> {
        if primes::is_prime(p) {
            Ok(Place::Finite(p))
        } else {
            Err(Error::Precondition(format!("{p} is not prime")))
        }
    }

    pub fn local_degree(&self) -> u32 {
        1
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, Place::Archimedean)
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            Place::Archimedean => None,
            Place::Finite(p) => Some(*p),
        }
    }

    /// Parses "inf" / "∞" or a prime.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" || s.eq_ignore_ascii_case("infinity") {
            return Ok(Place::Archimedean);
        }
        let p: u64 = s
            .parse()
            .map_err(|_| Error::Precondition(format!("place `{s}` is neither `inf` nor a prime")))?;
        Place::finite(p)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Archimedean => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// |x|_v as an exact rational.
pub fn abs_exact(x: &Rational, v: Place) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    match v {
        Place::Archimedean => x.abs(),
        Place::Finite(p) => {
            let e = primes::valuation(x, p).expect("nonzero");
            let pp = BigInt::from(p);
            if e >= 0 {
                Rational::new(BigInt::one(), num_traits::pow(pp, e as usize))
            } else {
                Rational::from_integer(num_traits::pow(pp, (-e) as usize))
            }
        }
    }
}

/// |x|_v. Values of rationals are rational at every place, so the enclosure is a point.
pub fn abs_at_place(x: &Rational, v: Place) -> RealInterval {
    RealInterval::point(abs_exact(x, v))
}

/// Finite support of a nonzero rational together with the verified product.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductFormula {
    pub support: Vec<(Place, Rational)>,
    pub product: Rational,
}

/// Computes {v : |x|_v != 1} and checks that the product of |x|_v over it is exactly 1.
pub fn product_formula_check(x: &Rational) -> Result<ProductFormula> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut support = Vec::new();
    let arch = abs_exact(x, Place::Archimedean);
    if !arch.is_one() {
        support.push((Place::Archimedean, arch));
    }
    for p in primes::rational_support(x)? {
        support.push((Place::Finite(p), abs_exact(x, Place::Finite(p))));
    }
    let product = support.iter().fold(Rational::one(), |acc, (_, a)| acc * a);
    if !product.is_one() {
        return Err(Error::Precondition(format!("product formula failed for {x}")));
    }
    Ok(ProductFormula { support, product })
}
