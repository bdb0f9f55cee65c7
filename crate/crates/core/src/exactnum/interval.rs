//! Closed real intervals with exact rational endpoints.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use super::{fixed, fmt_rational, to_f64, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealInterval {
    lo: Rational,
    hi: Rational,
}

impl RealInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "inverted interval");
        RealInterval { lo, hi }
    }

    pub fn point(q: Rational) -> Self {
        RealInterval { lo: q.clone(), hi: q }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    /// True when the intervals are within `slack` of each other.
    pub fn overlaps(&self, other: &RealInterval, slack: &Rational) -> bool {
        &self.lo <= &(&other.hi + slack) && &other.lo <= &(&self.hi + slack)
    }

    pub fn hull(&self, other: &RealInterval) -> RealInterval {
        RealInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn intersect(&self, other: &RealInterval) -> Option<RealInterval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(RealInterval { lo, hi })
    }

    /// Clamps to [0, ∞) for quantities known to be nonnegative.
    pub fn clamp_nonneg(&self) -> RealInterval {
        let z = Rational::zero();
        RealInterval {
            lo: self.lo.clone().max(z.clone()),
            hi: self.hi.clone().max(z),
        }
    }

    pub fn add(&self, other: &RealInterval) -> RealInterval {
        RealInterval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn sub(&self, other: &RealInterval) -> RealInterval {
        RealInterval { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    pub fn neg(&self) -> RealInterval {
        RealInterval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn scale(&self, q: &Rational) -> RealInterval {
        let a = &self.lo * q;
        let b = &self.hi * q;
        if q.is_negative() {
            RealInterval { lo: b, hi: a }
        } else {
            RealInterval { lo: a, hi: b }
        }
    }

    pub fn mul(&self, other: &RealInterval) -> RealInterval {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RealInterval { lo, hi }
    }

    /// Widens both endpoints by `r >= 0`.
    pub fn widen(&self, r: &Rational) -> RealInterval {
        RealInterval { lo: &self.lo - r, hi: &self.hi + r }
    }

    /// Enclosure of ln q for q > 0, of width at most about 2^-bits.
    pub fn ln(q: &Rational, bits: u32) -> RealInterval {
        fixed::ln_rational(q, bits)
    }

    /// Enclosure of ln over a positive interval.
    pub fn ln_of(&self, bits: u32) -> RealInterval {
        assert!(self.lo.is_positive(), "logarithm of a non-positive interval");
        let a = fixed::ln_rational(&self.lo, bits);
        if self.is_point() {
            return a;
        }
        let b = fixed::ln_rational(&self.hi, bits);
        RealInterval { lo: a.lo, hi: b.hi }
    }

    pub fn cmp_zero(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn lo_f64(&self) -> f64 {
        to_f64(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        to_f64(&self.hi)
    }

    pub fn mid_f64(&self) -> f64 {
        to_f64(&self.mid())
    }

    pub fn width_f64(&self) -> f64 {
        to_f64(&self.width())
    }

    /// f64 bounds rounded outward so that [lo, hi] contains the interval.
    pub fn outer_f64(&self) -> (f64, f64) {
        let mut lo = to_f64(&self.lo);
        if Rational::from_float(lo).is_none_or(|r| r > self.lo) {
            lo = lo.next_down();
        }
        let mut hi = to_f64(&self.hi);
        if Rational::from_float(hi).is_none_or(|r| r < self.hi) {
            hi = hi.next_up();
        }
        (lo, hi)
    }

    pub fn lo_string(&self) -> String {
        fmt_rational(&self.lo)
    }

    pub fn hi_string(&self) -> String {
        fmt_rational(&self.hi)
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{}", fmt_rational(&self.lo))
        } else {
            write!(f, "[{:.15e}, {:.15e}]", self.lo_f64(), self.hi_f64())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outer_bounds() {
        let iv = RealInterval::new(rat(1, 3), rat(2, 3));
        let (lo, hi) = iv.outer_f64();
        assert!(Rational::from_float(lo).unwrap() <= rat(1, 3));
        assert!(Rational::from_float(hi).unwrap() >= rat(2, 3));
        assert_eq!(RealInterval::point(rat(1, 2)).outer_f64(), (0.5, 0.5));
    }
    use crate::exactnum::{int, rat};

    #[test]
    fn arithmetic() {
        let a = RealInterval::new(rat(-1, 2), int(2));
        let b = RealInterval::new(int(1), int(3));
        assert_eq!(a.mul(&b), RealInterval::new(rat(-3, 2), int(6)));
        assert_eq!(a.sub(&b), RealInterval::new(rat(-7, 2), int(1)));
        assert_eq!(a.scale(&int(-2)), RealInterval::new(int(-4), int(1)));
        assert_eq!(a.clamp_nonneg(), RealInterval::new(int(0), int(2)));
        assert!(a.overlaps(&RealInterval::point(int(3)), &int(1)));
        assert!(!a.overlaps(&RealInterval::point(int(3)), &rat(1, 2)));
    }

    #[test]
    fn ln_encloses_reference() {
        for (q, v) in [(int(3), 3f64.ln()), (rat(1, 7), (1.0f64 / 7.0).ln()), (int(1), 0.0)] {
            let e = RealInterval::ln(&q, 80);
            assert!(e.lo_f64() <= v + 1e-15 && v - 1e-15 <= e.hi_f64());
            assert!(e.width_f64() < 1e-20);
        }
    }
}
