//! Fixed-point interval kernels with directed rounding, and logarithm enclosures.
//!
//! An `Fx` denotes the real interval [lo, hi] * 2^-prec. All operations round
//! outward so the exact result of the real operation stays enclosed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{floor_log2, pow2, Rational, RealInterval};

fn floor_shift(a: &BigInt, s: u32) -> BigInt {
    a >> s as usize
}

fn ceil_shift(a: &BigInt, s: u32) -> BigInt {
    -((-a) >> s as usize)
}

/// floor(q * 2^p) and ceil(q * 2^p).
fn scaled_bounds(q: &Rational, p: u32) -> (BigInt, BigInt) {
    let n = q.numer() << p as usize;
    let (f, r) = n.div_mod_floor(q.denom());
    if r.is_zero() {
        (f.clone(), f)
    } else {
        let c = &f + 1;
        (f, c)
    }
}

/// Bounds on atanh(t) * 2^p for rational 0 <= t <= 1/3.
fn atanh_scaled(t: &Rational, p: u32) -> (BigInt, BigInt) {
    if t.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let (mut plo, mut phi) = scaled_bounds(t, p);
    let (t2lo, t2hi) = scaled_bounds(&(t * t), p);
    let mut slo = BigInt::zero();
    let mut shi = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let den = BigInt::from(2 * k + 1);
        slo += plo.div_floor(&den);
        shi += phi.div_ceil(&den);
        plo = floor_shift(&(&plo * &t2lo), p);
        phi = ceil_shift(&(&phi * &t2hi), p);
        k += 1;
        if phi <= BigInt::from(2) {
            break;
        }
    }
    // Remaining terms are bounded by t^(2k+1) / ((2k+1)(1 - t^2)) <= 9/8 t^(2k+1).
    let tail = (&phi * BigInt::from(9)).div_ceil(&BigInt::from(8 * (2 * k + 1))) + 1;
    (slo, shi + tail)
}

/// Enclosure of ln q for rational q > 0.
pub fn ln_rational(q: &Rational, bits: u32) -> RealInterval {
    assert!(q.is_positive(), "logarithm of a non-positive number");
    if q.is_one() {
        return RealInterval::zero();
    }
    let e = floor_log2(q);
    let m = q / pow2(e);
    let guard = 12 + (64 - (e.unsigned_abs() + 1).leading_zeros());
    let p = bits + guard;
    let one = Rational::one();
    let t = (&m - &one) / (&m + &one);
    let (alo, ahi) = atanh_scaled(&t, p);
    let mut lo = alo * 2;
    let mut hi = ahi * 2;
    if e != 0 {
        let (l2lo, l2hi) = atanh_scaled(&Rational::new(1.into(), 3.into()), p);
        let eb = BigInt::from(e);
        if e > 0 {
            lo += &eb * l2lo * 2;
            hi += &eb * l2hi * 2;
        } else {
            lo += &eb * l2hi * 2;
            hi += &eb * l2lo * 2;
        }
    }
    let s = BigInt::one() << p as usize;
    RealInterval::new(Rational::new(lo, s.clone()), Rational::new(hi, s))
}

pub fn ln2(bits: u32) -> RealInterval {
    ln_rational(&Rational::from_integer(2.into()), bits)
}

/// Real fixed-point interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fx {
    pub lo: BigInt,
    pub hi: BigInt,
    pub prec: u32,
}

impl Fx {
    pub fn zero(prec: u32) -> Self {
        Fx { lo: BigInt::zero(), hi: BigInt::zero(), prec }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        let (lo, hi) = scaled_bounds(q, prec);
        Fx { lo, hi, prec }
    }

    pub fn from_interval(iv: &RealInterval, prec: u32) -> Self {
        let (lo, _) = scaled_bounds(iv.lo(), prec);
        let (_, hi) = scaled_bounds(iv.hi(), prec);
        Fx { lo, hi, prec }
    }

    pub fn to_interval(&self) -> RealInterval {
        let s = BigInt::one() << self.prec as usize;
        RealInterval::new(Rational::new(self.lo.clone(), s.clone()), Rational::new(self.hi.clone(), s))
    }

    pub fn add(&self, o: &Fx) -> Fx {
        Fx { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi, prec: self.prec }
    }

    pub fn sub(&self, o: &Fx) -> Fx {
        Fx { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo, prec: self.prec }
    }

    pub fn neg(&self) -> Fx {
        Fx { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    pub fn mul(&self, o: &Fx) -> Fx {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap();
        let hi = c.iter().max().unwrap();
        Fx { lo: floor_shift(lo, self.prec), hi: ceil_shift(hi, self.prec), prec: self.prec }
    }

    pub fn sqr(&self) -> Fx {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        let hi = ceil_shift(&a.clone().max(b.clone()), self.prec);
        let lo = if self.lo.is_negative() && self.hi.is_positive() {
            BigInt::zero()
        } else {
            floor_shift(&a.min(b), self.prec)
        };
        Fx { lo, hi, prec: self.prec }
    }

    /// Multiplies by 2^e, rounding outward when e < 0.
    pub fn mul_pow2(&self, e: i64) -> Fx {
        if e >= 0 {
            Fx { lo: &self.lo << e as usize, hi: &self.hi << e as usize, prec: self.prec }
        } else {
            let s = (-e) as u32;
            Fx { lo: floor_shift(&self.lo, s), hi: ceil_shift(&self.hi, s), prec: self.prec }
        }
    }

    /// Upper bound of |x| over the interval, scaled.
    pub fn mag(&self) -> BigInt {
        self.lo.abs().max(self.hi.abs())
    }

    /// Lower bound of |x| over the interval, scaled.
    pub fn mig(&self) -> BigInt {
        if self.lo.is_positive() {
            self.lo.clone()
        } else if self.hi.is_negative() {
            -&self.hi
        } else {
            BigInt::zero()
        }
    }

    pub fn width(&self) -> BigInt {
        &self.hi - &self.lo
    }
}

/// Complex fixed-point box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFx {
    pub re: Fx,
    pub im: Fx,
}

impl CFx {
    pub fn zero(prec: u32) -> Self {
        CFx { re: Fx::zero(prec), im: Fx::zero(prec) }
    }

    pub fn real(x: Fx) -> Self {
        let prec = x.prec;
        CFx { re: x, im: Fx::zero(prec) }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        Self::real(Fx::from_rational(q, prec))
    }

    pub fn add(&self, o: &CFx) -> CFx {
        CFx { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &CFx) -> CFx {
        CFx { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &CFx) -> CFx {
        CFx {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn mul_pow2(&self, e: i64) -> CFx {
        CFx { re: self.re.mul_pow2(e), im: self.im.mul_pow2(e) }
    }

    /// Enclosure of |z|^2.
    pub fn abs2(&self) -> Fx {
        self.re.sqr().add(&self.im.sqr())
    }

    /// Upper bound for max(|re|, |im|), scaled.
    pub fn mag(&self) -> BigInt {
        self.re.mag().max(self.im.mag())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat, to_f64};

    #[test]
    fn ln_values() {
        let cases = [(int(2), std::f64::consts::LN_2), (int(10), 10f64.ln()), (rat(3, 1000), 0.003f64.ln()), (rat(5, 4), 1.25f64.ln())];
        for (q, v) in cases {
            let iv = ln_rational(&q, 60);
            assert!(to_f64(iv.lo()) <= v + 1e-15 && v <= to_f64(iv.hi()) + 1e-15, "{q}");
            assert!(iv.width_f64() < 1e-17);
        }
    }

    #[test]
    fn ln_is_additive_enclosure() {
        let a = ln_rational(&int(6), 100);
        let b = ln_rational(&int(2), 100).add(&ln_rational(&int(3), 100));
        assert!(a.overlaps(&b, &int(0)));
    }

    #[test]
    fn fx_mul_encloses() {
        let p = 40;
        let a = Fx::from_rational(&rat(1, 3), p);
        let b = Fx::from_rational(&rat(-2, 7), p);
        let c = a.mul(&b).to_interval();
        assert!(c.contains(&rat(-2, 21)));
        let s = Fx::from_rational(&rat(-1, 3), p).sqr().to_interval();
        assert!(s.contains(&rat(1, 9)));
        let h = a.mul_pow2(-3).to_interval();
        assert!(h.contains(&rat(1, 24)));
    }
}
