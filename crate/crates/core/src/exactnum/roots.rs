//! Certified isolation of the complex roots of a squarefree rational polynomial.
//!
//! Approximations come from Aberth iteration (first in f64, then in rounded
//! dyadic arithmetic); each root is certified by the Weierstrass correction
//! discs D(z_i, n|W_i|), which are required to be pairwise disjoint.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::fixed::{CFx, Fx};
use super::{floor_log2, pow2, to_f64, Rational, RealInterval, UniPoly};
use crate::error::{Error, Result};

/// Exact complex rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CRat {
    pub re: Rational,
    pub im: Rational,
}

impl CRat {
    pub fn new(re: Rational, im: Rational) -> Self {
        CRat { re, im }
    }

    pub fn real(re: Rational) -> Self {
        CRat { re, im: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn from_c64(z: Complex64) -> Self {
        let cv = |x: f64| Rational::from_float(x).unwrap_or_else(Rational::zero);
        CRat { re: cv(z.re), im: cv(z.im) }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    pub fn add(&self, o: &CRat) -> CRat {
        CRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &CRat) -> CRat {
        CRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &CRat) -> CRat {
        CRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn scale(&self, a: &Rational) -> CRat {
        CRat { re: &self.re * a, im: &self.im * a }
    }

    pub fn abs2(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn inv(&self) -> CRat {
        let n = self.abs2();
        CRat { re: &self.re / &n, im: -&self.im / &n }
    }

    pub fn div(&self, o: &CRat) -> CRat {
        self.mul(&o.inv())
    }

    /// Rounds both parts to multiples of 2^-bits.
    pub fn round(&self, bits: u32) -> CRat {
        CRat { re: round_dyadic(&self.re, bits), im: round_dyadic(&self.im, bits) }
    }

    pub fn eval(f: &UniPoly, z: &CRat) -> CRat {
        let mut acc = CRat::zero();
        for a in f.coeffs().iter().rev() {
            acc = acc.mul(z);
            acc.re += a;
        }
        acc
    }
}

pub fn round_dyadic(q: &Rational, bits: u32) -> Rational {
    let s = BigInt::one() << bits as usize;
    let n = (q.numer() * &s).div_floor(q.denom());
    Rational::new(n, s)
}

/// Rational upper bound for sqrt(x), x >= 0, with relative slack below 2^-40.
pub fn sqrt_upper(x: &Rational) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    let e = floor_log2(x);
    let k = e.div_euclid(2);
    let m = x / pow2(2 * k);
    let s = m.to_f64().unwrap().sqrt() * (1.0 + 1e-12);
    let mut r = Rational::from_float(s).unwrap();
    while &r * &r < m {
        r = r * Rational::new(1_000_001.into(), 1_000_000.into());
    }
    r * pow2(k)
}

/// A disc D(center, radius) containing exactly one root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootEnclosure {
    pub center: CRat,
    pub radius: Rational,
    pub is_real: bool,
}

impl RootEnclosure {
    pub fn approx(&self) -> Complex64 {
        self.center.to_c64()
    }

    pub fn re_interval(&self) -> RealInterval {
        RealInterval::new(&self.center.re - &self.radius, &self.center.re + &self.radius)
    }

    pub fn im_interval(&self) -> RealInterval {
        if self.is_real {
            RealInterval::zero()
        } else {
            RealInterval::new(&self.center.im - &self.radius, &self.center.im + &self.radius)
        }
    }

    pub fn to_cfx(&self, prec: u32) -> CFx {
        CFx { re: Fx::from_interval(&self.re_interval(), prec), im: Fx::from_interval(&self.im_interval(), prec) }
    }

    /// Certified |root| > 1.
    pub fn modulus_exceeds_one(&self) -> bool {
        let c2 = self.center.abs2();
        let t = Rational::one() + &self.radius;
        c2 > &t * &t
    }

    /// Certified |root| < 1.
    pub fn modulus_below_one(&self) -> bool {
        if self.radius >= Rational::one() {
            return false;
        }
        let t = Rational::one() - &self.radius;
        self.center.abs2() < &t * &t
    }

    pub fn width(&self) -> Rational {
        &self.radius * Rational::from_integer(2.into())
    }
}

fn f64_coeffs(f: &UniPoly) -> Vec<Complex64> {
    let scale = f.coeffs().iter().filter(|c| !c.is_zero()).map(floor_log2).max().unwrap_or(0);
    f.coeffs().iter().map(|c| Complex64::new(to_f64(&(c / pow2(scale))), 0.0)).collect()
}

fn horner_c64(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn aberth_f64(f: &UniPoly) -> Vec<Complex64> {
    let c = f64_coeffs(f);
    let n = c.len() - 1;
    let lead = c[n].norm();
    let bound = (0..n)
        .map(|i| (c[i].norm() / lead).powf(1.0 / (n - i) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3)
        * 2.0;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(bound * 0.7, 2.0 * std::f64::consts::PI * (k as f64 + 0.3) / n as f64 + 0.4))
        .collect();
    for _ in 0..800 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner_c64(&c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                delta = delta.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

fn aberth_exact(f: &UniPoly, z: &mut [CRat], bits: u32, iters: usize) {
    let fp = f.derivative();
    let n = z.len();
    let tiny = pow2(-(bits as i64) + 8);
    for _ in 0..iters {
        let mut done = true;
        for i in 0..n {
            let p = CRat::eval(f, &z[i]);
            if p.is_zero() {
                continue;
            }
            let dp = CRat::eval(&fp, &z[i]);
            if dp.is_zero() {
                z[i].re += &tiny;
                done = false;
                continue;
            }
            let ratio = p.div(&dp).round(bits + 8);
            let mut s = CRat::zero();
            for j in 0..n {
                if j != i {
                    let diff = z[i].sub(&z[j]);
                    if diff.is_zero() {
                        continue;
                    }
                    s = s.add(&diff.inv().round(bits + 8));
                }
            }
            let den = CRat::real(Rational::one()).sub(&ratio.mul(&s));
            if den.is_zero() {
                continue;
            }
            let w = ratio.div(&den).round(bits + 8);
            if w.abs2() > &tiny * &tiny {
                done = false;
            }
            z[i] = z[i].sub(&w).round(bits);
        }
        if done {
            break;
        }
    }
}

fn certify(f: &UniPoly, z: &[CRat], bits: u32) -> Option<Vec<RootEnclosure>> {
    let n = z.len();
    let lc = f.lc();
    let nn = Rational::from_integer(BigInt::from(n));
    let target = pow2(-(bits as i64));
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let mut den = CRat::real(lc.clone());
        for j in 0..n {
            if j != i {
                let d = z[i].sub(&z[j]);
                if d.is_zero() {
                    return None;
                }
                den = den.mul(&d);
            }
        }
        let w2 = CRat::eval(f, &z[i]).abs2() / den.abs2();
        let r = sqrt_upper(&w2) * &nn;
        if r > target {
            return None;
        }
        radii.push(r);
    }
    for i in 0..n {
        for j in i + 1..n {
            let s = &radii[i] + &radii[j];
            if z[i].sub(&z[j]).abs2() <= &s * &s {
                return None;
            }
        }
    }
    let mut out: Vec<RootEnclosure> = Vec::with_capacity(n);
    for i in 0..n {
        let conj = CRat::new(z[i].re.clone(), -&z[i].im);
        let hits_conj = |j: usize| {
            let s = &radii[i] + &radii[j];
            z[j].sub(&conj).abs2() <= &s * &s
        };
        let is_real = z[i].im.abs() <= radii[i] && (0..n).filter(|&j| j != i).all(|j| !hits_conj(j));
        let mut center = z[i].clone();
        if is_real {
            center.im = Rational::zero();
        }
        out.push(RootEnclosure { center, radius: radii[i].clone(), is_real });
    }
    symmetrize(&mut out);
    Some(out)
}

/// Replaces the lower member of each conjugate pair by the mirror image of the
/// upper one, so conjugates share an exactly equal real part.
fn symmetrize(out: &mut [RootEnclosure]) {
    let n = out.len();
    for i in 0..n {
        if out[i].is_real || !out[i].center.im.is_positive() {
            continue;
        }
        let mirror = RootEnclosure {
            center: CRat::new(out[i].center.re.clone(), -&out[i].center.im),
            radius: out[i].radius.clone(),
            is_real: false,
        };
        let near: Vec<usize> = (0..n).filter(|&j| j != i && discs_meet(&out[j], &mirror)).collect();
        if near.len() != 1 || out[near[0]].is_real {
            continue;
        }
        let j = near[0];
        if (0..n).filter(|&k| k != j).all(|k| !discs_meet(&out[k], &mirror)) {
            out[j] = mirror;
        }
    }
}

fn discs_meet(a: &RootEnclosure, b: &RootEnclosure) -> bool {
    let s = &a.radius + &b.radius;
    a.center.sub(&b.center).abs2() <= &s * &s
}

fn order(a: &RootEnclosure, b: &RootEnclosure) -> Ordering {
    a.center.re.cmp(&b.center.re).then(a.center.im.cmp(&b.center.im))
}

/// Isolating discs of radius at most 2^-bits for every root of a squarefree `f`,
/// sorted by (real part, imaginary part) of their centers.
pub fn isolate_roots(f: &UniPoly, bits: u32) -> Result<Vec<RootEnclosure>> {
    if f.degree() < 1 {
        return Ok(vec![]);
    }
    if f.deg() == 1 {
        let r = -f.coeff(0) / f.coeff(1);
        return Ok(vec![RootEnclosure { center: CRat::real(r), radius: Rational::zero(), is_real: true }]);
    }
    let approx = aberth_f64(f);
    let mut prec = (bits + 24).max(80);
    let mut z: Vec<CRat> = approx.iter().map(|&c| CRat::from_c64(c).round(prec)).collect();
    for _ in 0..7 {
        aberth_exact(f, &mut z, prec, 60);
        if let Some(mut out) = certify(f, &z, bits) {
            out.sort_by(order);
            return Ok(out);
        }
        prec *= 2;
    }
    Err(Error::Refinement(format!("could not isolate the roots of {f} to {bits} bits")))
}

/// Roots with their multiplicities for an arbitrary nonzero polynomial.
pub fn roots_with_multiplicity(f: &UniPoly, bits: u32) -> Result<Vec<(RootEnclosure, u32)>> {
    let mut out = Vec::new();
    for (g, m) in f.squarefree_decomposition() {
        for r in isolate_roots(&g, bits)? {
            out.push((r, m));
        }
    }
    out.sort_by(|a, b| order(&a.0, &b.0));
    Ok(out)
}
