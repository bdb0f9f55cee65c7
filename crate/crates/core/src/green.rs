//! Local Green functions g_v and the homogeneous escape rate G_v at a place
//! of Q, with certified enclosures.
//!
//! With F the homogeneous lift and C_v a constant such that
//! C_v^-1 ‖Z‖^d <= ‖F(Z)‖ <= C_v ‖Z‖^d, telescoping gives
//! |G_v(Z) - d^-n log‖F^n(Z)‖| <= log C_v / (d^n (d - 1)).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::fixed::{ln2, CFx, Fx};
use crate::exactnum::place::abs_exact;
use crate::exactnum::primes::{prime_divisors, valuation};
use crate::exactnum::{Place, Rational, RealInterval};
use crate::maps::RegularMap;
use crate::polyalg::linalg::solve;
use crate::polyalg::{HomogPoly3, MultiPoly};

const MAX_RESTARTS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullstellensatzBound {
    /// A constant C_v >= 1 valid for every nonzero Z.
    pub c: Rational,
    pub good_reduction: bool,
}

/// Cofactors A, B (binary forms of degree d-1) with A P_d + B Q_d = z_i^(2d-1), for i = 1, 2.
fn cofactors(f: &RegularMap) -> Vec<(MultiPoly, MultiPoly)> {
    let d = f.degree() as usize;
    let (pd, qd) = f.restrict_infinity();
    let n = 2 * d;
    // Unknowns: a_0..a_{d-1} (coefficient of z1^k z2^{d-1-k} in A), then b_0..b_{d-1}.
    // Equations: coefficient of z1^e z2^{2d-1-e}, e = 0..2d-1.
    let mut m = vec![vec![Rational::zero(); n]; n];
    for k in 0..d {
        for (&(i, _), c) in pd.terms() {
            m[k + i as usize][k] += c;
        }
        for (&(i, _), c) in qd.terms() {
            m[k + i as usize][d + k] += c;
        }
    }
    let mut out = Vec::new();
    for target in [2 * d - 1, 0] {
        let mut rhs = vec![Rational::zero(); n];
        rhs[target] = Rational::one();
        let x = solve(&m, &rhs).expect("top forms are coprime");
        let form = |off: usize| MultiPoly::from_terms((0..d).map(|k| ((k as u32, (d - 1 - k) as u32), x[off + k].clone())));
        out.push((form(0), form(d)));
    }
    out
}

fn norm_sum(p: &MultiPoly, v: Place) -> Rational {
    p.terms().fold(Rational::zero(), |acc, (_, c)| {
        let a = abs_exact(c, v);
        match v {
            Place::Archimedean => acc + a,
            Place::Finite(_) => acc.max(a),
        }
    })
}

fn combine(a: Rational, b: Rational, v: Place) -> Rational {
    match v {
        Place::Archimedean => a + b,
        Place::Finite(_) => a.max(b),
    }
}

fn integral_at(p: &MultiPoly, prime: u64) -> bool {
    p.terms().all(|(_, c)| c.denom() % prime != BigInt::zero())
}

/// Certified constant in ‖F(Z)‖ vs ‖Z‖^d at place v, with the good-reduction flag.
pub fn nullstellensatz_constant(f: &RegularMap, v: Place) -> NullstellensatzBound {
    if let Place::Finite(p) = v {
        let res = f.top_resultant();
        let unit = valuation(res, p) == Some(0);
        if unit && integral_at(f.p(), p) && integral_at(f.q(), p) {
            return NullstellensatzBound { c: Rational::one(), good_reduction: true };
        }
    }
    let d = f.degree();
    let one = Rational::one();
    let upper = one.clone().max(norm_sum(f.p(), v)).max(norm_sum(f.q(), v));
    let s = cofactors(f)
        .iter()
        .map(|(a, b)| combine(norm_sum(a, v), norm_sum(b, v), v))
        .max()
        .unwrap();
    let lower_part = |p: &MultiPoly| norm_sum(&(p - &p.homogeneous_part(d)), v);
    let k = lower_part(f.p()).max(lower_part(f.q()));
    let inv_s = &one / &s;
    let lower = if k.is_zero() {
        one.clone().min(inv_s)
    } else {
        let eps = match v {
            Place::Archimedean => one.clone().min(&one / (Rational::from_integer(2.into()) * &s * &k)),
            Place::Finite(_) => one.clone().min(&one / (&s * &k)),
        };
        let bound = match v {
            Place::Archimedean => inv_s / Rational::from_integer(2.into()),
            Place::Finite(_) => inv_s,
        };
        num_traits::pow(eps, d as usize).min(bound)
    };
    let c = upper.max(&one / lower);
    let good = c.is_one();
    NullstellensatzBound { c, good_reduction: good }
}

/// Primes outside of which good reduction is certified.
pub fn bad_places(f: &RegularMap) -> Result<Vec<u64>> {
    let mut out: Vec<u64> = Vec::new();
    for poly in [f.p(), f.q()] {
        for (_, c) in poly.terms() {
            out.extend(prime_divisors(c.denom())?);
        }
    }
    out.extend(prime_divisors(f.top_resultant().numer())?);
    out.extend(prime_divisors(f.top_resultant().denom())?);
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct GreenContext {
    f: RegularMap,
    place: Place,
    bound: NullstellensatzBound,
    lift: [HomogPoly3; 3],
}

/// G_v/log p at a finite place, as an enclosing rational interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicGreen {
    pub lo: Rational,
    pub hi: Rational,
}

impl GreenContext {
    pub fn new(f: &RegularMap, place: Place) -> Self {
        GreenContext { f: f.clone(), place, bound: nullstellensatz_constant(f, place), lift: f.lift() }
    }

    pub fn map(&self) -> &RegularMap {
        &self.f
    }

    pub fn place(&self) -> Place {
        self.place
    }

    pub fn constant(&self) -> &Rational {
        &self.bound.c
    }

    pub fn good_reduction(&self) -> bool {
        self.bound.good_reduction
    }

    /// Upper bound on log C_v.
    fn log_c_upper(&self) -> Rational {
        if self.bound.c.is_one() {
            Rational::zero()
        } else {
            RealInterval::ln(&self.bound.c, 40).hi().clone()
        }
    }

    fn steps_for(&self, tol: &Rational) -> u32 {
        let lc = self.log_c_upper();
        if lc.is_zero() {
            return 0;
        }
        let d = Rational::from_integer(self.f.degree().into());
        let mut n = 0u32;
        let mut tail = &lc / (&d - Rational::one());
        let target = tol / Rational::from_integer(4.into());
        while tail > target {
            tail /= &d;
            n += 1;
        }
        n
    }

    /// Enclosure of g_v(z, w), of width at most `tol`.
    pub fn green_value(&self, pt: &(Rational, Rational), tol: f64) -> Result<RealInterval> {
        let z = [Rational::one(), pt.0.clone(), pt.1.clone()];
        Ok(self.green_homog(&z, tol)?.clamp_nonneg())
    }

    /// Enclosure of G_v(z0, z1, z2), of width at most `tol`.
    pub fn green_homog(&self, z: &[Rational; 3], tol: f64) -> Result<RealInterval> {
        if z.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroInput);
        }
        let tol_q = tolerance(tol)?;
        match self.place {
            Place::Finite(p) => {
                let g = self.green_padic(z, &tol_q)?;
                let bits = bits_for(&tol_q) + 8;
                let lp = RealInterval::ln(&Rational::from_integer(p.into()), bits);
                Ok(RealInterval::new(g.lo, g.hi).mul(&lp))
            }
            Place::Archimedean => self.green_arch(&|prec| z.iter().map(|c| CFx::from_rational(c, prec)).collect(), &tol_q),
        }
    }

    /// G_v(Z)/log p as an exact rational bracket; a point when the tail vanishes.
    pub fn green_padic(&self, z: &[Rational; 3], tol: &Rational) -> Result<PadicGreen> {
        let Place::Finite(p) = self.place else {
            return Err(Error::Precondition("p-adic Green function requested at the Archimedean place".into()));
        };
        if z.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroInput);
        }
        let m0 = z.iter().filter_map(|c| valuation(c, p)).min().unwrap();
        let gamma = if self.bound.c.is_one() {
            0
        } else {
            valuation(&self.bound.c, p).unwrap_or(0)
        };
        let ln_p = RealInterval::ln(&Rational::from_integer(p.into()), 20).hi().clone();
        let scaled_tol = tol / ln_p;
        let n = if gamma == 0 { 0 } else { self.steps_for_padic(gamma, &scaled_tol) };
        if n == 0 {
            let g = Rational::from_integer((-m0).into());
            return Ok(PadicGreen { lo: g.clone(), hi: g });
        }
        let d = self.f.degree() as i64;
        // Clear denominators: F' = p^c F has p-integral coefficients.
        let c = self
            .lift
            .iter()
            .flat_map(|h| h.terms().map(|(_, a)| -valuation(a, p).unwrap()))
            .max()
            .unwrap()
            .max(0);
        let prec = (n as i64) * (gamma + c + 1) + 4;
        let modulus = num_traits::pow(BigInt::from(p), prec as usize);
        let pc = Rational::from_integer(num_traits::pow(BigInt::from(p), c as usize));
        let coeffs: Vec<Vec<((u32, u32, u32), BigInt)>> = self
            .lift
            .iter()
            .map(|h| h.terms().map(|(e, a)| (*e, residue(&(a * &pc), &modulus))).collect())
            .collect();
        let scale0 = pow_p(p, -m0);
        let mut vec: Vec<BigInt> = z.iter().map(|x| residue(&(x * &scale0), &modulus)).collect();
        let mut k = prec;
        let mut big_v = BigInt::from(m0);
        let pb = BigInt::from(p);
        for _ in 0..n {
            let modk = num_traits::pow(pb.clone(), k as usize);
            let img: Vec<BigInt> = coeffs.iter().map(|h| eval_mod(h, &vec, &modk)).collect();
            let m = img
                .iter()
                .filter(|x| !x.is_zero())
                .map(|x| int_val(x, p))
                .min()
                .ok_or_else(|| Error::Refinement("p-adic precision exhausted".into()))?;
            let pm = num_traits::pow(pb.clone(), m as usize);
            vec = img.iter().map(|x| x / &pm).collect();
            k -= m;
            big_v = big_v * d - c + m;
        }
        let dn = Rational::from_integer(num_traits::pow(BigInt::from(d), n as usize));
        let center = Rational::from_integer(-big_v) / &dn;
        let tail = Rational::from_integer(gamma.into()) / (&dn * Rational::from_integer((d - 1).into()));
        Ok(PadicGreen { lo: &center - &tail, hi: &center + &tail })
    }

    fn steps_for_padic(&self, gamma: i64, tol: &Rational) -> u32 {
        let d = Rational::from_integer(self.f.degree().into());
        let mut tail = Rational::from_integer(gamma.into()) / (&d - Rational::one());
        let mut n = 0;
        let target = tol / Rational::from_integer(2.into());
        while tail > target {
            tail /= &d;
            n += 1;
        }
        n
    }

    /// Archimedean escape rate of the vector produced by `init` at a given working precision.
    pub fn green_arch(&self, init: &dyn Fn(u32) -> Vec<CFx>, tol: &Rational) -> Result<RealInterval> {
        let n = self.steps_for(tol);
        let d = self.f.degree();
        let tail = self.log_c_upper() / (pow_rat(d, n) * Rational::from_integer((d - 1).into()));
        let mut prec = 64 + 6 * n + bits_for(tol);
        for _ in 0..MAX_RESTARTS {
            if let Some(iv) = self.arch_attempt(init, n, prec, tol) {
                let iv = iv.widen(&tail);
                if iv.width() <= *tol {
                    return Ok(iv);
                }
            }
            prec *= 2;
        }
        Err(Error::Refinement("Archimedean Green function did not reach the requested width".into()))
    }

    fn arch_attempt(&self, init: &dyn Fn(u32) -> Vec<CFx>, n: u32, prec: u32, tol: &Rational) -> Option<RealInterval> {
        let d = self.f.degree();
        let coeffs: Vec<Vec<((u32, u32, u32), Fx)>> = self
            .lift
            .iter()
            .map(|h| h.terms().map(|(e, a)| (*e, Fx::from_rational(a, prec))).collect())
            .collect();
        let mut v = init(prec);
        let mut big_e = BigInt::zero();
        let (e0, nv) = normalize(&v, prec)?;
        v = nv;
        big_e += e0;
        for _ in 0..n {
            let img: Vec<CFx> = coeffs.iter().map(|h| eval_cfx(h, &v, prec)).collect();
            let (e, nv) = normalize(&img, prec)?;
            v = nv;
            big_e = big_e * BigInt::from(d) + e;
        }
        // log‖v‖ = (1/2) log max |v_i|^2
        let sq: Vec<RealInterval> = v.iter().map(|c| c.abs2().to_interval()).collect();
        let lo = sq.iter().map(|s| s.lo().clone()).max().unwrap();
        let hi = sq.iter().map(|s| s.hi().clone()).max().unwrap();
        if !lo.is_positive() {
            return None;
        }
        let bits = bits_for(tol) + 16 + big_e.bits() as u32;
        let log_norm = RealInterval::new(lo, hi).ln_of(bits).scale(&Rational::new(1.into(), 2.into()));
        let dn = pow_rat(d, n);
        let e_part = ln2(bits).scale(&(Rational::from_integer(big_e) / &dn));
        Some(e_part.add(&log_norm.scale(&(Rational::one() / dn))))
    }
}

/// Closed form log max{1, |z|_v, |w|_v}, exact at finite places.
pub fn log_max_closed_form(pt: &(Rational, Rational), v: Place, bits: u32) -> RealInterval {
    let m = Rational::one().max(abs_exact(&pt.0, v)).max(abs_exact(&pt.1, v));
    RealInterval::ln(&m, bits)
}

fn tolerance(tol: f64) -> Result<Rational> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Precondition("tolerance must be a positive real".into()));
    }
    Ok(Rational::from_float(tol).unwrap())
}

fn bits_for(tol: &Rational) -> u32 {
    let l = crate::exactnum::floor_log2(tol);
    (if l < 0 { -l } else { 0 }) as u32 + 4
}

fn pow_rat(d: u32, n: u32) -> Rational {
    Rational::from_integer(num_traits::pow(BigInt::from(d), n as usize))
}

fn pow_p(p: u64, e: i64) -> Rational {
    let b = num_traits::pow(BigInt::from(p), e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(b)
    } else {
        Rational::new(BigInt::one(), b)
    }
}

fn residue(q: &Rational, modulus: &BigInt) -> BigInt {
    let inv = q.denom().modinv(modulus).expect("p-integral value");
    (q.numer() * inv).mod_floor(modulus)
}

fn int_val(x: &BigInt, p: u64) -> i64 {
    crate::exactnum::primes::int_valuation(x, p).unwrap()
}

fn eval_mod(h: &[((u32, u32, u32), BigInt)], z: &[BigInt], modulus: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for ((a, b, c), k) in h {
        let t = k * z[0].modpow(&BigInt::from(*a), modulus) * z[1].modpow(&BigInt::from(*b), modulus) * z[2].modpow(&BigInt::from(*c), modulus);
        acc = (acc + t).mod_floor(modulus);
    }
    acc
}

fn cpow(z: &CFx, k: u32, prec: u32) -> CFx {
    let mut r = CFx::from_rational(&Rational::one(), prec);
    for _ in 0..k {
        r = r.mul(z);
    }
    r
}

fn eval_cfx(h: &[((u32, u32, u32), Fx)], z: &[CFx], prec: u32) -> CFx {
    let mut acc = CFx::zero(prec);
    for ((a, b, c), k) in h {
        let m = cpow(&z[0], *a, prec).mul(&cpow(&z[1], *b, prec)).mul(&cpow(&z[2], *c, prec));
        acc = acc.add(&m.mul(&CFx::real(k.clone())));
    }
    acc
}

/// Rescales by an exact power of two so the largest entry has magnitude about 1.
fn normalize(v: &[CFx], prec: u32) -> Option<(BigInt, Vec<CFx>)> {
    let mag = v.iter().map(|c| c.mag()).max().unwrap();
    if mag.is_zero() {
        return None;
    }
    let e = mag.bits() as i64 - prec as i64;
    Some((BigInt::from(e), v.iter().map(|c| c.mul_pow2(-e)).collect()))
}

/// f64 view of log max(1, |z|, |w|) for diagnostics.
pub fn naive_log_height_f64(pt: &(Rational, Rational)) -> f64 {
    let a = crate::exactnum::to_f64(&pt.0).abs();
    let b = crate::exactnum::to_f64(&pt.1).abs();
    1f64.max(a).max(b).ln()
}
