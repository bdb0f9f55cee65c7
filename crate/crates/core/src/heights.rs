//! Canonical heights as sums of local Green functions, and certified
//! preperiodicity decisions for rational points.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::algebraic::pick_matching;
use crate::exactnum::fixed::CFx;
use crate::exactnum::primes::{int_valuation, prime_divisors};
use crate::exactnum::{bit_size, AlgebraicNumber, NfElem, NumberField, Place, Rational, RealInterval};
use crate::curves::search::small_rationals;
use crate::curves::PlaneCurve;
use crate::exactnum::cyclotomic::cyclotomic;
use crate::exactnum::factor::factor_over_q;
use crate::green::{bad_places, GreenContext};
use crate::maps::{RegularMap, DEFAULT_BIT_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightResult {
    pub value: RealInterval,
    pub support: Vec<Place>,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PreperiodicityVerdict<P> {
    /// `orbit` lists f^0(pt), ..., f^(preperiod + period)(pt); the last entry equals orbit[preperiod].
    Preperiodic { preperiod: usize, period: usize, orbit: Vec<P> },
    NotPreperiodic { height_lower_bound: Rational },
    Unknown { reason: String },
}

impl<P> PreperiodicityVerdict<P> {
    pub fn is_preperiodic(&self) -> bool {
        matches!(self, PreperiodicityVerdict::Preperiodic { .. })
    }

    pub fn is_not_preperiodic(&self) -> bool {
        matches!(self, PreperiodicityVerdict::NotPreperiodic { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, PreperiodicityVerdict::Unknown { .. })
    }
}

/// A point whose coordinates lie in a common number field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicPoint {
    pub z: NfElem,
    pub w: NfElem,
}

impl AlgebraicPoint {
    pub fn new(z: NfElem, w: NfElem) -> Result<Self> {
        if z.field() != w.field() {
            return Err(Error::Precondition("coordinates must lie in the same number field".into()));
        }
        Ok(AlgebraicPoint { z, w })
    }

    pub fn rational(pt: &(Rational, Rational)) -> Self {
        let k = NumberField::rationals();
        AlgebraicPoint { z: NfElem::from_rational(&k, pt.0.clone()), w: NfElem::from_rational(&k, pt.1.clone()) }
    }

    /// Builds a point from two algebraic numbers, one of which must be rational
    /// or both equal.
    pub fn from_numbers(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Result<Self> {
        match (a.as_rational(), b.as_rational()) {
            (Some(x), Some(y)) => Ok(Self::rational(&(x, y))),
            (None, Some(y)) => {
                let k = a.field()?;
                Ok(AlgebraicPoint { z: NfElem::generator(&k), w: NfElem::from_rational(&k, y) })
            }
            (Some(x), None) => {
                let k = b.field()?;
                Ok(AlgebraicPoint { z: NfElem::from_rational(&k, x), w: NfElem::generator(&k) })
            }
            (None, None) if a == b => {
                let k = a.field()?;
                Ok(AlgebraicPoint { z: NfElem::generator(&k), w: NfElem::generator(&k) })
            }
            _ => Err(Error::Precondition("coordinates are not presented in a common number field".into())),
        }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.z.field()
    }

    pub fn apply(&self, f: &RegularMap) -> AlgebraicPoint {
        AlgebraicPoint { z: f.p().eval_coeff(&self.z, &self.w), w: f.q().eval_coeff(&self.z, &self.w) }
    }

    pub fn bit_size(&self) -> u64 {
        self.z.bit_size() + self.w.bit_size()
    }
}

fn rational_support(f: &RegularMap, pt: &(Rational, Rational)) -> Result<Vec<Place>> {
    let mut primes = bad_places(f)?;
    primes.extend(prime_divisors(pt.0.denom())?);
    primes.extend(prime_divisors(pt.1.denom())?);
    primes.sort_unstable();
    primes.dedup();
    let mut out = vec![Place::Archimedean];
    out.extend(primes.into_iter().map(Place::Finite));
    Ok(out)
}

/// h_f(pt) = Σ_v g_v(pt), enclosed within `tol`.
pub fn canonical_height(f: &RegularMap, pt: &(Rational, Rational), tol: f64) -> Result<HeightResult> {
    let places = rational_support(f, pt)?;
    let each = tol / places.len() as f64;
    let mut value = RealInterval::zero();
    let mut support = Vec::new();
    for v in places {
        let g = GreenContext::new(f, v).green_value(pt, each)?;
        if g != RealInterval::zero() && !(g.contains(&Rational::zero()) && g.width_f64() <= each) {
            support.push(v);
        }
        value = value.add(&g);
    }
    Ok(HeightResult { value, support, certified: true })
}

/// Σ over the p-adic roots of max(0, -v(z_σ), -v(w_σ)), bracketed.
fn padic_excess(pt: &AlgebraicPoint, p: u64) -> (i64, i64) {
    let n = pt.field().degree() as i64;
    let excess = |e: &NfElem| -> i64 {
        let cp = e.charpoly().primitive_int();
        int_valuation(cp.last().unwrap(), p).unwrap_or(0)
    };
    let sz = excess(&pt.z);
    let sw = excess(&pt.w);
    if sz == 0 || sw == 0 {
        return (sz + sw, sz + sw);
    }
    let mut best = sz.max(sw);
    for c in 1..=n {
        let g = pt.z.add(&pt.w.scale(&Rational::from_integer(c.into())));
        best = best.max(excess(&g));
    }
    if p as i64 > n {
        (best, best)
    } else {
        (best, sz + sw)
    }
}

fn algebraic_support(f: &RegularMap, pt: &AlgebraicPoint) -> Result<Vec<u64>> {
    let mut primes = bad_places(f)?;
    for e in [&pt.z, &pt.w] {
        for c in e.charpoly().coeffs() {
            primes.extend(prime_divisors(c.denom())?);
        }
    }
    primes.sort_unstable();
    primes.dedup();
    Ok(primes)
}

/// Galois-averaged canonical height of a point with algebraic coordinates.
pub fn canonical_height_algebraic(f: &RegularMap, pt: &AlgebraicPoint, tol: f64) -> Result<HeightResult> {
    if !(tol > 0.0) {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    let field = pt.field().clone();
    let n = field.degree();
    let nq = Rational::from_integer(n.into());
    let primes = algebraic_support(f, pt)?;
    let share = tol / (2 * n + primes.len() + 1) as f64;
    let mut certified = true;
    let mut support = Vec::new();

    let ctx = GreenContext::new(f, Place::Archimedean);
    let coarse = field.embeddings(64)?;
    let mut arch = RealInterval::zero();
    let share_q = Rational::from_float(share).unwrap();
    for root in &coarse {
        let init = |prec: u32| -> Vec<CFx> {
            let fine = if root.radius.is_zero() {
                Some(root.clone())
            } else {
                field.embeddings(prec + 8).ok().and_then(|all| pick_matching(&all, root))
            };
            match fine {
                Some(r) => vec![CFx::from_rational(&Rational::one(), prec), pt.z.embed(&r, prec), pt.w.embed(&r, prec)],
                None => vec![CFx::zero(prec); 3],
            }
        };
        let g = ctx.green_arch(&init, &share_q)?.clamp_nonneg();
        arch = arch.add(&g);
    }
    let arch = arch.scale(&(Rational::one() / &nq));
    if arch.hi().is_positive() && !(arch.contains(&Rational::zero()) && arch.width_f64() <= share * 2.0) {
        support.push(Place::Archimedean);
    }
    let mut value = arch;

    let bad = bad_places(f)?;
    for p in primes {
        let lp = RealInterval::ln(&Rational::from_integer(p.into()), 60);
        let (lo, hi) = if bad.contains(&p) {
            let (iv, exact) = bad_prime_excess(f, pt, p, &Rational::from_float(share).unwrap())?;
            certified &= exact;
            (iv.lo().clone(), iv.hi().clone())
        } else {
            let (a, b) = padic_excess(pt, p);
            certified &= a == b;
            (Rational::from_integer(a.into()), Rational::from_integer(b.into()))
        };
        let local = RealInterval::new(lo / &nq, hi / &nq).mul(&lp);
        if local.hi().is_positive() {
            support.push(Place::Finite(p));
        }
        value = value.add(&local);
    }
    if value.width_f64() > tol {
        certified = false;
    }
    Ok(HeightResult { value, support, certified })
}

/// Σ_σ g_σ / log p at a bad prime by exact iteration in the field; the flag
/// reports whether the bracket met the requested width.
fn bad_prime_excess(f: &RegularMap, pt: &AlgebraicPoint, p: u64, tol: &Rational) -> Result<(RealInterval, bool)> {
    let ctx = GreenContext::new(f, Place::Finite(p));
    let n = pt.field().degree() as i64;
    let d = Rational::from_integer(f.degree().into());
    let gamma = if ctx.constant().is_one() {
        0
    } else {
        crate::exactnum::primes::valuation(ctx.constant(), p).unwrap_or(0)
    };
    let mut cur = pt.clone();
    let mut scale = Rational::one();
    let mut best: Option<RealInterval> = None;
    for _ in 0..24 {
        let (a, b) = padic_excess(&cur, p);
        let tail = Rational::from_integer((n * gamma).into()) / (&scale * (&d - Rational::one()));
        let iv = RealInterval::new(Rational::from_integer(a.into()) / &scale - &tail, Rational::from_integer(b.into()) / &scale + &tail);
        let iv = iv.clamp_nonneg();
        best = Some(match best {
            None => iv,
            Some(prev) => prev.intersect(&iv).unwrap_or(iv),
        });
        if best.as_ref().unwrap().width() <= *tol || cur.bit_size() > 20_000 {
            break;
        }
        cur = cur.apply(f);
        scale *= &d;
    }
    let iv = best.unwrap();
    let ok = iv.width() <= *tol;
    Ok((iv, ok))
}

/// Exact orbit iteration with cycle detection, preceded by a height test.
pub fn is_preperiodic(f: &RegularMap, pt: &(Rational, Rational), orbit_cap: usize, tol: f64) -> PreperiodicityVerdict<(Rational, Rational)> {
    match canonical_height(f, pt, tol) {
        Ok(h) if h.value.lo().is_positive() => {
            return PreperiodicityVerdict::NotPreperiodic { height_lower_bound: h.value.lo().clone() };
        }
        Ok(_) => {}
        Err(e) => return PreperiodicityVerdict::Unknown { reason: e.to_string() },
    }
    let mut seen: HashMap<(Rational, Rational), usize> = HashMap::new();
    let mut orbit = vec![pt.clone()];
    seen.insert(pt.clone(), 0);
    for i in 1..=orbit_cap {
        let next = f.apply(&orbit[i - 1]);
        if bit_size(&next.0) + bit_size(&next.1) > DEFAULT_BIT_CAP {
            return PreperiodicityVerdict::Unknown { reason: format!("coordinate bit size exceeded {DEFAULT_BIT_CAP}") };
        }
        orbit.push(next.clone());
        if let Some(&j) = seen.get(&next) {
            return PreperiodicityVerdict::Preperiodic { preperiod: j, period: i - j, orbit };
        }
        seen.insert(next, i);
    }
    PreperiodicityVerdict::Unknown { reason: format!("no repetition within {orbit_cap} iterates and height not separated from 0") }
}

/// Minimum of canonical heights over sampled algebraic points of C: a heuristic
/// upper statistic for the essential minimum, not a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EssMinEstimate {
    pub value: RealInterval,
    pub samples: Vec<(AlgebraicPoint, RealInterval)>,
}

const SAMPLE_FIELD_DEGREE: usize = 4;

fn vertical_samples(c: &PlaneCurve, a: &Rational) -> Result<Vec<AlgebraicPoint>> {
    let slice = c.vertical_slice(a);
    if slice.degree() < 1 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (g, m) in factor_over_q(&slice)? {
        if m != 1 || g.deg() > SAMPLE_FIELD_DEGREE {
            continue;
        }
        if g.deg() == 1 {
            out.push(AlgebraicPoint::rational(&(a.clone(), -g.coeff(0) / g.coeff(1))));
        } else {
            let k = NumberField::new(&g)?;
            out.push(AlgebraicPoint { z: NfElem::from_rational(&k, a.clone()), w: NfElem::generator(&k) });
        }
    }
    Ok(out)
}

/// z = ζ_n on curves of degree one in w.
fn root_of_unity_sample(c: &PlaneCurve, n: u64) -> Option<AlgebraicPoint> {
    let cols = c.poly().as_poly_in(1);
    if cols.len() != 2 {
        return None;
    }
    let k = NumberField::new(&cyclotomic(n)).ok()?;
    let zeta = NfElem::generator(&k);
    let w = zeta.eval_poly(&cols[0]).neg().mul(&zeta.eval_poly(&cols[1]).inv()?);
    Some(AlgebraicPoint { z: zeta, w })
}

pub fn essential_min_estimate(f: &RegularMap, c: &PlaneCurve, num_samples: usize, tol: f64) -> Result<EssMinEstimate> {
    let mut points: Vec<AlgebraicPoint> = Vec::new();
    let mut rationals = small_rationals(6).into_iter();
    let mut n = 3u64;
    let mut exhausted = (false, false);
    while points.len() < num_samples && exhausted != (true, true) {
        match rationals.next() {
            Some(a) => points.extend(vertical_samples(c, &a)?),
            None => exhausted.0 = true,
        }
        if n <= 12 && points.len() < num_samples {
            points.extend(root_of_unity_sample(c, n));
            n += 1;
        } else {
            exhausted.1 = true;
        }
    }
    points.truncate(num_samples);
    if points.is_empty() {
        return Err(Error::Precondition("sampling produced no smooth points".into()));
    }
    let mut samples = Vec::with_capacity(points.len());
    for p in points {
        let h = match (p.z.as_rational(), p.w.as_rational(), p.field().degree()) {
            (Some(z), Some(w), 1) => canonical_height(f, &(z, w), tol)?.value,
            _ => canonical_height_algebraic(f, &p, tol)?.value,
        };
        samples.push((p, h));
    }
    let value = samples.iter().map(|s| s.1.clone()).min_by(|a, b| a.hi().cmp(b.hi())).unwrap();
    Ok(EssMinEstimate { value, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat, UniPoly};

    fn sq() -> RegularMap {
        RegularMap::parse("z^2, w^2").unwrap()
    }

    /// Independent oracle: h([1:z:w]) = log max(L, |Lz|, |Lw|) with L the common denominator.
    fn projective_height(pt: &(Rational, Rational)) -> f64 {
        let l = num_integer::Integer::lcm(pt.0.denom(), pt.1.denom());
        let lr = Rational::from_integer(l.clone());
        let top = (&pt.0 * &lr).numer().abs().max((&pt.1 * &lr).numer().abs()).max(l);
        crate::exactnum::to_f64(&Rational::from_integer(top)).ln()
    }

    #[test]
    fn rational_heights() {
        let f = sq();
        let h = canonical_height(&f, &(int(2), int(3)), 1e-10).unwrap();
        assert!((h.value.mid_f64() - 3f64.ln()).abs() < 1e-10 && h.value.width_f64() <= 1e-10);
        assert_eq!(h.support, vec![Place::Archimedean]);
        let h = canonical_height(&f, &(int(0), int(1)), 1e-10).unwrap();
        assert!(h.value.contains(&int(0)) && h.support.is_empty());
        let h = canonical_height(&f, &(rat(1, 2), int(1)), 1e-10).unwrap();
        assert!((h.value.mid_f64() - 2f64.ln()).abs() < 1e-10);
        assert_eq!(h.support, vec![Place::Finite(2)]);
        let pt = (rat(1, 2), rat(1, 3));
        let h = canonical_height(&f, &pt, 1e-10).unwrap();
        assert!((h.value.mid_f64() - projective_height(&pt)).abs() < 1e-10);
    }

    #[test]
    fn algebraic_heights() {
        let f = sq();
        let k = NumberField::new(&UniPoly::from_ints(&[-2, 0, 1])).unwrap();
        let s2 = NfElem::generator(&k);
        let pt = AlgebraicPoint::new(s2.clone(), s2.one_like()).unwrap();
        let h = canonical_height_algebraic(&f, &pt, 1e-9).unwrap();
        assert!((h.value.mid_f64() - 0.5 * 2f64.ln()).abs() < 1e-9 && h.certified);
        let pt = AlgebraicPoint::new(s2.add(&s2.one_like()), s2.zero_like()).unwrap();
        let h = canonical_height_algebraic(&f, &pt, 1e-9).unwrap();
        assert!((h.value.mid_f64() - 0.5 * (1.0 + 2f64.sqrt()).ln()).abs() < 1e-9);
        let z3 = AlgebraicNumber::from_minpoly(&UniPoly::from_ints(&[1, 1, 1]), 0).unwrap();
        let pt = AlgebraicPoint::from_numbers(&z3, &AlgebraicNumber::from_int(1)).unwrap();
        let h = canonical_height_algebraic(&f, &pt, 1e-9).unwrap();
        assert!(h.value.contains(&int(0)) && h.value.width_f64() <= 1e-9);
        // (√2/3, 1/2): finite contributions at 2 and 3.
        let pt = AlgebraicPoint::new(s2.scale(&rat(1, 3)), s2.rational_like(rat(1, 2))).unwrap();
        let h = canonical_height_algebraic(&f, &pt, 1e-9).unwrap();
        // At 3 both places see |√2/3| = 3; at 2 the maximum is |1/2| = 2; the Archimedean terms vanish.
        assert!((h.value.mid_f64() - (3f64.ln() + 2f64.ln())).abs() < 1e-9, "{}", h.value);
        assert!(h.certified);
    }

    #[test]
    fn algebraic_matches_rational() {
        let f = RegularMap::parse("z^2 - w + 1, 2*w^2 + z").unwrap();
        for pt in [(rat(1, 2), rat(-3, 4)), (int(3), rat(2, 5))] {
            let a = canonical_height(&f, &pt, 1e-8).unwrap();
            let b = canonical_height_algebraic(&f, &AlgebraicPoint::rational(&pt), 1e-8).unwrap();
            assert!(a.value.overlaps(&b.value, &rat(1, 100_000_000)), "{} vs {}", a.value, b.value);
        }
    }

    #[test]
    fn verdicts() {
        let f = sq();
        let v = is_preperiodic(&f, &(int(1), int(1)), 10, 1e-9);
        assert!(matches!(v, PreperiodicityVerdict::Preperiodic { preperiod: 0, period: 1, .. }));
        let v = is_preperiodic(&f, &(int(-1), int(1)), 10, 1e-9);
        assert!(matches!(v, PreperiodicityVerdict::Preperiodic { preperiod: 1, period: 1, .. }));
        match is_preperiodic(&f, &(int(2), int(3)), 10, 1e-9) {
            PreperiodicityVerdict::NotPreperiodic { height_lower_bound } => {
                assert!(crate::exactnum::to_f64(&height_lower_bound) >= 3f64.ln() - 1e-6)
            }
            other => panic!("{other:?}"),
        }
        let g = RegularMap::parse("z^2 - 1, w^2").unwrap();
        let v = is_preperiodic(&g, &(int(0), int(0)), 10, 1e-9);
        assert!(matches!(v, PreperiodicityVerdict::Preperiodic { preperiod: 0, period: 2, .. }));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_rat() -> impl Strategy<Value = Rational> {
            (-500i64..500, 1i64..400).prop_map(|(a, b)| rat(a, b))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn squaring_height_is_projective_height(a in small_rat(), b in small_rat()) {
                let pt = (a, b);
                let h = canonical_height(&sq(), &pt, 1e-8).unwrap();
                prop_assert!((h.value.mid_f64() - projective_height(&pt)).abs() < 1e-8);
            }

            #[test]
            fn functional_equation(i in 0usize..2, a in small_rat(), b in small_rat()) {
                let f = RegularMap::parse(["z^2 + w, w^2 + z", "z^2 - w + 1, 2*w^2 + z"][i]).unwrap();
                let pt = (a, b);
                let tol = 1e-8;
                let h1 = canonical_height(&f, &f.apply(&pt), tol).unwrap();
                let h0 = canonical_height(&f, &pt, tol).unwrap();
                prop_assert!(h0.value.hi().clone() >= -Rational::from_float(tol).unwrap());
                prop_assert!(h1.value.overlaps(&h0.value.scale(&int(2)), &Rational::from_float(2.0 * tol).unwrap()));
            }

            #[test]
            fn cycle_points_have_zero_height(a in -3i64..4, b in -3i64..4) {
                let f = RegularMap::parse("z^2 - 1, w^2 - 2").unwrap();
                if let PreperiodicityVerdict::Preperiodic { preperiod, period, orbit } = is_preperiodic(&f, &(int(a), int(b)), 12, 1e-9) {
                    prop_assert_eq!(&orbit[preperiod + period], &orbit[preperiod]);
                    for q in &orbit {
                        let h = canonical_height(&f, q, 1e-9).unwrap();
                        prop_assert!(h.value.contains(&int(0)) || h.value.hi_f64() <= 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn essential_min_samples() {
        let tol = 1e-6;
        let e = essential_min_estimate(&sq(), &PlaneCurve::parse("w - z").unwrap(), 50, tol).unwrap();
        assert_eq!(e.samples.len(), 50);
        assert!(e.value.contains(&int(0)) && e.value.width_f64() <= tol);
        assert!(e.samples.iter().any(|(p, h)| p.field().degree() > 1 && h.contains(&int(0))));
        // (0, 1) is a fixed point of the squaring map on {w = z + 1}.
        let e = essential_min_estimate(&sq(), &PlaneCurve::parse("w - z - 1").unwrap(), 50, tol).unwrap();
        assert!(e.value.contains(&int(0)));
        // On {w = 2} every point has height at least log 2.
        let e = essential_min_estimate(&sq(), &PlaneCurve::parse("w - 2").unwrap(), 20, tol).unwrap();
        assert!(e.value.lo_f64() >= 2f64.ln() - 2.0 * tol);
        for (p, h) in &e.samples {
            if let (Some(z), Some(w)) = (p.z.as_rational(), p.w.as_rational()) {
                assert!((h.mid_f64() - projective_height(&(z, w))).abs() <= 2.0 * tol);
            }
        }
    }

}
