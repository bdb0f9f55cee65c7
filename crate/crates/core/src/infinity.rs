//! Dynamics of f_∞ = [P_d : Q_d] on the line at infinity.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::factor::factor_over_q;
use crate::exactnum::{
    find_expanding_place, is_root_of_unity, AlgebraicNumber, ExpandingPlace, NfElem, NumberField, Place, Rational,
    RealInterval, RootOfUnity, UniPoly,
};
use crate::green::{bad_places, GreenContext};
use crate::heights::PreperiodicityVerdict;
use crate::maps::RegularMap;
use crate::polyalg::MultiPoly;

/// A point [z1 : z2] of the line at infinity: `Finite(t)` is [t : 1], `Infinite` is [1 : 0].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LinePoint {
    Finite(AlgebraicNumber),
    Infinite,
}

impl LinePoint {
    pub fn rational(q: Rational) -> Self {
        LinePoint::Finite(AlgebraicNumber::from_rational(&q))
    }
}

impl fmt::Display for LinePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinePoint::Infinite => write!(f, "[1:0]"),
            LinePoint::Finite(a) => write!(f, "[{a}:1]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Superattracting,
    RootOfUnity(u64),
    ExpandingPlace(ExpandingPlace),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinityFixedPoint {
    pub point: LinePoint,
    pub multiplicity: u32,
    pub multiplier: AlgebraicNumber,
    pub classification: Classification,
}

/// z2·P_d − z1·Q_d dehomogenized at z2 = 1.
fn fixed_point_poly(pd: &MultiPoly, qd: &MultiPoly) -> UniPoly {
    let p = pd.dehomogenize_second();
    let q = qd.dehomogenize_second();
    &p - &(&UniPoly::x() * &q)
}

fn fixed_points_of_forms(pd: &MultiPoly, qd: &MultiPoly, d: u32) -> Result<Vec<InfinityFixedPoint>> {
    let phi = fixed_point_poly(pd, qd);
    let mut out = Vec::new();
    let at_inf = d as isize + 1 - phi.degree();
    if at_inf > 0 {
        let lam = multiplier_forms(pd, qd, &LinePoint::Infinite)?;
        out.push(InfinityFixedPoint {
            point: LinePoint::Infinite,
            multiplicity: at_inf as u32,
            classification: classify_multiplier(&lam),
            multiplier: lam,
        });
    }
    for (g, m) in factor_over_q(&phi)? {
        for i in 0..g.deg() {
            let t = AlgebraicNumber::from_irreducible(&g, i)?;
            let point = LinePoint::Finite(t);
            let lam = multiplier_forms(pd, qd, &point)?;
            out.push(InfinityFixedPoint { point, multiplicity: m, classification: classify_multiplier(&lam), multiplier: lam });
        }
    }
    Ok(out)
}

/// Fixed points of f_∞ with multiplicities, multipliers and the trichotomy.
pub fn fixed_points_infinity(f: &RegularMap) -> Result<Vec<InfinityFixedPoint>> {
    let (pd, qd) = f.restrict_infinity();
    fixed_points_of_forms(pd, qd, f.degree())
}

pub const PERIOD_CAP: u32 = 4;

/// Fixed points of the n-fold composite of f_∞, for n <= 4.
pub fn periodic_points_infinity(f: &RegularMap, n: u32) -> Result<Vec<InfinityFixedPoint>> {
    if n == 0 || n > PERIOD_CAP {
        return Err(Error::Precondition(format!("period must lie in 1..={PERIOD_CAP}")));
    }
    let (pd, qd) = f.restrict_infinity();
    let (mut a, mut b) = (pd.clone(), qd.clone());
    for _ in 1..n {
        let na = pd.compose(&a, &b);
        let nb = qd.compose(&a, &b);
        a = na;
        b = nb;
    }
    fixed_points_of_forms(&a, &b, f.degree().pow(n))
}

/// The multiplier of f_∞ at a fixed point, computed in an affine chart containing it.
pub fn multiplier(f: &RegularMap, p: &LinePoint) -> Result<AlgebraicNumber> {
    let (pd, qd) = f.restrict_infinity();
    multiplier_forms(pd, qd, p)
}

fn multiplier_forms(pd: &MultiPoly, qd: &MultiPoly, p: &LinePoint) -> Result<AlgebraicNumber> {
    match p {
        LinePoint::Infinite => multiplier_in_chart(pd, qd, p, Chart::Z1),
        LinePoint::Finite(_) => multiplier_in_chart(pd, qd, p, Chart::Z2),
    }
}

/// Affine chart: `Z2` uses t = z1/z2, `Z1` uses s = z2/z1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    Z1,
    Z2,
}

/// The multiplier computed in a prescribed chart; the chart must contain the point.
pub fn multiplier_in_chart(pd: &MultiPoly, qd: &MultiPoly, p: &LinePoint, chart: Chart) -> Result<AlgebraicNumber> {
    // In the chart, the map is u -> num(u)/den(u) for binary forms evaluated on the chart line.
    let (num, den, u) = match (chart, p) {
        (Chart::Z2, LinePoint::Finite(t)) => (pd.dehomogenize_second(), qd.dehomogenize_second(), t.clone()),
        (Chart::Z1, LinePoint::Infinite) => {
            (qd.swap_vars().dehomogenize_second(), pd.swap_vars().dehomogenize_second(), AlgebraicNumber::from_int(0))
        }
        (Chart::Z1, LinePoint::Finite(t)) => {
            if t.is_zero() {
                return Err(Error::Precondition("[0:1] is not in the chart z1 != 0".into()));
            }
            let k = t.field()?;
            let s = NfElem::generator(&k).inv().unwrap();
            let u = AlgebraicNumber::from_element(&s, t.isolating_disc())?;
            (qd.swap_vars().dehomogenize_second(), pd.swap_vars().dehomogenize_second(), u)
        }
        (Chart::Z2, LinePoint::Infinite) => return Err(Error::Precondition("[1:0] is not in the chart z2 != 0".into())),
    };
    let k = u.field()?;
    let x = match u.as_rational() {
        Some(q) => NfElem::from_rational(&k, q),
        None => NfElem::generator(&k),
    };
    let nv = x.eval_poly(&num);
    let dv = x.eval_poly(&den);
    let lhs = x.mul(&dv);
    if nv != lhs {
        return Err(Error::NotFixed(p.to_string()));
    }
    // derivative of num/den at a fixed point u: (num' - u·den')/den
    let dinv = dv.inv().ok_or_else(|| Error::NotFixed(p.to_string()))?;
    let lam = x.eval_poly(&num.derivative()).sub(&x.mul(&x.eval_poly(&den.derivative()))).mul(&dinv);
    AlgebraicNumber::from_element(&lam, u.isolating_disc())
}

/// Exactly one of the three branches.
pub fn classify_multiplier(lam: &AlgebraicNumber) -> Classification {
    if lam.is_zero() {
        return Classification::Superattracting;
    }
    match is_root_of_unity(lam) {
        RootOfUnity::Yes(n) => Classification::RootOfUnity(n),
        RootOfUnity::No => Classification::ExpandingPlace(
            find_expanding_place(lam).expect("Kronecker: a nonzero non-root of unity has an expanding place"),
        ),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitCaps {
    pub orbit_cap: usize,
    pub degree_cap: usize,
}

impl Default for OrbitCaps {
    fn default() -> Self {
        OrbitCaps { orbit_cap: 64, degree_cap: 16 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Finite(NfElem),
    Infinite,
}

/// Exact orbit of a point of the line at infinity with cycle detection.
pub fn infinity_orbit_preperiodicity(f: &RegularMap, p: &LinePoint, caps: OrbitCaps) -> PreperiodicityVerdict<LinePoint> {
    let field = match p {
        LinePoint::Finite(t) if t.as_rational().is_none() => {
            if t.degree() > caps.degree_cap {
                return PreperiodicityVerdict::Unknown { reason: format!("field degree {} exceeds cap {}", t.degree(), caps.degree_cap) };
            }
            match t.field() {
                Ok(k) => k,
                Err(e) => return PreperiodicityVerdict::Unknown { reason: e.to_string() },
            }
        }
        _ => NumberField::rationals(),
    };
    let start = match p {
        LinePoint::Infinite => Node::Infinite,
        LinePoint::Finite(t) => Node::Finite(match t.as_rational() {
            Some(q) => NfElem::from_rational(&field, q),
            None => NfElem::generator(&field),
        }),
    };
    let (pd, qd) = f.infinity_dehomogenized();
    let (pdi, qdi) = {
        let (a, b) = f.restrict_infinity();
        (a.swap_vars().dehomogenize_second(), b.swap_vars().dehomogenize_second())
    };
    let step = |n: &Node| -> Node {
        match n {
            Node::Infinite => {
                // [1:0] -> [P_d(1,0) : Q_d(1,0)]
                let (a, b) = (pdi.coeff(0), qdi.coeff(0));
                if b.is_zero() {
                    Node::Infinite
                } else {
                    Node::Finite(NfElem::from_rational(&field, a / b))
                }
            }
            Node::Finite(t) => {
                let den = t.eval_poly(&qd);
                match den.inv() {
                    None => Node::Infinite,
                    Some(i) => Node::Finite(t.eval_poly(&pd).mul(&i)),
                }
            }
        }
    };
    let to_point = |n: &Node| -> LinePoint {
        match n {
            Node::Infinite => LinePoint::Infinite,
            Node::Finite(e) => match (e.as_rational(), p) {
                (Some(q), _) => LinePoint::rational(q),
                (None, LinePoint::Finite(t)) => {
                    AlgebraicNumber::from_element(e, t.isolating_disc()).map(LinePoint::Finite).unwrap_or(LinePoint::Infinite)
                }
                (None, LinePoint::Infinite) => unreachable!(),
            },
        }
    };
    let mut seen: HashMap<Node, usize> = HashMap::new();
    let mut orbit = vec![start.clone()];
    seen.insert(start, 0);
    for i in 1..=caps.orbit_cap {
        let next = step(&orbit[i - 1]);
        if let Node::Finite(e) = &next {
            if e.bit_size() > 1 << 16 {
                break;
            }
        }
        orbit.push(next.clone());
        if let Some(&j) = seen.get(&next) {
            return PreperiodicityVerdict::Preperiodic { preperiod: j, period: i - j, orbit: orbit.iter().map(to_point).collect() };
        }
        seen.insert(next, i);
    }
    if let LinePoint::Finite(t) = p {
        if let Some(q) = t.as_rational() {
            if let Ok(h) = line_height_rational(f, &q, 1e-9) {
                if h.lo().is_positive() {
                    return PreperiodicityVerdict::NotPreperiodic { height_lower_bound: h.lo().clone() };
                }
            }
        }
    }
    PreperiodicityVerdict::Unknown { reason: "no repetition found within the orbit caps".into() }
}

/// Canonical height of [0 : q : 1] on the line at infinity, Σ_v G_v(0, q, 1).
pub fn line_height_rational(f: &RegularMap, q: &Rational, tol: f64) -> Result<RealInterval> {
    let mut primes = bad_places(f)?;
    primes.extend(crate::exactnum::primes::prime_divisors(q.denom())?);
    primes.sort_unstable();
    primes.dedup();
    let mut places = vec![Place::Archimedean];
    places.extend(primes.into_iter().map(Place::Finite));
    let each = tol / places.len() as f64;
    let z = [Rational::zero(), q.clone(), Rational::one()];
    let mut acc = RealInterval::zero();
    for v in places {
        acc = acc.add(&GreenContext::new(f, v).green_homog(&z, each)?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn m(s: &str) -> RegularMap {
        RegularMap::parse(s).unwrap()
    }

    fn summary(fps: &[InfinityFixedPoint]) -> Vec<(String, u32, String)> {
        let mut v: Vec<_> = fps.iter().map(|p| (p.point.to_string(), p.multiplicity, p.multiplier.to_string())).collect();
        v.sort();
        v
    }

    #[test]
    fn squaring_fixed_points() {
        let fps = fixed_points_infinity(&m("z^2, w^2")).unwrap();
        assert_eq!(fps.len(), 3);
        for p in &fps {
            match &p.point {
                LinePoint::Infinite => assert_eq!(p.classification, Classification::Superattracting),
                LinePoint::Finite(t) if t.is_zero() => assert_eq!(p.classification, Classification::Superattracting),
                LinePoint::Finite(t) => {
                    assert_eq!(t.as_rational(), Some(int(1)));
                    assert_eq!(p.multiplier.as_rational(), Some(int(2)));
                    assert!(matches!(&p.classification, Classification::ExpandingPlace(e) if e.place == Place::Archimedean));
                }
            }
        }
        assert_eq!(fps.iter().map(|p| p.multiplicity).sum::<u32>(), 3);
        assert_eq!(summary(&fps), summary(&fixed_points_infinity(&m("z^2 + w, w^2")).unwrap()));
    }

    #[test]
    fn multipliers() {
        let f = m("z^2, w^2");
        assert_eq!(multiplier(&f, &LinePoint::rational(int(1))).unwrap().as_rational(), Some(int(2)));
        assert!(multiplier(&f, &LinePoint::Infinite).unwrap().is_zero());
        assert_eq!(multiplier(&f, &LinePoint::rational(int(2))), Err(Error::NotFixed("[2:1]".into())));
        // 2z^2 - zw at [1:0]: s -> s^2/(2 - s), multiplier 0; at [1:1]: t -> (2t^2 - t), multiplier 3.
        let g = m("2*z^2 - z*w, w^2");
        assert!(multiplier(&g, &LinePoint::Infinite).unwrap().is_zero());
        assert_eq!(multiplier(&g, &LinePoint::rational(int(1))).unwrap().as_rational(), Some(int(3)));
        assert_eq!(multiplier(&g, &LinePoint::rational(int(0))).unwrap().as_rational(), Some(int(-1)));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_multiplier(&AlgebraicNumber::from_int(0)), Classification::Superattracting);
        assert_eq!(classify_multiplier(&AlgebraicNumber::from_int(-1)), Classification::RootOfUnity(2));
        match classify_multiplier(&AlgebraicNumber::from_rational(&rat(2, 3))) {
            Classification::ExpandingPlace(e) => assert_eq!(e.place, Place::Finite(3)),
            other => panic!("{other:?}"),
        }
        let z3 = AlgebraicNumber::from_minpoly(&UniPoly::from_ints(&[1, 1, 1]), 0).unwrap();
        assert_eq!(classify_multiplier(&z3), Classification::RootOfUnity(3));
    }

    #[test]
    fn algebraic_fixed_points_and_chart_independence() {
        // t -> t^2 - 2t... fixed points of z^2 - 2*z*w - w^2 style forms include irrationals.
        for s in ["z^2 - 2*z*w - w^2, w^2", "z^2 + z*w, z*w + 2*w^2", "z^3 - w^3, z*w^2 + w^3"] {
            let f = m(s);
            let fps = fixed_points_infinity(&f).unwrap();
            assert_eq!(fps.iter().map(|p| p.multiplicity).sum::<u32>(), f.degree() + 1, "{s}");
            let (pd, qd) = f.restrict_infinity();
            for p in &fps {
                if let LinePoint::Finite(t) = &p.point {
                    if !t.is_zero() {
                        let a = multiplier_in_chart(pd, qd, &p.point, Chart::Z1).unwrap();
                        assert_eq!(a, p.multiplier, "{s} at {}", p.point);
                    }
                }
            }
        }
    }

    #[test]
    fn swap_transports_fixed_points() {
        let f = m("z^2 + z*w, z*w + 2*w^2");
        let g = f.swap_conjugate();
        let a = fixed_points_infinity(&f).unwrap();
        let b = fixed_points_infinity(&g).unwrap();
        let swap = |p: &LinePoint| match p {
            LinePoint::Infinite => LinePoint::rational(int(0)),
            LinePoint::Finite(t) if t.is_zero() => LinePoint::Infinite,
            LinePoint::Finite(t) => {
                let k = t.field().unwrap();
                let inv = NfElem::generator(&k).inv().unwrap();
                LinePoint::Finite(AlgebraicNumber::from_element(&inv, t.isolating_disc()).unwrap())
            }
        };
        for p in &a {
            let q = b.iter().find(|q| q.point == swap(&p.point)).expect("transported point");
            assert_eq!(q.multiplier, p.multiplier);
            assert_eq!(q.multiplicity, p.multiplicity);
        }
    }

    #[test]
    fn periodic_points() {
        let f = m("z^2, w^2");
        let two = periodic_points_infinity(&f, 2).unwrap();
        assert_eq!(two.iter().map(|p| p.multiplicity).sum::<u32>(), 5);
        assert!(two.iter().any(|p| matches!(&p.point, LinePoint::Finite(t) if t.degree() == 2)));
        assert!(periodic_points_infinity(&f, 5).is_err());
    }

    #[test]
    fn orbits_at_infinity() {
        let f = m("z^2, w^2");
        let caps = OrbitCaps::default();
        let v = infinity_orbit_preperiodicity(&f, &LinePoint::rational(int(1)), caps);
        assert!(matches!(v, PreperiodicityVerdict::Preperiodic { preperiod: 0, period: 1, .. }));
        let v = infinity_orbit_preperiodicity(&f, &LinePoint::rational(int(-1)), caps);
        assert!(matches!(v, PreperiodicityVerdict::Preperiodic { preperiod: 1, period: 1, .. }));
        match infinity_orbit_preperiodicity(&f, &LinePoint::rational(int(2)), OrbitCaps { orbit_cap: 8, degree_cap: 4 }) {
            PreperiodicityVerdict::NotPreperiodic { height_lower_bound } => {
                assert!((crate::exactnum::to_f64(&height_lower_bound) - 2f64.ln()).abs() < 1e-8)
            }
            other => panic!("{other:?}"),
        }
        let z5 = AlgebraicNumber::from_minpoly(&UniPoly::from_ints(&[1, 1, 1, 1, 1]), 1).unwrap();
        let v = infinity_orbit_preperiodicity(&f, &LinePoint::Finite(z5), caps);
        assert!(matches!(v, PreperiodicityVerdict::Preperiodic { preperiod: 0, period: 4, .. }), "{v:?}");
        let v = infinity_orbit_preperiodicity(&f, &LinePoint::Infinite, caps);
        assert!(matches!(v, PreperiodicityVerdict::Preperiodic { preperiod: 0, period: 1, .. }));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn exactly_one_branch(a in -1000i64..1000, b in 1i64..1000) {
                let lam = AlgebraicNumber::from_rational(&rat(a, b));
                let c = classify_multiplier(&lam);
                let fired = [
                    matches!(c, Classification::Superattracting),
                    matches!(c, Classification::RootOfUnity(_)),
                    matches!(c, Classification::ExpandingPlace(_)),
                ];
                prop_assert_eq!(fired.iter().filter(|x| **x).count(), 1);
                prop_assert_eq!(matches!(c, Classification::Superattracting), a == 0);
                prop_assert_eq!(matches!(c, Classification::RootOfUnity(_)), a.abs() == b);
            }

            #[test]
            fn multiplicities_sum(c in prop::collection::vec(-3i64..4, 6)) {
                let p = format!("{}*z^2 + {}*z*w + {}*w^2", c[0], c[1], c[2]);
                let q = format!("{}*z^2 + {}*z*w + {}*w^2", c[3], c[4], c[5]);
                if let Ok(f) = RegularMap::parse(&format!("{p}, {q}")) {
                    if f.degree() == 2 {
                        let fps = fixed_points_infinity(&f).unwrap();
                        prop_assert_eq!(fps.iter().map(|x| x.multiplicity).sum::<u32>(), 3);
                    }
                }
            }
        }
    }
}
