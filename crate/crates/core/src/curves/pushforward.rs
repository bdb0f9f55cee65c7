use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::PlaneCurve;
use crate::error::{Error, Result};
use crate::exactnum::{Rational, UniPoly};
use crate::maps::RegularMap;
use crate::polyalg::linalg::nullspace;
use crate::polyalg::MultiPoly;

/// Remainder of F modulo R as polynomials in w; R has constant leading coefficient in w.
struct WReducer {
    r: Vec<UniPoly>,
    lead_inv: Rational,
}

impl WReducer {
    fn reduce(&self, f: &MultiPoly) -> MultiPoly {
        let n = self.r.len() - 1;
        let mut cols = f.as_poly_in(1);
        for k in (n..cols.len()).rev() {
            let c = cols[k].scale(&self.lead_inv);
            if c.is_zero() {
                continue;
            }
            for i in 0..=n {
                cols[k - n + i] = &cols[k - n + i] - &(&c * &self.r[i]);
            }
        }
        cols.truncate(n.max(1));
        MultiPoly::from_poly_in(1, &cols)
    }
}

/// The curve f(C), or None when its degree exceeds `max_degree`.
pub fn pushforward_capped(f: &RegularMap, c: &PlaneCurve, max_degree: u32) -> Result<Option<PlaneCurve>> {
    let n = c.degree();
    let top = c.poly().homogeneous_part(n);
    // z -> z + s w makes the w^n coefficient of R a nonzero constant.
    let s = (0i64..)
        .flat_map(|k| [k, -k])
        .map(|k| Rational::from_integer(k.into()))
        .find(|s| !top.eval(s, &Rational::one()).is_zero())
        .unwrap();
    let shift = (&MultiPoly::z() + &MultiPoly::w().scale(&s), MultiPoly::w());
    let r = c.poly().compose(&shift.0, &shift.1);
    let p = f.p().compose(&shift.0, &shift.1);
    let q = f.q().compose(&shift.0, &shift.1);
    let rc = r.as_poly_in(1);
    debug_assert_eq!(rc.len(), n as usize + 1);
    let red = WReducer { lead_inv: rc[n as usize].coeff(0).recip(), r: rc };
    let bound = (f.degree() * n).min(max_degree);
    // Reduced images of P^a Q^b, a + b <= D.
    let mut images: HashMap<(u32, u32), MultiPoly> = HashMap::new();
    images.insert((0, 0), MultiPoly::one());
    for dd in 1..=bound {
        for a in 0..=dd {
            let b = dd - a;
            let img = if a > 0 { red.reduce(&(&images[&(a - 1, b)] * &p)) } else { red.reduce(&(&images[&(0, b - 1)] * &q)) };
            images.insert((a, b), img);
        }
        let monos: Vec<(u32, u32)> = (0..=dd).flat_map(|t| (0..=t).map(move |a| (a, t - a))).collect();
        let mut rows: BTreeMap<(u32, u32), Vec<Rational>> = BTreeMap::new();
        for (col, m) in monos.iter().enumerate() {
            for (e, coef) in images[m].terms() {
                rows.entry(*e).or_insert_with(|| vec![Rational::zero(); monos.len()])[col] = coef.clone();
            }
        }
        let mat: Vec<Vec<Rational>> = rows.into_values().collect();
        let ns = nullspace(&mat, monos.len());
        if ns.is_empty() {
            continue;
        }
        if ns.len() > 1 {
            return Err(Error::Elimination(format!("{}-dimensional space of equations in degree {dd}", ns.len())));
        }
        let s = MultiPoly::from_terms(monos.iter().zip(&ns[0]).map(|(&e, c)| (e, c.clone())));
        return PlaneCurve::new(&s).map(Some);
    }
    if bound < f.degree() * n {
        Ok(None)
    } else {
        Err(Error::Elimination("no equation up to the degree bound".into()))
    }
}

/// The Zariski closure of f(C); deg f(C) <= d deg C.
pub fn pushforward(f: &RegularMap, c: &PlaneCurve) -> Result<PlaneCurve> {
    pushforward_capped(f, c, u32::MAX)?.ok_or_else(|| Error::Elimination("degree cap".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveOrbitStatus {
    Fixed,
    Periodic(usize),
    PreperiodicTo { preperiod: usize, period: usize },
    NotDetectedPreperiodic { reason: String },
}

impl CurveOrbitStatus {
    pub fn preperiod_period(&self) -> Option<(usize, usize)> {
        match self {
            CurveOrbitStatus::Fixed => Some((0, 1)),
            CurveOrbitStatus::Periodic(l) => Some((0, *l)),
            CurveOrbitStatus::PreperiodicTo { preperiod, period } => Some((*preperiod, *period)),
            CurveOrbitStatus::NotDetectedPreperiodic { .. } => None,
        }
    }
}

/// The orbit C, f(C), ...; on a repeat the last entry equals an earlier one exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveOrbit {
    pub status: CurveOrbitStatus,
    pub orbit: Vec<PlaneCurve>,
}

impl CurveOrbit {
    pub fn degrees(&self) -> Vec<u32> {
        self.orbit.iter().map(|c| c.degree()).collect()
    }
}

pub fn curve_preperiodicity(f: &RegularMap, c: &PlaneCurve, max_iters: usize, max_degree: u32) -> Result<CurveOrbit> {
    let mut orbit = vec![c.clone()];
    for i in 1..=max_iters {
        let next = match pushforward_capped(f, &orbit[i - 1], max_degree)? {
            Some(n) => n,
            None => {
                return Ok(CurveOrbit {
                    status: CurveOrbitStatus::NotDetectedPreperiodic { reason: format!("degree of f^{i}(C) exceeds {max_degree}") },
                    orbit,
                })
            }
        };
        let hit = orbit.iter().position(|x| *x == next);
        orbit.push(next);
        if let Some(j) = hit {
            let period = i - j;
            let status = match (j, period) {
                (0, 1) => CurveOrbitStatus::Fixed,
                (0, l) => CurveOrbitStatus::Periodic(l),
                (k, l) => CurveOrbitStatus::PreperiodicTo { preperiod: k, period: l },
            };
            return Ok(CurveOrbit { status, orbit });
        }
    }
    Ok(CurveOrbit { status: CurveOrbitStatus::NotDetectedPreperiodic { reason: format!("no repeat within {max_iters} iterations") }, orbit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;
    use crate::exactnum::numfield::interpolate;

    fn curve(s: &str) -> PlaneCurve {
        PlaneCurve::parse(s).unwrap()
    }

    fn sq() -> RegularMap {
        RegularMap::parse("z^2, w^2").unwrap()
    }

    #[test]
    fn squaring_examples() {
        assert_eq!(pushforward(&sq(), &curve("w - z")).unwrap(), curve("w - z"));
        assert_eq!(pushforward(&sq(), &curve("w - z^2")).unwrap(), curve("w - z^2"));
        assert_eq!(pushforward(&sq(), &curve("z - 1")).unwrap(), curve("z - 1"));
        assert_eq!(pushforward(&sq(), &curve("w - z - 1")).unwrap(), curve("(w - z - 1)^2 - 4*z"));
        assert_eq!(pushforward(&sq(), &curve("w")).unwrap(), curve("w"));
        assert_eq!(pushforward(&sq(), &curve("w + z")).unwrap(), curve("w - z"));
    }

    /// Resultant oracle for the graph curve w = t^2 − 1 parametrized by t: on each
    /// horizontal line W = c, the image meets it at the roots of Res_t(Z − A(t), B(t) − c).
    #[test]
    fn resultant_oracle() {
        let f = RegularMap::parse("z^2 + w, w^2 + z").unwrap();
        let img = pushforward(&f, &curve("w - z^2 + 1")).unwrap();
        assert!(img.degree() <= 4);
        let g = &(&MultiPoly::z() * &MultiPoly::z()) - &MultiPoly::one();
        let a = f.p().compose(&MultiPoly::z(), &g).to_uni(0).unwrap();
        let b = f.q().compose(&MultiPoly::z(), &g).to_uni(0).unwrap();
        for c in [int(0), int(1), int(-3), int(7)] {
            let bc = &b - &UniPoly::constant(c.clone());
            let xs: Vec<Rational> = (0..=(a.deg() * b.deg()) as i64).map(int).collect();
            let ys: Vec<Rational> = xs.iter().map(|z| (&a - &UniPoly::constant(z.clone())).resultant(&bc)).collect();
            let res = interpolate(&xs, &ys);
            assert_eq!(res.squarefree_part().monic(), img.horizontal_slice(&c).squarefree_part().monic());
        }
    }

    #[test]
    fn functoriality() {
        let f = RegularMap::parse("z^2 + w, w^2 - z").unwrap();
        let f2 = f.power(2).unwrap();
        for s in ["w - z", "z - 2"] {
            let c = curve(s);
            let once = pushforward(&f, &c).unwrap();
            assert_eq!(pushforward(&f, &once).unwrap(), pushforward(&f2, &c).unwrap());
        }
    }

    #[test]
    fn orbits() {
        let o = curve_preperiodicity(&sq(), &curve("w - z"), 8, 16).unwrap();
        assert_eq!(o.status, CurveOrbitStatus::Fixed);
        assert_eq!(o.orbit[1], o.orbit[0]);
        assert_eq!(curve_preperiodicity(&sq(), &curve("w - z^2"), 8, 16).unwrap().status, CurveOrbitStatus::Fixed);
        let o = curve_preperiodicity(&sq(), &curve("w - z - 1"), 8, 4).unwrap();
        assert!(matches!(o.status, CurveOrbitStatus::NotDetectedPreperiodic { .. }));
        assert_eq!(o.degrees(), vec![1, 2, 4]);
        let o = curve_preperiodicity(&sq(), &curve("w + z"), 8, 16).unwrap();
        assert_eq!(o.status, CurveOrbitStatus::PreperiodicTo { preperiod: 1, period: 1 });
        let swap = RegularMap::parse("w^2, z^2").unwrap();
        let o = curve_preperiodicity(&swap, &curve("z - 1"), 8, 16).unwrap();
        assert_eq!(o.status, CurveOrbitStatus::Periodic(2));
    }
}
