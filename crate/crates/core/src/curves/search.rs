use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::PlaneCurve;
use crate::exactnum::cyclotomic::cyclotomic;
use crate::exactnum::factor::rational_roots;
use crate::exactnum::{NfElem, NumberField, Rational};
use crate::heights::{is_preperiodic, AlgebraicPoint, PreperiodicityVerdict};
use crate::maps::RegularMap;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchCaps {
    /// Rationals p/q with |p|, q <= height_bound on vertical and horizontal lines.
    pub height_bound: u64,
    /// Probes z = ζ and w = ζ for primitive n-th roots of unity, n <= this.
    pub root_order: u64,
    pub orbit_cap: usize,
    pub bit_cap: u64,
    pub tol: f64,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps { height_bound: 3, root_order: 24, orbit_cap: 64, bit_cap: 1 << 14, tol: 1e-6 }
    }
}

/// A preperiodic point of C with its exact orbit; orbit[preperiod + period] = orbit[preperiod].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoundPoint {
    pub point: AlgebraicPoint,
    pub preperiod: usize,
    pub period: usize,
    pub orbit: Vec<AlgebraicPoint>,
}

/// Exact orbit in the field of definition, with cycle detection.
pub fn orbit_in_field(f: &RegularMap, pt: &AlgebraicPoint, orbit_cap: usize, bit_cap: u64) -> PreperiodicityVerdict<AlgebraicPoint> {
    let mut seen: HashMap<AlgebraicPoint, usize> = HashMap::new();
    let mut orbit = vec![pt.clone()];
    seen.insert(pt.clone(), 0);
    for i in 1..=orbit_cap {
        let next = orbit[i - 1].apply(f);
        if next.bit_size() > bit_cap {
            return PreperiodicityVerdict::Unknown { reason: format!("coordinates exceed {bit_cap} bits at step {i}") };
        }
        orbit.push(next.clone());
        if let Some(&j) = seen.get(&next) {
            return PreperiodicityVerdict::Preperiodic { preperiod: j, period: i - j, orbit };
        }
        seen.insert(next, i);
    }
    PreperiodicityVerdict::Unknown { reason: format!("no repetition within {orbit_cap} steps") }
}

pub(crate) fn small_rationals(bound: u64) -> Vec<Rational> {
    let b = bound as i64;
    let mut out = vec![Rational::zero()];
    for q in 1..=b {
        for p in 1..=b {
            if p.gcd(&q) == 1 {
                let r = Rational::new(p.into(), q.into());
                out.push(r.clone());
                out.push(-r);
            }
        }
    }
    out.sort_by_key(|r| (r.numer().abs().max(r.denom().clone()), r.denom().clone()));
    out
}

fn rational_candidates(c: &PlaneCurve, bound: u64) -> Vec<(Rational, Rational)> {
    let mut pts = Vec::new();
    for a in small_rationals(bound) {
        let v = c.vertical_slice(&a);
        if !v.is_zero() && v.deg() > 0 {
            for (w, _) in rational_roots(&v).unwrap_or_default() {
                pts.push((a.clone(), w));
            }
        }
        let h = c.horizontal_slice(&a);
        if !h.is_zero() && h.deg() > 0 {
            for (z, _) in rational_roots(&h).unwrap_or_default() {
                pts.push((z, a.clone()));
            }
        }
    }
    pts
}

/// Points of C with one coordinate a primitive n-th root of unity ζ and the other in Q(ζ).
fn root_of_unity_candidates(c: &PlaneCurve, n: u64) -> Vec<AlgebraicPoint> {
    let k = NumberField::new(&cyclotomic(n)).expect("cyclotomic modulus");
    let zeta = NfElem::generator(&k);
    let mut probes = vec![zeta.zero_like()];
    let mut p = zeta.one_like();
    for _ in 0..n {
        probes.push(p.clone());
        probes.push(p.neg());
        p = p.mul(&zeta);
    }
    let mut out = Vec::new();
    for var in [1usize, 0] {
        // var = 1: z = ζ and solve for w.
        let cols: Vec<NfElem> = c.poly().as_poly_in(var).iter().map(|u| zeta.eval_poly(u)).collect();
        let deg = cols.iter().rposition(|x| !x.is_zero());
        let mk = |other: NfElem| if var == 1 { AlgebraicPoint { z: zeta.clone(), w: other } } else { AlgebraicPoint { z: other, w: zeta.clone() } };
        match deg {
            None | Some(0) => {}
            Some(1) => out.push(mk(cols[0].neg().mul(&cols[1].inv().unwrap()))),
            Some(_) => {
                for v in &probes {
                    let val = cols.iter().rev().fold(zeta.zero_like(), |acc, x| acc.mul(v).add(x));
                    if val.is_zero() {
                        out.push(mk(v.clone()));
                    }
                }
            }
        }
    }
    out
}

/// Preperiodic points of C among rational points of small height and root-of-unity probes.
pub fn find_preperiodic_points(f: &RegularMap, c: &PlaneCurve, caps: &SearchCaps) -> Vec<FoundPoint> {
    let mut found: Vec<FoundPoint> = Vec::new();
    let push = |fp: FoundPoint, found: &mut Vec<FoundPoint>| {
        if !found.iter().any(|x| x.point == fp.point) {
            found.push(fp);
        }
    };
    for pt in rational_candidates(c, caps.height_bound) {
        if let PreperiodicityVerdict::Preperiodic { preperiod, period, orbit } = is_preperiodic(f, &pt, caps.orbit_cap, caps.tol) {
            let orbit: Vec<AlgebraicPoint> = orbit.iter().map(AlgebraicPoint::rational).collect();
            push(FoundPoint { point: orbit[0].clone(), preperiod, period, orbit }, &mut found);
        }
    }
    for n in 3..=caps.root_order {
        for pt in root_of_unity_candidates(c, n) {
            if let PreperiodicityVerdict::Preperiodic { preperiod, period, orbit } = orbit_in_field(f, &pt, caps.orbit_cap, caps.bit_cap) {
                push(FoundPoint { point: pt, preperiod, period, orbit }, &mut found);
            }
        }
    }
    found
}
