//! JSON encodings of library values.

use planedyn::curves::{CurveOrbit, CurveOrbitStatus, FoundPoint, InfinityDivisor, PlaneCurve};
use planedyn::exactnum::algebraic::ExpansionWitness;
use planedyn::exactnum::roots::RootEnclosure;
use planedyn::exactnum::{fmt_rational, AlgebraicNumber, NfElem, Place, RealInterval};
use planedyn::heights::{AlgebraicPoint, PreperiodicityVerdict};
use planedyn::infinity::{Classification, InfinityFixedPoint, LinePoint};
use planedyn::localdyn::{ChartAxis, LocalChart, LocalGerm};
use planedyn::polyalg::series::{Coeff, TruncSeries};
use planedyn::Rational;
use serde_json::{json, Value};

/// Exact endpoints plus f64 bounds rounded outward.
pub fn interval(iv: &RealInterval) -> Value {
    let (lo, hi) = iv.outer_f64();
    json!({ "lo": lo, "hi": hi, "lo_exact": iv.lo_string(), "hi_exact": iv.hi_string() })
}

pub fn rational(q: &Rational) -> Value {
    Value::String(fmt_rational(q))
}

pub fn place(v: &Place) -> Value {
    Value::String(v.to_string())
}

fn enclosure(e: &RootEnclosure) -> Value {
    json!({
        "re": interval(&e.re_interval()),
        "im": interval(&e.im_interval()),
        "is_real": e.is_real,
    })
}

pub fn algebraic(a: &AlgebraicNumber) -> Value {
    let z = a.isolating_disc().approx();
    json!({
        "exact": a.to_string(),
        "rational": a.as_rational().map(|q| fmt_rational(&q)),
        "minpoly": a.minpoly().to_string_var("x"),
        "root_index": a.embedding_index(),
        "approx": { "re": z.re, "im": z.im },
        "enclosure": enclosure(a.isolating_disc()),
    })
}

pub fn classification(c: &Classification) -> Value {
    match c {
        Classification::Superattracting => json!({ "kind": "superattracting" }),
        Classification::RootOfUnity(n) => json!({ "kind": "root_of_unity", "order": n }),
        Classification::ExpandingPlace(e) => {
            let witness = match &e.witness {
                ExpansionWitness::Embedding(r) => json!({ "kind": "embedding", "embedding": enclosure(r) }),
                ExpansionWitness::NewtonPolygon { valuation } => {
                    json!({ "kind": "newton_polygon", "valuation": rational(valuation) })
                }
            };
            json!({ "kind": "expanding", "place": place(&e.place), "witness": witness })
        }
    }
}

pub fn line_point(p: &LinePoint) -> Value {
    match p {
        LinePoint::Infinite => json!({ "text": p.to_string(), "t": null }),
        LinePoint::Finite(a) => json!({ "text": p.to_string(), "t": algebraic(a) }),
    }
}

pub fn fixed_point(p: &InfinityFixedPoint) -> Value {
    json!({
        "point": line_point(&p.point),
        "multiplicity": p.multiplicity,
        "multiplier": algebraic(&p.multiplier),
        "classification": classification(&p.classification),
    })
}

fn field_name(e: &NfElem) -> String {
    if e.field().degree() == 1 {
        "Q".into()
    } else {
        format!("Q[t]/({})", e.field().modulus().to_string_var("t"))
    }
}

pub fn algebraic_point(p: &AlgebraicPoint) -> Value {
    json!({ "field": field_name(&p.z), "z": p.z.to_string(), "w": p.w.to_string() })
}

pub fn rational_point(p: &(Rational, Rational)) -> Value {
    json!([fmt_rational(&p.0), fmt_rational(&p.1)])
}

pub fn verdict<P>(v: &PreperiodicityVerdict<P>, enc: impl Fn(&P) -> Value) -> Value {
    match v {
        PreperiodicityVerdict::Preperiodic { preperiod, period, orbit } => json!({
            "kind": "preperiodic",
            "preperiod": preperiod,
            "period": period,
            "orbit": orbit.iter().map(enc).collect::<Vec<_>>(),
        }),
        PreperiodicityVerdict::NotPreperiodic { height_lower_bound } => json!({
            "kind": "not_preperiodic",
            "height_lower_bound": rational(height_lower_bound),
        }),
        PreperiodicityVerdict::Unknown { reason } => json!({ "kind": "unknown", "reason": reason }),
    }
}

pub fn curve(c: &PlaneCurve) -> Value {
    json!({ "equation": c.poly().to_string(), "degree": c.degree() })
}

pub fn divisor(d: &InfinityDivisor) -> Value {
    json!({
        "total": d.total(),
        "points": d.points.iter().map(|(p, m)| json!({ "point": line_point(p), "multiplicity": m })).collect::<Vec<_>>(),
    })
}

pub fn curve_orbit(o: &CurveOrbit) -> Value {
    let status = match &o.status {
        CurveOrbitStatus::Fixed => json!({ "kind": "fixed", "preperiod": 0, "period": 1 }),
        CurveOrbitStatus::Periodic(l) => json!({ "kind": "periodic", "preperiod": 0, "period": l }),
        CurveOrbitStatus::PreperiodicTo { preperiod, period } => {
            json!({ "kind": "preperiodic", "preperiod": preperiod, "period": period })
        }
        CurveOrbitStatus::NotDetectedPreperiodic { reason } => json!({ "kind": "not_detected", "reason": reason }),
    };
    json!({
        "status": status,
        "degrees": o.degrees(),
        "curves": o.orbit.iter().map(|c| c.poly().to_string()).collect::<Vec<_>>(),
    })
}

pub fn found_point(p: &FoundPoint) -> Value {
    json!({
        "point": algebraic_point(&p.point),
        "preperiod": p.preperiod,
        "period": p.period,
        "orbit": p.orbit.iter().map(algebraic_point).collect::<Vec<_>>(),
    })
}

pub fn series<C: Coeff>(s: &TruncSeries<C>, var: &str) -> Value {
    json!({
        "text": s.to_string_var(var),
        "order": s.order(),
        "coefficients": s.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    })
}

pub fn germ<C: Coeff>(g: &LocalGerm<C>) -> Value {
    json!({
        "first": g.first().to_string_vars(("x", "y")),
        "second": g.second().to_string_vars(("x", "y")),
        "lambda": g.lambda().to_string(),
        "mu": g.mu().to_string(),
        "kappa": g.kappa().to_string(),
        "d": g.d(),
        "order": g.order(),
    })
}

pub fn chart(c: &LocalChart) -> Value {
    let axis = match c.axis {
        ChartAxis::Z1 => "z1",
        ChartAxis::Z2 => "z2",
    };
    json!({
        "axis": axis,
        "field": field_name(&c.center),
        "center": c.center.to_string(),
        "scale": c.scale.to_string(),
    })
}
