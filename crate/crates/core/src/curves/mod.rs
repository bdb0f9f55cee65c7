//! Plane curves, their points at infinity, images under f and the DMM report.

mod pushforward;
mod report;
pub(crate) mod search;

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::factor::factor_over_q;
use crate::exactnum::{AlgebraicNumber, Rational, UniPoly};
use crate::heights::AlgebraicPoint;
use crate::infinity::LinePoint;
use crate::polyalg::gcd::squarefree_part;
use crate::polyalg::{parse_poly, MultiPoly};

pub use pushforward::{curve_preperiodicity, pushforward, pushforward_capped, CurveOrbit, CurveOrbitStatus};
pub use report::{dmm_report, Consistency, DmmCaps, DmmReport, InfinityEntry};
pub use search::{find_preperiodic_points, orbit_in_field, FoundPoint, SearchCaps};

/// {R = 0} with R squarefree, primitive over Z and with positive leading term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlaneCurve {
    r: MultiPoly,
}

impl PlaneCurve {
    pub fn new(r: &MultiPoly) -> Result<Self> {
        if r.is_constant() {
            return Err(Error::Precondition("curve equation is constant".into()));
        }
        Ok(PlaneCurve { r: squarefree_part(r) })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(&parse_poly(text, ("z", "w"))?)
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.r
    }

    pub fn degree(&self) -> u32 {
        self.r.degree()
    }

    pub fn contains(&self, pt: &AlgebraicPoint) -> bool {
        self.r.eval_coeff(&pt.z, &pt.w).is_zero()
    }

    pub fn contains_rational(&self, pt: &(Rational, Rational)) -> bool {
        self.r.eval(&pt.0, &pt.1).is_zero()
    }

    /// R(a, w) as a polynomial in w.
    pub fn vertical_slice(&self, a: &Rational) -> UniPoly {
        let cols = self.r.as_poly_in(1);
        UniPoly::new(cols.iter().map(|c| c.eval(a)).collect())
    }

    /// R(z, b) as a polynomial in z.
    pub fn horizontal_slice(&self, b: &Rational) -> UniPoly {
        let cols = self.r.as_poly_in(0);
        UniPoly::new(cols.iter().map(|c| c.eval(b)).collect())
    }
}

impl fmt::Display for PlaneCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{} = 0}}", self.r)
    }
}

/// Intersection of the closure of C with the line at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinityDivisor {
    pub points: Vec<(LinePoint, u32)>,
}

impl InfinityDivisor {
    pub fn total(&self) -> u32 {
        self.points.iter().map(|p| p.1).sum()
    }
}

/// Roots of the top homogeneous form of R with multiplicities.
pub fn points_at_infinity(c: &PlaneCurve) -> Result<InfinityDivisor> {
    let n = c.degree();
    let top = c.poly().homogeneous_part(n);
    let t = top.dehomogenize_second();
    let mut points = Vec::new();
    let at_inf = n as isize - t.degree();
    if at_inf > 0 {
        points.push((LinePoint::Infinite, at_inf as u32));
    }
    for (g, m) in factor_over_q(&t)? {
        for i in 0..g.deg() {
            points.push((LinePoint::Finite(AlgebraicNumber::from_irreducible(&g, i)?), m));
        }
    }
    Ok(InfinityDivisor { points })
}
