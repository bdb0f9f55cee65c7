use super::pushforward::{curve_preperiodicity, CurveOrbit};
use super::search::{find_preperiodic_points, FoundPoint, SearchCaps};
use super::{points_at_infinity, InfinityDivisor, PlaneCurve};
use crate::error::Result;
use crate::exactnum::AlgebraicNumber;
use crate::heights::PreperiodicityVerdict;
use crate::infinity::{classify_multiplier, infinity_orbit_preperiodicity, multiplier, Classification, LinePoint, OrbitCaps};
use crate::maps::RegularMap;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DmmCaps {
    pub infinity: OrbitCaps,
    pub search: SearchCaps,
    pub curve_iters: usize,
    pub curve_max_degree: u32,
}

impl Default for DmmCaps {
    fn default() -> Self {
        DmmCaps { infinity: OrbitCaps::default(), search: SearchCaps::default(), curve_iters: 8, curve_max_degree: 8 }
    }
}

/// A point of C̄ ∩ L_∞ with its f_∞-orbit and, when a cycle is found, the multiplier of the cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinityEntry {
    pub point: LinePoint,
    pub multiplicity: u32,
    pub verdict: PreperiodicityVerdict<LinePoint>,
    pub cycle_multiplier: Option<AlgebraicNumber>,
    pub classification: Option<Classification>,
}

impl InfinityEntry {
    pub fn eventually_superattracting(&self) -> Option<bool> {
        self.classification.as_ref().map(|c| *c == Classification::Superattracting)
    }

    pub fn preperiod_period(&self) -> Option<(usize, usize)> {
        match &self.verdict {
            PreperiodicityVerdict::Preperiodic { preperiod, period, .. } => Some((*preperiod, *period)),
            _ => None,
        }
    }
}

/// Preperiod and period of the curve against those of the non-superattracting points at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Consistency {
    pub curve: (usize, usize),
    pub points: Vec<(usize, usize)>,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DmmReport {
    pub divisor: InfinityDivisor,
    pub infinity: Vec<InfinityEntry>,
    pub preperiodic_points: Vec<FoundPoint>,
    pub curve_orbit: CurveOrbit,
    /// Some point at infinity has a cycle with nonzero multiplier.
    pub hypothesis_witnessed: bool,
    /// Finite-sample proxy for infinitely many preperiodic points: the search found at least one.
    pub small_points_found: bool,
    pub conclusion_witnessed: bool,
    pub consistency: Option<Consistency>,
    pub notes: Vec<String>,
}

fn cycle_multiplier(f: &RegularMap, cycle_point: &LinePoint, period: usize) -> Result<AlgebraicNumber> {
    let g = if period == 1 { f.clone() } else { f.power(period as u32)? };
    multiplier(&g, cycle_point)
}

pub fn dmm_report(f: &RegularMap, c: &PlaneCurve, caps: &DmmCaps) -> Result<DmmReport> {
    let divisor = points_at_infinity(c)?;
    let mut notes = Vec::new();
    let mut infinity = Vec::new();
    for (p, m) in &divisor.points {
        let verdict = infinity_orbit_preperiodicity(f, p, caps.infinity);
        let (mut lam, mut class) = (None, None);
        if let PreperiodicityVerdict::Preperiodic { preperiod, period, orbit } = &verdict {
            match cycle_multiplier(f, &orbit[*preperiod], *period) {
                Ok(l) => {
                    class = Some(classify_multiplier(&l));
                    lam = Some(l);
                }
                Err(e) => notes.push(format!("multiplier of the cycle of {p}: {e}")),
            }
        }
        infinity.push(InfinityEntry { point: p.clone(), multiplicity: *m, verdict, cycle_multiplier: lam, classification: class });
    }
    let preperiodic_points = find_preperiodic_points(f, c, &caps.search);
    let curve_orbit = curve_preperiodicity(f, c, caps.curve_iters, caps.curve_max_degree)?;
    let hypothesis_witnessed = infinity.iter().any(|e| e.eventually_superattracting() == Some(false));
    let small_points_found = !preperiodic_points.is_empty();
    let curve_pp = curve_orbit.status.preperiod_period();
    let conclusion_witnessed = curve_pp.is_some();
    if !hypothesis_witnessed {
        notes.push("no point at infinity is witnessed to be not eventually superattracting".into());
    }
    if !small_points_found {
        notes.push("no preperiodic points found within the search caps; infinitude of small points is unsupported".into());
    }
    if conclusion_witnessed && !hypothesis_witnessed {
        notes.push("curve is preperiodic but lies outside the hypothesis of the theorem".into());
    }
    let relevant: Vec<Option<(usize, usize)>> =
        infinity.iter().filter(|e| e.eventually_superattracting() == Some(false)).map(|e| e.preperiod_period()).collect();
    let consistency = match curve_pp {
        Some(cp) if !relevant.is_empty() && relevant.iter().all(Option::is_some) => {
            let points: Vec<(usize, usize)> = relevant.into_iter().flatten().collect();
            let matches = points.iter().all(|p| *p == cp);
            Some(Consistency { curve: cp, points, matches })
        }
        _ => None,
    };
    Ok(DmmReport {
        divisor,
        infinity,
        preperiodic_points,
        curve_orbit,
        hypothesis_witnessed,
        small_points_found,
        conclusion_witnessed,
        consistency,
        notes,
    })
}
