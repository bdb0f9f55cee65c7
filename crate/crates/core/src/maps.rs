//! Regular polynomial endomorphisms of the affine plane.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{bit_size, Rational, UniPoly};
use crate::polyalg::resultant::binary_form_resultant;
use crate::polyalg::{parse_map_text, HomogPoly3, MultiPoly};

/// Degree-d homogenization of (P, Q) with d = max(deg P, deg Q); defined for any pair.
pub fn homogeneous_lift(p: &MultiPoly, q: &MultiPoly) -> [HomogPoly3; 3] {
    let d = p.degree().max(q.degree());
    [HomogPoly3::z0_power(d), HomogPoly3::homogenize(p, d), HomogPoly3::homogenize(q, d)]
}

/// Default cap on the bit size of orbit coordinates.
pub const DEFAULT_BIT_CAP: u64 = 1 << 20;

/// f(z, w) = (P, Q) of degree d >= 2 whose top forms P_d, Q_d have no common factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularMap {
    p: MultiPoly,
    q: MultiPoly,
    d: u32,
    pd: MultiPoly,
    qd: MultiPoly,
    top_resultant: Rational,
}

impl RegularMap {
    pub fn new(p: MultiPoly, q: MultiPoly) -> Result<Self> {
        let d = p.degree().max(q.degree());
        if d < 2 {
            return Err(Error::DegreeTooLow(d));
        }
        let pd = p.homogeneous_part(d);
        let qd = q.homogeneous_part(d);
        let top_resultant = binary_form_resultant(&pd.dehomogenize_second(), d as usize, &qd.dehomogenize_second(), d as usize);
        if top_resultant.is_zero() {
            return Err(Error::NotRegular);
        }
        Ok(RegularMap { p, q, d, pd, qd, top_resultant })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (p, q) = parse_map_text(text)?;
        Self::new(p, q)
    }

    pub fn p(&self) -> &MultiPoly {
        &self.p
    }

    pub fn q(&self) -> &MultiPoly {
        &self.q
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// Res(P_d, Q_d) as binary forms of degree d; nonzero by construction.
    pub fn top_resultant(&self) -> &Rational {
        &self.top_resultant
    }

    /// (z0^d, z0^d P(z1/z0, z2/z0), z0^d Q(z1/z0, z2/z0)).
    pub fn lift(&self) -> [HomogPoly3; 3] {
        homogeneous_lift(&self.p, &self.q)
    }

    /// The pair [P_d : Q_d] of coprime binary forms in (z1, z2).
    pub fn restrict_infinity(&self) -> (&MultiPoly, &MultiPoly) {
        (&self.pd, &self.qd)
    }

    /// P_d(t, 1) and Q_d(t, 1).
    pub fn infinity_dehomogenized(&self) -> (UniPoly, UniPoly) {
        (self.pd.dehomogenize_second(), self.qd.dehomogenize_second())
    }

    pub fn apply(&self, pt: &(Rational, Rational)) -> (Rational, Rational) {
        (self.p.eval(&pt.0, &pt.1), self.q.eval(&pt.0, &pt.1))
    }

    /// Exact n-th image, failing once a coordinate exceeds `bit_cap` bits.
    pub fn iterate(&self, n: u64, pt: &(Rational, Rational), bit_cap: u64) -> Result<(Rational, Rational)> {
        let mut cur = pt.clone();
        for _ in 0..n {
            cur = self.apply(&cur);
            let b = bit_size(&cur.0).max(bit_size(&cur.1));
            if b > bit_cap {
                return Err(Error::BitSizeCap(b));
            }
        }
        Ok(cur)
    }

    /// self ∘ other.
    pub fn compose(&self, other: &RegularMap) -> Result<RegularMap> {
        RegularMap::new(self.p.compose(&other.p, &other.q), self.q.compose(&other.p, &other.q))
    }

    pub fn power(&self, n: u32) -> Result<RegularMap> {
        assert!(n >= 1);
        let mut g = self.clone();
        for _ in 1..n {
            g = self.compose(&g)?;
        }
        Ok(g)
    }

    /// The conjugate by the swap (z, w) -> (w, z).
    pub fn swap_conjugate(&self) -> RegularMap {
        RegularMap::new(self.q.swap_vars(), self.p.swap_vars()).expect("conjugate of a regular map is regular")
    }

    /// Largest coefficient bit size, used for diagnostics.
    pub fn coefficient_bits(&self) -> u64 {
        self.p.max_coeff_bits().max(self.q.max_coeff_bits())
    }
}

impl fmt::Display for RegularMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use proptest::prelude::*;

    fn m(s: &str) -> RegularMap {
        RegularMap::parse(s).unwrap()
    }

    #[test]
    fn regularity() {
        assert_eq!(m("z^2, w^2").degree(), 2);
        assert_eq!(RegularMap::parse("z^2, z*w"), Err(Error::NotRegular));
        assert_eq!(m("z^2 + w, w^2 + z").degree(), 2);
        assert_eq!(RegularMap::parse("z*w + 1, w^2 + z"), Err(Error::NotRegular));
        assert_eq!(RegularMap::parse("z + w, w"), Err(Error::DegreeTooLow(1)));
        // Only Q has top degree: P_d = 0 shares every root with Q_d.
        assert_eq!(RegularMap::parse("z, w^2"), Err(Error::NotRegular));
    }

    #[test]
    fn lifts() {
        let show = |f: &RegularMap| f.lift().iter().map(|h| h.to_string()).collect::<Vec<_>>();
        assert_eq!(show(&m("z^2, w^2")), vec!["z0^2", "z1^2", "z2^2"]);
        assert_eq!(show(&m("z^2 + w, w^2")), vec!["z0^2", "z1^2 + z0*z2", "z2^2"]);
        // (zw - 1, w^2) is not regular (top forms share w), but its homogenization is still defined.
        let (p, q) = crate::polyalg::parse_map_text("z*w - 1, w^2").unwrap();
        let l: Vec<String> = homogeneous_lift(&p, &q).iter().map(|h| h.to_string()).collect();
        assert_eq!(l, vec!["z0^2", "z1*z2 - z0^2", "z2^2"]);
        let g = m("z^2 + w, w^2 + z");
        let (pd, qd) = g.restrict_infinity();
        assert_eq!((pd.to_string(), qd.to_string()), ("z^2".into(), "w^2".into()));
    }

    #[test]
    fn iteration() {
        assert_eq!(m("z^2, w^2").iterate(3, &(int(2), int(1)), DEFAULT_BIT_CAP).unwrap(), (int(256), int(1)));
        assert_eq!(m("z^2 + w, w^2").iterate(2, &(int(0), int(1)), DEFAULT_BIT_CAP).unwrap(), (int(2), int(1)));
        assert_eq!(m("z^3 - w, w^3").iterate(0, &(rat(1, 3), int(5)), DEFAULT_BIT_CAP).unwrap(), (rat(1, 3), int(5)));
        assert!(matches!(m("z^2, w^2").iterate(30, &(int(3), int(1)), 1000), Err(Error::BitSizeCap(_))));
    }

    /// Brute-force common projective root search of two binary forms over small rationals.
    fn forms_share_small_root(a: &MultiPoly, b: &MultiPoly) -> bool {
        let pts: Vec<(Rational, Rational)> = std::iter::once((int(1), int(0)))
            .chain((-6..=6).flat_map(|n| (1..=4).map(move |d| (rat(n, d), int(1)))))
            .collect();
        pts.iter().any(|(x, y)| a.eval(x, y).is_zero() && b.eval(x, y).is_zero())
    }

    fn small_map() -> impl Strategy<Value = (MultiPoly, MultiPoly)> {
        let term = (0u32..3, 0u32..3, -3i64..4);
        (proptest::collection::vec(term.clone(), 1..5), proptest::collection::vec(term, 1..5)).prop_map(|(a, b)| {
            let mk = |v: Vec<(u32, u32, i64)>| MultiPoly::from_terms(v.into_iter().filter(|t| t.0 + t.1 <= 2).map(|(i, j, c)| ((i, j), int(c))));
            (mk(a), mk(b))
        })
    }

    proptest! {
        #[test]
        fn lift_projects_to_map(a in -20i64..20, b in 1i64..9, c in -20i64..20, e in 1i64..9) {
            let f = m("z^2 - 3*w + 1/2, z*w + w^2 - z");
            let pt = (rat(a, b), rat(c, e));
            let l = f.lift();
            let v = [int(1), pt.0.clone(), pt.1.clone()];
            let img = (l[1].eval(&v) / l[0].eval(&v), l[2].eval(&v) / l[0].eval(&v));
            prop_assert_eq!(img, f.apply(&pt));
        }

        #[test]
        fn regularity_matches_root_search((p, q) in small_map()) {
            let pd = p.homogeneous_part(2);
            let qd = q.homogeneous_part(2);
            match RegularMap::new(p, q) {
                Ok(_) => prop_assert!(!forms_share_small_root(&pd, &qd)),
                Err(Error::NotRegular) => {
                    // a shared root must exist over the algebraic closure: the forms have a common factor
                    let g = crate::polyalg::gcd::gcd(&pd, &qd);
                    prop_assert!(!g.is_constant() || pd.is_zero() || qd.is_zero());
                }
                Err(_) => {}
            }
        }
    }

    #[test]
    fn top_forms_of_iterates() {
        let f = m("z^2 - w + 1, 2*w^2 + z");
        let (pd, qd) = f.restrict_infinity();
        let mut g = (pd.clone(), qd.clone());
        for n in 2..=3 {
            g = (pd.compose(&g.0, &g.1), qd.compose(&g.0, &g.1));
            let fnn = f.power(n).unwrap();
            let (a, b) = fnn.restrict_infinity();
            assert_eq!((a.clone(), b.clone()), g.clone());
        }
    }
}
