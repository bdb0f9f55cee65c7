//! Germs (λx + μy + g, κ y^d (1 + h)) at a fixed point of f_∞, the
//! super-stable manifold, formal normal forms and numeric verifiers.

pub mod graph;
pub mod normal;
pub mod numeric;
pub mod stable;

use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{NfElem, NumberField, Rational};
use crate::infinity::{multiplier, LinePoint};
use crate::maps::RegularMap;
use crate::polyalg::series::compose_maps;
use crate::polyalg::{parse_pair, Coeff, HomogPoly3, TruncSeries, TruncSeries2};

pub use graph::{graph_pullback, ModelSectorMap, GermSectorMap, SectorMap, SectorParams, VerticalGraphSample};
pub use normal::{bottcher_series, is_parabolic_form, is_saddle_form, koenigs_series, parabolic_normal_form, saddle_normal_form, ParabolicNormalForm};
pub use numeric::{rescaling_check, rescaling_profile};
pub use stable::{reduce, reduce_form, super_stable_series};

/// A map germ as a pair of bivariate series truncated at total degree N.
pub type Map2<C> = (TruncSeries2<C>, TruncSeries2<C>);

#[derive(Clone, Debug, PartialEq)]
pub struct LocalGerm<C: Coeff = Rational> {
    first: TruncSeries2<C>,
    second: TruncSeries2<C>,
    lambda: C,
    mu: C,
    kappa: C,
    d: u32,
}

impl<C: Coeff> LocalGerm<C> {
    pub fn new(first: TruncSeries2<C>, second: TruncSeries2<C>) -> Result<Self> {
        let n = first.order();
        if second.order() != n {
            return Err(Error::Precondition("components truncated at different orders".into()));
        }
        if !first.get(0, 0).is_zero_c() || !second.get(0, 0).is_zero_c() {
            return Err(Error::Precondition("germ does not fix the origin".into()));
        }
        let lambda = first.coeff(1, 0);
        if lambda.is_zero_c() {
            return Err(Error::Superattracting);
        }
        let terms = second.terms();
        let d = terms.iter().map(|((_, j), _)| *j).min().ok_or_else(|| Error::Precondition("second component vanishes".into()))?;
        if d < 2 || second.get(0, d).is_zero_c() {
            return Err(Error::Precondition("second component is not of the form κ y^d (1 + h) with d >= 2".into()));
        }
        if d > n {
            return Err(Error::Precondition("truncation order below d".into()));
        }
        let mu = first.coeff(0, 1);
        let kappa = second.coeff(0, d);
        Ok(LocalGerm { first, second, lambda, mu, kappa, d: d as u32 })
    }

    pub fn from_map(f: &Map2<C>) -> Result<Self> {
        Self::new(f.0.clone(), f.1.clone())
    }

    pub fn first(&self) -> &TruncSeries2<C> {
        &self.first
    }

    pub fn second(&self) -> &TruncSeries2<C> {
        &self.second
    }

    pub fn lambda(&self) -> &C {
        &self.lambda
    }

    pub fn mu(&self) -> &C {
        &self.mu
    }

    /// Leading coefficient of the second component; 1 for germs of the standard shape.
    pub fn kappa(&self) -> &C {
        &self.kappa
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn order(&self) -> usize {
        self.first.order()
    }

    pub fn as_map(&self) -> Map2<C> {
        (self.first.clone(), self.second.clone())
    }

    /// g = first − λx − μy.
    pub fn g(&self) -> TruncSeries2<C> {
        let n = self.order();
        let lin = TruncSeries2::x(n, &self.lambda)
            .scale(&self.lambda)
            .add(&TruncSeries2::y(n, &self.lambda).scale(&self.mu));
        self.first.sub(&lin)
    }

    /// The restriction y -> second(0, y).
    pub fn vertical(&self) -> TruncSeries<C> {
        self.second.restrict_x0()
    }

    /// The restriction x -> first(x, 0).
    pub fn horizontal(&self) -> TruncSeries<C> {
        self.first.restrict_y0()
    }

    /// Φ⁻¹ ∘ f ∘ Φ.
    pub fn conjugate(&self, phi: &Conjugacy<C>) -> Result<Self> {
        Self::from_map(&phi.apply(&self.as_map()))
    }

    pub fn with_order(&self, n: usize) -> Result<Self> {
        Self::new(self.first.with_order(n), self.second.with_order(n))
    }
}

impl LocalGerm<Rational> {
    /// Parses "first, second" in the variables x, y.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let (p, q) = parse_pair(text, ("x", "y"))?;
        let z = Rational::from_integer(0.into());
        Self::new(TruncSeries2::from_poly(&p, n, &z), TruncSeries2::from_poly(&q, n, &z))
    }
}

impl LocalGerm<NfElem> {
    /// The same germ over Q when all coefficients are rational.
    pub fn to_rational(&self) -> Option<LocalGerm<Rational>> {
        let conv = |s: &TruncSeries2<NfElem>| -> Option<TruncSeries2<Rational>> {
            let mut r = TruncSeries2::zero(s.order(), &Rational::from_integer(0.into()));
            for ((i, j), c) in s.terms() {
                r.set(i, j, c.as_rational()?);
            }
            Some(r)
        };
        LocalGerm::new(conv(&self.first)?, conv(&self.second)?).ok()
    }
}

impl<C: Coeff> fmt::Display for LocalGerm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}) + O(deg {})",
            self.first.to_string_vars(("x", "y")),
            self.second.to_string_vars(("x", "y")),
            self.order() + 1
        )
    }
}

/// A change of coordinates Φ with its inverse, both truncated; conjugation is Φ⁻¹ ∘ f ∘ Φ.
#[derive(Clone, Debug, PartialEq)]
pub struct Conjugacy<C: Coeff = Rational> {
    pub forward: Map2<C>,
    pub inverse: Map2<C>,
}

impl<C: Coeff> Conjugacy<C> {
    pub fn identity(n: usize, proto: &C) -> Self {
        let id = (TruncSeries2::x(n, proto), TruncSeries2::y(n, proto));
        Conjugacy { forward: id.clone(), inverse: id }
    }

    pub fn new(forward: Map2<C>, inverse: Map2<C>) -> Self {
        Conjugacy { forward, inverse }
    }

    /// Inverse computed by fixed-point iteration from the linear part.
    pub fn from_forward(forward: Map2<C>) -> Result<Self> {
        let inverse = invert_map(&forward)?;
        Ok(Conjugacy { forward, inverse })
    }

    /// First conjugate by self, then by `next`.
    pub fn then(&self, next: &Conjugacy<C>) -> Self {
        Conjugacy { forward: compose_maps(&self.forward, &next.forward), inverse: compose_maps(&next.inverse, &self.inverse) }
    }

    pub fn apply(&self, f: &Map2<C>) -> Map2<C> {
        compose_maps(&self.inverse, &compose_maps(f, &self.forward))
    }

    pub fn is_inverse_pair(&self) -> bool {
        let n = self.forward.0.order();
        let p = self.forward.0.get(0, 0).clone();
        let id = (TruncSeries2::x(n, &p), TruncSeries2::y(n, &p));
        compose_maps(&self.forward, &self.inverse) == id && compose_maps(&self.inverse, &self.forward) == id
    }
}

/// Compositional inverse of a map tangent to an invertible linear map.
pub fn invert_map<C: Coeff>(phi: &Map2<C>) -> Result<Map2<C>> {
    let n = phi.0.order();
    let (a, b, c, d) = (phi.0.coeff(1, 0), phi.0.coeff(0, 1), phi.1.coeff(1, 0), phi.1.coeff(0, 1));
    let det = a.mul_c(&d).sub_c(&b.mul_c(&c));
    let inv = det.inv_c().ok_or_else(|| Error::Precondition("linear part is not invertible".into()))?;
    let (ia, ib, ic, id) = (d.mul_c(&inv), b.mul_c(&inv).neg_c(), c.mul_c(&inv).neg_c(), a.mul_c(&inv));
    let lin_inv = |u: &TruncSeries2<C>, v: &TruncSeries2<C>| (u.scale(&ia).add(&v.scale(&ib)), u.scale(&ic).add(&v.scale(&id)));
    let x = TruncSeries2::x(n, &a);
    let y = TruncSeries2::y(n, &a);
    let mut g = lin_inv(&x, &y);
    for _ in 0..n {
        let img = compose_maps(phi, &g);
        let (ex, ey) = lin_inv(&img.0.sub(&x), &img.1.sub(&y));
        let next = (g.0.sub(&ex), g.1.sub(&ey));
        if next == g {
            break;
        }
        g = next;
    }
    Ok(g)
}

/// Compositional inverse of a one-variable series s = a y + ..., a != 0.
pub fn revert_series<C: Coeff>(s: &TruncSeries<C>) -> Result<TruncSeries<C>> {
    let n = s.order();
    let a = s.get(1).inv_c().ok_or_else(|| Error::Precondition("series is not tangent to an invertible map".into()))?;
    let y = TruncSeries::var(n, s.get(1));
    let mut g = y.scale(&a);
    for _ in 0..n {
        let e = s.compose(&g).sub(&y).scale(&a);
        let next = g.sub(&e);
        if next == g {
            break;
        }
        g = next;
    }
    Ok(g)
}

/// Which homogeneous coordinate is set to 1 in the local chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartAxis {
    Z1,
    Z2,
}

/// Local coordinates x = z_other/z_axis − center, y = z0/(scale · z_axis).
#[derive(Clone, Debug, PartialEq)]
pub struct LocalChart {
    pub axis: ChartAxis,
    pub center: NfElem,
    pub scale: NfElem,
}

#[derive(Clone, Debug)]
pub struct Localization {
    pub germ: LocalGerm<NfElem>,
    pub chart: LocalChart,
}

fn series_of_form(h: &HomogPoly3, axis: ChartAxis, center: &NfElem, scale: &NfElem, n: usize) -> TruncSeries2<NfElem> {
    let x = TruncSeries2::x(n, center);
    let y = TruncSeries2::y(n, center).scale(scale);
    let s = x.add(&TruncSeries2::constant(center.clone(), n));
    let mut acc = TruncSeries2::zero(n, center);
    for (&(a, b, c), k) in h.terms() {
        let other = if axis == ChartAxis::Z1 { c } else { b };
        let term = y.pow(a).mul(&s.pow(other)).scale(&center.rational_like(k.clone()));
        acc = acc.add(&term);
    }
    acc
}

fn geometric_inverse(den: &TruncSeries2<NfElem>) -> Option<TruncSeries2<NfElem>> {
    let n = den.order();
    let c0 = den.get(0, 0).clone();
    let inv0 = c0.inv()?;
    let one = TruncSeries2::constant(c0.one_like(), n);
    let e = den.scale(&inv0).sub(&one);
    let mut acc = one.clone();
    for _ in 0..n {
        acc = one.sub(&e.mul(&acc));
    }
    Some(acc.scale(&inv0))
}

pub(crate) fn rational_root(q: &Rational, k: u32) -> Option<Rational> {
    use num_traits::Signed;
    if k == 1 {
        return Some(q.clone());
    }
    if q.is_negative() && k % 2 == 0 {
        return None;
    }
    let root = |b: &num_bigint::BigInt| {
        let r = b.abs().nth_root(k);
        (num_traits::pow(r.clone(), k as usize) == b.abs()).then_some(r)
    };
    let (a, b) = (root(q.numer())?, root(q.denom())?);
    let r = Rational::new(a, b);
    Some(if q.is_negative() { -r } else { r })
}

/// Expands f in a chart at a fixed point p of f_∞ with nonzero multiplier, so that
/// {y = 0} is the line at infinity and the germ has the shape (λx + μy + g, κ y^d (1 + h)).
pub fn localize_at_infinity(f: &RegularMap, p: &LinePoint, n: usize) -> Result<Localization> {
    let lam = multiplier(f, p)?;
    if lam.is_zero() {
        return Err(Error::Superattracting);
    }
    let (field, t) = match p {
        LinePoint::Infinite => (NumberField::rationals(), None),
        LinePoint::Finite(a) => match a.as_rational() {
            Some(q) => {
                let k = NumberField::rationals();
                let e = NfElem::from_rational(&k, q);
                (k, Some(e))
            }
            None => {
                let k = a.field()?;
                let e = NfElem::generator(&k);
                (k, Some(e))
            }
        },
    };
    let zero = NfElem::from_rational(&field, Rational::from_integer(0.into()));
    let (axis, center) = match &t {
        None => (ChartAxis::Z1, zero.clone()),
        Some(e) if e.is_zero() => (ChartAxis::Z2, zero.clone()),
        Some(e) => (ChartAxis::Z1, e.inv().unwrap()),
    };
    let d = f.degree() as usize;
    let lift = f.lift();
    let (num_form, den_form) = match axis {
        ChartAxis::Z1 => (&lift[2], &lift[1]),
        ChartAxis::Z2 => (&lift[1], &lift[2]),
    };
    let one = zero.one_like();
    let c0 = series_of_form(den_form, axis, &center, &one, 0).get(0, 0).clone();
    // Choose y = scale · Y with scale^(d-1) = c0 when such a rational scale exists.
    let scale = c0
        .as_rational()
        .and_then(|q| rational_root(&q, (d - 1) as u32))
        .map(|q| zero.rational_like(q))
        .unwrap_or_else(|| one.clone());
    let den = series_of_form(den_form, axis, &center, &scale, n);
    let num = series_of_form(num_form, axis, &center, &scale, n);
    let recip = geometric_inverse(&den).ok_or_else(|| Error::NotFixed(p.to_string()))?;
    let first = num.mul(&recip).sub(&TruncSeries2::constant(center.clone(), n));
    let yd = TruncSeries2::monomial(scale.pow(d as u64 - 1), 0, d, n);
    let second = yd.mul(&recip);
    let germ = LocalGerm::new(first, second)?;
    Ok(Localization { germ, chart: LocalChart { axis, center, scale } })
}

/// Conjugacy (x, y) -> (x − (μ/λ) y, y) removing the linear y-term of the first component.
pub fn remove_mu<C: Coeff>(germ: &LocalGerm<C>) -> Result<(LocalGerm<C>, Conjugacy<C>)> {
    let n = germ.order();
    let c = germ.mu().mul_c(&germ.lambda().inv_c().unwrap());
    let x = TruncSeries2::x(n, &c);
    let y = TruncSeries2::y(n, &c);
    let phi = Conjugacy::new((x.sub(&y.scale(&c)), y.clone()), (x.add(&y.scale(&c)), y));
    Ok((germ.conjugate(&phi)?, phi))
}
