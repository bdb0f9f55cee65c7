//! Simple number fields Q[t]/(m(t)) with m monic irreducible.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::fixed::CFx;
use super::roots::{isolate_roots, RootEnclosure};
use super::{Rational, UniPoly};
use crate::error::{Error, Result};

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct NumberField {
    modulus: UniPoly,
}

impl NumberField {
    /// The caller guarantees irreducibility; the modulus is made monic.
    pub fn new(modulus: &UniPoly) -> Result<Arc<Self>> {
        if modulus.degree() < 1 {
            return Err(Error::Precondition("number field modulus must have positive degree".into()));
        }
        Ok(Arc::new(NumberField { modulus: modulus.monic() }))
    }

    pub fn rationals() -> Arc<Self> {
        Arc::new(NumberField { modulus: UniPoly::x() })
    }

    pub fn modulus(&self) -> &UniPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    /// Complex embeddings: isolating discs for the roots of the modulus.
    pub fn embeddings(&self, bits: u32) -> Result<Vec<RootEnclosure>> {
        isolate_roots(&self.modulus, bits)
    }
}

#[derive(Clone, Debug)]
pub struct NfElem {
    field: Arc<NumberField>,
    poly: UniPoly,
}

impl PartialEq for NfElem {
    fn eq(&self, o: &Self) -> bool {
        (Arc::ptr_eq(&self.field, &o.field) || self.field == o.field) && self.poly == o.poly
    }
}

impl Eq for NfElem {}

impl Hash for NfElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.poly.hash(state);
    }
}

impl NfElem {
    pub fn new(field: &Arc<NumberField>, p: &UniPoly) -> Self {
        NfElem { field: field.clone(), poly: p.rem(&field.modulus) }
    }

    pub fn from_rational(field: &Arc<NumberField>, q: Rational) -> Self {
        Self::new(field, &UniPoly::constant(q))
    }

    /// The class of t.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::new(field, &UniPoly::x())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn poly(&self) -> &UniPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.poly == UniPoly::one()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.poly.degree() <= 0 {
            Some(self.poly.coeff(0))
        } else {
            None
        }
    }

    pub fn zero_like(&self) -> Self {
        NfElem { field: self.field.clone(), poly: UniPoly::zero() }
    }

    pub fn one_like(&self) -> Self {
        NfElem { field: self.field.clone(), poly: UniPoly::one() }
    }

    pub fn rational_like(&self, q: Rational) -> Self {
        Self::from_rational(&self.field, q)
    }

    pub fn add(&self, o: &NfElem) -> NfElem {
        NfElem { field: self.field.clone(), poly: &self.poly + &o.poly }
    }

    pub fn sub(&self, o: &NfElem) -> NfElem {
        NfElem { field: self.field.clone(), poly: &self.poly - &o.poly }
    }

    pub fn neg(&self) -> NfElem {
        NfElem { field: self.field.clone(), poly: -&self.poly }
    }

    pub fn mul(&self, o: &NfElem) -> NfElem {
        Self::new(&self.field, &(&self.poly * &o.poly))
    }

    pub fn scale(&self, q: &Rational) -> NfElem {
        NfElem { field: self.field.clone(), poly: self.poly.scale(q) }
    }

    pub fn inv(&self) -> Option<NfElem> {
        if self.is_zero() {
            return None;
        }
        let (g, s, _) = self.poly.ext_gcd(&self.field.modulus);
        if g != UniPoly::one() {
            return None;
        }
        Some(Self::new(&self.field, &s))
    }

    pub fn pow(&self, mut n: u64) -> NfElem {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Characteristic polynomial of multiplication by this element, Res_t(m(t), x - p(t)).
    pub fn charpoly(&self) -> UniPoly {
        charpoly_of(&self.field.modulus, &self.poly)
    }

    /// Interval image under the embedding t -> root.
    pub fn embed(&self, root: &RootEnclosure, prec: u32) -> CFx {
        let t = root.to_cfx(prec);
        let mut acc = CFx::zero(prec);
        for a in self.poly.coeffs().iter().rev() {
            acc = acc.mul(&t).add(&CFx::from_rational(a, prec));
        }
        acc
    }

    /// p(self) by Horner's rule.
    pub fn eval_poly(&self, p: &UniPoly) -> NfElem {
        let mut acc = self.zero_like();
        for a in p.coeffs().iter().rev() {
            acc = acc.mul(self).add(&self.rational_like(a.clone()));
        }
        acc
    }

    /// Total bit size of the coefficients.
    pub fn bit_size(&self) -> u64 {
        self.poly.coeffs().iter().map(super::bit_size).sum()
    }
}

impl fmt::Display for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly.to_string_var("t"))
    }
}

/// Res_t(m(t), x - p(t)) as a polynomial in x, computed by evaluating at
/// deg m + 1 integer points and interpolating.
pub fn charpoly_of(m: &UniPoly, p: &UniPoly) -> UniPoly {
    let n = m.deg();
    let xs: Vec<Rational> = (0..=n as i64).map(|i| Rational::from_integer(i.into())).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|x| {
            let g = &UniPoly::constant(x.clone()) - p;
            let g = if g.is_zero() { UniPoly::zero() } else { g };
            if g.is_zero() {
                Rational::zero()
            } else {
                m.resultant(&g)
            }
        })
        .collect();
    let c = interpolate(&xs, &ys);
    let lc = m.lc();
    // Res(m, x - p) = lc(m)^{deg(x-p)} * prod (x - p(root)); normalize to monic.
    if c.is_zero() || lc.is_zero() {
        return c;
    }
    c.monic()
}

/// Lagrange interpolation through the given nodes.
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> UniPoly {
    let mut acc = UniPoly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = UniPoly::one();
        let mut den = Rational::one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                basis = &basis * &UniPoly::new(vec![-xj.clone(), Rational::one()]);
                den *= xi - xj;
            }
        }
        acc = &acc + &basis.scale(&(yi / den));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    #[test]
    fn sqrt2_field() {
        let k = NumberField::new(&UniPoly::from_ints(&[-2, 0, 1])).unwrap();
        let a = NfElem::generator(&k);
        assert_eq!(a.mul(&a).as_rational(), Some(int(2)));
        let b = a.add(&NfElem::from_rational(&k, int(1)));
        let inv = b.inv().unwrap();
        assert!(b.mul(&inv).is_one());
        assert_eq!(b.charpoly(), UniPoly::from_ints(&[-1, -2, 1]));
    }

    #[test]
    fn cube_root_of_unity_power() {
        let k = NumberField::new(&UniPoly::from_ints(&[1, 1, 1])).unwrap();
        let z = NfElem::generator(&k);
        assert!(z.pow(3).is_one());
        assert!(!z.pow(2).is_one());
        assert_eq!(z.charpoly(), UniPoly::from_ints(&[1, 1, 1]));
    }
}
