//! Sparse bivariate and homogeneous trivariate polynomials over Q.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::series::Coeff;
use crate::error::{Error, Result};
use crate::exactnum::{fmt_rational, Rational, UniPoly};

/// Polynomial in two variables, stored as exponent pair (i, j) -> coefficient of z^i w^j.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: BTreeMap::new() }
    }

    pub fn constant(a: Rational) -> Self {
        Self::monomial(a, 0, 0)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn monomial(a: Rational, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !a.is_zero() {
            terms.insert((i, j), a);
        }
        MultiPoly { terms }
    }

    /// The first variable.
    pub fn z() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    /// The second variable.
    pub fn w() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Rational)>>(it: I) -> Self {
        let mut p = MultiPoly::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: (u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i + j == 0)
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|&(i, j)| if var == 0 { i } else { j }).max().unwrap_or(0)
    }

    /// Sum of the terms of the given total degree.
    pub fn homogeneous_part(&self, k: u32) -> MultiPoly {
        MultiPoly { terms: self.terms.iter().filter(|(e, _)| e.0 + e.1 == k).map(|(e, c)| (*e, c.clone())).collect() }
    }

    /// Sum of the terms of top total degree.
    pub fn homogeneous_top(&self) -> Result<MultiPoly> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(self.homogeneous_part(self.degree()))
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|&(i, j)| i + j == d)
    }

    pub fn scale(&self, a: &Rational) -> MultiPoly {
        if a.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(e, c)| (*e, c * a)).collect() }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, z: &Rational, w: &Rational) -> Rational {
        let dz = self.degree_in(0) as usize;
        let dw = self.degree_in(1) as usize;
        let zp = powers(z, dz);
        let wp = powers(w, dw);
        self.terms.iter().fold(Rational::zero(), |acc, ((i, j), c)| acc + c * &zp[*i as usize] * &wp[*j as usize])
    }

    /// Evaluation in any exact coefficient ring containing Q.
    pub fn eval_coeff<C: Coeff>(&self, z: &C, w: &C) -> C {
        let dz = self.degree_in(0) as usize;
        let dw = self.degree_in(1) as usize;
        let mut zp = vec![z.one_like()];
        for k in 0..dz {
            let next = zp[k].mul_c(z);
            zp.push(next);
        }
        let mut wp = vec![z.one_like()];
        for k in 0..dw {
            let next = wp[k].mul_c(w);
            wp.push(next);
        }
        let mut acc = z.zero_like();
        for ((i, j), c) in &self.terms {
            let t = zp[*i as usize].mul_c(&wp[*j as usize]).mul_c(&z.from_rational_like(c));
            acc = acc.add_c(&t);
        }
        acc
    }

    /// Substitutes polynomials for both variables.
    pub fn compose(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        let dz = self.degree_in(0) as usize;
        let dw = self.degree_in(1) as usize;
        let mut ap = vec![MultiPoly::one()];
        for k in 0..dz {
            let next = &ap[k] * a;
            ap.push(next);
        }
        let mut bp = vec![MultiPoly::one()];
        for k in 0..dw {
            let next = &bp[k] * b;
            bp.push(next);
        }
        let mut acc = MultiPoly::zero();
        for ((i, j), c) in &self.terms {
            acc = &acc + &(&ap[*i as usize] * &bp[*j as usize]).scale(c);
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().filter_map(|(&(i, j), c)| {
            let (k, e) = if var == 0 { (i, (i.wrapping_sub(1), j)) } else { (j, (i, j.wrapping_sub(1))) };
            (k > 0).then(|| (e, c * Rational::from_integer(BigInt::from(k))))
        }))
    }

    /// Swaps the two variables.
    pub fn swap_vars(&self) -> MultiPoly {
        MultiPoly { terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect() }
    }

    /// Coefficients as a polynomial in variable `var`, each a univariate polynomial in the other one.
    pub fn as_poly_in(&self, var: usize) -> Vec<UniPoly> {
        let n = self.degree_in(var) as usize;
        let mut cols: Vec<Vec<Rational>> = vec![Vec::new(); n + 1];
        for (&(i, j), c) in &self.terms {
            let (k, other) = if var == 0 { (i, j) } else { (j, i) };
            let col = &mut cols[k as usize];
            if col.len() <= other as usize {
                col.resize(other as usize + 1, Rational::zero());
            }
            col[other as usize] = c.clone();
        }
        cols.into_iter().map(UniPoly::new).collect()
    }

    /// Inverse of `as_poly_in`.
    pub fn from_poly_in(var: usize, cols: &[UniPoly]) -> MultiPoly {
        let mut p = MultiPoly::zero();
        for (k, col) in cols.iter().enumerate() {
            for (other, c) in col.coeffs().iter().enumerate() {
                let e = if var == 0 { (k as u32, other as u32) } else { (other as u32, k as u32) };
                p.add_term(e, c.clone());
            }
        }
        p
    }

    /// Embeds a univariate polynomial as a polynomial in variable `var`.
    pub fn from_uni(var: usize, f: &UniPoly) -> MultiPoly {
        MultiPoly::from_terms(
            f.coeffs().iter().enumerate().map(|(k, c)| (if var == 0 { (k as u32, 0) } else { (0, k as u32) }, c.clone())),
        )
    }

    /// For a polynomial in one variable only, its univariate form.
    pub fn to_uni(&self, var: usize) -> Option<UniPoly> {
        let other_free = self.terms.keys().all(|&(i, j)| if var == 0 { j == 0 } else { i == 0 });
        other_free.then(|| {
            let cols = self.as_poly_in(var);
            UniPoly::new(cols.iter().map(|c| c.coeff(0)).collect())
        })
    }

    /// Binary form in (z1, z2) as the univariate polynomial f(t, 1).
    pub fn dehomogenize_second(&self) -> UniPoly {
        let n = self.degree_in(0) as usize;
        let mut c = vec![Rational::zero(); n + 1];
        for (&(i, _), a) in &self.terms {
            c[i as usize] += a;
        }
        UniPoly::new(c)
    }

    /// Binary form of degree `d` from f(t) with f(t) = F(t, 1).
    pub fn homogenize_binary(f: &UniPoly, d: u32) -> MultiPoly {
        MultiPoly::from_terms(f.coeffs().iter().enumerate().map(|(i, c)| ((i as u32, d - i as u32), c.clone())))
    }

    /// Leading term in graded lex order (degree, then z-exponent).
    pub fn leading_term(&self) -> Option<((u32, u32), Rational)> {
        self.terms.iter().max_by_key(|(&(i, j), _)| (i + j, i)).map(|(e, c)| (*e, c.clone()))
    }

    /// Integer coefficients, content 1, positive leading term.
    pub fn primitive(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.terms.values().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let mut s = Rational::from_integer(l) / Rational::from_integer(g);
        if self.leading_term().unwrap().1.is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    /// Coefficients as integers after `primitive`.
    pub fn max_coeff_bits(&self) -> u64 {
        self.terms.values().map(crate::exactnum::bit_size).max().unwrap_or(0)
    }

    pub fn to_string_vars(&self, vars: (&str, &str)) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        let mut s = String::new();
        for e in keys {
            let c = &self.terms[e];
            let neg = c.is_negative();
            let mag = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            for (name, k) in [(vars.0, e.0), (vars.1, e.1)] {
                match k {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{k}")),
                }
            }
            if factors.is_empty() {
                s.push_str(&fmt_rational(&mag));
            } else {
                if !mag.is_one() {
                    factors.insert(0, fmt_rational(&mag));
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}

fn powers(x: &Rational, n: usize) -> Vec<Rational> {
    let mut v = vec![Rational::one()];
    for k in 0..n {
        let next = &v[k] * x;
        v.push(next);
    }
    v
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_vars(("z", "w")))
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, -c);
        }
        r
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        let mut r = MultiPoly::zero();
        for ((i, j), a) in &self.terms {
            for ((k, l), b) in &o.terms {
                r.add_term((i + k, j + l), a * b);
            }
        }
        r
    }
}

/// Homogeneous polynomial in (z0, z1, z2) of a fixed degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogPoly3 {
    degree: u32,
    terms: BTreeMap<(u32, u32, u32), Rational>,
}

impl HomogPoly3 {
    /// z0^d P(z1/z0, z2/z0); requires d >= deg P.
    pub fn homogenize(p: &MultiPoly, d: u32) -> HomogPoly3 {
        assert!(d >= p.degree() || p.is_zero());
        let terms = p.terms().map(|(&(i, j), c)| ((d - i - j, i, j), c.clone())).collect();
        HomogPoly3 { degree: d, terms }
    }

    /// z0^d.
    pub fn z0_power(d: u32) -> HomogPoly3 {
        HomogPoly3 { degree: d, terms: [((d, 0, 0), Rational::one())].into_iter().collect() }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn dehomogenize(&self) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().map(|(&(_, i, j), c)| ((i, j), c.clone())))
    }

    /// Restriction to z0 = 0 as a binary form in (z1, z2).
    pub fn at_infinity(&self) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().filter(|(e, _)| e.0 == 0).map(|(&(_, i, j), c)| ((i, j), c.clone())))
    }

    pub fn eval(&self, z: &[Rational; 3]) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (&(a, b, c), k)| {
            acc + k * num_traits::pow(z[0].clone(), a as usize) * num_traits::pow(z[1].clone(), b as usize) * num_traits::pow(z[2].clone(), c as usize)
        })
    }

    pub fn to_string_vars(&self, vars: [&str; 3]) -> String {
        let mut keys: Vec<&(u32, u32, u32)> = self.terms.keys().collect();
        keys.sort_by(|a, b| (b.1, b.2).cmp(&(a.1, a.2)));
        let mut s = String::new();
        for e in keys {
            let c = &self.terms[e];
            let neg = c.is_negative();
            let mag = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if !mag.is_one() {
                factors.push(fmt_rational(&mag));
            }
            for (name, k) in [(vars[0], e.0), (vars[1], e.1), (vars[2], e.2)] {
                match k {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{k}")),
                }
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            s.push_str(&factors.join("*"));
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

impl fmt::Display for HomogPoly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_vars(["z0", "z1", "z2"]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use proptest::prelude::*;

    pub(crate) fn arb_poly(max_deg: u32) -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec(((0..=max_deg), (0..=max_deg), -5i64..5), 1..6).prop_map(move |v| {
            MultiPoly::from_terms(v.into_iter().filter(|(i, j, _)| i + j <= max_deg).map(|(i, j, c)| ((i, j), int(c))))
        })
    }

    #[test]
    fn top_forms() {
        let p = &MultiPoly::z().pow(2) + &MultiPoly::w();
        assert_eq!(p.homogeneous_top().unwrap(), MultiPoly::z().pow(2));
        let q = &(&MultiPoly::z() * &MultiPoly::w()) - &MultiPoly::one();
        assert_eq!(q.homogeneous_top().unwrap(), &MultiPoly::z() * &MultiPoly::w());
        assert_eq!(MultiPoly::zero().homogeneous_top(), Err(Error::ZeroInput));
    }

    #[test]
    fn homogenize_roundtrip() {
        let p = &(&MultiPoly::z() * &MultiPoly::w()) - &MultiPoly::one();
        let h = HomogPoly3::homogenize(&p, 2);
        assert_eq!(h.to_string(), "z1*z2 - z0^2");
        assert_eq!(h.dehomogenize(), p);
        assert_eq!(h.eval(&[int(2), int(3), int(5)]), int(11));
    }

    #[test]
    fn printing() {
        let p = MultiPoly::from_terms([((1, 1), rat(-1, 2)), ((0, 0), int(1)), ((2, 0), int(3))]);
        assert_eq!(p.to_string(), "3*z^2 - 1/2*z*w + 1");
    }

    proptest! {
        #[test]
        fn top_form_multiplicative(a in arb_poly(3), b in arb_poly(3)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let lhs = (&a * &b).homogeneous_top().unwrap();
            let rhs = &a.homogeneous_top().unwrap() * &b.homogeneous_top().unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn poly_in_roundtrip(a in arb_poly(4), var in 0usize..2) {
            prop_assert_eq!(MultiPoly::from_poly_in(var, &a.as_poly_in(var)), a);
        }
    }
}
