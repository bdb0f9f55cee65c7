//! Dense univariate polynomials with rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{fmt_rational, Rational};

/// Coefficients stored from the constant term upward; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    c: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UniPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn zero() -> Self {
        UniPoly { c: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(a: Rational) -> Self {
        Self::new(vec![a])
    }

    /// The polynomial x.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// a x^n.
    pub fn monomial(a: Rational, n: usize) -> Self {
        let mut c = vec![Rational::zero(); n + 1];
        c[n] = a;
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.c.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with the zero polynomial reported as -1.
    pub fn degree(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Rational {
        self.c.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn scale(&self, a: &Rational) -> Self {
        Self::new(self.c.iter().map(|x| x * a).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lc();
        self.scale(&(Rational::one() / l))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    /// Horner evaluation in any ring that rationals map into.
    pub fn eval_with<T, F>(&self, x: &T, zero: T, embed: F) -> T
    where
        T: Clone + Add<Output = T> + Mul<Output = T>,
        F: Fn(&Rational) -> T,
    {
        let mut acc = zero;
        for a in self.c.iter().rev() {
            acc = acc * x.clone() + embed(a);
        }
        acc
    }

    pub fn compose(&self, inner: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * inner) + &UniPoly::constant(a.clone());
        }
        acc
    }

    pub fn pow(&self, n: u32) -> UniPoly {
        let mut r = UniPoly::one();
        for _ in 0..n {
            r = &r * self;
        }
        r
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.c.clone();
        let dd = d.deg();
        if r.len() < d.c.len() {
            return (UniPoly::zero(), self.clone());
        }
        let inv = Rational::one() / d.lc();
        let mut q = vec![Rational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let t = &r[i + dd] * &inv;
            if !t.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[i + j] -= &t * b;
                }
            }
            q[i] = t;
        }
        r.truncate(dd);
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    /// Exact quotient when `d` divides `self`.
    pub fn div_exact(&self, d: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.primitive_or_zero_monic();
        }
        a.monic()
    }

    fn primitive_or_zero_monic(self) -> UniPoly {
        if self.is_zero() {
            self
        } else {
            self.monic()
        }
    }

    /// Returns (g, s, t) with s*self + t*o = g monic.
    pub fn ext_gcd(&self, o: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (UniPoly::one(), UniPoly::zero());
        let (mut t0, mut t1) = (UniPoly::zero(), UniPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = Rational::one() / r0.lc();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Squarefree decomposition (Yun): monic a_1, a_2, ... with self ~ prod a_i^i.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, u32)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0).unwrap();
        let mut c = fp.div_exact(&a0).unwrap();
        let mut dpoly = &c - &b.derivative();
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&dpoly);
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).unwrap();
            c = dpoly.div_exact(&a).unwrap();
            dpoly = &c - &b.derivative();
            i += 1;
        }
        out
    }

    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).unwrap().monic()
    }

    /// Integer coefficients with content 1 and positive leading coefficient.
    pub fn primitive_int(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let l = self.c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self.c.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|x| x / &g * &sign).collect()
    }

    pub fn primitive(&self) -> UniPoly {
        UniPoly::new(self.primitive_int().into_iter().map(Rational::from_integer).collect())
    }

    /// Resultant via the Euclidean algorithm over the rationals.
    pub fn resultant(&self, o: &UniPoly) -> Rational {
        if self.is_zero() || o.is_zero() {
            return Rational::zero();
        }
        let mut a = self.clone();
        let mut b = o.clone();
        let mut res = Rational::one();
        loop {
            let da = a.deg();
            let db = b.deg();
            if db == 0 {
                return res * num_traits::pow(b.lc(), da);
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return Rational::zero();
            }
            let dr = r.deg();
            if da % 2 == 1 && db % 2 == 1 {
                res = -res;
            }
            res *= num_traits::pow(b.lc(), da - dr);
            a = b;
            b = r;
        }
    }

    /// Reverses the coefficient order as a degree-n polynomial: x^n p(1/x).
    pub fn reversed(&self, n: usize) -> UniPoly {
        let mut c = vec![Rational::zero(); n + 1];
        for (i, a) in self.c.iter().enumerate() {
            c[n - i] = a.clone();
        }
        UniPoly::new(c)
    }

    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                s.push_str(&fmt_rational(&mag));
            } else if mag.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{}*{}", fmt_rational(&mag), mono));
            }
        }
        s
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_var("x"))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.c.iter().map(|x| -x).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UniPoly::new(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn division_and_gcd() {
        let f = p(&[-1, 0, 1]);
        let g = p(&[1, 1]);
        let (q, r) = f.div_rem(&g);
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(f.gcd(&p(&[-1, 0, 0, 1])), p(&[-1, 1]));
    }

    #[test]
    fn resultant_values() {
        assert_eq!(p(&[1, 0, 1]).resultant(&p(&[1, 1])), int(2));
        assert_eq!(p(&[-2, 0, 1]).resultant(&p(&[-2, 1])), int(2));
        assert_eq!(p(&[0, 1]).resultant(&p(&[0, 1])), int(0));
    }

    #[test]
    fn squarefree() {
        let f = &p(&[1, 1]).pow(3) * &p(&[-2, 0, 1]);
        let d = f.squarefree_decomposition();
        assert_eq!(d, vec![(p(&[-2, 0, 1]), 1), (p(&[1, 1]), 3)]);
    }

    #[test]
    fn primitive_and_display() {
        let f = UniPoly::new(vec![rat(-1, 2), int(0), rat(-3, 4)]);
        assert_eq!(f.primitive(), p(&[2, 0, 3]));
        assert_eq!(p(&[1, -1, 0, 2]).to_string_var("t"), "2*t^3 - t + 1");
    }

    proptest! {
        #[test]
        fn ext_gcd_identity(a in proptest::collection::vec(-9i64..9, 1..6), b in proptest::collection::vec(-9i64..9, 1..6)) {
            let f = p(&a);
            let g = p(&b);
            prop_assume!(!f.is_zero() && !g.is_zero());
            let (d, s, t) = f.ext_gcd(&g);
            prop_assert_eq!(&(&s * &f) + &(&t * &g), d.clone());
            prop_assert!(f.rem(&d).is_zero() && g.rem(&d).is_zero());
        }

        #[test]
        fn resultant_vanishes_iff_common_factor(a in proptest::collection::vec(-5i64..5, 2..5), b in proptest::collection::vec(-5i64..5, 2..5)) {
            let f = p(&a);
            let g = p(&b);
            prop_assume!(f.deg() >= 1 && g.deg() >= 1);
            prop_assert_eq!(f.resultant(&g).is_zero(), !f.gcd(&g).is_constant());
        }
    }
}
