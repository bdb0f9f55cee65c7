//! Truncated power series in one and two variables over an exact coefficient ring.

use std::fmt;

use num_traits::{One, Zero};

use super::MultiPoly;
use crate::exactnum::{NfElem, Rational};

/// Exact field elements usable as series coefficients. Constructors take a
/// prototype so that number-field elements can carry their field.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_rational_like(&self, q: &Rational) -> Self;
    fn is_zero_c(&self) -> bool;
    fn add_c(&self, o: &Self) -> Self;
    fn sub_c(&self, o: &Self) -> Self;
    fn mul_c(&self, o: &Self) -> Self;
    fn neg_c(&self) -> Self;
    fn inv_c(&self) -> Option<Self>;
    fn to_rational(&self) -> Option<Rational>;

    fn pow_c(&self, n: u64) -> Self {
        let mut r = self.one_like();
        for _ in 0..n {
            r = r.mul_c(self);
        }
        r
    }
}

impl Coeff for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        q.clone()
    }
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_c(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_c(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_c(&self) -> Self {
        -self
    }
    fn inv_c(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Rational::one() / self)
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl Coeff for NfElem {
    fn zero_like(&self) -> Self {
        NfElem::zero_like(self)
    }
    fn one_like(&self) -> Self {
        NfElem::one_like(self)
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        self.rational_like(q.clone())
    }
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_c(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_c(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn neg_c(&self) -> Self {
        self.neg()
    }
    fn inv_c(&self) -> Option<Self> {
        self.inv()
    }
    fn to_rational(&self) -> Option<Rational> {
        self.as_rational()
    }
}

/// a_0 + a_1 y + ... + a_N y^N, arithmetic modulo y^(N+1).
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<C: Coeff = Rational> {
    c: Vec<C>,
}

impl<C: Coeff> TruncSeries<C> {
    pub fn new(mut coeffs: Vec<C>, n: usize, proto: &C) -> Self {
        coeffs.resize(n + 1, proto.zero_like());
        TruncSeries { c: coeffs }
    }

    pub fn zero(n: usize, proto: &C) -> Self {
        TruncSeries { c: vec![proto.zero_like(); n + 1] }
    }

    pub fn one(n: usize, proto: &C) -> Self {
        Self::monomial(proto.one_like(), 0, n)
    }

    /// The series y.
    pub fn var(n: usize, proto: &C) -> Self {
        Self::monomial(proto.one_like(), 1, n)
    }

    pub fn monomial(a: C, k: usize, n: usize) -> Self {
        let mut s = Self::zero(n, &a);
        if k <= n {
            s.c[k] = a;
        }
        s
    }

    pub fn from_rationals(q: &[Rational], n: usize, proto: &C) -> Self {
        Self::new(q.iter().map(|x| proto.from_rational_like(x)).collect(), n, proto)
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.c
    }

    pub fn get(&self, k: usize) -> &C {
        &self.c[k]
    }

    pub fn set(&mut self, k: usize, a: C) {
        if k < self.c.len() {
            self.c[k] = a;
        }
    }

    fn proto(&self) -> &C {
        &self.c[0]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero_c())
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero_c())
    }

    pub fn with_order(&self, n: usize) -> Self {
        let mut c = self.c.clone();
        c.resize(n + 1, self.proto().zero_like());
        TruncSeries { c }
    }

    pub fn add(&self, o: &Self) -> Self {
        TruncSeries { c: self.c.iter().zip(&o.c).map(|(a, b)| a.add_c(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        TruncSeries { c: self.c.iter().zip(&o.c).map(|(a, b)| a.sub_c(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        TruncSeries { c: self.c.iter().map(|a| a.neg_c()).collect() }
    }

    pub fn scale(&self, s: &C) -> Self {
        TruncSeries { c: self.c.iter().map(|a| a.mul_c(s)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut c = vec![self.proto().zero_like(); n + 1];
        for (i, a) in self.c.iter().enumerate().take(n + 1) {
            if a.is_zero_c() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero_c() {
                    c[i + j] = c[i + j].add_c(&a.mul_c(b));
                }
            }
        }
        TruncSeries { c }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one(self.order(), self.proto());
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Multiplies by y^k.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut c = vec![self.proto().zero_like(); n + 1];
        for i in 0..=n {
            if i + k <= n {
                c[i + k] = self.c[i].clone();
            }
        }
        TruncSeries { c }
    }

    /// Divides by y^k; the first k coefficients must vanish and the top k become unknown zeros.
    pub fn unshift(&self, k: usize) -> Option<Self> {
        if self.c.iter().take(k).any(|x| !x.is_zero_c()) {
            return None;
        }
        let n = self.order();
        let mut c = vec![self.proto().zero_like(); n + 1];
        for i in k..=n {
            c[i - k] = self.c[i].clone();
        }
        Some(TruncSeries { c })
    }

    /// self(inner(y)); `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Self {
        assert!(inner.c[0].is_zero_c(), "inner series must vanish at 0");
        let n = self.order().min(inner.order());
        let mut acc = Self::zero(n, self.proto());
        for a in self.c.iter().take(n + 1).rev() {
            acc = acc.mul(inner);
            acc.c[0] = acc.c[0].add_c(a);
        }
        acc
    }

    /// 1/self for a unit constant term.
    pub fn reciprocal(&self) -> Option<Self> {
        let inv0 = self.c[0].inv_c()?;
        let n = self.order();
        let mut r = vec![self.proto().zero_like(); n + 1];
        r[0] = inv0.clone();
        for k in 1..=n {
            let mut s = self.proto().zero_like();
            for j in 1..=k {
                s = s.add_c(&self.c[j].mul_c(&r[k - j]));
            }
            r[k] = s.mul_c(&inv0).neg_c();
        }
        Some(TruncSeries { c: r })
    }

    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut c = vec![self.proto().zero_like(); n + 1];
        for k in 1..=n {
            c[k - 1] = self.c[k].mul_c(&self.proto().from_rational_like(&Rational::from_integer((k as i64).into())));
        }
        TruncSeries { c }
    }

    pub fn to_rationals(&self) -> Option<Vec<Rational>> {
        self.c.iter().map(|x| x.to_rational()).collect()
    }

    pub fn to_string_var(&self, var: &str) -> String {
        let mut parts = Vec::new();
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero_c() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            parts.push(if mono.is_empty() { format!("({a})") } else { format!("({a})*{mono}") });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        format!("{} + O({var}^{})", parts.join(" + "), self.order() + 1)
    }
}

fn idx(i: usize, j: usize) -> usize {
    let s = i + j;
    s * (s + 1) / 2 + j
}

/// Σ a_ij x^i y^j over i + j <= N, arithmetic modulo total degree N+1.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries2<C: Coeff = Rational> {
    n: usize,
    c: Vec<C>,
}

impl<C: Coeff> TruncSeries2<C> {
    pub fn zero(n: usize, proto: &C) -> Self {
        TruncSeries2 { n, c: vec![proto.zero_like(); idx(0, n) + 1] }
    }

    pub fn monomial(a: C, i: usize, j: usize, n: usize) -> Self {
        let mut s = Self::zero(n, &a);
        if i + j <= n {
            s.c[idx(i, j)] = a;
        }
        s
    }

    pub fn constant(a: C, n: usize) -> Self {
        Self::monomial(a, 0, 0, n)
    }

    pub fn x(n: usize, proto: &C) -> Self {
        Self::monomial(proto.one_like(), 1, 0, n)
    }

    pub fn y(n: usize, proto: &C) -> Self {
        Self::monomial(proto.one_like(), 0, 1, n)
    }

    /// Polynomial in (first, second) variables read as (x, y).
    pub fn from_poly(p: &MultiPoly, n: usize, proto: &C) -> Self {
        let mut s = Self::zero(n, proto);
        for (&(i, j), c) in p.terms() {
            let (i, j) = (i as usize, j as usize);
            if i + j <= n {
                s.c[idx(i, j)] = proto.from_rational_like(c);
            }
        }
        s
    }

    /// Lifts a series in y.
    pub fn from_y_series(f: &TruncSeries<C>, n: usize) -> Self {
        let mut s = Self::zero(n, f.get(0));
        for k in 0..=n.min(f.order()) {
            s.c[idx(0, k)] = f.get(k).clone();
        }
        s
    }

    /// Lifts a series in x.
    pub fn from_x_series(f: &TruncSeries<C>, n: usize) -> Self {
        let mut s = Self::zero(n, f.get(0));
        for k in 0..=n.min(f.order()) {
            s.c[idx(k, 0)] = f.get(k).clone();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.n
    }

    fn proto(&self) -> &C {
        &self.c[0]
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.c[idx(i, j)]
    }

    pub fn coeff(&self, i: usize, j: usize) -> C {
        if i + j <= self.n {
            self.c[idx(i, j)].clone()
        } else {
            self.proto().zero_like()
        }
    }

    pub fn set(&mut self, i: usize, j: usize, a: C) {
        if i + j <= self.n {
            self.c[idx(i, j)] = a;
        }
    }

    /// Nonzero terms as ((i, j), coefficient).
    pub fn terms(&self) -> Vec<((usize, usize), C)> {
        let mut out = Vec::new();
        for s in 0..=self.n {
            for j in 0..=s {
                let a = &self.c[idx(s - j, j)];
                if !a.is_zero_c() {
                    out.push(((s - j, j), a.clone()));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero_c())
    }

    pub fn with_order(&self, n: usize) -> Self {
        let mut s = Self::zero(n, self.proto());
        for ((i, j), a) in self.terms() {
            s.set(i, j, a);
        }
        s
    }

    pub fn add(&self, o: &Self) -> Self {
        TruncSeries2 { n: self.n, c: self.c.iter().zip(&o.c).map(|(a, b)| a.add_c(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        TruncSeries2 { n: self.n, c: self.c.iter().zip(&o.c).map(|(a, b)| a.sub_c(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        TruncSeries2 { n: self.n, c: self.c.iter().map(|a| a.neg_c()).collect() }
    }

    pub fn scale(&self, s: &C) -> Self {
        TruncSeries2 { n: self.n, c: self.c.iter().map(|a| a.mul_c(s)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n.min(o.n);
        self.mul_trunc(o, n)
    }

    /// Product keeping only total degree <= m; higher terms are left zero.
    pub fn mul_trunc(&self, o: &Self, m: usize) -> Self {
        let n = self.n.min(o.n);
        let m = m.min(n);
        let mut r = Self::zero(n, self.proto());
        let lhs = self.terms();
        let rhs = o.terms();
        for ((i, j), a) in &lhs {
            if i + j > m {
                break;
            }
            for ((k, l), b) in &rhs {
                if i + j + k + l > m {
                    break;
                }
                let t = idx(i + k, j + l);
                r.c[t] = r.c[t].add_c(&a.mul_c(b));
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::constant(self.proto().one_like(), self.n);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// self(X, Y) for series X, Y with zero constant terms.
    pub fn compose(&self, xs: &Self, ys: &Self) -> Self {
        assert!(xs.get(0, 0).is_zero_c() && ys.get(0, 0).is_zero_c(), "substituted series must vanish at 0");
        let n = self.n;
        let proto = self.proto().clone();
        let terms = self.terms();
        if terms.is_empty() {
            return Self::zero(n, &proto);
        }
        let imax = terms.iter().map(|((i, _), _)| *i).max().unwrap();
        let jmax = terms.iter().map(|((_, j), _)| *j).max().unwrap();
        let y = Self::y(n, &proto);
        let x = Self::x(n, &proto);
        // Columns C_i = Σ_j a_ij Y^j.
        let columns: Vec<Self> = if *ys == y {
            (0..=imax)
                .map(|i| {
                    let mut c = Self::zero(n, &proto);
                    for j in 0..=n - i.min(n) {
                        if i + j <= n {
                            c.set(0, j, self.c[idx(i, j)].clone());
                        }
                    }
                    c
                })
                .collect()
        } else {
            let univariate = ys.terms().iter().all(|((i, _), _)| *i == 0);
            let ypow: Vec<Self> = if univariate {
                let y1 = ys.restrict_x0();
                let mut p = TruncSeries::one(n, &proto);
                let mut out = vec![Self::from_y_series(&p, n)];
                for _ in 0..jmax {
                    p = p.mul(&y1);
                    out.push(Self::from_y_series(&p, n));
                }
                out
            } else {
                let mut out = vec![Self::constant(proto.one_like(), n)];
                for k in 0..jmax {
                    let next = out[k].mul(ys);
                    out.push(next);
                }
                out
            };
            (0..=imax)
                .map(|i| {
                    let mut c = Self::zero(n, &proto);
                    for j in 0..=n.saturating_sub(i) {
                        let a = &self.c[idx(i, j)];
                        if !a.is_zero_c() {
                            c = c.add(&ypow[j].scale(a));
                        }
                    }
                    c
                })
                .collect()
        };
        if *xs == x {
            let mut acc = Self::zero(n, &proto);
            for (i, col) in columns.iter().enumerate() {
                for ((a, b), c) in col.terms() {
                    if a + i + b <= n {
                        let t = idx(a + i, b);
                        acc.c[t] = acc.c[t].add_c(&c);
                    }
                }
            }
            return acc;
        }
        // Horner in X; at step i only degrees <= n - i survive the remaining i factors of X.
        let mut acc = columns[imax].clone();
        for i in (0..imax).rev() {
            acc = acc.mul_trunc(xs, n - i).add(&columns[i]);
        }
        acc
    }

    /// self(x, 0) as a series in x.
    pub fn restrict_y0(&self) -> TruncSeries<C> {
        TruncSeries::new((0..=self.n).map(|i| self.c[idx(i, 0)].clone()).collect(), self.n, self.proto())
    }

    /// self(0, y) as a series in y.
    pub fn restrict_x0(&self) -> TruncSeries<C> {
        TruncSeries::new((0..=self.n).map(|j| self.c[idx(0, j)].clone()).collect(), self.n, self.proto())
    }

    /// self(a(y), y) for a series a with a(0) = 0.
    pub fn subst_x(&self, a: &TruncSeries<C>) -> TruncSeries<C> {
        assert!(a.get(0).is_zero_c());
        let n = self.n;
        let a = a.with_order(n);
        let mut acc = TruncSeries::zero(n, self.proto());
        for i in (0..=n).rev() {
            acc = acc.mul(&a);
            let col = TruncSeries::new((0..=n - i).map(|j| self.c[idx(i, j)].clone()).collect(), n, self.proto());
            acc = acc.add(&col);
        }
        acc
    }

    /// Coefficient series of x^i: Σ_j a_ij y^j.
    pub fn x_coeff(&self, i: usize) -> TruncSeries<C> {
        let n = self.n;
        TruncSeries::new((0..=n.saturating_sub(i)).map(|j| self.coeff(i, j)).collect(), n, self.proto())
    }

    /// Divides by x^a y^b when every term is divisible.
    pub fn divide_monomial(&self, a: usize, b: usize) -> Option<Self> {
        let mut r = Self::zero(self.n, self.proto());
        for ((i, j), c) in self.terms() {
            if i < a || j < b {
                return None;
            }
            r.set(i - a, j - b, c);
        }
        Some(r)
    }

    pub fn to_poly(&self) -> Option<MultiPoly> {
        let mut p = MultiPoly::zero();
        for ((i, j), c) in self.terms() {
            p.add_term((i as u32, j as u32), c.to_rational()?);
        }
        Some(p)
    }

    pub fn to_string_vars(&self, vars: (&str, &str)) -> String {
        let mut parts = Vec::new();
        for ((i, j), c) in self.terms() {
            let mut f = Vec::new();
            for (v, k) in [(vars.0, i), (vars.1, j)] {
                match k {
                    0 => {}
                    1 => f.push(v.to_string()),
                    _ => f.push(format!("{v}^{k}")),
                }
            }
            parts.push(if f.is_empty() { format!("({c})") } else { format!("({c})*{}", f.join("*")) });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        parts.join(" + ")
    }
}

/// (f ∘ g) for maps given as pairs of bivariate series.
pub fn compose_maps<C: Coeff>(f: &(TruncSeries2<C>, TruncSeries2<C>), g: &(TruncSeries2<C>, TruncSeries2<C>)) -> (TruncSeries2<C>, TruncSeries2<C>) {
    (f.0.compose(&g.0, &g.1), f.1.compose(&g.0, &g.1))
}
