//! Bivariate gcd over Q by primitive polynomial remainder sequences in w
//! with coefficients in Q[z].

use super::MultiPoly;
use crate::exactnum::UniPoly;

type WPoly = Vec<UniPoly>;

fn trim(mut a: WPoly) -> WPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn content(a: &WPoly) -> UniPoly {
    a.iter().fold(UniPoly::zero(), |acc, c| acc.gcd(c))
}

fn primitive(a: &WPoly) -> WPoly {
    let c = content(a);
    if c.is_zero() {
        return a.clone();
    }
    trim(a.iter().map(|x| x.div_exact(&c).expect("content divides")).collect())
}

fn prem(a: &WPoly, b: &WPoly) -> WPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db {
        let k = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        let mut next: WPoly = r.iter().map(|c| c * &lb).collect();
        for (i, c) in b.iter().enumerate() {
            next[i + k] = &next[i + k] - &(&lr * c);
        }
        r = trim(next);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Greatest common divisor, normalized as `MultiPoly::primitive`.
pub fn gcd(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    if f.is_zero() {
        return g.primitive();
    }
    if g.is_zero() {
        return f.primitive();
    }
    let a = trim(f.as_poly_in(1));
    let b = trim(g.as_poly_in(1));
    let c = content(&a).gcd(&content(&b));
    let mut a = primitive(&a);
    let mut b = primitive(&b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let pp = loop {
        if b.len() == 1 {
            break vec![UniPoly::one()];
        }
        let r = prem(&a, &b);
        if r.is_empty() {
            break b;
        }
        a = b;
        b = primitive(&r);
    };
    let pp: WPoly = pp.iter().map(|x| x * &c).collect();
    MultiPoly::from_poly_in(1, &pp).primitive()
}

/// f / gcd(f, ∂f/∂z, ∂f/∂w): removes repeated factors.
pub fn squarefree_part(f: &MultiPoly) -> MultiPoly {
    if f.is_constant() {
        return f.primitive();
    }
    let g = gcd(&gcd(f, &f.derivative(0)), &f.derivative(1));
    if g.is_constant() {
        return f.primitive();
    }
    divide_exact(f, &g).expect("gcd divides").primitive()
}

/// Exact division in Q[z, w], or None if `d` does not divide `f`.
pub fn divide_exact(f: &MultiPoly, d: &MultiPoly) -> Option<MultiPoly> {
    if d.is_zero() {
        return None;
    }
    let (le, lc) = d.leading_term().unwrap();
    let key = |e: &(u32, u32)| (e.0 + e.1, e.0);
    let mut r = f.clone();
    let mut q = MultiPoly::zero();
    while let Some((e, c)) = r.leading_term() {
        if e.0 < le.0 || e.1 < le.1 || key(&e) < key(&le) {
            return None;
        }
        let t = MultiPoly::monomial(&c / &lc, e.0 - le.0, e.1 - le.1);
        r = &r - &(&t * d);
        q = &q + &t;
    }
    Some(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::parse_poly;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s, ("z", "w")).unwrap()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&p("(w - z)*(w + 1)"), &p("(w - z)*(z - 2)")), p("z - w").primitive());
        assert_eq!(gcd(&p("2*z*(w^2 - z)"), &p("4*z^2")), p("z"));
        assert!(gcd(&p("w - z"), &p("w + z")).is_constant());
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&p("(w - z)^2*(z + 1)")), p("(w - z)*(z + 1)").primitive());
        assert_eq!(squarefree_part(&p("3*(w - z^2)")), p("z^2 - w"));
    }

    #[test]
    fn exact_division() {
        assert_eq!(divide_exact(&p("z^2 - w^2"), &p("z - w")), Some(p("z + w")));
        assert_eq!(divide_exact(&p("z^2 + w"), &p("z - w")), None);
    }
}
