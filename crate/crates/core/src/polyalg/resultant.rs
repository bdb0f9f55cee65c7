//! Sylvester resultants by fraction-free (Bareiss) elimination over Q[x].

use num_traits::Zero;

use super::MultiPoly;
use crate::error::{Error, Result};
use crate::exactnum::{Rational, UniPoly};

/// Determinant of a square matrix with entries in Q[x].
pub fn det_poly(mut m: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = m.len();
    if n == 0 {
        return UniPoly::one();
    }
    let mut sign = false;
    let mut prev = UniPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return UniPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = UniPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -&d
    } else {
        d
    }
}

/// Sylvester matrix of two polynomials given by coefficient lists (constant first).
pub fn sylvester(f: &[UniPoly], g: &[UniPoly]) -> Vec<Vec<UniPoly>> {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for r in 0..n {
        let mut row = vec![UniPoly::zero(); size];
        for (k, c) in f.iter().rev().enumerate() {
            row[r + k] = c.clone();
        }
        rows.push(row);
    }
    for r in 0..m {
        let mut row = vec![UniPoly::zero(); size];
        for (k, c) in g.iter().rev().enumerate() {
            row[r + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Res_var(f, g) as a polynomial in the remaining variable.
pub fn resultant(f: &MultiPoly, g: &MultiPoly, var: usize) -> Result<MultiPoly> {
    let fc = f.as_poly_in(var);
    let gc = g.as_poly_in(var);
    let other = 1 - var;
    let m = f.degree_in(var);
    let n = g.degree_in(var);
    if f.is_zero() || g.is_zero() {
        return Ok(MultiPoly::zero());
    }
    if m == 0 && n == 0 {
        return Err(Error::Elimination("both polynomials are constant in the eliminated variable".into()));
    }
    let r = if n == 0 {
        gc[0].pow(m)
    } else if m == 0 {
        fc[0].pow(n)
    } else {
        det_poly(sylvester(&fc, &gc))
    };
    Ok(MultiPoly::from_uni(other, &r))
}

/// Resultant of two binary forms of degrees (dp, dq), given as f(t) = F(t, 1), g(t) = G(t, 1).
/// Vanishes exactly when the forms share a projective root.
pub fn binary_form_resultant(f: &UniPoly, dp: usize, g: &UniPoly, dq: usize) -> Rational {
    let pad = |p: &UniPoly, d: usize| -> Vec<UniPoly> { (0..=d).map(|i| UniPoly::constant(p.coeff(i))).collect() };
    let fc = pad(f, dp);
    let gc = pad(g, dq);
    if dp == 0 {
        return num_traits::pow(f.coeff(0), dq);
    }
    if dq == 0 {
        return num_traits::pow(g.coeff(0), dp);
    }
    let d = det_poly(sylvester(&fc, &gc));
    if d.is_zero() {
        Rational::zero()
    } else {
        d.coeff(0)
    }
}
