//! Factorization of rational univariate polynomials into irreducibles by
//! recombining certified complex roots.

use num_bigint::BigInt;
use num_complex::Complex64;


use super::roots::{isolate_roots, CRat};
use super::{Rational, UniPoly};
use crate::error::{Error, Result};

const MAX_UNITS: usize = 20;

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() <= 1e-6 * (1.0 + x.abs())
}

fn round_rational(q: &Rational) -> BigInt {
    let two = Rational::from_integer(2.into());
    ((q * &two + Rational::from_integer(1.into())) / two).floor().to_integer()
}

/// Candidate factor from the chosen root indices, or None if it does not divide.
fn try_factor(g: &UniPoly, centers: &[CRat], idx: &[usize]) -> Option<UniPoly> {
    let mut prod: Vec<CRat> = vec![CRat::real(g.lc())];
    for &i in idx {
        let mut next = vec![CRat::zero(); prod.len() + 1];
        for (k, c) in prod.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].sub(&c.mul(&centers[i]));
        }
        prod = next;
    }
    let h = UniPoly::new(prod.iter().map(|c| Rational::from_integer(round_rational(&c.re))).collect());
    if h.deg() != idx.len() {
        return None;
    }
    let h = h.primitive();
    g.rem(&h).is_zero().then_some(h)
}

fn factor_squarefree(g: &UniPoly) -> Result<Vec<UniPoly>> {
    let g = g.primitive();
    if g.deg() <= 1 {
        return Ok(vec![g]);
    }
    let n = g.deg();
    let lc = g.lc();
    let bound = 1.0 + g.coeffs().iter().map(|c| super::to_f64(&(c / &lc)).abs()).fold(0.0, f64::max);
    let bits = 96 + (2.0 * n as f64 * (bound.log2() + 1.0)) as u32 + super::floor_log2(&lc).unsigned_abs() as u32;
    let roots = isolate_roots(&g, bits)?;
    let centers: Vec<CRat> = roots.iter().map(|r| r.center.clone()).collect();
    let approx: Vec<Complex64> = roots.iter().map(|r| r.approx()).collect();
    // Real roots are singleton units, complex roots are paired with their conjugates.
    let mut units: Vec<Vec<usize>> = Vec::new();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        used[i] = true;
        if roots[i].is_real {
            units.push(vec![i]);
            continue;
        }
        let j = (0..n)
            .filter(|&j| !used[j])
            .min_by(|&a, &b| {
                (approx[a] - approx[i].conj()).norm().total_cmp(&(approx[b] - approx[i].conj()).norm())
            })
            .expect("complex root without conjugate");
        used[j] = true;
        units.push(vec![i, j]);
    }
    if units.len() > MAX_UNITS {
        return Err(Error::Precondition(format!("factorization of degree {n} exceeds the recombination cap")));
    }
    let mut remaining: Vec<usize> = (0..units.len()).collect();
    let mut rest = g.clone();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= rest.deg() {
        let mut found = false;
        let k = remaining.len();
        'search: for mask in 1u32..(1u32 << k) {
            let chosen: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| remaining[b]).collect();
            let idx: Vec<usize> = chosen.iter().flat_map(|&u| units[u].iter().copied()).collect();
            if idx.len() != size {
                continue;
            }
            let lcf = super::to_f64(&rest.lc());
            let tr: f64 = idx.iter().map(|&i| approx[i].re).sum::<f64>() * lcf;
            let nm: Complex64 = idx.iter().map(|&i| approx[i]).product::<Complex64>() * lcf;
            if !near_integer(tr) || !near_integer(nm.re) {
                continue;
            }
            if let Some(h) = try_factor(&rest, &centers, &idx) {
                rest = rest.div_exact(&h).unwrap().primitive();
                remaining.retain(|u| !chosen.contains(u));
                out.push(h);
                found = true;
                break 'search;
            }
        }
        if !found {
            size += 1;
        }
    }
    if rest.deg() >= 1 {
        out.push(rest.primitive());
    }
    Ok(out)
}

fn cmp_poly(a: &UniPoly, b: &UniPoly) -> std::cmp::Ordering {
    a.deg().cmp(&b.deg()).then_with(|| {
        for i in (0..=a.deg()).rev() {
            let o = a.coeff(i).cmp(&b.coeff(i));
            if o.is_ne() {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// Irreducible factors over Q (primitive, positive leading coefficient) with
/// multiplicities, sorted by degree and then coefficients.
pub fn factor_over_q(f: &UniPoly) -> Result<Vec<(UniPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut out = Vec::new();
    for (g, m) in f.squarefree_decomposition() {
        for h in factor_squarefree(&g)? {
            out.push((h, m));
        }
    }
    out.sort_by(|a, b| cmp_poly(&a.0, &b.0));
    Ok(out)
}

/// Rational roots with multiplicities.
pub fn rational_roots(f: &UniPoly) -> Result<Vec<(Rational, u32)>> {
    Ok(factor_over_q(f)?
        .into_iter()
        .filter(|(h, _)| h.deg() == 1)
        .map(|(h, m)| (-h.coeff(0) / h.coeff(1), m))
        .collect())
}

pub fn is_irreducible(f: &UniPoly) -> Result<bool> {
    let fs = factor_over_q(f)?;
    Ok(fs.len() == 1 && fs[0].1 == 1)
}
