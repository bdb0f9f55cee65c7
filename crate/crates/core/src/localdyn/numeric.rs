//! Floating-point evaluation of truncated germs and the rescaling limit.

use num_complex::Complex64;

use super::LocalGerm;
use crate::error::{Error, Result};
use crate::exactnum::{to_f64, Rational};
use crate::polyalg::TruncSeries2;

pub type C64 = Complex64;

/// A truncated series as a polynomial with f64 coefficients.
#[derive(Clone, Debug)]
pub struct NumericSeries {
    terms: Vec<((i32, i32), f64)>,
}

impl NumericSeries {
    pub fn new(s: &TruncSeries2<Rational>) -> Self {
        NumericSeries { terms: s.terms().into_iter().map(|((i, j), c)| ((i as i32, j as i32), to_f64(&c))).collect() }
    }

    pub fn eval(&self, x: C64, y: C64) -> C64 {
        self.terms.iter().map(|&((i, j), c)| x.powi(i) * y.powi(j) * c).sum()
    }
}

/// A germ evaluated in floating point.
#[derive(Clone, Debug)]
pub struct NumericGerm {
    pub first: NumericSeries,
    pub second: NumericSeries,
}

impl NumericGerm {
    pub fn new(g: &LocalGerm<Rational>) -> Self {
        NumericGerm { first: NumericSeries::new(g.first()), second: NumericSeries::new(g.second()) }
    }

    pub fn eval(&self, x: C64, y: C64) -> (C64, C64) {
        (self.first.eval(x, y), self.second.eval(x, y))
    }
}

const GRID: usize = 16;

/// Points of the torus |x| = |y| = r, where the maximum over the polydisk is attained.
fn torus_grid(r: f64) -> Vec<(C64, C64)> {
    let circle: Vec<C64> = (0..GRID).map(|k| C64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / GRID as f64)).collect();
    circle.iter().flat_map(|&x| circle.iter().map(move |&y| (x, y))).collect()
}

/// max over the grid of |f^n(x/λ^n, y) − (x, 0)| (sup norm on C²).
pub fn rescaling_check(germ: &LocalGerm<Rational>, n: u32, r: f64) -> Result<f64> {
    let lam = to_f64(germ.lambda());
    if lam.abs() <= 1.0 {
        return Err(Error::Precondition("rescaling needs |λ| > 1".into()));
    }
    let f = NumericGerm::new(germ);
    let mut dev = 0.0f64;
    for (x, y) in torus_grid(r) {
        let (mut u, mut v) = (x / lam.powi(n as i32), y);
        for _ in 0..n {
            (u, v) = f.eval(u, v);
            if !(u.norm() <= 2.0 * r && v.norm() <= 2.0 * r) {
                return Err(Error::LeftPolydisk(r));
            }
        }
        dev = dev.max((u - x).norm().max(v.norm()));
    }
    Ok(dev)
}

/// Deviations for n = 0..=n_max.
pub fn rescaling_profile(germ: &LocalGerm<Rational>, n_max: u32, r: f64) -> Result<Vec<f64>> {
    (0..=n_max).map(|n| rescaling_check(germ, n, r)).collect()
}
