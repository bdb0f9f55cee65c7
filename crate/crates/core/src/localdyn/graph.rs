//! Pullback of vertical graphs z = φ(y) in the sector coordinates of a parabolic point.

use std::f64::consts::PI;

use super::numeric::{NumericGerm, C64};
use super::LocalGerm;
use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// A map (z, y) -> (z − 1 + a/z, y^d (1 + b/z^(1/k))) on Ω_R × D_r.
pub trait SectorMap {
    fn k(&self) -> u32;
    fn d(&self) -> u32;
    fn eval(&self, z: C64, y: C64) -> (C64, C64);
}

/// The model (z − 1, y^d).
#[derive(Clone, Copy, Debug)]
pub struct ModelSectorMap {
    pub d: u32,
}

impl SectorMap for ModelSectorMap {
    fn k(&self) -> u32 {
        1
    }

    fn d(&self) -> u32 {
        self.d
    }

    fn eval(&self, z: C64, y: C64) -> (C64, C64) {
        (z - 1.0, y.powu(self.d))
    }
}

/// A parabolic normal form read through z = (k x^k)⁻¹ on the principal branch.
#[derive(Clone, Debug)]
pub struct GermSectorMap {
    germ: NumericGerm,
    k: u32,
    d: u32,
}

impl GermSectorMap {
    pub fn new(germ: &LocalGerm<Rational>, k: u32) -> Self {
        GermSectorMap { germ: NumericGerm::new(germ), k, d: germ.d() }
    }
}

impl SectorMap for GermSectorMap {
    fn k(&self) -> u32 {
        self.k
    }

    fn d(&self) -> u32 {
        self.d
    }

    fn eval(&self, z: C64, y: C64) -> (C64, C64) {
        let k = self.k as f64;
        let x = (-(z * k).ln() / k).exp();
        let (x1, y1) = self.germ.eval(x, y);
        (1.0 / (x1.powu(self.k) * k), y1)
    }
}

/// The polydisk radius r in y and the sector bound R.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorParams {
    pub r: f64,
    pub big_r: f64,
}

impl SectorParams {
    pub fn contains(&self, z: C64) -> bool {
        z.norm() > self.big_r && z.arg().abs() < PI / 4.0
    }
}

/// A graph z = ψ(y) over D_ρ, stored by its values on |y| = ρ.
#[derive(Clone, Debug)]
pub struct VerticalGraphSample {
    pub rho: f64,
    pub samples: Vec<(C64, C64)>,
    coeffs: Vec<C64>,
    pub slope: f64,
    pub base: C64,
}

impl VerticalGraphSample {
    /// ψ sampled at m points of the circle |y| = ρ.
    pub fn from_fn(rho: f64, m: usize, psi: impl Fn(C64) -> C64) -> Self {
        let ys: Vec<C64> = (0..m).map(|j| C64::from_polar(rho, 2.0 * PI * j as f64 / m as f64)).collect();
        let zs: Vec<C64> = ys.iter().map(|&y| psi(y)).collect();
        Self::from_samples(rho, ys.into_iter().zip(zs).collect())
    }

    pub fn constant(z0: C64, rho: f64, m: usize) -> Self {
        Self::from_fn(rho, m, |_| z0)
    }

    /// Samples at equally spaced points of |y| = ρ starting at y = ρ.
    pub fn from_samples(rho: f64, samples: Vec<(C64, C64)>) -> Self {
        let m = samples.len();
        let scale = samples.iter().map(|s| s.1.norm()).fold(0.0, f64::max);
        let coeffs: Vec<C64> = (0..m)
            .map(|n| {
                let s: C64 = samples
                    .iter()
                    .enumerate()
                    .map(|(j, &(_, z))| z * C64::from_polar(1.0, -2.0 * PI * (j * n) as f64 / m as f64))
                    .sum();
                // Rounding noise would be amplified by ρ^-n.
                let s = s / m as f64;
                if s.norm() <= 1e-13 * scale {
                    C64::new(0.0, 0.0)
                } else {
                    s / rho.powi(n as i32)
                }
            })
            .collect();
        let mut g = VerticalGraphSample { rho, samples, coeffs, slope: 0.0, base: C64::new(0.0, 0.0) };
        g.base = g.coeffs[0];
        g.slope = (0..4 * m).map(|j| g.derivative(C64::from_polar(rho, 2.0 * PI * j as f64 / (4 * m) as f64)).norm()).fold(0.0, f64::max);
        g
    }

    pub fn eval(&self, y: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * y + c)
    }

    pub fn derivative(&self, y: C64) -> C64 {
        self.coeffs.iter().enumerate().skip(1).rev().fold(C64::new(0.0, 0.0), |acc, (n, &c)| acc * y + c * n as f64)
    }
}

const MAX_ITER: usize = 200;

/// The graph ψ over D_ρ₁, ρ₁ = min((ρ/2)^(1/d), r), with f⁻¹{z = φ(y)} = {z = ψ(y)}.
pub fn graph_pullback(f: &dyn SectorMap, graph: &VerticalGraphSample, params: &SectorParams) -> Result<VerticalGraphSample> {
    let d = f.d() as f64;
    if graph.slope * graph.rho >= 1.0 / (100.0 * d) {
        return Err(Error::Contraction(format!("σρ = {} is not below 1/(100d)", graph.slope * graph.rho)));
    }
    if params.r >= 1.0 / (10.0 * d) {
        return Err(Error::Contraction("r is not below 1/(10d)".into()));
    }
    let rho1 = (graph.rho / 2.0).powf(1.0 / d).min(params.r);
    let m = graph.samples.len();
    let ell = |z: C64, y: C64| -> Result<C64> {
        let (z1, y1) = f.eval(z, y);
        if y1.norm() >= graph.rho {
            return Err(Error::Contraction("image leaves the domain of the graph".into()));
        }
        Ok(graph.eval(y1) + z - z1)
    };
    let mut samples = Vec::with_capacity(m);
    for j in 0..m {
        let y = C64::from_polar(rho1, 2.0 * PI * j as f64 / m as f64);
        let mut z = graph.base + 1.0;
        let mut done = false;
        for _ in 0..MAX_ITER {
            if !params.contains(z) {
                return Err(Error::Contraction(format!("iterate {z} left the sector")));
            }
            let next = ell(z, y)?;
            let step = (next - z).norm();
            z = next;
            if step <= 1e-14 * z.norm() {
                done = true;
                break;
            }
        }
        let h = 1e-6 * z.norm();
        let lip = ((ell(z + h, y)? - ell(z, y)?) / h).norm();
        if !done || lip > 0.1 || !params.contains(z) {
            return Err(Error::Contraction(format!("no certified fixed point at y = {y} (|∂ℓ/∂z| ≈ {lip})")));
        }
        samples.push((y, z));
    }
    let out = VerticalGraphSample::from_samples(rho1, samples);
    if out.slope > 0.1 || out.base.re < graph.base.re + 0.9 {
        return Err(Error::Contraction(format!("pulled-back graph has slope {} and advance {}", out.slope, out.base.re - graph.base.re)));
    }
    Ok(out)
}
