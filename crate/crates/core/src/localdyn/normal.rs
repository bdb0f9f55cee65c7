//! Böttcher and Koenigs coordinates, saddle and parabolic normal forms.

use super::stable::reduce;
use super::{revert_series, Conjugacy, LocalGerm};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::polyalg::{Coeff, TruncSeries, TruncSeries2};

/// β(y) = y + ... with β(u(y)) = κ β(y)^d, where u = κ y^d (1 + h₀).
pub fn bottcher_series<C: Coeff>(u: &TruncSeries<C>) -> Result<TruncSeries<C>> {
    let n = u.order();
    let d = u.valuation().filter(|&d| d >= 2).ok_or_else(|| Error::Precondition("expected u = κ y^d (1 + h) with d >= 2".into()))?;
    let kappa = u.get(d).clone();
    let kinv = kappa.inv_c().unwrap();
    // 1 + h₀ = u / (κ y^d)
    let unit = u.unshift(d).unwrap().scale(&kinv).with_order(n);
    let dinv = kappa.from_rational_like(&Rational::from_integer((d as i64).into())).inv_c().unwrap();
    let mut b = TruncSeries::one(n, &kappa);
    for _ in 0..=n {
        let err = unit.mul(&b.compose(u)).sub(&b.pow(d as u32));
        if err.is_zero() {
            break;
        }
        b = b.add(&err.scale(&dinv));
    }
    Ok(b.shift(1))
}

/// ψ(y) = y + ... with ψ(s(y)) = λ ψ(y), s = λ y + ...
pub fn koenigs_series<C: Coeff>(s: &TruncSeries<C>) -> Result<TruncSeries<C>> {
    let n = s.order();
    let lam = s.get(1).clone();
    if lam.is_zero_c() || !s.get(0).is_zero_c() {
        return Err(Error::Precondition("expected s = λ y + ... with λ != 0".into()));
    }
    let mut psi = TruncSeries::var(n, &lam);
    for j in 2..=n {
        let den = lam.sub_c(&lam.pow_c(j as u64));
        let inv = den.inv_c().ok_or(Error::Resonance(j))?;
        let c = psi.compose(s).get(j).clone();
        psi.set(j, c.mul_c(&inv));
    }
    Ok(psi)
}

/// Conjugates the x-coefficient λ(1 + g₁(y)) of the first component to λ by
/// (x (1 + φ(y)), y) with 1 + φ = ∏_k (1 + g₁(u^k(y)))⁻¹, u = second(0, y).
fn straighten_linear<C: Coeff>(germ: &LocalGerm<C>) -> Result<(LocalGerm<C>, Conjugacy<C>)> {
    let n = germ.order();
    let lam_inv = germ.lambda().inv_c().unwrap();
    let unit = germ.first().x_coeff(1).scale(&lam_inv);
    let u = germ.vertical();
    let mut prod = TruncSeries::one(n, germ.lambda());
    let mut uk = TruncSeries::var(n, germ.lambda());
    while !uk.is_zero() {
        prod = prod.mul(&unit.compose(&uk).reciprocal().unwrap());
        uk = u.compose(&uk);
    }
    let x = TruncSeries2::x(n, germ.lambda());
    let y = TruncSeries2::y(n, germ.lambda());
    let fwd = x.mul(&TruncSeries2::from_y_series(&prod, n));
    let inv = x.mul(&TruncSeries2::from_y_series(&prod.reciprocal().unwrap(), n));
    let conj = Conjugacy::new((fwd, y.clone()), (inv, y));
    Ok((germ.conjugate(&conj)?, conj))
}

fn bottcher_step<C: Coeff>(germ: &LocalGerm<C>) -> Result<(LocalGerm<C>, Conjugacy<C>)> {
    let n = germ.order();
    let beta = bottcher_series(&germ.vertical())?;
    let binv = revert_series(&beta)?;
    let x = TruncSeries2::x(n, germ.lambda());
    let conj = Conjugacy::new((x.clone(), TruncSeries2::from_y_series(&binv, n)), (x, TruncSeries2::from_y_series(&beta, n)));
    Ok((germ.conjugate(&conj)?, conj))
}

/// Normal form (λx(1 + xy g̃), κ y^d (1 + x h̃)) for a germ with λ not a root of unity.
pub fn saddle_normal_form<C: Coeff>(germ: &LocalGerm<C>) -> Result<(LocalGerm<C>, Conjugacy<C>)> {
    let n = germ.order();
    let (g, c) = reduce(germ)?;
    let (g, c1) = bottcher_step(&g)?;
    let psi = koenigs_series(&g.horizontal())?;
    let pinv = revert_series(&psi)?;
    let y = TruncSeries2::y(n, germ.lambda());
    let c2 = Conjugacy::new((TruncSeries2::from_x_series(&pinv, n), y.clone()), (TruncSeries2::from_x_series(&psi, n), y));
    let g = g.conjugate(&c2)?;
    let (g, c3) = straighten_linear(&g)?;
    let conj = c.then(&c1).then(&c2).then(&c3);
    if !is_saddle_form(&g) {
        return Err(Error::Divisibility("saddle normal form post-condition".into()));
    }
    Ok((g, conj))
}

/// (first − λx) divisible by x²y and (second − κy^d) divisible by x y^d.
pub fn is_saddle_form<C: Coeff>(g: &LocalGerm<C>) -> bool {
    let d = g.d() as usize;
    g.first().terms().iter().all(|((i, j), c)| (*i, *j) == (1, 0) && c == g.lambda() || (*i >= 2 && *j >= 1))
        && g.second().terms().iter().all(|((i, j), c)| (*i, *j) == (0, d) && c == g.kappa() || (*i >= 1 && *j >= d))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParabolicNormalForm<C: Coeff = Rational> {
    /// f(x, 0) = x + c x^(k+1) + ...
    pub k: u32,
    /// Coefficient of x^(k+1); 1 unless c has no rational k-th root.
    pub leading: C,
    pub germ: LocalGerm<C>,
    pub conjugacy: Conjugacy<C>,
}

/// Conjugacy (x (1 + p(y) x^m), y) with its inverse to the truncation order.
fn monomial_conjugacy<C: Coeff>(p: &TruncSeries<C>, m: usize, proto: &C) -> Result<Conjugacy<C>> {
    let n = p.order();
    let x = TruncSeries2::x(n, proto);
    let y = TruncSeries2::y(n, proto);
    let fwd = x.add(&x.pow(m as u32 + 1).mul(&TruncSeries2::from_y_series(p, n)));
    Conjugacy::from_forward((fwd, y))
}

/// x^(n+1) coefficient of the first component, as a series in y.
fn coeff_series<C: Coeff>(g: &LocalGerm<C>, n: usize) -> TruncSeries<C> {
    g.first().x_coeff(n + 1)
}

/// Normal form (x + c x^(k+1) + x^(2k+1) g̃, κ y^d (1 + x h̃)) for λ = 1.
pub fn parabolic_normal_form<C: Coeff>(germ: &LocalGerm<C>) -> Result<ParabolicNormalForm<C>> {
    let n = germ.order();
    let one = germ.lambda().one_like();
    if *germ.lambda() != one {
        return Err(Error::Precondition("parabolic normal form needs λ = 1".into()));
    }
    let (g, c0) = reduce(germ)?;
    let (g, c1) = bottcher_step(&g)?;
    let (mut g, c2) = straighten_linear(&g)?;
    let mut conj = c0.then(&c1).then(&c2);
    let hor = g.horizontal();
    let k = (2..=n)
        .find(|&i| !hor.get(i).is_zero_c())
        .ok_or_else(|| Error::Precondition("f is the identity on {y = 0} to the truncation order".into()))?
        - 1;
    let mut leading = hor.get(k + 1).clone();
    if let Some(a) = leading.to_rational().and_then(|c| super::rational_root(&c, k as u32)) {
        // (x, y) -> (a x, y) with a^k c = 1
        let a = one.from_rational_like(&a).inv_c().unwrap();
        let x = TruncSeries2::x(n, &one);
        let y = TruncSeries2::y(n, &one);
        let s = Conjugacy::new((x.scale(&a), y.clone()), (x.scale(&a.inv_c().unwrap()), y));
        g = g.conjugate(&s)?;
        conj = conj.then(&s);
        leading = one.clone();
    }
    let u = g.vertical();
    let zero = one.zero_like();
    for m in 1..2 * k {
        if m >= n {
            break;
        }
        if m > k {
            // Constant part of x^(m+1) is affine in b for (x (1 + b x^(m-k)), y).
            let at = |b: &C| -> Result<(C, Conjugacy<C>)> {
                let c = monomial_conjugacy(&TruncSeries::monomial(b.clone(), 0, n), m - k, &one)?;
                Ok((coeff_series(&g.conjugate(&c)?, m).get(0).clone(), c))
            };
            let (v0, _) = at(&zero)?;
            let (v1, _) = at(&one)?;
            let slope = v1.sub_c(&v0).inv_c().ok_or_else(|| Error::Divisibility("degenerate constant step".into()))?;
            let b = v0.neg_c().mul_c(&slope);
            let (v, c) = at(&b)?;
            if !v.is_zero_c() {
                return Err(Error::Divisibility(format!("x^{} coefficient not removed", m + 1)));
            }
            g = g.conjugate(&c)?;
            conj = conj.then(&c);
        }
        // Nonconstant part: φ_m = −Σ_j a(u^j(y)).
        let mut a = coeff_series(&g, m);
        a.set(0, zero.clone());
        if a.is_zero() {
            continue;
        }
        let mut phi = TruncSeries::zero(n, &one);
        let mut uj = TruncSeries::var(n, &one);
        while !uj.is_zero() {
            phi = phi.sub(&a.compose(&uj));
            uj = u.compose(&uj);
        }
        let c = monomial_conjugacy(&phi, m, &one)?;
        g = g.conjugate(&c)?;
        conj = conj.then(&c);
    }
    let out = ParabolicNormalForm { k: k as u32, leading, germ: g, conjugacy: conj };
    if !is_parabolic_form(&out) {
        return Err(Error::Divisibility("parabolic normal form post-condition".into()));
    }
    Ok(out)
}

/// Checks the shape (x + c x^(k+1) + x^(2k+1) g̃, κ y^d (1 + x h̃)).
pub fn is_parabolic_form<C: Coeff>(p: &ParabolicNormalForm<C>) -> bool {
    let g = &p.germ;
    let k = p.k as usize;
    let d = g.d() as usize;
    let one = g.lambda().one_like();
    let first_ok = g.first().terms().iter().all(|((i, j), c)| match (*i, *j) {
        (1, 0) => *c == one,
        (i, 0) if i == k + 1 => *c == p.leading,
        (i, _) => i > 2 * k,
    });
    let second_ok = g.second().terms().iter().all(|((i, j), c)| (*i, *j) == (0, d) && c == g.kappa() || (*i >= 1 && *j >= d));
    first_ok && second_ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use proptest::prelude::*;

    fn series(c: &[Rational], n: usize) -> TruncSeries {
        TruncSeries::new(c.to_vec(), n, &int(0))
    }

    fn ints(c: &[i64], n: usize) -> TruncSeries {
        series(&c.iter().map(|&v| int(v)).collect::<Vec<_>>(), n)
    }

    #[test]
    fn bottcher_examples() {
        let n = 10;
        let y2 = ints(&[0, 0, 1], n);
        assert_eq!(bottcher_series(&y2).unwrap(), TruncSeries::var(n, &int(0)));
        let u = ints(&[0, 0, 1, 1], n);
        let b = bottcher_series(&u).unwrap();
        assert_eq!(&b.coeffs()[..4], &[int(0), int(1), rat(1, 2), rat(1, 8)]);
        assert_eq!(b.compose(&u), b.pow(2));
        let u3 = ints(&[0, 0, 0, 3, -1, 2], n);
        let b = bottcher_series(&u3).unwrap();
        assert_eq!(b.compose(&u3), b.pow(3).scale(&int(3)));
    }

    #[test]
    fn koenigs_examples() {
        let n = 10;
        let lin = ints(&[0, 2], n);
        assert_eq!(koenigs_series(&lin).unwrap(), TruncSeries::var(n, &int(0)));
        let s = ints(&[0, 2, 2], n);
        let psi = koenigs_series(&s).unwrap();
        assert_eq!(psi.get(2), &int(-1));
        assert_eq!(psi.compose(&s), psi.scale(&int(2)));
        assert_eq!(koenigs_series(&ints(&[0, -1, 1], n)), Err(Error::Resonance(3)));
    }

    /// Truncated product oracle for (2x(1+y), y²).
    #[test]
    fn saddle_product() {
        let n = 12;
        let g = LocalGerm::parse("2*x*(1 + y), y^2", n).unwrap();
        let (out, conj) = saddle_normal_form(&g).unwrap();
        assert!(is_saddle_form(&out));
        assert_eq!(conj.apply(&g.as_map()), out.as_map());
        assert!(conj.is_inverse_pair());
        let mut prod = TruncSeries::one(n, &int(0));
        let mut k = 1;
        while k <= n {
            prod = prod.mul(&TruncSeries::one(n, &int(0)).add(&TruncSeries::monomial(int(1), k, n)).reciprocal().unwrap());
            k *= 2;
        }
        assert_eq!(conj.forward.0.x_coeff(1), prod);
        assert_eq!(out, LocalGerm::parse("2*x, y^2", n).unwrap());
        let already = LocalGerm::parse("2*x + x^2*y, y^2*(1 + x)", n).unwrap();
        assert_eq!(saddle_normal_form(&already).unwrap().0, already);
    }

    #[test]
    fn saddle_mixed() {
        let g = LocalGerm::parse("2*x*(1 + y), y^2*(1 + x)", 16).unwrap();
        let (out, conj) = saddle_normal_form(&g).unwrap();
        assert!(is_saddle_form(&out));
        assert_eq!(conj.apply(&g.as_map()), out.as_map());
    }

    #[test]
    fn parabolic_examples() {
        let n = 12;
        let g = LocalGerm::parse("x + x^2, y^2*(1 + x)", n).unwrap();
        let p = parabolic_normal_form(&g).unwrap();
        assert_eq!((p.k, p.germ.clone()), (1, g.clone()));
        let g = LocalGerm::parse("x*(1 + y) + x^2, y^2*(1 + x)", n).unwrap();
        let p = parabolic_normal_form(&g).unwrap();
        assert_eq!(p.k, 1);
        assert_eq!(p.leading, int(1));
        assert!(is_parabolic_form(&p));
        assert_eq!(p.conjugacy.apply(&g.as_map()), p.germ.as_map());
        assert_eq!(parabolic_normal_form(&LocalGerm::parse("x, y^2", n).unwrap()).unwrap_err(), Error::Precondition("f is the identity on {y = 0} to the truncation order".into()));
        assert!(parabolic_normal_form(&LocalGerm::parse("2*x, y^2", n).unwrap()).is_err());
    }

    #[test]
    fn parabolic_higher_k() {
        let n = 12;
        let g = LocalGerm::parse("x + 8*x^3 + x^4*y + x^4 + x^2*y + x*y^2, y^3*(1 + x*y)", n).unwrap();
        let p = parabolic_normal_form(&g).unwrap();
        assert_eq!(p.k, 2);
        assert!(is_parabolic_form(&p));
        assert_eq!(p.conjugacy.apply(&g.as_map()), p.germ.as_map());
        // 8 has no rational square root
        assert_eq!(p.leading, int(8));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn saddle_soundness(a in -2i64..3, b in -2i64..3, c in -2i64..3, lam in prop::sample::select(vec![2i64, 3, -2])) {
            let text = format!("{lam}*x + {a}*y^2 + {b}*x*y + {c}*x^2, y^2*(1 + {a}*x + {c}*y)");
            let g = LocalGerm::parse(&text, 9).unwrap();
            let (out, conj) = saddle_normal_form(&g).unwrap();
            prop_assert!(is_saddle_form(&out));
            prop_assert_eq!(conj.apply(&g.as_map()), out.as_map());
        }

        #[test]
        fn parabolic_soundness(a in -2i64..3, b in -2i64..3, c in 1i64..3) {
            let text = format!("x + {c}*x^2 + {a}*x*y + {b}*x^2*y + {a}*y^2, y^2*(1 + {b}*x)");
            let g = LocalGerm::parse(&text, 9).unwrap();
            let p = parabolic_normal_form(&g).unwrap();
            prop_assert!(is_parabolic_form(&p));
            prop_assert_eq!(p.conjugacy.apply(&g.as_map()), p.germ.as_map());
        }
    }
}
