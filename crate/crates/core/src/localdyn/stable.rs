//! The super-stable manifold x = φ(y) and the reduced form.

use super::{Conjugacy, LocalGerm};
use crate::error::{Error, Result};
use crate::polyalg::{Coeff, TruncSeries, TruncSeries2};

/// φ with λφ(y) + μy + g(φ(y), y) = φ(second(φ(y), y)) mod y^(N+1).
pub fn super_stable_series<C: Coeff>(germ: &LocalGerm<C>) -> TruncSeries<C> {
    let n = germ.order();
    let lam_inv = germ.lambda().inv_c().expect("λ != 0 by construction");
    let g = germ.g();
    let mu_y = TruncSeries::var(n, germ.lambda()).scale(germ.mu());
    let mut phi = TruncSeries::zero(n, germ.lambda());
    // Each pass fixes one more coefficient: second(φ, y) = O(y^d).
    for _ in 0..=n {
        let s = germ.second().subst_x(&phi);
        let next = phi.compose(&s).sub(&g.subst_x(&phi)).sub(&mu_y).scale(&lam_inv);
        if next == phi {
            break;
        }
        phi = next;
    }
    phi
}

/// Conjugates by (x + φ(y), y) so that {x = 0} is invariant.
pub fn reduce_form<C: Coeff>(germ: &LocalGerm<C>, phi: &TruncSeries<C>) -> Result<(LocalGerm<C>, Conjugacy<C>)> {
    let n = germ.order();
    let x = TruncSeries2::x(n, germ.lambda());
    let y = TruncSeries2::y(n, germ.lambda());
    let p = TruncSeries2::from_y_series(phi, n);
    let conj = Conjugacy::new((x.add(&p), y.clone()), (x.sub(&p), y));
    let out = germ.conjugate(&conj)?;
    if !out.first().restrict_x0().is_zero() {
        return Err(Error::Divisibility("first component is not divisible by x".into()));
    }
    Ok((out, conj))
}

/// remove_mu followed by reduce_form with the super-stable series.
pub fn reduce<C: Coeff>(germ: &LocalGerm<C>) -> Result<(LocalGerm<C>, Conjugacy<C>)> {
    let (g1, c1) = super::remove_mu(germ)?;
    let phi = super_stable_series(&g1);
    let (g2, c2) = reduce_form(&g1, &phi)?;
    Ok((g2, c1.then(&c2)))
}
