//! Algebraic numbers given by an irreducible minimal polynomial and an
//! isolating disc for one of its roots.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::cyclotomic::{cyclotomic, inverse_phi};
use super::factor::factor_over_q;
use super::fixed::CFx;
use super::numfield::{NfElem, NumberField};
use super::primes::{int_valuation, prime_divisors};
use super::roots::{isolate_roots, CRat, RootEnclosure};
use super::{fmt_rational, Place, Rational, UniPoly};
use crate::error::{Error, Result};

const DEFAULT_BITS: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicNumber {
    minpoly: UniPoly,
    index: usize,
    root: RootEnclosure,
}

impl AlgebraicNumber {
    pub fn from_rational(q: &Rational) -> Self {
        let minpoly = UniPoly::new(vec![-q.clone(), Rational::one()]).primitive();
        AlgebraicNumber {
            minpoly,
            index: 0,
            root: RootEnclosure { center: CRat::real(q.clone()), radius: Rational::zero(), is_real: true },
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }

    /// The `index`-th root (in (re, im) order) of an irreducible polynomial.
    pub fn from_minpoly(m: &UniPoly, index: usize) -> Result<Self> {
        let fs = factor_over_q(m)?;
        if fs.len() != 1 || fs[0].1 != 1 {
            return Err(Error::Precondition(format!("{m} is not irreducible over Q")));
        }
        Self::from_irreducible(m, index)
    }

    /// As `from_minpoly`, trusting the caller that `m` is irreducible.
    pub fn from_irreducible(m: &UniPoly, index: usize) -> Result<Self> {
        let m = m.primitive();
        let roots = isolate_roots(&m, DEFAULT_BITS)?;
        let root = roots
            .get(index)
            .cloned()
            .ok_or_else(|| Error::Precondition(format!("root index {index} out of range for {m}")))?;
        Ok(AlgebraicNumber { minpoly: m, index, root })
    }

    /// Identifies the algebraic number given by `elem` under the embedding of
    /// its field that sends t to `emb`.
    pub fn from_element(elem: &NfElem, emb: &RootEnclosure) -> Result<Self> {
        if let Some(q) = elem.as_rational() {
            return Ok(Self::from_rational(&q));
        }
        let cp = elem.charpoly();
        let mut bits = 64u32;
        let field_roots_cache = elem.field().embeddings(bits)?;
        let mut emb = pick_matching(&field_roots_cache, emb).unwrap_or_else(|| emb.clone());
        for _ in 0..6 {
            let prec = bits + 32;
            let value = elem.embed(&emb, prec).clone();
            let mut hits = Vec::new();
            for (h, _) in factor_over_q(&cp)? {
                for (i, r) in isolate_roots(&h, bits)?.into_iter().enumerate() {
                    if box_meets_disc(&value, &r) {
                        hits.push((h.clone(), i, r));
                    }
                }
            }
            if hits.len() == 1 {
                let (h, index, root) = hits.pop().unwrap();
                return Ok(AlgebraicNumber { minpoly: h, index, root });
            }
            bits *= 2;
            let finer = elem.field().embeddings(bits)?;
            emb = pick_matching(&finer, &emb).ok_or_else(|| Error::Refinement("lost track of an embedding".into()))?;
        }
        Err(Error::Refinement(format!("could not identify the conjugate of {elem}")))
    }

    pub fn minpoly(&self) -> &UniPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn embedding_index(&self) -> usize {
        self.index
    }

    pub fn isolating_disc(&self) -> &RootEnclosure {
        &self.root
    }

    pub fn is_zero(&self) -> bool {
        self.minpoly.deg() == 1 && self.minpoly.coeff(0).is_zero()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        (self.minpoly.deg() == 1).then(|| -self.minpoly.coeff(0) / self.minpoly.coeff(1))
    }

    /// All conjugates as pairwise disjoint discs of radius at most 2^-bits.
    pub fn conjugates(&self, bits: u32) -> Result<Vec<RootEnclosure>> {
        isolate_roots(&self.minpoly, bits)
    }

    /// This root refined to radius at most 2^-bits.
    pub fn refine(&self, bits: u32) -> Result<RootEnclosure> {
        let all = self.conjugates(bits)?;
        pick_matching(&all, &self.root).ok_or_else(|| Error::Refinement("ambiguous refinement".into()))
    }

    /// The number field Q(a) with a as generator.
    pub fn field(&self) -> Result<std::sync::Arc<NumberField>> {
        NumberField::new(&self.minpoly)
    }
}

fn box_meets_disc(b: &CFx, r: &RootEnclosure) -> bool {
    let iv = |lo: &BigInt, p: u32| Rational::new(lo.clone(), BigInt::one() << p as usize);
    let p = b.re.prec;
    let (rl, rh) = (iv(&b.re.lo, p), iv(&b.re.hi, p));
    let (il, ih) = (iv(&b.im.lo, p), iv(&b.im.hi, p));
    let re = r.re_interval();
    let im = r.im_interval();
    rl <= *re.hi() && *re.lo() <= rh && il <= *im.hi() && *im.lo() <= ih
}

/// The unique disc of `set` meeting `old`, if unique.
pub fn pick_matching(set: &[RootEnclosure], old: &RootEnclosure) -> Option<RootEnclosure> {
    let hits: Vec<&RootEnclosure> = set
        .iter()
        .filter(|r| {
            let s = &r.radius + &old.radius;
            r.center.sub(&old.center).abs2() <= &s * &s
        })
        .collect();
    (hits.len() == 1).then(|| hits[0].clone())
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", fmt_rational(&q));
        }
        let z = self.root.approx();
        write!(f, "root #{} of {} (~{:.6}{:+.6}i)", self.index, self.minpoly, z.re, z.im)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootOfUnity {
    Yes(u64),
    No,
}

/// Exact test: the minimal polynomial must be a cyclotomic polynomial Φ_n
/// with φ(n) equal to its degree.
pub fn is_root_of_unity(a: &AlgebraicNumber) -> RootOfUnity {
    let m = a.minpoly.monic();
    if m.coeffs().iter().any(|c| !c.is_integer()) {
        return RootOfUnity::No;
    }
    for n in inverse_phi(m.deg() as u64) {
        if cyclotomic(n) == m {
            return RootOfUnity::Yes(n);
        }
    }
    RootOfUnity::No
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpansionWitness {
    /// A complex embedding certified to lie outside the closed unit disc.
    Embedding(RootEnclosure),
    /// The Newton polygon at p has a segment of slope `-valuation` with
    /// valuation < 0, so some extension of |.|_p gives |a| = p^(-valuation).
    NewtonPolygon { valuation: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandingPlace {
    pub place: Place,
    pub witness: ExpansionWitness,
}

/// Smallest root valuation at p read off the Newton polygon of an integer polynomial.
fn min_root_valuation(m: &[BigInt], p: u64) -> Option<Rational> {
    let n = m.len() - 1;
    let vn = int_valuation(&m[n], p)?;
    (0..n)
        .filter_map(|i| int_valuation(&m[i], p).map(|vi| Rational::new(BigInt::from(vi - vn), BigInt::from((n - i) as i64))))
        .min()
}

/// A place where |a|_v > 1 for some extension of v, or None exactly when a is
/// zero or a root of unity.
pub fn find_expanding_place(a: &AlgebraicNumber) -> Option<ExpandingPlace> {
    if a.is_zero() || is_root_of_unity(a) != RootOfUnity::No {
        return None;
    }
    let mut bits = DEFAULT_BITS;
    let ints = a.minpoly.primitive_int();
    let lc = ints.last().unwrap().clone();
    let finite = || -> Option<ExpandingPlace> {
        for p in prime_divisors(&lc).ok()? {
            if let Some(v) = min_root_valuation(&ints, p) {
                if v.is_negative() {
                    return Some(ExpandingPlace { place: Place::Finite(p), witness: ExpansionWitness::NewtonPolygon { valuation: v } });
                }
            }
        }
        None
    };
    for _ in 0..8 {
        let conj = match a.conjugates(bits) {
            Ok(c) => c,
            Err(_) => break,
        };
        if let Some(r) = conj.into_iter().find(|r| r.modulus_exceeds_one()) {
            return Some(ExpandingPlace { place: Place::Archimedean, witness: ExpansionWitness::Embedding(r) });
        }
        if !lc.abs().is_one() {
            return finite();
        }
        bits *= 2;
    }
    finite()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn alg(c: &[i64], i: usize) -> AlgebraicNumber {
        AlgebraicNumber::from_minpoly(&UniPoly::from_ints(c), i).unwrap()
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(is_root_of_unity(&AlgebraicNumber::from_int(1)), RootOfUnity::Yes(1));
        assert_eq!(is_root_of_unity(&AlgebraicNumber::from_int(-1)), RootOfUnity::Yes(2));
        assert_eq!(is_root_of_unity(&alg(&[1, 1, 1], 0)), RootOfUnity::Yes(3));
        assert_eq!(is_root_of_unity(&AlgebraicNumber::from_int(2)), RootOfUnity::No);
        assert_eq!(is_root_of_unity(&alg(&[1, -1, 1], 1)), RootOfUnity::Yes(6));
        // (3 + 4i)/5 has modulus one but is not a root of unity.
        assert_eq!(is_root_of_unity(&alg(&[5, -6, 5], 0)), RootOfUnity::No);
    }

    #[test]
    fn root_of_unity_power_is_one() {
        for n in [3u64, 5, 8, 12, 24] {
            let m = cyclotomic(n);
            let a = AlgebraicNumber::from_irreducible(&m, 0).unwrap();
            let k = NumberField::new(&m).unwrap();
            assert_eq!(is_root_of_unity(&a), RootOfUnity::Yes(n));
            assert!(NfElem::generator(&k).pow(n).is_one());
        }
    }

    #[test]
    fn expanding_places() {
        let e = find_expanding_place(&AlgebraicNumber::from_int(3)).unwrap();
        assert_eq!(e.place, Place::Archimedean);
        let e = find_expanding_place(&AlgebraicNumber::from_rational(&rat(1, 2))).unwrap();
        assert_eq!(e.place, Place::Finite(2));
        assert!(find_expanding_place(&AlgebraicNumber::from_int(-1)).is_none());
        let e = find_expanding_place(&alg(&[5, -6, 5], 0)).unwrap();
        assert_eq!(e.place, Place::Finite(5));
        let e = find_expanding_place(&AlgebraicNumber::from_rational(&rat(2, 3))).unwrap();
        assert_eq!(e.place, Place::Finite(3));
        assert_eq!(e.witness, ExpansionWitness::NewtonPolygon { valuation: int(-1) });
    }

    #[test]
    fn conjugates_of_examples() {
        let c = alg(&[-2, 0, 1], 0).conjugates(40).unwrap();
        assert!((c[0].approx().re + 1.4142136).abs() < 1e-7 && (c[1].approx().re - 1.4142136).abs() < 1e-7);
        let c = alg(&[1, 0, 1], 0).conjugates(40).unwrap();
        assert!(c[0].approx().im < 0.0 && c[1].approx().im > 0.0);
        assert_eq!(c[0].center.re, c[1].center.re);
    }

    #[test]
    fn element_identification() {
        let m = UniPoly::from_ints(&[-2, 0, 1]);
        let k = NumberField::new(&m).unwrap();
        let emb = k.embeddings(64).unwrap();
        let x = NfElem::new(&k, &UniPoly::from_ints(&[1, 1]));
        let a = AlgebraicNumber::from_element(&x, &emb[1]).unwrap();
        assert_eq!(a.minpoly(), &UniPoly::from_ints(&[-1, -2, 1]));
        assert!((a.isolating_disc().approx().re - 2.4142135).abs() < 1e-6);
    }

    #[test]
    fn kronecker_completeness() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut seen = 0;
        while seen < 1000 {
            let q = rat(rng.gen_range(-10_000..10_000), rng.gen_range(1..10_000));
            if q.is_zero() || q.abs().is_one() {
                continue;
            }
            seen += 1;
            assert!(find_expanding_place(&AlgebraicNumber::from_rational(&q)).is_some(), "{q}");
        }
    }

    proptest! {
        #[test]
        fn rational_root_of_unity_only_pm_one(n in -50i64..50, d in 1i64..50) {
            let q = rat(n, d);
            prop_assume!(!q.is_zero());
            let r = is_root_of_unity(&AlgebraicNumber::from_rational(&q));
            prop_assert_eq!(r != RootOfUnity::No, q.abs().is_one());
        }
    }
}
