//! Acceptance criteria, run sequentially with one PASS/FAIL line each.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use planedyn::curves::{curve_preperiodicity, dmm_report, orbit_in_field, pushforward, CurveOrbitStatus, DmmCaps, PlaneCurve};
use planedyn::exactnum::algebraic::ExpansionWitness;
use planedyn::exactnum::cyclotomic::cyclotomic;
use planedyn::exactnum::{int, rat, AlgebraicNumber, NfElem, NumberField, Place, RealInterval};
use planedyn::green::GreenContext;
use planedyn::heights::{canonical_height, is_preperiodic, AlgebraicPoint, PreperiodicityVerdict};
use planedyn::infinity::{classify_multiplier, Classification};
use planedyn::localdyn::numeric::C64;
use planedyn::localdyn::{
    graph_pullback, parabolic_normal_form, rescaling_profile, saddle_normal_form, super_stable_series, GermSectorMap, LocalGerm,
    SectorParams, VerticalGraphSample,
};
use planedyn::maps::RegularMap;
use planedyn::polyalg::TruncSeries;
use planedyn::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn map(s: &str) -> RegularMap {
    RegularMap::parse(s).unwrap()
}

fn random_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    rat(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

fn random_point(rng: &mut ChaCha8Rng, num: i64, den: i64) -> (Rational, Rational) {
    (random_rational(rng, num, den), random_rational(rng, num, den))
}

fn tol_rat(t: f64) -> Rational {
    Rational::from_float(t).unwrap()
}

fn ln_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        n.abs().to_f64().unwrap().ln()
    } else {
        let shift = bits - 64;
        (n.abs() >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn green_invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let places = [Place::Archimedean, Place::finite(2).unwrap(), Place::finite(3).unwrap(), Place::finite(5).unwrap()];
    let slack = tol_rat(1e-8);
    let mut checks = 0;
    for text in ["z^2, w^2", "z^2 + w, w^2 + z", "z^2 - w + 1, 2*w^2 + z"] {
        let f = map(text);
        let d = int(f.degree() as i64);
        for _ in 0..50 {
            let pt = random_point(&mut rng, 12, 9);
            let img = f.apply(&pt);
            for v in places {
                let ctx = GreenContext::new(&f, v);
                let a = ctx.green_value(&img, 1e-8).map_err(|e| e.to_string())?;
                let b = ctx.green_value(&pt, 1e-8).map_err(|e| e.to_string())?.scale(&d);
                ensure!(a.overlaps(&b, &slack), "{text} at {v}, point {pt:?}: {a} vs {b}");
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} enclosure pairs overlap"))
}

fn good_reduction_closed_form() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f = map("z^2, w^2");
    let slack = tol_rat(1e-10);
    let mut checks = 0;
    for _ in 0..100 {
        let pt = random_point(&mut rng, 200, 60);
        let mut primes: Vec<u64> = vec![2, 3, 5, 7];
        for q in [&pt.0, &pt.1] {
            for n in [q.numer(), q.denom()] {
                let mut m = n.abs().to_u64().unwrap();
                let mut p = 2;
                while m > 1 {
                    if m % p == 0 {
                        primes.push(p);
                        while m % p == 0 {
                            m /= p;
                        }
                    }
                    p += 1;
                }
            }
        }
        primes.sort_unstable();
        primes.dedup();
        let mut places = vec![Place::Archimedean];
        places.extend(primes.iter().map(|&p| Place::finite(p).unwrap()));
        for v in places {
            let g = GreenContext::new(&f, v).green_value(&pt, 1e-10).map_err(|e| e.to_string())?;
            // log max{1, |z|_v, |w|_v}, with |.|_v computed here from valuations
            let abs_v = |q: &Rational| -> Rational {
                match v.prime() {
                    None => q.abs(),
                    Some(p) => {
                        if q.is_zero() {
                            return int(0);
                        }
                        let bp = BigInt::from(p);
                        let val = |n: &BigInt| {
                            let mut n = n.clone();
                            let mut k = 0i64;
                            while n.is_multiple_of(&bp) {
                                n /= &bp;
                                k += 1;
                            }
                            k
                        };
                        let e = val(q.numer()) - val(q.denom());
                        let pe = Rational::from_integer(bp.pow(e.unsigned_abs() as u32));
                        if e >= 0 {
                            pe.recip()
                        } else {
                            pe
                        }
                    }
                }
            };
            let m = Rational::one().max(abs_v(&pt.0)).max(abs_v(&pt.1));
            let oracle = m.to_f64().unwrap().ln();
            let o = RealInterval::new(tol_rat(oracle - 1e-12), tol_rat(oracle + 1e-12));
            ensure!(g.overlaps(&o, &slack) && g.width_f64() <= 1e-10, "{v} at {pt:?}: {g} vs {oracle}");
            checks += 1;
        }
    }
    Ok(format!("{checks} place values match"))
}

fn height_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = map("z^2, w^2");
    let mut literal_mismatch = 0;
    for _ in 0..100 {
        let pt = random_point(&mut rng, 1000, 1000);
        let h = canonical_height(&f, &pt, 1e-9).map_err(|e| e.to_string())?;
        // Weil height of [1 : z : w] from coprime integer coordinates
        let l = pt.0.denom().lcm(pt.1.denom());
        let zl = pt.0.numer() * (&l / pt.0.denom());
        let wl = pt.1.numer() * (&l / pt.1.denom());
        let big = l.clone().max(zl.abs()).max(wl.abs());
        let oracle = ln_big(&big);
        ensure!((h.value.mid_f64() - oracle).abs() <= 1e-8 && h.value.width_f64() <= 1e-8, "{pt:?}: {} vs {oracle}", h.value);
        let hq = |q: &Rational| ln_big(&q.numer().abs().max(q.denom().clone()));
        if (hq(&pt.0).max(hq(&pt.1)) - oracle).abs() > 1e-8 {
            literal_mismatch += 1;
        }
    }
    Ok(format!("100 samples match h([1:z:w]); max(h(z), h(w)) differs on {literal_mismatch}"))
}

fn preperiodicity_exactness() -> Check {
    let f = map("z^2, w^2");
    let diag = PlaneCurve::parse("w - z").unwrap();
    let mut count = 0;
    for n in (1..=24u64).filter(|n| 24 % n == 0) {
        let k = NumberField::new(&cyclotomic(n)).map_err(|e| e.to_string())?;
        let t = NfElem::generator(&k);
        // expected tail and cycle lengths of ζ_n under squaring
        let (mut a, mut m) = (0usize, n);
        while m % 2 == 0 {
            m /= 2;
            a += 1;
        }
        let ell = (1..=m.max(1)).find(|&l| (1u64 << l) % m == 1 % m).unwrap() as usize;
        for j in (1..=n).filter(|j| j.gcd(&n) == 1) {
            let z = t.pow(j);
            let pt = AlgebraicPoint::new(z.clone(), z.clone()).map_err(|e| e.to_string())?;
            ensure!(diag.contains(&pt), "ζ_{n}^{j} not on the diagonal");
            match orbit_in_field(&f, &pt, 64, 1 << 14) {
                PreperiodicityVerdict::Preperiodic { preperiod, period, orbit } => {
                    ensure!((preperiod, period) == (a, ell), "ζ_{n}^{j}: ({preperiod}, {period}) != ({a}, {ell})");
                    ensure!(orbit.len() == preperiod + period + 1 && orbit[preperiod + period] == orbit[preperiod], "bad witness");
                    for (i, p) in orbit.iter().enumerate() {
                        let zi = z.pow(1 << i);
                        ensure!(p.z == zi && p.w == zi, "ζ_{n}^{j}: orbit entry {i} is wrong");
                    }
                }
                other => return Err(format!("ζ_{n}^{j}: {other:?}")),
            }
            count += 1;
        }
    }
    ensure!(count == 24, "found {count} roots");
    match is_preperiodic(&f, &(int(2), int(3)), 64, 1e-10) {
        PreperiodicityVerdict::NotPreperiodic { height_lower_bound } => {
            let bound = height_lower_bound.to_f64().unwrap();
            ensure!(bound >= 3f64.ln() - 1e-6, "lower bound {bound}");
            Ok(format!("24 roots certified, (2,3) bound {bound:.12}"))
        }
        other => Err(format!("(2,3): {other:?}")),
    }
}

fn super_stable_manifold() -> Check {
    let n = 32;
    let g = LocalGerm::parse("2*x + y^2, y^2", n).map_err(|e| e.to_string())?;
    let phi = super_stable_series(&g);
    let mut c = vec![int(0); n + 1];
    for k in 1..=5 {
        c[1 << k] = -rat(1, 1 << k);
    }
    ensure!(phi == TruncSeries::new(c, n, &int(0)), "φ = {}", phi.to_string_var("y"));
    let lhs = g.first().subst_x(&phi);
    let rhs = phi.compose(&g.second().subst_x(&phi));
    ensure!(lhs == rhs, "invariance fails");
    Ok("φ = −Σ y^(2^k)/2^k, invariance exact mod y^33".into())
}

fn saddle_germ() -> LocalGerm {
    LocalGerm::parse("2*x*(1 + y), y^2*(1 + x)", 24).unwrap()
}

fn saddle_normal_form_check() -> Check {
    let g = saddle_germ();
    let (nf, conj) = saddle_normal_form(&g).map_err(|e| e.to_string())?;
    let d = nf.d() as usize;
    for ((i, j), c) in nf.first().terms() {
        ensure!(((i, j) == (1, 0) && &c == nf.lambda()) || (i >= 2 && j >= 1), "first has x^{i} y^{j}");
    }
    for ((i, j), c) in nf.second().terms() {
        ensure!(((i, j) == (0, d) && &c == nf.kappa()) || (i >= 1 && j >= d), "second has x^{i} y^{j}");
    }
    ensure!(conj.apply(&g.as_map()) == nf.as_map(), "Φ⁻¹∘f∘Φ differs from the output");
    ensure!(conj.is_inverse_pair(), "Φ⁻¹∘Φ is not the identity");
    Ok(format!("λ = {}, κ = {}, posts and conjugacy exact", nf.lambda(), nf.kappa()))
}

fn parabolic_normal_form_check() -> Check {
    let g = LocalGerm::parse("x*(1 + y) + x^2, y^2*(1 + x)", 24).map_err(|e| e.to_string())?;
    let p = parabolic_normal_form(&g).map_err(|e| e.to_string())?;
    ensure!(p.k == 1, "k = {}", p.k);
    let k = p.k as usize;
    let first = p.germ.first();
    for j in (1..2 * k).filter(|&j| j != k) {
        for m in 1..=first.order() {
            ensure!(first.coeff(j + 1, m).is_zero(), "x^{} y^{m} survives", j + 1);
        }
    }
    for m in 1..=first.order() {
        ensure!(first.coeff(1, m).is_zero() && first.coeff(k + 1, m).is_zero(), "y-dependence at x or x^{} with y^{m}", k + 1);
    }
    ensure!(first.coeff(1, 0).is_one() && first.coeff(k + 1, 0) == p.leading, "linear or leading coefficient");
    let vertical = p.germ.vertical();
    for (j, c) in vertical.coeffs().iter().enumerate() {
        let want = if j == p.germ.d() as usize { p.germ.kappa().clone() } else { int(0) };
        ensure!(*c == want, "second(0, y) has y^{j}");
    }
    ensure!(p.conjugacy.apply(&g.as_map()) == p.germ.as_map() && p.conjugacy.is_inverse_pair(), "conjugacy");
    Ok(format!("k = 1, leading {}, forbidden and strengthened posts vanish", p.leading))
}

fn rescaling() -> Check {
    let (nf, _) = saddle_normal_form(&saddle_germ()).map_err(|e| e.to_string())?;
    let prof = rescaling_profile(&nf, 20, 0.05).map_err(|e| e.to_string())?;
    for n in 2..=20 {
        ensure!(prof[n] <= prof[n - 1], "increase at n = {n}: {} > {}", prof[n], prof[n - 1]);
    }
    ensure!(prof[20] < 1e-6, "deviation {} at n = 20", prof[20]);
    Ok(format!("deviation at n = 20 is {:.3e}", prof[20]))
}

fn graph_transform() -> Check {
    let germ = LocalGerm::parse("x + x^2, y^2*(1 + x)", 4).map_err(|e| e.to_string())?;
    let f = GermSectorMap::new(&germ, 1);
    let params = SectorParams { r: 0.04, big_r: 100.0 };
    let mut g = VerticalGraphSample::constant(C64::new(200.0, 0.0), 0.04, 32);
    let start = g.base.re;
    let mut worst_slope: f64 = 0.0;
    let mut worst_advance = f64::INFINITY;
    for step in 0..30 {
        let next = graph_pullback(&f, &g, &params).map_err(|e| format!("step {step}: {e}"))?;
        let advance = next.base.re - g.base.re;
        ensure!(next.slope <= 0.1, "step {step}: slope {}", next.slope);
        ensure!(advance >= 0.9, "step {step}: advance {advance}");
        worst_slope = worst_slope.max(next.slope);
        worst_advance = worst_advance.min(advance);
        g = next;
    }
    let total = g.base.re - start;
    ensure!(total >= 27.0, "cumulative advance {total}");
    Ok(format!("max slope {worst_slope:.2e}, min advance {worst_advance:.4}, total {total:.3}"))
}

fn curve_pipeline() -> Check {
    let f = map("z^2, w^2");
    for text in ["w - z", "w - z^2"] {
        let c = PlaneCurve::parse(text).unwrap();
        let img = pushforward(&f, &c).map_err(|e| e.to_string())?;
        ensure!(img == c, "f({text}) = {img}");
    }
    let c = PlaneCurve::parse("w - z - 1").unwrap();
    let orbit = curve_preperiodicity(&f, &c, 8, 4).map_err(|e| e.to_string())?;
    ensure!(orbit.degrees() == vec![1, 2, 4], "degrees {:?}", orbit.degrees());
    ensure!(matches!(orbit.status, CurveOrbitStatus::NotDetectedPreperiodic { .. }), "status {:?}", orbit.status);
    let r = dmm_report(&f, &PlaneCurve::parse("w - z").unwrap(), &DmmCaps::default()).map_err(|e| e.to_string())?;
    ensure!(r.hypothesis_witnessed && r.conclusion_witnessed, "flags {} {}", r.hypothesis_witnessed, r.conclusion_witnessed);
    let k = r.consistency.ok_or("no consistency record")?;
    ensure!(k.matches && k.curve == (0, 1) && !k.points.is_empty() && k.points.iter().all(|p| p.1 == 1), "consistency {k:?}");
    Ok("diagonal and parabola fixed, degrees 1, 2, 4, dmm consistent with period 1".into())
}

/// |q|_p > 1 for some p, checked by trial division of the denominator.
fn has_denominator_prime(q: &Rational, p: u64) -> bool {
    q.denom().is_multiple_of(&BigInt::from(p))
}

fn trichotomy() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut samples: Vec<Rational> = (0..500).map(|_| random_rational(&mut rng, 9, 9)).collect();
    samples.extend([int(0), int(1), int(-1), int(2), rat(1, 2), rat(2, 3)]);
    let mut tally = [0usize; 3];
    for q in &samples {
        let lam = AlgebraicNumber::from_rational(q);
        let c = classify_multiplier(&lam);
        let zero = q.is_zero();
        let unit_root = q.abs().is_one();
        let expanding = !zero && !unit_root;
        ensure!([zero, unit_root, expanding].iter().filter(|b| **b).count() == 1, "oracle overlap at {q}");
        match c {
            Classification::Superattracting => {
                ensure!(zero, "{q} called superattracting");
                tally[0] += 1;
            }
            Classification::RootOfUnity(n) => {
                ensure!(unit_root && (n == 1) == q.is_positive() && n <= 2, "{q} called a root of unity of order {n}");
                tally[1] += 1;
            }
            Classification::ExpandingPlace(e) => {
                ensure!(expanding, "{q} called expanding");
                match (e.place, e.witness) {
                    (Place::Archimedean, ExpansionWitness::Embedding(r)) => {
                        ensure!(q.abs() > int(1) && r.modulus_exceeds_one(), "{q}: bad Archimedean witness")
                    }
                    (Place::Finite(p), ExpansionWitness::NewtonPolygon { valuation }) => {
                        ensure!(has_denominator_prime(q, p) && valuation < int(0), "{q}: bad {p}-adic witness")
                    }
                    (v, w) => return Err(format!("{q}: witness {w:?} at {v}")),
                }
                tally[2] += 1;
            }
        }
    }
    let zeta3 = AlgebraicNumber::from_minpoly(&cyclotomic(3), 0).map_err(|e| e.to_string())?;
    ensure!(classify_multiplier(&zeta3) == Classification::RootOfUnity(3), "ζ3 misclassified");
    let k = NumberField::new(&cyclotomic(3)).map_err(|e| e.to_string())?;
    ensure!(NfElem::generator(&k).pow(3).is_one(), "ζ3^3 != 1");
    Ok(format!("{} samples: {} superattracting, {} root of unity, {} expanding; ζ3 order 3", samples.len() + 1, tally[0], tally[1] + 1, tally[2]))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Check); 11] = [
        ("green invariance", 30, green_invariance),
        ("good-reduction closed form", 10, good_reduction_closed_form),
        ("height oracle", 30, height_oracle),
        ("preperiodicity exactness", 10, preperiodicity_exactness),
        ("super-stable manifold", 5, super_stable_manifold),
        ("saddle normal form", 10, saddle_normal_form_check),
        ("parabolic normal form", 10, parabolic_normal_form_check),
        ("rescaling", 10, rescaling),
        ("graph transform", 30, graph_transform),
        ("curve pipeline", 60, curve_pipeline),
        ("trichotomy", 5, trichotomy),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > Duration::from_secs(*limit) => Err(format!("took {:.2}s, limit {limit}s", elapsed.as_secs_f64())),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag} [{:6.2}s / {limit}s] {name}: {detail}", i + 1, elapsed.as_secs_f64());
    }
    if failed == 0 {
        println!("acceptance: all 11 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 11 criteria fail");
        ExitCode::FAILURE
    }
}
