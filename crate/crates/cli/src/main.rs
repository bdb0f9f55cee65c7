mod encode;
mod text;

use std::collections::HashMap;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use planedyn::curves::{curve_preperiodicity, dmm_report, points_at_infinity, CurveOrbitStatus, DmmCaps, PlaneCurve, SearchCaps};
use planedyn::exactnum::{bit_size, parse_rational, Place};
use planedyn::green::{bad_places, log_max_closed_form, GreenContext};
use planedyn::heights::{canonical_height, is_preperiodic};
use planedyn::infinity::{fixed_points_infinity, periodic_points_infinity, Classification, LinePoint, OrbitCaps};
use planedyn::localdyn::{
    is_parabolic_form, is_saddle_form, localize_at_infinity, parabolic_normal_form, reduce_form, remove_mu, rescaling_profile,
    saddle_normal_form, super_stable_series, LocalGerm,
};
use planedyn::maps::RegularMap;
use planedyn::polyalg::Coeff;
use planedyn::{Error, Rational};
use serde_json::{json, Value};

use encode as enc;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "planedyn", version, about = "Arithmetic and local dynamics of regular polynomial maps of the plane")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Target width of real enclosures.
    #[arg(long, global = true, env = "PLANEDYN_TOL", default_value_t = 1e-10)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Regularity, bad places and the fixed points of f at infinity.
    Classify {
        #[arg(long)]
        map: String,
        /// List points of this exact period instead of fixed points.
        #[arg(long, default_value_t = 1)]
        period: u32,
    },
    /// Local Green function G_v at an affine point `z,w` or a homogeneous point `z0,z1,z2`.
    Green {
        #[arg(long)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// `inf` or a prime.
        #[arg(long, default_value = "inf")]
        place: String,
    },
    /// Canonical height enclosure and a preperiodicity verdict.
    Height {
        #[arg(long)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 64)]
        orbit_cap: usize,
    },
    /// Exact forward orbit of a rational point.
    Orbit {
        #[arg(long)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 32)]
        steps: usize,
        #[arg(long, default_value_t = 4096)]
        bit_cap: u64,
    },
    /// Super-stable manifold series and formal normal form at a fixed point at infinity.
    StableManifold {
        #[arg(long, required_unless_present = "germ")]
        map: Option<String>,
        /// Fixed point [t:1] given by a rational t, or `inf` for [1:0].
        #[arg(long, allow_hyphen_values = true, conflicts_with = "index")]
        at: Option<String>,
        /// Index into the fixed point list printed by `classify`.
        #[arg(long)]
        index: Option<usize>,
        /// A germ `first, second` in x, y given directly.
        #[arg(long, conflicts_with = "map")]
        germ: Option<String>,
        /// Truncation order of all series.
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
    /// Points at infinity, image and forward orbit of a curve.
    Curve {
        #[arg(long)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long, default_value_t = 8)]
        iters: usize,
        #[arg(long, default_value_t = 8)]
        max_degree: u32,
    },
    /// Witness report for a curve: points at infinity, preperiodic points and curve orbit.
    Dmm {
        #[arg(long)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long, default_value_t = 64)]
        orbit_cap: usize,
        #[arg(long, default_value_t = 3)]
        height_bound: u64,
        #[arg(long, default_value_t = 8)]
        iters: usize,
        #[arg(long, default_value_t = 8)]
        max_degree: u32,
    },
}

struct Outcome {
    result: Value,
    witnesses: Value,
    caps: Value,
    inconclusive: bool,
}

struct Failure {
    err: Error,
    arg: Option<&'static str>,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure { err, arg: None }
    }
}

fn at_arg(arg: &'static str) -> impl Fn(Error) -> Failure {
    move |err| Failure { err, arg: Some(arg) }
}

fn error_module(e: &Error) -> &'static str {
    match e {
        Error::Syntax { .. } | Error::UnknownVariable { .. } => "polyalg",
        Error::NotRegular | Error::DegreeTooLow(_) | Error::BitSizeCap(_) => "maps",
        Error::ZeroInput | Error::Refinement(_) | Error::PrimeTooLarge | Error::Divisibility(_) => "exactnum",
        Error::Resonance(_) | Error::Contraction(_) | Error::LeftPolydisk(_) | Error::NotFixed(_) | Error::Superattracting => "localdyn",
        Error::Elimination(_) => "curves",
        Error::IterationCap(_) | Error::Precondition(_) => "input",
    }
}

fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

/// 2 for rejected input, 3 when a cap or an undecided computation stopped the run.
fn error_exit(e: &Error) -> u8 {
    match e {
        Error::BitSizeCap(_) | Error::IterationCap(_) | Error::Refinement(_) | Error::Contraction(_) | Error::LeftPolydisk(_) | Error::Elimination(_) => 3,
        _ => 2,
    }
}

fn parse_map(s: &str) -> Result<RegularMap, Failure> {
    RegularMap::parse(s).map_err(at_arg("--map"))
}

fn parse_curve(s: &str) -> Result<PlaneCurve, Failure> {
    PlaneCurve::parse(s).map_err(at_arg("--curve"))
}

/// Comma separated rationals, optionally wrapped in parentheses.
fn parse_coords(s: &str, allowed: &[usize]) -> Result<Vec<Rational>, Error> {
    let mut out = Vec::new();
    let mut offset = 0;
    for tok in s.split(',') {
        let lead = tok.len() - tok.trim_start_matches(|c: char| c.is_whitespace() || c == '(').len();
        let body = tok.trim_matches(|c: char| c.is_whitespace() || c == '(' || c == ')');
        match parse_rational(body) {
            Some(q) => out.push(q),
            None => return Err(Error::Syntax { pos: offset + lead, msg: format!("expected a rational number, found `{body}`") }),
        }
        offset += tok.len() + 1;
    }
    if !allowed.contains(&out.len()) {
        let want: Vec<String> = allowed.iter().map(|n| n.to_string()).collect();
        return Err(Error::Syntax { pos: s.len(), msg: format!("expected {} coordinates, found {}", want.join(" or "), out.len()) });
    }
    Ok(out)
}

fn parse_point(s: &str) -> Result<(Rational, Rational), Failure> {
    let v = parse_coords(s, &[2]).map_err(at_arg("--point"))?;
    Ok((v[0].clone(), v[1].clone()))
}

fn closed_form_bits(tol: f64) -> u32 {
    (-tol.log2()).ceil().clamp(16.0, 4096.0) as u32 + 8
}

fn classify(map: &str, period: u32) -> Result<Outcome, Failure> {
    let f = parse_map(map)?;
    let pts = if period == 1 { fixed_points_infinity(&f)? } else { periodic_points_infinity(&f, period)? };
    let total: u32 = pts.iter().map(|p| p.multiplicity).sum();
    let bad: Vec<Value> = bad_places(&f)?.into_iter().map(|p| json!(p)).collect();
    Ok(Outcome {
        result: json!({
            "map": f.to_string(),
            "regular": true,
            "degree": f.degree(),
            "bad_primes": bad,
            "period": period,
            "fixed_points": pts.iter().map(enc::fixed_point).collect::<Vec<_>>(),
        }),
        witnesses: json!({
            "top_resultant": enc::rational(f.top_resultant()),
            "multiplicity_total": total,
        }),
        caps: json!({}),
        inconclusive: false,
    })
}

fn green(map: &str, point: &str, place: &str, tol: f64) -> Result<Outcome, Failure> {
    let f = parse_map(map)?;
    let coords = parse_coords(point, &[2, 3]).map_err(at_arg("--point"))?;
    let v = Place::parse(place).map_err(at_arg("--place"))?;
    let ctx = GreenContext::new(&f, v);
    let mut closed = Value::Null;
    let value = if coords.len() == 2 {
        let pt = (coords[0].clone(), coords[1].clone());
        let value = ctx.green_value(&pt, tol)?;
        if ctx.good_reduction() {
            let cf = log_max_closed_form(&pt, v, closed_form_bits(tol));
            let slack = Rational::from_float(tol).unwrap_or_else(Rational::zero);
            closed = json!({ "value": enc::interval(&cf), "agrees": value.overlaps(&cf, &slack) });
        }
        value
    } else {
        ctx.green_homog(&[coords[0].clone(), coords[1].clone(), coords[2].clone()], tol)?
    };
    Ok(Outcome {
        result: json!({
            "place": enc::place(&v),
            "homogeneous": coords.len() == 3,
            "value": enc::interval(&value),
            "good_reduction": ctx.good_reduction(),
        }),
        witnesses: json!({ "nullstellensatz_constant": enc::rational(ctx.constant()), "closed_form": closed }),
        caps: json!({ "tol": tol }),
        inconclusive: false,
    })
}

fn height(map: &str, point: &str, orbit_cap: usize, tol: f64) -> Result<Outcome, Failure> {
    let f = parse_map(map)?;
    let pt = parse_point(point)?;
    let h = canonical_height(&f, &pt, tol)?;
    let verdict = is_preperiodic(&f, &pt, orbit_cap, tol);
    Ok(Outcome {
        result: json!({
            "point": enc::rational_point(&pt),
            "height": enc::interval(&h.value),
            "certified": h.certified,
            "verdict": enc::verdict(&verdict, enc::rational_point),
        }),
        witnesses: json!({ "support": h.support.iter().map(enc::place).collect::<Vec<_>>() }),
        caps: json!({ "tol": tol, "orbit_cap": orbit_cap }),
        inconclusive: verdict.is_unknown(),
    })
}

fn orbit(map: &str, point: &str, steps: usize, bit_cap: u64, tol: f64) -> Result<Outcome, Failure> {
    let f = parse_map(map)?;
    let start = parse_point(point)?;
    let mut seen = HashMap::new();
    let mut table = vec![start.clone()];
    let mut stop = json!({ "reason": "steps" });
    seen.insert(start.clone(), 0usize);
    let mut cur = start.clone();
    for n in 1..=steps {
        cur = f.apply(&cur);
        let bits = bit_size(&cur.0).max(bit_size(&cur.1));
        if bits > bit_cap {
            stop = json!({ "reason": "bit_cap", "step": n, "bits": bits });
            break;
        }
        table.push(cur.clone());
        if let Some(&m) = seen.get(&cur) {
            stop = json!({ "reason": "repeat", "preperiod": m, "period": n - m });
            break;
        }
        seen.insert(cur.clone(), n);
    }
    let verdict = is_preperiodic(&f, &start, steps, tol);
    Ok(Outcome {
        result: json!({
            "orbit": table.iter().map(enc::rational_point).collect::<Vec<_>>(),
            "stop": stop,
            "verdict": enc::verdict(&verdict, enc::rational_point),
        }),
        witnesses: json!({ "max_bits": table.iter().map(|p| bit_size(&p.0).max(bit_size(&p.1))).max() }),
        caps: json!({ "steps": steps, "bit_cap": bit_cap, "tol": tol }),
        inconclusive: verdict.is_unknown(),
    })
}

#[derive(Clone, Copy, PartialEq)]
enum FormKind {
    Saddle,
    Parabolic,
    None(&'static str),
}

/// φ, the reduced germ and the normal form; also returns the saddle form for numeric checks.
fn analyze<C: Coeff>(g: &LocalGerm<C>, kind: FormKind) -> Result<(Value, Option<LocalGerm<C>>), Failure> {
    let (g0, _) = remove_mu(g)?;
    let phi = super_stable_series(&g0);
    let (reduced, _) = reduce_form(&g0, &phi)?;
    let mut saddle = None;
    let form = match kind {
        FormKind::Saddle => {
            let (nf, conj) = saddle_normal_form(g)?;
            let v = json!({
                "kind": "saddle",
                "germ": enc::germ(&nf),
                "shape_verified": is_saddle_form(&nf),
                "conjugacy_invertible": conj.is_inverse_pair(),
            });
            saddle = Some(nf);
            v
        }
        FormKind::Parabolic => {
            let p = parabolic_normal_form(g)?;
            json!({
                "kind": "parabolic",
                "k": p.k,
                "leading": p.leading.to_string(),
                "germ": enc::germ(&p.germ),
                "shape_verified": is_parabolic_form(&p),
                "conjugacy_invertible": p.conjugacy.is_inverse_pair(),
            })
        }
        FormKind::None(reason) => json!({ "kind": "none", "reason": reason }),
    };
    Ok((
        json!({
            "germ": enc::germ(g),
            "mu_removed": enc::germ(&g0),
            "phi": enc::series(&phi, "y"),
            "reduced": enc::germ(&reduced),
            "normal_form": form,
        }),
        saddle,
    ))
}

fn rescaling_witness(nf: Option<LocalGerm<Rational>>) -> Value {
    match nf {
        None => Value::Null,
        Some(g) => match rescaling_profile(&g, 12, 0.05) {
            Ok(p) => json!({ "r": 0.05, "sup_error": p }),
            Err(e) => json!({ "r": 0.05, "skipped": e.to_string() }),
        },
    }
}

fn parse_line_point(s: &str) -> Result<LinePoint, Failure> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t == "[1:0]" {
        return Ok(LinePoint::Infinite);
    }
    parse_rational(t)
        .map(LinePoint::rational)
        .ok_or(Failure { err: Error::Syntax { pos: 0, msg: format!("expected `inf` or a rational number, found `{t}`") }, arg: Some("--at") })
}

fn same_point(a: &LinePoint, b: &LinePoint) -> bool {
    match (a, b) {
        (LinePoint::Infinite, LinePoint::Infinite) => true,
        (LinePoint::Finite(x), LinePoint::Finite(y)) => x.as_rational().is_some() && x.as_rational() == y.as_rational(),
        _ => false,
    }
}

fn stable_manifold(map: Option<&str>, at: Option<&str>, index: Option<usize>, germ: Option<&str>, order: usize) -> Result<Outcome, Failure> {
    let caps = json!({ "order": order });
    if let Some(text) = germ {
        let g = LocalGerm::parse(text, order).map_err(at_arg("--germ"))?;
        let lam = g.lambda().clone();
        let kind = if lam.is_one() {
            FormKind::Parabolic
        } else if lam == -Rational::one() {
            FormKind::None("multiplier -1 is a root of unity other than 1")
        } else {
            FormKind::Saddle
        };
        let (result, nf) = analyze(&g, kind)?;
        return Ok(Outcome { result, witnesses: json!({ "rescaling": rescaling_witness(nf) }), caps, inconclusive: false });
    }
    let f = parse_map(map.unwrap_or_default())?;
    let pts = fixed_points_infinity(&f)?;
    let entry = match (at, index) {
        (Some(a), _) => {
            let p = parse_line_point(a)?;
            pts.iter().find(|e| same_point(&e.point, &p)).ok_or_else(|| at_arg("--at")(Error::NotFixed(p.to_string())))?
        }
        (None, Some(i)) => pts
            .get(i)
            .ok_or_else(|| at_arg("--index")(Error::Precondition(format!("index {i} out of range; there are {} fixed points", pts.len()))))?,
        (None, None) => return Err(Error::Precondition("one of --at or --index is required".into()).into()),
    };
    let kind = match &entry.classification {
        Classification::Superattracting => FormKind::None("superattracting fixed point"),
        Classification::RootOfUnity(1) => FormKind::Parabolic,
        Classification::RootOfUnity(_) => FormKind::None("multiplier is a root of unity other than 1"),
        Classification::ExpandingPlace(_) => FormKind::Saddle,
    };
    if kind == FormKind::None("superattracting fixed point") {
        return Ok(Outcome {
            result: json!({ "point": enc::fixed_point(entry), "normal_form": { "kind": "none", "reason": "superattracting fixed point" } }),
            witnesses: json!({}),
            caps,
            inconclusive: false,
        });
    }
    let loc = localize_at_infinity(&f, &entry.point, order)?;
    let (mut result, nf) = analyze(&loc.germ, kind)?;
    result["point"] = enc::fixed_point(entry);
    result["chart"] = enc::chart(&loc.chart);
    let rescaling = rescaling_witness(nf.and_then(|g| g.to_rational()));
    Ok(Outcome { result, witnesses: json!({ "rescaling": rescaling }), caps, inconclusive: false })
}

fn curve(map: &str, curve: &str, iters: usize, max_degree: u32) -> Result<Outcome, Failure> {
    let f = parse_map(map)?;
    let c = parse_curve(curve)?;
    let div = points_at_infinity(&c)?;
    let orbit = curve_preperiodicity(&f, &c, iters, max_degree)?;
    let image = orbit.orbit.get(1).map(enc::curve);
    Ok(Outcome {
        result: json!({
            "curve": enc::curve(&c),
            "points_at_infinity": enc::divisor(&div),
            "image": image,
            "orbit": enc::curve_orbit(&orbit),
        }),
        witnesses: json!({ "degree_bound": orbit.orbit.iter().map(|c| c.degree() * f.degree()).collect::<Vec<_>>() }),
        caps: json!({ "iters": iters, "max_degree": max_degree }),
        inconclusive: matches!(orbit.status, CurveOrbitStatus::NotDetectedPreperiodic { .. }),
    })
}

fn dmm(map: &str, curve: &str, orbit_cap: usize, height_bound: u64, iters: usize, max_degree: u32, tol: f64) -> Result<Outcome, Failure> {
    let f = parse_map(map)?;
    let c = parse_curve(curve)?;
    let caps = DmmCaps {
        infinity: OrbitCaps { orbit_cap, ..OrbitCaps::default() },
        search: SearchCaps { height_bound, orbit_cap, tol: tol.max(1e-12), ..SearchCaps::default() },
        curve_iters: iters,
        curve_max_degree: max_degree,
    };
    let r = dmm_report(&f, &c, &caps)?;
    let infinity: Vec<Value> = r
        .infinity
        .iter()
        .map(|e| {
            json!({
                "point": enc::line_point(&e.point),
                "multiplicity": e.multiplicity,
                "verdict": enc::verdict(&e.verdict, enc::line_point),
                "cycle_multiplier": e.cycle_multiplier.as_ref().map(enc::algebraic),
                "classification": e.classification.as_ref().map(enc::classification),
                "eventually_superattracting": e.eventually_superattracting(),
            })
        })
        .collect();
    let undecided = matches!(r.curve_orbit.status, CurveOrbitStatus::NotDetectedPreperiodic { .. }) && r.infinity.iter().all(|e| e.verdict.is_unknown());
    Ok(Outcome {
        result: json!({
            "curve": enc::curve(&c),
            "hypothesis_witnessed": r.hypothesis_witnessed,
            "small_points_found": r.small_points_found,
            "conclusion_witnessed": r.conclusion_witnessed,
            "notes": r.notes,
        }),
        witnesses: json!({
            "points_at_infinity": enc::divisor(&r.divisor),
            "infinity_orbits": infinity,
            "preperiodic_points": r.preperiodic_points.iter().map(enc::found_point).collect::<Vec<_>>(),
            "curve_orbit": enc::curve_orbit(&r.curve_orbit),
            "consistency": r.consistency.as_ref().map(|k| json!({
                "curve": { "preperiod": k.curve.0, "period": k.curve.1 },
                "points": k.points.iter().map(|p| json!({ "preperiod": p.0, "period": p.1 })).collect::<Vec<_>>(),
                "matches": k.matches,
            })),
        }),
        caps: json!({
            "infinity_orbit_cap": caps.infinity.orbit_cap,
            "infinity_degree_cap": caps.infinity.degree_cap,
            "search_height_bound": caps.search.height_bound,
            "search_root_order": caps.search.root_order,
            "search_orbit_cap": caps.search.orbit_cap,
            "search_bit_cap": caps.search.bit_cap,
            "curve_iters": iters,
            "curve_max_degree": max_degree,
        }),
        inconclusive: undecided,
    })
}

fn input_echo(cmd: &Command, tol: f64) -> Value {
    let v = match cmd {
        Command::Classify { map, period } => json!({ "command": "classify", "map": map, "period": period }),
        Command::Green { map, point, place } => json!({ "command": "green", "map": map, "point": point, "place": place }),
        Command::Height { map, point, .. } => json!({ "command": "height", "map": map, "point": point }),
        Command::Orbit { map, point, .. } => json!({ "command": "orbit", "map": map, "point": point }),
        Command::StableManifold { map, at, index, germ, .. } => {
            json!({ "command": "stable-manifold", "map": map, "at": at, "index": index, "germ": germ })
        }
        Command::Curve { map, curve, .. } => json!({ "command": "curve", "map": map, "curve": curve }),
        Command::Dmm { map, curve, .. } => json!({ "command": "dmm", "map": map, "curve": curve }),
    };
    let mut v = v;
    v["tol"] = json!(tol);
    v
}

fn run(cmd: &Command, tol: f64) -> Result<Outcome, Failure> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(at_arg("--tol")(Error::Precondition("tolerance must be a positive real".into())));
    }
    match cmd {
        Command::Classify { map, period } => classify(map, *period),
        Command::Green { map, point, place } => green(map, point, place, tol),
        Command::Height { map, point, orbit_cap } => height(map, point, *orbit_cap, tol),
        Command::Orbit { map, point, steps, bit_cap } => orbit(map, point, *steps, *bit_cap, tol),
        Command::StableManifold { map, at, index, germ, order } => {
            stable_manifold(map.as_deref(), at.as_deref(), *index, germ.as_deref(), *order)
        }
        Command::Curve { map, curve: c, iters, max_degree } => curve(map, c, *iters, *max_degree),
        Command::Dmm { map, curve, orbit_cap, height_bound, iters, max_degree } => {
            dmm(map, curve, *orbit_cap, *height_bound, *iters, *max_degree, tol)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(&cli.command, cli.tol);
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    let mut doc = json!({ "schema_version": SCHEMA_VERSION, "input": input_echo(&cli.command, cli.tol) });
    let code = match outcome {
        Ok(o) => {
            doc["status"] = json!(if o.inconclusive { "inconclusive" } else { "ok" });
            doc["result"] = o.result;
            doc["witnesses"] = o.witnesses;
            doc["caps"] = o.caps;
            if o.inconclusive {
                3
            } else {
                0
            }
        }
        Err(fail) => {
            let pos = match &fail.err {
                Error::Syntax { pos, .. } | Error::UnknownVariable { pos, .. } => Some(*pos),
                _ => None,
            };
            eprintln!("error: {}{}", fail.arg.map(|a| format!("{a}: ")).unwrap_or_default(), fail.err);
            doc["status"] = json!("error");
            doc["error"] = json!({
                "kind": error_kind(&fail.err),
                "module": error_module(&fail.err),
                "message": fail.err.to_string(),
                "argument": fail.arg,
                "position": pos,
            });
            error_exit(&fail.err)
        }
    };
    doc["timing"] = json!({ "elapsed_ms": elapsed });
    let rendered = match cli.format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("serializable document") + "\n",
        Format::Text => text::render(&doc),
    };
    // A closed pipe downstream is not an error of ours.
    let _ = std::io::stdout().write_all(rendered.as_bytes());
    ExitCode::from(code)
}
