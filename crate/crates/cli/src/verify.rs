//! The batch verification suite.
//!
//! Checks are numbered like the acceptance list they implement. Each check is
//! a list of parts, one per measured quantity, and passes when every part
//! does.

use std::fmt::Write;
use std::time::Instant;

use farpoint_core::dynamics::{
    boundary_fixed_point, j_at_height, lft_for_line, orbit, Branch, Termination,
};
use farpoint_core::farthest::{
    apply_f, curve_j, distance_to_boundary_inf, distance_to_j, eval_g, eval_h, root_r, sample_j,
};
use farpoint_core::hexagon::{
    a0_margin, a0_triangle, alpha0, essential_closed_form, nu1, nu2, psi, stability_functions,
    EssentialTriple, Hexagon, SquareParams, SHARP_VERTEX, TOP_VERTEX,
};
use farpoint_core::surface::{farthest_oracle, GeodesicField};
use farpoint_core::{Face, GeometryError, OctahedronModel, PlanePoint, SurfacePoint, EPS};
use farpoint_service::num::{fmt9, round9};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::figures::{render, FigureId, FigureSpec};

type Outcome = Result<(usize, Vec<Part>), Box<dyn std::error::Error>>;

/// Predicted `f(p)`: one point off `J`, two on it.
pub type Predictor = fn(PlanePoint) -> Result<Vec<PlanePoint>, GeometryError>;

pub fn closed_form_predictor(p: PlanePoint) -> Result<Vec<PlanePoint>, GeometryError> {
    Ok(apply_f(p)?.points())
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub quick: bool,
    pub predictor: Predictor,
    /// Include wall times in the JSON report.
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            quick: false,
            predictor: closed_form_predictor,
            timings: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
}

impl Relation {
    fn holds(self, measured: f64, bound: f64) -> bool {
        match self {
            Self::Lt => measured < bound,
            Self::Le => measured <= bound,
            Self::Gt => measured > bound,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::Lt => "<",
            Self::Le => "<=",
            Self::Gt => ">",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Part {
    pub what: String,
    pub measured: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub passed: bool,
}

impl Part {
    fn new(what: &str, measured: f64, relation: Relation, tolerance: f64) -> Self {
        Self {
            what: what.to_string(),
            measured: round9(measured),
            relation,
            tolerance,
            passed: relation.holds(measured, tolerance),
        }
    }

    fn lt(what: &str, measured: f64, tolerance: f64) -> Self {
        Self::new(what, measured, Relation::Lt, tolerance)
    }

    fn le(what: &str, measured: f64, tolerance: f64) -> Self {
        Self::new(what, measured, Relation::Le, tolerance)
    }

    fn gt(what: &str, measured: f64, bound: f64) -> Self {
        Self::new(what, measured, Relation::Gt, bound)
    }

    fn count(what: &str, failures: usize) -> Self {
        Self::le(what, failures as f64, 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// The part that came closest to (or furthest past) its tolerance.
    pub measured: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub parts: Vec<Part>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub mode: &'static str,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

fn closeness(p: &Part) -> f64 {
    match p.relation {
        Relation::Gt => {
            if p.measured > p.tolerance {
                -1.0 / (1.0 + p.measured - p.tolerance)
            } else {
                1.0 + p.tolerance - p.measured
            }
        }
        _ if p.tolerance > 0.0 => p.measured / p.tolerance,
        _ => {
            if p.measured <= 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        }
    }
}

fn finish(
    id: u8,
    name: &'static str,
    samples: usize,
    parts: Vec<Part>,
    seconds: f64,
) -> CheckResult {
    let worst = parts
        .iter()
        .max_by(|a, b| closeness(a).total_cmp(&closeness(b)))
        .cloned()
        .unwrap_or_else(|| Part::le("empty", 0.0, 0.0));
    CheckResult {
        id,
        name,
        passed: parts.iter().all(|p| p.passed),
        measured: worst.measured,
        tolerance: worst.tolerance,
        samples,
        parts,
        seconds: Some(seconds),
    }
}

/// Radical inverse of `i` in `base`.
pub fn halton(mut i: u64, base: u64) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// A uniform sample of `T` from a point of the unit square.
pub fn square_to_t(mut u: f64, mut v: f64) -> PlanePoint {
    if u + v > 1.0 {
        u = 1.0 - u;
        v = 1.0 - v;
    }
    SHARP_VERTEX * u + TOP_VERTEX * v
}

fn square_to_a0(mut u: f64, mut v: f64) -> PlanePoint {
    if u + v > 1.0 {
        u = 1.0 - u;
        v = 1.0 - v;
    }
    let t = a0_triangle();
    t[0] + (t[1] - t[0]) * u + (t[2] - t[0]) * v
}

/// The first `n` Halton(2, 3) points of `T` farther than `band` from `J`.
pub fn halton_points_off_j(n: usize, band: f64) -> Vec<PlanePoint> {
    (1..)
        .map(|i| square_to_t(halton(i, 2), halton(i, 3)))
        .filter(|&p| distance_to_j(p) > band)
        .take(n)
        .collect()
}

fn random_in_t(rng: &mut ChaCha8Rng) -> PlanePoint {
    loop {
        let p = square_to_t(rng.random(), rng.random());
        if distance_to_boundary_inf(p) > EPS && p.y > EPS {
            return p;
        }
    }
}

fn face0(p: PlanePoint) -> SurfacePoint {
    SurfacePoint::from_barycentric(Face::REFERENCE, barycentric(p))
}

fn barycentric(p: PlanePoint) -> [f64; 3] {
    // Chart vertices are the cube roots of unity.
    let r = farpoint_core::surface::ROOTS;
    let d = (r[1] - r[0]).cross(r[2] - r[0]);
    let l1 = (p - r[0]).cross(r[2] - r[0]) / d;
    let l2 = (r[1] - r[0]).cross(p - r[0]) / d;
    [1.0 - l1 - l2, l1, l2]
}

fn surface_distance(a: &SurfacePoint, b: &SurfacePoint) -> Result<f64, GeometryError> {
    GeodesicField::new(*a).distance(b)
}

fn cone_diameter() -> Outcome {
    let model = OctahedronModel::build();
    let mut err: f64 = 0.0;
    for axis in 0..3 {
        let v = SurfacePoint::vertex(Face::REFERENCE, axis);
        let d = model.geodesic_distance(&v, &v.antipode())?;
        err = err.max((d - 3.0).abs());
    }
    Ok((3, vec![Part::lt("|d(v, -v) - 3|", err, 1e-9)]))
}

fn oracle_agreement(opts: &VerifyOptions) -> Outcome {
    let h = 0.01;
    let n = if opts.quick { 30 } else { 200 };
    let (mut loc, mut val, mut multi) = (0.0_f64, 0.0_f64, 0);
    for p in halton_points_off_j(n, 0.01) {
        let predicted = (opts.predictor)(p)?;
        let hex = Hexagon::new(p)?;
        let back = alpha0().invert();
        let oracle = farthest_oracle(&face0(p), h)?;
        if oracle.clusters.len() != 1 {
            multi += 1;
        }
        let best = &oracle.clusters[0];
        let (mut l, mut v) = (f64::INFINITY, f64::INFINITY);
        for f in predicted {
            let q = back.apply(f);
            l = l.min(surface_distance(&best.point, &psi(q))?);
            v = v.min((oracle.value - hex.mu(q)).abs());
        }
        loc = loc.max(l);
        val = val.max(v);
    }
    Ok((
        n,
        vec![
            Part::count("starts with more than one maximizer cluster", multi),
            Part::le("max distance from cluster to predicted point", loc, 2.0 * h),
            Part::le("max |oracle value - mu_p(predicted)|", val, 2.0 * h),
        ],
    ))
}

/// Samples of `J` below the top, where its two maximizers are more than `2h` apart.
pub fn j_samples_for_oracle(n: usize) -> Vec<PlanePoint> {
    let r = root_r();
    sample_j(n, r + 0.9 * (0.25 - r))
}

fn two_valued_locus(opts: &VerifyOptions) -> Outcome {
    let h = 0.01;
    let n = if opts.quick { 8 } else { 50 };
    let (mut gap, mut loc) = (0.0_f64, 0.0_f64);
    for p in j_samples_for_oracle(n) {
        let hex = Hexagon::new(p)?;
        let a = essential_closed_form(EssentialTriple::T025, p);
        let b = essential_closed_form(EssentialTriple::T235, p);
        gap = gap.max((hex.mu(a) - hex.mu(b)).abs());
        let oracle = farthest_oracle(&face0(p), h)?;
        let top: Vec<SurfacePoint> = oracle.clusters.iter().take(2).map(|c| c.point).collect();
        for q in [a, b] {
            let target = psi(q);
            let mut d = f64::INFINITY;
            for c in &top {
                d = d.min(surface_distance(c, &target)?);
            }
            loc = loc.max(d);
        }
    }
    Ok((
        n,
        vec![
            Part::lt("max |mu_p((025)) - mu_p((235))|", gap, 1e-9),
            Part::le(
                "max distance from predicted point to top-two clusters",
                loc,
                2.0 * h,
            ),
        ],
    ))
}

fn gh_certificates() -> Outcome {
    let g_half = (eval_g(PlanePoint::new(0.5, 0.0)) + 1.0 / 3.0).abs();
    let on_j = sample_j(100, 0.25 - 1e-9);
    let h_j = on_j.iter().map(|&p| eval_h(p).abs()).fold(0.0, f64::max);
    let mut boundary = Vec::new();
    for i in 0..25 {
        let t = (i as f64 + 0.5) / 25.0;
        boundary.push(PlanePoint::ORIGIN.lerp(TOP_VERTEX, t));
        boundary.push(SHARP_VERTEX.lerp(TOP_VERTEX, t));
    }
    let h_b = boundary
        .iter()
        .map(|&p| eval_h(p).abs())
        .fold(0.0, f64::max);
    let (mut wrong, mut tested) = (0, 0);
    for i in 0..60 {
        for j in 0..60 {
            let p = PlanePoint::new(
                (i as f64 + 0.5) / 60.0,
                (j as f64 + 0.5) / 60.0 * TOP_VERTEX.y,
            );
            let inside = p.y < SQRT3 * p.x && p.y < (1.0 - p.x) / SQRT3;
            if !inside || distance_to_j(p) <= 0.01 || distance_to_boundary_inf(p) <= 0.01 {
                continue;
            }
            tested += 1;
            let left = p.x < j_at_height(p.y).x;
            let g = eval_g(p);
            if (left && g <= 0.0) || (!left && g >= 0.0) {
                wrong += 1;
            }
        }
    }
    Ok((
        1 + on_j.len() + boundary.len() + tested,
        vec![
            Part::lt("|G(1/2, 0) + 1/3|", g_half, 1e-12),
            Part::lt("max |H| on J", h_j, 1e-9),
            Part::lt("max |H| on the boundary at infinity", h_b, 1e-9),
            Part::count("grid points with G of the wrong sign", wrong),
        ],
    ))
}

const SQRT3: f64 = farpoint_core::SQRT_3;

fn factorization() -> Outcome {
    let (mut disc, mut nonpos) = (0.0_f64, 0);
    for i in 0..50 {
        for j in 0..50 {
            let s = SquareParams::new(i as f64 / 49.0, j as f64 / 49.0);
            for pair in stability_functions(s).all() {
                disc = disc.max(pair.discrepancy());
            }
            if nu1(s) <= 0.0 || nu2(s) <= 0.0 {
                nonpos += 1;
            }
        }
    }
    let anchor = (stability_functions(SquareParams::new(0.5, 0.5))
        .t0235
        .factored
        - 3.0)
        .abs();
    Ok((
        2500,
        vec![
            Part::lt("max |hexagon form - factored form|", disc, 1e-9),
            Part::count("grid points with nu1 or nu2 not positive", nonpos),
            Part::le("|T0235(1/2, 1/2) - 3|", anchor, 0.0),
        ],
    ))
}

fn essential_vertices() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut err, mut margin) = (0.0_f64, f64::INFINITY);
    let (mut c012, mut c345) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let n = 500;
    for _ in 0..n {
        let p = random_in_t(&mut rng);
        let hex = Hexagon::new(p)?;
        let mut v = Vec::new();
        for t in EssentialTriple::ALL {
            let closed = essential_closed_form(t, p);
            err = err.max(closed.dist(hex.triple_center(t)?));
            margin = margin.min(a0_margin(closed));
            v.push(closed);
        }
        if v[0].dist(v[1]) > EPS {
            c012 = c012.max(hex.mu(v[0]) - hex.mu(v[1]));
        }
        if v[3].dist(v[2]) > EPS {
            c345 = c345.max(hex.mu(v[3]) - hex.mu(v[2]));
        }
    }
    Ok((
        n,
        vec![
            Part::lt("max |closed form - circumcenter|", err, 1e-9),
            Part::gt("min margin inside A0", margin, -1e-9),
            Part::lt("max mu_p((012)) - mu_p((025))", c012, 0.0),
            Part::lt("max mu_p((345)) - mu_p((235))", c345, 0.0),
        ],
    ))
}

fn hexagon_plan_bridge() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 500;
    let mut err: f64 = 0.0;
    for _ in 0..n {
        let p = random_in_t(&mut rng);
        let q = square_to_a0(rng.random(), rng.random());
        let hex = Hexagon::new(p)?;
        let d = surface_distance(&face0(p), &psi(q))?;
        err = err.max((hex.mu(q) - d).abs());
    }
    Ok((n, vec![Part::lt("max |mu_p(q) - d(p, Psi(q))|", err, 1e-8)]))
}

/// Starts for the random-orbit part of the dynamics check.
pub fn orbit_starts(n: usize) -> Vec<PlanePoint> {
    halton_points_off_j(n, 0.01)
}

fn dynamics() -> Outcome {
    let mut inv: f64 = 0.0;
    for k in 0..50 {
        let y = (k as f64 + 0.5) / 50.0 * TOP_VERTEX.y;
        let m = lft_for_line(y, Branch::Left)
            .lft()
            .compose(&lft_for_line(y, Branch::Right).lft());
        let scale = m.a.abs().max(m.d.abs());
        inv = inv.max(m.b.abs().max(m.c.abs()).max((m.a - m.d).abs()) / scale);
    }
    let mut mult: f64 = 0.0;
    for k in 0..100 {
        let y = (k as f64 + 0.5) / 100.0 * TOP_VERTEX.y;
        for b in [Branch::Left, Branch::Right] {
            mult = mult.max(boundary_fixed_point(y, b)?.1.abs());
        }
    }
    let o = orbit(PlanePoint::new(0.5, 0.0), 3, 0.0)?;
    let got: Vec<String> = o.points[1..]
        .iter()
        .map(|p| format!("{} {}", fmt9(p.x), fmt9(p.y)))
        .collect();
    let mismatches = got
        .iter()
        .zip(["0.666666667 0", "0.8 0", "0.888888889 0"])
        .filter(|(a, b)| a != b)
        .count();

    let tol = 1e-6;
    let starts = orbit_starts(100);
    let (mut slow, mut dist, mut worst) = (0, 0.0_f64, 0);
    for &p in &starts {
        let o = orbit(p, 200, tol)?;
        if o.terminated_by != Termination::Converged {
            slow += 1;
        }
        worst = worst.max(o.iterations());
        dist = dist.max(distance_to_boundary_inf(o.last()));
    }
    Ok((
        50 + 200 + 1 + starts.len(),
        vec![
            Part::lt("max LFT composition error (relative)", inv, 1e-9),
            Part::lt("max |multiplier| at boundary fixed points", mult, 1.0),
            Part::count("y = 0 orbit mismatches at 9 digits", mismatches),
            Part::count("orbits not converged within 200 iterations", slow),
            Part::le("max iterations used", worst as f64, 200.0),
            Part::lt("max final distance to the boundary at infinity", dist, tol),
        ],
    ))
}

fn root_and_curve() -> Outcome {
    let r = root_r();
    let residual = ((r - 1.0) * r - 4.0) * r + 1.0;
    let radicand = (2.0 + r) * (5.0 - 2.0 * r) * (1.0 - 4.0 * r);
    Ok((
        1,
        vec![
            Part::lt("|r^3 - r^2 - 4r + 1|", residual.abs(), 1e-13),
            Part::le("|r - 0.239123|", (r - 0.239123).abs(), 5e-7),
            Part::lt(
                "|radicand(r) - (1 - r)^3|",
                (radicand - (1.0 - r).powi(3)).abs(),
                1e-10,
            ),
            Part::lt("|curve_J(r)|", curve_j(r)?.abs(), 1e-10),
        ],
    ))
}

fn determinism() -> Outcome {
    let mut differing = 0;
    let mut n = 0;
    for id in FigureId::ALL {
        let spec = FigureSpec::new(id);
        n += 1;
        if render(&spec)? != render(&spec)? {
            differing += 1;
        }
    }
    let q = face0(PlanePoint::new(0.3, 0.1));
    let json = || -> Result<Vec<String>, Box<dyn std::error::Error>> {
        use farpoint_service::schema;
        Ok(vec![
            serde_json::to_string(&schema::point_response(&q, Some(20)).map_err(|e| e.message)?)?,
            serde_json::to_string(&schema::curve_j_response(200).map_err(|e| e.message)?)?,
            serde_json::to_string(&schema::limit_set_response())?,
        ])
    };
    let (a, b) = (json()?, json()?);
    n += a.len();
    differing += a.iter().zip(&b).filter(|(x, y)| x != y).count();
    Ok((
        n,
        vec![Part::count("outputs differing between two runs", differing)],
    ))
}

pub const CHECK_NAMES: [&str; 10] = [
    "cone_diameter",
    "oracle_agreement",
    "two_valued_locus",
    "gh_certificates",
    "factorization",
    "essential_vertices",
    "hexagon_plan_bridge",
    "dynamics",
    "root_and_curve",
    "determinism",
];

/// Runs check `id` (1 to 10).
pub fn run_check(opts: &VerifyOptions, id: u8) -> Option<CheckResult> {
    let start = Instant::now();
    let out = match id {
        1 => cone_diameter(),
        2 => oracle_agreement(opts),
        3 => two_valued_locus(opts),
        4 => gh_certificates(),
        5 => factorization(),
        6 => essential_vertices(),
        7 => hexagon_plan_bridge(),
        8 => dynamics(),
        9 => root_and_curve(),
        10 => determinism(),
        _ => return None,
    };
    let (samples, parts) =
        out.unwrap_or_else(|e| (0, vec![Part::count(&format!("error: {e}"), 1)]));
    Some(finish(
        id,
        CHECK_NAMES[id as usize - 1],
        samples,
        parts,
        start.elapsed().as_secs_f64(),
    ))
}

pub fn run(opts: &VerifyOptions) -> VerifyReport {
    let checks: Vec<CheckResult> = (1..=10).filter_map(|id| run_check(opts, id)).collect();
    VerifyReport {
        mode: if opts.quick { "quick" } else { "full" },
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

impl VerifyReport {
    pub fn to_json(&self, timings: bool) -> String {
        let mut r = self.clone();
        if !timings {
            for c in &mut r.checks {
                c.seconds = None;
            }
        }
        serde_json::to_string_pretty(&r).unwrap_or_default() + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(
                s,
                "[{}] {:>2} {:<20} measured {} tol {} ({} samples, {:.1} s)",
                if c.passed { "PASS" } else { "FAIL" },
                c.id,
                c.name,
                fmt9(c.measured),
                fmt9(c.tolerance),
                c.samples,
                c.seconds.unwrap_or(0.0)
            );
            for p in &c.parts {
                let _ = writeln!(
                    s,
                    "        {} {}: {} {} {}",
                    if p.passed { "ok  " } else { "FAIL" },
                    p.what,
                    fmt9(p.measured),
                    p.relation.symbol(),
                    fmt9(p.tolerance)
                );
            }
        }
        let _ = writeln!(
            s,
            "{} ({} mode)",
            if self.passed {
                "all checks passed"
            } else {
                "verification FAILED"
            },
            self.mode
        );
        s
    }
}
