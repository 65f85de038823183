//! The farthest-point map on `T`: the curve `J`, the sign function `G`, the
//! two branches of `f`, and the farthest-point set of a probe.

use crate::error::GeometryError;
use crate::hexagon::{
    a0_triangle, alpha0, essential_closed_form, psi, EssentialTriple, Hexagon, VertexLabel,
    SHARP_VERTEX, TOP_VERTEX,
};
use crate::planar::{PlanePoint, EPS, SQRT_3};
use crate::surface::{fold_to_fundamental, in_fundamental_domain, Face, SurfacePoint, Symmetry};

/// `|H|` below this (inside the x-window of `J`) counts as lying on `J`.
pub const TAU_J: f64 = 1e-9;

fn cubic(x: f64) -> f64 {
    ((x - 1.0) * x - 4.0) * x + 1.0
}

/// The real root of `x^3 - x^2 - 4x + 1` in `(0, 1)`, where `J` meets the bottom edge.
pub fn root_r() -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    // cubic(0) > 0 > cubic(1)
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if cubic(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..3 {
        let d = (3.0 * x - 2.0) * x - 4.0;
        x -= cubic(x) / d;
    }
    x
}

/// Height of `J` above `x`, for `x ∈ [r, 1/4)`.
pub fn curve_j(x: f64) -> Result<f64, GeometryError> {
    if !(x >= root_r() && x < 0.25) {
        return Err(GeometryError::OutOfDomain(x));
    }
    let radicand = (2.0 + x) * (5.0 - 2.0 * x) * (1.0 - 4.0 * x);
    Ok((1.0 - x - radicand.cbrt()) / SQRT_3)
}

/// Points of `J` at `n` abscissae spaced uniformly on `[r, x_max]`.
pub fn sample_j(n: usize, x_max: f64) -> Vec<PlanePoint> {
    let r = root_r();
    (0..n)
        .map(|i| {
            let t = if n > 1 {
                i as f64 / (n - 1) as f64
            } else {
                0.0
            };
            let x = r + t * (x_max - r);
            PlanePoint::new(x, curve_j(x).unwrap_or(0.0))
        })
        .collect()
}

pub fn eval_h(p: PlanePoint) -> f64 {
    let (x, y) = (p.x, p.y);
    let s = SQRT_3;
    let c = [
        (((3.0 * x - 6.0) * x - 9.0) * x + 15.0) * x * x - 3.0 * x,
        s * ((((3.0 * x - 4.0) * x - 6.0) * x - 3.0) * x + 1.0),
        ((2.0 * x - 6.0) * x + 15.0) * x - 2.0,
        2.0 * s * x * x - 2.0 * s,
        4.0 - x,
        -s,
    ];
    c.iter().rev().fold(0.0, |acc, &ci| acc * y + ci)
}

/// `G = -18 H / ((sqrt3 x + y - 2 sqrt3)^2 (sqrt3 x + y + sqrt3)^2)`.
pub fn eval_g(p: PlanePoint) -> f64 {
    let a = SQRT_3 * p.x + p.y - 2.0 * SQRT_3;
    let b = SQRT_3 * p.x + p.y + SQRT_3;
    -18.0 * eval_h(p) / (a * a * b * b)
}

/// `|p_2 - (025)|^2 - |p_2 - (235)|^2`, straight from the hexagon.
pub fn eval_g_from_definition(p: PlanePoint) -> Result<f64, GeometryError> {
    let p2 = Hexagon::new(p)?.vertices[2];
    let a = essential_closed_form(EssentialTriple::T025, p);
    let b = essential_closed_form(EssentialTriple::T235, p);
    Ok(p2.dist(a).powi(2) - p2.dist(b).powi(2))
}

/// Distance from `p` to the segment `ab`.
fn segment_distance(p: PlanePoint, a: PlanePoint, b: PlanePoint) -> f64 {
    let d = b - a;
    let t = ((p - a).dot(d) / d.norm_sq()).clamp(0.0, 1.0);
    p.dist(a + d * t)
}

/// Distance to `∂∞T`, the two sides of `T` meeting at the top vertex.
pub fn distance_to_boundary_inf(p: PlanePoint) -> f64 {
    segment_distance(p, PlanePoint::ORIGIN, TOP_VERTEX).min(segment_distance(
        p,
        SHARP_VERTEX,
        TOP_VERTEX,
    ))
}

/// Euclidean distance from `p` to the closure of `J`.
pub fn distance_to_j(p: PlanePoint) -> f64 {
    let r = root_r();
    let at = |x: f64| {
        let y = if x >= 0.25 {
            TOP_VERTEX.y
        } else {
            curve_j(x).unwrap_or(TOP_VERTEX.y)
        };
        p.dist(PlanePoint::new(x, y))
    };
    const N: usize = 400;
    let step = (0.25 - r) / N as f64;
    let best = (0..=N)
        .min_by(|&i, &j| at(r + i as f64 * step).total_cmp(&at(r + j as f64 * step)))
        .unwrap_or(0);
    let (mut lo, mut hi) = (
        r + best.saturating_sub(1) as f64 * step,
        (r + (best + 1) as f64 * step).min(0.25),
    );
    for _ in 0..80 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if at(m1) < at(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    at(0.5 * (lo + hi)).min(at(r)).min(at(0.25))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegionClass {
    LeftOfJ,
    RightOfJ,
    OnJ,
    /// On `∂∞T`, away from its two endpoints.
    BoundaryInf,
    TopVertex,
    SharpVertex,
}

impl RegionClass {
    pub fn name(self) -> &'static str {
        match self {
            Self::LeftOfJ => "LeftOfJ",
            Self::RightOfJ => "RightOfJ",
            Self::OnJ => "OnJ",
            Self::BoundaryInf => "BoundaryInf",
            Self::TopVertex => "TopVertex",
            Self::SharpVertex => "SharpVertex",
        }
    }
}

fn check_in_t(p: PlanePoint) -> Result<(), GeometryError> {
    if p.is_finite() && in_fundamental_domain(p, EPS) {
        Ok(())
    } else {
        Err(GeometryError::NotInT { x: p.x, y: p.y })
    }
}

fn on_left_side(p: PlanePoint) -> bool {
    segment_distance(p, PlanePoint::ORIGIN, TOP_VERTEX) <= EPS
}

pub fn classify(p: PlanePoint) -> Result<RegionClass, GeometryError> {
    check_in_t(p)?;
    if p.approx_eq(SHARP_VERTEX, EPS) {
        return Ok(RegionClass::SharpVertex);
    }
    if p.approx_eq(TOP_VERTEX, EPS) {
        return Ok(RegionClass::TopVertex);
    }
    if distance_to_boundary_inf(p) <= EPS {
        return Ok(RegionClass::BoundaryInf);
    }
    if eval_h(p).abs() < TAU_J && p.x >= root_r() - EPS && p.x < 0.25 {
        return Ok(RegionClass::OnJ);
    }
    Ok(if eval_g(p) > 0.0 {
        RegionClass::LeftOfJ
    } else {
        RegionClass::RightOfJ
    })
}

/// The branch of `f` used left of `J`.
pub fn f_left(p: PlanePoint) -> PlanePoint {
    let (x, y) = (p.x, p.y);
    PlanePoint::new(
        (-x * y - SQRT_3 * x + SQRT_3 * y * y - y) / (SQRT_3 * x + y - 2.0 * SQRT_3),
        y,
    )
}

/// The branch of `f` used right of `J`.
pub fn f_right(p: PlanePoint) -> PlanePoint {
    let (x, y) = (p.x, p.y);
    PlanePoint::new(
        (-x * y + 2.0 * SQRT_3 * x + SQRT_3 * y * y - y) / (SQRT_3 * x + y + SQRT_3),
        y,
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FImage {
    Single(PlanePoint),
    /// Both branches, at a point of `J`.
    Pair {
        left: PlanePoint,
        right: PlanePoint,
    },
}

impl FImage {
    pub fn points(&self) -> Vec<PlanePoint> {
        match *self {
            Self::Single(p) => vec![p],
            Self::Pair { left, right } => vec![left, right],
        }
    }

    pub fn single(&self) -> Option<PlanePoint> {
        match *self {
            Self::Single(p) => Some(p),
            Self::Pair { .. } => None,
        }
    }
}

pub fn apply_f(p: PlanePoint) -> Result<FImage, GeometryError> {
    apply_f_classified(p, classify(p)?)
}

fn apply_f_classified(p: PlanePoint, class: RegionClass) -> Result<FImage, GeometryError> {
    Ok(match class {
        RegionClass::SharpVertex | RegionClass::TopVertex => FImage::Single(p),
        RegionClass::LeftOfJ => FImage::Single(f_left(p)),
        RegionClass::RightOfJ => FImage::Single(f_right(p)),
        RegionClass::BoundaryInf => FImage::Single(if on_left_side(p) {
            f_left(p)
        } else {
            f_right(p)
        }),
        RegionClass::OnJ => FImage::Pair {
            left: f_left(p),
            right: f_right(p),
        },
    })
}

/// The essential triples whose vertices carry the farthest points of `p`.
pub fn relevant_triples(class: RegionClass, p: PlanePoint) -> Vec<EssentialTriple> {
    match class {
        RegionClass::SharpVertex => vec![],
        RegionClass::LeftOfJ => vec![EssentialTriple::T025],
        RegionClass::RightOfJ => vec![EssentialTriple::T235],
        RegionClass::BoundaryInf if on_left_side(p) => vec![EssentialTriple::T025],
        RegionClass::BoundaryInf => vec![EssentialTriple::T235],
        RegionClass::TopVertex => vec![EssentialTriple::T025],
        RegionClass::OnJ => vec![EssentialTriple::T025, EssentialTriple::T235],
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FarpointResult {
    pub class: RegionClass,
    pub points: Vec<SurfacePoint>,
    /// Matching points of `A_0`.
    pub chart_points: Vec<PlanePoint>,
    pub labels: Vec<VertexLabel>,
    pub distance: f64,
}

impl FarpointResult {
    pub fn is_singleton(&self) -> bool {
        self.points.len() == 1
    }
}

pub fn farpoint_set(p: PlanePoint) -> Result<FarpointResult, GeometryError> {
    let class = classify(p)?;
    if class == RegionClass::SharpVertex {
        return Ok(FarpointResult {
            class,
            points: vec![SurfacePoint::vertex(Face::ANTIPODAL, 0)],
            chart_points: vec![a0_triangle()[0]],
            labels: vec![],
            distance: 3.0,
        });
    }
    let hex = Hexagon::new(p)?;
    let triples = relevant_triples(class, p);
    let chart_points: Vec<PlanePoint> = triples
        .iter()
        .map(|&t| essential_closed_form(t, p))
        .collect();
    let distance = chart_points
        .iter()
        .map(|&q| hex.mu(q))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(FarpointResult {
        class,
        points: chart_points.iter().map(|&q| psi(q)).collect(),
        chart_points,
        labels: triples.iter().map(|t| t.label()).collect(),
        distance,
    })
}

/// Farthest points of an arbitrary surface point, found in `T` and carried back.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceFarpoints {
    pub fundamental: PlanePoint,
    /// Carries the query onto `fundamental`.
    pub symmetry: Symmetry,
    pub result: FarpointResult,
    /// `result.points` in the frame of the query.
    pub points: Vec<SurfacePoint>,
}

pub fn farpoints_on_surface(q: &SurfacePoint) -> Result<SurfaceFarpoints, GeometryError> {
    let (t, g) = fold_to_fundamental(q);
    let result = farpoint_set(t)?;
    let back = g.invert();
    let points = result.points.iter().map(|p| back.apply(p)).collect();
    Ok(SurfaceFarpoints {
        fundamental: t,
        symmetry: g,
        result,
        points,
    })
}

/// `f(p)` recomputed as `alpha_0` of the relevant essential vertices.
pub fn f_via_hexagon(p: PlanePoint) -> Result<Vec<PlanePoint>, GeometryError> {
    let class = classify(p)?;
    if class == RegionClass::SharpVertex {
        return Ok(vec![p]);
    }
    Ok(relevant_triples(class, p)
        .into_iter()
        .map(|t| alpha0().apply(essential_closed_form(t, p)))
        .collect())
}
