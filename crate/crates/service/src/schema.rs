//! Response bodies. Field order is declaration order and every number goes
//! through [`crate::num`], so equal inputs give byte-identical JSON.

use serde::Serialize;

use farpoint_core::dynamics::{orbit, Orbit};
use farpoint_core::farthest::distance_to_boundary_inf;
use farpoint_core::farthest::{
    apply_f, eval_g, farpoints_on_surface, root_r, sample_j, FImage, SurfaceFarpoints,
};
use farpoint_core::hexagon::{a0_triangle, voronoi, SHARP_VERTEX};
use farpoint_core::surface::{GeodesicField, Symmetry};
use farpoint_core::{Face, GeometryError, PlanePoint, SurfacePoint};

use crate::num::{num, pair, round9};

pub const SCHEMA_VERSION: u32 = 1;

/// Longest orbit a single request may ask for.
pub const MAX_ORBIT: usize = 10_000;

/// Convergence tolerance for reported orbits.
pub const ORBIT_TOL: f64 = 1e-12;

/// `curve_j` stops this far short of the top vertex abscissa.
pub const CURVE_J_DELTA: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    BadParameter,
    OffSurface,
    NotFound,
    Internal,
}

impl ErrorKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::BadParameter => "bad_parameter",
            Self::OffSurface => "off_surface",
            Self::NotFound => "not_found",
            Self::Internal => "internal",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApiError {
    pub kind: ErrorKind,
    pub message: String,
}

impl ApiError {
    pub fn bad_parameter(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::BadParameter,
            message: message.into(),
        }
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::NotFound,
            message: message.into(),
        }
    }

    pub fn body(&self) -> ErrorBody {
        ErrorBody {
            error: ErrorDetail {
                kind: self.kind.name(),
                message: self.message.clone(),
            },
        }
    }
}

impl From<GeometryError> for ApiError {
    fn from(e: GeometryError) -> Self {
        let kind = match e {
            GeometryError::OffSurface { .. } | GeometryError::NotInT { .. } => {
                ErrorKind::OffSurface
            }
            GeometryError::InvalidFace(_)
            | GeometryError::InvalidIndex(_)
            | GeometryError::OutOfDomain(_) => ErrorKind::BadParameter,
            _ => ErrorKind::Internal,
        };
        Self {
            kind,
            message: e.to_string(),
        }
    }
}

#[derive(Serialize)]
pub struct ErrorBody {
    pub error: ErrorDetail,
}

#[derive(Serialize)]
pub struct ErrorDetail {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct SurfacePointJson {
    pub face: u8,
    pub x: f64,
    pub y: f64,
}

impl From<&SurfacePoint> for SurfacePointJson {
    fn from(p: &SurfacePoint) -> Self {
        Self {
            face: p.face.id(),
            x: round9(p.coords.x),
            y: round9(p.coords.y),
        }
    }
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct SymmetryJson {
    /// Axis `i` goes to axis `perm[i]`.
    pub perm: [u8; 3],
    /// Bit `i` set: axis `i` changes sign.
    pub flips: u8,
    pub text: String,
}

impl From<&Symmetry> for SymmetryJson {
    fn from(g: &Symmetry) -> Self {
        Self {
            perm: g.perm,
            flips: g.flips,
            text: g.to_string(),
        }
    }
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct FarthestJson {
    /// In the frame of the query.
    pub point: SurfacePointJson,
    /// For the folded probe in `T`.
    pub fundamental_point: SurfacePointJson,
    /// Matching point of the triangle `A_0` in the tiling plane.
    pub chart: [f64; 2],
    pub label: Option<String>,
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct CellJson {
    pub index: usize,
    /// Closed (first point repeated), counterclockwise.
    pub polygon: Vec<[f64; 2]>,
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct EssentialJson {
    pub label: String,
    pub point: [f64; 2],
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct VoronoiJson {
    /// Closed, counterclockwise.
    pub hexagon: Vec<[f64; 2]>,
    pub cells: Vec<CellJson>,
    pub essential: Vec<EssentialJson>,
    /// Closed, counterclockwise.
    pub a0: Vec<[f64; 2]>,
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct OrbitJson {
    pub start: [f64; 2],
    pub points: Vec<[f64; 2]>,
    pub terminated_by: &'static str,
    pub limit: [f64; 2],
    pub limit_distance_to_boundary: f64,
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct PointResponse {
    pub schema_version: u32,
    pub input: SurfacePointJson,
    pub fundamental: [f64; 2],
    pub symmetry: SymmetryJson,
    pub region: &'static str,
    pub g_value: Option<f64>,
    /// `f` of the folded probe; `null` on `J`, where `f_images` holds both branches.
    pub f: Option<[f64; 2]>,
    pub f_images: Vec<[f64; 2]>,
    pub farthest: Vec<FarthestJson>,
    pub distance: f64,
    /// `null` at the sharp vertex.
    pub voronoi: Option<VoronoiJson>,
    pub orbit: Option<OrbitJson>,
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct DistanceResponse {
    pub schema_version: u32,
    pub from: SurfacePointJson,
    pub to: SurfacePointJson,
    pub distance: f64,
    /// Faces crossed by a shortest path, starting with the source face.
    pub faces: Vec<u8>,
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct CurveJResponse {
    pub schema_version: u32,
    pub r: f64,
    pub x_max: f64,
    pub points: Vec<[f64; 2]>,
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct FaceSegments {
    pub face: u8,
    pub segments: Vec<[[f64; 2]; 2]>,
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct LimitSetResponse {
    pub schema_version: u32,
    pub faces: Vec<FaceSegments>,
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct HealthResponse {
    pub status: &'static str,
    pub version: &'static str,
    pub schema_version: u32,
}

/// Counterclockwise, with the first point repeated at the end.
fn closed(points: &[PlanePoint]) -> Vec<[f64; 2]> {
    let area: f64 = (0..points.len())
        .map(|i| points[i].cross(points[(i + 1) % points.len()]))
        .sum();
    let mut pts = points.to_vec();
    if area < 0.0 {
        pts.reverse();
    }
    pts.iter().chain(pts.first()).map(|&p| pair(p)).collect()
}

pub fn surface_point(face: u8, x: f64, y: f64) -> Result<SurfacePoint, ApiError> {
    let face = Face::new(face)?;
    Ok(SurfacePoint::new(face, PlanePoint::new(x, y))?)
}

pub fn voronoi_json(t: PlanePoint) -> Result<Option<VoronoiJson>, ApiError> {
    if t.approx_eq(SHARP_VERTEX, farpoint_core::EPS) {
        return Ok(None);
    }
    let v = voronoi(t)?;
    Ok(Some(VoronoiJson {
        hexagon: closed(&v.hexagon.vertices),
        cells: v
            .cells
            .iter()
            .map(|c| CellJson {
                index: c.index,
                polygon: closed(&c.polygon),
            })
            .collect(),
        essential: v
            .essential
            .iter()
            .map(|e| EssentialJson {
                label: e.label.to_string(),
                point: pair(e.location),
            })
            .collect(),
        a0: closed(&a0_triangle()),
    }))
}

pub fn orbit_json(o: &Orbit) -> OrbitJson {
    OrbitJson {
        start: pair(o.start),
        points: o.points.iter().map(|&p| pair(p)).collect(),
        terminated_by: o.terminated_by.name(),
        limit: pair(o.last()),
        limit_distance_to_boundary: round9(distance_to_boundary_inf(o.last())),
    }
}

/// Orbit of `t ∈ T` listing `n` points, the start included.
pub fn orbit_points(t: PlanePoint, n: usize) -> Result<Orbit, ApiError> {
    if n == 0 || n > MAX_ORBIT {
        return Err(ApiError::bad_parameter(format!(
            "orbit length must be in 1..={MAX_ORBIT}, got {n}"
        )));
    }
    Ok(orbit(t, n - 1, ORBIT_TOL)?)
}

pub fn point_response(
    q: &SurfacePoint,
    orbit_len: Option<usize>,
) -> Result<PointResponse, ApiError> {
    let sf: SurfaceFarpoints = farpoints_on_surface(q)?;
    let t = sf.fundamental;
    let images = apply_f(t)?;
    let farthest = sf
        .points
        .iter()
        .zip(&sf.result.points)
        .enumerate()
        .map(|(i, (p, fp))| FarthestJson {
            point: p.into(),
            fundamental_point: fp.into(),
            chart: pair(sf.result.chart_points[i]),
            label: sf.result.labels.get(i).map(|l| l.to_string()),
        })
        .collect();
    let orbit = orbit_len.map(|n| orbit_points(t, n)).transpose()?;
    Ok(PointResponse {
        schema_version: SCHEMA_VERSION,
        input: q.into(),
        fundamental: pair(t),
        symmetry: (&sf.symmetry).into(),
        region: sf.result.class.name(),
        g_value: num(eval_g(t)),
        f: match images {
            FImage::Single(p) => Some(pair(p)),
            FImage::Pair { .. } => None,
        },
        f_images: images.points().into_iter().map(pair).collect(),
        farthest,
        distance: round9(sf.result.distance),
        voronoi: voronoi_json(t)?,
        orbit: orbit.as_ref().map(orbit_json),
    })
}

pub fn distance_response(a: &SurfacePoint, b: &SurfacePoint) -> Result<DistanceResponse, ApiError> {
    let field = GeodesicField::new(*a);
    let distance = field.distance(b)?;
    let faces = field
        .shortest(b)
        .map(|(_, dev)| {
            dev.face_sequence(a.face)
                .into_iter()
                .map(|f| f.id())
                .collect()
        })
        .unwrap_or_default();
    Ok(DistanceResponse {
        schema_version: SCHEMA_VERSION,
        from: a.into(),
        to: b.into(),
        distance: round9(distance),
        faces,
    })
}

pub fn curve_j_response(samples: usize) -> Result<CurveJResponse, ApiError> {
    if samples < 2 {
        return Err(ApiError::bad_parameter(format!(
            "samples must be at least 2, got {samples}"
        )));
    }
    if samples > 100_000 {
        return Err(ApiError::bad_parameter(format!(
            "samples must be at most 100000, got {samples}"
        )));
    }
    let x_max = 0.25 - CURVE_J_DELTA;
    Ok(CurveJResponse {
        schema_version: SCHEMA_VERSION,
        r: round9(root_r()),
        x_max: round9(x_max),
        points: sample_j(samples, x_max).into_iter().map(pair).collect(),
    })
}

/// `∂∞T` and its images under the symmetries fixing a face: the three
/// segments from the centroid to the edge midpoints, and the three edges.
pub fn limit_set_segments() -> Vec<[PlanePoint; 2]> {
    let roots = farpoint_core::surface::ROOTS;
    let mut segs = Vec::new();
    for i in 0..3 {
        let (a, b) = (roots[(i + 1) % 3], roots[(i + 2) % 3]);
        segs.push([PlanePoint::ORIGIN, a.lerp(b, 0.5)]);
    }
    for i in 0..3 {
        segs.push([roots[i], roots[(i + 1) % 3]]);
    }
    segs
}

pub fn limit_set_response() -> LimitSetResponse {
    let segs: Vec<[[f64; 2]; 2]> = limit_set_segments()
        .iter()
        .map(|s| [pair(s[0]), pair(s[1])])
        .collect();
    LimitSetResponse {
        schema_version: SCHEMA_VERSION,
        faces: Face::all()
            .map(|f| FaceSegments {
                face: f.id(),
                segments: segs.clone(),
            })
            .collect(),
    }
}

pub fn health_response() -> HealthResponse {
    HealthResponse {
        status: "ok",
        version: env!("CARGO_PKG_VERSION"),
        schema_version: SCHEMA_VERSION,
    }
}
