//! The six developed copies `p_0..p_5` of a probe point `p ∈ T`, the hexagon
//! they span, and its Voronoi decomposition.
//!
//! The copies are images of `p` under fixed direct isometries `I_j` of the
//! tiling plane; each `I_j` carries the developed copy `A_j` of the
//! antipodal face onto a common triangle `A_0`, so for `q ∈ A_0` the
//! distance from `p` to the surface point represented by `q` is the
//! smallest of the six planar distances `|q - p_j|`.

use std::fmt;

use crate::error::GeometryError;
use crate::planar::{
    circumcenter, cocircularity, orient, Line, PlaneIsometry, PlanePoint, EPS, SQRT_3,
};
use crate::surface::{in_fundamental_domain, Face, SurfacePoint, ROOTS};

/// The sharp vertex of `T`, a cone point.
pub const SHARP_VERTEX: PlanePoint = PlanePoint::new(1.0, 0.0);

/// The top vertex of `T`, midpoint of a face edge.
pub const TOP_VERTEX: PlanePoint = PlanePoint::new(0.25, SQRT_3 / 4.0);

/// Lattice coefficient `(k + l sqrt(3) i) / 2`.
pub fn lattice_w(k: i32, l: i32) -> PlanePoint {
    PlanePoint::new(k as f64 / 2.0, l as f64 * SQRT_3 / 2.0)
}

/// `(k1, l1, k2, l2)` such that `I_j(z) = w(k1, l1) z + w(k2, l2)`.
const UNFOLD_PARAMS: [[i32; 4]; 6] = [
    [2, 0, 0, 0],
    [-1, 1, 3, -1],
    [-1, -1, 9, 1],
    [2, 0, 9, 3],
    [-1, 1, 3, 5],
    [-1, -1, 0, 4],
];

pub fn unfold_isometry(j: usize) -> PlaneIsometry {
    let [k1, l1, k2, l2] = UNFOLD_PARAMS[j];
    PlaneIsometry::direct(lattice_w(k1, l1), lattice_w(k2, l2))
}

/// `[I_0, ..., I_5]`.
pub fn unfold_isometries() -> [PlaneIsometry; 6] {
    std::array::from_fn(unfold_isometry)
}

/// `alpha_0(z) = e^{-2 pi i / 3} (2 - i sqrt(3) - conj(z))`, carrying `A_0` onto
/// the reference face with matching vertex colors.
pub fn alpha0() -> PlaneIsometry {
    let w = PlanePoint::new(-0.5, -SQRT_3 / 2.0);
    // w (c - conj z) = (-w) conj(z) + w c
    PlaneIsometry::reflective(-w, w.cmul(PlanePoint::new(2.0, -SQRT_3)))
}

/// Vertices of `A_0`, the `alpha_0`-preimages of the reference face vertices
/// `1, ω, ω²` (in that order).
pub fn a0_triangle() -> [PlanePoint; 3] {
    let inv = alpha0().invert();
    [
        inv.apply(ROOTS[0]),
        inv.apply(ROOTS[1]),
        inv.apply(ROOTS[2]),
    ]
}

/// Smallest signed distance from `q` to the edge lines of `A_0`; positive inside.
pub fn a0_margin(q: PlanePoint) -> f64 {
    let t = a0_triangle();
    let ccw = orient(t[0], t[1], t[2]) > 0.0;
    (0..3)
        .map(|i| {
            let d = Line::through(t[i], t[(i + 1) % 3]).signed_distance(q);
            if ccw {
                d
            } else {
                -d
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// The surface point represented by a chart point of `A_0`.
pub fn psi(q: PlanePoint) -> SurfacePoint {
    SurfacePoint::new_unchecked(Face::REFERENCE, alpha0().apply(q)).antipode()
}

/// One of the four index triples whose circumcenters are the essential vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EssentialTriple {
    T012,
    T025,
    T235,
    T345,
}

impl EssentialTriple {
    pub const ALL: [EssentialTriple; 4] = [Self::T012, Self::T025, Self::T235, Self::T345];

    pub fn indices(self) -> [usize; 3] {
        match self {
            Self::T012 => [0, 1, 2],
            Self::T025 => [0, 2, 5],
            Self::T235 => [2, 3, 5],
            Self::T345 => [3, 4, 5],
        }
    }

    pub fn label(self) -> VertexLabel {
        VertexLabel::from_indices(&self.indices())
    }
}

/// A set of hexagon vertex indices, displayed like `(025)` or `(0235)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VertexLabel(u8);

impl VertexLabel {
    pub fn from_indices(indices: &[usize]) -> Self {
        Self(indices.iter().fold(0u8, |m, &i| m | (1 << i)))
    }

    pub fn from_mask(mask: u8) -> Self {
        Self(mask & 0x3f)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn indices(self) -> Vec<usize> {
        (0..6).filter(|i| self.0 & (1 << i) != 0).collect()
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, other: VertexLabel) -> bool {
        self.0 & other.0 == other.0
    }
}

impl PartialOrd for VertexLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VertexLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.indices().cmp(&other.indices())
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in self.indices() {
            write!(f, "{i}")?;
        }
        write!(f, ")")
    }
}

/// The hexagon `H_p` with vertices `p_j = I_j(p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hexagon {
    pub probe: PlanePoint,
    pub vertices: [PlanePoint; 6],
}

impl Hexagon {
    pub fn new(p: PlanePoint) -> Result<Self, GeometryError> {
        if !in_fundamental_domain(p, EPS) {
            return Err(GeometryError::NotInT { x: p.x, y: p.y });
        }
        if p.approx_eq(SHARP_VERTEX, EPS) {
            return Err(GeometryError::SharpVertexDegenerate);
        }
        let vertices = std::array::from_fn(|j| unfold_isometry(j).apply(p));
        Ok(Self { probe: p, vertices })
    }

    /// `min_k |q - p_k|`.
    pub fn mu(&self, q: PlanePoint) -> f64 {
        self.vertices
            .iter()
            .map(|v| q.dist(*v))
            .fold(f64::INFINITY, f64::min)
    }

    /// Indices attaining `mu(q)` up to `tol`.
    pub fn minimal_indices(&self, q: PlanePoint, tol: f64) -> VertexLabel {
        let m = self.mu(q);
        let mask = (0..6)
            .filter(|&k| q.dist(self.vertices[k]) <= m + tol)
            .fold(0u8, |acc, k| acc | (1 << k));
        VertexLabel(mask)
    }

    /// Interior angle at each vertex, in radians.
    pub fn interior_angles(&self) -> [f64; 6] {
        std::array::from_fn(|j| {
            let prev = self.vertices[(j + 5) % 6] - self.vertices[j];
            let next = self.vertices[(j + 1) % 6] - self.vertices[j];
            let turn = next.cross(prev).atan2(next.dot(prev));
            if turn < 0.0 {
                turn + std::f64::consts::TAU
            } else {
                turn
            }
        })
    }

    /// Counterclockwise with every interior angle strictly below `pi`.
    pub fn is_strictly_convex(&self) -> bool {
        (0..6).all(|j| {
            orient(
                self.vertices[j],
                self.vertices[(j + 1) % 6],
                self.vertices[(j + 2) % 6],
            ) > EPS
        })
    }

    /// Circumcenter of a labeled triple.
    pub fn triple_center(&self, t: EssentialTriple) -> Result<PlanePoint, GeometryError> {
        let [i, j, k] = t.indices();
        circumcenter(self.vertices[i], self.vertices[j], self.vertices[k])
    }

    pub fn polygon(&self) -> Vec<PlanePoint> {
        self.vertices.to_vec()
    }
}

/// `mu_p(q)`.
pub fn mu(p: PlanePoint, q: PlanePoint) -> Result<f64, GeometryError> {
    Ok(Hexagon::new(p)?.mu(q))
}

#[derive(Clone, Debug, PartialEq)]
pub struct VoronoiCell {
    pub index: usize,
    /// Counterclockwise polygon.
    pub polygon: Vec<PlanePoint>,
}

impl VoronoiCell {
    /// Edges lying on the boundary of the hexagon.
    pub fn boundary_edge_count(&self, hex: &Hexagon) -> usize {
        let n = self.polygon.len();
        (0..n)
            .filter(|&i| {
                let (a, b) = (self.polygon[i], self.polygon[(i + 1) % n]);
                a.dist(b) > 10.0 * EPS
                    && (0..6).any(|j| {
                        let l = Line::through(hex.vertices[j], hex.vertices[(j + 1) % 6]);
                        l.signed_distance(a).abs() < 1e-8 && l.signed_distance(b).abs() < 1e-8
                    })
            })
            .count()
    }

    pub fn is_convex(&self) -> bool {
        let n = self.polygon.len();
        n >= 3
            && (0..n).all(|i| {
                orient(
                    self.polygon[i],
                    self.polygon[(i + 1) % n],
                    self.polygon[(i + 2) % n],
                ) >= -EPS
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EssentialVertex {
    pub label: VertexLabel,
    pub location: PlanePoint,
}

#[derive(Clone, Debug)]
pub struct Voronoi {
    pub hexagon: Hexagon,
    pub cells: Vec<VoronoiCell>,
    /// Ordered by label.
    pub essential: Vec<EssentialVertex>,
}

impl Voronoi {
    /// The essential vertex whose label contains the given triple.
    pub fn essential_for(&self, t: EssentialTriple) -> Option<&EssentialVertex> {
        self.essential.iter().find(|v| v.label.contains(t.label()))
    }
}

/// Keep the part of a convex polygon where `n . q <= c`.
fn clip(poly: &[PlanePoint], n: PlanePoint, c: f64) -> Vec<PlanePoint> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let len = poly.len();
    for i in 0..len {
        let a = poly[i];
        let b = poly[(i + 1) % len];
        let (fa, fb) = (n.dot(a) - c, n.dot(b) - c);
        if fa <= 0.0 {
            out.push(a);
        }
        if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
            out.push(a.lerp(b, fa / (fa - fb)));
        }
    }
    out.dedup_by(|x, y| x.approx_eq(*y, EPS));
    if out.len() > 1 && out[0].approx_eq(out[out.len() - 1], EPS) {
        out.pop();
    }
    out
}

/// Location tolerance for merging coincident essential vertices.
pub const MERGE_TOL: f64 = 10.0 * EPS;

/// Voronoi decomposition of `H_p` by half-plane clipping, with its essential
/// vertices (points in at least three cells) found from the cell corners.
pub fn voronoi(p: PlanePoint) -> Result<Voronoi, GeometryError> {
    let hex = Hexagon::new(p)?;
    let cells: Vec<VoronoiCell> = (0..6)
        .map(|j| {
            let pj = hex.vertices[j];
            let polygon = (0..6).filter(|&k| k != j).fold(hex.polygon(), |poly, k| {
                let pk = hex.vertices[k];
                // |q - pj|^2 <= |q - pk|^2  <=>  2 q.(pk - pj) <= |pk|^2 - |pj|^2
                clip(&poly, (pk - pj) * 2.0, pk.norm_sq() - pj.norm_sq())
            });
            VoronoiCell { index: j, polygon }
        })
        .collect();

    let mut essential: Vec<EssentialVertex> = Vec::new();
    for v in cells.iter().flat_map(|c| c.polygon.iter()) {
        let label = hex.minimal_indices(*v, MERGE_TOL);
        if label.len() < 3 {
            continue;
        }
        match essential
            .iter_mut()
            .find(|e| e.location.approx_eq(*v, MERGE_TOL))
        {
            Some(e) => e.label = VertexLabel(e.label.0 | label.0),
            None => essential.push(EssentialVertex {
                label,
                location: *v,
            }),
        }
    }
    // Recompute each location as an exact circumcenter of its first three indices.
    for e in &mut essential {
        let idx = e.label.indices();
        if let Ok(c) = circumcenter(
            hex.vertices[idx[0]],
            hex.vertices[idx[1]],
            hex.vertices[idx[2]],
        ) {
            e.location = c;
        }
    }
    essential.sort_by_key(|e| e.label);
    Ok(Voronoi {
        hexagon: hex,
        cells,
        essential,
    })
}

/// Closed-form essential vertices as rational functions of `p = x + iy`.
pub fn essential_closed_form(t: EssentialTriple, p: PlanePoint) -> PlanePoint {
    let (x, y) = (p.x, p.y);
    let s = SQRT_3;
    match t {
        EssentialTriple::T012 => {
            let den = 2.0 * (s * x * x - 3.0 * s * x + 3.0 * y + y * y * s + 2.0 * s);
            PlanePoint::new(
                (3.0 * s * x * x - 6.0 * y * x - 11.0 * s * x
                    + 21.0 * y
                    + 5.0 * y * y * s
                    + 8.0 * s)
                    / den,
                (3.0 * x * x - 2.0 * s * y * x - 15.0 * x - 3.0 * y * y - s * y + 12.0) / den,
            )
        }
        EssentialTriple::T025 => {
            let den = 2.0 * (y + x * s - 2.0 * s);
            PlanePoint::new(
                (2.0 * s * y * y + 2.0 * x * y - 3.0 * y + 3.0 * x * s - 8.0 * s) / den,
                (2.0 * y * y - 2.0 * s * x * y + 3.0 * s * y + 3.0 * x - 12.0) / den,
            )
        }
        EssentialTriple::T235 => {
            let den = y + x * s + s;
            PlanePoint::new(
                (s * y * y + x * y + 3.0 * y + 3.0 * x * s + 2.0 * s) / den,
                (y * y - s * x * y + 6.0 * x + 3.0) / den,
            )
        }
        EssentialTriple::T345 => {
            let den = s * x * x + 3.0 * s * x - 3.0 * y + y * y * s + 2.0 * s;
            PlanePoint::new(
                (3.0 * s * x * x + 8.0 * s * x - 3.0 * y + y * y * s + 4.0 * s) / den,
                (6.0 * x * x + 2.0 * y * s * x + 15.0 * x + 6.0 * y * y - 2.0 * s * y + 6.0) / den,
            )
        }
    }
}

/// Coordinates on the unit square parametrizing `T`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SquareParams {
    pub a: f64,
    pub b: f64,
}

impl SquareParams {
    pub fn new(a: f64, b: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        Self { a, b }
    }
}

/// `phi(a, b) = (a + (1-a) b / 4, sqrt(3) (1-a) b / 4)`, onto `T`.
pub fn phi(s: SquareParams) -> PlanePoint {
    let (a, b) = (s.a, s.b);
    PlanePoint::new(a + (1.0 - a) * b / 4.0, SQRT_3 * (1.0 - a) * b / 4.0)
}

pub fn nu1(s: SquareParams) -> f64 {
    let (a, b) = (s.a, s.b);
    (8.0 - 4.0 * a * a - b * b)
        + (8.0 * a - 4.0 * a * b - a * a * b * b)
        + (2.0 * b + 2.0 * a * a * b + 2.0 * a * b * b)
}

pub fn nu2(s: SquareParams) -> f64 {
    let (a, b) = (s.a, s.b);
    (16.0 * a - 2.0 * a * b - 2.0 * a * a * b - 2.0 * a * b * b)
        + (4.0 + a * a * b * b + 4.0 * a * a + 4.0 * b + b * b)
}

/// A structural-stability function computed from the hexagon and from its
/// printed factorization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityPair {
    pub from_hexagon: f64,
    pub factored: f64,
}

impl StabilityPair {
    pub fn discrepancy(&self) -> f64 {
        (self.from_hexagon - self.factored).abs()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityFunctions {
    pub t0125: StabilityPair,
    pub t2345: StabilityPair,
    pub t0235: StabilityPair,
}

impl StabilityFunctions {
    pub fn all(&self) -> [StabilityPair; 3] {
        [self.t0125, self.t2345, self.t0235]
    }
}

/// `16 / (27 sqrt 3) * chi(p_i, p_j, p_k, p_l)` at `p = phi(s)` next to the factored forms.
pub fn stability_functions(s: SquareParams) -> StabilityFunctions {
    let p = phi(s);
    let v: [PlanePoint; 6] = std::array::from_fn(|j| unfold_isometry(j).apply(p));
    let k = 16.0 / (27.0 * SQRT_3);
    let chi = |i: usize, j: usize, m: usize, n: usize| k * cocircularity(v[i], v[j], v[m], v[n]);
    let (a, b) = (s.a, s.b);
    StabilityFunctions {
        t0125: StabilityPair {
            from_hexagon: chi(0, 1, 2, 5),
            factored: (a - 1.0) * b * nu1(s),
        },
        t2345: StabilityPair {
            from_hexagon: chi(2, 3, 4, 5),
            factored: (1.0 - a) * b * nu2(s),
        },
        t0235: StabilityPair {
            from_hexagon: chi(0, 2, 3, 5),
            factored: 24.0 * a * (a - 1.0) * (b - 1.0),
        },
    }
}

/// Fixed point of the 120-degree rotation `I_j I_k^{-1}`.
pub fn rotation_center(j: usize, k: usize) -> Result<PlanePoint, GeometryError> {
    if j > 5 || k > 5 {
        return Err(GeometryError::InvalidIndex(j.max(k)));
    }
    if j % 3 == k % 3 {
        return Err(GeometryError::TranslationPair { j, k });
    }
    let g = unfold_isometry(j).compose(&unfold_isometry(k).invert());
    // w z + c = z  =>  z = c / (1 - w)
    let one = PlanePoint::new(1.0, 0.0);
    Ok(g.translation.cdiv(one - g.rotation))
}
