//! The regular octahedron as a metric surface.
//!
//! Faces are indexed by sign patterns: bit `i` of a face id is set when the
//! face touches the negative end of coordinate axis `i` in the usual
//! embedding with vertices `±e_i`. Face 0 is the reference face Δ₀ and face 7
//! is its antipode. Every face chart puts the vertex on axis `i` at the cube
//! root of unity `ω^i`, so the two endpoints of a shared edge have the same
//! chart position on both sides and each gluing is a reflection across that
//! edge line. Cone-point colors follow the axes: black, white, grey.

mod geodesic;
mod oracle;
mod symmetry;

pub use geodesic::{Development, GeodesicField, Unfolding, DEFAULT_MAX_FACES};
pub use oracle::{farthest_oracle, FarthestOracle, MaximizerCluster, ORACLE_VALUE_TOL};
pub use symmetry::Symmetry;

use std::fmt;

use crate::error::GeometryError;
use crate::planar::{PlaneIsometry, PlanePoint, EPS, SQRT_3};

/// The cube roots of unity: chart positions of the axis-0, axis-1 and axis-2 vertices.
pub const ROOTS: [PlanePoint; 3] = [
    PlanePoint::new(1.0, 0.0),
    PlanePoint::new(-0.5, SQRT_3 / 2.0),
    PlanePoint::new(-0.5, -SQRT_3 / 2.0),
];

/// Edge length of every face in chart units.
pub const EDGE_LENGTH: f64 = SQRT_3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face(u8);

impl Face {
    pub const REFERENCE: Face = Face(0);
    pub const ANTIPODAL: Face = Face(7);

    pub fn new(id: u8) -> Result<Self, GeometryError> {
        if id < 8 {
            Ok(Face(id))
        } else {
            Err(GeometryError::InvalidFace(id))
        }
    }

    pub fn id(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = Face> {
        (0..8).map(Face)
    }

    /// The face across the edge opposite the axis-`axis` vertex.
    pub fn neighbor(self, axis: usize) -> Face {
        Face(self.0 ^ (1 << axis))
    }

    pub fn antipode(self) -> Face {
        Face(self.0 ^ 7)
    }

    /// `+1.0` or `-1.0`: which end of axis `axis` this face touches.
    pub fn sign(self, axis: usize) -> f64 {
        if self.0 & (1 << axis) == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    Black,
    White,
    Grey,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Black, Color::White, Color::Grey];

    pub fn axis(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Black => "black",
            Color::White => "white",
            Color::Grey => "grey",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FaceRecord {
    pub id: Face,
    /// Neighbor across the edge opposite vertex `i`.
    pub neighbors: [Face; 3],
    /// `gluing[i]` carries the chart of `neighbors[i]` into this face's chart.
    pub gluing: [PlaneIsometry; 3],
    /// Color of the vertex at chart position `ROOTS[i]`.
    pub colors: [Color; 3],
}

impl FaceRecord {
    /// Endpoints of the edge shared with `neighbors[i]`, in this face's chart.
    pub fn edge(&self, i: usize) -> (PlanePoint, PlanePoint) {
        (ROOTS[(i + 1) % 3], ROOTS[(i + 2) % 3])
    }
}

#[derive(Clone, Debug)]
pub struct OctahedronModel {
    faces: Vec<FaceRecord>,
}

/// Reflection across the chart edge opposite vertex `axis`.
pub fn edge_reflection(axis: usize) -> PlaneIsometry {
    PlaneIsometry::reflection_across(ROOTS[(axis + 1) % 3], ROOTS[(axis + 2) % 3])
}

impl OctahedronModel {
    pub fn build() -> Self {
        let faces = Face::all()
            .map(|id| FaceRecord {
                id,
                neighbors: [id.neighbor(0), id.neighbor(1), id.neighbor(2)],
                gluing: [edge_reflection(0), edge_reflection(1), edge_reflection(2)],
                colors: Color::ALL,
            })
            .collect();
        Self { faces }
    }

    pub fn face(&self, f: Face) -> &FaceRecord {
        &self.faces[f.0 as usize]
    }

    pub fn faces(&self) -> &[FaceRecord] {
        &self.faces
    }

    /// The six cone points, two per color, listed black, white, grey with the
    /// positive end of each axis first.
    pub fn cone_points(&self) -> Vec<(Color, SurfacePoint)> {
        Color::ALL
            .iter()
            .flat_map(|&c| {
                let axis = c.axis();
                let pos = SurfacePoint::vertex(Face::REFERENCE, axis);
                let neg = SurfacePoint::vertex(Face::REFERENCE.neighbor(axis), axis);
                [(c, pos), (c, neg)]
            })
            .collect()
    }

    /// Faces incident to the cone point on axis `axis` with the given sign.
    pub fn faces_at_vertex(&self, axis: usize, sign: f64) -> Vec<Face> {
        Face::all().filter(|f| f.sign(axis) == sign).collect()
    }

    pub fn geodesic_distance(
        &self,
        p: &SurfacePoint,
        q: &SurfacePoint,
    ) -> Result<f64, GeometryError> {
        GeodesicField::new(*p).distance(q)
    }
}

impl Default for OctahedronModel {
    fn default() -> Self {
        Self::build()
    }
}

/// A point of the octahedron surface in the chart of one of its faces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    pub face: Face,
    pub coords: PlanePoint,
}

impl SurfacePoint {
    pub fn new(face: Face, coords: PlanePoint) -> Result<Self, GeometryError> {
        let p = Self { face, coords };
        if !coords.is_finite() || p.barycentric().iter().any(|&l| l < -EPS) {
            return Err(GeometryError::OffSurface {
                face: face.0,
                x: coords.x,
                y: coords.y,
            });
        }
        Ok(p)
    }

    /// Construct without validation; the caller guarantees the point is in the face.
    pub(crate) fn new_unchecked(face: Face, coords: PlanePoint) -> Self {
        Self { face, coords }
    }

    pub fn from_barycentric(face: Face, lambda: [f64; 3]) -> Self {
        let coords = ROOTS[0] * lambda[0] + ROOTS[1] * lambda[1] + ROOTS[2] * lambda[2];
        Self { face, coords }
    }

    /// Vertex `axis` of face `face`.
    pub fn vertex(face: Face, axis: usize) -> Self {
        Self {
            face,
            coords: ROOTS[axis],
        }
    }

    pub fn centroid(face: Face) -> Self {
        Self {
            face,
            coords: PlanePoint::ORIGIN,
        }
    }

    /// Barycentric coordinates with respect to the three face vertices.
    pub fn barycentric(&self) -> [f64; 3] {
        let z = self.coords;
        let l = |r: PlanePoint| (1.0 + 2.0 * z.dot(r)) / 3.0;
        [l(ROOTS[0]), l(ROOTS[1]), l(ROOTS[2])]
    }

    /// Position in the embedding with vertices `±(sqrt(3)/sqrt(2)) e_i`
    /// (edge length matches the charts).
    pub fn position_3d(&self) -> [f64; 3] {
        let scale = (1.5_f64).sqrt();
        let l = self.barycentric();
        [
            l[0] * self.face.sign(0) * scale,
            l[1] * self.face.sign(1) * scale,
            l[2] * self.face.sign(2) * scale,
        ]
    }

    /// Chord length between the embedded positions; zero exactly for the same surface point.
    pub fn chord(&self, other: &SurfacePoint) -> f64 {
        let a = self.position_3d();
        let b = other.position_3d();
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    }

    pub fn same_point(&self, other: &SurfacePoint, tol: f64) -> bool {
        self.chord(other) <= tol
    }

    /// The cone point this point coincides with, if any.
    pub fn cone_point(&self, tol: f64) -> Option<(Color, f64)> {
        let l = self.barycentric();
        (0..3)
            .find(|&i| (l[i] - 1.0).abs() <= tol)
            .map(|i| (Color::ALL[i], self.face.sign(i)))
    }

    pub fn antipode(&self) -> SurfacePoint {
        SurfacePoint {
            face: self.face.antipode(),
            coords: self.coords,
        }
    }
}

impl fmt::Display for SurfacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "face {} {}", self.face, self.coords)
    }
}

/// The antipodal map of the octahedron.
pub fn antipode(q: &SurfacePoint) -> SurfacePoint {
    q.antipode()
}

/// Whether a face-0 chart point lies in the fundamental domain
/// `T = {λ0 >= λ1 >= λ2}` (the triangle `0, 1, (1/4, sqrt(3)/4)`), within `tol`.
pub fn in_fundamental_domain(t: PlanePoint, tol: f64) -> bool {
    let l = SurfacePoint::new_unchecked(Face::REFERENCE, t).barycentric();
    l[2] >= -tol && l[1] - l[2] >= -tol && l[0] - l[1] >= -tol
}

/// Carry `q` into the fundamental domain `T` of face 0.
///
/// Returns the image point and the symmetry `g` with `g(q) = t`.
pub fn fold_to_fundamental(q: &SurfacePoint) -> (PlanePoint, Symmetry) {
    let l = q.barycentric();
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| l[b].total_cmp(&l[a]));
    // Axis order[k] goes to slot k; every negative axis is flipped positive.
    let mut perm = [0u8; 3];
    for (k, &axis) in order.iter().enumerate() {
        perm[axis] = k as u8;
    }
    let g = Symmetry::new(perm, q.face.id());
    let t = g.apply(q);
    debug_assert_eq!(t.face, Face::REFERENCE);
    (t.coords, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_point(rng: &mut impl Rng) -> SurfacePoint {
        let face = Face(rng.random_range(0..8));
        let (mut u, mut v): (f64, f64) = (rng.random(), rng.random());
        if u + v > 1.0 {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        SurfacePoint::from_barycentric(face, [1.0 - u - v, u, v])
    }

    #[test]
    fn combinatorics() {
        let m = OctahedronModel::build();
        for rec in m.faces() {
            let mut n = rec.neighbors.to_vec();
            n.sort();
            n.dedup();
            assert_eq!(n.len(), 3);
            for (i, &nb) in rec.neighbors.iter().enumerate() {
                // Symmetric adjacency through the same edge index.
                assert_eq!(m.face(nb).neighbors[i], rec.id);
                // Gluings are mutually inverse and fix the shared edge.
                let back = m.face(nb).gluing[i];
                assert!(rec.gluing[i]
                    .compose(&back)
                    .approx_eq(&PlaneIsometry::IDENTITY, EPS));
                let (a, b) = rec.edge(i);
                assert!(rec.gluing[i].apply(a).approx_eq(a, EPS));
                assert!(rec.gluing[i].apply(b).approx_eq(b, EPS));
                // The glued face lands on the far side of the edge.
                let far = rec.gluing[i].apply(ROOTS[i]);
                assert!(
                    crate::planar::orient(a, b, far) * crate::planar::orient(a, b, ROOTS[i]) < 0.0
                );
            }
        }
        assert_eq!(Face::REFERENCE.antipode(), Face::ANTIPODAL);
        for f in Face::all() {
            assert_ne!(f.antipode(), f);
            assert_eq!(f.antipode().antipode(), f);
        }
    }

    #[test]
    fn cone_points_pair_by_color_with_angle_four_thirds_pi() {
        let m = OctahedronModel::build();
        let cones = m.cone_points();
        assert_eq!(cones.len(), 6);
        for pair in cones.chunks(2) {
            assert_eq!(pair[0].0, pair[1].0);
            assert!(pair[0].1.antipode().same_point(&pair[1].1, EPS));
        }
        for c in Color::ALL {
            for sign in [1.0, -1.0] {
                let faces = m.faces_at_vertex(c.axis(), sign);
                let angle = faces.len() as f64 * std::f64::consts::FRAC_PI_3;
                assert!((angle - 4.0 * std::f64::consts::PI / 3.0).abs() < EPS);
            }
        }
    }

    #[test]
    fn antipode_examples() {
        let black = SurfacePoint::vertex(Face::REFERENCE, 0);
        let a = antipode(&black);
        assert_eq!(a.cone_point(EPS), Some((Color::Black, -1.0)));
        let c = antipode(&SurfacePoint::centroid(Face::REFERENCE));
        assert_eq!(c.face, Face::ANTIPODAL);
        assert!(c.coords.approx_eq(PlanePoint::ORIGIN, EPS));

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let q = random_point(&mut rng);
            assert!(antipode(&antipode(&q)).same_point(&q, EPS));
            let a = q.position_3d();
            let b = antipode(&q).position_3d();
            assert!((a[0] + b[0]).abs() + (a[1] + b[1]).abs() + (a[2] + b[2]).abs() < EPS);
        }
    }

    #[test]
    fn off_surface_rejected() {
        assert!(SurfacePoint::new(Face::REFERENCE, PlanePoint::new(1.1, 0.0)).is_err());
        assert!(SurfacePoint::new(Face::REFERENCE, PlanePoint::new(1.0, 0.0)).is_ok());
        assert!(Face::new(8).is_err());
    }

    #[test]
    fn fold_examples() {
        let t = PlanePoint::new(0.4, 0.1);
        assert!(in_fundamental_domain(t, 0.0));
        let (u, g) = fold_to_fundamental(&SurfacePoint::new_unchecked(Face::REFERENCE, t));
        assert!(u.approx_eq(t, EPS));
        assert!(g.is_identity());

        let (u, _) = fold_to_fundamental(&SurfacePoint::new_unchecked(Face::REFERENCE, t.conj()));
        assert!(u.approx_eq(t, EPS));

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let q = random_point(&mut rng);
            let (t, g) = fold_to_fundamental(&q);
            assert!(in_fundamental_domain(t, EPS));
            let back = g
                .invert()
                .apply(&SurfacePoint::new_unchecked(Face::REFERENCE, t));
            assert!(back.same_point(&q, EPS));
        }
    }
}
