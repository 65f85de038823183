//! Exact intrinsic distance by edge-sequence unfolding.
//!
//! A development is a walk in the face adjacency graph (no immediate
//! backtracking) laid flat in the source chart. Because every gluing is the
//! reflection across a fixed chart edge, a development depends only on the
//! sequence of crossed edge indices, never on the starting face, so the table
//! is built once and shared by every source point.
//!
//! A development is admitted for a target only when the straight segment from
//! the source to the developed target meets each developed shared edge in
//! order. Every admitted development is realized by a path on the surface, so
//! the minimum never undershoots the true distance; the shortest geodesic is
//! always among the candidates once the face bound is large enough, which the
//! bound-plus-one comparison certifies.

use std::sync::OnceLock;

use super::{edge_reflection, Face, SurfacePoint, ROOTS};
use crate::error::GeometryError;
use crate::planar::{PlaneIsometry, PlanePoint, EPS};

/// Default bound on the number of faces in a development.
pub const DEFAULT_MAX_FACES: usize = 6;

/// Largest face bound served from the shared tables.
pub const MAX_SHARED_FACES: usize = 10;

#[derive(Clone, Debug)]
pub struct Development {
    /// Crossed edge index (the axis of the vertex opposite the edge) at each step.
    pub crossings: Vec<u8>,
    /// XOR of the crossed axes: the end face is `start ^ mask`.
    pub mask: u8,
    /// Carries the end face chart into the start face chart.
    pub map: PlaneIsometry,
    /// Developed shared edges, in crossing order, in the start chart.
    pub edges: Vec<(PlanePoint, PlanePoint)>,
}

impl Development {
    pub fn face_count(&self) -> usize {
        self.crossings.len() + 1
    }

    pub fn end_face(&self, start: Face) -> Face {
        Face(start.id() ^ self.mask)
    }

    /// The face sequence this development walks through from `start`.
    pub fn face_sequence(&self, start: Face) -> Vec<Face> {
        let mut out = vec![start];
        let mut f = start;
        for &axis in &self.crossings {
            f = f.neighbor(axis as usize);
            out.push(f);
        }
        out
    }

    /// Parameter along `from -> to` at which each shared edge is met, if the
    /// segment meets all of them in order.
    fn crossing_parameters(&self, from: PlanePoint, to: PlanePoint) -> Option<()> {
        let d = to - from;
        let len = d.norm();
        let t_tol = if len > 0.0 { EPS / len } else { 0.0 };
        let mut last = f64::NEG_INFINITY;
        for &(a, b) in &self.edges {
            let t = segment_meets_edge(from, d, len, a, b)?;
            if t < last - t_tol {
                return None;
            }
            last = last.max(t);
        }
        Some(())
    }

    /// Length of the developed segment if this development is admissible.
    pub fn admissible_length(&self, from: PlanePoint, target: PlanePoint) -> Option<f64> {
        let to = self.map.apply(target);
        self.crossing_parameters(from, to).map(|_| from.dist(to))
    }
}

/// Parameter `t` in `[0, 1]` (fattened by `EPS`) where the segment
/// `from + t d` meets the closed edge `ab` (also fattened), or `None`.
fn segment_meets_edge(
    from: PlanePoint,
    d: PlanePoint,
    len: f64,
    a: PlanePoint,
    b: PlanePoint,
) -> Option<f64> {
    let e = b - a;
    let elen = e.norm();
    let den = d.cross(e);
    let w = a - from;
    if len <= EPS {
        // Degenerate segment: the point itself must lie on the edge.
        let s = (w * -1.0).dot(e) / (elen * elen);
        let foot = a + e * s.clamp(0.0, 1.0);
        return (foot.dist(from) <= EPS).then_some(0.0);
    }
    if den.abs() <= EPS * len * elen {
        // Parallel: admit only a collinear overlap.
        if (w.cross(d) / len).abs() > EPS {
            return None;
        }
        let ta = w.dot(d) / (len * len);
        let tb = (b - from).dot(d) / (len * len);
        let lo = ta.min(tb).max(0.0);
        let hi = ta.max(tb).min(1.0);
        return (lo <= hi + EPS / len).then_some(lo);
    }
    let t = w.cross(e) / den;
    let s = w.cross(d) / den;
    let t_tol = EPS / len;
    let s_tol = EPS / elen;
    ((-t_tol..=1.0 + t_tol).contains(&t) && (-s_tol..=1.0 + s_tol).contains(&s)).then_some(t)
}

/// All developments with at most `max_faces` faces, grouped by end-face mask.
#[derive(Clone, Debug)]
pub struct Unfolding {
    max_faces: usize,
    by_mask: [Vec<Development>; 8],
}

impl Unfolding {
    pub fn new(max_faces: usize) -> Self {
        assert!(max_faces >= 1);
        let mut by_mask: [Vec<Development>; 8] = Default::default();
        let root = Development {
            crossings: Vec::new(),
            mask: 0,
            map: PlaneIsometry::IDENTITY,
            edges: Vec::new(),
        };
        let mut frontier = vec![root];
        while let Some(dev) = frontier.pop() {
            if dev.face_count() < max_faces {
                for axis in 0..3u8 {
                    if dev.crossings.last() == Some(&axis) {
                        continue;
                    }
                    let (a, b) = (
                        ROOTS[(axis as usize + 1) % 3],
                        ROOTS[(axis as usize + 2) % 3],
                    );
                    let mut edges = dev.edges.clone();
                    edges.push((dev.map.apply(a), dev.map.apply(b)));
                    let mut crossings = dev.crossings.clone();
                    crossings.push(axis);
                    frontier.push(Development {
                        crossings,
                        mask: dev.mask ^ (1 << axis),
                        map: dev.map.compose(&edge_reflection(axis as usize)),
                        edges,
                    });
                }
            }
            by_mask[dev.mask as usize].push(dev);
        }
        for group in &mut by_mask {
            group.sort_by(|x, y| x.crossings.cmp(&y.crossings));
        }
        Self { max_faces, by_mask }
    }

    pub fn max_faces(&self) -> usize {
        self.max_faces
    }

    /// Developments from `start` that end on `end`.
    pub fn between(&self, start: Face, end: Face) -> &[Development] {
        &self.by_mask[(start.id() ^ end.id()) as usize]
    }

    pub fn len(&self) -> usize {
        self.by_mask.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Shared table for a face bound in `1..=MAX_SHARED_FACES`.
    pub fn shared(max_faces: usize) -> &'static Unfolding {
        static TABLES: OnceLock<Vec<Unfolding>> = OnceLock::new();
        assert!(
            (1..=MAX_SHARED_FACES).contains(&max_faces),
            "face bound {max_faces} outside 1..={MAX_SHARED_FACES}"
        );
        let tables = TABLES.get_or_init(|| (1..=MAX_SHARED_FACES).map(Unfolding::new).collect());
        &tables[max_faces - 1]
    }
}

/// Distances from one fixed source point, with the face-bound stability check.
#[derive(Clone, Copy, Debug)]
pub struct GeodesicField {
    source: SurfacePoint,
    base: &'static Unfolding,
    extended: &'static Unfolding,
}

impl GeodesicField {
    pub fn new(source: SurfacePoint) -> Self {
        Self::with_max_faces(source, DEFAULT_MAX_FACES)
    }

    pub fn with_max_faces(source: SurfacePoint, max_faces: usize) -> Self {
        Self {
            source,
            base: Unfolding::shared(max_faces),
            extended: Unfolding::shared(max_faces + 1),
        }
    }

    pub fn source(&self) -> &SurfacePoint {
        &self.source
    }

    pub fn max_faces(&self) -> usize {
        self.base.max_faces()
    }

    fn min_over(
        &self,
        table: &Unfolding,
        target: &SurfacePoint,
        min_faces: usize,
    ) -> (f64, Option<usize>) {
        let devs = table.between(self.source.face, target.face);
        let mut best = (f64::INFINITY, None);
        for (k, dev) in devs.iter().enumerate() {
            if dev.face_count() < min_faces {
                continue;
            }
            if let Some(len) = dev.admissible_length(self.source.coords, target.coords) {
                if len < best.0 {
                    best = (len, Some(k));
                }
            }
        }
        best
    }

    /// Intrinsic distance without the stability check.
    pub fn distance_unchecked(&self, target: &SurfacePoint) -> f64 {
        self.min_over(self.base, target, 0).0
    }

    /// Intrinsic distance; errors if one more face would change the answer.
    pub fn distance(&self, target: &SurfacePoint) -> Result<f64, GeometryError> {
        let base = self.distance_unchecked(target);
        let only_longer = self
            .min_over(self.extended, target, self.extended.max_faces())
            .0;
        if !base.is_finite() || only_longer < base - EPS {
            return Err(GeometryError::NotConverged {
                delta: base - only_longer,
                max_faces: self.extended.max_faces(),
            });
        }
        Ok(base)
    }

    /// The shortest admissible development and its length.
    pub fn shortest(&self, target: &SurfacePoint) -> Option<(f64, &'static Development)> {
        let (len, k) = self.min_over(self.base, target, 0);
        k.map(|k| (len, &self.base.between(self.source.face, target.face)[k]))
    }

    /// Developed images of the source in the target's face chart for every
    /// development admissible at `target` whose length is within `slack` of the
    /// shortest. Near the target, the distance is the minimum of Euclidean
    /// distances to these images.
    pub fn active_images(&self, target: &SurfacePoint, slack: f64) -> Vec<PlanePoint> {
        let devs = self.base.between(self.source.face, target.face);
        let lens: Vec<Option<f64>> = devs
            .iter()
            .map(|d| d.admissible_length(self.source.coords, target.coords))
            .collect();
        let best = lens.iter().flatten().fold(f64::INFINITY, |m, &l| m.min(l));
        let mut images: Vec<PlanePoint> = Vec::new();
        for (dev, len) in devs.iter().zip(&lens) {
            if let Some(len) = len {
                if *len <= best + slack {
                    let img = dev.map.invert().apply(self.source.coords);
                    if !images.iter().any(|q| q.approx_eq(img, 1e-7)) {
                        images.push(img);
                    }
                }
            }
        }
        images
    }
}
