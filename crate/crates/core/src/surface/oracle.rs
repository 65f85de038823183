//! Brute-force farthest points: evaluate the unfolding distance on a
//! triangular grid over every face, then snap each near-maximal grid point to
//! the exact local maximum of the distance function nearby.
//!
//! Near any point the distance is the minimum of Euclidean distances to the
//! developed images of the source that are admissible there, so a local
//! maximum is either a vertex of the Voronoi diagram of those images (a
//! circumcenter of three of them) or a cone point. Snapping only proposes
//! candidates; every reported value is an oracle evaluation, so the reported
//! maximum is a genuine distance and never exceeds the true one.

use super::{Face, GeodesicField, SurfacePoint, ROOTS};
use crate::error::GeometryError;
use crate::planar::{circumcenter, EPS};

/// Snapped maxima whose values agree within this are all reported as maximizers.
pub const ORACLE_VALUE_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct MaximizerCluster {
    /// Snapped location of the local maximum.
    pub point: SurfacePoint,
    pub value: f64,
    /// Best raw grid point that snapped into this cluster.
    pub grid_point: SurfacePoint,
    pub grid_value: f64,
    /// Number of near-maximal grid points that snapped into this cluster.
    pub members: usize,
}

#[derive(Clone, Debug)]
pub struct FarthestOracle {
    /// Grid spacing actually used (at most the requested one).
    pub spacing: f64,
    /// Raw maximum over the grid.
    pub grid_value: f64,
    /// Maximum after snapping.
    pub value: f64,
    /// Grid points within one spacing of the raw maximum.
    pub near_max: usize,
    /// Clusters of maximizers, best first; clusters closer than twice the spacing are merged.
    pub clusters: Vec<MaximizerCluster>,
}

impl FarthestOracle {
    pub fn points(&self) -> Vec<SurfacePoint> {
        self.clusters.iter().map(|c| c.point).collect()
    }
}

/// Barycentric grid of spacing at most `h` on one face.
pub fn face_grid(face: Face, h: f64) -> (f64, Vec<SurfacePoint>) {
    let n = (super::EDGE_LENGTH / h).ceil().max(1.0) as usize;
    let inv = 1.0 / n as f64;
    let mut pts = Vec::with_capacity((n + 1) * (n + 2) / 2);
    for i in 0..=n {
        for j in 0..=(n - i) {
            let k = n - i - j;
            pts.push(SurfacePoint::from_barycentric(
                face,
                [i as f64 * inv, j as f64 * inv, k as f64 * inv],
            ));
        }
    }
    (super::EDGE_LENGTH * inv, pts)
}

fn inside_face(p: &SurfacePoint) -> bool {
    p.barycentric().iter().all(|&l| l >= -EPS)
}

fn snap(
    field: &GeodesicField,
    q: &SurfacePoint,
    value: f64,
    radius: f64,
) -> Result<(SurfacePoint, f64), GeometryError> {
    let mut best = (*q, value);
    let mut consider = |c: SurfacePoint| -> Result<(), GeometryError> {
        let v = field.distance(&c)?;
        if v > best.1 {
            best = (c, v);
        }
        Ok(())
    };
    let images = field.active_images(q, radius);
    for a in 0..images.len() {
        for b in a + 1..images.len() {
            for c in b + 1..images.len() {
                let Ok(center) = circumcenter(images[a], images[b], images[c]) else {
                    continue;
                };
                if center.dist(q.coords) > radius {
                    continue;
                }
                let cand = SurfacePoint::new_unchecked(q.face, center);
                if inside_face(&cand) {
                    consider(cand)?;
                }
            }
        }
    }
    for axis in 0..3 {
        if ROOTS[axis].dist(q.coords) <= radius {
            consider(SurfacePoint::vertex(q.face, axis))?;
        }
    }
    Ok(best)
}

/// Farthest points from `p`, by exhaustive grid evaluation at spacing `h`.
pub fn farthest_oracle(p: &SurfacePoint, h: f64) -> Result<FarthestOracle, GeometryError> {
    assert!(h > 0.0, "grid spacing must be positive");
    let field = GeodesicField::new(*p);
    let mut samples: Vec<(SurfacePoint, f64)> = Vec::new();
    let mut spacing = h;
    for face in Face::all() {
        let (s, grid) = face_grid(face, h);
        spacing = s;
        for q in grid {
            let v = field.distance(&q)?;
            samples.push((q, v));
        }
    }
    let grid_value = samples
        .iter()
        .map(|s| s.1)
        .fold(f64::NEG_INFINITY, f64::max);

    let radius = 3.0 * spacing;
    let mut snapped: Vec<(SurfacePoint, f64, SurfacePoint, f64)> = Vec::new();
    let mut near_max = 0;
    for (q, v) in samples.iter().filter(|s| s.1 >= grid_value - spacing) {
        near_max += 1;
        let (s, sv) = snap(&field, q, *v, radius)?;
        snapped.push((s, sv, *q, *v));
    }
    let value = snapped.iter().map(|s| s.1).fold(grid_value, f64::max);
    snapped.retain(|s| s.1 >= value - ORACLE_VALUE_TOL);
    // Stable order: by value, then by embedded position.
    snapped.sort_by(|a, b| {
        b.1.total_cmp(&a.1).then_with(|| {
            a.0.position_3d()
                .partial_cmp(&b.0.position_3d())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });

    let mut clusters: Vec<MaximizerCluster> = Vec::new();
    for (s, sv, g, gv) in snapped {
        match clusters
            .iter_mut()
            .find(|c| c.point.chord(&s) < 2.0 * spacing)
        {
            Some(c) => {
                c.members += 1;
                if gv > c.grid_value {
                    c.grid_point = g;
                    c.grid_value = gv;
                }
            }
            None => clusters.push(MaximizerCluster {
                point: s,
                value: sv,
                grid_point: g,
                grid_value: gv,
                members: 1,
            }),
        }
    }
    Ok(FarthestOracle {
        spacing,
        grid_value,
        value,
        near_max,
        clusters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::PlanePoint;

    #[test]
    fn grid_covers_face_vertices() {
        let (s, g) = face_grid(Face::REFERENCE, 0.1);
        assert!(s <= 0.1);
        for axis in 0..3 {
            assert!(g.iter().any(|q| q.coords.approx_eq(ROOTS[axis], 1e-12)));
        }
    }

    #[test]
    fn cone_point_sees_only_its_antipode() {
        let p = SurfacePoint::vertex(Face::REFERENCE, 0);
        let o = farthest_oracle(&p, 0.05).unwrap();
        assert_eq!(o.clusters.len(), 1);
        assert!((o.value - 3.0).abs() < 1e-9);
        assert!(o.clusters[0].point.same_point(&p.antipode(), 1e-9));
        assert!((o.grid_value - 3.0).abs() < 0.1);
    }

    #[test]
    fn centroid_value() {
        let o = farthest_oracle(&SurfacePoint::centroid(Face::REFERENCE), 0.05).unwrap();
        assert!((o.value - 7.0_f64.sqrt()).abs() < 1e-9);
        assert_eq!(o.clusters.len(), 1);
        assert!(o.clusters[0]
            .point
            .same_point(&SurfacePoint::centroid(Face::ANTIPODAL), 1e-9));
    }

    #[test]
    fn bottom_edge_probe_has_single_maximizer() {
        let p = SurfacePoint::new(Face::REFERENCE, PlanePoint::new(0.5, 0.0)).unwrap();
        let o = farthest_oracle(&p, 0.05).unwrap();
        assert_eq!(o.clusters.len(), 1);
        assert!((o.value - 259.0_f64.sqrt() / 6.0).abs() < 1e-9);
    }
}
