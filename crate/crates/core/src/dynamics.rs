//! Iterating `f`. Each branch preserves height and acts on a horizontal line
//! as a linear fractional map, so orbits run along horizontal segments of
//! `T` toward one of the two sides of `∂∞T`.

use crate::error::GeometryError;
use crate::farthest::{apply_f, classify, curve_j, f_left, f_right, root_r, FImage, RegionClass};
use crate::hexagon::TOP_VERTEX;
use crate::planar::{Lft1D, PlanePoint, SQRT_3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Left,
    Right,
}

impl Branch {
    pub fn apply(self, p: PlanePoint) -> PlanePoint {
        match self {
            Branch::Left => f_left(p),
            Branch::Right => f_right(p),
        }
    }
}

/// `x -> (A x + B) / (C x + D)` at a fixed height.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LftCoeffs {
    pub y: f64,
    pub branch: Branch,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl LftCoeffs {
    pub fn lft(&self) -> Lft1D {
        Lft1D::new(self.a, self.b, self.c, self.d)
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, x: f64) -> Result<f64, GeometryError> {
        self.lft().apply(x)
    }
}

pub fn lft_for_line(y: f64, branch: Branch) -> LftCoeffs {
    let (a, b, c, d) = (-(y + SQRT_3), SQRT_3 * y * y - y, SQRT_3, y - 2.0 * SQRT_3);
    match branch {
        Branch::Left => LftCoeffs {
            y,
            branch,
            a,
            b,
            c,
            d,
        },
        Branch::Right => LftCoeffs {
            y,
            branch,
            a: d,
            b: -b,
            c: -c,
            d: a,
        },
    }
}

/// The fixed point of a branch on `∂∞T` at height `y`, with the derivative there.
pub fn boundary_fixed_point(y: f64, branch: Branch) -> Result<(f64, f64), GeometryError> {
    let x0 = match branch {
        Branch::Left => y / SQRT_3,
        Branch::Right => 1.0 - SQRT_3 * y,
    };
    let m = lft_for_line(y, branch).lft().multiplier(x0)?;
    Ok((x0, m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    MaxIter,
    Converged,
    HitOnJ,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Self::MaxIter => "max_iter",
            Self::Converged => "converged",
            Self::HitOnJ => "hit_OnJ",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    pub start: PlanePoint,
    /// Starts with `start`.
    pub points: Vec<PlanePoint>,
    pub terminated_by: Termination,
}

impl Orbit {
    pub fn last(&self) -> PlanePoint {
        *self.points.last().unwrap_or(&self.start)
    }

    pub fn iterations(&self) -> usize {
        self.points.len() - 1
    }
}

/// Iterates `f` from `p`.
///
/// Steps shrink geometrically near the attracting fixed point, with ratio
/// close to 1 near the top vertex, so a small step alone does not mean the
/// limit is close. The orbit counts as converged once the step is below
/// `tol` and the geometric tail `step * rho / (1 - rho)`, with `rho` the ratio
/// of the last two steps, is below `tol` as well.
pub fn orbit(p: PlanePoint, max_iter: usize, tol: f64) -> Result<Orbit, GeometryError> {
    let mut points = vec![p];
    let mut cur = p;
    let mut prev_step = f64::INFINITY;
    let mut terminated_by = Termination::MaxIter;
    if classify(p)? == RegionClass::OnJ {
        return Ok(Orbit {
            start: p,
            points,
            terminated_by: Termination::HitOnJ,
        });
    }
    for _ in 0..max_iter {
        let next = match apply_f(cur)? {
            FImage::Single(q) => q,
            FImage::Pair { .. } => unreachable!("OnJ is checked before stepping"),
        };
        let step = next.dist(cur);
        points.push(next);
        cur = next;
        if classify(cur)? == RegionClass::OnJ {
            terminated_by = Termination::HitOnJ;
            break;
        }
        let rho = step / prev_step;
        let tail = if rho < 1.0 {
            step * rho / (1.0 - rho)
        } else {
            f64::INFINITY
        };
        if step == 0.0 || (step < tol && tail < tol) {
            terminated_by = Termination::Converged;
            break;
        }
        prev_step = step;
    }
    Ok(Orbit {
        start: p,
        points,
        terminated_by,
    })
}

/// The point of `J` at height `y`, found by bisection in `x` (`J` is increasing).
pub fn j_at_height(y: f64) -> PlanePoint {
    if y >= TOP_VERTEX.y {
        return TOP_VERTEX;
    }
    let (mut lo, mut hi) = (root_r(), 0.25);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid >= 0.25 || curve_j(mid).map_or(true, |v| v > y) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    PlanePoint::new(lo, y)
}

/// `n` points of the closure of `J` at uniformly spaced heights, bottom to top.
pub fn sample_j_by_height(n: usize) -> Vec<PlanePoint> {
    let n = n.max(2);
    (0..n)
        .map(|i| j_at_height(TOP_VERTEX.y * i as f64 / (n - 1) as f64))
        .collect()
}

/// `f^k(J_l)` and `f^k(J_r)`.
#[derive(Clone, Debug, PartialEq)]
pub struct JBand {
    pub k: usize,
    pub left: Vec<PlanePoint>,
    pub right: Vec<PlanePoint>,
}

/// Forward images of `J` pushed off to either side: the left branch iterated
/// on `J_l` and the right branch on `J_r`, for `k = 1..=k_max`.
pub fn j_band_images(k_max: usize, n_samples: usize) -> Vec<JBand> {
    let mut left = sample_j_by_height(n_samples);
    let mut right = left.clone();
    (1..=k_max)
        .map(|k| {
            left = left.iter().map(|&p| f_left(p)).collect();
            right = right.iter().map(|&p| f_right(p)).collect();
            JBand {
                k,
                left: left.clone(),
                right: right.clone(),
            }
        })
        .collect()
}

/// Horizontal gap between images `k` and `k + 1` of each family, per sample height:
/// `(left gaps, right gaps)` for consecutive entries of `bands`.
pub fn band_gaps(bands: &[JBand]) -> Vec<(Vec<f64>, Vec<f64>)> {
    bands
        .windows(2)
        .map(|w| {
            let l = w[0]
                .left
                .iter()
                .zip(&w[1].left)
                .map(|(a, b)| (a.x - b.x).abs())
                .collect();
            let r = w[0]
                .right
                .iter()
                .zip(&w[1].right)
                .map(|(a, b)| (a.x - b.x).abs())
                .collect();
            (l, r)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farthest::{distance_to_boundary_inf, distance_to_j};
    use crate::hexagon::{phi, SquareParams};
    use crate::planar::EPS;
    use crate::surface::in_fundamental_domain;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(x: f64, y: f64) -> PlanePoint {
        PlanePoint::new(x, y)
    }

    #[test]
    fn coefficients_at_height_zero() {
        let r = lft_for_line(0.0, Branch::Right).lft();
        assert!(r.proportional_to(&Lft1D::new(2.0, 0.0, 1.0, 1.0), 1e-12));
        let l = lft_for_line(0.0, Branch::Left).lft();
        assert!(l.proportional_to(&Lft1D::new(1.0, 0.0, -1.0, 2.0), 1e-12));
        assert!((l.apply(0.5).unwrap() - 0.5 / 1.5).abs() < 1e-15);
    }

    #[test]
    fn branches_are_inverse_and_match_f() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for i in 0..50 {
            let y = TOP_VERTEX.y * i as f64 / 49.0;
            let l = lft_for_line(y, Branch::Left);
            let r = lft_for_line(y, Branch::Right);
            assert!(l
                .lft()
                .compose(&r.lft())
                .proportional_to(&Lft1D::IDENTITY, 1e-9));
            let x = y / SQRT_3 + rng.random::<f64>() * (1.0 - 4.0 * y / SQRT_3);
            assert!((l.apply(x).unwrap() - f_left(pt(x, y)).x).abs() < 1e-12);
            assert!((r.apply(x).unwrap() - f_right(pt(x, y)).x).abs() < 1e-12);
        }
    }

    #[test]
    fn determinant_is_positive() {
        for i in 0..1000 {
            let y = TOP_VERTEX.y * i as f64 / 999.0;
            let det = lft_for_line(y, Branch::Left).determinant();
            assert!((det - (-4.0 * y * y + 2.0 * SQRT_3 * y + 6.0)).abs() < 1e-12);
            assert!(det > 0.0);
            assert!((lft_for_line(y, Branch::Right).determinant() - det).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_fixed_points_attract() {
        let (x0, m) = boundary_fixed_point(0.0, Branch::Right).unwrap();
        assert!((x0 - 1.0).abs() < 1e-15 && (m - 0.5).abs() < 1e-12);
        let (x0, m) = boundary_fixed_point(0.0, Branch::Left).unwrap();
        assert!(x0.abs() < 1e-15 && (m - 0.5).abs() < 1e-12);
        let mut y = 0.0;
        while y <= TOP_VERTEX.y - 0.01 {
            for b in [Branch::Left, Branch::Right] {
                let (x0, m) = boundary_fixed_point(y, b).unwrap();
                assert!((lft_for_line(y, b).apply(x0).unwrap() - x0).abs() < EPS);
                assert!(m.abs() < 1.0);
            }
            y += 0.001;
        }
    }

    #[test]
    fn orbit_along_bottom_edge() {
        let o = orbit(pt(0.5, 0.0), 3, 0.0).unwrap();
        let xs: Vec<f64> = o.points.iter().map(|p| p.x).collect();
        for (a, b) in xs.iter().zip([0.5, 2.0 / 3.0, 0.8, 8.0 / 9.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(o.terminated_by, Termination::MaxIter);
    }

    #[test]
    fn boundary_start_is_constant() {
        let p = pt(0.1, 0.1 * SQRT_3);
        let o = orbit(p, 50, 1e-12).unwrap();
        assert_eq!(o.terminated_by, Termination::Converged);
        assert!(o.points.iter().all(|q| q.approx_eq(p, 1e-12)));
    }

    #[test]
    fn start_on_j_halts() {
        let p = pt(0.245, curve_j(0.245).unwrap());
        let o = orbit(p, 50, 1e-6).unwrap();
        assert_eq!(o.terminated_by, Termination::HitOnJ);
        assert_eq!(o.points.len(), 1);
    }

    #[test]
    fn random_orbits_converge_to_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut n = 0;
        while n < 100 {
            let p = phi(SquareParams::new(rng.random(), rng.random()));
            if distance_to_j(p) <= 0.01 {
                continue;
            }
            n += 1;
            let o = orbit(p, 200, 1e-6).unwrap();
            assert_eq!(o.terminated_by, Termination::Converged, "{p}");
            assert!(distance_to_boundary_inf(o.last()) < 1e-5, "{p}");
            for w in o.points.windows(2) {
                assert!((w[0].y - w[1].y).abs() < 10.0 * EPS);
                assert!(in_fundamental_domain(w[1], EPS));
            }
        }
    }

    #[test]
    fn j_sampling() {
        let pts = sample_j_by_height(20);
        assert!(pts[0].approx_eq(pt(root_r(), 0.0), 1e-12));
        assert_eq!(*pts.last().unwrap(), TOP_VERTEX);
        for p in &pts[..19] {
            assert!((curve_j(p.x).unwrap() - p.y).abs() < 1e-9);
        }
    }

    #[test]
    fn band_images() {
        let bands = j_band_images(8, 40);
        let r = root_r();
        assert!(bands[0].left[0].approx_eq(pt(r / (2.0 - r), 0.0), 1e-12));
        assert!(bands[0].right[0].approx_eq(pt(2.0 * r / (r + 1.0), 0.0), 1e-12));
        let j = sample_j_by_height(40);
        for (i, b) in bands.iter().enumerate() {
            for (k, (l, rr)) in b.left.iter().zip(&b.right).enumerate() {
                assert!(in_fundamental_domain(*l, EPS) && in_fundamental_domain(*rr, EPS));
                let (pl, pr) = if i == 0 {
                    (j[k], j[k])
                } else {
                    (bands[i - 1].left[k], bands[i - 1].right[k])
                };
                assert!(l.x <= pl.x + EPS && rr.x >= pr.x - EPS);
            }
        }
        // Gaps between consecutive images eventually shrink toward 0 at every height below the top.
        let gaps = band_gaps(&j_band_images(300, 40));
        for idx in (0..39).step_by(4) {
            let series: Vec<(f64, f64)> = gaps.iter().map(|g| (g.0[idx], g.1[idx])).collect();
            // Past the peak, and above rounding noise, the gaps decrease.
            for w in series[40..].windows(2) {
                assert!(w[1].0 <= w[0].0 || w[0].0 < 1e-12, "height index {idx}");
                assert!(w[1].1 <= w[0].1 || w[0].1 < 1e-12, "height index {idx}");
            }
            let first = series
                .iter()
                .fold((0.0_f64, 0.0_f64), |m, s| (m.0.max(s.0), m.1.max(s.1)));
            let last = series[series.len() - 1];
            assert!(
                last.0 < 0.5 * first.0 && last.1 < 0.5 * first.1,
                "height index {idx}"
            );
        }
    }
}
