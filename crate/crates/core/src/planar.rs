//! Planar primitives shared by every chart computation.
//!
//! Chart points double as complex numbers (`x + iy`): rigid motions act as
//! `z -> w z + c` or `z -> w conj(z) + c` with `|w| = 1`, which keeps the
//! unfolding algebra identical to the complex-number formulas it encodes.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::GeometryError;

/// `sqrt(3)`, referenced by every closed form on the equilateral tiling.
pub const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Global predicate tolerance, in chart units.
pub const EPS: f64 = 1e-9;

/// A point (or vector) of a face chart.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const ORIGIN: PlanePoint = PlanePoint { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at angle `theta`.
    pub fn from_angle(theta: f64) -> Self {
        Self::new(theta.cos(), theta.sin())
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(self, other: PlanePoint) -> f64 {
        (self - other).norm()
    }

    pub fn dot(self, other: PlanePoint) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: PlanePoint) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn conj(self) -> Self {
        Self::new(self.x, -self.y)
    }

    /// Complex product.
    pub fn cmul(self, other: PlanePoint) -> Self {
        Self::new(
            self.x * other.x - self.y * other.y,
            self.x * other.y + self.y * other.x,
        )
    }

    /// Complex quotient; the caller guarantees `other != 0`.
    pub fn cdiv(self, other: PlanePoint) -> Self {
        let n = other.norm_sq();
        self.cmul(other.conj()) * (1.0 / n)
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn lerp(self, other: PlanePoint, t: f64) -> Self {
        self + (other - self) * t
    }

    pub fn approx_eq(self, other: PlanePoint, tol: f64) -> bool {
        self.dist(other) <= tol
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for PlanePoint {
    type Output = PlanePoint;
    fn add(self, o: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for PlanePoint {
    type Output = PlanePoint;
    fn sub(self, o: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for PlanePoint {
    type Output = PlanePoint;
    fn neg(self) -> PlanePoint {
        PlanePoint::new(-self.x, -self.y)
    }
}

impl Mul<f64> for PlanePoint {
    type Output = PlanePoint;
    fn mul(self, s: f64) -> PlanePoint {
        PlanePoint::new(self.x * s, self.y * s)
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Twice the signed area of the triangle `abc` (positive when counterclockwise).
pub fn orient(a: PlanePoint, b: PlanePoint, c: PlanePoint) -> f64 {
    (b - a).cross(c - a)
}

/// Whether three points are collinear, relative to their bounding scale.
pub fn collinear(a: PlanePoint, b: PlanePoint, c: PlanePoint) -> bool {
    let scale = [a.dist(b), b.dist(c), c.dist(a)]
        .into_iter()
        .fold(0.0_f64, f64::max);
    orient(a, b, c).abs() <= EPS * scale.max(1.0) * scale
}

/// The point equidistant from `a`, `b` and `c`.
pub fn circumcenter(
    a: PlanePoint,
    b: PlanePoint,
    c: PlanePoint,
) -> Result<PlanePoint, GeometryError> {
    if collinear(a, b, c) {
        return Err(GeometryError::CollinearInput);
    }
    // Work relative to `a` to keep the normal equations well scaled.
    let b = b - a;
    let c = c - a;
    let d = 2.0 * b.cross(c);
    let (bb, cc) = (b.norm_sq(), c.norm_sq());
    let ux = (c.y * bb - b.y * cc) / d;
    let uy = (b.x * cc - c.x * bb) / d;
    Ok(a + PlanePoint::new(ux, uy))
}

/// Imaginary part of the cross ratio of four chart points,
/// `Im((z1-z2)(z3-z4) conj((z1-z3)(z2-z4)))`.
///
/// Vanishes exactly when the points are co-circular or collinear.
pub fn cocircularity(z1: PlanePoint, z2: PlanePoint, z3: PlanePoint, z4: PlanePoint) -> f64 {
    let num = (z1 - z2).cmul(z3 - z4);
    let den = (z1 - z3).cmul(z2 - z4);
    num.cmul(den.conj()).y
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IsometryKind {
    Direct,
    Reflective,
}

/// A rigid motion of the chart plane: `z -> w z + c` (direct) or
/// `z -> w conj(z) + c` (reflective), with `|w| = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneIsometry {
    pub kind: IsometryKind,
    pub rotation: PlanePoint,
    pub translation: PlanePoint,
}

impl PlaneIsometry {
    pub const IDENTITY: PlaneIsometry = PlaneIsometry {
        kind: IsometryKind::Direct,
        rotation: PlanePoint::new(1.0, 0.0),
        translation: PlanePoint::ORIGIN,
    };

    pub fn direct(rotation: PlanePoint, translation: PlanePoint) -> Self {
        Self {
            kind: IsometryKind::Direct,
            rotation: rotation * (1.0 / rotation.norm()),
            translation,
        }
    }

    pub fn reflective(rotation: PlanePoint, translation: PlanePoint) -> Self {
        Self {
            kind: IsometryKind::Reflective,
            rotation: rotation * (1.0 / rotation.norm()),
            translation,
        }
    }

    pub fn translation_by(v: PlanePoint) -> Self {
        Self::direct(PlanePoint::new(1.0, 0.0), v)
    }

    /// Reflection across the line through `a` and `b`.
    pub fn reflection_across(a: PlanePoint, b: PlanePoint) -> Self {
        let e = b - a;
        // z -> a + u conj(z - a) with u = e / conj(e).
        let u = e.cdiv(e.conj());
        Self::reflective(u, a - u.cmul(a.conj()))
    }

    /// Rotation by `theta` about `center`.
    pub fn rotation_about(center: PlanePoint, theta: f64) -> Self {
        let w = PlanePoint::from_angle(theta);
        Self::direct(w, center - w.cmul(center))
    }

    pub fn apply(&self, p: PlanePoint) -> PlanePoint {
        let z = match self.kind {
            IsometryKind::Direct => p,
            IsometryKind::Reflective => p.conj(),
        };
        self.rotation.cmul(z) + self.translation
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &PlaneIsometry) -> PlaneIsometry {
        let (w2, c2) = match self.kind {
            IsometryKind::Direct => (other.rotation, other.translation),
            IsometryKind::Reflective => (other.rotation.conj(), other.translation.conj()),
        };
        let kind = if self.kind == other.kind {
            IsometryKind::Direct
        } else {
            IsometryKind::Reflective
        };
        PlaneIsometry {
            kind,
            rotation: self.rotation.cmul(w2),
            translation: self.rotation.cmul(c2) + self.translation,
        }
    }

    pub fn invert(&self) -> PlaneIsometry {
        let w = self.rotation;
        let c = self.translation;
        match self.kind {
            IsometryKind::Direct => {
                let wi = w.conj();
                PlaneIsometry {
                    kind: IsometryKind::Direct,
                    rotation: wi,
                    translation: -wi.cmul(c),
                }
            }
            IsometryKind::Reflective => PlaneIsometry {
                kind: IsometryKind::Reflective,
                rotation: w,
                translation: -w.cmul(c.conj()),
            },
        }
    }

    /// Rotation angle in `(-pi, pi]` of a direct isometry's linear part.
    pub fn angle(&self) -> f64 {
        self.rotation.y.atan2(self.rotation.x)
    }

    pub fn approx_eq(&self, other: &PlaneIsometry, tol: f64) -> bool {
        self.kind == other.kind
            && self.rotation.approx_eq(other.rotation, tol)
            && self.translation.approx_eq(other.translation, tol)
    }
}

/// A line through `anchor` with unit `direction`; also used for bisectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    pub anchor: PlanePoint,
    pub direction: PlanePoint,
}

impl Line {
    pub fn new(anchor: PlanePoint, direction: PlanePoint) -> Self {
        Self {
            anchor,
            direction: direction * (1.0 / direction.norm()),
        }
    }

    pub fn through(a: PlanePoint, b: PlanePoint) -> Self {
        Self::new(a, b - a)
    }

    /// Perpendicular bisector of `ab`, directed so that `a` lies on its left.
    pub fn bisector(a: PlanePoint, b: PlanePoint) -> Self {
        Self::new((a + b) * 0.5, (b - a).perp())
    }

    /// Signed distance, positive on the left of the direction.
    pub fn signed_distance(&self, p: PlanePoint) -> f64 {
        self.direction.cross(p - self.anchor)
    }

    pub fn project(&self, p: PlanePoint) -> PlanePoint {
        self.anchor + self.direction * self.direction.dot(p - self.anchor)
    }

    /// Intersection point, or `None` for (near) parallel lines.
    pub fn intersect(&self, other: &Line) -> Option<PlanePoint> {
        let den = self.direction.cross(other.direction);
        if den.abs() < EPS {
            return None;
        }
        let t = (other.anchor - self.anchor).cross(other.direction) / den;
        Some(self.anchor + self.direction * t)
    }
}

/// The linear fractional map `x -> (a x + b) / (c x + d)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lft1D {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Lft1D {
    pub const IDENTITY: Lft1D = Lft1D {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, x: f64) -> Result<f64, GeometryError> {
        let den = self.c * x + self.d;
        if den.abs() <= EPS {
            return Err(GeometryError::PoleAt(x));
        }
        Ok((self.a * x + self.b) / den)
    }

    /// Matrix product: `self.compose(other)` applies `other` first.
    pub fn compose(&self, other: &Lft1D) -> Lft1D {
        Lft1D {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// Real fixed points in ascending order. The identity map reports none.
    pub fn fixed_points(&self) -> Vec<f64> {
        // c x^2 + (d - a) x - b = 0
        let qa = self.c;
        let qb = self.d - self.a;
        let qc = -self.b;
        let scale = [qa, qb, qc].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return Vec::new();
        }
        let (qa, qb, qc) = (qa / scale, qb / scale, qc / scale);
        if qa.abs() <= EPS {
            if qb.abs() <= EPS {
                return Vec::new();
            }
            return vec![-qc / qb];
        }
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < -EPS {
            return Vec::new();
        }
        let disc = disc.max(0.0);
        if disc <= EPS * EPS {
            return vec![-qb / (2.0 * qa)];
        }
        // Numerically stable pair of roots.
        let q = -0.5 * (qb + qb.signum() * disc.sqrt());
        let mut roots = vec![q / qa, qc / q];
        roots.sort_by(f64::total_cmp);
        roots
    }

    /// Derivative `det / (c x0 + d)^2` at a fixed point `x0`.
    pub fn multiplier(&self, x0: f64) -> Result<f64, GeometryError> {
        let image = self.apply(x0)?;
        if (image - x0).abs() > EPS * x0.abs().max(1.0) {
            return Err(GeometryError::NotAFixedPoint(x0));
        }
        let den = self.c * x0 + self.d;
        Ok(self.determinant() / (den * den))
    }

    /// Whether the two maps agree as projective matrices (equal up to scale).
    pub fn proportional_to(&self, other: &Lft1D, rel_tol: f64) -> bool {
        let m = [self.a, self.b, self.c, self.d];
        let n = [other.a, other.b, other.c, other.d];
        let k = m
            .iter()
            .zip(&n)
            .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
            .map(|(a, b)| a / b)
            .unwrap_or(0.0);
        let scale = m.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
        k.is_finite()
            && m.iter()
                .zip(&n)
                .all(|(a, b)| (a - k * b).abs() <= rel_tol * scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: f64, y: f64) -> PlanePoint {
        PlanePoint::new(x, y)
    }

    #[test]
    fn circumcenter_of_right_isoceles() {
        let c = circumcenter(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)).unwrap();
        assert!(c.approx_eq(p(0.5, 0.5), 1e-15));
    }

    #[test]
    fn circumcenter_rejects_collinear() {
        assert_eq!(
            circumcenter(p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)),
            Err(GeometryError::CollinearInput)
        );
    }

    #[test]
    fn cocircularity_of_square_and_generic_points() {
        let v = cocircularity(p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0));
        assert!(v.abs() < 1e-15);
        let g = cocircularity(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(5.0, 5.0));
        assert!(g.abs() > 1.0);
    }

    #[test]
    fn identity_isometry() {
        assert_eq!(PlaneIsometry::IDENTITY.apply(p(3.0, 4.0)), p(3.0, 4.0));
    }

    #[test]
    fn reflection_across_x_axis() {
        let r = PlaneIsometry::reflection_across(p(-1.0, 0.0), p(2.0, 0.0));
        assert!(r.apply(p(0.3, 0.7)).approx_eq(p(0.3, -0.7), 1e-15));
        assert!(r.compose(&r).approx_eq(&PlaneIsometry::IDENTITY, 1e-15));
    }

    #[test]
    fn rotation_about_fixes_center() {
        let c = p(1.0, 2.0);
        let g = PlaneIsometry::rotation_about(c, 2.0 * std::f64::consts::PI / 3.0);
        assert!(g.apply(c).approx_eq(c, 1e-15));
        let q = g.apply(g.apply(g.apply(p(5.0, -1.0))));
        assert!(q.approx_eq(p(5.0, -1.0), 1e-12));
    }

    #[test]
    fn lft_basics() {
        // x -> 2x/(x+1), the bottom-edge restriction of the right branch.
        let m = Lft1D::new(2.0, 0.0, 1.0, 1.0);
        assert!((m.apply(0.5).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let fp = m.fixed_points();
        assert_eq!(fp.len(), 2);
        assert!(fp[0].abs() < 1e-15 && (fp[1] - 1.0).abs() < 1e-15);
        assert!((m.multiplier(1.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(m.multiplier(0.5), Err(GeometryError::NotAFixedPoint(0.5)));
        assert_eq!(m.apply(-1.0), Err(GeometryError::PoleAt(-1.0)));
    }

    #[test]
    fn line_intersection_and_bisector() {
        let b = Line::bisector(p(0.0, 0.0), p(2.0, 0.0));
        assert!(b.signed_distance(p(1.0, 5.0)).abs() < 1e-15);
        assert!(b.signed_distance(p(0.0, 0.0)) > 0.0);
        let l = Line::through(p(0.0, 1.0), p(3.0, 1.0));
        assert!(b.intersect(&l).unwrap().approx_eq(p(1.0, 1.0), 1e-15));
        assert!(l
            .intersect(&Line::through(p(0.0, 2.0), p(1.0, 2.0)))
            .is_none());
    }

    fn coord() -> impl Strategy<Value = f64> {
        -5.0..5.0_f64
    }

    fn point() -> impl Strategy<Value = PlanePoint> {
        (coord(), coord()).prop_map(|(x, y)| p(x, y))
    }

    fn isometry() -> impl Strategy<Value = PlaneIsometry> {
        (0.0..std::f64::consts::TAU, point(), any::<bool>()).prop_map(|(t, c, refl)| {
            if refl {
                PlaneIsometry::reflective(PlanePoint::from_angle(t), c)
            } else {
                PlaneIsometry::direct(PlanePoint::from_angle(t), c)
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn circumcenter_is_equidistant(a in point(), b in point(), c in point()) {
            prop_assume!(orient(a, b, c).abs() > 1e-3);
            let o = circumcenter(a, b, c).unwrap();
            let r = o.dist(a);
            prop_assert!((o.dist(b) - r).abs() < 10.0 * EPS * r.max(1.0));
            prop_assert!((o.dist(c) - r).abs() < 10.0 * EPS * r.max(1.0));
        }
    }

    proptest! {
        #[test]
        fn isometries_preserve_distance(g in isometry(), a in point(), b in point()) {
            prop_assert!((g.apply(a).dist(g.apply(b)) - a.dist(b)).abs() < EPS);
        }

        #[test]
        fn compose_and_invert_are_consistent(g in isometry(), h in isometry(), a in point()) {
            let lhs = g.compose(&h).apply(a);
            let rhs = g.apply(h.apply(a));
            prop_assert!(lhs.approx_eq(rhs, EPS));
            prop_assert!(g.compose(&g.invert()).apply(a).approx_eq(a, EPS));
            prop_assert!(g.invert().compose(&g).approx_eq(&PlaneIsometry::IDENTITY, EPS));
        }

        #[test]
        fn cocircularity_magnitude_under_pair_swap(a in point(), b in point(), c in point(), d in point()) {
            // Swapping (z1,z2) together with (z3,z4) preserves the cross ratio.
            let v = cocircularity(a, b, c, d);
            let w = cocircularity(b, a, d, c);
            prop_assert!((v.abs() - w.abs()).abs() <= 1e-9 * v.abs().max(1.0));
        }

        #[test]
        fn lft_composition_is_matrix_product(
            m in (coord(), coord(), coord(), coord()),
            n in (coord(), coord(), coord(), coord()),
            x in coord(),
        ) {
            let m = Lft1D::new(m.0, m.1, m.2, m.3);
            let n = Lft1D::new(n.0, n.1, n.2, n.3);
            prop_assume!(m.determinant().abs() > 1e-3 && n.determinant().abs() > 1e-3);
            if let Ok(inner) = n.apply(x) {
                if let (Ok(lhs), Ok(rhs)) = (m.compose(&n).apply(x), m.apply(inner)) {
                    prop_assume!(lhs.abs() < 1e6);
                    prop_assert!((lhs - rhs).abs() <= 1e-6 * lhs.abs().max(1.0));
                }
            }
        }
    }
}
