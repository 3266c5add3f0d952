//! Planar primitives: points, segments, focal ellipses, orientation,
//! segment intersection and convex hulls.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::{abs_eps, EPS_ABS};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        dist(*self, *other)
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        // The plain formula is within an ulp or so of `hypot` and several
        // times faster; `hypot` only takes over when the square sum would
        // overflow or lose precision to underflow.
        let s = self.x * self.x + self.y * self.y;
        if (1e-290..1e290).contains(&s) {
            s.sqrt()
        } else {
            self.x.hypot(self.y)
        }
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
        )
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

pub fn dist(p: Point, q: Point) -> f64 {
    (p - q).norm()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        dist(self.a, self.b)
    }

    pub fn is_degenerate(&self) -> bool {
        self.length() <= abs_eps([&self.a, &self.b])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

/// Sign of the doubled signed area of `pqr`; `|area| <= tol` is `Collinear`.
pub fn orientation(p: Point, q: Point, r: Point, tol: f64) -> Orientation {
    let area = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    if area > tol {
        Orientation::Left
    } else if area < -tol {
        Orientation::Right
    } else {
        Orientation::Collinear
    }
}

/// Area tolerance for [`orientation`] on inputs of the given magnitude.
pub fn area_tolerance<'a>(points: impl IntoIterator<Item = &'a Point>) -> f64 {
    let eps = abs_eps(points);
    eps * (eps / EPS_ABS)
}

/// Ellipse with foci `f1`, `f2` and major axis `c * |f1 f2|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocalEllipse {
    pub f1: Point,
    pub f2: Point,
    pub c: f64,
}

/// Axis-aligned box `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Point,
    pub max: Point,
}

impl Aabb {
    pub fn of_points(points: &[Point]) -> Option<Aabb> {
        let first = *points.first()?;
        Some(points.iter().fold(
            Aabb {
                min: first,
                max: first,
            },
            |b, p| Aabb {
                min: Point::new(b.min.x.min(p.x), b.min.y.min(p.y)),
                max: Point::new(b.max.x.max(p.x), b.max.y.max(p.y)),
            },
        ))
    }

    pub fn contains_box(&self, other: &Aabb) -> bool {
        self.min.x <= other.min.x
            && self.min.y <= other.min.y
            && self.max.x >= other.max.x
            && self.max.y >= other.max.y
    }

    pub fn intersects(&self, other: &Aabb) -> bool {
        self.min.x <= other.max.x
            && other.min.x <= self.max.x
            && self.min.y <= other.max.y
            && other.min.y <= self.max.y
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            self.min,
            Point::new(self.max.x, self.min.y),
            self.max,
            Point::new(self.min.x, self.max.y),
        ]
    }

    pub fn diagonal(&self) -> f64 {
        dist(self.min, self.max)
    }
}

impl FocalEllipse {
    pub fn new(f1: Point, f2: Point, c: f64) -> Self {
        debug_assert!(c >= 1.0, "focal ellipse threshold must be >= 1");
        FocalEllipse { f1, f2, c }
    }

    pub fn focal_distance(&self) -> f64 {
        dist(self.f1, self.f2)
    }

    fn degenerate_radius(&self) -> f64 {
        abs_eps([&self.f1, &self.f2])
    }

    /// Closed containment with the threshold inflated by `1 + rel_tol`.
    ///
    /// Coincident foci degenerate to the single point `f1`.
    pub fn contains(&self, p: Point, rel_tol: f64) -> bool {
        let d = self.focal_distance();
        let r = self.degenerate_radius();
        if d <= r {
            return dist(p, self.f1) <= r;
        }
        dist(p, self.f1) + dist(p, self.f2) <= self.c * d * (1.0 + rel_tol)
    }

    /// Like [`contains`](Self::contains) but with the threshold shrunk by a
    /// relative `margin`; used for conservative whole-cell acceptance.
    pub(crate) fn contains_with_margin(&self, p: Point, rel_tol: f64, margin: f64) -> bool {
        let d = self.focal_distance();
        if d <= self.degenerate_radius() {
            return false;
        }
        dist(p, self.f1) + dist(p, self.f2) <= self.c * d * (1.0 + rel_tol) * (1.0 - margin)
    }

    /// Axis-aligned bounding box of the ellipse inflated by `1 + rel_tol`,
    /// padded so every point accepted by `contains` lies inside it.
    pub fn bounding_box(&self, rel_tol: f64) -> Aabb {
        let d = self.focal_distance();
        let r = self.degenerate_radius();
        let center = self.f1.lerp(self.f2, 0.5);
        let (hx, hy) = if d <= r {
            (r, r)
        } else {
            let semi_major = 0.5 * self.c * d * (1.0 + rel_tol);
            let half_focal = 0.5 * d;
            let semi_minor = (semi_major * semi_major - half_focal * half_focal)
                .max(0.0)
                .sqrt();
            let ux = (self.f2.x - self.f1.x) / d;
            let uy = (self.f2.y - self.f1.y) / d;
            (
                (semi_major * ux).hypot(semi_minor * uy),
                (semi_major * uy).hypot(semi_minor * ux),
            )
        };
        let pad = 1e-12 * (hx.max(hy) + center.x.abs().max(center.y.abs())) + r;
        Aabb {
            min: Point::new(center.x - hx - pad, center.y - hy - pad),
            max: Point::new(center.x + hx + pad, center.y + hy + pad),
        }
    }

    /// Boundary approximated by `segments` points, counterclockwise.
    pub fn boundary_polygon(&self, segments: usize) -> Vec<Point> {
        let d = self.focal_distance();
        let center = self.f1.lerp(self.f2, 0.5);
        let semi_major = 0.5 * self.c * d;
        let semi_minor = (semi_major * semi_major - 0.25 * d * d).max(0.0).sqrt();
        let (ux, uy) = if d > 0.0 {
            ((self.f2.x - self.f1.x) / d, (self.f2.y - self.f1.y) / d)
        } else {
            (1.0, 0.0)
        };
        (0..segments)
            .map(|s| {
                let theta = std::f64::consts::TAU * s as f64 / segments as f64;
                let (a, b) = (semi_major * theta.cos(), semi_minor * theta.sin());
                Point::new(center.x + a * ux - b * uy, center.y + a * uy + b * ux)
            })
            .collect()
    }
}

/// How [`segments_intersect`] treats contact at an endpoint shared by both segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TouchPolicy {
    /// Contact consisting of exactly one shared endpoint is not an intersection.
    IgnoreSharedEndpoint,
    Strict,
}

fn on_segment(p: Point, s: &Segment, tol: f64) -> bool {
    orientation(s.a, s.b, p, tol * (1.0 + s.length())) == Orientation::Collinear
        && p.x >= s.a.x.min(s.b.x) - tol
        && p.x <= s.a.x.max(s.b.x) + tol
        && p.y >= s.a.y.min(s.b.y) - tol
        && p.y <= s.a.y.max(s.b.y) + tol
}

/// Length of the overlap of two collinear segments.
fn collinear_overlap(s1: &Segment, s2: &Segment) -> f64 {
    let dir = if s1.length() >= s2.length() {
        s1.b - s1.a
    } else {
        s2.b - s2.a
    };
    let len = dir.norm();
    if len == 0.0 {
        return 0.0;
    }
    let u = dir * (1.0 / len);
    let proj = |p: Point| (p - s1.a).dot(u);
    let (a0, a1) = {
        let (x, y) = (proj(s1.a), proj(s1.b));
        (x.min(y), x.max(y))
    };
    let (b0, b1) = {
        let (x, y) = (proj(s2.a), proj(s2.b));
        (x.min(y), x.max(y))
    };
    (a1.min(b1) - a0.max(b0)).max(0.0)
}

pub fn segments_intersect(s1: &Segment, s2: &Segment, policy: TouchPolicy) -> bool {
    let tol = abs_eps([&s1.a, &s1.b, &s2.a, &s2.b]);
    let o1 = orientation(s1.a, s1.b, s2.a, tol * (1.0 + s1.length()));
    let o2 = orientation(s1.a, s1.b, s2.b, tol * (1.0 + s1.length()));
    let o3 = orientation(s2.a, s2.b, s1.a, tol * (1.0 + s2.length()));
    let o4 = orientation(s2.a, s2.b, s1.b, tol * (1.0 + s2.length()));

    let all_collinear = o1 == Orientation::Collinear && o2 == Orientation::Collinear;
    if policy == TouchPolicy::IgnoreSharedEndpoint {
        let shared = [s1.a, s1.b]
            .iter()
            .any(|p| dist(*p, s2.a) <= tol || dist(*p, s2.b) <= tol);
        if shared {
            // Two segments leaving a common point meet only there unless
            // they run along the same line.
            return all_collinear && collinear_overlap(s1, s2) > tol;
        }
    }

    let proper = o1 != Orientation::Collinear
        && o2 != Orientation::Collinear
        && o3 != Orientation::Collinear
        && o4 != Orientation::Collinear
        && o1 != o2
        && o3 != o4;
    if proper {
        return true;
    }
    on_segment(s2.a, s1, tol)
        || on_segment(s2.b, s1, tol)
        || on_segment(s1.a, s2, tol)
        || on_segment(s1.b, s2, tol)
}

/// Convex hull in counterclockwise order without collinear boundary points.
///
/// Collinear input yields its two extreme points; a single distinct point yields itself.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let tol = area_tolerance(&pts);
    let mut hull: Vec<Point> = Vec::with_capacity(pts.len() + 1);
    let build = |iter: &mut dyn Iterator<Item = &Point>, hull: &mut Vec<Point>| {
        let start = hull.len();
        for &p in iter {
            while hull.len() >= start + 2
                && orientation(hull[hull.len() - 2], hull[hull.len() - 1], p, tol)
                    != Orientation::Left
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    };
    build(&mut pts.iter(), &mut hull);
    build(&mut pts.iter().rev(), &mut hull);
    if hull.len() == 2 && dist(hull[0], hull[1]) <= abs_eps(&hull) {
        hull.truncate(1);
    }
    hull
}
