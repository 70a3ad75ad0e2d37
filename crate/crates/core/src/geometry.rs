//! Planar primitives with an absolute comparison tolerance.

use core::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Counter-clockwise rotation by a right angle.
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    /// Polar angle in `(-pi, pi]`.
    pub fn angle(self) -> f64 {
        libm::atan2(self.y, self.x)
    }

    pub fn from_angle(theta: f64) -> Point2 {
        Point2::new(libm::cos(theta), libm::sin(theta))
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x, y): (f64, f64)) -> Self {
        Point2::new(x, y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    pub const fn new(center: Point2, radius: f64) -> Self {
        Circle { center, radius }
    }

    /// Point of the boundary at polar angle `theta` around the center.
    pub fn point_at(&self, theta: f64) -> Point2 {
        self.center + Point2::from_angle(theta) * self.radius
    }
}

/// Absolute tolerance used by every geometric comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    eps: f64,
}

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-9;

    pub fn new(eps: f64) -> Result<Self> {
        if eps > 0.0 && eps < 1.0 {
            Ok(Tolerance { eps })
        } else {
            Err(Error::InvalidTolerance(eps))
        }
    }

    pub fn eps(self) -> f64 {
        self.eps
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps: Self::DEFAULT_EPS,
        }
    }
}

pub fn dist(a: Point2, b: Point2) -> f64 {
    (a - b).norm()
}

/// Result of intersecting two circle boundaries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CircleIntersection {
    Disjoint,
    Tangent(Point2),
    Crossing(Point2, Point2),
}

impl CircleIntersection {
    pub fn len(&self) -> usize {
        match self {
            CircleIntersection::Disjoint => 0,
            CircleIntersection::Tangent(_) => 1,
            CircleIntersection::Crossing(..) => 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> impl Iterator<Item = Point2> {
        let (a, b) = match *self {
            CircleIntersection::Disjoint => (None, None),
            CircleIntersection::Tangent(p) => (Some(p), None),
            CircleIntersection::Crossing(p, q) => (Some(p), Some(q)),
        };
        a.into_iter().chain(b)
    }
}

/// Intersection points of two circle boundaries.
///
/// Near-tangent pairs (the center distance within `eps` of the sum or the
/// difference of the radii) report a single point. Coincident circles have no
/// well-defined intersection and yield [`Error::IdenticalCircles`].
pub fn circle_circle_intersections(
    c1: Circle,
    c2: Circle,
    tol: Tolerance,
) -> Result<CircleIntersection> {
    let eps = tol.eps();
    let delta = c2.center - c1.center;
    let d = delta.norm();
    let (r1, r2) = (c1.radius, c2.radius);
    if d <= eps {
        return if (r1 - r2).abs() <= eps {
            Err(Error::IdenticalCircles)
        } else {
            Ok(CircleIntersection::Disjoint)
        };
    }
    let u = delta * (1.0 / d);
    let sum = r1 + r2;
    let diff = (r1 - r2).abs();
    if d > sum + eps || d < diff - eps {
        return Ok(CircleIntersection::Disjoint);
    }
    if (d - sum).abs() <= eps {
        // External tangency: the touching point splits the center segment in
        // the ratio of the radii.
        let p = if sum > 0.0 {
            c1.center + delta * (r1 / sum)
        } else {
            c1.center + delta * 0.5
        };
        return Ok(CircleIntersection::Tangent(p));
    }
    if (d - diff).abs() <= eps {
        let p = if r1 >= r2 {
            c1.center + u * r1
        } else {
            c2.center - u * r2
        };
        return Ok(CircleIntersection::Tangent(p));
    }
    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let h = libm::sqrt((r1 * r1 - a * a).max(0.0));
    let base = c1.center + u * a;
    let off = u.perp() * h;
    Ok(CircleIntersection::Crossing(base + off, base - off))
}

/// Radius of the circle through `a`, `b` and `c`.
///
/// The triple counts as collinear when the point farthest from the line through
/// the longest side lies within `eps` of it.
pub fn circumradius(a: Point2, b: Point2, c: Point2, tol: Tolerance) -> Result<f64> {
    let ab = dist(a, b);
    let bc = dist(b, c);
    let ca = dist(c, a);
    let longest = ab.max(bc).max(ca);
    let cross = (b - a).cross(c - a).abs();
    if longest <= tol.eps() || cross / longest <= tol.eps() {
        return Err(Error::Collinear);
    }
    Ok(ab * bc * ca / (2.0 * cross))
}

/// Closed-disk membership: `dist(t, center) <= radius + eps`.
pub fn point_in_closed_disk(t: Point2, disk: Circle, tol: Tolerance) -> bool {
    dist(t, disk.center) <= disk.radius + tol.eps()
}

pub fn rightmost_point(c: Circle) -> Result<Point2> {
    if c.radius > 0.0 {
        Ok(Point2::new(c.center.x + c.radius, c.center.y))
    } else {
        Err(Error::ZeroRadius)
    }
}
