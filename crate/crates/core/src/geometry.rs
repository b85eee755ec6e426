//! Planar primitives in image coordinates (x right, y down).
//!
//! Orientation convention: a positive angle is a clockwise rotation as seen
//! on screen. Because the y-axis points down, this is the sign of the usual
//! cross product `u.dx * v.dy - u.dy * v.dx`.

use thiserror::Error;

use crate::landmark::Point2;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("degenerate direction: zero-length vector")]
    DegenerateDirection,
}

/// Displacement between two points, in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2<T> {
    pub dx: T,
    pub dy: T,
}

impl<T: Scalar> Vec2<T> {
    pub const fn new(dx: T, dy: T) -> Self {
        Self { dx, dy }
    }

    pub fn norm(self) -> T {
        self.dx.hypot(self.dy)
    }

    pub fn dot(self, other: Self) -> T {
        self.dx * other.dx + self.dy * other.dy
    }

    /// z-component of the 3D cross product; positive when `other` lies
    /// clockwise of `self` on screen.
    pub fn cross(self, other: Self) -> T {
        self.dx * other.dy - self.dy * other.dx
    }

    pub fn is_zero(self) -> bool {
        self.dx == T::zero() && self.dy == T::zero()
    }

    pub fn scale(self, k: T) -> Self {
        Self::new(self.dx * k, self.dy * k)
    }

    fn nonzero(self) -> Result<Self, GeometryError> {
        if self.is_zero() {
            Err(GeometryError::DegenerateDirection)
        } else {
            Ok(self)
        }
    }
}

impl<T: Scalar> std::ops::Neg for Vec2<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.dx, -self.dy)
    }
}

/// Infinite line through `anchor` along `direction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line2<T> {
    pub anchor: Point2<T>,
    pub direction: Vec2<T>,
}

impl<T: Scalar> Line2<T> {
    pub fn new(anchor: Point2<T>, direction: Vec2<T>) -> Result<Self, GeometryError> {
        Ok(Self { anchor, direction: direction.nonzero()? })
    }
}

/// `q - p`.
pub fn vec<T: Scalar>(p: Point2<T>, q: Point2<T>) -> Vec2<T> {
    Vec2::new(q.x - p.x, q.y - p.y)
}

pub fn midpoint<T: Scalar>(p: Point2<T>, q: Point2<T>) -> Point2<T> {
    let half = T::lit(0.5);
    Point2::new((p.x + q.x) * half, (p.y + q.y) * half)
}

/// Rotation in degrees, in `(-180, 180]`, carrying the direction of `u` onto
/// the direction of `v`; clockwise on screen is positive.
///
/// Antisymmetric except at the branch point, where both orders give `+180`.
pub fn signed_angle_deg<T: Scalar>(u: Vec2<T>, v: Vec2<T>) -> Result<T, GeometryError> {
    let u = u.nonzero()?;
    let v = v.nonzero()?;
    let deg = u.cross(v).atan2(u.dot(v)).to_degrees();
    let half_turn = T::lit(180.0);
    Ok(if deg <= -half_turn { deg + half_turn + half_turn } else { deg })
}

/// `u` rotated 90 degrees clockwise on screen: `(-dy, dx)`.
pub fn perp_cw<T: Scalar>(u: Vec2<T>) -> Result<Vec2<T>, GeometryError> {
    let u = u.nonzero()?;
    Ok(Vec2::new(-u.dy, u.dx))
}

pub fn dist<T: Scalar>(p: Point2<T>, q: Point2<T>) -> T {
    vec(p, q).norm()
}

/// Perpendicular distance from `p` to `line`.
pub fn point_line_dist<T: Scalar>(p: Point2<T>, line: &Line2<T>) -> Result<T, GeometryError> {
    let dir = line.direction.nonzero()?;
    Ok(dir.cross(vec(line.anchor, p)).abs() / dir.norm())
}
