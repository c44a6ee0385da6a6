//! Planar primitives used by the movement and membership rules.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scenario::RegionSpec;

/// A point or displacement in world units. Serialized as `[x, y]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at `angle` radians from the +x axis.
    pub fn from_angle(angle: f64) -> Self {
        let (sin, cos) = angle.sin_cos();
        Self::new(cos, sin)
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn length_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn length(self) -> f64 {
        self.length_squared().sqrt()
    }

    pub fn distance_squared(self, other: Vec2) -> f64 {
        (self - other).length_squared()
    }

    pub fn distance(self, other: Vec2) -> f64 {
        self.distance_squared(other).sqrt()
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Vec2 {
        self * (1.0 / self.length())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Vec2::new(x, y)
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

/// Where a motion segment meets a boundary segment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub point: Vec2,
    /// Fraction of the way along the motion segment, in `(0, 1]`.
    pub t: f64,
}

/// Intersection of the motion segment `a0 -> a1` with the segment `b0 -> b1`.
///
/// Only hits with `t` in `(0, 1]` along the motion segment count, so a mover
/// sitting exactly on a boundary does not collide with it again. Parallel and
/// collinear segments never intersect.
pub fn segment_intersection(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2) -> Option<Crossing> {
    let r = a1 - a0;
    let s = b1 - b0;
    let denom = r.cross(s);
    if denom == 0.0 {
        return None;
    }
    let offset = b0 - a0;
    let t = offset.cross(s) / denom;
    let u = offset.cross(r) / denom;
    if t > 0.0 && t <= 1.0 && (0.0..=1.0).contains(&u) {
        Some(Crossing {
            point: a0 + r * t,
            t,
        })
    } else {
        None
    }
}

/// Specular reflection of `v` off a wall running along `boundary_dir`.
pub fn reflect_velocity(v: Vec2, boundary_dir: Vec2) -> Vec2 {
    let n = boundary_dir.perp().normalized();
    v - n * (2.0 * v.dot(n))
}

/// Index of the region whose center is closest to `p`; ties go to the lower
/// index.
///
/// Panics if `regions` is empty.
pub fn nearest_region(p: Vec2, regions: &[RegionSpec]) -> usize {
    nearest_center(p, regions.iter().map(|r| r.center))
}

pub(crate) fn nearest_center(p: Vec2, centers: impl IntoIterator<Item = Vec2>) -> usize {
    let mut best = None;
    for (i, c) in centers.into_iter().enumerate() {
        let d = p.distance_squared(c);
        match best {
            Some((_, bd)) if d >= bd => {}
            _ => best = Some((i, d)),
        }
    }
    best.expect("nearest_region needs at least one region").0
}
