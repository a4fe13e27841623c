//! Unit-circle primitives.
//!
//! Angles are radians measured counter-clockwise from the positive x-axis,
//! which passes through the faulty robot's landing point. Arc lengths on the
//! unit circle coincide with the subtended angle.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the plane in unit-disk coordinates.
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

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Point at parameter `t` on the segment from `self` to `other`.
    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
        )
    }

    pub fn midpoint(self, other: Point) -> Point {
        self.lerp(other, 0.5)
    }

    /// Polar angle normalized into `[0, 2π)`.
    pub fn angle(self) -> f64 {
        normalize_angle(self.y.atan2(self.x))
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

/// Maps any angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Length of the chord subtending an arc of length `a`, i.e. `2 sin(a/2)`.
pub fn chord_of_arc(a: f64) -> Result<f64> {
    if !(0.0..=TAU).contains(&a) {
        return Err(Error::OutOfRange {
            what: "arc length",
            value: a,
        });
    }
    Ok((2.0 * (a / 2.0).sin()).max(0.0))
}

/// The perimeter point at angle `theta`.
pub fn circle_point(theta: f64) -> Point {
    let (s, c) = normalize_angle(theta).sin_cos();
    Point::new(c, s)
}

pub fn euclidean_distance(p: Point, q: Point) -> f64 {
    (p - q).norm()
}

/// Counter-clockwise arc length from angle `from` to angle `to`, in `[0, 2π)`.
pub fn ccw_arc(from: f64, to: f64) -> f64 {
    normalize_angle(to - from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn chord_examples() {
        assert_eq!(chord_of_arc(0.0).unwrap(), 0.0);
        assert!((chord_of_arc(PI).unwrap() - 2.0).abs() < 1e-15);
        assert!((chord_of_arc(2.0 * PI / 3.0).unwrap() - 3f64.sqrt()).abs() < 1e-12);
        assert!(chord_of_arc(-0.1).is_err());
        assert!(chord_of_arc(TAU + 0.1).is_err());
    }

    #[test]
    fn circle_point_examples() {
        let a = circle_point(0.0);
        assert_eq!((a.x, a.y), (1.0, 0.0));
        let b = circle_point(PI / 2.0);
        assert!(b.x.abs() < 1e-15 && (b.y - 1.0).abs() < 1e-15);
        // crash point on the arc at w = 1.7
        let w: f64 = 1.7;
        let c = circle_point(w - 1.0);
        assert!((c.x - (w - 1.0).cos()).abs() < 1e-15);
        assert!((c.y - (w - 1.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn distance_examples() {
        let p = Point::new(0.3, -0.2);
        assert_eq!(euclidean_distance(p, p), 0.0);
        assert!((euclidean_distance(Point::new(1.0, 0.0), Point::new(-1.0, 0.0)) - 2.0).abs() < 1e-15);
        let d = euclidean_distance(Point::new(0.5, 0.0), circle_point(PI));
        assert!((d - 1.5).abs() < 1e-12);
    }

    #[test]
    fn normalization_is_half_open() {
        assert_eq!(normalize_angle(TAU), 0.0);
        assert_eq!(normalize_angle(-1e-300), 0.0);
        assert!((normalize_angle(-PI / 2.0) - 1.5 * PI).abs() < 1e-15);
        assert!((ccw_arc(1.0, 0.5) - (TAU - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn chord_is_concave_and_below_arc() {
        let n = 4096;
        let h = TAU / n as f64;
        for i in 1..n {
            let a = i as f64 * h;
            let c = chord_of_arc(a).unwrap();
            assert!(c <= a + 1e-12);
            assert!((c - chord_of_arc(TAU - a).unwrap()).abs() < 1e-12);
            let second = chord_of_arc(a - h).unwrap() - 2.0 * c + chord_of_arc(a + h).unwrap();
            assert!(second <= 1e-9, "second difference {second} at {a}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn distance_between_perimeter_points_is_the_chord(t1 in -10.0f64..10.0, t2 in -10.0f64..10.0) {
            let d = euclidean_distance(circle_point(t1), circle_point(t2));
            let arc = normalize_angle(t1 - t2);
            prop_assert!((d - chord_of_arc(arc).unwrap()).abs() < 1e-9);
        }

        #[test]
        fn distance_is_a_metric(ax in -1.0f64..1.0, ay in -1.0f64..1.0, bx in -1.0f64..1.0,
                                by in -1.0f64..1.0, cx in -1.0f64..1.0, cy in -1.0f64..1.0) {
            let (a, b, c) = (Point::new(ax, ay), Point::new(bx, by), Point::new(cx, cy));
            prop_assert!(euclidean_distance(a, b) >= 0.0);
            prop_assert_eq!(euclidean_distance(a, b), euclidean_distance(b, a));
            prop_assert!(euclidean_distance(a, c) <= euclidean_distance(a, b) + euclidean_distance(b, c) + 1e-12);
        }
    }
}
