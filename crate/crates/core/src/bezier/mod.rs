//! Geometry of single cubic Bezier segments.

mod distance;
mod intersect;
pub mod quadrature;

pub use distance::{min_distance, DistanceOptions};
pub use intersect::{intersect, IntersectOptions, Intersection};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{Point2, Rect};

/// Speed cutoff relative to the control-polygon bounding-box diagonal.
pub const SPEED_EPS_REL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicSegment {
    pub p0: Point2,
    pub p1: Point2,
    pub p2: Point2,
    pub p3: Point2,
}

impl CubicSegment {
    pub const fn new(p0: Point2, p1: Point2, p2: Point2, p3: Point2) -> Self {
        CubicSegment { p0, p1, p2, p3 }
    }

    /// A straight segment with its handles at 1/3 and 2/3, so that it is
    /// traversed at uniform speed.
    pub fn line(a: Point2, b: Point2) -> Self {
        CubicSegment::new(a, a.lerp(b, 1.0 / 3.0), a.lerp(b, 2.0 / 3.0), b)
    }

    pub fn points(&self) -> [Point2; 4] {
        [self.p0, self.p1, self.p2, self.p3]
    }

    pub fn map(&self, mut f: impl FnMut(Point2) -> Point2) -> Self {
        CubicSegment::new(f(self.p0), f(self.p1), f(self.p2), f(self.p3))
    }

    pub fn is_finite(&self) -> bool {
        self.points().iter().all(|p| p.is_finite())
    }

    /// True when the endpoints coincide.
    pub fn is_degenerate(&self) -> bool {
        self.p0 == self.p3
    }

    pub fn eval(&self, t: f64) -> Point2 {
        if t == 0.0 {
            return self.p0;
        }
        if t == 1.0 {
            return self.p3;
        }
        let mt = 1.0 - t;
        let a = mt * mt * mt;
        let b = 3.0 * mt * mt * t;
        let c = 3.0 * mt * t * t;
        let d = t * t * t;
        Point2::new(
            a * self.p0.x + b * self.p1.x + c * self.p2.x + d * self.p3.x,
            a * self.p0.y + b * self.p1.y + c * self.p2.y + d * self.p3.y,
        )
    }

    /// First and second derivatives with respect to t.
    pub fn derivatives(&self, t: f64) -> (Point2, Point2) {
        let q0 = self.p1 - self.p0;
        let q1 = self.p2 - self.p1;
        let q2 = self.p3 - self.p2;
        let mt = 1.0 - t;
        let d1 = (q0 * (mt * mt) + q1 * (2.0 * mt * t) + q2 * (t * t)) * 3.0;
        let d2 = ((q1 - q0) * mt + (q2 - q1) * t) * 6.0;
        (d1, d2)
    }

    pub fn tangent(&self, t: f64) -> Point2 {
        self.derivatives(t).0
    }

    /// Bounding box of the control polygon (contains the curve).
    pub fn bbox(&self) -> Rect {
        Rect::from_points(self.points()).expect("four points")
    }

    pub fn speed_cutoff(&self) -> f64 {
        SPEED_EPS_REL * self.bbox().diagonal()
    }

    /// Unsigned curvature at t.
    pub fn curvature(&self, t: f64) -> Result<f64> {
        let (d1, d2) = self.derivatives(t);
        let speed = d1.norm();
        let cutoff = self.speed_cutoff();
        if !(speed > cutoff) {
            return Err(Error::DegenerateSpeed { t, speed, cutoff });
        }
        Ok(d1.cross(d2).abs() / (speed * speed * speed))
    }

    /// Signed curvature: positive when turning from +x towards +y.
    pub fn signed_curvature(&self, t: f64) -> Result<f64> {
        let (d1, d2) = self.derivatives(t);
        let speed = d1.norm();
        let cutoff = self.speed_cutoff();
        if !(speed > cutoff) {
            return Err(Error::DegenerateSpeed { t, speed, cutoff });
        }
        Ok(d1.cross(d2) / (speed * speed * speed))
    }

    pub fn arc_length(&self) -> f64 {
        self.arc_length_to(1.0)
    }

    /// Arc length of the piece [0, t].
    pub fn arc_length_to(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        quadrature::integrate(
            |u| Ok::<_, ()>(self.derivatives(u).0.norm()),
            0.0,
            t.min(1.0),
        )
        .unwrap_or(0.0)
    }

    /// ∫ κ² ds over the segment.
    pub fn bending_energy(&self) -> Result<f64> {
        let cutoff = self.speed_cutoff();
        quadrature::integrate(
            |t| {
                let (d1, d2) = self.derivatives(t);
                let s2 = d1.norm_squared();
                let speed = s2.sqrt();
                if !(speed > cutoff) {
                    return Err(Error::DegenerateSpeed { t, speed, cutoff });
                }
                let c = d1.cross(d2);
                Ok(c * c / (s2 * s2 * speed))
            },
            0.0,
            1.0,
        )
    }

    /// Parameter at which the arc length from t=0 equals `s`, clamped to [0, 1].
    pub fn param_at_length(&self, s: f64) -> f64 {
        let total = self.arc_length();
        if s <= 0.0 || total <= 0.0 {
            return 0.0;
        }
        if s >= total {
            return 1.0;
        }
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        let mut t = s / total;
        for _ in 0..60 {
            let f = self.arc_length_to(t) - s;
            if f.abs() <= 1e-13 * total {
                break;
            }
            if f > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let speed = self.derivatives(t).0.norm();
            let newton = t - f / speed;
            t = if speed > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo < 1e-15 {
                break;
            }
        }
        t
    }

    /// De Casteljau subdivision at t.
    pub fn split(&self, t: f64) -> (CubicSegment, CubicSegment) {
        let p01 = self.p0.lerp(self.p1, t);
        let p12 = self.p1.lerp(self.p2, t);
        let p23 = self.p2.lerp(self.p3, t);
        let p012 = p01.lerp(p12, t);
        let p123 = p12.lerp(p23, t);
        let mid = p012.lerp(p123, t);
        (
            CubicSegment::new(self.p0, p01, p012, mid),
            CubicSegment::new(mid, p123, p23, self.p3),
        )
    }

    /// The piece of the segment between parameters t0 < t1.
    pub fn subsegment(&self, t0: f64, t1: f64) -> CubicSegment {
        let (_, right) = if t0 > 0.0 {
            self.split(t0)
        } else {
            (*self, *self)
        };
        if t1 >= 1.0 {
            return right;
        }
        let u = if t0 > 0.0 { (t1 - t0) / (1.0 - t0) } else { t1 };
        right.split(u).0
    }

    /// Largest distance of the inner control points from the chord segment.
    pub fn flatness(&self) -> f64 {
        let d1 = distance::point_segment(self.p1, self.p0, self.p3).0;
        let d2 = distance::point_segment(self.p2, self.p0, self.p3).0;
        d1.max(d2)
    }
}
