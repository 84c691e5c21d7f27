//! Planar primitives: points, directed segments and nearest-point queries.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Absolute tolerance used for geometric comparisons throughout the crate.
pub const EPS: f64 = 1e-9;

/// A point (or vector) of the Euclidean plane.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    #[inline]
    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    /// Chebyshev norm `max(|x|, |y|)`.
    #[inline]
    pub fn norm_inf(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    #[inline]
    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn approx_eq(self, other: Point2, tol: f64) -> bool {
        (self.x - other.x).abs() <= tol && (self.y - other.y).abs() <= tol
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A directed segment. Degenerate segments (`start == end`) are allowed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectedSegment {
    pub start: Point2,
    pub end: Point2,
}

impl DirectedSegment {
    #[inline]
    pub const fn new(start: Point2, end: Point2) -> Self {
        DirectedSegment { start, end }
    }

    #[inline]
    pub fn direction(&self) -> Point2 {
        self.end - self.start
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.direction().norm()
    }

    #[inline]
    pub fn point_at(&self, t: f64) -> Point2 {
        self.start + self.direction() * t
    }

    pub fn midpoint(&self) -> Point2 {
        self.point_at(0.5)
    }

    pub fn reversed(&self) -> DirectedSegment {
        DirectedSegment::new(self.end, self.start)
    }

    pub fn is_degenerate(&self) -> bool {
        self.direction().norm_squared() == 0.0
    }

    /// Whether `p` lies on the segment within `tol`.
    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        point_segment_distance(p, self).distance <= tol
    }
}

/// Result of [`point_segment_distance`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointSegmentNearest {
    pub distance: f64,
    /// Nearest point on the segment.
    pub point: Point2,
    /// Parameter of `point` along the segment, in `[0, 1]`.
    pub t: f64,
}

/// Distance from `p` to the segment `s`, with the minimizing point.
pub fn point_segment_distance(p: Point2, s: &DirectedSegment) -> PointSegmentNearest {
    let t = project_parameter(p, s);
    let point = s.point_at(t);
    PointSegmentNearest {
        distance: p.distance(point),
        point,
        t,
    }
}

#[inline]
fn project_parameter(p: Point2, s: &DirectedSegment) -> f64 {
    let d = s.direction();
    let len2 = d.norm_squared();
    if len2 == 0.0 {
        return 0.0;
    }
    ((p - s.start).dot(d) / len2).clamp(0.0, 1.0)
}

/// Nearest pair between two segments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SegmentPair {
    pub p1: Point2,
    pub p2: Point2,
    pub t1: f64,
    pub t2: f64,
    pub distance: f64,
}

impl SegmentPair {
    /// The directed segment from the witness on the first segment to the
    /// witness on the second.
    pub fn as_segment(&self) -> DirectedSegment {
        DirectedSegment::new(self.p1, self.p2)
    }
}

/// Proper or touching intersection of two non-parallel segments, as the pair
/// of parameters.
fn crossing(s1: &DirectedSegment, s2: &DirectedSegment) -> Option<(f64, f64)> {
    let d1 = s1.direction();
    let d2 = s2.direction();
    let denom = d1.cross(d2);
    if denom == 0.0 {
        return None;
    }
    let w = s2.start - s1.start;
    let t1 = w.cross(d2) / denom;
    let t2 = w.cross(d1) / denom;
    if (0.0..=1.0).contains(&t1) && (0.0..=1.0).contains(&t2) {
        Some((t1, t2))
    } else {
        None
    }
}

/// Closest points between `s1` and `s2`.
///
/// Among minimizing pairs the one with the smallest parameter on `s1`, then
/// on `s2`, is returned.
pub fn segment_segment_nearest(s1: &DirectedSegment, s2: &DirectedSegment) -> SegmentPair {
    if let Some((t1, t2)) = crossing(s1, s2) {
        let p = s1.point_at(t1);
        // Endpoint candidates below may also reach zero with a smaller t1
        // (touching at an endpoint); keep whichever comes first.
        let mut best = SegmentPair {
            p1: p,
            p2: s2.point_at(t2),
            t1,
            t2,
            distance: 0.0,
        };
        for cand in endpoint_candidates(s1, s2) {
            if cand.distance == 0.0 && (cand.t1, cand.t2) < (best.t1, best.t2) {
                best = cand;
            }
        }
        best.p2 = best.p1;
        return best;
    }

    let mut best: Option<SegmentPair> = None;
    for cand in endpoint_candidates(s1, s2) {
        best = Some(match best {
            None => cand,
            Some(b) => {
                let tie = (cand.distance - b.distance).abs() <= 1e-12 * (1.0 + b.distance);
                if (tie && (cand.t1, cand.t2) < (b.t1, b.t2)) || (!tie && cand.distance < b.distance)
                {
                    cand
                } else {
                    b
                }
            }
        });
    }
    best.expect("four candidates")
}

fn endpoint_candidates(s1: &DirectedSegment, s2: &DirectedSegment) -> [SegmentPair; 4] {
    let a = point_segment_distance(s1.start, s2);
    let b = point_segment_distance(s1.end, s2);
    let c = point_segment_distance(s2.start, s1);
    let d = point_segment_distance(s2.end, s1);
    [
        SegmentPair {
            p1: s1.start,
            p2: a.point,
            t1: 0.0,
            t2: a.t,
            distance: a.distance,
        },
        SegmentPair {
            p1: s1.end,
            p2: b.point,
            t1: 1.0,
            t2: b.t,
            distance: b.distance,
        },
        SegmentPair {
            p1: c.point,
            p2: s2.start,
            t1: c.t,
            t2: 0.0,
            distance: c.distance,
        },
        SegmentPair {
            p1: d.point,
            p2: s2.end,
            t1: d.t,
            t2: 1.0,
            distance: d.distance,
        },
    ]
}

/// Distance between two segments without witnesses. Hot path of the dense
/// shortest-path search.
#[inline]
pub fn segment_distance(s1: &DirectedSegment, s2: &DirectedSegment) -> f64 {
    if crossing(s1, s2).is_some() {
        return 0.0;
    }
    let a = point_segment_distance(s1.start, s2).distance;
    let b = point_segment_distance(s1.end, s2).distance;
    let c = point_segment_distance(s2.start, s1).distance;
    let d = point_segment_distance(s2.end, s1).distance;
    a.min(b).min(c).min(d)
}
