//! Points, segments, balls, and spheres in Euclidean d-space (d >= 2), plus
//! the segment-versus-ball predicates everything else is built on.
//!
//! All boundary comparisons share one tolerance, [`boundary_eps`], so the
//! notion of "on the sphere" is consistent across operations: a distance
//! within `1e-9 * max(1, radius)` of the radius counts as on the boundary,
//! and ambiguous classifications resolve to [`Classification::Crossing`].

use std::fmt;

/// Absolute tolerance for comparisons against a sphere of the given radius.
pub fn boundary_eps(radius: f64) -> f64 {
    1e-9 * radius.max(1.0)
}

/// A point in d-dimensional Euclidean space, d >= 2, all coordinates finite.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        assert!(coords.len() >= 2, "points must have dimension >= 2");
        assert!(
            coords.iter().all(|c| c.is_finite()),
            "point coordinates must be finite"
        );
        Point { coords }
    }

    /// Convenience constructor for the planar case.
    pub fn xy(x: f64, y: f64) -> Self {
        Point::new(vec![x, y])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn distance_sq(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.distance_sq(other).sqrt()
    }

    /// Lexicographic coordinate order; used only for deterministic
    /// tie-breaking among equal-radius candidate balls.
    pub(crate) fn lex_le(&self, other: &Point) -> bool {
        self.coords <= other.coords
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A closed line segment between two points of equal dimension.
///
/// Zero-length segments are representable (the constructor only checks
/// dimensions) but are rejected wherever sets of segments are ingested; see
/// [`crate::packed::SegmentSet`].
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    a: Point,
    b: Point,
}

/// A closed ball. Radius zero is allowed so that degenerate k-enclosing
/// balls (k = 1, or k coincident points) have a representation; operations
/// that need a positive radius assert it themselves.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    center: Point,
    radius: f64,
}

/// The boundary of a ball; radius strictly positive.
#[derive(Clone, Debug, PartialEq)]
pub struct Sphere {
    center: Point,
    radius: f64,
}

/// Position of a segment relative to a sphere, under the [`boundary_eps`]
/// tolerance. Ties go to `Crossing`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Inside,
    Crossing,
    Outside,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Self {
        assert!(radius.is_finite() && radius >= 0.0, "ball radius must be finite and >= 0");
        Ball { center, radius }
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// The boundary sphere. Panics if the ball is degenerate (radius 0).
    pub fn surface(&self) -> Sphere {
        Sphere::new(self.center.clone(), self.radius)
    }
}

impl Sphere {
    pub fn new(center: Point, radius: f64) -> Self {
        assert!(radius.is_finite() && radius > 0.0, "sphere radius must be finite and > 0");
        Sphere { center, radius }
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn solid(&self) -> Ball {
        Ball::new(self.center.clone(), self.radius)
    }
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        assert_eq!(a.dim(), b.dim(), "segment endpoints must agree in dimension");
        Segment { a, b }
    }

    /// Planar convenience constructor.
    pub fn xy(ax: f64, ay: f64, bx: f64, by: f64) -> Self {
        Segment::new(Point::xy(ax, ay), Point::xy(bx, by))
    }

    pub fn a(&self) -> &Point {
        &self.a
    }

    pub fn b(&self) -> &Point {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn length(&self) -> f64 {
        self.a.distance(&self.b)
    }

    pub fn midpoint(&self) -> Point {
        Point::new(
            self.a
                .coords()
                .iter()
                .zip(self.b.coords())
                .map(|(x, y)| 0.5 * (x + y))
                .collect(),
        )
    }

    /// The point `a + t (b - a)`.
    pub fn eval(&self, t: f64) -> Point {
        Point::new(
            self.a
                .coords()
                .iter()
                .zip(self.b.coords())
                .map(|(x, y)| x + t * (y - x))
                .collect(),
        )
    }

    /// Coefficients of the squared-distance quadratic
    /// `|s(t) - p|^2 = aa t^2 + bb t + cc`, with `aa = |b - a|^2`.
    fn dist_quadratic(&self, p: &Point) -> (f64, f64, f64) {
        let mut aa = 0.0;
        let mut bb = 0.0;
        let mut cc = 0.0;
        for ((ax, bx), px) in self.a.coords().iter().zip(self.b.coords()).zip(p.coords()) {
            let d = bx - ax;
            let u = ax - px;
            aa += d * d;
            bb += 2.0 * u * d;
            cc += u * u;
        }
        (aa, bb, cc)
    }

    /// `(min, max)` distance from `p` to the segment. The squared distance is
    /// convex in the parameter, so the maximum is attained at an endpoint and
    /// the minimum at the clamped foot of the perpendicular.
    pub fn distance_range(&self, p: &Point) -> (f64, f64) {
        let (aa, bb, cc) = self.dist_quadratic(p);
        let d0_sq = cc;
        let d1_sq = aa + bb + cc;
        let dmax_sq = d0_sq.max(d1_sq);
        let dmin_sq = if aa > 0.0 {
            let t = (-bb / (2.0 * aa)).clamp(0.0, 1.0);
            let v = (aa * t + bb) * t + cc;
            v.max(0.0).min(dmax_sq)
        } else {
            d0_sq
        };
        (dmin_sq.sqrt(), dmax_sq.sqrt())
    }

    /// Length of the part of the segment inside the closed ball.
    ///
    /// Solves the squared-distance quadratic for the parameter interval inside
    /// the ball with the numerically stable root form
    /// `q = -(bb + sign(bb) sqrt(disc)) / 2`, then clamps the result to the
    /// exact bounds `[0, min(length, 2 radius)]` (a chord of a ball of radius
    /// r is never longer than 2r).
    pub fn clip_length(&self, ball: &Ball) -> f64 {
        let r = ball.radius();
        if r == 0.0 {
            return 0.0;
        }
        let (aa, bb, cc) = self.dist_quadratic(ball.center());
        if aa == 0.0 {
            return 0.0;
        }
        let c0 = cc - r * r;
        let disc = bb * bb - 4.0 * aa * c0;
        if disc <= 0.0 {
            // No real interval: the segment stays outside (a grazing tangency
            // contributes zero length).
            return 0.0;
        }
        let sign = if bb >= 0.0 { 1.0 } else { -1.0 };
        let q = -0.5 * (bb + sign * disc.sqrt());
        let (t1, t2) = if q != 0.0 {
            let r1 = q / aa;
            let r2 = c0 / q;
            if r1 <= r2 {
                (r1, r2)
            } else {
                (r2, r1)
            }
        } else {
            // bb == 0 and disc == 0 force c0 == 0: tangent at the foot.
            (0.0, 0.0)
        };
        let lo = t1.max(0.0);
        let hi = t2.min(1.0);
        if hi <= lo {
            return 0.0;
        }
        let len = self.length();
        ((hi - lo) * len).min(len).min(2.0 * r)
    }

    /// Number of distinct parameters `t` in `[0, 1]` with
    /// `|s(t) - center| = radius`, under the [`boundary_eps`] tolerance:
    /// a tangency counts once, and an endpoint on the sphere counts once.
    ///
    /// The count is derived from the endpoint distances and the minimum
    /// distance rather than from extracted roots; since the squared distance
    /// is a convex quadratic in `t` this case split is exhaustive, and it does
    /// not flip under rounding the way near-tangent root extraction does.
    pub fn crossing_count(&self, sphere: &Sphere) -> usize {
        let r = sphere.radius();
        let eps = boundary_eps(r);
        let p = sphere.center();
        let d0 = self.a.distance(p);
        let d1 = self.b.distance(p);
        let (dmin, _) = self.distance_range(p);

        if self.length() == 0.0 {
            return if (d0 - r).abs() <= eps { 1 } else { 0 };
        }
        if dmin > r + eps {
            return 0; // strictly outside
        }

        let on0 = (d0 - r).abs() <= eps;
        let on1 = (d1 - r).abs() <= eps;
        let in0 = d0 < r - eps;
        let in1 = d1 < r - eps;

        match (on0, on1) {
            (true, true) => 2,
            (true, false) | (false, true) => {
                let other_inside = if on0 { in1 } else { in0 };
                if other_inside {
                    // Convexity: after touching at the endpoint the distance
                    // stays below r, so there is no second boundary point.
                    1
                } else if dmin < r - eps {
                    // Touches at the endpoint, dips inside, and exits again.
                    2
                } else {
                    1
                }
            }
            (false, false) => {
                if in0 && in1 {
                    0 // entirely inside: the max distance is at an endpoint
                } else if in0 != in1 {
                    1 // exactly one endpoint strictly inside
                } else if dmin < r - eps {
                    2 // both outside, passes through
                } else {
                    1 // both outside, tangent (|dmin - r| <= eps here)
                }
            }
        }
    }

    /// Position of the whole segment relative to the sphere. `Inside` and
    /// `Outside` are strict (by more than the tolerance on both distance
    /// extremes); everything else, including exact touching, is `Crossing`.
    pub fn classify(&self, sphere: &Sphere) -> Classification {
        let r = sphere.radius();
        let eps = boundary_eps(r);
        let (dmin, dmax) = self.distance_range(sphere.center());
        if dmax < r - eps {
            Classification::Inside
        } else if dmin > r + eps {
            Classification::Outside
        } else {
            Classification::Crossing
        }
    }
}
