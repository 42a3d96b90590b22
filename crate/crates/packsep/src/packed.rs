//! Segment sets and the length-based packedness machinery.
//!
//! A set S is c-packed when the length of S inside any ball of radius r is at
//! most c*r. [`SegmentSet::intrusion`] measures that length for one ball,
//! [`SegmentSet::packedness_ratio`] normalizes it by the radius, and
//! [`estimate_packedness`] searches center/radius candidates for the largest
//! ratio, which is always a certified lower bound on the true c.
//!
//! The crossing-number side of the same story: [`SegmentSet::crossings_at`]
//! counts intersection points with one sphere, and the integral of that count
//! over radii in (0, r) never exceeds the intrusion at radius r (each crossing
//! of a sub-sphere pins down a bit of arc length). `integrated_crossings` and
//! `mean_crossings` estimate that integral and the mean count numerically.

use crate::geom::{Ball, Classification, Point, Segment, Sphere};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Why a list of segments was rejected as a [`SegmentSet`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvalidSegmentSet {
    #[error("segment set must contain at least one segment")]
    Empty,
    #[error("segment {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("segment {index} has zero length")]
    ZeroLength { index: usize },
}

/// A nonempty list of positive-length segments of equal dimension.
///
/// Indices into the set (used by separator results) are 0-based positions in
/// the original list; the endpoint list keeps one entry per segment endpoint,
/// duplicates included, in segment order.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentSet {
    segments: Vec<Segment>,
    dim: usize,
}

impl SegmentSet {
    pub fn new(segments: Vec<Segment>) -> Result<Self, InvalidSegmentSet> {
        let dim = segments.first().ok_or(InvalidSegmentSet::Empty)?.dim();
        for (index, seg) in segments.iter().enumerate() {
            if seg.dim() != dim {
                return Err(InvalidSegmentSet::DimensionMismatch {
                    index,
                    expected: dim,
                    found: seg.dim(),
                });
            }
            if seg.length() == 0.0 {
                return Err(InvalidSegmentSet::ZeroLength { index });
            }
        }
        Ok(SegmentSet { segments, dim })
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by construction
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// All 2n segment endpoints, as a multiset in segment order.
    pub fn endpoints(&self) -> Vec<Point> {
        let mut pts = Vec::with_capacity(2 * self.len());
        for seg in &self.segments {
            pts.push(seg.a().clone());
            pts.push(seg.b().clone());
        }
        pts
    }

    /// The subset with the given 0-based indices, in the given order.
    /// Panics on an out-of-range index; duplicates are the caller's bug.
    pub fn subset(&self, indices: &[usize]) -> SegmentSet {
        assert!(!indices.is_empty(), "subset must be nonempty");
        let segments = indices.iter().map(|&i| self.segments[i].clone()).collect();
        SegmentSet {
            segments,
            dim: self.dim,
        }
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    /// Axis-aligned bounding box of all endpoints, as (min corner, max corner).
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = self.segments[0].a().coords().to_vec();
        let mut hi = lo.clone();
        for seg in &self.segments {
            for pt in [seg.a(), seg.b()] {
                for (i, &c) in pt.coords().iter().enumerate() {
                    lo[i] = lo[i].min(c);
                    hi[i] = hi[i].max(c);
                }
            }
        }
        (Point::new(lo), Point::new(hi))
    }

    /// Diagonal of the bounding box: an upper bound (within sqrt(d)) on the
    /// true diameter, and the top of every radius ladder used by the
    /// packedness search. Positive, since segments have positive length.
    pub fn bounding_diameter(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        lo.distance(&hi)
    }

    /// Total length of the set inside the closed ball. Additive over
    /// concatenations of sets by definition.
    pub fn intrusion(&self, ball: &Ball) -> f64 {
        self.segments.iter().map(|s| s.clip_length(ball)).sum()
    }

    /// `intrusion(B(p, r)) / r`, the quantity whose supremum over all (p, r)
    /// is the packedness constant. Rejects r <= 0.
    pub fn packedness_ratio(&self, p: &Point, r: f64) -> f64 {
        assert!(r.is_finite() && r > 0.0, "packedness_ratio requires r > 0");
        self.intrusion(&Ball::new(p.clone(), r)) / r
    }

    /// Total number of intersection points of the set with the sphere of
    /// radius `x` around `p`. Rejects x <= 0.
    pub fn crossings_at(&self, p: &Point, x: f64) -> usize {
        assert!(x.is_finite() && x > 0.0, "crossings_at requires x > 0");
        let sphere = Sphere::new(p.clone(), x);
        self.segments.iter().map(|s| s.crossing_count(&sphere)).sum()
    }

    /// Per-segment distance thresholds from which the crossing count at any
    /// generic radius x follows by three comparisons: 2 crossings for
    /// dmin < x < min(d_a, d_b), 1 for min(d_a, d_b) < x < max(d_a, d_b),
    /// 0 otherwise. Agrees with [`Segment::crossing_count`] away from radii
    /// within [`boundary_eps`] of a threshold (a measure-zero set); the
    /// numeric estimators below sample radii continuously, so they use this
    /// O(1)-per-radius form instead of re-deriving every distance.
    fn crossing_thresholds(&self, p: &Point) -> Vec<(f64, f64, f64)> {
        self.segments
            .iter()
            .map(|s| {
                let d0 = s.a().distance(p);
                let d1 = s.b().distance(p);
                let (dmin, _) = s.distance_range(p);
                (dmin, d0.min(d1), d0.max(d1))
            })
            .collect()
    }

    fn count_from_thresholds(thresholds: &[(f64, f64, f64)], x: f64) -> usize {
        let mut count = 0;
        for &(dmin, dlo, dhi) in thresholds {
            if x > dmin && x < dhi {
                count += if x < dlo { 2 } else { 1 };
            }
        }
        count
    }

    /// Midpoint-rule estimate of the integral of the crossing count over
    /// radii in (0, r). Requires `steps` >= 100.
    pub fn integrated_crossings(&self, p: &Point, r: f64, steps: usize) -> f64 {
        assert!(r.is_finite() && r > 0.0, "integrated_crossings requires r > 0");
        assert!(steps >= 100, "integrated_crossings requires steps >= 100");
        let thresholds = self.crossing_thresholds(p);
        let h = r / steps as f64;
        let mut sum = 0usize;
        for i in 0..steps {
            let x = (i as f64 + 0.5) * h;
            sum += Self::count_from_thresholds(&thresholds, x);
        }
        sum as f64 * h
    }

    /// Monte Carlo mean of the crossing count over radii drawn uniformly from
    /// (a, b]. Requires 0 <= a < b and `samples` >= 1; reproducible for a
    /// fixed seed.
    pub fn mean_crossings(&self, p: &Point, a: f64, b: f64, samples: usize, seed: u64) -> f64 {
        assert!(a.is_finite() && b.is_finite() && 0.0 <= a && a < b, "mean_crossings requires 0 <= a < b");
        assert!(samples >= 1, "mean_crossings requires samples >= 1");
        let thresholds = self.crossing_thresholds(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sum = 0usize;
        for _ in 0..samples {
            // 1 - u lies in (0, 1], keeping x strictly positive when a = 0.
            let x = a + (1.0 - rng.random::<f64>()) * (b - a);
            sum += Self::count_from_thresholds(&thresholds, x);
        }
        sum as f64 / samples as f64
    }

    /// Classify every segment against the sphere, in index order.
    pub fn classify_all(&self, sphere: &Sphere) -> Vec<Classification> {
        self.segments.iter().map(|s| s.classify(sphere)).collect()
    }
}

/// Candidate centers used by [`estimate_packedness`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CenterStrategy {
    Endpoints,
    Midpoints,
    EndpointsAndMidpoints,
}

/// The largest packedness ratio found, with the candidate that attained it.
/// Re-evaluating `packedness_ratio` at the witness reproduces `c_hat`.
#[derive(Clone, Debug)]
pub struct PackednessEstimate {
    pub c_hat: f64,
    pub witness_center: Point,
    pub witness_radius: f64,
}

/// Geometric radius ladder used by the packedness searches: `count` radii
/// ending at `hi`, stepping by 2^(1/8) per rung, with rungs below `lo_floor`
/// clamped away (radii smaller than the distance to the nearest segment can
/// only score zero).
pub(crate) fn radius_ladder(lo_floor: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 1 && hi > 0.0);
    if count == 1 {
        return vec![hi];
    }
    let lo_default = hi * 2f64.powf(-((count - 1) as f64) / 8.0);
    let lo = lo_floor.max(lo_default).min(hi);
    if lo >= hi {
        return vec![hi; count];
    }
    let step = (hi / lo).powf(1.0 / (count - 1) as f64);
    (0..count)
        .map(|i| {
            if i == count - 1 {
                hi
            } else {
                lo * step.powi(i as i32)
            }
        })
        .collect()
}

/// Maximizes the packedness ratio over candidate centers (per `strategy`)
/// and a geometric radius ladder per center. The result is a lower bound on
/// the true packedness of `set`, with the maximizing candidate as witness.
///
/// Cost is O(candidates * radii_per_center * n); every candidate is
/// independent, so the loop is trivially parallel if it ever matters.
pub fn estimate_packedness(
    set: &SegmentSet,
    strategy: CenterStrategy,
    radii_per_center: usize,
) -> PackednessEstimate {
    assert!(radii_per_center >= 1);
    let mut centers: Vec<Point> = Vec::new();
    if matches!(strategy, CenterStrategy::Endpoints | CenterStrategy::EndpointsAndMidpoints) {
        centers.extend(set.endpoints());
    }
    if matches!(strategy, CenterStrategy::Midpoints | CenterStrategy::EndpointsAndMidpoints) {
        centers.extend(set.segments().iter().map(Segment::midpoint));
    }
    let hi = set.bounding_diameter();
    let mut best: Option<PackednessEstimate> = None;
    for center in centers {
        let closest = set
            .segments()
            .iter()
            .map(|s| s.distance_range(&center).0)
            .fold(f64::INFINITY, f64::min);
        for r in radius_ladder(closest, hi, radii_per_center) {
            let ratio = set.packedness_ratio(&center, r);
            if best.as_ref().is_none_or(|b| ratio > b.c_hat) {
                best = Some(PackednessEstimate {
                    c_hat: ratio,
                    witness_center: center.clone(),
                    witness_radius: r,
                });
            }
        }
    }
    best.expect("segment sets are nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::geom::boundary_eps;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn crossing_diameters() -> SegmentSet {
        SegmentSet::new(vec![
            Segment::xy(-2.0, 0.0, 2.0, 0.0),
            Segment::xy(0.0, -2.0, 0.0, 2.0),
        ])
        .unwrap()
    }

    fn unit_star(spokes: usize) -> SegmentSet {
        gen::star(spokes, 1.0)
    }

    #[test]
    fn rejects_empty_and_mixed_and_degenerate() {
        assert_eq!(SegmentSet::new(vec![]).unwrap_err(), InvalidSegmentSet::Empty);
        let mixed = SegmentSet::new(vec![
            Segment::xy(0.0, 0.0, 1.0, 0.0),
            Segment::new(Point::new(vec![0.0, 0.0, 0.0]), Point::new(vec![1.0, 0.0, 0.0])),
        ]);
        assert_eq!(
            mixed.unwrap_err(),
            InvalidSegmentSet::DimensionMismatch {
                index: 1,
                expected: 2,
                found: 3
            }
        );
        let degenerate = SegmentSet::new(vec![
            Segment::xy(0.0, 0.0, 1.0, 0.0),
            Segment::xy(3.0, 3.0, 3.0, 3.0),
        ]);
        assert_eq!(degenerate.unwrap_err(), InvalidSegmentSet::ZeroLength { index: 1 });
    }

    #[test]
    fn intrusion_of_crossing_diameters() {
        let ball = Ball::new(Point::xy(0.0, 0.0), 1.0);
        assert!((crossing_diameters().intrusion(&ball) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn intrusion_of_star_center() {
        let ball = Ball::new(Point::xy(0.0, 0.0), 0.5);
        assert!((unit_star(8).intrusion(&ball) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn packedness_ratio_examples() {
        assert!((unit_star(8).packedness_ratio(&Point::xy(0.0, 0.0), 0.5) - 8.0).abs() < 1e-12);
        let single = SegmentSet::new(vec![Segment::xy(0.0, 0.0, 1.0, 0.0)]).unwrap();
        assert!((single.packedness_ratio(&Point::xy(0.5, 0.0), 0.1) - 2.0).abs() < 1e-12);
        assert_eq!(single.packedness_ratio(&Point::xy(10.0, 10.0), 1.0), 0.0);
    }

    #[test]
    #[should_panic(expected = "requires r > 0")]
    fn packedness_ratio_rejects_nonpositive_radius() {
        unit_star(3).packedness_ratio(&Point::xy(0.0, 0.0), 0.0);
    }

    #[test]
    fn single_segment_ratio_never_exceeds_chord_bound() {
        // Chord of a radius-r ball is at most 2r, so the ratio caps at 2.
        let mut rng = ChaCha8Rng::seed_from_u64(40_001);
        let single = SegmentSet::new(vec![Segment::xy(-0.3, 0.1, 1.2, 0.9)]).unwrap();
        for _ in 0..100_000 {
            let p = Point::xy(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let r = rng.random_range(1e-4..5.0);
            assert!(single.packedness_ratio(&p, r) <= 2.0);
        }
    }

    #[test]
    fn intrusion_additive_over_concatenation() {
        let mut rng = ChaCha8Rng::seed_from_u64(40_002);
        for _ in 0..200 {
            let mut segs = Vec::new();
            for _ in 0..12 {
                let (ax, ay) = (rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
                let (bx, by) = (ax + rng.random_range(0.1..1.0), ay + rng.random_range(0.1..1.0));
                segs.push(Segment::xy(ax, ay, bx, by));
            }
            let split = rng.random_range(1..12);
            let whole = SegmentSet::new(segs.clone()).unwrap();
            let left = SegmentSet::new(segs[..split].to_vec()).unwrap();
            let right = SegmentSet::new(segs[split..].to_vec()).unwrap();
            let ball = Ball::new(
                Point::xy(rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0)),
                rng.random_range(0.2..4.0),
            );
            let sum = left.intrusion(&ball) + right.intrusion(&ball);
            assert!((whole.intrusion(&ball) - sum).abs() <= 1e-12 * (1.0 + sum));
        }
    }

    #[test]
    fn crossings_at_examples() {
        assert_eq!(crossing_diameters().crossings_at(&Point::xy(0.0, 0.0), 1.0), 4);
        assert_eq!(crossing_diameters().crossings_at(&Point::xy(0.0, 0.0), 3.0), 0);
        assert_eq!(unit_star(8).crossings_at(&Point::xy(0.0, 0.0), 0.5), 8);
    }

    #[test]
    fn threshold_counting_matches_crossings_at() {
        let mut rng = ChaCha8Rng::seed_from_u64(40_003);
        for _ in 0..50 {
            let mut segs = Vec::new();
            for _ in 0..rng.random_range(1..20) {
                let (ax, ay) = (rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
                let (bx, by) = (ax + rng.random_range(0.05..2.0), ay - rng.random_range(0.05..2.0));
                segs.push(Segment::xy(ax, ay, bx, by));
            }
            let set = SegmentSet::new(segs).unwrap();
            let p = Point::xy(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            let thresholds = set.crossing_thresholds(&p);
            for _ in 0..200 {
                let x: f64 = rng.random_range(0.01..8.0);
                let eps = boundary_eps(x);
                let near_boundary = thresholds
                    .iter()
                    .any(|&(dmin, dlo, dhi)| {
                        (x - dmin).abs() <= eps || (x - dlo).abs() <= eps || (x - dhi).abs() <= eps
                    });
                if near_boundary {
                    continue;
                }
                assert_eq!(
                    SegmentSet::count_from_thresholds(&thresholds, x),
                    set.crossings_at(&p, x)
                );
            }
        }
    }

    #[test]
    fn integrated_crossings_radial_segment() {
        let set = SegmentSet::new(vec![Segment::xy(0.0, 0.0, 1.0, 0.0)]).unwrap();
        let origin = Point::xy(0.0, 0.0);
        assert!((set.integrated_crossings(&origin, 1.0, 1000) - 1.0).abs() <= 0.01);
        assert!((set.integrated_crossings(&origin, 0.5, 1000) - 0.5).abs() <= 0.01);
    }

    #[test]
    fn integrated_crossings_never_exceeds_intrusion() {
        // Every crossing of a sub-sphere accounts for at least as much arc
        // length, so the integral is bounded by the clipped length.
        let mut rng = ChaCha8Rng::seed_from_u64(40_004);
        for _ in 0..300 {
            let mut segs = Vec::new();
            for _ in 0..rng.random_range(1..30) {
                let (ax, ay) = (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
                let ang: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let len = rng.random_range(0.1..2.0);
                segs.push(Segment::xy(ax, ay, ax + len * ang.cos(), ay + len * ang.sin()));
            }
            let set = SegmentSet::new(segs).unwrap();
            let p = Point::xy(rng.random_range(-6.0..6.0), rng.random_range(-6.0..6.0));
            let r = rng.random_range(0.2..7.0);
            let integral = set.integrated_crossings(&p, r, 2000);
            let intrusion = set.intrusion(&Ball::new(p, r));
            assert!(
                integral <= intrusion + 1e-2 * (1.0 + intrusion),
                "integral {integral} intrusion {intrusion}"
            );
        }
    }

    #[test]
    fn mean_crossings_constant_region_is_exact() {
        let star = unit_star(8);
        let mean = star.mean_crossings(&Point::xy(0.0, 0.0), 0.25, 0.75, 2000, 7);
        assert!((mean - 8.0).abs() <= 0.1);
        let far = star.mean_crossings(&Point::xy(50.0, 0.0), 1.0, 2.0, 500, 7);
        assert_eq!(far, 0.0);
    }

    #[test]
    fn mean_crossings_deterministic_per_seed() {
        let set = crossing_diameters();
        let p = Point::xy(0.3, 0.1);
        let a = set.mean_crossings(&p, 0.1, 3.0, 5000, 99);
        let b = set.mean_crossings(&p, 0.1, 3.0, 5000, 99);
        assert_eq!(a, b);
        let c = set.mean_crossings(&p, 0.1, 3.0, 5000, 100);
        assert_ne!(a, c);
    }

    #[test]
    fn radius_ladder_shape() {
        let ladder = radius_ladder(0.0, 8.0, 9);
        assert_eq!(ladder.len(), 9);
        assert_eq!(*ladder.last().unwrap(), 8.0);
        assert!((ladder[0] - 4.0).abs() < 1e-12); // 8 * 2^(-1) after 8 rungs of 2^(1/8)
        for w in ladder.windows(2) {
            assert!(w[0] < w[1]);
        }
        // A positive floor clamps the bottom of the ladder.
        let clamped = radius_ladder(6.0, 8.0, 5);
        assert!(clamped.iter().all(|&r| (6.0..=8.0).contains(&r)));
        assert_eq!(*clamped.last().unwrap(), 8.0);
    }

    #[test]
    fn estimate_on_single_segment_finds_chord_bound() {
        let single = SegmentSet::new(vec![Segment::xy(0.0, 0.0, 1.0, 0.0)]).unwrap();
        let est = estimate_packedness(&single, CenterStrategy::EndpointsAndMidpoints, 32);
        assert!(est.c_hat >= 2.0 - 1e-3 && est.c_hat <= 2.0, "c_hat = {}", est.c_hat);
    }

    #[test]
    fn estimate_on_star_counts_spokes() {
        let est = estimate_packedness(&unit_star(8), CenterStrategy::EndpointsAndMidpoints, 32);
        assert!(est.c_hat >= 8.0 - 1e-9, "c_hat = {}", est.c_hat);
    }

    #[test]
    fn estimate_witness_reproduces_c_hat() {
        let set = gen::koch(3, 1.0);
        for strategy in [
            CenterStrategy::Endpoints,
            CenterStrategy::Midpoints,
            CenterStrategy::EndpointsAndMidpoints,
        ] {
            let est = estimate_packedness(&set, strategy, 24);
            let again = set.packedness_ratio(&est.witness_center, est.witness_radius);
            assert!((again - est.c_hat).abs() <= 1e-9 * est.c_hat.max(1.0));
        }
    }
}
