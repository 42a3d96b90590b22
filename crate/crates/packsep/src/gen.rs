//! Deterministic instance families used by the CLI and the test suites.

use crate::geom::{Point, Segment};
use crate::packed::SegmentSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `rows * cols` unit-length horizontal segments with their left endpoints on
/// the integer grid scaled by `spacing`. Requires rows, cols >= 1 and a
/// positive finite spacing.
pub fn grid(rows: usize, cols: usize, spacing: f64) -> SegmentSet {
    assert!(rows >= 1 && cols >= 1, "grid needs rows, cols >= 1");
    assert!(spacing.is_finite() && spacing > 0.0, "grid spacing must be > 0");
    let mut segs = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let y = spacing * i as f64;
        for j in 0..cols {
            let x = spacing * j as f64;
            segs.push(Segment::xy(x, y, x + 1.0, y));
        }
    }
    SegmentSet::new(segs).expect("grid segments are valid by construction")
}

/// `spokes` segments of the given length from the origin at evenly spaced
/// angles. The origin appears as an endpoint of every spoke, so the
/// packedness of the family is at least `spokes`.
pub fn star(spokes: usize, length: f64) -> SegmentSet {
    assert!(spokes >= 1, "star needs at least one spoke");
    assert!(length.is_finite() && length > 0.0, "spoke length must be > 0");
    let segs = (0..spokes)
        .map(|i| {
            let angle = std::f64::consts::TAU * i as f64 / spokes as f64;
            Segment::xy(0.0, 0.0, length * angle.cos(), length * angle.sin())
        })
        .collect();
    SegmentSet::new(segs).expect("star segments are valid by construction")
}

/// Koch snowflake boundary at the given subdivision depth: an equilateral
/// triangle of side `scale` whose edges are recursively replaced by the
/// four-segment bump, giving 3 * 4^depth segments. Capped at depth 8.
pub fn koch(depth: u32, scale: f64) -> SegmentSet {
    assert!(depth <= 8, "koch depth is capped at 8");
    assert!(scale.is_finite() && scale > 0.0, "koch scale must be > 0");
    let height = scale * 3f64.sqrt() / 2.0;
    let v0 = Point::xy(0.0, 0.0);
    let v1 = Point::xy(scale, 0.0);
    let v2 = Point::xy(0.5 * scale, height);
    let mut segs = Vec::with_capacity(3 * 4usize.pow(depth));
    // Counterclockwise traversal with bumps rotated -60 degrees, so they
    // point away from the triangle interior.
    expand_koch_edge(&v0, &v1, depth, &mut segs);
    expand_koch_edge(&v1, &v2, depth, &mut segs);
    expand_koch_edge(&v2, &v0, depth, &mut segs);
    SegmentSet::new(segs).expect("koch segments are valid by construction")
}

fn expand_koch_edge(a: &Point, b: &Point, depth: u32, out: &mut Vec<Segment>) {
    if depth == 0 {
        out.push(Segment::new(a.clone(), b.clone()));
        return;
    }
    let (ax, ay) = (a.coords()[0], a.coords()[1]);
    let (bx, by) = (b.coords()[0], b.coords()[1]);
    let (dx, dy) = ((bx - ax) / 3.0, (by - ay) / 3.0);
    let p1 = Point::xy(ax + dx, ay + dy);
    let p2 = Point::xy(ax + 2.0 * dx, ay + 2.0 * dy);
    // Rotate the middle third by -60 degrees around p1.
    let (cos, sin) = (0.5, 3f64.sqrt() / 2.0);
    let peak = Point::xy(
        ax + dx + cos * dx + sin * dy,
        ay + dy - sin * dx + cos * dy,
    );
    expand_koch_edge(a, &p1, depth - 1, out);
    expand_koch_edge(&p1, &peak, depth - 1, out);
    expand_koch_edge(&peak, &p2, depth - 1, out);
    expand_koch_edge(&p2, b, depth - 1, out);
}

/// Random polyline walk: `steps` segments of length `step_len`, each in a
/// uniformly random direction, chained head to tail from the origin.
/// Reproducible for a fixed seed.
pub fn polyline_walk(steps: usize, step_len: f64, seed: u64) -> SegmentSet {
    assert!(steps >= 1, "walk needs at least one step");
    assert!(step_len.is_finite() && step_len > 0.0, "step length must be > 0");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut segs = Vec::with_capacity(steps);
    let (mut x, mut y) = (0.0f64, 0.0f64);
    for _ in 0..steps {
        let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let (nx, ny) = (x + step_len * angle.cos(), y + step_len * angle.sin());
        segs.push(Segment::xy(x, y, nx, ny));
        x = nx;
        y = ny;
    }
    SegmentSet::new(segs).expect("walk segments are valid by construction")
}
