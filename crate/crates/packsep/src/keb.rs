//! Approximate and exact smallest k-enclosing balls.
//!
//! [`approx_k_enclosing_ball`] restricts centers to the input points, which
//! costs at most a factor 2 in the radius: any point covered by the optimal
//! ball sees the other k-1 covered points within twice the optimal radius.
//! [`exact_k_enclosing_ball`] is the planar brute-force reference the
//! approximation is tested against.
//!
//! Both break ties among equal-radius candidates toward the
//! lexicographically smallest center, so results are deterministic.

use crate::geom::{boundary_eps, Ball, Point};

/// Smallest ball centered at an input point whose radius is the k-th
/// smallest distance from that center, minimized over all input points as
/// centers. Always within a factor 2 of the optimal k-enclosing radius.
/// O(n^2). Requires 1 <= k <= |points|.
pub fn approx_k_enclosing_ball(points: &[Point], k: usize) -> Ball {
    assert!(!points.is_empty(), "need at least one point");
    assert!(k >= 1 && k <= points.len(), "k must be in 1..=|points|");
    let mut dist2 = vec![0.0f64; points.len()];
    let mut best: Option<(f64, usize)> = None;
    for (i, center) in points.iter().enumerate() {
        for (d, q) in dist2.iter_mut().zip(points) {
            *d = center.distance_sq(q);
        }
        let (_, kth, _) = dist2.select_nth_unstable_by(k - 1, f64::total_cmp);
        let r2 = *kth;
        let better = match &best {
            None => true,
            Some((best_r2, best_i)) => {
                r2 < *best_r2 || (r2 == *best_r2 && points[i].lex_le(&points[*best_i]))
            }
        };
        if better {
            best = Some((r2, i));
        }
    }
    let (r2, i) = best.unwrap();
    Ball::new(points[i].clone(), r2.sqrt())
}

/// Exact smallest k-enclosing ball in the plane, by exhausting the candidate
/// balls determined by one point (radius zero), a diametral pair, or a
/// circumscribed triple. Reference implementation for tests only: requires
/// d = 2 and |points| <= 60, and costs O(n^4).
pub fn exact_k_enclosing_ball(points: &[Point], k: usize) -> Ball {
    assert!(!points.is_empty(), "need at least one point");
    assert!(k >= 1 && k <= points.len(), "k must be in 1..=|points|");
    assert!(points.iter().all(|p| p.dim() == 2), "exact search is planar only");
    assert!(points.len() <= 60, "exact search is capped at 60 points");

    let n = points.len();
    let covers = |cx: f64, cy: f64, r: f64| -> bool {
        let eps = boundary_eps(r);
        let reach = (r + eps) * (r + eps);
        let mut count = 0;
        for p in points {
            let dx = p.coords()[0] - cx;
            let dy = p.coords()[1] - cy;
            if dx * dx + dy * dy <= reach {
                count += 1;
                if count >= k {
                    return true;
                }
            }
        }
        false
    };

    let mut best: Option<(f64, f64, f64)> = None; // (radius, cx, cy)
    let mut consider = |cx: f64, cy: f64, r: f64| {
        if !r.is_finite() || !cx.is_finite() || !cy.is_finite() {
            return;
        }
        if let Some((br, bx, by)) = best {
            if r > br || (r == br && (cx, cy) >= (bx, by)) {
                return;
            }
        }
        if covers(cx, cy, r) {
            best = Some((r, cx, cy));
        }
    };

    for p in points {
        consider(p.coords()[0], p.coords()[1], 0.0);
    }
    for i in 0..n {
        let (ax, ay) = (points[i].coords()[0], points[i].coords()[1]);
        for j in i + 1..n {
            let (bx, by) = (points[j].coords()[0], points[j].coords()[1]);
            consider(0.5 * (ax + bx), 0.5 * (ay + by), 0.5 * points[i].distance(&points[j]));
            for p in &points[j + 1..n] {
                let (cx, cy) = (p.coords()[0], p.coords()[1]);
                // Circumcenter; exactly collinear triples have no circle and
                // are already covered by their extreme pair.
                let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
                if d == 0.0 {
                    continue;
                }
                let a2 = ax * ax + ay * ay;
                let b2 = bx * bx + by * by;
                let c2 = cx * cx + cy * cy;
                let ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
                let uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
                let r = ((ux - ax) * (ux - ax) + (uy - ay) * (uy - ay)).sqrt();
                consider(ux, uy, r);
            }
        }
    }

    let (r, cx, cy) = best.expect("radius-zero candidates always cover k = 1");
    Ball::new(Point::xy(cx, cy), r)
}
