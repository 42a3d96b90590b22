//! Brute-force reference searches used by the test suites.
//!
//! [`sweep_packedness`] maximizes the packedness ratio over a dense uniform
//! grid of centers crossed with a geometric radius ladder. It shares nothing
//! with [`crate::packed::estimate_packedness`]'s candidate enumeration (which
//! only looks at endpoints and midpoints), so agreement between the two is a
//! real check of the estimator's coverage. Cost is
//! O(centers_per_axis^d * n * radii); strictly a testing tool.

use crate::geom::Point;
use crate::packed::{radius_ladder, PackednessEstimate, SegmentSet};

/// Exhaustive center/radius sweep for the largest packedness ratio.
///
/// Centers form a `centers_per_axis`-per-axis uniform grid over the bounding
/// box; radii form a geometric ladder per center ending at the bounding
/// diameter. Like every candidate search, the result is a certified lower
/// bound on the true packedness, with the maximizing candidate as witness.
pub fn sweep_packedness(set: &SegmentSet, centers_per_axis: usize, radii: usize) -> PackednessEstimate {
    assert!(centers_per_axis >= 2 && radii >= 1);
    let dim = set.dim();
    let (lo, hi) = set.bounding_box();
    let ladder = radius_ladder(0.0, set.bounding_diameter(), radii);

    // Per-segment completed-square form of the squared distance to a center
    // p: dist^2(t) = dline2 + aa (t - tf)^2. From it, the length inside a
    // ball of radius r costs O(1) per radius instead of a fresh quadratic
    // solve, which is what makes a dense sweep affordable.
    struct SegPre {
        tf: f64,
        dline2: f64,
        aa: f64,
        len: f64,
    }
    let segs: Vec<(&[f64], &[f64])> = set
        .segments()
        .iter()
        .map(|s| (s.a().coords(), s.b().coords()))
        .collect();

    let mut best: Option<PackednessEstimate> = None;
    let mut index = vec![0usize; dim];
    let mut center = vec![0.0f64; dim];
    let mut pre: Vec<SegPre> = Vec::with_capacity(segs.len());

    loop {
        for (i, idx) in index.iter().enumerate() {
            let frac = *idx as f64 / (centers_per_axis - 1) as f64;
            center[i] = lo.coords()[i] + frac * (hi.coords()[i] - lo.coords()[i]);
        }

        pre.clear();
        for (a, b) in &segs {
            let mut aa = 0.0;
            let mut bb = 0.0;
            let mut cc = 0.0;
            for i in 0..dim {
                let d = b[i] - a[i];
                let u = a[i] - center[i];
                aa += d * d;
                bb += 2.0 * u * d;
                cc += u * u;
            }
            let tf = -bb / (2.0 * aa);
            let dline2 = (cc - 0.25 * bb * bb / aa).max(0.0);
            pre.push(SegPre {
                tf,
                dline2,
                aa,
                len: aa.sqrt(),
            });
        }

        for &r in &ladder {
            let r2 = r * r;
            let mut intrusion = 0.0;
            for s in &pre {
                if r2 <= s.dline2 {
                    continue;
                }
                let half = ((r2 - s.dline2) / s.aa).sqrt();
                let t_lo = (s.tf - half).max(0.0);
                let t_hi = (s.tf + half).min(1.0);
                if t_hi > t_lo {
                    intrusion += ((t_hi - t_lo) * s.len).min(s.len).min(2.0 * r);
                }
            }
            let ratio = intrusion / r;
            if best.as_ref().is_none_or(|b| ratio > b.c_hat) {
                best = Some(PackednessEstimate {
                    c_hat: ratio,
                    witness_center: Point::new(center.clone()),
                    witness_radius: r,
                });
            }
        }

        // Odometer over the center grid.
        let mut axis = 0;
        loop {
            if axis == dim {
                return best.expect("at least one candidate");
            }
            index[axis] += 1;
            if index[axis] < centers_per_axis {
                break;
            }
            index[axis] = 0;
            axis += 1;
        }
    }
}
