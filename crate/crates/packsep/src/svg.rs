//! SVG rendering of a planar separator result.
//!
//! Segments are drawn color-coded by the partition recorded in the result
//! (inside green, crossing red, outside gray) with the separator circle on
//! top. Output is deterministic: fixed number formatting, segments in input
//! order.

use crate::geom::Classification;
use crate::packed::SegmentSet;
use crate::separator::SeparatorResult;
use std::fmt::Write as _;
use thiserror::Error;

const INSIDE_COLOR: &str = "#2a9d2a";
const CROSSING_COLOR: &str = "#d63030";
const OUTSIDE_COLOR: &str = "#707a88";
const CIRCLE_COLOR: &str = "#1f4e9c";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SvgError {
    #[error("can only render planar sets, got dimension {dim}")]
    NotPlanar { dim: usize },
    #[error("result partition does not cover segment {index} exactly once")]
    BadPartition { index: usize },
}

/// Render the set and its separator to a standalone SVG document.
pub fn render(set: &SegmentSet, result: &SeparatorResult) -> Result<String, SvgError> {
    if set.dim() != 2 || result.sphere.center().dim() != 2 {
        return Err(SvgError::NotPlanar {
            dim: set.dim().max(result.sphere.center().dim()),
        });
    }
    let n = set.len();
    let mut classes: Vec<Option<Classification>> = vec![None; n];
    for (list, class) in [
        (&result.inside, Classification::Inside),
        (&result.crossing, Classification::Crossing),
        (&result.outside, Classification::Outside),
    ] {
        for &i in list.iter() {
            if i >= n || classes[i].is_some() {
                return Err(SvgError::BadPartition { index: i.min(n) });
            }
            classes[i] = Some(class);
        }
    }
    if let Some(missing) = classes.iter().position(|c| c.is_none()) {
        return Err(SvgError::BadPartition { index: missing });
    }

    let center = result.sphere.center().coords();
    let (cx, cy) = (center[0], center[1]);
    let r = result.sphere.radius();
    let (lo, hi) = set.bounding_box();
    let min_x = lo.coords()[0].min(cx - r);
    let min_y = lo.coords()[1].min(cy - r);
    let max_x = hi.coords()[0].max(cx + r);
    let max_y = hi.coords()[1].max(cy + r);
    let extent = (max_x - min_x).max(max_y - min_y);
    let pad = 0.05 * extent;
    let view_x = min_x - pad;
    let view_y = min_y - pad;
    let view_w = (max_x - min_x) + 2.0 * pad;
    let view_h = (max_y - min_y) + 2.0 * pad;
    // SVG's y axis points down; reflect within the view box so the picture
    // keeps the usual mathematical orientation.
    let flip = |y: f64| (min_y + max_y) - y;
    let stroke = extent / 400.0;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{view_x:.6} {view_y:.6} {view_w:.6} {view_h:.6}\">"
    );
    let _ = writeln!(
        out,
        "<g stroke-width=\"{stroke:.6}\" stroke-linecap=\"round\">"
    );
    for (seg, class) in set.segments().iter().zip(&classes) {
        let color = match class.unwrap() {
            Classification::Inside => INSIDE_COLOR,
            Classification::Crossing => CROSSING_COLOR,
            Classification::Outside => OUTSIDE_COLOR,
        };
        let (ax, ay) = (seg.a().coords()[0], seg.a().coords()[1]);
        let (bx, by) = (seg.b().coords()[0], seg.b().coords()[1]);
        let _ = writeln!(
            out,
            "<line x1=\"{ax:.6}\" y1=\"{:.6}\" x2=\"{bx:.6}\" y2=\"{:.6}\" stroke=\"{color}\"/>",
            flip(ay),
            flip(by)
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        "<circle cx=\"{cx:.6}\" cy=\"{:.6}\" r=\"{r:.6}\" fill=\"none\" stroke=\"{CIRCLE_COLOR}\" stroke-width=\"{stroke:.6}\"/>",
        flip(cy)
    );
    out.push_str("</svg>\n");
    Ok(out)
}
