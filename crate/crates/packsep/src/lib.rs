//! Balanced sphere separators for packed segment sets.
//!
//! A set of segments is *c-packed* when no ball of radius `r` contains more
//! than `c * r` of its total length. For such sets a random sphere, centered
//! on a smallest ball holding a fixed fraction of the segment endpoints and
//! with radius drawn uniformly from `[r, 2r]`, crosses few segments in
//! expectation while leaving a guaranteed fraction of the set on each side.
//! This crate implements that construction end to end:
//!
//! * [`geom`]: points, segments, balls, spheres, and the clip / crossing /
//!   classification predicates connecting them.
//! * [`packed`]: segment sets, intrusion and crossing statistics, and a
//!   packedness estimator.
//! * [`keb`]: smallest k-point-enclosing balls (a fast 2-approximation and
//!   an exact planar reference).
//! * [`separator`]: the randomized separator itself, plus independent
//!   verification of its output.
//! * [`tree`]: recursive separator decompositions.
//! * [`gen`]: instance generators (grids, stars, Koch curves, random
//!   polylines).
//! * [`io`]: text formats for segment sets, JSON documents for results.
//! * [`svg`]: planar rendering of a result.
//! * [`oracle`]: slow brute-force reference implementations the test suites
//!   compare everything against.
//!
//! Everything randomized takes an explicit seed and is reproducible
//! bit-for-bit; results carry enough context (configuration, seed, radii
//! tried) to be re-checked without rerunning the search.

pub mod gen;
pub mod geom;
pub mod io;
pub mod keb;
pub mod oracle;
pub mod packed;
pub mod separator;
pub mod svg;
pub mod tree;

pub use geom::{boundary_eps, Ball, Classification, Point, Segment, Sphere};
pub use keb::{approx_k_enclosing_ball, exact_k_enclosing_ball};
pub use packed::{
    estimate_packedness, CenterStrategy, InvalidSegmentSet, PackednessEstimate, SegmentSet,
};
pub use separator::{
    find_separator, guarantee_applies, prepare, verify_separator, PreparedSeparator,
    SamplingMode, SeparatorConfig, SeparatorError, SeparatorResult, VerificationReport,
};
pub use tree::{build_tree, level_stats, verify_tree, LevelStats, SeparatorTree};
