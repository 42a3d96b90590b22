//! Balanced sphere separators for packed segment sets.
//!
//! The construction: take the 2n segment endpoints, find (approximately) the
//! smallest ball B(p, r) containing k = ceil(2n / c_bal) of them, and draw
//! the separator radius x uniformly from [r, 2r]. Every endpoint counted by
//! the base ball stays inside the separator sphere, B(p, 2r) can only hold a
//! bounded fraction of all endpoints, and for a c-packed set the expected
//! number of segments crossing the random sphere is at most
//! intrusion(B(p, 2r)) / r <= 2 c: the sphere splits the set into two
//! linearly sized sides while cutting O(c) segments.
//!
//! Radius sampling comes in two flavors, [`SamplingMode::Threshold`] (redraw
//! until at most 4 * c_pack segments cross, the form the crossing bound is
//! stated for) and [`SamplingMode::MinOfM`] (fixed budget of m draws, keep
//! the best), which needs no packedness estimate up front.
//!
//! The balance guarantee n / (2 c_bal) per side kicks in once n >= 8 *
//! c_bal^2; below that threshold results carry `guarantee_applies = false`
//! and are best-effort. c_bal defaults to 50 = 7^2 + 1, driven by the planar
//! doubling constant 7 and the factor-2 base ball.

use crate::geom::{Ball, Classification, Sphere};
use crate::keb::approx_k_enclosing_ball;
use crate::packed::SegmentSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use thiserror::Error;

pub const DEFAULT_C_BAL: u32 = 50;
pub const DEFAULT_MAX_ROUNDS: u32 = 64;

/// How the separator radius is drawn from [r, 2r].
#[derive(Clone, Debug, PartialEq)]
pub enum SamplingMode {
    /// Redraw until at most `4 * c_pack` segments cross, up to `max_rounds`
    /// draws. If every draw fails the threshold, the result keeps the
    /// fewest-crossings radius seen and is flagged `accepted = false`.
    Threshold { c_pack: f64 },
    /// Draw exactly `m` radii and keep the first that attains the minimum
    /// crossing count. Always flagged accepted.
    MinOfM { m: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparatorConfig {
    /// Balance parameter: the base ball encloses ceil(2n / c_bal) endpoints.
    pub c_bal: u32,
    pub mode: SamplingMode,
    /// Draw budget for `Threshold` mode; ignored by `MinOfM`.
    pub max_rounds: u32,
    pub seed: u64,
}

impl SeparatorConfig {
    pub fn threshold(c_pack: f64, seed: u64) -> Self {
        assert!(c_pack.is_finite() && c_pack > 0.0, "c_pack must be > 0");
        SeparatorConfig {
            c_bal: DEFAULT_C_BAL,
            mode: SamplingMode::Threshold { c_pack },
            max_rounds: DEFAULT_MAX_ROUNDS,
            seed,
        }
    }

    pub fn min_of_m(m: u32, seed: u64) -> Self {
        assert!(m >= 1, "m must be >= 1");
        SeparatorConfig {
            c_bal: DEFAULT_C_BAL,
            mode: SamplingMode::MinOfM { m },
            max_rounds: DEFAULT_MAX_ROUNDS,
            seed,
        }
    }

    pub fn with_c_bal(mut self, c_bal: u32) -> Self {
        assert!(c_bal >= 2, "c_bal must be >= 2");
        self.c_bal = c_bal;
        self
    }

    pub fn with_max_rounds(mut self, max_rounds: u32) -> Self {
        assert!(max_rounds >= 1, "max_rounds must be >= 1");
        self.max_rounds = max_rounds;
        self
    }
}

/// A separator sphere together with the index partition it induces.
/// The three index lists are 0-based positions into the segment set, sorted
/// ascending within each list, and partition 0..n.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparatorResult {
    pub sphere: Sphere,
    pub inside: Vec<usize>,
    pub crossing: Vec<usize>,
    pub outside: Vec<usize>,
    /// Radius r of the base k-enclosing ball; the sphere radius lies in [r, 2r].
    pub base_radius: f64,
    pub rounds_used: u32,
    pub radii_tried: Vec<f64>,
    /// False only when `Threshold` mode exhausted its rounds; the sphere is
    /// then the best seen, not one meeting the crossing threshold.
    pub accepted: bool,
    /// Whether n >= 8 * c_bal^2, the regime in which the balance guarantee
    /// holds.
    pub guarantee_applies: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeparatorError {
    #[error("separator needs at least 2 segments, got {n}")]
    TooFewSegments { n: usize },
}

/// The deterministic part of the separator: the endpoint multiset's
/// approximate smallest k-enclosing ball. Computing it is the O(n^2) part of
/// the construction, so callers running many seeded draws against one set
/// should prepare once and then [`PreparedSeparator::run`] per seed.
#[derive(Clone, Debug)]
pub struct PreparedSeparator {
    base: Ball,
    k: usize,
    c_bal: u32,
    n: usize,
}

pub fn prepare(set: &SegmentSet, c_bal: u32) -> Result<PreparedSeparator, SeparatorError> {
    assert!(c_bal >= 2, "c_bal must be >= 2");
    let n = set.len();
    if n < 2 {
        return Err(SeparatorError::TooFewSegments { n });
    }
    let endpoints = set.endpoints();
    let mut k = (2 * n).div_ceil(c_bal as usize);
    let mut base = approx_k_enclosing_ball(&endpoints, k);
    // A radius-zero ball (k coincident endpoints, e.g. heavily shared
    // polyline vertices) leaves no room to sample a sphere. Growing k only
    // adds endpoints to the inside, so it never hurts the balance argument;
    // segments have positive length, so k = 2n always yields a positive
    // radius.
    while base.radius() == 0.0 {
        k = (2 * k).min(2 * n);
        base = approx_k_enclosing_ball(&endpoints, k);
    }
    Ok(PreparedSeparator {
        base,
        k,
        c_bal,
        n,
    })
}

impl PreparedSeparator {
    pub fn base_ball(&self) -> &Ball {
        &self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Draw a separator for the set this preparation was built from.
    pub fn run(
        &self,
        set: &SegmentSet,
        mode: &SamplingMode,
        max_rounds: u32,
        seed: u64,
    ) -> SeparatorResult {
        assert_eq!(set.len(), self.n, "prepared for a different segment set");
        assert!(max_rounds >= 1, "max_rounds must be >= 1");
        let p = self.base.center();
        let r = self.base.radius();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut radii_tried = Vec::new();
        let draw = |rng: &mut ChaCha8Rng, radii: &mut Vec<f64>| -> (f64, usize) {
            let x: f64 = rng.random_range(r..=2.0 * r);
            radii.push(x);
            let sphere = Sphere::new(p.clone(), x);
            let crossings = set
                .segments()
                .iter()
                .filter(|s| s.classify(&sphere) == Classification::Crossing)
                .count();
            (x, crossings)
        };

        let (chosen, rounds_used, accepted) = match mode {
            SamplingMode::Threshold { c_pack } => {
                assert!(c_pack.is_finite() && *c_pack > 0.0, "c_pack must be > 0");
                let mut best: Option<(usize, f64)> = None;
                let mut outcome = None;
                for round in 1..=max_rounds {
                    let (x, crossings) = draw(&mut rng, &mut radii_tried);
                    if best.is_none_or(|(bc, _)| crossings < bc) {
                        best = Some((crossings, x));
                    }
                    if crossings as f64 <= 4.0 * c_pack {
                        outcome = Some((x, round, true));
                        break;
                    }
                }
                outcome.unwrap_or_else(|| (best.unwrap().1, max_rounds, false))
            }
            SamplingMode::MinOfM { m } => {
                assert!(*m >= 1, "m must be >= 1");
                let mut best: Option<(usize, f64)> = None;
                for _ in 0..*m {
                    let (x, crossings) = draw(&mut rng, &mut radii_tried);
                    if best.is_none_or(|(bc, _)| crossings < bc) {
                        best = Some((crossings, x));
                    }
                }
                (best.unwrap().1, *m, true)
            }
        };

        let sphere = Sphere::new(p.clone(), chosen);
        let mut inside = Vec::new();
        let mut crossing = Vec::new();
        let mut outside = Vec::new();
        for (i, class) in set.classify_all(&sphere).into_iter().enumerate() {
            match class {
                Classification::Inside => inside.push(i),
                Classification::Crossing => crossing.push(i),
                Classification::Outside => outside.push(i),
            }
        }
        SeparatorResult {
            sphere,
            inside,
            crossing,
            outside,
            base_radius: r,
            rounds_used,
            radii_tried,
            accepted,
            guarantee_applies: guarantee_applies(self.n, self.c_bal),
        }
    }
}

/// Whether the balance guarantee regime n >= 8 * c_bal^2 holds.
pub fn guarantee_applies(n: usize, c_bal: u32) -> bool {
    (n as u64) >= 8 * (c_bal as u64) * (c_bal as u64)
}

/// Compute a balanced sphere separator for the set. Reproducible: the same
/// set, configuration, and seed give the identical result.
pub fn find_separator(
    set: &SegmentSet,
    cfg: &SeparatorConfig,
) -> Result<SeparatorResult, SeparatorError> {
    let prepared = prepare(set, cfg.c_bal)?;
    Ok(prepared.run(set, &cfg.mode, cfg.max_rounds, cfg.seed))
}

/// Independent re-check of a separator result against its segment set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub n: usize,
    /// Every index lands in the list matching a fresh classification against
    /// the sphere.
    pub partition_consistent: bool,
    pub inside_count: usize,
    pub crossing_count: usize,
    pub outside_count: usize,
    /// inside_count >= n / (2 c_bal), as an exact integer comparison.
    pub inside_balance_ok: bool,
    pub outside_balance_ok: bool,
}

impl VerificationReport {
    /// Overall pass: the partition is consistent, and when the guarantee
    /// regime applies both balance bounds hold.
    pub fn passes(&self, guarantee_applies: bool) -> bool {
        self.partition_consistent
            && (!guarantee_applies || (self.inside_balance_ok && self.outside_balance_ok))
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "partition_consistent={} inside={} crossing={} outside={} inside_balance_ok={} outside_balance_ok={}",
            self.partition_consistent,
            self.inside_count,
            self.crossing_count,
            self.outside_count,
            self.inside_balance_ok,
            self.outside_balance_ok
        )
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MalformedResult {
    #[error("index {index} out of range for {n} segments")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("index {index} appears {count} times across the partition")]
    IndexMultiplicity { index: usize, count: usize },
    #[error("result has dimension {found}, segment set has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Re-derive the classification of every segment and compare it with the
/// result's index lists. Structural defects (out-of-range or duplicated
/// indices, dimension mismatch) are errors; a well-formed partition that
/// disagrees with the fresh classification comes back with
/// `partition_consistent = false`.
pub fn verify_separator(
    set: &SegmentSet,
    result: &SeparatorResult,
    c_bal: u32,
) -> Result<VerificationReport, MalformedResult> {
    assert!(c_bal >= 2, "c_bal must be >= 2");
    let n = set.len();
    if result.sphere.center().dim() != set.dim() {
        return Err(MalformedResult::DimensionMismatch {
            expected: set.dim(),
            found: result.sphere.center().dim(),
        });
    }
    let mut membership = vec![0u8; n];
    for (list, tag) in [
        (&result.inside, 1u8),
        (&result.crossing, 2u8),
        (&result.outside, 3u8),
    ] {
        for &i in list.iter() {
            if i >= n {
                return Err(MalformedResult::IndexOutOfRange { index: i, n });
            }
            if membership[i] != 0 {
                return Err(MalformedResult::IndexMultiplicity { index: i, count: 2 });
            }
            membership[i] = tag;
        }
    }
    if let Some(missing) = membership.iter().position(|&m| m == 0) {
        return Err(MalformedResult::IndexMultiplicity {
            index: missing,
            count: 0,
        });
    }

    let mut consistent = true;
    for (i, class) in set.classify_all(&result.sphere).into_iter().enumerate() {
        let expected = match class {
            Classification::Inside => 1,
            Classification::Crossing => 2,
            Classification::Outside => 3,
        };
        if membership[i] != expected {
            consistent = false;
            break;
        }
    }

    let inside_count = result.inside.len();
    let crossing_count = result.crossing.len();
    let outside_count = result.outside.len();
    let c = c_bal as usize;
    Ok(VerificationReport {
        n,
        partition_consistent: consistent,
        inside_count,
        crossing_count,
        outside_count,
        inside_balance_ok: inside_count * 2 * c >= n,
        outside_balance_ok: outside_count * 2 * c >= n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::geom::Segment;

    #[test]
    fn rejects_single_segment() {
        let set = SegmentSet::new(vec![Segment::xy(0.0, 0.0, 1.0, 0.0)]).unwrap();
        let cfg = SeparatorConfig::min_of_m(4, 1);
        assert_eq!(
            find_separator(&set, &cfg).unwrap_err(),
            SeparatorError::TooFewSegments { n: 1 }
        );
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let set = gen::grid(10, 10, 2.0);
        let cfg = SeparatorConfig::min_of_m(8, 12345).with_c_bal(4);
        let a = find_separator(&set, &cfg).unwrap();
        let b = find_separator(&set, &cfg).unwrap();
        assert_eq!(a, b);
        let other = SeparatorConfig::min_of_m(8, 54321).with_c_bal(4);
        let c = find_separator(&set, &other).unwrap();
        assert_ne!(a.radii_tried, c.radii_tried);
    }

    #[test]
    fn sphere_radius_within_base_band_and_partition_verifies() {
        let set = gen::grid(20, 20, 2.0);
        let cfg = SeparatorConfig::min_of_m(8, 7).with_c_bal(4);
        let res = find_separator(&set, &cfg).unwrap();
        assert!(res.sphere.radius() >= res.base_radius);
        assert!(res.sphere.radius() <= 2.0 * res.base_radius + 1e-12);
        assert_eq!(res.rounds_used, 8);
        assert_eq!(res.radii_tried.len(), 8);
        assert!(res.accepted);
        assert_eq!(
            res.inside.len() + res.crossing.len() + res.outside.len(),
            set.len()
        );
        let report = verify_separator(&set, &res, cfg.c_bal).unwrap();
        assert!(report.partition_consistent);
        assert!(report.passes(res.guarantee_applies));
    }

    #[test]
    fn threshold_mode_acceptance_respects_bound() {
        let set = gen::grid(20, 20, 2.0);
        // Packedness of this family is comfortably above 10, so acceptance
        // should be quick, and any accepted sphere obeys the bound.
        let cfg = SeparatorConfig::threshold(20.0, 3).with_c_bal(4);
        let res = find_separator(&set, &cfg).unwrap();
        if res.accepted {
            assert!(res.crossing.len() as f64 <= 4.0 * 20.0);
            assert!(res.rounds_used as usize == res.radii_tried.len());
        }
    }

    #[test]
    fn threshold_exhaustion_keeps_best_and_flags() {
        // Spokes from a tiny inner ring out to radius 100: the base ball
        // hugs the ring, so every candidate sphere is pierced by at least
        // the k spokes whose inner endpoints it encloses. A threshold of
        // 4 * 1 = 4 crossings is then impossible for k = 8, every draw
        // fails, and the result must carry the minimum-crossing radius and
        // accepted = false.
        let spokes: Vec<Segment> = (0..16)
            .map(|i| {
                let angle = std::f64::consts::TAU * (i as f64) / 16.0;
                Segment::xy(
                    0.01 * angle.cos(),
                    0.01 * angle.sin(),
                    100.0 * angle.cos(),
                    100.0 * angle.sin(),
                )
            })
            .collect();
        let set = SegmentSet::new(spokes).unwrap();
        let cfg = SeparatorConfig::threshold(1.0, 11).with_c_bal(4).with_max_rounds(5);
        let res = find_separator(&set, &cfg).unwrap();
        assert!(!res.accepted);
        assert_eq!(res.rounds_used, 5);
        assert_eq!(res.radii_tried.len(), 5);
        let crossings_of = |x: f64| {
            let sphere = Sphere::new(res.sphere.center().clone(), x);
            set.segments()
                .iter()
                .filter(|s| s.classify(&sphere) == Classification::Crossing)
                .count()
        };
        let best = res
            .radii_tried
            .iter()
            .map(|&x| crossings_of(x))
            .min()
            .unwrap();
        assert_eq!(crossings_of(res.sphere.radius()), best);
    }

    #[test]
    fn small_instance_guarantee_flag_is_false() {
        let set = gen::star(8, 1.0);
        // A star's spokes all share the origin endpoint; the base ball
        // degenerates to radius zero there and the construction falls back
        // to a larger k.
        let cfg = SeparatorConfig::min_of_m(4, 5);
        let res = find_separator(&set, &cfg).unwrap();
        assert!(!res.guarantee_applies);
        assert!(res.base_radius > 0.0);
        assert!(res.sphere.radius() > 0.0);
    }

    #[test]
    fn guarantee_threshold_is_sharp() {
        assert!(guarantee_applies(20_000, 50));
        assert!(!guarantee_applies(19_999, 50));
        assert!(guarantee_applies(128, 4));
        assert!(!guarantee_applies(127, 4));
    }

    #[test]
    fn verify_rejects_structural_tampering() {
        let set = gen::grid(8, 8, 2.0);
        let cfg = SeparatorConfig::min_of_m(4, 2).with_c_bal(4);
        let good = find_separator(&set, &cfg).unwrap();
        assert!(verify_separator(&set, &good, cfg.c_bal)
            .unwrap()
            .partition_consistent);

        // Move one index between lists: still a partition, no longer
        // consistent with a fresh classification.
        let mut moved = good.clone();
        let idx = moved.inside.pop().or_else(|| moved.outside.pop()).unwrap();
        moved.crossing.push(idx);
        let report = verify_separator(&set, &moved, cfg.c_bal).unwrap();
        assert!(!report.partition_consistent);
        assert!(!report.passes(false));

        // Duplicate an index: malformed.
        let mut duplicated = good.clone();
        let dup = duplicated.outside[0];
        duplicated.inside.push(dup);
        assert!(matches!(
            verify_separator(&set, &duplicated, cfg.c_bal),
            Err(MalformedResult::IndexMultiplicity { .. })
        ));

        // Out-of-range index: malformed.
        let mut out_of_range = good;
        out_of_range.outside.pop();
        out_of_range.outside.push(set.len() + 5);
        assert!(matches!(
            verify_separator(&set, &out_of_range, cfg.c_bal),
            Err(MalformedResult::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn prepared_run_matches_find_separator() {
        let set = gen::grid(12, 12, 2.0);
        let cfg = SeparatorConfig::min_of_m(6, 77).with_c_bal(4);
        let via_prepare = prepare(&set, cfg.c_bal)
            .unwrap()
            .run(&set, &cfg.mode, cfg.max_rounds, cfg.seed);
        assert_eq!(find_separator(&set, &cfg).unwrap(), via_prepare);
    }
}
