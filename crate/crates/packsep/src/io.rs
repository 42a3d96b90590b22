//! Text formats for segment sets and JSON documents for results.
//!
//! Segment files are whitespace-separated real numbers, one record per line,
//! with `#` starting a comment and blank lines ignored:
//!
//! * [`SegmentFormat::Plain`]: each line holds one segment as `2d` numbers
//!   (both endpoints). The first data line fixes the dimension `d`.
//! * [`SegmentFormat::Polyline`]: each line holds a planar polyline as `2k`
//!   numbers (`k` points, `k - 1` segments chained in order).
//!
//! Results are single-line JSON documents tagged by `"kind"`
//! (`separator_result` or `separator_tree`) with the configuration that
//! produced them embedded, so a verifier needs nothing beyond the segment
//! file and the result file. Writers emit floats as `{:.16e}` (17
//! significant digits), which round-trips every finite f64 exactly and keeps
//! output byte-identical across runs.

use crate::geom::{Point, Segment, Sphere};
use crate::packed::SegmentSet;
use crate::separator::{SamplingMode, SeparatorConfig, SeparatorResult};
use crate::tree::SeparatorTree;
use serde::Deserialize;
use std::fmt::Write as _;
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentFormat {
    Plain,
    Polyline,
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("line {line}: cannot parse {token:?} as a number")]
    BadNumber { line: usize, token: String },
    #[error("line {line}: non-finite coordinate {token:?}")]
    NonFinite { line: usize, token: String },
    #[error("line {line}: found {found} values, expected an even count of at least 4")]
    BadCount { line: usize, found: usize },
    #[error("line {line}: found {found} values, expected {expected} for dimension {dim}")]
    WrongWidth {
        line: usize,
        found: usize,
        expected: usize,
        dim: usize,
    },
    #[error("line {line}: zero-length segment")]
    ZeroLength { line: usize },
    #[error("no segments in input")]
    Empty,
}

fn parse_line_numbers(line_no: usize, line: &str) -> Result<Vec<f64>, ParseError> {
    let mut values = Vec::new();
    for token in line.split_whitespace() {
        let value: f64 = token.parse().map_err(|_| ParseError::BadNumber {
            line: line_no,
            token: token.to_string(),
        })?;
        if !value.is_finite() {
            return Err(ParseError::NonFinite {
                line: line_no,
                token: token.to_string(),
            });
        }
        values.push(value);
    }
    Ok(values)
}

/// Parse a segment file. Lines are numbered from 1, comments and blank
/// lines included, so errors point at the offending source line.
pub fn parse_segments(input: &str, format: SegmentFormat) -> Result<SegmentSet, ParseError> {
    let mut segments = Vec::new();
    let mut dim: Option<usize> = None;
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let values = parse_line_numbers(line_no, line)?;
        if values.is_empty() {
            continue;
        }
        if values.len() % 2 != 0 || values.len() < 4 {
            return Err(ParseError::BadCount {
                line: line_no,
                found: values.len(),
            });
        }
        match format {
            SegmentFormat::Plain => {
                let d = *dim.get_or_insert(values.len() / 2);
                if values.len() != 2 * d {
                    return Err(ParseError::WrongWidth {
                        line: line_no,
                        found: values.len(),
                        expected: 2 * d,
                        dim: d,
                    });
                }
                let (a, b) = values.split_at(d);
                if a == b {
                    return Err(ParseError::ZeroLength { line: line_no });
                }
                segments.push(Segment::new(Point::new(a.to_vec()), Point::new(b.to_vec())));
            }
            SegmentFormat::Polyline => {
                for pair in values.windows(4).step_by(2) {
                    if pair[..2] == pair[2..] {
                        return Err(ParseError::ZeroLength { line: line_no });
                    }
                    segments.push(Segment::xy(pair[0], pair[1], pair[2], pair[3]));
                }
            }
        }
    }
    if segments.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(SegmentSet::new(segments).expect("parser enforces the set invariants"))
}

fn push_f64(out: &mut String, x: f64) {
    debug_assert!(x.is_finite(), "formats carry finite numbers only");
    let _ = write!(out, "{x:.16e}");
}

/// Render a segment set in the plain format, one segment per line.
pub fn write_segments(set: &SegmentSet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# segments n={} d={}", set.len(), set.dim());
    for seg in set.segments() {
        let mut first = true;
        for p in [seg.a(), seg.b()] {
            for &c in p.coords() {
                if !first {
                    out.push(' ');
                }
                first = false;
                push_f64(&mut out, c);
            }
        }
        out.push('\n');
    }
    out
}

fn push_f64_array(out: &mut String, xs: &[f64]) {
    out.push('[');
    for (i, &x) in xs.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        push_f64(out, x);
    }
    out.push(']');
}

fn push_usize_array(out: &mut String, xs: &[usize]) {
    out.push('[');
    for (i, &x) in xs.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{x}");
    }
    out.push(']');
}

fn push_sphere(out: &mut String, sphere: &Sphere) {
    out.push_str("{\"center\":");
    push_f64_array(out, sphere.center().coords());
    out.push_str(",\"radius\":");
    push_f64(out, sphere.radius());
    out.push('}');
}

fn push_config(out: &mut String, cfg: &SeparatorConfig) {
    let _ = write!(out, "{{\"c_bal\":{},\"mode\":", cfg.c_bal);
    match &cfg.mode {
        SamplingMode::Threshold { c_pack } => {
            out.push_str("{\"threshold\":{\"c_pack\":");
            push_f64(out, *c_pack);
            out.push_str("}}");
        }
        SamplingMode::MinOfM { m } => {
            let _ = write!(out, "{{\"min_of_m\":{{\"m\":{m}}}}}");
        }
    }
    let _ = write!(out, ",\"max_rounds\":{},\"seed\":{}}}", cfg.max_rounds, cfg.seed);
}

pub fn write_separator_result(
    set: &SegmentSet,
    result: &SeparatorResult,
    cfg: &SeparatorConfig,
) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\"format_version\":{FORMAT_VERSION},\"kind\":\"separator_result\",\"config\":"
    );
    push_config(&mut out, cfg);
    let _ = write!(out, ",\"n\":{},\"dim\":{},\"sphere\":", set.len(), set.dim());
    push_sphere(&mut out, &result.sphere);
    out.push_str(",\"base_radius\":");
    push_f64(&mut out, result.base_radius);
    let _ = write!(out, ",\"rounds_used\":{},\"radii_tried\":", result.rounds_used);
    push_f64_array(&mut out, &result.radii_tried);
    let _ = write!(
        out,
        ",\"accepted\":{},\"guarantee_applies\":{},\"inside\":",
        result.accepted, result.guarantee_applies
    );
    push_usize_array(&mut out, &result.inside);
    out.push_str(",\"crossing\":");
    push_usize_array(&mut out, &result.crossing);
    out.push_str(",\"outside\":");
    push_usize_array(&mut out, &result.outside);
    out.push_str("}\n");
    out
}

fn push_node(out: &mut String, node: &SeparatorTree) {
    match node {
        SeparatorTree::Leaf { indices, depth } => {
            let _ = write!(out, "{{\"leaf\":{{\"depth\":{depth},\"indices\":");
            push_usize_array(out, indices);
            out.push_str("}}");
        }
        SeparatorTree::Split {
            sphere,
            base_radius,
            rounds_used,
            accepted,
            guarantee_applies,
            crossing,
            inside,
            outside,
            depth,
        } => {
            let _ = write!(out, "{{\"split\":{{\"depth\":{depth},\"sphere\":");
            push_sphere(out, sphere);
            out.push_str(",\"base_radius\":");
            push_f64(out, *base_radius);
            let _ = write!(
                out,
                ",\"rounds_used\":{rounds_used},\"accepted\":{accepted},\"guarantee_applies\":{guarantee_applies},\"crossing\":"
            );
            push_usize_array(out, crossing);
            out.push_str(",\"inside\":");
            push_node(out, inside);
            out.push_str(",\"outside\":");
            push_node(out, outside);
            out.push_str("}}");
        }
    }
}

pub fn write_separator_tree(
    set: &SegmentSet,
    tree: &SeparatorTree,
    cfg: &SeparatorConfig,
    leaf_size: usize,
) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\"format_version\":{FORMAT_VERSION},\"kind\":\"separator_tree\",\"config\":"
    );
    push_config(&mut out, cfg);
    let _ = write!(
        out,
        ",\"leaf_size\":{leaf_size},\"n\":{},\"dim\":{},\"root\":",
        set.len(),
        set.dim()
    );
    push_node(&mut out, tree);
    out.push_str("}\n");
    out
}

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format_version {0}")]
    FormatVersion(u32),
    #[error("invalid result document: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum ModeDoc {
    Threshold { c_pack: f64 },
    MinOfM { m: u32 },
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct ConfigDoc {
    pub c_bal: u32,
    pub mode: ModeDoc,
    pub max_rounds: u32,
    pub seed: u64,
}

impl ConfigDoc {
    pub fn to_config(&self) -> Result<SeparatorConfig, ReadError> {
        if self.c_bal < 2 {
            return Err(ReadError::Invalid(format!("c_bal {} < 2", self.c_bal)));
        }
        if self.max_rounds < 1 {
            return Err(ReadError::Invalid("max_rounds < 1".into()));
        }
        let mode = match self.mode {
            ModeDoc::Threshold { c_pack } => {
                if !(c_pack.is_finite() && c_pack > 0.0) {
                    return Err(ReadError::Invalid(format!("c_pack {c_pack} not > 0")));
                }
                SamplingMode::Threshold { c_pack }
            }
            ModeDoc::MinOfM { m } => {
                if m < 1 {
                    return Err(ReadError::Invalid("min_of_m with m < 1".into()));
                }
                SamplingMode::MinOfM { m }
            }
        };
        Ok(SeparatorConfig {
            c_bal: self.c_bal,
            mode,
            max_rounds: self.max_rounds,
            seed: self.seed,
        })
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct SphereDoc {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl SphereDoc {
    fn to_sphere(&self, dim: usize) -> Result<Sphere, ReadError> {
        if self.center.len() != dim {
            return Err(ReadError::Invalid(format!(
                "sphere center has {} coordinates, document dimension is {dim}",
                self.center.len()
            )));
        }
        if dim < 2 || !self.center.iter().all(|c| c.is_finite()) {
            return Err(ReadError::Invalid("bad sphere center".into()));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(ReadError::Invalid(format!(
                "sphere radius {} not finite and positive",
                self.radius
            )));
        }
        Ok(Sphere::new(Point::new(self.center.clone()), self.radius))
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct SeparatorResultDoc {
    pub format_version: u32,
    pub config: ConfigDoc,
    pub n: usize,
    pub dim: usize,
    pub sphere: SphereDoc,
    pub base_radius: f64,
    pub rounds_used: u32,
    pub radii_tried: Vec<f64>,
    pub accepted: bool,
    pub guarantee_applies: bool,
    pub inside: Vec<usize>,
    pub crossing: Vec<usize>,
    pub outside: Vec<usize>,
}

impl SeparatorResultDoc {
    pub fn to_result(&self) -> Result<SeparatorResult, ReadError> {
        if !(self.base_radius.is_finite() && self.base_radius >= 0.0) {
            return Err(ReadError::Invalid(format!(
                "base_radius {} not finite and >= 0",
                self.base_radius
            )));
        }
        if !self.radii_tried.iter().all(|r| r.is_finite()) {
            return Err(ReadError::Invalid("non-finite entry in radii_tried".into()));
        }
        Ok(SeparatorResult {
            sphere: self.sphere.to_sphere(self.dim)?,
            inside: self.inside.clone(),
            crossing: self.crossing.clone(),
            outside: self.outside.clone(),
            base_radius: self.base_radius,
            rounds_used: self.rounds_used,
            radii_tried: self.radii_tried.clone(),
            accepted: self.accepted,
            guarantee_applies: self.guarantee_applies,
        })
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum NodeDoc {
    Leaf {
        depth: usize,
        indices: Vec<usize>,
    },
    Split {
        depth: usize,
        sphere: SphereDoc,
        base_radius: f64,
        rounds_used: u32,
        accepted: bool,
        guarantee_applies: bool,
        crossing: Vec<usize>,
        inside: Box<NodeDoc>,
        outside: Box<NodeDoc>,
    },
}

impl NodeDoc {
    fn to_tree(&self, dim: usize) -> Result<SeparatorTree, ReadError> {
        match self {
            NodeDoc::Leaf { depth, indices } => Ok(SeparatorTree::Leaf {
                indices: indices.clone(),
                depth: *depth,
            }),
            NodeDoc::Split {
                depth,
                sphere,
                base_radius,
                rounds_used,
                accepted,
                guarantee_applies,
                crossing,
                inside,
                outside,
            } => {
                if !(base_radius.is_finite() && *base_radius >= 0.0) {
                    return Err(ReadError::Invalid(format!(
                        "base_radius {base_radius} not finite and >= 0"
                    )));
                }
                Ok(SeparatorTree::Split {
                    sphere: sphere.to_sphere(dim)?,
                    base_radius: *base_radius,
                    rounds_used: *rounds_used,
                    accepted: *accepted,
                    guarantee_applies: *guarantee_applies,
                    crossing: crossing.clone(),
                    inside: Box::new(inside.to_tree(dim)?),
                    outside: Box::new(outside.to_tree(dim)?),
                    depth: *depth,
                })
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct SeparatorTreeDoc {
    pub format_version: u32,
    pub config: ConfigDoc,
    pub leaf_size: usize,
    pub n: usize,
    pub dim: usize,
    pub root: NodeDoc,
}

impl SeparatorTreeDoc {
    pub fn to_tree(&self) -> Result<SeparatorTree, ReadError> {
        self.root.to_tree(self.dim)
    }
}

/// A parsed result file, dispatched on its `"kind"` tag.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResultDocument {
    SeparatorResult(SeparatorResultDoc),
    SeparatorTree(SeparatorTreeDoc),
}

impl ResultDocument {
    pub fn config(&self) -> &ConfigDoc {
        match self {
            ResultDocument::SeparatorResult(d) => &d.config,
            ResultDocument::SeparatorTree(d) => &d.config,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            ResultDocument::SeparatorResult(d) => d.n,
            ResultDocument::SeparatorTree(d) => d.n,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ResultDocument::SeparatorResult(d) => d.dim,
            ResultDocument::SeparatorTree(d) => d.dim,
        }
    }
}

pub fn read_result_document(input: &str) -> Result<ResultDocument, ReadError> {
    #[derive(Deserialize)]
    struct VersionProbe {
        format_version: u32,
    }
    let probe: VersionProbe = serde_json::from_str(input)?;
    if probe.format_version != FORMAT_VERSION {
        return Err(ReadError::FormatVersion(probe.format_version));
    }
    Ok(serde_json::from_str(input)?)
}
