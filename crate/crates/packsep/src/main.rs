//! Command-line front end: generate instances, estimate packedness, compute
//! separators and separator trees, verify result files, render SVG.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid input (unreadable or
//! malformed files, bad parameter values), 3 verification failure (a result
//! file that does not hold up against its segment file).

use clap::builder::ArgGroup;
use clap::{Args, Parser, Subcommand, ValueEnum};
use packsep::io::{
    self, read_result_document, ParseError, ReadError, ResultDocument, SegmentFormat,
};
use packsep::packed::{estimate_packedness, CenterStrategy, SegmentSet};
use packsep::separator::{
    find_separator, guarantee_applies, verify_separator, SamplingMode, SeparatorConfig,
    SeparatorError, DEFAULT_C_BAL, DEFAULT_MAX_ROUNDS,
};
use packsep::svg::SvgError;
use packsep::tree::{build_tree, level_stats, verify_tree};
use packsep::gen;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "packsep",
    version,
    about = "Balanced sphere separators for packed segment sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a sample segment set
    Gen(GenArgs),
    /// Estimate the packedness of a segment set
    Pack(PackArgs),
    /// Compute a separator sphere
    Separate(SeparateArgs),
    /// Build a recursive separator tree
    Tree(TreeArgs),
    /// Re-check a result file against its segment file
    Verify(VerifyArgs),
    /// Render a separator result as SVG
    Svg(SvgArgs),
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    family: GenFamily,
    /// Write to this file instead of standard output
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenFamily {
    /// Grid of unit-length horizontal segments
    Grid {
        #[arg(long, default_value_t = 10)]
        rows: usize,
        #[arg(long, default_value_t = 10)]
        cols: usize,
        #[arg(long, default_value_t = 2.0)]
        spacing: f64,
    },
    /// Segments radiating from the origin
    Star {
        #[arg(long, default_value_t = 8)]
        spokes: usize,
        #[arg(long, default_value_t = 1.0)]
        length: f64,
    },
    /// Koch snowflake boundary
    Koch {
        #[arg(long, default_value_t = 4)]
        depth: u32,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// Random polyline walk
    Walk {
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = 1.0)]
        step_len: f64,
        /// RNG seed
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    /// One segment per line: 2d coordinates
    Plain,
    /// One planar polyline per line: 2k coordinates
    Polyline,
}

impl From<FormatArg> for SegmentFormat {
    fn from(f: FormatArg) -> SegmentFormat {
        match f {
            FormatArg::Plain => SegmentFormat::Plain,
            FormatArg::Polyline => SegmentFormat::Polyline,
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Segment file, or '-' for standard input
    input: String,
    /// Segment file format
    #[arg(long, value_enum, default_value_t = FormatArg::Plain)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum CentersArg {
    Endpoints,
    Midpoints,
    Both,
}

#[derive(Args)]
struct PackArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Candidate ball centers
    #[arg(long, value_enum, default_value_t = CentersArg::Both)]
    centers: CentersArg,
    /// Radii tried per center
    #[arg(long, default_value_t = 32)]
    radii_per_center: usize,
    /// Write to this file instead of standard output
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["c_pack", "min_of_m"])))]
struct SeparateArgs {
    #[command(flatten)]
    input: InputArgs,
    /// RNG seed
    #[arg(long)]
    seed: u64,
    /// Balance parameter: the sphere keeps ceil(2n / C_BAL) endpoints inside
    #[arg(long, default_value_t = DEFAULT_C_BAL)]
    c_bal: u32,
    /// Accept the first radius crossed by at most 4 * C_PACK segments
    #[arg(long, value_name = "C_PACK")]
    c_pack: Option<f64>,
    /// Draw M radii and keep the fewest-crossings one
    #[arg(long, value_name = "M")]
    min_of_m: Option<u32>,
    /// Redraw budget for --c-pack
    #[arg(long, default_value_t = DEFAULT_MAX_ROUNDS)]
    max_rounds: u32,
    /// Write to this file instead of standard output
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["c_pack", "min_of_m"])))]
struct TreeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// RNG seed
    #[arg(long)]
    seed: u64,
    /// Balance parameter: each split keeps ceil(2n / C_BAL) endpoints inside
    #[arg(long, default_value_t = DEFAULT_C_BAL)]
    c_bal: u32,
    /// Accept the first radius crossed by at most 4 * C_PACK segments
    #[arg(long, value_name = "C_PACK")]
    c_pack: Option<f64>,
    /// Draw M radii and keep the fewest-crossings one
    #[arg(long, value_name = "M")]
    min_of_m: Option<u32>,
    /// Redraw budget for --c-pack
    #[arg(long, default_value_t = DEFAULT_MAX_ROUNDS)]
    max_rounds: u32,
    /// Stop splitting pieces of at most this many segments
    #[arg(long, default_value_t = 256)]
    leaf_size: usize,
    /// Write to this file instead of standard output
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Result file produced by separate or tree
    result: String,
    /// Check balance against this value instead of the one in the result file
    #[arg(long)]
    c_bal: Option<u32>,
}

#[derive(Args)]
struct SvgArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Result file produced by separate
    result: String,
    /// Write to this file instead of standard output
    #[arg(short, long)]
    output: Option<PathBuf>,
}

enum CliError {
    Validation(String),
    Verification(String),
}

impl CliError {
    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Verification(m) => m,
        }
    }

    fn code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> CliError {
        CliError::Validation(e.to_string())
    }
}

impl From<SeparatorError> for CliError {
    fn from(e: SeparatorError) -> CliError {
        CliError::Validation(e.to_string())
    }
}

impl From<ReadError> for CliError {
    fn from(e: ReadError) -> CliError {
        match e {
            ReadError::Json(_) | ReadError::FormatVersion(_) => {
                CliError::Validation(e.to_string())
            }
            ReadError::Invalid(_) => CliError::Verification(e.to_string()),
        }
    }
}

impl From<SvgError> for CliError {
    fn from(e: SvgError) -> CliError {
        match e {
            SvgError::NotPlanar { .. } => CliError::Validation(e.to_string()),
            SvgError::BadPartition { .. } => CliError::Verification(e.to_string()),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {}", e.message());
        std::process::exit(e.code());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(args) => run_gen(args),
        Command::Pack(args) => run_pack(args),
        Command::Separate(args) => run_separate(args),
        Command::Tree(args) => run_tree(args),
        Command::Verify(args) => run_verify(args),
        Command::Svg(args) => run_svg(args),
    }
}

fn read_text(path: &str) -> Result<String, CliError> {
    if path == "-" {
        std::io::read_to_string(std::io::stdin())
            .map_err(|e| CliError::Validation(format!("reading standard input: {e}")))
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("reading {path}: {e}")))
    }
}

fn write_text(output: &Option<PathBuf>, data: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, data)
            .map_err(|e| CliError::Validation(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{data}");
            Ok(())
        }
    }
}

fn load_set(args: &InputArgs) -> Result<SegmentSet, CliError> {
    let text = read_text(&args.input)?;
    Ok(io::parse_segments(&text, args.format.into())?)
}

fn require(cond: bool, message: &str) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Validation(message.to_string()))
    }
}

fn run_gen(args: GenArgs) -> Result<(), CliError> {
    let set = match args.family {
        GenFamily::Grid { rows, cols, spacing } => {
            require(rows >= 1 && cols >= 1, "--rows and --cols must be >= 1")?;
            require(spacing.is_finite() && spacing > 0.0, "--spacing must be > 0")?;
            gen::grid(rows, cols, spacing)
        }
        GenFamily::Star { spokes, length } => {
            require(spokes >= 1, "--spokes must be >= 1")?;
            require(length.is_finite() && length > 0.0, "--length must be > 0")?;
            gen::star(spokes, length)
        }
        GenFamily::Koch { depth, scale } => {
            require(depth <= 8, "--depth must be at most 8")?;
            require(scale.is_finite() && scale > 0.0, "--scale must be > 0")?;
            gen::koch(depth, scale)
        }
        GenFamily::Walk {
            steps,
            step_len,
            seed,
        } => {
            require(steps >= 1, "--steps must be >= 1")?;
            require(step_len.is_finite() && step_len > 0.0, "--step-len must be > 0")?;
            gen::polyline_walk(steps, step_len, seed)
        }
    };
    write_text(&args.output, &io::write_segments(&set))?;
    eprintln!("generated {} segments (d={})", set.len(), set.dim());
    Ok(())
}

fn run_pack(args: PackArgs) -> Result<(), CliError> {
    require(args.radii_per_center >= 1, "--radii-per-center must be >= 1")?;
    let set = load_set(&args.input)?;
    let strategy = match args.centers {
        CentersArg::Endpoints => CenterStrategy::Endpoints,
        CentersArg::Midpoints => CenterStrategy::Midpoints,
        CentersArg::Both => CenterStrategy::EndpointsAndMidpoints,
    };
    let estimate = estimate_packedness(&set, strategy, args.radii_per_center);
    let mut out = String::new();
    let _ = write!(out, "{{\"c_hat\":{:.16e},\"witness_center\":[", estimate.c_hat);
    for (i, c) in estimate.witness_center.coords().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{c:.16e}");
    }
    let _ = writeln!(out, "],\"witness_radius\":{:.16e}}}", estimate.witness_radius);
    write_text(&args.output, &out)?;
    eprintln!(
        "n={} c_hat={:.6} at center {} radius {:.6}",
        set.len(),
        estimate.c_hat,
        estimate.witness_center,
        estimate.witness_radius
    );
    Ok(())
}

fn build_config(
    c_bal: u32,
    c_pack: Option<f64>,
    min_of_m: Option<u32>,
    max_rounds: u32,
    seed: u64,
) -> Result<SeparatorConfig, CliError> {
    require(c_bal >= 2, "--c-bal must be >= 2")?;
    require(max_rounds >= 1, "--max-rounds must be >= 1")?;
    let mode = match (c_pack, min_of_m) {
        (Some(c_pack), None) => {
            require(c_pack.is_finite() && c_pack > 0.0, "--c-pack must be > 0")?;
            SamplingMode::Threshold { c_pack }
        }
        (None, Some(m)) => {
            require(m >= 1, "--min-of-m must be >= 1")?;
            SamplingMode::MinOfM { m }
        }
        _ => unreachable!("clap enforces exactly one mode flag"),
    };
    Ok(SeparatorConfig {
        c_bal,
        mode,
        max_rounds,
        seed,
    })
}

fn run_separate(args: SeparateArgs) -> Result<(), CliError> {
    let cfg = build_config(args.c_bal, args.c_pack, args.min_of_m, args.max_rounds, args.seed)?;
    let set = load_set(&args.input)?;
    let result = find_separator(&set, &cfg)?;
    write_text(&args.output, &io::write_separator_result(&set, &result, &cfg))?;
    eprintln!(
        "n={} sphere radius {:.6} inside={} crossing={} outside={} rounds={} accepted={} guarantee={}",
        set.len(),
        result.sphere.radius(),
        result.inside.len(),
        result.crossing.len(),
        result.outside.len(),
        result.rounds_used,
        result.accepted,
        result.guarantee_applies
    );
    Ok(())
}

fn run_tree(args: TreeArgs) -> Result<(), CliError> {
    let cfg = build_config(args.c_bal, args.c_pack, args.min_of_m, args.max_rounds, args.seed)?;
    require(args.leaf_size >= 1, "--leaf-size must be >= 1")?;
    let set = load_set(&args.input)?;
    let tree = build_tree(&set, &cfg, args.leaf_size);
    write_text(
        &args.output,
        &io::write_separator_tree(&set, &tree, &cfg, args.leaf_size),
    )?;
    eprintln!(
        "n={} nodes={} leaves={} max depth={}",
        set.len(),
        tree.node_count(),
        tree.leaf_count(),
        tree.max_depth()
    );
    for level in level_stats(&tree) {
        eprintln!("{level}");
    }
    Ok(())
}

fn check_doc_matches(set: &SegmentSet, doc: &ResultDocument) -> Result<(), CliError> {
    if doc.n() != set.len() {
        return Err(CliError::Verification(format!(
            "result file records n={}, segment file has n={}",
            doc.n(),
            set.len()
        )));
    }
    if doc.dim() != set.dim() {
        return Err(CliError::Verification(format!(
            "result file records dimension {}, segment file has dimension {}",
            doc.dim(),
            set.dim()
        )));
    }
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<(), CliError> {
    let set = load_set(&args.input)?;
    let doc = read_result_document(&read_text(&args.result)?)?;
    check_doc_matches(&set, &doc)?;
    let c_bal = args.c_bal.unwrap_or(doc.config().c_bal);
    require(c_bal >= 2, "--c-bal must be >= 2")?;
    match doc {
        ResultDocument::SeparatorResult(doc) => {
            let result = doc.to_result()?;
            let expected_guarantee = guarantee_applies(set.len(), c_bal);
            if result.guarantee_applies != expected_guarantee {
                return Err(CliError::Verification(format!(
                    "result file claims guarantee_applies={}, but n={} and c_bal={c_bal} give {}",
                    result.guarantee_applies,
                    set.len(),
                    expected_guarantee
                )));
            }
            let report = verify_separator(&set, &result, c_bal)
                .map_err(|e| CliError::Verification(e.to_string()))?;
            println!("{report}");
            if report.passes(expected_guarantee) {
                println!("verify: PASS (separator, n={}, c_bal={c_bal})", set.len());
                Ok(())
            } else {
                Err(CliError::Verification(
                    "separator result does not hold up against the segment file".into(),
                ))
            }
        }
        ResultDocument::SeparatorTree(doc) => {
            let tree = doc.to_tree()?;
            verify_tree(&set, &tree, c_bal).map_err(|e| CliError::Verification(e.to_string()))?;
            println!(
                "verify: PASS (tree, n={}, nodes={}, leaves={}, c_bal={c_bal})",
                set.len(),
                tree.node_count(),
                tree.leaf_count()
            );
            Ok(())
        }
    }
}

fn run_svg(args: SvgArgs) -> Result<(), CliError> {
    let set = load_set(&args.input)?;
    let doc = read_result_document(&read_text(&args.result)?)?;
    check_doc_matches(&set, &doc)?;
    let ResultDocument::SeparatorResult(doc) = doc else {
        return Err(CliError::Validation(
            "svg renders separator results; got a separator tree file".into(),
        ));
    };
    let result = doc.to_result()?;
    let rendered = packsep::svg::render(&set, &result)?;
    write_text(&args.output, &rendered)?;
    eprintln!(
        "rendered {} segments and 1 separator circle",
        set.len()
    );
    Ok(())
}
