mod manifest;
mod run;

use std::io::Read;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wps_core::enumeration::{Grid, DEFAULT_BUDGET};
use wps_core::weighted_space::DivisorClass;

use manifest::{Command, Document, Frame, RunManifest};
use run::{execute, render_text, sweep_csv, CliError, CliResult, Report};

/// Exact point counts and asymptotic constants for weighted projective
/// spaces over Q and imaginary quadratic fields.
#[derive(Parser)]
#[command(name = "wpscount", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Leading constant of the counting function, with its factors.
    Constant(ConstantArgs),
    /// Exact number of points with Size <= T.
    Count(CountArgs),
    /// Counts over a geometric grid of bounds, against the prediction.
    Sweep(SweepArgs),
    /// Volume of the fundamental domain, optionally checked by Monte Carlo.
    Volume(VolumeArgs),
    /// Canonical representative, content and Size of one point.
    Point(PointArgs),
    /// Rerun a JSON output from its manifest and compare results.
    Replay(ReplayArgs),
}

#[derive(Args, Clone)]
struct SpaceArgs {
    /// Q, Q(i), Q(sqrt(-d)) or -d.
    #[arg(long, default_value = "Q")]
    field: String,
    /// Weights such as 1,1,2; separate product factors with ':'.
    #[arg(long, visible_alias = "product")]
    weights: String,
    /// Accept weights whose entries are coprime overall but not well-formed.
    #[arg(long)]
    allow_ill_formed: bool,
    /// Divisor class a1,a2,... (default: anticanonical for products, 1 for one factor).
    #[arg(long)]
    divisor: Option<String>,
    /// Error tolerance for the zeta values in the constants.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Print JSON with a run manifest.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EngineArgs {
    /// Restrict to an open subset, e.g. x1!=0 (or x2.1!=0 for factor 2).
    #[arg(long)]
    open: Option<String>,
    #[arg(long, value_parser = ["direct", "moebius"])]
    method: Option<String>,
    /// Cap on estimated lattice visits.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct ConstantArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Denominator convention for anticanonical products.
    #[arg(long, value_parser = ["as-printed", "lemma-derived"])]
    mode: Option<String>,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[command(flatten)]
    engine: EngineArgs,
    /// Size bound.
    #[arg(long = "T", visible_alias = "bound")]
    t: f64,
    /// Print the split over ideal classes.
    #[arg(long)]
    classes: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[command(flatten)]
    engine: EngineArgs,
    /// Geometric grid T0:Tmax:ratio.
    #[arg(long)]
    grid: String,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, value_parser = ["as-printed", "lemma-derived"])]
    mode: Option<String>,
}

#[derive(Args)]
struct VolumeArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Use this many real places instead of those of --field.
    #[arg(long, requires_all = ["r2", "regulator"])]
    r1: Option<u32>,
    #[arg(long)]
    r2: Option<u32>,
    #[arg(long)]
    regulator: Option<f64>,
    /// Monte-Carlo check: SAMPLES [SEED].
    #[arg(long, num_args = 1..=2, value_names = ["SAMPLES", "SEED"])]
    mc: Option<Vec<u64>>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Coordinates such as 4,8,16 or 1+2w,3 (w generates the ring of integers).
    #[arg(long)]
    coords: String,
}

#[derive(Args)]
struct ReplayArgs {
    /// JSON output of an earlier run, or - for stdin.
    file: String,
}

fn parse_list(s: &str) -> CliResult<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Input(format!("`{t}` is not a nonnegative integer in `{s}`")))
        })
        .collect()
}

fn base_manifest(command: Command, s: &SpaceArgs) -> CliResult<RunManifest> {
    let weights = s.weights.split(':').map(parse_list).collect::<CliResult<Vec<_>>>()?;
    let mut m = RunManifest::new(command, s.field.clone(), weights);
    m.allow_ill_formed = s.allow_ill_formed;
    m.tolerance = s.tol;
    if let Some(d) = &s.divisor {
        m.divisor = Some(DivisorClass::from_str(d)?.entries().to_vec());
    }
    Ok(m)
}

fn apply_engine(m: &mut RunManifest, e: &EngineArgs) {
    m.open = e.open.clone();
    m.method = e.method.clone();
    m.budget = e.budget;
    m.threads = e.threads;
}

/// Manifest, and whether to print JSON, for a command line.
fn manifest_of(cmd: &Cmd) -> CliResult<(RunManifest, Option<Format>)> {
    Ok(match cmd {
        Cmd::Constant(a) => {
            let mut m = base_manifest(Command::Constant, &a.space)?;
            m.mode = a.mode.clone();
            (m, a.space.json.then_some(Format::Json))
        }
        Cmd::Count(a) => {
            let mut m = base_manifest(Command::Count, &a.space)?;
            apply_engine(&mut m, &a.engine);
            m.bound = Some(a.t);
            (m, a.space.json.then_some(Format::Json))
        }
        Cmd::Sweep(a) => {
            let mut m = base_manifest(Command::Sweep, &a.space)?;
            apply_engine(&mut m, &a.engine);
            m.grid = Some(Grid::from_str(&a.grid)?);
            m.mode = a.mode.clone();
            let format = if a.space.json { Format::Json } else { a.format };
            (m, Some(format))
        }
        Cmd::Volume(a) => {
            let mut m = base_manifest(Command::Volume, &a.space)?;
            if let (Some(r1), Some(r2), Some(regulator)) = (a.r1, a.r2, a.regulator) {
                m.frame = Some(Frame { r1, r2, regulator });
            }
            if let Some(mc) = &a.mc {
                m.samples = Some(mc[0]);
                m.seed = mc.get(1).copied().or(a.seed);
            }
            (m, a.space.json.then_some(Format::Json))
        }
        Cmd::Point(a) => {
            let mut m = base_manifest(Command::Point, &a.space)?;
            m.point = Some(a.coords.clone());
            (m, a.space.json.then_some(Format::Json))
        }
        Cmd::Replay(_) => unreachable!("handled separately"),
    })
}

fn timed(m: &mut RunManifest) -> CliResult<Report> {
    let start = Instant::now();
    let report = execute(m)?;
    m.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

fn json_document(manifest: RunManifest, report: &Report) -> CliResult<String> {
    let result = serde_json::to_value(report).map_err(|e| CliError::Input(e.to_string()))?;
    serde_json::to_string_pretty(&Document { manifest, result }).map_err(|e| CliError::Input(e.to_string()))
}

fn replay(path: &str) -> CliResult<String> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?;
    }
    let doc: Document =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{path} is not a run document: {e}")))?;
    let mut manifest = doc.manifest;
    let report = timed(&mut manifest)?;
    let fresh = serde_json::to_value(&report).map_err(|e| CliError::Input(e.to_string()))?;
    if fresh != doc.result {
        return Err(CliError::Mismatch(format!(
            "stored result {} differs from rerun {}",
            doc.result, fresh
        )));
    }
    json_document(manifest, &report)
}

fn main_inner(cli: Cli) -> CliResult<String> {
    if let Cmd::Replay(a) = &cli.command {
        return replay(&a.file);
    }
    let (mut manifest, format) = manifest_of(&cli.command)?;
    let report = timed(&mut manifest)?;
    if let (Cmd::Count(a), Report::Count(c)) = (&cli.command, &report) {
        if a.classes && !a.space.json {
            let mut out = render_text(&report);
            for (i, n) in c.per_class.iter().enumerate() {
                out.push_str(&format!("class {i}: {n}\n"));
            }
            return Ok(out);
        }
    }
    match (format, &report) {
        (Some(Format::Json), _) => json_document(manifest, &report),
        (Some(Format::Csv), Report::Sweep(s)) => Ok(sweep_csv(s)),
        _ => Ok(render_text(&report)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(out) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
