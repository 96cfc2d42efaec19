//! Command-line front end: batch rendering, scripted edits, the JSON
//! session loop and the latency benchmark.
//!
//! Exit codes: 0 success, 1 input error, 2 render/output error.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::barycentric::{AffineBasis, VertexId};
use crate::bench::scripted_drag;
use crate::codec::{parse_ifs, IfsDocument};
use crate::ifs::{chaos_game, ChaosParams};
use crate::point::Point2;
use crate::protocol::SessionServer;
use crate::render::{rasterize, render_svg, Viewport};
use crate::session::{BasisMode, ModelingSession};
use crate::simplex::minimal_canonical_simplex;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_RENDER: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ifs-affine", version, about = "Affine modeling of IFS attractors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render an attractor to PPM or SVG, optionally after scripted vertex moves.
    Render(RenderArgs),
    /// Print the minimal canonical simplex of an attractor.
    Simplex(SampleArgs),
    /// Serve the JSON session protocol, one message per line on stdin/stdout.
    Session,
    /// Time vertex edits on a live session.
    Bench(BenchArgs),
}

/// Chaos-game sampling flags. Unset flags fall back to the file's `@render`
/// line, then to 100000 points, burn-in 14, seed 0.
#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_name = "PATH")]
    pub ifs: PathBuf,
    #[arg(long, value_name = "N")]
    pub points: Option<usize>,
    #[arg(long = "burn-in", value_name = "N")]
    pub burn_in: Option<usize>,
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ImageFormat {
    Ppm,
    Svg,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub sample: SampleArgs,
    /// `auto` for the minimal simplex, or `x1,y1,x2,y2,x3,y3`. Defaults to
    /// the file's `@basis`, else `auto`.
    #[arg(long, value_name = "auto|X1,Y1,X2,Y2,X3,Y3", allow_hyphen_values = true)]
    pub basis: Option<BasisArg>,
    /// Displace a vertex relative to its current position, e.g. `C:+0.5,-0.1`.
    #[arg(long = "move", value_name = "V:DX,DY", allow_hyphen_values = true)]
    pub moves: Vec<MoveArg>,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = ImageFormat::Ppm)]
    pub format: ImageFormat,
    #[arg(long, default_value_t = 800)]
    pub width: u32,
    #[arg(long, default_value_t = 800)]
    pub height: u32,
    /// Leave out the control triangle.
    #[arg(long)]
    pub no_overlay: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// IFS file; the bundled flower when omitted.
    #[arg(long, value_name = "PATH")]
    pub ifs: Option<PathBuf>,
    #[arg(long, default_value_t = 100_000)]
    pub points: usize,
    #[arg(long, default_value_t = 500)]
    pub frames: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisArg {
    Auto,
    Triangle(AffineBasis),
}

impl FromStr for BasisArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(BasisArg::Auto);
        }
        let nums: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad number {t:?}")))
            .collect::<Result<_, _>>()?;
        let v: [f64; 6] = nums
            .try_into()
            .map_err(|v: Vec<f64>| format!("expected 6 comma-separated numbers, found {}", v.len()))?;
        if v.iter().any(|x| !x.is_finite()) {
            return Err("basis coordinates must be finite".into());
        }
        Ok(BasisArg::Triangle(AffineBasis::from_flat(v)))
    }
}

/// A relative vertex displacement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoveArg {
    pub vertex: VertexId,
    pub delta: Point2,
}

impl FromStr for MoveArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (v, rest) = s.split_once(':').ok_or("expected V:DX,DY")?;
        let vertex: VertexId = v.trim().parse()?;
        let (dx, dy) = rest.split_once(',').ok_or("expected V:DX,DY")?;
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("bad displacement {t:?}"))
        };
        Ok(MoveArg {
            vertex,
            delta: Point2::new(num(dx)?, num(dy)?),
        })
    }
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn render(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_RENDER,
            message: message.into(),
        }
    }
}

fn load_document(path: &Path) -> Result<IfsDocument, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    parse_ifs(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn sample_params(doc: &IfsDocument, args: &SampleArgs) -> ChaosParams {
    let mut params = doc.chaos_params();
    if let Some(n) = args.points {
        params.n_points = n;
    }
    if let Some(b) = args.burn_in {
        params.burn_in = b;
    }
    if let Some(s) = args.seed {
        params.seed = s;
    }
    params
}

/// The session a `render` invocation describes, after its moves. Also
/// returns the camera, which frames the state before any move.
pub fn build_render_session(args: &RenderArgs) -> Result<(ModelingSession, Viewport), CliError> {
    let doc = load_document(&args.sample.ifs)?;
    let ifs = doc.system().map_err(|e| CliError::input(e.to_string()))?;
    let params = sample_params(&doc, &args.sample);
    let mode = match (args.basis, doc.basis) {
        (Some(BasisArg::Auto), _) => BasisMode::MinimalSimplex,
        (Some(BasisArg::Triangle(b)), _) | (None, Some(b)) => BasisMode::UserTriangle(b),
        (None, None) => BasisMode::MinimalSimplex,
    };
    let mut session = ModelingSession::init(ifs, params, mode).map_err(|e| CliError::input(e.to_string()))?;
    if session.get_frame().telemetry.non_contractive {
        eprintln!(
            "warning: contractivity factor {:.6} >= 1; the attractor may not exist",
            session.get_frame().telemetry.contractivity
        );
    }
    let initial = session.get_frame();
    let camera = Viewport::fit(&initial.points, Some(&initial.basis), args.width, args.height);
    for m in &args.moves {
        let to = session.current_basis().vertex(m.vertex) + m.delta;
        session
            .move_vertex(m.vertex, to)
            .map_err(|e| CliError::input(format!("--move {}: {e}", m.vertex)))?;
    }
    Ok((session, camera))
}

pub fn render(args: &RenderArgs) -> Result<(), CliError> {
    let (session, camera) = build_render_session(args)?;
    let frame = session.get_frame();
    let overlay = (!args.no_overlay).then_some(&frame.basis);
    let bytes = match args.format {
        ImageFormat::Ppm => rasterize(&frame.points, overlay, &camera).to_ppm(),
        ImageFormat::Svg => render_svg(&frame.points, overlay, &camera).into_bytes(),
    };
    std::fs::write(&args.out, bytes).map_err(|e| CliError::render(format!("{}: {e}", args.out.display())))
}

fn simplex(args: &SampleArgs) -> Result<(), CliError> {
    let doc = load_document(&args.ifs)?;
    let ifs = doc.system().map_err(|e| CliError::input(e.to_string()))?;
    let points = chaos_game(&ifs, &sample_params(&doc, args)).map_err(|e| CliError::input(e.to_string()))?;
    let basis = minimal_canonical_simplex(&points).map_err(|e| CliError::input(e.to_string()))?;
    let v = basis.to_flat();
    println!(
        "@basis {:?} {:?} {:?} {:?} {:?} {:?}",
        v[0], v[1], v[2], v[3], v[4], v[5]
    );
    Ok(())
}

fn session_loop() -> Result<(), CliError> {
    let mut server = SessionServer::new();
    let stdin = std::io::stdin();
    let mut stdout = std::io::stdout().lock();
    for line in stdin.lock().lines() {
        let line = line.map_err(|e| CliError::input(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let reply = server.handle_json(&line);
        writeln!(stdout, "{reply}")
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::render(e.to_string()))?;
    }
    Ok(())
}

fn bench(args: &BenchArgs) -> Result<(), CliError> {
    let doc = match &args.ifs {
        Some(path) => load_document(path)?,
        None => crate::datasets::bundled("flower").expect("bundled flower"),
    };
    let ifs = doc.system().map_err(|e| CliError::input(e.to_string()))?;
    let params = ChaosParams::new(args.points).seed(args.seed);
    let mut session = ModelingSession::init(ifs, params, BasisMode::MinimalSimplex)
        .map_err(|e| CliError::input(e.to_string()))?;
    let stats = scripted_drag(&mut session, args.frames).map_err(|e| CliError::input(e.to_string()))?;
    let ms = |d: std::time::Duration| d.as_secs_f64() * 1e3;
    println!(
        "points={} frames={} median_ms={:.3} p99_ms={:.3} max_ms={:.3}",
        args.points,
        stats.len(),
        ms(stats.median()),
        ms(stats.p99()),
        ms(stats.max())
    );
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Render(args) => render(args),
        Command::Simplex(args) => simplex(args),
        Command::Session => session_loop(),
        Command::Bench(args) => bench(args),
    }
}

/// Parses `argv` and runs it, returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
