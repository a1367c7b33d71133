//! `geotrack`: decode AIS streams, track vessels, run simulations and studies.
//!
//! Every subcommand writes CSV (header row, `.` decimal) to `-o` or stdout and
//! a short summary to stderr. Exit codes: 0 success, 1 usage error, 2 input
//! error, 3 numerical failure.

mod decode;
mod io;
mod simulate;
mod study;
mod track;

use clap::{Args, Parser, Subcommand, ValueEnum};
use geotrack::ais::{PositionScaling, DEFAULT_FRAGMENT_TIMEOUT};
use geotrack::geodesy::EarthModel;
use std::path::PathBuf;
use std::process::ExitCode;

/// Environment variable overriding the default seed of `simulate` and `study`.
pub const SEED_ENV: &str = "GEOTRACK_SEED";

#[derive(Debug, Parser)]
#[command(name = "geotrack", version, about = "Geodetic AIS vessel tracking toolkit")]
struct Cli {
    /// Worker threads for parallel work (default: one per processor).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decode AIVDM/AIVDO sentences into report records.
    Decode(DecodeArgs),
    /// Track every vessel in an NMEA stream and emit estimates at a fixed rate.
    Track(TrackArgs),
    /// Run a simulated scenario through the filters.
    Simulate(SimulateArgs),
    /// Numerical studies.
    Study {
        #[command(subcommand)]
        kind: StudyKind,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Scaling {
    /// 1/10000 minute per unit (ITU-R M.1371).
    Itu,
    /// 6e-5 degree per unit.
    Compat,
}

impl From<Scaling> for PositionScaling {
    fn from(s: Scaling) -> Self {
        match s {
            Scaling::Itu => PositionScaling::Itu,
            Scaling::Compat => PositionScaling::Compat,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Earth {
    Sphere,
    Wgs84,
}

impl From<Earth> for EarthModel {
    fn from(e: Earth) -> Self {
        match e {
            Earth::Sphere => EarthModel::sphere(),
            Earth::Wgs84 => EarthModel::wgs84(),
        }
    }
}

#[derive(Debug, Args)]
pub struct StreamArgs {
    /// NMEA input file, or `-` for stdin.
    #[arg(default_value = "-")]
    pub input: PathBuf,
    /// Output CSV path (default: stdout).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Position field scaling.
    #[arg(long, value_enum, default_value = "itu")]
    pub scaling: Scaling,
    /// Seconds an incomplete multi-sentence message may wait for its parts.
    #[arg(long, default_value_t = DEFAULT_FRAGMENT_TIMEOUT)]
    pub fragment_timeout: f64,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    #[command(flatten)]
    pub stream: StreamArgs,
}

#[derive(Debug, Args)]
pub struct TrackArgs {
    #[command(flatten)]
    pub stream: StreamArgs,
    /// Estimate output rate (Hz).
    #[arg(long, default_value_t = 1.0)]
    pub rate: f64,
    /// Seconds without a report before a track is retired.
    #[arg(long, default_value_t = 180.0)]
    pub stale_timeout: f64,
    /// Seconds a report may lag its track and still be applied.
    #[arg(long, default_value_t = 1.0)]
    pub late_tolerance: f64,
    /// Earth model for the filter's position update.
    #[arg(long, value_enum, default_value = "sphere")]
    pub earth: Earth,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Builtin {
    Boston,
    Lawnmower,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Filters {
    Ukf,
    Ekf,
    Both,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario file.
    #[arg(long, conflicts_with = "builtin")]
    pub scenario: Option<PathBuf>,
    /// Shipped scenario to run when no file is given.
    #[arg(long, value_enum, default_value = "boston")]
    pub builtin: Builtin,
    #[arg(long, value_enum, default_value = "both")]
    pub filters: Filters,
    /// RNG seed (overrides the scenario's).
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
    /// Seconds between AIS reports (overrides the scenario's).
    #[arg(long)]
    pub ais_interval: Option<f64>,
    /// Earth model for the UKF's position update.
    #[arg(long, value_enum, default_value = "sphere")]
    pub earth: Earth,
    /// Per-step run CSV path (default: stdout). With `--sweep`, the sweep CSV.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write the metrics summary CSV here.
    #[arg(long)]
    pub metrics: Option<PathBuf>,
    /// Sweep the AIS interval over FROM:TO[:STEP] seconds and write one
    /// metrics row per interval and filter instead of a per-step run.
    #[arg(long, value_name = "FROM:TO[:STEP]")]
    pub sweep: Option<String>,
    /// Also write the scenario's AIS reports as timestamped NMEA here.
    #[arg(long)]
    pub nmea: Option<PathBuf>,
    /// MMSI used for `--nmea`.
    #[arg(long, default_value_t = 440_292_000)]
    pub mmsi: u32,
}

#[derive(Debug, Subcommand)]
enum StudyKind {
    /// Spherical propagation error against WGS84, per latitude band.
    SphereError(study::SphereErrorArgs),
    /// Tangent-plane separation error on an (L1, L2, gamma) grid.
    PlaneError(study::PlaneErrorArgs),
    /// Wave orbital radius and velocity for the tabulated sea states.
    WaveTable(study::WaveTableArgs),
}

/// Failure classes, mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            Self::Usage(_) => 1,
            Self::Input(_) => 2,
            Self::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Usage(m) | Self::Input(m) | Self::Numerical(m) => m,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    }
    match cli.command {
        Command::Decode(a) => decode::run(&a),
        Command::Track(a) => track::run(&a),
        Command::Simulate(a) => simulate::run(&a),
        Command::Study { kind } => match kind {
            StudyKind::SphereError(a) => study::sphere_error(&a),
            StudyKind::PlaneError(a) => study::plane_error(&a),
            StudyKind::WaveTable(a) => study::wave_table(&a),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("geotrack: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
