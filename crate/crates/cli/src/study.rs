use crate::io::write_all;
use crate::{CliError, SEED_ENV};
use clap::Args;
use geotrack::geodesy::MEAN_EARTH_RADIUS;
use geotrack::study::{
    latitude_bands, plane_error_grid, sphere_error_samples, wave_table as wave_rows, ErrorSummary, SphereErrorConfig,
};
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct SphereErrorArgs {
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Shortest arc (m); arcs are drawn log-uniformly.
    #[arg(long, default_value_t = 1.0)]
    pub min_distance: f64,
    /// Longest arc (m).
    #[arg(long, default_value_t = 500_000.0)]
    pub max_distance: f64,
    /// Latitude band width (deg).
    #[arg(long, default_value_t = 10.0)]
    pub band: f64,
    /// Write one row per sample instead of per-band percentiles.
    #[arg(long)]
    pub raw: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlaneErrorArgs {
    /// Largest projected distance from the origin (m).
    #[arg(long, default_value_t = 100_000.0)]
    pub l_max: f64,
    /// Grid points per distance axis.
    #[arg(long, default_value_t = 50)]
    pub n_l: usize,
    /// Grid points over gamma in [0, pi].
    #[arg(long, default_value_t = 20)]
    pub n_gamma: usize,
    #[arg(long, default_value_t = MEAN_EARTH_RADIUS)]
    pub radius: f64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WaveTableArgs {
    /// Water depth (m).
    #[arg(long, default_value_t = geotrack::noise::DEEP_WATER_DEPTH)]
    pub depth: f64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn summary_cols(s: &ErrorSummary) -> String {
    format!("{},{:.6e},{:.6e},{:.6e},{:.6e}", s.count, s.p50, s.p75, s.p95, s.max)
}

pub fn sphere_error(a: &SphereErrorArgs) -> Result<(), CliError> {
    if !(a.band > 0.0 && a.band <= 180.0) {
        return Err(CliError::Usage("--band must be in (0, 180]".into()));
    }
    let cfg = SphereErrorConfig {
        samples: a.samples,
        seed: a.seed,
        min_distance: a.min_distance,
        max_distance: a.max_distance,
        radius: MEAN_EARTH_RADIUS,
    };
    let samples = sphere_error_samples(&cfg).map_err(|e| match e {
        geotrack::geodesy::GeodesyError::Domain(m) => CliError::Usage(m.into()),
        e => CliError::Numerical(e.to_string()),
    })?;
    let mut csv = String::new();
    if a.raw {
        csv.push_str("lon_deg,lat_deg,bearing_deg,distance_m,error_m,normalized\n");
        for s in &samples {
            writeln!(csv, "{:.8},{:.8},{:.6},{:.6},{:.6e},{:.6e}", s.lon, s.lat, s.bearing, s.distance, s.error_m, s.normalized)
                .expect("writing to a String");
        }
    } else {
        csv.push_str("lat_min,lat_max,count,p50,p75,p95,max\n");
        for (lo, hi, s) in latitude_bands(&samples, a.band) {
            writeln!(csv, "{lo},{hi},{}", summary_cols(&s)).expect("writing to a String");
        }
        let all = ErrorSummary::of(samples.iter().map(|s| s.normalized));
        writeln!(csv, "-90,90,{}", summary_cols(&all)).expect("writing to a String");
    }
    write_all(a.output.as_ref(), &csv)?;
    let all = ErrorSummary::of(samples.iter().map(|s| s.normalized));
    eprintln!(
        "sphere-error: {} samples, max {:.4}%, p75 {:.4}% of distance",
        all.count,
        all.max * 100.0,
        all.p75 * 100.0
    );
    Ok(())
}

pub fn plane_error(a: &PlaneErrorArgs) -> Result<(), CliError> {
    if a.n_l * a.n_l * a.n_gamma > 50_000_000 {
        return Err(CliError::Usage("grid too large".into()));
    }
    let grid = plane_error_grid(a.l_max, a.n_l, a.n_gamma, a.radius).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut csv = String::from("l1_m,l2_m,gamma_rad,delta_l_m,delta_s_m,epsilon_m\n");
    for p in &grid {
        writeln!(csv, "{:.3},{:.3},{:.9},{:.6},{:.6},{:.6e}", p.l1, p.l2, p.gamma, p.delta_l, p.delta_s, p.epsilon)
            .expect("writing to a String");
    }
    write_all(a.output.as_ref(), &csv)?;
    let worst = grid.iter().map(|p| p.epsilon).fold(f64::NEG_INFINITY, f64::max);
    eprintln!("plane-error: {} points, max epsilon {worst:.4} m", grid.len());
    Ok(())
}

pub fn wave_table(a: &WaveTableArgs) -> Result<(), CliError> {
    let rows = wave_rows(a.depth).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut csv = String::from("beaufort,hs_m,tp_s,zeta_m,u_max_mps\n");
    for r in &rows {
        writeln!(csv, "{},{},{},{:.4},{:.4}", r.beaufort, r.hs, r.tp, r.zeta, r.u_max).expect("writing to a String");
    }
    write_all(a.output.as_ref(), &csv)
}
