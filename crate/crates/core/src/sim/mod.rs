//! Truth trajectories, synthetic AIS and filter comparison runs.
//!
//! Truth is integrated on the sphere: each step follows a great circle at the
//! mean heading over the step, so straight segments are exact great circles
//! and constant-rate turns are arcs. White noise on SOG and COG perturbs each
//! step but does not accumulate into the nominal course.

pub mod scenario;

pub use scenario::{parse_scenario, Scenario, ScenarioError, SegmentKind, TrajectorySegment};

use crate::ais::{encode_position_report, single_sentence, DynamicAisReport, KNOTS_TO_MPS};
use crate::ekf::{EkfTuning, PlanarEkf, TangentPlane, DEFAULT_ORIGIN};
use crate::geodesy::{
    great_circle_final_bearing, normalize_lon, propagate_sphere, surface_distance, wrap_360, MEAN_EARTH_RADIUS,
};
use crate::ukf::{wrap_residual, GeodeticState, GeodeticUkf, Measurement, UkfConfig, UkfError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;
use thiserror::Error;

/// Scenario files shipped with the crate.
pub const BOSTON_DEPARTURE: &str = include_str!("../../scenarios/boston_departure.scn");
pub const LAWNMOWER: &str = include_str!("../../scenarios/lawnmower.scn");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Filter(#[from] UkfError),
}

/// A truth sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruthPoint {
    pub t: f64,
    pub state: GeodeticState,
}

/// A synthetic AIS report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimedMeasurement {
    pub t: f64,
    pub measurement: Measurement,
}

// Distance and heading change accumulated over [t0, t1].
fn profile(segments: &[TrajectorySegment], t0: f64, t1: f64) -> (f64, f64) {
    let (mut dist, mut turn, mut start) = (0.0, 0.0, 0.0);
    for s in segments {
        let end = start + s.duration;
        let overlap = t1.min(end) - t0.max(start);
        if overlap > 0.0 {
            dist += s.speed * overlap;
            turn += s.turn_rate * overlap;
        }
        start = end;
    }
    (dist, turn)
}

fn speed_at(segments: &[TrajectorySegment], t: f64) -> f64 {
    let mut start = 0.0;
    for s in segments {
        if t < start + s.duration {
            return s.speed;
        }
        start += s.duration;
    }
    segments.last().map_or(0.0, |s| s.speed)
}

fn sample_count(duration: f64, rate: f64) -> usize {
    (duration * rate - 1e-9).ceil().max(0.0) as usize
}

fn normal(std: f64) -> Normal<f64> {
    Normal::new(0.0, std).expect("std validated nonnegative")
}

/// Truth states at `truth_rate_hz` over `[0, duration)`.
pub fn generate_truth(s: &Scenario) -> Vec<TruthPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(s.rng_seed);
    let (sog_noise, cog_noise) = (normal(s.process_noise[0]), normal(s.process_noise[1]));
    let dt = 1.0 / s.truth_rate_hz;
    let n = sample_count(s.duration(), s.truth_rate_hz);
    let mut out = Vec::with_capacity(n);
    let mut pos = s.start;
    let mut course = s.initial_cog;
    for k in 0..n {
        let t = k as f64 * dt;
        let nu = sog_noise.sample(&mut rng);
        let na = cog_noise.sample(&mut rng);
        out.push(TruthPoint {
            t,
            state: GeodeticState {
                lon: pos.lon,
                lat: pos.lat,
                sog: (speed_at(&s.segments, t) + nu).max(0.0),
                cog: wrap_360(course + na),
            },
        });
        let (dist, turn) = profile(&s.segments, t, t + dt);
        let bearing = course + turn / 2.0 + na;
        let d = (dist + nu * dt).max(0.0);
        let arrival = great_circle_final_bearing(pos, bearing, d, MEAN_EARTH_RADIUS);
        pos = propagate_sphere(pos, bearing, d, MEAN_EARTH_RADIUS);
        course = wrap_360(arrival - na + turn / 2.0);
    }
    out
}

/// Noisy reports at multiples of `ais_interval`.
pub fn sample_ais(truth: &[TruthPoint], s: &Scenario) -> Vec<TimedMeasurement> {
    let mut rng = ChaCha8Rng::seed_from_u64(s.rng_seed);
    rng.set_stream(1);
    let noise: Vec<Normal<f64>> = s.measurement_noise.iter().map(|&sd| normal(sd)).collect();
    let mut out = Vec::new();
    for j in 0.. {
        let t = j as f64 * s.ais_interval;
        let idx = (t * s.truth_rate_hz).round() as usize;
        let Some(p) = truth.get(idx) else { break };
        let x = p.state;
        let e: Vec<f64> = noise.iter().map(|d| d.sample(&mut rng)).collect();
        out.push(TimedMeasurement {
            t,
            measurement: Measurement::new(
                Some(normalize_lon(x.lon + e[0])),
                Some((x.lat + e[1]).clamp(-90.0, 90.0)),
                Some((x.sog + e[2]).max(0.0)),
                Some(wrap_360(x.cog + e[3])),
            ),
        });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FilterChoice {
    Ukf,
    Ekf,
    #[default]
    Both,
}

impl FilterChoice {
    fn ukf(self) -> bool {
        matches!(self, Self::Ukf | Self::Both)
    }
    fn ekf(self) -> bool {
        matches!(self, Self::Ekf | Self::Both)
    }
}

/// One filter's estimate at a filter step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub state: GeodeticState,
    /// Great-circle distance to truth on WGS84 (m).
    pub error_m: f64,
    /// Three-sigma horizontal position bound (m).
    pub sigma3_m: f64,
    pub trace: f64,
}

/// Truth and estimates at one filter step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunRow {
    pub t: f64,
    pub truth: GeodeticState,
    pub ukf: Option<Estimate>,
    pub ekf: Option<Estimate>,
    /// True once the filters have absorbed a report after initialization.
    pub warmed_up: bool,
}

/// Accuracy summary for one filter over one run, scored from the first
/// report absorbed after initialization onward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunMetrics {
    /// lon (deg), lat (deg), SOG (m/s), COG (deg).
    pub rmse: [f64; 4],
    pub rmse_position_m: f64,
    /// Fraction of steps whose position error is within the 3σ bound.
    pub within_3sigma: f64,
    pub median_trace: f64,
    pub max_trace: f64,
    pub steps: usize,
}

impl RunMetrics {
    pub fn is_finite(&self) -> bool {
        self.rmse.iter().all(|v| v.is_finite())
            && self.rmse_position_m.is_finite()
            && self.max_trace.is_finite()
    }

    /// No run-away covariance: the largest trace stays under `factor` times
    /// the median.
    pub fn trace_bounded(&self, factor: f64) -> bool {
        self.is_finite() && self.max_trace <= factor * self.median_trace
    }

    fn from_rows(rows: &[RunRow], pick: impl Fn(&RunRow) -> Option<Estimate>) -> Option<Self> {
        let mut sq = [0.0; 4];
        let (mut pos_sq, mut inside, mut n) = (0.0, 0usize, 0usize);
        let mut traces = Vec::new();
        for r in rows.iter().filter(|r| r.warmed_up) {
            let Some(e) = pick(r) else { continue };
            let (x, y) = (e.state, r.truth);
            let d = [
                normalize_lon(x.lon - y.lon),
                x.lat - y.lat,
                x.sog - y.sog,
                wrap_residual(y.cog, x.cog),
            ];
            for (s, v) in sq.iter_mut().zip(d) {
                *s += v * v;
            }
            pos_sq += e.error_m * e.error_m;
            inside += (e.error_m <= e.sigma3_m) as usize;
            n += 1;
            traces.push(e.trace);
        }
        if n == 0 {
            return None;
        }
        traces.sort_by(f64::total_cmp);
        let median_trace = if traces.is_empty() { f64::NAN } else { traces[traces.len() / 2] };
        let nf = n as f64;
        Some(Self {
            rmse: sq.map(|s| (s / nf).sqrt()),
            rmse_position_m: (pos_sq / nf).sqrt(),
            within_3sigma: inside as f64 / nf,
            median_trace,
            max_trace: traces.last().copied().unwrap_or(f64::NAN),
            steps: n,
        })
    }
}

/// Everything a run produces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunOutput {
    pub scenario: String,
    pub rows: Vec<RunRow>,
    pub ukf: Option<RunMetrics>,
    pub ekf: Option<RunMetrics>,
}

/// Filter settings for a run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FilterSetup {
    pub ukf: UkfConfig,
    pub ekf: EkfTuning,
}

/// Runs the selected filters on one scenario. Both filters see the same
/// measurement stream; they predict at `filter_rate_hz` and absorb each
/// report at its own time.
pub fn run_filters(s: &Scenario, choice: FilterChoice, setup: &FilterSetup) -> Result<RunOutput, SimError> {
    s.validate()?;
    let truth = generate_truth(s);
    let meas = sample_ais(&truth, s);
    let plane = TangentPlane::new(DEFAULT_ORIGIN);
    let Some(first) = meas.first() else {
        return Ok(RunOutput { scenario: s.name.clone(), rows: Vec::new(), ukf: None, ekf: None });
    };
    let mut ukf = match choice.ukf() {
        true => Some(GeodeticUkf::initialize(&first.measurement, first.t, setup.ukf)?),
        false => None,
    };
    let mut ekf = match choice.ekf() {
        true => Some(PlanarEkf::initialize(&first.measurement, first.t, setup.ekf, plane)?),
        false => None,
    };

    let n_steps = sample_count(s.duration(), s.filter_rate_hz);
    let mut rows = Vec::with_capacity(n_steps);
    let mut next = 1;
    for k in 0..n_steps {
        let t = k as f64 / s.filter_rate_hz;
        while next < meas.len() && meas[next].t <= t + 1e-9 {
            let m = &meas[next];
            if let Some(f) = ukf.as_mut() {
                f.predict_to(m.t)?;
                f.update(&m.measurement)?;
            }
            if let Some(f) = ekf.as_mut() {
                f.predict_to(m.t);
                f.update(&m.measurement)?;
            }
            next += 1;
        }
        let Some(idx) = truth.get((t * s.truth_rate_hz).round() as usize) else { break };
        let truth_state = idx.state;
        let truth_pos = truth_state.position();
        let ukf_est = match ukf.as_mut() {
            Some(f) => {
                f.predict_to(t)?;
                let b = f.belief();
                Some(Estimate {
                    state: b.mean,
                    error_m: surface_distance(b.mean.position(), truth_pos),
                    sigma3_m: 3.0 * b.position_sigma_m(MEAN_EARTH_RADIUS),
                    trace: b.cov.trace(),
                })
            }
            None => None,
        };
        let ekf_est = ekf.as_mut().map(|f| {
            f.predict_to(t);
            let g = f.geodetic();
            Estimate {
                state: g,
                error_m: surface_distance(g.position(), truth_pos),
                sigma3_m: 3.0 * f.position_sigma_m(),
                trace: f.covariance().trace(),
            }
        });
        rows.push(RunRow { t, truth: truth_state, ukf: ukf_est, ekf: ekf_est, warmed_up: next > 1 });
    }
    Ok(RunOutput {
        scenario: s.name.clone(),
        ukf: RunMetrics::from_rows(&rows, |r| r.ukf),
        ekf: RunMetrics::from_rows(&rows, |r| r.ekf),
        rows,
    })
}

/// Both filters with default tuning; returns `(ukf, ekf)` metrics.
pub fn run_comparison(s: &Scenario) -> Result<(RunMetrics, RunMetrics), SimError> {
    let out = run_filters(s, FilterChoice::Both, &FilterSetup::default())?;
    match (out.ukf, out.ekf) {
        (Some(u), Some(e)) => Ok((u, e)),
        _ => Err(SimError::Scenario(ScenarioError::Invalid("scenario yields no filter steps".into()))),
    }
}

/// Header of the per-run CSV.
pub const RUN_CSV_HEADER: &str = "t,truth_lon,truth_lat,truth_sog,truth_cog,ukf_lon,ukf_lat,ukf_sog,ukf_cog,\
ekf_lon,ekf_lat,ekf_sog,ekf_cog,err_ukf_m,err_ekf_m,sigma3_m";

fn push_state(s: &mut String, x: Option<GeodeticState>) {
    match x {
        Some(x) => write!(s, ",{:.9},{:.9},{:.4},{:.4}", x.lon, x.lat, x.sog, x.cog),
        None => write!(s, ",,,,"),
    }
    .expect("writing to a String");
}

fn push_opt(s: &mut String, v: Option<f64>) {
    match v {
        Some(v) => write!(s, ",{v:.4}"),
        None => write!(s, ","),
    }
    .expect("writing to a String");
}

/// Renders a run as CSV. `sigma3_m` is the UKF bound when the UKF ran,
/// otherwise the EKF's.
pub fn run_csv(rows: &[RunRow]) -> String {
    let mut s = String::with_capacity(rows.len() * 200 + 200);
    s.push_str(RUN_CSV_HEADER);
    s.push('\n');
    for r in rows {
        write!(s, "{:.3}", r.t).expect("writing to a String");
        push_state(&mut s, Some(r.truth));
        push_state(&mut s, r.ukf.map(|e| e.state));
        push_state(&mut s, r.ekf.map(|e| e.state));
        push_opt(&mut s, r.ukf.map(|e| e.error_m));
        push_opt(&mut s, r.ekf.map(|e| e.error_m));
        push_opt(&mut s, r.ukf.or(r.ekf).map(|e| e.sigma3_m));
        s.push('\n');
    }
    s
}

/// Lawnmower straight leg (m).
pub const LAWNMOWER_LEG: f64 = 855.0;
/// Lawnmower turn radius (m).
pub const LAWNMOWER_RADIUS: f64 = 50.0;
/// Lawnmower speed (m/s).
pub const LAWNMOWER_SPEED: f64 = 15.0;

/// Seconds for one straight leg plus one half-turn.
pub fn lawnmower_period() -> f64 {
    (LAWNMOWER_LEG + std::f64::consts::PI * LAWNMOWER_RADIUS) / LAWNMOWER_SPEED
}

/// The shipped lawnmower scenario with the given AIS interval and seed.
pub fn lawnmower(ais_interval: f64, seed: u64) -> Scenario {
    let mut s = parse_scenario(LAWNMOWER).expect("shipped scenario parses");
    s.ais_interval = ais_interval;
    s.rng_seed = seed;
    s
}

/// The shipped Boston-departure scenario with the given seed.
pub fn boston_departure(seed: u64) -> Scenario {
    let mut s = parse_scenario(BOSTON_DEPARTURE).expect("shipped scenario parses");
    s.rng_seed = seed;
    s
}

/// One point of the AIS-interval sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub ais_interval: f64,
    pub ukf: RunMetrics,
    pub ekf: RunMetrics,
}

/// Lawnmower runs over `intervals`, in parallel, results in input order.
pub fn stability_sweep(intervals: &[f64], seed: u64) -> Result<Vec<SweepPoint>, SimError> {
    interval_sweep(&lawnmower(2.0, seed), intervals)
}

/// Runs `base` once per AIS interval, in parallel, results in input order.
pub fn interval_sweep(base: &Scenario, intervals: &[f64]) -> Result<Vec<SweepPoint>, SimError> {
    intervals
        .par_iter()
        .map(|&dt| {
            let s = Scenario { ais_interval: dt, ..base.clone() };
            run_comparison(&s).map(|(ukf, ekf)| SweepPoint { ais_interval: dt, ukf, ekf })
        })
        .collect()
}

/// Header of the sweep CSV.
pub const SWEEP_CSV_HEADER: &str = "ais_interval,filter,rmse_lon,rmse_lat,rmse_sog,rmse_cog,rmse_pos_m,\
within_3sigma,median_trace,max_trace,steps";

/// One metrics CSV row (no trailing newline).
pub fn metrics_row(label: &str, filter: &str, m: &RunMetrics) -> String {
    format!(
        "{label},{filter},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6},{:.6e},{:.6e},{}",
        m.rmse[0], m.rmse[1], m.rmse[2], m.rmse[3], m.rmse_position_m, m.within_3sigma, m.median_trace, m.max_trace, m.steps
    )
}

/// Nominal seconds between position reports for a vessel on a constant
/// course: Class A (`class_b == false`) or Class B, by speed. Unknown speed
/// is treated as under way at the slowest moving rate.
pub fn report_interval(class_b: bool, sog: Option<f64>) -> f64 {
    let knots = sog.map(|v| v / KNOTS_TO_MPS);
    match (class_b, knots) {
        (false, Some(k)) if k < 3.0 => 180.0,
        (false, Some(k)) if k > 23.0 => 2.0,
        (false, Some(k)) if k > 14.0 => 6.0,
        (false, _) => 10.0,
        (true, Some(k)) if k < 2.0 => 180.0,
        (true, Some(k)) if k > 23.0 => 5.0,
        (true, Some(k)) if k > 14.0 => 15.0,
        (true, _) => 30.0,
    }
}

/// The scenario's AIS reports as type 1 sentences for `mmsi`, one per line,
/// each prefixed by its time in seconds (`t,!AIVDM...`).
pub fn nmea_stream(s: &Scenario, mmsi: u32) -> Result<Vec<String>, SimError> {
    s.validate()?;
    let truth = generate_truth(s);
    Ok(sample_ais(&truth, s)
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let z = &m.measurement;
            let r = DynamicAisReport {
                msg_type: 1,
                mmsi,
                lon: z.get(0),
                lat: z.get(1),
                sog: z.get(2),
                cog: z.get(3),
                heading: None,
                timestamp_sec: Some((m.t.rem_euclid(60.0)) as u8),
            };
            let channel = if i % 2 == 0 { 'A' } else { 'B' };
            format!("{:.3},{}", m.t, single_sentence(&encode_position_report(&r), channel))
        })
        .collect())
}
