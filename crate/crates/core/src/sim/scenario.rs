//! Scenario definitions and their text format.
//!
//! A scenario file is a block of `key = value` settings followed by a
//! `[segments]` table, one maneuver per row:
//!
//! ```text
//! # comment
//! name = example
//! start_lon = -71.0237
//! start_lat = 42.3469
//! initial_cog = 90
//! ais_interval = 6
//! seed = 7
//!
//! [segments]
//! # kind     duration_s  speed_mps  turn_rate_dps
//! straight   120         7
//! turn       30          7          3
//! ```
//!
//! Keys and defaults:
//!
//! | key              | meaning                                  | default                     |
//! |------------------|------------------------------------------|-----------------------------|
//! | `name`           | label carried into outputs               | `scenario`                  |
//! | `start_lon`      | start longitude (deg)                    | required                    |
//! | `start_lat`      | start latitude (deg)                     | required                    |
//! | `initial_cog`    | start course (deg)                       | required                    |
//! | `truth_rate_hz`  | truth integration rate                   | `1`                         |
//! | `filter_rate_hz` | filter prediction rate                   | `1`                         |
//! | `ais_interval`   | seconds between AIS reports              | `6`                         |
//! | `sog_jitter`     | white SOG noise std per truth step (m/s) | `0.1`                       |
//! | `cog_jitter`     | white COG noise std per truth step (deg) | `0.5`                       |
//! | `meas_std`       | lon lat (deg) SOG (m/s) COG (deg) std    | `1.9e-5 1.45e-5 0.05 0.2`   |
//! | `seed`           | RNG seed                                 | `0`                         |
//! | `repeat`         | times the segment table is repeated      | `1`                         |
//! | `alternate_turns`| flip turn direction on each repetition   | `false`                     |
//!
//! A `turn` row may give its rate as `auto180`, meaning 180 degrees over the
//! row's duration.

use crate::geodesy::GeoPoint;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SegmentKind {
    Straight,
    Turn,
}

/// One maneuver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySegment {
    pub kind: SegmentKind,
    /// Seconds.
    pub duration: f64,
    /// m/s.
    pub speed: f64,
    /// deg/s, zero for straight segments.
    pub turn_rate: f64,
}

impl TrajectorySegment {
    pub fn straight(duration: f64, speed: f64) -> Self {
        Self { kind: SegmentKind::Straight, duration, speed, turn_rate: 0.0 }
    }

    pub fn turn(duration: f64, speed: f64, turn_rate: f64) -> Self {
        Self { kind: SegmentKind::Turn, duration, speed, turn_rate }
    }
}

/// A complete simulation setup.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub name: String,
    pub start: GeoPoint,
    pub initial_cog: f64,
    pub segments: Vec<TrajectorySegment>,
    pub truth_rate_hz: f64,
    pub filter_rate_hz: f64,
    /// Seconds between AIS reports.
    pub ais_interval: f64,
    /// SOG/COG white-noise std devs injected into the truth (m/s, deg).
    pub process_noise: [f64; 2],
    /// Measurement std devs (deg, deg, m/s, deg).
    pub measurement_noise: [f64; 4],
    pub rng_seed: u64,
}

impl Scenario {
    pub fn duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |m: &str| Err(ScenarioError::Invalid(m.to_string()));
        if self.segments.is_empty() {
            return bad("no segments");
        }
        for s in &self.segments {
            if !(s.duration > 0.0 && s.duration.is_finite()) {
                return bad("segment duration must be positive");
            }
            if !(s.speed >= 0.0 && s.speed.is_finite()) || !s.turn_rate.is_finite() {
                return bad("segment speed must be nonnegative and finite");
            }
        }
        if !(self.truth_rate_hz > 0.0 && self.truth_rate_hz.is_finite()) {
            return bad("truth_rate_hz must be positive");
        }
        if !(self.filter_rate_hz > 0.0 && self.filter_rate_hz.is_finite()) {
            return bad("filter_rate_hz must be positive");
        }
        if !(self.ais_interval >= 1.0 / self.truth_rate_hz) || !self.ais_interval.is_finite() {
            return bad("ais_interval must be at least one truth step");
        }
        if self.process_noise.iter().chain(self.measurement_noise.iter()).any(|v| !(*v >= 0.0 && v.is_finite())) {
            return bad("noise std devs must be nonnegative");
        }
        if !(-90.0..=90.0).contains(&self.start.lat) || !self.start.lon.is_finite() || !self.initial_cog.is_finite() {
            return bad("invalid start");
        }
        // Cap the work a scenario can ask for.
        if self.duration() * self.truth_rate_hz.max(self.filter_rate_hz) > 1e8 {
            return bad("scenario too long");
        }
        Ok(())
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Syntax { line, message: message.into() }
}

fn number(s: &str, line: usize) -> Result<f64, ScenarioError> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| syntax(line, format!("`{s}` is not a finite number")))
}

/// Parses the scenario text format.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut name = "scenario".to_string();
    let (mut lon, mut lat, mut cog) = (None, None, None);
    let mut truth_rate = 1.0;
    let mut filter_rate = 1.0;
    let mut interval = 6.0;
    let mut jitter = [0.1, 0.5];
    let mut meas = [1.9e-5, 1.45e-5, 0.05, 0.2];
    let mut seed = 0u64;
    let mut repeat = 1usize;
    let mut alternate = false;
    let mut table: Vec<TrajectorySegment> = Vec::new();
    let mut in_segments = false;

    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.eq_ignore_ascii_case("[segments]") {
            if in_segments {
                return Err(syntax(n, "duplicate [segments] header"));
            }
            in_segments = true;
            continue;
        }
        if in_segments {
            let cols: Vec<&str> = line.split_whitespace().collect();
            let seg = match cols.as_slice() {
                ["straight", d, u] => TrajectorySegment::straight(number(d, n)?, number(u, n)?),
                ["turn", d, u, r] => {
                    let d = number(d, n)?;
                    let r = match *r {
                        "auto180" => 180.0 / d,
                        "-auto180" => -180.0 / d,
                        r => number(r, n)?,
                    };
                    TrajectorySegment::turn(d, number(u, n)?, r)
                }
                _ => return Err(syntax(n, "expected `straight <s> <m/s>` or `turn <s> <m/s> <deg/s>`")),
            };
            table.push(seg);
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| syntax(n, "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "name" => name = value.to_string(),
            "start_lon" => lon = Some(number(value, n)?),
            "start_lat" => lat = Some(number(value, n)?),
            "initial_cog" => cog = Some(number(value, n)?),
            "truth_rate_hz" => truth_rate = number(value, n)?,
            "filter_rate_hz" => filter_rate = number(value, n)?,
            "ais_interval" => interval = number(value, n)?,
            "sog_jitter" => jitter[0] = number(value, n)?,
            "cog_jitter" => jitter[1] = number(value, n)?,
            "meas_std" => {
                let v: Vec<&str> = value.split_whitespace().collect();
                if v.len() != 4 {
                    return Err(syntax(n, "meas_std needs four values"));
                }
                for (m, s) in meas.iter_mut().zip(v) {
                    *m = number(s, n)?;
                }
            }
            "seed" => seed = value.parse().map_err(|_| syntax(n, "seed must be an unsigned integer"))?,
            "repeat" => {
                repeat = value.parse().map_err(|_| syntax(n, "repeat must be an unsigned integer"))?;
                if repeat == 0 || repeat > 10_000 {
                    return Err(syntax(n, "repeat must be in 1..=10000"));
                }
            }
            "alternate_turns" => {
                alternate = value.parse().map_err(|_| syntax(n, "alternate_turns must be true or false"))?
            }
            other => return Err(syntax(n, format!("unknown key `{other}`"))),
        }
    }

    let mut segments = Vec::with_capacity(table.len() * repeat);
    for k in 0..repeat {
        let sign = if alternate && k % 2 == 1 { -1.0 } else { 1.0 };
        segments.extend(table.iter().map(|s| TrajectorySegment { turn_rate: s.turn_rate * sign, ..*s }));
    }
    let scenario = Scenario {
        name,
        start: GeoPoint {
            lon: lon.ok_or(ScenarioError::MissingKey("start_lon"))?,
            lat: lat.ok_or(ScenarioError::MissingKey("start_lat"))?,
        },
        initial_cog: cog.ok_or(ScenarioError::MissingKey("initial_cog"))?,
        segments,
        truth_rate_hz: truth_rate,
        filter_rate_hz: filter_rate,
        ais_interval: interval,
        process_noise: jitter,
        measurement_noise: meas,
        rng_seed: seed,
    };
    scenario.validate()?;
    Ok(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = "\
name = t
start_lon = -71
start_lat = 42   # trailing comment
initial_cog = 90
seed = 3
repeat = 2
alternate_turns = true

[segments]
straight 10 7
turn 4 7 auto180
";

    #[test]
    fn parses_and_repeats() {
        let s = parse_scenario(TEXT).unwrap();
        assert_eq!(s.name, "t");
        assert_eq!(s.segments.len(), 4);
        assert_eq!(s.segments[1].turn_rate, 45.0);
        assert_eq!(s.segments[3].turn_rate, -45.0);
        assert_eq!(s.duration(), 28.0);
        assert_eq!(s.rng_seed, 3);
        assert_eq!(s.measurement_noise, [1.9e-5, 1.45e-5, 0.05, 0.2]);
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse_scenario("start_lon = 1\nstart_lat = x\n").unwrap_err();
        assert_eq!(e, ScenarioError::Syntax { line: 2, message: "`x` is not a finite number".into() });
        assert!(matches!(parse_scenario("bogus = 1"), Err(ScenarioError::Syntax { line: 1, .. })));
        assert!(matches!(
            parse_scenario("start_lon=0\nstart_lat=0\ninitial_cog=0\n[segments]\nzigzag 1 2\n"),
            Err(ScenarioError::Syntax { line: 5, .. })
        ));
    }

    #[test]
    fn rejects_invalid() {
        assert_eq!(parse_scenario("start_lat=0\ninitial_cog=0\n").unwrap_err(), ScenarioError::MissingKey("start_lon"));
        assert!(matches!(
            parse_scenario("start_lon=0\nstart_lat=0\ninitial_cog=0\n"),
            Err(ScenarioError::Invalid(_))
        ));
        assert!(matches!(
            parse_scenario("start_lon=0\nstart_lat=0\ninitial_cog=0\nais_interval=0.5\n[segments]\nstraight 1 1\n"),
            Err(ScenarioError::Invalid(_))
        ));
        assert!(parse_scenario("start_lon=0\nstart_lat=0\ninitial_cog=0\n[segments]\nstraight -1 1\n").is_err());
    }
}
