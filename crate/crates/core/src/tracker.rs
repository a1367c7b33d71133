//! Per-MMSI track management.
//!
//! Each vessel gets its own [`GeodeticUkf`]. Reports are routed by MMSI;
//! [`TrackTable::tick`] advances every live track to a common clock and
//! retires tracks that have gone quiet.

use crate::ais::DynamicAisReport;
use crate::sim::report_interval;
use crate::ukf::{GaussianBelief, GeodeticUkf, Innovation, UkfConfig, UkfError};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrackerError {
    #[error("report for {mmsi} at t={report_time} is older than its track (t={track_time})")]
    StaleReport { mmsi: u32, report_time: f64, track_time: f64 },
    #[error("filter failure for {mmsi}: {source}")]
    Filter { mmsi: u32, source: UkfError },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackerConfig {
    pub ukf: UkfConfig,
    pub filter_rate_hz: f64,
    /// Seconds without a report before a track is retired.
    pub stale_timeout: f64,
    /// How far behind its track a report may be and still be applied.
    pub late_tolerance: f64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self { ukf: UkfConfig::default(), filter_rate_hz: 1.0, stale_timeout: 180.0, late_tolerance: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Track {
    pub filter: GeodeticUkf,
    pub last_update: f64,
    pub last_seen: f64,
}

/// Outcome of one ingested report.
#[derive(Debug, Clone, PartialEq)]
pub enum TrackEvent {
    Created { mmsi: u32 },
    Updated { mmsi: u32, innovation: Innovation },
    /// First report for a vessel carried no position; nothing to start from.
    Ignored { mmsi: u32 },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrackTable {
    pub config: TrackerConfig,
    tracks: BTreeMap<u32, Track>,
    last_tick: Option<f64>,
    stale_dropped: u64,
    failed: u64,
}

impl TrackTable {
    pub fn new(config: TrackerConfig) -> Self {
        Self { config, ..Default::default() }
    }

    pub fn len(&self) -> usize {
        self.tracks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tracks.is_empty()
    }

    pub fn get(&self, mmsi: u32) -> Option<&Track> {
        self.tracks.get(&mmsi)
    }

    pub fn tracks(&self) -> impl Iterator<Item = (u32, &Track)> {
        self.tracks.iter().map(|(k, v)| (*k, v))
    }

    /// Reports dropped for arriving too late.
    pub fn stale_dropped(&self) -> u64 {
        self.stale_dropped
    }

    /// Tracks removed after a filter failure.
    pub fn failed(&self) -> u64 {
        self.failed
    }

    /// Applies a report observed at `t`.
    pub fn ingest(&mut self, report: &DynamicAisReport, t: f64) -> Result<TrackEvent, TrackerError> {
        let mmsi = report.mmsi;
        let meas = report.measurement();
        let Some(track) = self.tracks.get_mut(&mmsi) else {
            return match GeodeticUkf::initialize(&meas, t, self.config.ukf) {
                Ok(filter) => {
                    self.tracks.insert(mmsi, Track { filter, last_update: t, last_seen: t });
                    Ok(TrackEvent::Created { mmsi })
                }
                Err(UkfError::InvalidInput(_)) => Ok(TrackEvent::Ignored { mmsi }),
                Err(source) => Err(TrackerError::Filter { mmsi, source }),
            };
        };
        let track_time = track.filter.time();
        if t < track_time - self.config.late_tolerance {
            self.stale_dropped += 1;
            return Err(TrackerError::StaleReport { mmsi, report_time: t, track_time });
        }
        let result = track.filter.predict_to(t).and_then(|_| track.filter.update(&meas));
        match result {
            Ok(innovation) => {
                track.last_update = t.max(track.last_update);
                track.last_seen = t.max(track.last_seen);
                Ok(TrackEvent::Updated { mmsi, innovation })
            }
            Err(source) => {
                self.tracks.remove(&mmsi);
                self.failed += 1;
                Err(TrackerError::Filter { mmsi, source })
            }
        }
    }

    /// Predicts every live track to `t` and returns their beliefs in MMSI
    /// order. Tracks silent for longer than the stale timeout, and tracks
    /// whose filter fails, are removed first.
    pub fn tick(&mut self, t: f64) -> Vec<(u32, GaussianBelief)> {
        let t = self.last_tick.map_or(t, |last| t.max(last));
        self.last_tick = Some(t);
        let timeout = self.config.stale_timeout;
        self.tracks.retain(|_, tr| t - tr.last_seen <= timeout);
        let before = self.tracks.len();
        self.tracks.retain(|_, tr| tr.filter.predict_to(t).is_ok());
        self.failed += (before - self.tracks.len()) as u64;
        self.tracks.iter().map(|(m, tr)| (*m, *tr.filter.belief())).collect()
    }
}

/// Gives every report a replay time. If any report carries a receive time,
/// input order is kept and untimed reports inherit the latest time seen.
/// Otherwise each vessel reports at its nominal interval for its class and
/// speed, starting at zero, and reports are ordered by that synthetic time.
pub fn assign_replay_times(reports: Vec<(DynamicAisReport, Option<f64>)>) -> Vec<(f64, DynamicAisReport)> {
    if reports.iter().any(|(_, t)| t.is_some()) {
        let mut last = reports.iter().find_map(|(_, t)| *t).unwrap_or(0.0);
        return reports
            .into_iter()
            .map(|(r, t)| {
                last = t.unwrap_or(last);
                (last, r)
            })
            .collect();
    }
    let mut clocks: BTreeMap<u32, f64> = BTreeMap::new();
    let mut out: Vec<(f64, DynamicAisReport)> = reports
        .into_iter()
        .map(|(r, _)| {
            let next = report_interval(r.msg_type == 18, r.sog);
            let clock = clocks.entry(r.mmsi).or_insert(-next);
            *clock += next;
            (*clock, r)
        })
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// What a replay produces, in time order.
#[derive(Debug, Clone, PartialEq)]
pub enum ReplayEvent {
    Report { t: f64, result: Result<TrackEvent, TrackerError> },
    Tick { t: f64, beliefs: Vec<(u32, GaussianBelief)> },
}

/// Feeds time-stamped reports through a fresh table, ticking at
/// `config.filter_rate_hz`. A tick at `τ` is emitted once every report up to
/// `τ` has been applied; the last tick is the last one not after the final
/// report. Tick times are multiples of the tick period.
pub fn replay(reports: &[(f64, DynamicAisReport)], config: TrackerConfig, mut sink: impl FnMut(ReplayEvent)) -> TrackTable {
    let mut table = TrackTable::new(config);
    let period = 1.0 / config.filter_rate_hz;
    let mut next_tick: Option<i64> = None;
    for (t, r) in reports {
        if !t.is_finite() {
            continue;
        }
        let k_t = (t / period).floor() as i64;
        let mut k = next_tick.unwrap_or(k_t);
        if table.is_empty() {
            // nothing to predict: skip straight to the report
            k = k.max(k_t);
        }
        while (k as f64) * period < *t {
            let tau = k as f64 * period;
            sink(ReplayEvent::Tick { t: tau, beliefs: table.tick(tau) });
            k += 1;
            if table.is_empty() {
                k = k.max(k_t);
            }
        }
        next_tick = Some(k);
        sink(ReplayEvent::Report { t: *t, result: table.ingest(r, *t) });
    }
    if let (Some(k), Some((t, _))) = (next_tick, reports.iter().rev().find(|(t, _)| t.is_finite())) {
        let mut k = k;
        while (k as f64) * period <= *t {
            let tau = k as f64 * period;
            sink(ReplayEvent::Tick { t: tau, beliefs: table.tick(tau) });
            k += 1;
        }
    }
    table
}

/// Header of the estimate CSV stream.
pub const CSV_HEADER: &str = "t,mmsi,lon_deg,lat_deg,sog_mps,cog_deg,p_trace";

/// One estimate CSV row (no trailing newline).
pub fn csv_row(t: f64, mmsi: u32, b: &GaussianBelief) -> String {
    let mut s = String::with_capacity(96);
    let m = &b.mean;
    write!(
        s,
        "{:.3},{},{:.8},{:.8},{:.4},{:.3},{:.6e}",
        t,
        mmsi,
        m.lon,
        m.lat,
        m.sog,
        m.cog,
        b.cov.trace()
    )
    .expect("writing to a String");
    s
}
