use crate::decode::decode_stream;
use crate::io::{write_err, writer};
use crate::{CliError, TrackArgs};
use geotrack::ais::AisMessage;
use geotrack::tracker::{
    assign_replay_times, csv_row, replay, ReplayEvent, TrackEvent, TrackerConfig, TrackerError, CSV_HEADER,
};
use geotrack::ukf::UkfConfig;
use std::io::Write;

pub fn run(a: &TrackArgs) -> Result<(), CliError> {
    if !(a.rate > 0.0 && a.rate.is_finite()) {
        return Err(CliError::Usage("--rate must be positive".into()));
    }
    if !(a.stale_timeout > 0.0) || !(a.late_tolerance >= 0.0) {
        return Err(CliError::Usage("--stale-timeout must be positive and --late-tolerance nonnegative".into()));
    }
    let decoded = decode_stream(&a.stream)?;
    let reports = decoded
        .messages
        .iter()
        .filter_map(|m| match &m.message {
            AisMessage::Dynamic(r) => Some((*r, m.received)),
            AisMessage::Static(_) => None,
        })
        .collect();
    let timed = assign_replay_times(reports);
    let config = TrackerConfig {
        ukf: UkfConfig { earth: a.earth.into(), ..UkfConfig::default() },
        filter_rate_hz: a.rate,
        stale_timeout: a.stale_timeout,
        late_tolerance: a.late_tolerance,
    };

    let mut w = writer(a.stream.output.as_ref())?;
    let mut io_error = None;
    let (mut created, mut updated, mut ignored) = (0usize, 0usize, 0usize);
    let mut line = String::new();
    writeln!(w, "{CSV_HEADER}").map_err(write_err)?;
    let table = replay(&timed, config, |e| match e {
        ReplayEvent::Tick { t, beliefs } => {
            for (mmsi, b) in &beliefs {
                line.clear();
                line.push_str(&csv_row(t, *mmsi, b));
                line.push('\n');
                if let Err(err) = w.write_all(line.as_bytes()) {
                    io_error.get_or_insert(err);
                }
            }
        }
        ReplayEvent::Report { result, .. } => match result {
            Ok(TrackEvent::Created { .. }) => created += 1,
            Ok(TrackEvent::Updated { .. }) => updated += 1,
            Ok(TrackEvent::Ignored { .. }) => ignored += 1,
            Err(TrackerError::StaleReport { .. }) => {}
            Err(e @ TrackerError::Filter { .. }) => eprintln!("track: {e}"),
        },
    });
    if let Some(e) = io_error {
        return Err(write_err(e));
    }
    w.flush().map_err(write_err)?;
    eprintln!(
        "{}; {} reports, {created} tracks created, {updated} updates, {ignored} ignored, {} stale, {} filter failures, {} live",
        decoded.summary("track"),
        timed.len(),
        table.stale_dropped(),
        table.failed(),
        table.len()
    );
    Ok(())
}
