use crate::io::{read_lines, write_err, writer};
use crate::{CliError, DecodeArgs, StreamArgs};
use geotrack::ais::{AisError, AisMessage, AisStream, TimedMessage};
use std::collections::BTreeMap;

pub const HEADER: [&str; 14] = [
    "received", "kind", "msg_type", "mmsi", "lon_deg", "lat_deg", "sog_mps", "cog_deg", "heading_deg", "second",
    "imo", "name", "ship_type", "draught_m",
];

pub fn error_kind(e: &AisError) -> &'static str {
    match e {
        AisError::MalformedSentence(_) => "malformed",
        AisError::ChecksumMismatch { .. } => "checksum",
        AisError::InvalidCharacter(_) => "invalid_character",
        AisError::IncompleteMessage => "incomplete",
        AisError::ConflictingFragments => "conflicting_fragments",
        AisError::WrongMessageType { .. } => "wrong_type",
        AisError::UnsupportedMessageType(_) => "unsupported_type",
        AisError::TruncatedPayload { .. } => "truncated",
    }
}

/// Decoded messages of a stream plus per-kind counts of what was skipped.
pub struct Decoded {
    pub lines: usize,
    pub messages: Vec<TimedMessage>,
    pub skipped: BTreeMap<&'static str, usize>,
}

impl Decoded {
    pub fn summary(&self, what: &str) -> String {
        let skipped: usize = self.skipped.values().sum();
        let mut s = format!("{what}: {} lines, {} messages, {skipped} skipped", self.lines, self.messages.len());
        for (k, n) in &self.skipped {
            s.push_str(&format!(", {k} {n}"));
        }
        s
    }
}

pub fn decode_stream(a: &StreamArgs) -> Result<Decoded, CliError> {
    if !(a.fragment_timeout >= 0.0) {
        return Err(CliError::Usage("--fragment-timeout must be nonnegative".into()));
    }
    let lines = read_lines(&a.input)?;
    let mut stream = AisStream::new(a.scaling.into(), a.fragment_timeout);
    let mut out = Decoded { lines: 0, messages: Vec::new(), skipped: BTreeMap::new() };
    for line in &lines {
        if line.trim().is_empty() {
            continue;
        }
        out.lines += 1;
        let (result, expired) = stream.push_line(line, None);
        for e in &expired {
            *out.skipped.entry(error_kind(e)).or_default() += 1;
        }
        match result {
            Ok(Some(m)) => out.messages.push(m),
            Ok(None) => {}
            Err(e) => *out.skipped.entry(error_kind(&e)).or_default() += 1,
        }
    }
    Ok(out)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn fixed(v: Option<f64>, digits: usize) -> String {
    v.map(|v| format!("{v:.digits$}")).unwrap_or_default()
}

pub fn record(m: &TimedMessage) -> Vec<String> {
    let received = fixed(m.received, 3);
    match &m.message {
        AisMessage::Dynamic(r) => vec![
            received,
            "position".into(),
            r.msg_type.to_string(),
            r.mmsi.to_string(),
            fixed(r.lon, 7),
            fixed(r.lat, 7),
            fixed(r.sog, 5),
            fixed(r.cog, 1),
            opt(r.heading),
            opt(r.timestamp_sec),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
        ],
        AisMessage::Static(r) => vec![
            received,
            "static".into(),
            "5".into(),
            r.mmsi.to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            r.imo.to_string(),
            r.name.clone(),
            r.ship_type.to_string(),
            format!("{:.1}", r.draught),
        ],
    }
}

pub fn run(a: &DecodeArgs) -> Result<(), CliError> {
    let decoded = decode_stream(&a.stream)?;
    let mut w = csv::Writer::from_writer(writer(a.stream.output.as_ref())?);
    let csv_err = |e: csv::Error| CliError::Input(format!("write failed: {e}"));
    w.write_record(HEADER).map_err(csv_err)?;
    for m in &decoded.messages {
        w.write_record(record(m)).map_err(csv_err)?;
    }
    w.flush().map_err(write_err)?;
    eprintln!("{}", decoded.summary("decode"));
    Ok(())
}
