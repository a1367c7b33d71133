//! Reference-decoder comparison shared by the corpus tests and the acceptance
//! suite.

#![allow(dead_code)]

use geotrack::ais::{
    assemble_fragments, decode, parse_sentence, AisError, AisMessage, PositionScaling, KNOTS_TO_MPS,
};
use serde_json::Value;

pub const CORPUS: &str = include_str!("../data/ais_corpus.nmea");
pub const CHECKSUMS: &str = include_str!("../data/ais_corpus_checksums.txt");
pub const EXPECTED: &str = include_str!("../data/ais_corpus_expected.jsonl");
pub const STREAM_COUNTS: &str = include_str!("../data/ais_stream_counts.json");

pub fn lines() -> Vec<&'static str> {
    CORPUS.lines().collect()
}

pub fn expected() -> Vec<Value> {
    EXPECTED.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

pub fn group_of(lines: &[&str], first: usize) -> Result<AisMessage, AisError> {
    let head = parse_sentence(lines[first])?;
    let n = head.fragment_count as usize;
    let sentences = lines[first..first + n].iter().map(|l| parse_sentence(l)).collect::<Result<Vec<_>, _>>()?;
    decode(&assemble_fragments(&sentences)?, PositionScaling::Itu)
}

fn f(v: &Value, k: &str) -> Option<f64> {
    v.get(k).and_then(Value::as_f64)
}

pub fn u(v: &Value, k: &str) -> u64 {
    v[k].as_u64().unwrap()
}

/// Compares one decoded message with its reference record; returns the names
/// of fields that disagree.
pub fn mismatches(exp: &Value, got: &Result<AisMessage, AisError>) -> Vec<String> {
    let t = u(exp, "msg_type") as u8;
    let mut bad = Vec::new();
    let mut check = |ok: bool, name: &str| {
        if !ok {
            bad.push(name.to_string());
        }
    };
    match (t, got) {
        (1..=3 | 18, _) if exp["lat"].is_null() || exp["course"].is_null() => {
            check(matches!(got, Err(AisError::TruncatedPayload { .. })), "truncated");
        }
        (1..=3 | 18, Ok(AisMessage::Dynamic(r))) => {
            check(r.msg_type == t && r.mmsi as u64 == u(exp, "mmsi"), "header");
            let lon = f(exp, "lon").unwrap();
            check(
                if lon.abs() > 180.0 { r.lon.is_none() } else { r.lon.is_some_and(|x| (x - lon).abs() < 5e-7) },
                "lon",
            );
            let lat = f(exp, "lat").unwrap();
            check(
                if lat.abs() > 90.0 { r.lat.is_none() } else { r.lat.is_some_and(|x| (x - lat).abs() < 5e-7) },
                "lat",
            );
            let knots = f(exp, "speed_knots").unwrap();
            check(
                if knots >= 102.3 {
                    r.sog.is_none()
                } else {
                    r.sog.is_some_and(|x| (x - knots * KNOTS_TO_MPS).abs() < 1e-9)
                },
                "sog",
            );
            let course = f(exp, "course").unwrap();
            check(
                if course >= 360.0 { r.cog.is_none() } else { r.cog.is_some_and(|x| (x - course).abs() < 1e-9) },
                "cog",
            );
            let heading = u(exp, "heading");
            check(if heading >= 360 { r.heading.is_none() } else { r.heading == Some(heading as u16) }, "heading");
            let second = u(exp, "second");
            check(if second >= 60 { r.timestamp_sec.is_none() } else { r.timestamp_sec == Some(second as u8) }, "second");
        }
        (5, Ok(AisMessage::Static(r))) => {
            check(r.mmsi as u64 == u(exp, "mmsi") && r.imo as u64 == u(exp, "imo"), "ids");
            check(r.name == exp["shipname"].as_str().unwrap(), "name");
            check(r.ship_type as u64 == u(exp, "ship_type"), "ship_type");
            check(
                r.to_bow as u64 == u(exp, "to_bow")
                    && r.to_stern as u64 == u(exp, "to_stern")
                    && r.to_port as u64 == u(exp, "to_port")
                    && r.to_starboard as u64 == u(exp, "to_starboard"),
                "dimensions",
            );
            check(r.fix_type as u64 == u(exp, "epfd"), "fix_type");
            check((r.draught - f(exp, "draught").unwrap()).abs() < 1e-9, "draught");
        }
        (t, Err(AisError::UnsupportedMessageType(found))) => check(*found == t && !matches!(t, 1..=3 | 5 | 18), "type"),
        _ => check(false, "kind"),
    }
    bad
}
