//! Position-report encoding, used to replay simulated traffic through the
//! decoder.

use super::bits::BitString;
use super::decode::{DynamicAisReport, KNOTS_TO_MPS};
use super::sentence::nmea_checksum;

fn put(bits: &mut [bool], start: usize, width: usize, value: i64) {
    for i in 0..width {
        bits[start + i] = (value >> (width - 1 - i)) & 1 == 1;
    }
}

/// Packs a type 1, 2, 3 or 18 report into its 168-bit layout. Missing fields
/// are written as their not-available sentinels; positions use 1/10000
/// minute resolution.
pub fn encode_position_report(r: &DynamicAisReport) -> BitString {
    let class_b = r.msg_type == 18;
    let off = if class_b { 4 } else { 0 };
    let mut b = vec![false; 168];
    put(&mut b, 0, 6, if class_b { 18 } else { r.msg_type.clamp(1, 3) as i64 });
    put(&mut b, 8, 30, r.mmsi as i64);
    let sog = r.sog.map_or(1023, |v| ((v / KNOTS_TO_MPS * 10.0).round() as i64).clamp(0, 1022));
    put(&mut b, 50 - off, 10, sog);
    let lon = r.lon.map_or(181 * 600_000, |v| (v * 600_000.0).round() as i64);
    put(&mut b, 61 - off, 28, lon);
    let lat = r.lat.map_or(91 * 600_000, |v| (v * 600_000.0).round() as i64);
    put(&mut b, 89 - off, 27, lat);
    let cog = r.cog.map_or(3600, |v| (v * 10.0).round() as i64 % 3600);
    put(&mut b, 116 - off, 12, cog);
    put(&mut b, 128 - off, 9, r.heading.map_or(511, i64::from));
    put(&mut b, 137 - off, 6, r.timestamp_sec.map_or(60, i64::from));
    BitString::from_bits(b)
}

/// Wraps a payload that fits one sentence as `!AIVDM,1,1,,<channel>,...`.
pub fn single_sentence(bits: &BitString, channel: char) -> String {
    let (payload, fill) = bits.armor();
    let body = format!("AIVDM,1,1,,{channel},{payload},{fill}");
    format!("!{body}*{:02X}", nmea_checksum(body.as_bytes()))
}
