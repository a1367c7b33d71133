//! Field extraction for position reports (types 1, 2, 3, 18) and static
//! voyage data (type 5).

use super::bits::BitString;
use super::AisError;
use crate::ukf::Measurement;
use serde::Serialize;

/// Knots to meters per second.
pub const KNOTS_TO_MPS: f64 = 0.51444;

/// How raw position fields are scaled to degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PositionScaling {
    /// Raw value in 1/10000 arc-minute: `deg = raw / 600000`.
    #[default]
    Itu,
    /// `deg = 6e-5 · raw`.
    Compat,
}

impl PositionScaling {
    pub fn to_degrees(self, raw: i64) -> f64 {
        match self {
            Self::Itu => raw as f64 / 600_000.0,
            Self::Compat => raw as f64 * 6e-5,
        }
    }
}

/// A decoded position report; `None` marks a field reported as not
/// available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DynamicAisReport {
    pub msg_type: u8,
    pub mmsi: u32,
    pub lon: Option<f64>,
    pub lat: Option<f64>,
    /// Speed over ground (m/s).
    pub sog: Option<f64>,
    /// Course over ground (deg).
    pub cog: Option<f64>,
    /// True heading (deg).
    pub heading: Option<u16>,
    /// UTC second of the position fix.
    pub timestamp_sec: Option<u8>,
}

impl DynamicAisReport {
    pub fn measurement(&self) -> Measurement {
        Measurement::new(self.lon, self.lat, self.sog, self.cog)
    }
}

/// Decoded static and voyage data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaticAisReport {
    pub mmsi: u32,
    pub imo: u32,
    pub name: String,
    pub ship_type: u8,
    pub to_bow: u16,
    pub to_stern: u16,
    pub to_port: u8,
    pub to_starboard: u8,
    pub fix_type: u8,
    /// Draught (m).
    pub draught: f64,
}

struct DynamicLayout {
    sog: usize,
    lon: usize,
    lat: usize,
    cog: usize,
    heading: usize,
    second: usize,
}

const CLASS_A: DynamicLayout = DynamicLayout { sog: 50, lon: 61, lat: 89, cog: 116, heading: 128, second: 137 };
const CLASS_B: DynamicLayout = DynamicLayout { sog: 46, lon: 57, lat: 85, cog: 112, heading: 124, second: 133 };

/// Message type from the first six bits.
pub fn message_type(bits: &BitString) -> Result<u8, AisError> {
    Ok(bits.unsigned(0, 6)? as u8)
}

/// Decodes a type 1, 2, 3 or 18 position report.
pub fn decode_dynamic(bits: &BitString, scaling: PositionScaling) -> Result<DynamicAisReport, AisError> {
    let msg_type = message_type(bits)?;
    let layout = match msg_type {
        1..=3 => &CLASS_A,
        18 => &CLASS_B,
        found => return Err(AisError::WrongMessageType { expected: "1, 2, 3 or 18", found }),
    };
    let mmsi = bits.unsigned(8, 30)? as u32;

    let sog_raw = bits.unsigned(layout.sog, 10)?;
    let sog = (sog_raw != 1023).then(|| sog_raw as f64 * KNOTS_TO_MPS / 10.0);

    let lon = scaling.to_degrees(bits.signed(layout.lon, 28)?);
    let lon = (lon.abs() <= 180.0).then_some(lon);
    let lat = scaling.to_degrees(bits.signed(layout.lat, 27)?);
    let lat = (lat.abs() <= 90.0).then_some(lat);

    let cog_raw = bits.unsigned(layout.cog, 12)?;
    let cog = (cog_raw < 3600).then(|| cog_raw as f64 / 10.0);

    let heading_raw = bits.unsigned(layout.heading, 9)? as u16;
    let heading = (heading_raw < 360).then_some(heading_raw);
    let second_raw = bits.unsigned(layout.second, 6)? as u8;
    let timestamp_sec = (second_raw < 60).then_some(second_raw);

    Ok(DynamicAisReport { msg_type, mmsi, lon, lat, sog, cog, heading, timestamp_sec })
}

/// Decodes a type 5 static and voyage data message.
pub fn decode_static(bits: &BitString) -> Result<StaticAisReport, AisError> {
    let msg_type = message_type(bits)?;
    if msg_type != 5 {
        return Err(AisError::WrongMessageType { expected: "5", found: msg_type });
    }
    Ok(StaticAisReport {
        mmsi: bits.unsigned(8, 30)? as u32,
        imo: bits.unsigned(40, 30)? as u32,
        name: bits.text(112, 20)?,
        ship_type: bits.unsigned(232, 8)? as u8,
        to_bow: bits.unsigned(240, 9)? as u16,
        to_stern: bits.unsigned(249, 9)? as u16,
        to_port: bits.unsigned(258, 6)? as u8,
        to_starboard: bits.unsigned(264, 6)? as u8,
        fix_type: bits.unsigned(270, 4)? as u8,
        draught: bits.unsigned(294, 8)? as f64 / 10.0,
    })
}
