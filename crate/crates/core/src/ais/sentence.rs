//! NMEA 0183 AIVDM/AIVDO sentence parsing.

use super::AisError;

/// One parsed `!xxVDM` / `!xxVDO` sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NmeaSentence {
    /// Talker and sentence type, e.g. `AIVDM`.
    pub tag: String,
    pub fragment_count: u8,
    /// 1-based.
    pub fragment_index: u8,
    pub sequence_id: Option<u8>,
    pub channel: Option<char>,
    pub payload: String,
    pub fill_bits: u8,
    pub checksum: u8,
}

/// A sentence plus the receive time carried alongside it, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct TimedSentence {
    pub sentence: NmeaSentence,
    pub received: Option<f64>,
}

/// XOR of all bytes.
pub fn nmea_checksum(body: &[u8]) -> u8 {
    body.iter().fold(0, |a, b| a ^ b)
}

// Splits "!body*hh" into (body, hh); leading '!' or '$' required.
fn split_checksum(s: &str) -> Result<(&str, &str), AisError> {
    let rest = s
        .strip_prefix('!')
        .or_else(|| s.strip_prefix('$'))
        .ok_or(AisError::MalformedSentence("missing '!' or '$'"))?;
    let star = rest.rfind('*').ok_or(AisError::MalformedSentence("missing '*'"))?;
    Ok((&rest[..star], &rest[star + 1..]))
}

fn parse_hex_byte(s: &str) -> Result<u8, AisError> {
    if s.len() != 2 || !s.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(AisError::MalformedSentence("checksum must be two hex digits"));
    }
    u8::from_str_radix(s, 16).map_err(|_| AisError::MalformedSentence("bad checksum"))
}

/// True iff the XOR of the bytes between `!`/`$` and `*` equals the two hex
/// digits after `*`.
pub fn verify_checksum(line: &str) -> Result<bool, AisError> {
    let (body, hex) = split_checksum(line.trim())?;
    Ok(nmea_checksum(body.as_bytes()) == parse_hex_byte(hex)?)
}

fn small_int(field: &str, what: &'static str) -> Result<u8, AisError> {
    if field.is_empty() || field.len() > 2 || !field.bytes().all(|b| b.is_ascii_digit()) {
        return Err(AisError::MalformedSentence(what));
    }
    field.parse().map_err(|_| AisError::MalformedSentence(what))
}

/// Parses one sentence and checks its checksum.
pub fn parse_sentence(line: &str) -> Result<NmeaSentence, AisError> {
    let line = line.trim();
    let (body, hex) = split_checksum(line)?;
    let checksum = parse_hex_byte(hex)?;
    let computed = nmea_checksum(body.as_bytes());
    if computed != checksum {
        return Err(AisError::ChecksumMismatch { expected: checksum, computed });
    }
    let fields: Vec<&str> = body.split(',').collect();
    if fields.len() != 7 {
        return Err(AisError::MalformedSentence("expected 7 comma-separated fields"));
    }
    let tag = fields[0];
    if tag.len() != 5 || !(tag.ends_with("VDM") || tag.ends_with("VDO")) || !tag.is_ascii() {
        return Err(AisError::MalformedSentence("not a VDM/VDO sentence"));
    }
    let fragment_count = small_int(fields[1], "bad fragment count")?;
    let fragment_index = small_int(fields[2], "bad fragment index")?;
    if fragment_count == 0 || fragment_index == 0 || fragment_index > fragment_count {
        return Err(AisError::MalformedSentence("fragment index out of range"));
    }
    let sequence_id = match fields[3] {
        "" => None,
        s => Some(small_int(s, "bad sequence id")?),
    };
    let channel = match fields[4] {
        "" => None,
        s if s.len() == 1 => s.chars().next(),
        _ => return Err(AisError::MalformedSentence("bad channel")),
    };
    let fill_bits = small_int(fields[6], "bad fill bits")?;
    if fill_bits > 5 {
        return Err(AisError::MalformedSentence("fill bits must be 0..=5"));
    }
    Ok(NmeaSentence {
        tag: tag.to_string(),
        fragment_count,
        fragment_index,
        sequence_id,
        channel,
        payload: fields[5].to_string(),
        fill_bits,
        checksum,
    })
}

fn parse_time(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|t| t.is_finite())
}

// Extracts `c:<unix seconds>` from an NMEA 4 tag block body.
fn tag_block_time(block: &str) -> Option<f64> {
    let body = block.split('*').next()?;
    body.split(',')
        .find_map(|kv| kv.strip_prefix("c:"))
        .and_then(parse_time)
        .map(|t| if t > 1e11 { t / 1000.0 } else { t })
}

/// Parses a line holding one sentence and optionally a receive time: a
/// leading `\c:<t>*hh\` tag block, a leading numeric column, or a trailing
/// numeric column after the checksum.
pub fn parse_line(line: &str) -> Result<TimedSentence, AisError> {
    let mut s = line.trim();
    let mut received = None;
    if let Some(rest) = s.strip_prefix('\\') {
        let end = rest.find('\\').ok_or(AisError::MalformedSentence("unterminated tag block"))?;
        received = tag_block_time(&rest[..end]);
        s = rest[end + 1..].trim_start();
    } else if !s.starts_with('!') && !s.starts_with('$') {
        let start = s.find(['!', '$']).ok_or(AisError::MalformedSentence("missing '!' or '$'"))?;
        let lead = s[..start].trim().trim_end_matches([',', ';']).trim();
        received = Some(parse_time(lead).ok_or(AisError::MalformedSentence("bad leading timestamp"))?);
        s = &s[start..];
    }
    if let Some(star) = s.rfind('*') {
        let tail_start = (star + 3).min(s.len());
        if !s.is_char_boundary(tail_start) {
            return Err(AisError::MalformedSentence("checksum must be two hex digits"));
        }
        let tail = s[tail_start..].trim().trim_start_matches([',', ';']).trim();
        if !tail.is_empty() {
            if received.is_some() {
                return Err(AisError::MalformedSentence("two timestamps on one line"));
            }
            received = Some(parse_time(tail).ok_or(AisError::MalformedSentence("bad trailing timestamp"))?);
        }
        s = &s[..tail_start];
    }
    Ok(TimedSentence { sentence: parse_sentence(s)?, received })
}
