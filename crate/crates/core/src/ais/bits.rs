//! Six-bit armoring.

use super::AisError;

/// A payload bitstring, one `bool` per bit, MSB first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitString {
    bits: Vec<bool>,
}

/// Six-bit value of an armored payload character.
pub fn armor_value(c: u8) -> Result<u8, AisError> {
    match c {
        b'0'..=b'W' | b'`'..=b'w' => {
            let v = c - 48;
            Ok(if v > 40 { v - 8 } else { v })
        }
        _ => Err(AisError::InvalidCharacter(c as char)),
    }
}

/// Armored character for a six-bit value.
pub fn armor_char(v: u8) -> char {
    let v = v & 0x3f;
    (if v < 40 { v + 48 } else { v + 56 }) as char
}

/// Unpacks an armored payload, dropping `fill_bits` trailing bits.
pub fn dearmor(payload: &str, fill_bits: u8) -> Result<BitString, AisError> {
    if fill_bits > 5 {
        return Err(AisError::MalformedSentence("fill bits must be 0..=5"));
    }
    let mut bits = Vec::with_capacity(payload.len() * 6);
    for c in payload.bytes() {
        let v = armor_value(c)?;
        bits.extend((0..6).rev().map(|i| (v >> i) & 1 == 1));
    }
    if (fill_bits as usize) > bits.len() {
        return Err(AisError::MalformedSentence("fill bits exceed payload"));
    }
    bits.truncate(bits.len() - fill_bits as usize);
    Ok(BitString { bits })
}

impl BitString {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn extend(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    /// Unsigned field of `width` bits starting at `start`.
    pub fn unsigned(&self, start: usize, width: usize) -> Result<u64, AisError> {
        debug_assert!(width <= 64);
        let end = start + width;
        if end > self.bits.len() {
            return Err(AisError::TruncatedPayload { needed: end, available: self.bits.len() });
        }
        Ok(self.bits[start..end].iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    /// Two's-complement signed field.
    pub fn signed(&self, start: usize, width: usize) -> Result<i64, AisError> {
        let raw = self.unsigned(start, width)?;
        let shift = 64 - width as u32;
        Ok(((raw << shift) as i64) >> shift)
    }

    /// Sixbit text field; `@` padding and surrounding whitespace removed.
    pub fn text(&self, start: usize, chars: usize) -> Result<String, AisError> {
        let mut s = String::with_capacity(chars);
        for i in 0..chars {
            let v = self.unsigned(start + 6 * i, 6)? as u8;
            s.push(sixbit_ascii(v));
        }
        let s = s.trim_end_matches('@');
        let s = match s.find('@') {
            Some(i) => &s[..i],
            None => s,
        };
        Ok(s.trim().to_string())
    }

    /// Re-armors the bits, returning the payload text and fill-bit count.
    pub fn armor(&self) -> (String, u8) {
        let fill = (6 - self.bits.len() % 6) % 6;
        let mut out = String::with_capacity(self.bits.len().div_ceil(6));
        for chunk in self.bits.chunks(6) {
            let mut v = 0u8;
            for i in 0..6 {
                v = (v << 1) | chunk.get(i).copied().unwrap_or(false) as u8;
            }
            out.push(armor_char(v));
        }
        (out, fill as u8)
    }
}

/// Standard AIS sixbit character table: 0–31 map to `@A..Z[\]^_`, 32–63 to
/// ASCII 32–63.
pub fn sixbit_ascii(v: u8) -> char {
    let v = v & 0x3f;
    (if v < 32 { v + 64 } else { v }) as char
}
