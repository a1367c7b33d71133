//! AIVDM/AIVDO decoding.
//!
//! Lines flow through [`sentence::parse_line`] (structure and checksum),
//! [`assembler::FragmentAssembler`] (multi-sentence messages), and
//! [`decode`] (field extraction). [`AisStream`] chains the three for a
//! newline-delimited input.

pub mod assembler;
pub mod bits;
pub mod decode;
pub mod encode;
pub mod sentence;

pub use assembler::{assemble_fragments, AssembledMessage, FragmentAssembler, DEFAULT_FRAGMENT_TIMEOUT};
pub use bits::{dearmor, BitString};
pub use encode::{encode_position_report, single_sentence};
pub use decode::{decode_dynamic, decode_static, DynamicAisReport, PositionScaling, StaticAisReport, KNOTS_TO_MPS};
pub use sentence::{parse_line, parse_sentence, verify_checksum, NmeaSentence};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AisError {
    #[error("malformed sentence: {0}")]
    MalformedSentence(&'static str),
    #[error("checksum mismatch: sentence says {expected:02X}, computed {computed:02X}")]
    ChecksumMismatch { expected: u8, computed: u8 },
    #[error("invalid payload character {0:?}")]
    InvalidCharacter(char),
    #[error("incomplete multi-fragment message")]
    IncompleteMessage,
    #[error("conflicting fragments for one message")]
    ConflictingFragments,
    #[error("message type {found}, expected {expected}")]
    WrongMessageType { expected: &'static str, found: u8 },
    #[error("unsupported message type {0}")]
    UnsupportedMessageType(u8),
    #[error("payload too short: need {needed} bits, have {available}")]
    TruncatedPayload { needed: usize, available: usize },
}

/// A decoded message of a supported type.
#[derive(Debug, Clone, PartialEq)]
pub enum AisMessage {
    Dynamic(DynamicAisReport),
    Static(StaticAisReport),
}

impl AisMessage {
    pub fn mmsi(&self) -> u32 {
        match self {
            Self::Dynamic(r) => r.mmsi,
            Self::Static(r) => r.mmsi,
        }
    }
}

/// Decodes an assembled payload of type 1, 2, 3, 5 or 18.
pub fn decode(bits: &BitString, scaling: PositionScaling) -> Result<AisMessage, AisError> {
    match decode::message_type(bits)? {
        1..=3 | 18 => decode_dynamic(bits, scaling).map(AisMessage::Dynamic),
        5 => decode_static(bits).map(AisMessage::Static),
        t => Err(AisError::UnsupportedMessageType(t)),
    }
}

/// A decoded message with the time it completed.
#[derive(Debug, Clone, PartialEq)]
pub struct TimedMessage {
    pub message: AisMessage,
    /// Receive time from the line, if it carried one.
    pub received: Option<f64>,
}

/// Line-at-a-time decoder for one stream.
#[derive(Debug, Default)]
pub struct AisStream {
    assembler: FragmentAssembler,
    scaling: PositionScaling,
    // Clock for fragment timeouts when lines carry no time.
    clock: f64,
}

impl AisStream {
    pub fn new(scaling: PositionScaling, fragment_timeout: f64) -> Self {
        Self { assembler: FragmentAssembler::new(fragment_timeout), scaling, clock: 0.0 }
    }

    /// Feeds one line. `fallback_time` is used for fragment timeouts when the
    /// line has no timestamp of its own. Returns the message the line
    /// completes, if any, plus any partial messages that timed out.
    pub fn push_line(
        &mut self,
        line: &str,
        fallback_time: Option<f64>,
    ) -> (Result<Option<TimedMessage>, AisError>, Vec<AisError>) {
        let parsed = match parse_line(line) {
            Ok(p) => p,
            Err(e) => return (Err(e), Vec::new()),
        };
        if let Some(t) = parsed.received.or(fallback_time) {
            self.clock = self.clock.max(t);
        }
        let expired = self.assembler.expire(self.clock);
        let result = self
            .assembler
            .push(parsed.sentence, self.clock)
            .and_then(|m| m.map(|m| decode(&m.bits, self.scaling)).transpose())
            .map(|m| m.map(|message| TimedMessage { message, received: parsed.received }));
        (result, expired)
    }
}
