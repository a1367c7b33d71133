//! Multi-fragment message reassembly.

use super::bits::{dearmor, BitString};
use super::sentence::NmeaSentence;
use super::AisError;
use std::collections::BTreeMap;

/// Default time a partial message may wait for its remaining fragments.
pub const DEFAULT_FRAGMENT_TIMEOUT: f64 = 30.0;

/// Concatenates the payload bits of a complete fragment set in index order.
/// The caller decides which sentences belong together; sequence ids and
/// talkers are not compared.
pub fn assemble_fragments(sentences: &[NmeaSentence]) -> Result<BitString, AisError> {
    let first = sentences.first().ok_or(AisError::IncompleteMessage)?;
    let count = first.fragment_count as usize;
    let mut slots: Vec<Option<&NmeaSentence>> = vec![None; count];
    for s in sentences {
        if s.fragment_count != first.fragment_count {
            return Err(AisError::ConflictingFragments);
        }
        if s.fragment_index == 0 || s.fragment_index as usize > count {
            return Err(AisError::MalformedSentence("fragment index out of range"));
        }
        let slot = &mut slots[s.fragment_index as usize - 1];
        match slot {
            Some(prev) if prev.payload != s.payload || prev.fill_bits != s.fill_bits => {
                return Err(AisError::ConflictingFragments)
            }
            _ => *slot = Some(s),
        }
    }
    let mut bits = BitString::default();
    for slot in slots {
        let s = slot.ok_or(AisError::IncompleteMessage)?;
        bits.extend(&dearmor(&s.payload, s.fill_bits)?);
    }
    Ok(bits)
}

/// A fully reassembled payload.
#[derive(Debug, Clone, PartialEq)]
pub struct AssembledMessage {
    pub bits: BitString,
    pub channel: Option<char>,
    /// Time of the fragment that completed the message.
    pub time: f64,
}

#[derive(Debug)]
struct Pending {
    started: f64,
    fragments: Vec<NmeaSentence>,
}

type GroupKey = (Option<u8>, Option<char>);

/// Stateful reassembler for one input stream.
#[derive(Debug)]
pub struct FragmentAssembler {
    timeout: f64,
    pending: BTreeMap<GroupKey, Pending>,
}

impl Default for FragmentAssembler {
    fn default() -> Self {
        Self::new(DEFAULT_FRAGMENT_TIMEOUT)
    }
}

impl FragmentAssembler {
    pub fn new(timeout: f64) -> Self {
        Self { timeout, pending: BTreeMap::new() }
    }

    pub fn pending_count(&self) -> usize {
        self.pending.len()
    }

    /// Drops partial messages older than the timeout, one
    /// `IncompleteMessage` per group dropped.
    pub fn expire(&mut self, now: f64) -> Vec<AisError> {
        let timeout = self.timeout;
        let before = self.pending.len();
        self.pending.retain(|_, p| now - p.started <= timeout);
        vec![AisError::IncompleteMessage; before - self.pending.len()]
    }

    /// Adds one fragment received at `now`. Returns the payload once its
    /// last fragment arrives. A fragment that contradicts its group (count,
    /// or a different payload at an index already held) discards the group
    /// and starts a new one from this fragment.
    pub fn push(&mut self, s: NmeaSentence, now: f64) -> Result<Option<AssembledMessage>, AisError> {
        if s.fragment_count == 1 {
            let bits = dearmor(&s.payload, s.fill_bits)?;
            return Ok(Some(AssembledMessage { bits, channel: s.channel, time: now }));
        }
        // Validate the armoring before the fragment is held.
        dearmor(&s.payload, s.fill_bits)?;
        let key = (s.sequence_id, s.channel);
        let channel = s.channel;
        let mut outcome = Ok(None);
        match self.pending.get_mut(&key) {
            Some(p) if now - p.started > self.timeout => {
                outcome = Err(AisError::IncompleteMessage);
                *p = Pending { started: now, fragments: vec![s] };
            }
            Some(p) => {
                let conflict = p.fragments[0].fragment_count != s.fragment_count
                    || p.fragments.iter().any(|f| {
                        f.fragment_index == s.fragment_index && (f.payload != s.payload || f.fill_bits != s.fill_bits)
                    });
                if conflict {
                    outcome = Err(AisError::ConflictingFragments);
                    *p = Pending { started: now, fragments: vec![s] };
                } else if !p.fragments.iter().any(|f| f.fragment_index == s.fragment_index) {
                    p.fragments.push(s);
                }
            }
            None => {
                self.pending.insert(key, Pending { started: now, fragments: vec![s] });
            }
        }
        if outcome.is_err() {
            return outcome;
        }
        let complete = self
            .pending
            .get(&key)
            .is_some_and(|p| p.fragments.len() == p.fragments[0].fragment_count as usize);
        if complete {
            let p = self.pending.remove(&key).expect("group present");
            let bits = assemble_fragments(&p.fragments)?;
            return Ok(Some(AssembledMessage { bits, channel, time: now }));
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ais::sentence::parse_sentence;

    const A: &str = "!AIVDM,2,1,4,A,55O0W7`00001L@gCWGA2uItLth@DqtL5@F22220j1h742t0Ht0000000,0*08";
    const B: &str = "!AIVDM,2,2,4,A,000000000000000,2*20";

    fn s(line: &str) -> NmeaSentence {
        parse_sentence(line).unwrap()
    }

    #[test]
    fn single_fragment_passes_through() {
        let line = "!AIVDM,1,1,,B,15M67FC000G?ufbE`FepT@3n00Sa,0*5C";
        let mut asm = FragmentAssembler::default();
        let out = asm.push(s(line), 0.0).unwrap().unwrap();
        assert_eq!(out.bits, dearmor("15M67FC000G?ufbE`FepT@3n00Sa", 0).unwrap());
    }

    #[test]
    fn order_independent() {
        let fwd = assemble_fragments(&[s(A), s(B)]).unwrap();
        let rev = assemble_fragments(&[s(B), s(A)]).unwrap();
        assert_eq!(fwd, rev);
        assert_eq!(fwd.len(), 56 * 6 + 15 * 6 - 2);
        let mut asm = FragmentAssembler::default();
        assert_eq!(asm.push(s(B), 0.0).unwrap(), None);
        assert_eq!(asm.push(s(A), 1.0).unwrap().unwrap().bits, fwd);
        assert_eq!(asm.pending_count(), 0);
    }

    #[test]
    fn missing_fragment() {
        assert_eq!(assemble_fragments(&[s(A)]), Err(AisError::IncompleteMessage));
        assert_eq!(assemble_fragments(&[]), Err(AisError::IncompleteMessage));
    }

    #[test]
    fn timeout_expires_group() {
        let mut asm = FragmentAssembler::default();
        asm.push(s(A), 0.0).unwrap();
        assert!(asm.expire(30.0).is_empty());
        assert_eq!(asm.expire(30.5), vec![AisError::IncompleteMessage]);
        assert_eq!(asm.push(s(B), 31.0).unwrap(), None);
    }

    #[test]
    fn late_fragment_after_timeout() {
        let mut asm = FragmentAssembler::default();
        asm.push(s(A), 0.0).unwrap();
        assert_eq!(asm.push(s(B), 45.0), Err(AisError::IncompleteMessage));
        assert_eq!(asm.pending_count(), 1);
    }

    #[test]
    fn conflicting_fragments() {
        let other = {
            let body = "AIVDM,3,2,4,A,000000000000000,2";
            format!("!{}*{:02X}", body, crate::ais::sentence::nmea_checksum(body.as_bytes()))
        };
        assert_eq!(assemble_fragments(&[s(A), s(&other)]), Err(AisError::ConflictingFragments));
        let mut asm = FragmentAssembler::default();
        asm.push(s(A), 0.0).unwrap();
        assert_eq!(asm.push(s(&other), 1.0), Err(AisError::ConflictingFragments));
    }

    #[test]
    fn duplicate_fragment_is_ignored() {
        let mut asm = FragmentAssembler::default();
        asm.push(s(A), 0.0).unwrap();
        assert_eq!(asm.push(s(A), 0.5).unwrap(), None);
        assert!(asm.push(s(B), 1.0).unwrap().is_some());
    }
}
