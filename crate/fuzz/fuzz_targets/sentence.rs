#![no_main]

use geotrack::ais::{parse_line, parse_sentence, verify_checksum};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(line) = std::str::from_utf8(data) else { return };
    let _ = verify_checksum(line);
    if let Ok(s) = parse_sentence(line) {
        assert!(s.fragment_index >= 1 && s.fragment_index <= s.fragment_count);
    }
    let _ = parse_line(line);
});
