#![no_main]

use geotrack::ais::{assemble_fragments, parse_sentence};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let sentences: Vec<_> = text.lines().filter_map(|l| parse_sentence(l).ok()).collect();
    let _ = assemble_fragments(&sentences);
});
