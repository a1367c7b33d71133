#![no_main]

use geotrack::ais::{AisStream, PositionScaling};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    let mut stream = AisStream::new(PositionScaling::Itu, 30.0);
    for (k, line) in text.lines().enumerate() {
        let _ = stream.push_line(line, Some(k as f64));
    }
});
