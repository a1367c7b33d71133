#![no_main]

use geotrack::ais::{dearmor, decode, PositionScaling};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|input: (u8, &str)| {
    let (fill, payload) = input;
    let Ok(bits) = dearmor(payload, fill % 8) else { return };
    let (text, fill_back) = bits.armor();
    assert_eq!(dearmor(&text, fill_back).ok(), Some(bits.clone()));
    for scaling in [PositionScaling::Itu, PositionScaling::Compat] {
        let _ = decode(&bits, scaling);
    }
});
