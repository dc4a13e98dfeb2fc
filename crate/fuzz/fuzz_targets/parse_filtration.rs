#![no_main]

use libfuzzer_sys::fuzz_target;
use spectre_core::filtration::{filtration_to_json, parse_filtration};

fuzz_target!(|data: &[u8]| {
    if let Ok(f) = parse_filtration(data) {
        let text = filtration_to_json(&f);
        let back = parse_filtration(text.as_bytes()).expect("canonical filtration JSON parses");
        assert_eq!(filtration_to_json(&back), text);
    }
});
