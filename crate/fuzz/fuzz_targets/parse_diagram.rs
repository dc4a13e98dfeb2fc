#![no_main]

use libfuzzer_sys::fuzz_target;
use spectre_core::descriptors::{diagram_to_json, parse_diagram};

fuzz_target!(|data: &[u8]| {
    if let Ok(d) = parse_diagram(data) {
        // canonical output is a fixed point
        let text = diagram_to_json(&d);
        let back = parse_diagram(text.as_bytes()).expect("canonical diagram JSON parses");
        assert_eq!(diagram_to_json(&back), text);
    }
});
