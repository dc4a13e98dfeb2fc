#![no_main]

use libfuzzer_sys::fuzz_target;
use spectre_core::graph::{graph_to_json, parse_graph};

fuzz_target!(|data: &[u8]| {
    if let Ok(g) = parse_graph(data) {
        let text = graph_to_json(&g);
        let back = parse_graph(text.as_bytes()).expect("canonical graph JSON parses");
        assert_eq!(back, g);
    }
});
