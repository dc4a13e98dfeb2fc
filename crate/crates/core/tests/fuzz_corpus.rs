//! Replays the checked-in fuzz seeds through the same invariants as the
//! fuzz targets.

use std::fs;
use std::path::PathBuf;

use spectre_core::descriptors::{diagram_to_json, parse_diagram};
use spectre_core::filtration::{filtration_to_json, parse_filtration};
use spectre_core::graph::{graph_to_json, parse_graph};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn graph_seeds() {
    let mut accepted = 0;
    for (name, data) in seeds("parse_graph") {
        if let Ok(g) = parse_graph(&data) {
            accepted += 1;
            assert_eq!(parse_graph(graph_to_json(&g).as_bytes()).unwrap(), g, "{name}");
        }
    }
    assert!(accepted >= 3);
    assert!(parse_graph(br#"{"color_set":["red"],"vertices":[{"id":0,"color":"red"}],"edges":[[0,0]]}"#).is_err());
}

#[test]
fn filtration_seeds() {
    let mut accepted = 0;
    for (name, data) in seeds("parse_filtration") {
        if let Ok(f) = parse_filtration(&data) {
            accepted += 1;
            let text = filtration_to_json(&f);
            assert_eq!(filtration_to_json(&parse_filtration(text.as_bytes()).unwrap()), text, "{name}");
        }
    }
    assert!(accepted >= 2);
}

#[test]
fn diagram_seeds() {
    let mut accepted = 0;
    for (name, data) in seeds("parse_diagram") {
        if let Ok(d) = parse_diagram(&data) {
            accepted += 1;
            let text = diagram_to_json(&d);
            assert_eq!(diagram_to_json(&parse_diagram(text.as_bytes()).unwrap()), text, "{name}");
        }
    }
    assert!(accepted >= 5);
}

#[test]
fn truncated_seeds_never_panic() {
    for target in ["parse_graph", "parse_filtration", "parse_diagram"] {
        for (_, data) in seeds(target) {
            for cut in 0..data.len() {
                let part = &data[..cut];
                let _ = parse_graph(part);
                let _ = parse_filtration(part);
                let _ = parse_diagram(part);
            }
        }
    }
}
