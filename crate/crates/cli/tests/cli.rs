use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn spectre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectre")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap().trim().to_string()
}

fn square(kind: &str) -> Output {
    let graph = data("square_graph.json");
    let filt = format!("file:{}", data("square_spec.json").display());
    spectre(&["diagram", graph.to_str().unwrap(), "--filtration", &filt, "--kind", kind])
}

#[test]
fn square_spectre_diagram() {
    let o = square("spectre");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        r#"{"kind":"SpectRe","dim0":[[0.0,1.0,2.0,1.0,[2.0]],[0.0,2.0,1.0,2.0,[2.0]],[0.0,3.0,2.0,1.0,[2.0,2.0,4.0]],[0.0,"inf",1.0,2.0,[2.0,2.0,4.0]]],"dim1":[[1.0,3.0,0.0,0.0,[2.0,2.0,4.0]]]}"#
    );
}

#[test]
fn square_rephine_diagram() {
    let o = square("rephine");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        r#"{"kind":"RePHINE","dim0":[[0.0,1.0,2.0,1.0],[0.0,2.0,1.0,2.0],[0.0,3.0,2.0,1.0],[0.0,"inf",1.0,2.0]],"dim1":[[1.0,3.0,0.0,0.0]]}"#
    );
}

#[test]
fn csv_output_has_one_row_per_tuple() {
    let graph = data("square_graph.json");
    let filt = format!("file:{}", data("square_spec.json").display());
    let o = spectre(&["diagram", graph.to_str().unwrap(), "--filtration", &filt, "--kind", "ls", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().any(|l| l == "1,1,3,0,0,2 2 4"));
}

#[test]
fn missing_filtration_file_is_input_error() {
    let graph = data("square_graph.json");
    let o =
        spectre(&["diagram", graph.to_str().unwrap(), "--filtration", "file:/nonexistent.json", "--kind", "spectre"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn malformed_graph_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"color_set":["red"],"vertices":[{"id":3,"color":"red"}],"edges":[]}"#).unwrap();
    let o = spectre(&["diagram", bad.to_str().unwrap(), "--filtration", "degree-forman", "--kind", "ph0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn distance_of_file_to_itself_is_zero() {
    let a = data("witness_f_spectre.json");
    let o = spectre(&["distance", a.to_str().unwrap(), a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), r#"{"value":0.0,"matching":[[0,0],[1,1],[2,2],[3,3]]}"#);
}

#[test]
fn instability_pair_distance_exceeds_constant() {
    let a = data("witness_f_spectre.json");
    let b = data("witness_g_spectre.json");
    let o = spectre(&["distance", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let value = v["value"].as_f64().unwrap();
    assert!(value >= 4.0 + 2.0 * 2f64.sqrt(), "{value}");
    assert_eq!(v["matching"].as_array().unwrap().len(), 4);
}

#[test]
fn distance_kind_mismatch_is_input_error() {
    let a = data("witness_g_rephine.json");
    let b = data("witness_g_spectre.json");
    let o = spectre(&["distance", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generated_diagrams_round_trip_through_distance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let graph = data("witness_path.json");
    let filt = format!("file:{}", data("witness_f.json").display());
    let o = spectre(&[
        "diagram",
        graph.to_str().unwrap(),
        "--filtration",
        &filt,
        "--kind",
        "spectre",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(data("witness_f_spectre.json")).unwrap());
}

#[test]
fn verify_suites_pass() {
    for (suite, count) in [("lemma_b1", "100"), ("isomorphism", "50"), ("metric_axioms", "20")] {
        let o = spectre(&["verify", suite, "--count", count, "--seed", "1"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["passed"], true);
        assert_eq!(v["checked"].as_u64().unwrap(), count.parse::<u64>().unwrap());
    }
}

// The global RePHINE bound does not hold when a perturbation swaps the
// order of two vertex colors; the suite must report those samples.
#[test]
fn stability_violations_are_reported_and_replayable() {
    let o = spectre(&["verify", "stability", "--count", "200", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let failures = v["failures"].as_array().unwrap();
    assert!(!failures.is_empty());
    let dir = tempfile::tempdir().unwrap();
    for (i, f) in failures.iter().enumerate() {
        for m in f["messages"].as_array().unwrap() {
            assert!(m.as_str().unwrap().starts_with("RePHINE:"), "{m}");
        }
        let path = dir.path().join(format!("replay-{i}.json"));
        std::fs::write(&path, f["replay"].to_string()).unwrap();
        let again = spectre(&["verify", "stability", "--replay", path.to_str().unwrap()]);
        assert_eq!(again.status.code(), Some(1));
        let r: serde_json::Value = serde_json::from_str(&stdout(&again)).unwrap();
        assert_eq!(r["failures"][0]["messages"], f["messages"]);
    }
}

#[test]
fn verify_replay_file_for_wrong_suite_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = spectre(&["verify", "lemma_b1", "--count", "1", "--seed", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let bad = dir.path().join("replay.json");
    std::fs::write(&bad, "{}").unwrap();
    let o = spectre(&["verify", "stability", "--replay", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scheduled_mode_marks_skipped_events() {
    let graph = data("square_graph.json");
    let o = spectre(&[
        "diagram",
        graph.to_str().unwrap(),
        "--filtration",
        "degree-forman",
        "--kind",
        "spectre",
        "--spectrum",
        "scheduled",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("\"skipped\""));
    assert!(text.contains("\"meta\""));
}

#[test]
fn bad_schedule_fraction_is_input_error() {
    let graph = data("square_graph.json");
    let o = spectre(&[
        "diagram",
        graph.to_str().unwrap(),
        "--filtration",
        "degree-forman",
        "--kind",
        "spectre",
        "--spectrum",
        "scheduled",
        "--sched-fraction",
        "1.5",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn discriminate_builtin_corpus_csv() {
    let filt = format!("file:{}", data("counterexample_spec.json").display());
    let o = spectre(&[
        "discriminate",
        "builtin:star-path",
        "--filtration",
        &filt,
        "--kind",
        "rephine",
        "--kind",
        "spectre",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "pair_id,graph_a,graph_b,descriptor,separated\n0,star,path,rephine,false\n0,star,path,spectre,true"
    );
}

#[test]
fn discriminate_reads_directories() {
    let o = spectre(&["discriminate", data("").to_str().unwrap(), "--kind", "ph0"]);
    // the data directory mixes graphs with filtrations and diagrams
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    for name in ["square_graph.json", "witness_path.json"] {
        std::fs::copy(data(name), dir.path().join(name)).unwrap();
    }
    let o = spectre(&["discriminate", dir.path().to_str().unwrap(), "--kind", "ph0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["graphs"], 2);
}
