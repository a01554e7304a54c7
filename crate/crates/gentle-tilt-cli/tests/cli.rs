use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gentle-tilt")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let (code, out) = run(&all);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

fn without_exit_code(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("exit_code");
    v
}

#[test]
fn reproduce_annulus_cut_succeeds() {
    let (code, out) = run(&["reproduce", "fig9"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("A (fig2)") && out.contains("A cut along gamma"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn every_corpus_entry_reproduces() {
    for id in gentle_tilt::corpus::ids() {
        let (code, v) = run_json(&["reproduce", id]);
        assert_eq!(code, 0, "{id}: {v}");
        assert_eq!(v["reproduced"], true);
    }
}

#[test]
fn annulus_module_has_three_complements() {
    let (code, v) = run_json(&["complements", "--corpus", "fig11"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 3);
}

#[test]
fn torus_module_does_not_complete_within_bound() {
    let (code, v) = run_json(&["complete", "--corpus", "fig12-n3", "--module", "gamma1", "--max-len", "20"]);
    assert_eq!(code, 3);
    assert_eq!(v["result"], "NotFoundWithinBound");
    let (code, out) = run(&["complete", "--corpus", "fig12-n3", "--module", "gamma1", "--max-len", "20"]);
    assert_eq!(code, 3);
    assert!(out.contains("NotFoundWithinBound"));
}

#[test]
fn completion_found_on_a_disk() {
    let (code, v) = run_json(&["complete", "--corpus", "rank2-disk", "--module", "p1"]);
    assert_eq!(code, 0);
    assert_eq!(v["tilting_module"].as_array().unwrap().len(), 2);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(run(&["validate", "--corpus", "no-such-entry"]).0, 2);
    assert_eq!(run(&["pd", "zz", "--corpus", "fig1"]).0, 2);
    assert_eq!(run(&["verify", "--suite", "nope"]).0, 2);
    assert_eq!(run(&["no-such-command"]).0, 2);
    let dir = std::env::temp_dir().join(format!("gentle-tilt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"arcs":["l"],"polygons":[{"kind":"boundary","edges":[{"arc":"l","dir":"sideways"}]}]}"#).unwrap();
    assert_eq!(run(&["validate", bad.to_str().unwrap()]).0, 2);
}

#[test]
fn property_violations_exit_one() {
    assert_eq!(run(&["tilting", "1_1", "--corpus", "rank2-disk"]).0, 1);
    // simple at the source and projective at the sink of 1 -> 2: Ext^1 between them
    let (code, v) = run_json(&["pretilting", "1_1", "1_2", "--corpus", "rank2-disk"]);
    assert_eq!((code, v["holds"].clone()), (1, Value::Bool(false)), "{v}");
}

#[test]
fn ext_and_pd_report_both_sides() {
    let (code, v) = run_json(&["ext", "1_1", "1_2", "--corpus", "rank2-disk"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["agree"], true);
    let (code, v) = run_json(&["pd", "1_1", "--corpus", "rank2-disk"]);
    assert_eq!(code, 0);
    assert_eq!(v["pd"], 1);
}

#[test]
fn algebra_and_surface_files_round_trip() {
    let dir = std::env::temp_dir().join(format!("gentle-tilt-rt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let entry: Value = serde_json::from_str(&gentle_tilt::corpus::entry_text("fig2").unwrap()).unwrap();
    let surface_path = dir.join("surface.json");
    std::fs::write(&surface_path, serde_json::to_string(&entry["surface"]).unwrap()).unwrap();
    let (code, alg) = run_json(&["algebra", surface_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let alg = without_exit_code(alg);
    let alg_path = dir.join("algebra.json");
    std::fs::write(&alg_path, serde_json::to_string(&alg).unwrap()).unwrap();
    let (code, _) = run_json(&["validate", alg_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let parsed = gentle_tilt::io::algebra_from_json(&serde_json::to_string(&alg).unwrap()).unwrap();
    let again: Value = serde_json::from_str(&gentle_tilt::io::algebra_to_json(&parsed)).unwrap();
    assert_eq!(again, alg);
}

#[test]
fn cut_json_round_trips() {
    let (code, v) = run_json(&["cut", "--arc", "gamma", "--corpus", "fig2"]);
    assert_eq!(code, 0);
    let v = without_exit_code(v);
    assert!(v.get("cut").is_some() && v.get("polygons").is_some());
    let parsed: gentle_tilt::cutting::CutJson = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(serde_json::to_value(&parsed).unwrap(), v);
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("gentle-tilt-dot-{}.dot", std::process::id()));
    let (code, stdout) = run(&["emit-dot", "--corpus", "fig12-n3", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.matches("style=dotted").count(), 3);
    let (_, again) = run(&["emit-dot", "--corpus", "fig12-n3"]);
    assert_eq!(again, text);
}

#[test]
fn tikz_and_dissection_views() {
    let (code, out) = run(&["emit-tikz", "--corpus", "fig2", "--dissection"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("\\begin{tikzpicture}"));
    let (code, out) = run(&["emit-dot", "--corpus", "fig2", "--arc", "gamma"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("\" -> \"").count() - out.matches("style=dotted").count(), 6);
}

#[test]
fn cut_algebra_agrees_on_the_appendix_instance() {
    let (code, v) = run_json(&["cut-algebra", "--arc", "omega", "--corpus", "appendix"]);
    assert_eq!(code, 0);
    assert_eq!(v["agrees_with_surgery"], true);
}

#[test]
fn corpus_directory_override() {
    let dir = std::env::temp_dir().join(format!("gentle-tilt-corpus-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut entry: Value = serde_json::from_str(&gentle_tilt::corpus::entry_text("rank2-disk").unwrap()).unwrap();
    entry["description"] = Value::String("overridden copy".into());
    std::fs::write(dir.join("rank2-disk.json"), serde_json::to_string(&entry).unwrap()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gentle-tilt"))
        .args(["reproduce", "rank2-disk"])
        .env("GENTLE_TILT_CORPUS", &dir)
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("overridden copy"));
}

#[test]
fn quick_verify_suite() {
    let (code, v) = run_json(&["verify", "--suite", "cut-invariants", "--seed", "7"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["checks"].as_array().unwrap().len(), 3);
}
