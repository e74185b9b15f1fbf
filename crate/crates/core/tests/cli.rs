//! End-to-end runs of the `lcycle` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lcycle::io::{parse_edge_list, ProbeDocument, ReportDocument, Witness, WitnessDocument, FORMAT_VERSION};
use lcycle::verify::{verify_gadget, verify_wall, VerifyMode, VerifyOptions};
use serde_json::Value;
use tempfile::TempDir;

fn lcycle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcycle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Typed read; going through `Value` would turn u128 fields into floats.
fn read<T: serde::de::DeserializeOwned>(path: &Path) -> T {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_schema(schema_file: &str, instance: &Value) {
    let schema_path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schema").join(schema_file);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{schema_file}: {errors:#?}");
}

fn wall(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("wall.json");
    let out = lcycle(&["construct-wall", "--set", "powers:10", "--ell", "1", "-o", p(&path)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn gadget(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("gadget.json");
    let out = lcycle(&["construct-gadget", "--set", "explicit:10,100,305,432,1000", "-o", p(&path)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn wall_round_trip_matches_in_memory_verification() {
    let dir = TempDir::new().unwrap();
    let witness_path = wall(&dir);
    let report_path = dir.path().join("report.json");

    let out = lcycle(&["verify", p(&witness_path), "-o", p(&report_path)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS"));

    let doc: WitnessDocument = read(&witness_path);
    let Witness::Wall(w) = &doc.witness else { panic!("expected a wall") };
    let expected = verify_wall(w, &VerifyOptions::default()).unwrap();
    let got: ReportDocument = read(&report_path);
    assert_eq!(got.report.without_timings(), expected.without_timings());

    assert_schema("witness.v1.schema.json", &json(&witness_path));
    assert_schema("report.v1.schema.json", &json(&report_path));
}

#[test]
fn gadget_round_trip_matches_in_memory_verification() {
    let dir = TempDir::new().unwrap();
    let witness_path = gadget(&dir);
    let report_path = dir.path().join("report.json");

    let out = lcycle(&["verify", p(&witness_path), "--mode", "certificate", "--format", "json", "-o", p(&report_path)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim_end(), std::fs::read_to_string(&report_path).unwrap().trim_end());

    let doc: WitnessDocument = read(&witness_path);
    let Witness::Gadget(w) = &doc.witness else { panic!("expected a gadget") };
    let opts = VerifyOptions {
        mode: VerifyMode::Certificate,
        ..VerifyOptions::default()
    };
    let got: ReportDocument = read(&report_path);
    assert_eq!(got.report.without_timings(), verify_gadget(w, &opts).unwrap().without_timings());

    assert_schema("witness.v1.schema.json", &json(&witness_path));
    assert_schema("report.v1.schema.json", &json(&report_path));
}

#[test]
fn documents_carry_version_and_config() {
    let dir = TempDir::new().unwrap();
    let witness = json(&wall(&dir));
    assert_eq!(witness["format_version"], FORMAT_VERSION);
    assert_eq!(witness["config"]["command"]["construct-wall"]["set"], "powers:10");
    assert_eq!(witness["config"]["command"]["construct-wall"]["ell"], 1);
}

#[test]
fn construction_is_deterministic() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let (x, y): (WitnessDocument, WitnessDocument) = (read(&gadget(&a)), read(&gadget(&b)));
    assert_eq!(x.witness, y.witness);
}

#[test]
fn tampered_wall_fails_verification() {
    let dir = TempDir::new().unwrap();
    let path = wall(&dir);
    let mut tampered: WitnessDocument = read(&path);
    let Witness::Wall(w) = &mut tampered.witness else { panic!("expected a wall") };
    w.lonely[0] += 1;
    std::fs::write(&path, serde_json::to_string(&tampered).unwrap()).unwrap();

    let out = lcycle(&["verify", p(&path), "--mode", "certificate"]);
    assert_eq!(code(&out), 1, "{}", stdout(&out));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&lcycle(&["construct-wall", "--set", "cubes"])), 2);
    assert_eq!(code(&lcycle(&["construct-gadget", "--set", "primes", "--t", "0"])), 2);
    assert_eq!(code(&lcycle(&["verify", p(&dir.path().join("missing.json"))])), 2);
    assert_eq!(code(&lcycle(&["verify"])), 2);

    let path = wall(&dir);
    let mut future: WitnessDocument = read(&path);
    future.format_version = 99;
    std::fs::write(&path, serde_json::to_string(&future).unwrap()).unwrap();
    let out = lcycle(&["verify", p(&path)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("format_version 99"));
}

#[test]
fn exhausted_bounds_exit_3() {
    let out = lcycle(&["construct-wall", "--set", "powers:10", "--search-bound", "1000"]);
    assert_eq!(code(&out), 3);
    let out = lcycle(&["construct-gadget", "--set", "primes", "--x-bound", "50"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn probe_reports_packing_and_hitting() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("k4.txt");
    std::fs::write(&graph, "1 2 1\n1 3 1\n1 4 1\n2 3 1\n2 4 1\n3 4 1\n").unwrap();
    let report = dir.path().join("probe.json");
    let out = lcycle(&["probe", p(&graph), "--set", "explicit:3", "-o", p(&report)]);
    assert_eq!(code(&out), 0);

    let value = json(&report);
    assert_schema("probe.v1.schema.json", &value);
    let probe: ProbeDocument = read(&report);
    assert_eq!(probe.result.l_cycles.len(), 4);
    assert_eq!(probe.result.packing.size, 1);
    assert_eq!(probe.result.hitting.vertices.len(), 2);
}

#[test]
fn edge_export_parses_back() {
    let dir = TempDir::new().unwrap();
    let path = wall(&dir);
    let out = lcycle(&["export", p(&path), "--format", "edges"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("# config: {"));

    let doc: WitnessDocument = read(&path);
    let back = parse_edge_list(&text, "stdout").unwrap();
    let original = doc.witness.graph();
    assert_eq!(back.vertex_count(), original.vertex_count());
    assert!(back.edges().iter().zip(original.edges()).all(|(a, b)| (a.u, a.v, a.weight) == (b.u, b.v, b.weight)));

    let dot = stdout(&lcycle(&["export", p(&path)]));
    assert!(dot.starts_with("// config: {"));
    assert!(dot.contains("graph \"wall\" {"));
}

#[test]
fn density_table_has_a_config_header() {
    let out = lcycle(&["density", "--set", "squares", "--n", "100", "--rows", "4"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config: "));
    assert!(text.contains("100\t10\t0.100000"));
}
