use std::path::PathBuf;
use std::process::{Command, Output};

use nodal_ic::monodromy::IcStalkReport;
use nodal_ic::points::ConditionsReport;
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nodal-ic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Fresh scratch directory per test.
fn scratch(test: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nodal-ic-cli-{}-{test}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

const DOUBLED_CYCLE: &str = r#"{
  "pairing": [[0,1,0,0],[-1,0,0,0],[0,0,0,1],[0,0,-1,0]],
  "cycles": [[1,0,0,0],[1,0,0,0]],
  "h_ambient": 0
}"#;

#[test]
fn ic_stalk_of_a_repeated_cycle() {
    let dir = scratch("ic");
    let input = dir.join("m.json");
    std::fs::write(&input, DOUBLED_CYCLE).unwrap();
    let o = bin(&["ic-stalk", "--input", input.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r: IcStalkReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((r.h0, r.h1, r.defect), (3, 1, 1));

    let table = bin(&["ic-stalk", "--input", input.to_str().unwrap(), "--sign", "+1"]);
    assert_eq!(table.status.code(), Some(0));
    assert!(stdout(&table).contains("check:"));
}

#[test]
fn koszul_chase_table() {
    let o = bin(&["koszul", "--n", "2", "--degrees", "3,3", "--twist", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("vanishes: true"), "{}", stdout(&o));

    let o = bin(&["koszul", "--n", "2", "--degrees", "4,4", "--twist", "5", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["chase"]["vanishes"], Value::Bool(false));
    assert_eq!(v["chase"]["exact_h1"], Value::from(1));
}

#[test]
fn grid_document_feeds_points() {
    let dir = scratch("grid");
    let grid = dir.join("grid25.json");
    let o = bin(&["grid", "--n", "2", "--k", "5", "--json", "--out", grid.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("wrote "));

    let o = bin(&["points", "--input", grid.to_str().unwrap(), "--degree", "5", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r: ConditionsReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((r.delta, r.rank, r.h1_ideal), (16, 15, 1));
    assert!(!r.independent);
}

#[test]
fn chase_reads_a_resolution_document() {
    let dir = scratch("chase");
    let res = dir.join("en.json");
    let o = bin(&["eagon-northcott", "--n", "2", "--quadrics", "3", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    std::fs::write(&res, v["resolution"].to_string()).unwrap();
    let o = bin(&["chase", "--input", res.to_str().unwrap(), "--twist", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vanishes"], Value::Bool(false));
}

#[test]
fn malformed_input_exits_1() {
    let dir = scratch("malformed");
    let input = dir.join("bad.json");
    std::fs::write(&input, "{ \"pairing\": [[0,1],[-1,0]], ").unwrap();
    let o = bin(&["ic-stalk", "--input", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());

    std::fs::write(&input, r#"{"pairing": [[0,1],[-1,0]], "cycles": [[0.5, 1]], "h_ambient": 0}"#).unwrap();
    assert_eq!(bin(&["ic-stalk", "--input", input.to_str().unwrap()]).status.code(), Some(1));

    assert_eq!(bin(&["points", "--input", "/nonexistent/nowhere.json", "--degree", "1"]).status.code(), Some(1));
    assert_eq!(bin(&["koszul", "--n", "two"]).status.code(), Some(1));
}

#[test]
fn violated_preconditions_exit_2() {
    let dir = scratch("precondition");
    let input = dir.join("m.json");
    std::fs::write(&input, r#"{"pairing": [[0,1],[-1,0]], "cycles": [[0,0]], "h_ambient": 0}"#).unwrap();
    let o = bin(&["ic-stalk", "--input", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("zero vanishing cycle"));

    std::fs::write(&input, r#"{"pairing": [[0,1],[1,0]], "cycles": [[1,0]], "h_ambient": 0}"#).unwrap();
    let o = bin(&["ic-stalk", "--input", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not skew"));
}

#[test]
fn json_roundtrips_into_the_same_record() {
    let dir = scratch("roundtrip");
    let input = dir.join("m.json");
    std::fs::write(&input, DOUBLED_CYCLE).unwrap();
    let o = bin(&["ic-stalk", "--input", input.to_str().unwrap(), "--json"]);
    let r: IcStalkReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", stdout(&o));
}

#[test]
fn nothing_written_without_out() {
    let dir = scratch("no-out");
    let o = Command::new(env!("CARGO_BIN_EXE_nodal-ic"))
        .args(["grid", "--n", "2", "--k", "3", "--degree", "3", "--json"])
        .current_dir(&dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 0);
}

#[test]
fn paper_examples_verify() {
    let o = bin(&["paper-examples", "--grid-cap", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("all cells match"));
}

#[test]
fn help_exits_0() {
    let o = bin(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ic-stalk"));
}
