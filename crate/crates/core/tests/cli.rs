use std::path::Path;
use std::process::{Command, Output};

use clforms::cli::format;
use clforms::clsets::{self, ClContext, Level};
use serde_json::Value;

fn clforms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clforms")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn count_examples() {
    let out = clforms(&["count", "--q", "2", "--n", "2", "--l", "2", "--formula", "delta", "--oracle"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!((&v["value"], &v["oracle"], &v["match"]), (&Value::from("2"), &Value::from("2"), &Value::from(true)));

    let out = clforms(&["count", "--q", "2", "--n", "2", "--l", "2", "--formula", "rank_m"]);
    assert_eq!(json(&out)["value"], "10");

    let out = clforms(&["count", "--q", "6", "--n", "2", "--l", "2", "--formula", "delta"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a prime power"));
}

#[test]
fn construct_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = clforms(&["construct", "--q", "2", "--n", "2", "--l", "3", "--all", "--out-dir", path(dir.path())]);
    assert_eq!(code(&out), 0);
    let summary = json(&out);
    let sp = clforms::SpaceParams::new(2, 2, 3).unwrap();
    let ctx = ClContext::new(&sp, Level::Full, 0).unwrap();
    let sets = summary["sets"].as_array().unwrap();
    assert_eq!(sets.len(), clsets::standard_constructions(&sp).unwrap().len());
    for item in sets {
        let file = item["file"].as_str().unwrap();
        let set = format::parse_vertex_set(&std::fs::read_to_string(file).unwrap()).unwrap();
        let expected = serde_json::to_value(ctx.verdict(&set)).unwrap();
        let out = clforms(&["verify", file, "--level", "full"]);
        assert_eq!(code(&out), 0);
        let got = json(&out);
        for key in ["is_cl", "x", "size", "level", "per_definition", "witnesses"] {
            assert_eq!(got[key], expected[key], "{file}: {key}");
        }
        assert_eq!(got["is_cl"], true);
        assert_eq!(got["x"], item["x"]);
    }
}

#[test]
fn verify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "clforms-vertexset v1 q=2 n=2 l=2\n").unwrap();
    let v = json(&clforms(&["verify", path(&empty)]));
    assert_eq!((&v["is_cl"], &v["x"]), (&Value::from(true), &Value::from("0")));

    let odd = dir.path().join("odd.txt");
    std::fs::write(&odd, "clforms-vertexset v1 q=2 n=2 l=2\n0 0 0 0\n1 1 0 1\n0 1 1 1\n").unwrap();
    let out = clforms(&["verify", path(&odd)]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["is_cl"], false);
    assert!(v["witness"].is_object());

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "clforms-vertexset v1 q=2 n=2 l=2\n0 0 0 0\n0 0 0\n").unwrap();
    let out = clforms(&["verify", path(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let out = clforms(&["classify", path(&odd)]);
    assert_eq!(code(&out), 2);
}

#[test]
fn construct_to_stdout_parses() {
    let out = clforms(&[
        "construct",
        "--q",
        "3",
        "--n",
        "2",
        "--l",
        "2",
        "--kind",
        "spread",
        "--seed",
        "1",
        "--transform",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let set = format::parse_vertex_set(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(set.len(), 9);
    let out = clforms(&["construct", "--q", "3", "--n", "2", "--l", "2", "--kind", "nontrivial_family"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn search_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let sets = dir.path().join("sets");
    let base = ["search", "--q", "2", "--n", "2", "--l", "2", "--x", "1"];
    let out = clforms(&[&base[..], &["--threads", "1", "--out", path(&a), "--sets-dir", path(&sets)]].concat());
    assert_eq!(code(&out), 0);
    let out = clforms(&[&base[..], &["--threads", "3", "--out", path(&b)]].concat());
    assert_eq!(code(&out), 0);
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let report: Value = serde_json::from_slice(&ta).unwrap();
    let n = report["sets"].as_array().unwrap().len();
    assert!(n >= 12);
    assert_eq!(std::fs::read_dir(&sets).unwrap().count(), n);
}

#[test]
fn spectra_and_inequalities_exit_codes() {
    let out = clforms(&["spectra", "--q", "2", "--n", "2", "--l", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["all_ok"], true);

    // `W_Σ <= Δ - C` fails on this grid, which is reported as an identity failure
    let out = clforms(&["inequalities", "--grid", "q=2,3;n=2;l=4..6"]);
    assert_eq!(code(&out), 3);
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["lemma442_ok"] == false));
    assert!(rows.iter().filter(|r| r["in_range"] == true).all(|r| r["lemma441_ok"] == true && r["lemma45_ok"] == true));

    let out = clforms(&["inequalities", "--grid", "q=2;n=2"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn caps_exit_4() {
    let out = clforms(&[
        "count",
        "--q",
        "3",
        "--n",
        "3",
        "--l",
        "4",
        "--formula",
        "rank_count",
        "--m",
        "2",
        "--oracle",
        "--budget",
        "100",
    ]);
    assert_eq!(code(&out), 4);
}
