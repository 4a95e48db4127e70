use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn nodecut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nodecut")).args(args).output().expect("spawn nodecut")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn karate_report(dir: &TempDir) -> String {
    let path = dir.path().join("report.json").display().to_string();
    let o = nodecut(&["detect", "--dataset", "karate", "--out", &path]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    path
}

const TWO_TRIANGLES: &str = "a b\nb c\nc a\nc d\nd e\ne f\nf d\n";

#[test]
fn detect_writes_sorted_report() {
    let dir = TempDir::new().unwrap();
    let path = karate_report(&dir);
    let text = fs::read_to_string(&path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["communities"].as_array().unwrap().len(), 7);
    assert_eq!(v["graph"]["source"], "dataset:karate");
    assert_eq!(v["minima_histogram"]["2"], 42);
    assert!(v.get("timing_ms").is_none());
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn timing_is_opt_in() {
    let o = nodecut(&["detect", "--dataset", "karate", "--timing"]);
    assert!(json(&o)["timing_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn jobs_do_not_change_bytes() {
    let a = nodecut(&["detect", "--dataset", "karate", "--jobs", "1"]);
    let b = nodecut(&["detect", "--dataset", "karate", "--jobs", "3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn single_seed_and_trajectories() {
    let dir = TempDir::new().unwrap();
    let traj = dir.path().join("traj");
    let o = nodecut(&["detect", "--dataset", "karate", "--seed", "1,12", "--trajectories", traj.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["seeds_run"], 1);
    assert_eq!(v["trajectories"][0], "seed_1_12.csv");
    let csv = fs::read_to_string(traj.join("seed_1_12.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("step,action,node,psi,size"));
    assert_eq!(lines.next(), Some("0,seed,,4.687500000000e-1,2"));
    assert_eq!(lines.next(), Some("1,record-minimum,,4.687500000000e-1,2"));

    let all = dir.path().join("all");
    let o = nodecut(&["detect", "--dataset", "karate", "--trajectories", all.to_str().unwrap(), "--out", "/dev/null"]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_dir(&all).unwrap().count(), 78);
}

#[test]
fn bad_seed_is_a_usage_error() {
    let o = nodecut(&["detect", "--dataset", "karate", "--seed", "1,10"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).starts_with("error: code=2 kind=parse"), "{}", stderr(&o));
    assert_eq!(code(&nodecut(&["detect", "--dataset", "karate", "--seed", "17"])), 2);
    assert_eq!(code(&nodecut(&["detect", "--dataset", "nope"])), 2);
    assert_eq!(code(&nodecut(&["detect"])), 2);
    assert_eq!(code(&nodecut(&["frobnicate"])), 2);
}

#[test]
fn parse_errors_name_the_line() {
    let dir = TempDir::new().unwrap();
    let loop_file = write(&dir, "loop.txt", "1 2\n# fine\n3 3\n");
    let o = nodecut(&["detect", &loop_file]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert!(err.contains("kind=parse") && err.contains('3'), "{err}");
    assert_eq!(err.lines().count(), 1);

    let weights = write(&dir, "w.txt", "1 2 1.5\n2 3 -1\n");
    assert_eq!(code(&nodecut(&["detect", &weights, "--weighted"])), 2);
    let short = write(&dir, "short.txt", "1\n");
    assert_eq!(code(&nodecut(&["detect", &short])), 2);
}

#[test]
fn missing_file_is_io() {
    let o = nodecut(&["detect", "/nonexistent/graph.txt"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).starts_with("error: code=1 kind=io"));
}

#[test]
fn disconnected_needs_flag() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "split.txt", "1 2\n2 3\n3 1\n4 5\n5 6\n6 4\n6 7\n");
    let o = nodecut(&["detect", &path]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("kind=disconnected"));
    let o = nodecut(&["detect", &path, "--allow-disconnected"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json(&o)["graph"]["connected"], false);
}

#[test]
fn oracle_cap_and_force() {
    assert_eq!(code(&nodecut(&["oracle", "--dataset", "karate"])), 4);
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "t.txt", TWO_TRIANGLES);
    let o = nodecut(&["oracle", &path, "--max-nodes", "5"]);
    assert_eq!(code(&o), 4);
    let o = nodecut(&["oracle", &path, "--max-nodes", "5", "--force"]);
    assert_eq!(code(&o), 0);
    let minima = json(&o)["minima"].as_array().unwrap().len();
    assert_eq!(minima, 2);
}

#[test]
fn oracle_compare_flags_tampered_report() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "t.txt", TWO_TRIANGLES);
    let report = dir.path().join("r.json").display().to_string();
    assert_eq!(code(&nodecut(&["detect", &graph, "--out", &report])), 0);
    let o = nodecut(&["oracle", &graph, "--compare", &report]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json(&o)["compare"]["greedy_subset_of_exact"], true);

    let mut v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    v["communities"][0]["nodes"] = serde_json::json!(["a", "b", "c"]);
    let tampered = write(&dir, "bad.json", &v.to_string());
    let o = nodecut(&["oracle", &graph, "--compare", &tampered]);
    assert_eq!(code(&o), 5);
    assert_eq!(json(&o)["compare"]["greedy_only"][0], serde_json::json!(["a", "b", "c"]));
}

#[test]
fn verify_accepts_detect_output() {
    let dir = TempDir::new().unwrap();
    let report = karate_report(&dir);
    let o = nodecut(&["verify", &report, "--equivalence"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["ok"], true);
    for c in v["communities"].as_array().unwrap() {
        assert!(c["equivalence_residual"].as_f64().unwrap() < 1e-10);
    }
}

#[test]
fn verify_rejects_perturbed_community() {
    let dir = TempDir::new().unwrap();
    let report = karate_report(&dir);
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    // C7 = {1,12} grown by node 2
    let c7 = v["communities"].as_array_mut().unwrap().iter_mut().find(|c| c["name"] == "C7").unwrap();
    c7["nodes"] = serde_json::json!(["1", "12", "2"]);
    let tampered = write(&dir, "bad.json", &serde_json::to_string_pretty(&v).unwrap());
    let o = nodecut(&["verify", &tampered]);
    assert_eq!(code(&o), 5);
    let out = json(&o);
    let row = out["communities"].as_array().unwrap().iter().find(|c| c["name"] == "C7").unwrap();
    assert_eq!(row["local_minimum"], false);
    assert!(stderr(&o).contains("kind=certificate"));
}

#[test]
fn malformed_report_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{\"format_version\": 1");
    assert_eq!(code(&nodecut(&["verify", &bad])), 2);
    assert_eq!(code(&nodecut(&["hierarchy", &bad])), 2);
    let report = karate_report(&dir);
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    v["communities"][0]["nodes"][0] = Value::from("99");
    let unknown = write(&dir, "unknown.json", &v.to_string());
    assert_eq!(code(&nodecut(&["verify", &unknown])), 2);
}

#[test]
fn weighted_graphs_refuse_line_graph() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "w.txt", "a b 2\nb c 1\nc a 1\nc d 0.5\nd e 1\ne f 1\nf d 1\n");
    let o = nodecut(&["linegraph", &graph, "--weighted"]);
    assert_eq!(code(&o), 7);
    assert!(stderr(&o).contains("kind=weighted-unsupported"));

    let report = dir.path().join("r.json").display().to_string();
    let o = nodecut(&["detect", &graph, "--weighted", "--out", &report]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(code(&nodecut(&["verify", &report, &graph, "--weighted", "--equivalence"])), 7);
    let o = nodecut(&["verify", &report, &graph, "--weighted"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json(&o)["equivalence_checked"], false);
}

#[test]
fn hierarchy_outputs() {
    let dir = TempDir::new().unwrap();
    let report = karate_report(&dir);
    let dot = dir.path().join("h.dot");
    let o = nodecut(&["hierarchy", &report, "--dot", dot.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["dag_edges"].as_array().unwrap().len(), 8);
    let pair = v["pairs"].as_array().unwrap().iter().find(|p| p["a"] == "C2" && p["b"] == "C3").unwrap();
    assert_eq!(pair["kind"], "boundary-overlap");
    assert_eq!(pair["covers_graph"], true);
    let dot = fs::read_to_string(dot).unwrap();
    assert!(dot.contains("\"C3\" -> \"C7\";"));
    assert!(dot.contains("\"C1\" -> \"C7\";"));
}

#[test]
fn linegraph_formats() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "path.txt", "1 2\n2 3\n");
    let o = nodecut(&["linegraph", &graph]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    // diagonal: 1/1 + 1/2 ; off-diagonal through node 2: 1/2
    assert_eq!(rows, vec!["0 0 1.5", "0 1 0.5", "1 1 1.5"]);

    let out = dir.path().join("lg.dot");
    let o = nodecut(&["linegraph", "--dataset", "karate", "--format", "dot", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let dot = fs::read_to_string(Path::new(&out)).unwrap();
    assert!(dot.starts_with("graph line_graph {"));
    assert_eq!(dot.matches("[label=").count(), 78);
}

#[test]
fn trajectory_csv_marks_both_minima() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let o = nodecut(&["detect", "--dataset", "karate", "--seed", "33,34", "--trajectories", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = fs::read_to_string(out.join("seed_33_34.csv")).unwrap();
    let minima: Vec<&str> =
        csv.lines().filter(|l| l.contains(",record-minimum,")).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(minima, vec!["21", "29"]);
    let last = csv.lines().last().unwrap();
    assert!(last.ends_with(",0.000000000000e0,34"), "{last}");
}
