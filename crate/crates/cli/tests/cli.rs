use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const MODEL: &str = "\
# a weak metric that glues 0 and 1, and the discrete metric on two points
space X
points 3
space Y
points 2
metric m1 of X
0 0 1 / 0 0 1 / 1 1 2
metric disc of Y
0 1
1 0
base BX of X = m1
base BY of Y pseudo = disc
map f : X -> Y
0 0 1
map g : X -> Y
0 1 1
";

fn wlip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wlip"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn has_line(o: &Output, line: &str) -> bool {
    stdout(o).lines().any(|l| l == line)
}

fn model_file(dir: &TempDir, text: &str) -> String {
    let p = dir.path().join("model.wl");
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn validate_reports_kinds() {
    let dir = TempDir::new().unwrap();
    let file = model_file(&dir, MODEL);
    let o = wlip(&["validate", &file]);
    assert_eq!(o.status.code(), Some(0));
    assert!(has_line(&o, "valid=true"));
    assert!(has_line(&o, "base.BX.kind=weak"));
    assert!(has_line(&o, "base.BY.kind=pseudo"));
}

#[test]
fn validation_and_parse_errors_have_distinct_codes() {
    let dir = TempDir::new().unwrap();
    let asym = model_file(&dir, "space X\npoints 2\nmetric d of X\n0 1\n2 0\n");
    let o = wlip(&["validate", &asym]);
    assert_eq!(o.status.code(), Some(1));
    assert!(has_line(&o, "valid=false"));

    let broken = model_file(&dir, "space X\npoints two\n");
    let o = wlip(&["validate", &broken]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:8"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(wlip(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        wlip(&["law", "check", "NO-SUCH-LAW", "x.wl"]).status.code(),
        Some(2)
    );
    assert_eq!(
        wlip(&["validate", "/nonexistent/model.wl"]).status.code(),
        Some(2)
    );
}

#[test]
fn max_points_is_enforced() {
    let dir = TempDir::new().unwrap();
    let file = model_file(&dir, MODEL);
    assert_eq!(
        wlip(&["--max-points", "2", "validate", &file])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        wlip(&["--max-points", "3", "validate", &file])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn classify_text_and_json_agree() {
    let dir = TempDir::new().unwrap();
    let file = model_file(&dir, MODEL);
    let o = wlip(&[
        "classify", &file, "--map", "f", "--from", "BX", "--to", "BY",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(has_line(&o, "weak_lipschitz=true"));
    assert!(has_line(&o, "lipschitz=n/a"));

    // g separates 0 and 1, which m1 glues together.
    let o = wlip(&[
        "classify", &file, "--map", "g", "--from", "BX", "--to", "BY",
    ]);
    assert!(has_line(&o, "weak_lipschitz=false"));
    assert!(has_line(&o, "continuous_induced=false"));

    let o = wlip(&[
        "--json", "classify", &file, "--map", "g", "--from", "BX", "--to", "BY",
    ]);
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["weak_lipschitz"], false);
    assert_eq!(j["lipschitz"], serde_json::Value::Null);
    assert_eq!(j["map"], "g");
}

#[test]
fn strict_remark_changes_the_headline_mode() {
    let dir = TempDir::new().unwrap();
    let file = model_file(&dir, MODEL);
    let o = wlip(&[
        "classify",
        &file,
        "--map",
        "f",
        "--from",
        "BX",
        "--to",
        "BY",
        "--strict-remark",
    ]);
    assert!(has_line(&o, "locally_lipschitz_remark_mode=strict"));
}

#[test]
fn induce_topology_writes_a_loadable_model() {
    let dir = TempDir::new().unwrap();
    let file = model_file(&dir, MODEL);
    let out = dir.path().join("t.wl");
    let o = wlip(&[
        "induce",
        &file,
        "--base",
        "BX",
        "topology",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(has_line(&o, "opens={} {0,1} {2} {0,1,2}"));
    assert!(has_line(&o, "family_topology_equal=false"));
    let written = fs::read_to_string(&out).unwrap();
    assert!(written.contains("topology BX_topology of X"));
    assert_eq!(
        wlip(&["validate", out.to_str().unwrap()]).status.code(),
        Some(0)
    );
    assert!(!Path::new(&format!("{}.tmp", out.display())).exists());
}

#[test]
fn induce_uniformity_on_an_improper_base_fails() {
    let dir = TempDir::new().unwrap();
    let file = model_file(
        &dir,
        "space X\npoints 2\nmetric d of X\n0 1\n1 2\nmetric e of X\n2 1\n1 0\nbase B of X = d e\n",
    );
    let o = wlip(&["induce", &file, "--base", "B", "uniformity"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(has_line(&o, "kernel=n/a"));

    let file = model_file(&dir, MODEL);
    let o = wlip(&["induce", &file, "--base", "BX", "uniformity"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(has_line(&o, "kernel=(0,0) (0,1) (1,0) (1,1)"));
}

#[test]
fn product_round_trips() {
    let dir = TempDir::new().unwrap();
    let file = model_file(&dir, MODEL);
    let out = dir.path().join("p.wl");
    let o = wlip(&[
        "product",
        &file,
        "--bases",
        "BX,BY",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(has_line(&o, "points=6"));
    let v = wlip(&["validate", out.to_str().unwrap()]);
    assert!(has_line(&v, "base.prod_BX_BY.kind=weak"));
}

#[test]
fn law_list_and_check() {
    let o = wlip(&["law", "list"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(has_line(&o, "LAW-L2-EXIST.expectation=FIND-EXPECTED"));
    assert!(has_line(&o, "LAW-TOPDEF.expectation=PASS-ALWAYS"));

    let dir = TempDir::new().unwrap();
    let file = model_file(&dir, "space X\npoints 2\ntopology T of X\nopen 0\n");
    let o = wlip(&["law", "check", "law-topdef", &file]);
    assert_eq!(o.status.code(), Some(0));
    assert!(has_line(&o, "verdict=pass"));

    // A model of the wrong shape for the law.
    let o = wlip(&["law", "check", "LAW-PROD-PM", &file]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn law_check_reports_a_failure() {
    // One point, indiscrete; the open set {0} of Y misses the image of f.
    let dir = TempDir::new().unwrap();
    let file = model_file(
        &dir,
        "space X\npoints 1\nspace Y\npoints 2\ntopology TX of X\ntopology TY of Y\nopen 0\nmap f : X -> Y\n1\n",
    );
    let o = wlip(&["law", "check", "LAW-CONT-WL", &file]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(has_line(&o, "verdict=fail"));
}

#[test]
fn search_counterexample_reparses_and_fails_check() {
    let dir = TempDir::new().unwrap();
    let o = wlip(&[
        "law",
        "search",
        "DIST-SCALAR-WL",
        "--n",
        "2",
        "--seed",
        "5",
        "--trials",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(has_line(&o, "result=counterexample-found"));
    assert!(has_line(&o, "as_expected=true"));
    let block = wlip_core::report::extract_block(&text, "counterexample").unwrap();
    let file = model_file(&dir, &block);
    let c = wlip(&["law", "check", "DIST-SCALAR-WL", &file]);
    assert_eq!(c.status.code(), Some(1));
}

#[test]
fn search_exit_code_tracks_expectation() {
    let o = wlip(&["law", "search", "LAW-TOPDEF", "--n", "3", "--trials", "50"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(has_line(&o, "result=none-found"));

    // Too few trials to find the expected instance is reported as a miss.
    let o = wlip(&["law", "search", "LAW-L2-EXIST", "--n", "1", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(has_line(&o, "as_expected=false"));
}

#[test]
fn search_is_worker_independent() {
    let args = |w: &'static str| {
        [
            "law",
            "search",
            "DIST-FAMILY-VS-STRUCTURE-TOPOLOGY",
            "--n",
            "3",
            "--seed",
            "11",
            "--trials",
            "200",
            "--workers",
            w,
        ]
    };
    let one = stdout(&wlip(&args("1")));
    let eight = stdout(&wlip(&args("8")));
    let strip = |s: &str| {
        s.lines()
            .filter(|l| !l.starts_with("workers="))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&one), strip(&eight));
}

#[test]
fn enumerate_counts() {
    for (n, count) in [(1, 1), (2, 4), (3, 29)] {
        let o = wlip(&["enumerate", "topologies", "--n", &n.to_string()]);
        assert!(has_line(&o, &format!("count={count}")));
    }
    let o = wlip(&["--json", "enumerate", "topologies", "--n", "2"]);
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["topology"].as_object().unwrap().len(), 4);
    assert_eq!(
        wlip(&["enumerate", "topologies", "--n", "6"]).status.code(),
        Some(2)
    );
}
