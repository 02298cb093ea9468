use std::process::{Command, Output};

fn hurwitz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurwitz"))
        .args(args)
        .env("RUST_LOG", "warn")
        .env_remove("HURWITZ_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = hurwitz(&a);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

const A4: [&str; 6] = ["--group", "A4", "--classes", "[3a,3a,3b,3b]", "--mode", "inner-reduced"];

#[test]
fn shinc_renders_both_blocks() {
    let mut args = vec!["shinc"];
    args.extend(A4);
    let o = hurwitz(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for row in ["O_{1,1}^4  2 1 1", "O_{1,2}^1  1 0 0", "O_{2,1}^4  1 2 1", "O_{2,2}^3  2 0 1", "O_{2,3}^2  1 1 0"] {
        assert!(text.contains(row), "missing {row:?} in\n{text}");
    }
    assert!(text.contains("symmetric: true"));
}

#[test]
fn genus_of_the_dihedral_modular_curve() {
    let v = json(&["genus", "--group", "D5", "--classes", "[2a,2a,2a,2a]", "--mode", "abs-reduced"]);
    let r = &v["result"][0]["report"];
    assert_eq!(r["degree"], 6);
    assert_eq!(r["genus"], 0);
    assert_eq!(r["cusp_widths"], serde_json::json!([5, 1]));
}

#[test]
fn braid_relation_suite_passes() {
    let o = hurwitz(&["check", "--suite", "braid-relations", "--group", "A5", "--classes", "[3a,3a,3a,3a]"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn all_suites_pass_with_cover_and_tower() {
    let o = hurwitz(&[
        "check", "--group", "A4", "--classes", "[3a,3a,3b,3b]", "--cover", "spin4", "--ell", "2", "--action",
        "[[0,-1],[1,-1]]",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("lift invariant"));
    assert!(text.contains("projection"));
    assert!(text.contains("worker count"));
}

#[test]
fn json_has_sorted_keys_version_and_input() {
    let v = json(&["bcl", "--group", "A4", "--classes", "[3a,3a,3b,3b]"]);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["input"]["group"], "A4");
    assert_eq!(v["result"]["rational_union"], true);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn output_is_byte_stable_across_runs_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, workers: &str| {
        let path = dir.path().join(name);
        let mut args = vec!["orbits", "--format", "json", "--workers", workers, "--output", path.to_str().unwrap()];
        args.extend(["--group", "D7", "--classes", "[2a,2a,2a,2a]", "--mode", "inner"]);
        assert!(hurwitz(&args).status.success());
        std::fs::read(path).unwrap()
    };
    let a = run("a.json", "1");
    let b = run("b.json", "1");
    let c = run("c.json", "4");
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn csv_is_rfc4180() {
    let mut args = vec!["lift", "--cover", "spin4", "--format", "csv"];
    args.extend(A4);
    let o = hurwitz(&args);
    assert!(o.status.success());
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let headers = r.headers().unwrap().clone();
    assert_eq!(&headers[1], "orbit");
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][3], "-1");
    assert_eq!(&rows[1][3], "+1");
    // tuples contain commas and are quoted
    assert!(rows[0][5].starts_with("((") && rows[0][5].contains(','));
}

#[test]
fn hom_file_cover() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.json");
    std::fs::write(&path, r#"{"source": "SL2(3)", "target": "A4", "images": ["(2,3,4)", "(1,2,3)"]}"#).unwrap();
    let cover = format!("hom:{}", path.display());
    let mut args = vec!["lift", "--cover", cover.as_str()];
    args.extend(A4);
    let v = json(&args);
    assert_eq!(v["result"]["kernel_order"], 2);
    let inv: Vec<&str> = v["result"]["orbits"].as_array().unwrap().iter().map(|o| o["invariant"].as_str().unwrap()).collect();
    assert_eq!(inv.len(), 2);
    assert_ne!(inv[0], inv[1]);
}

#[test]
fn heisenberg_level0() {
    let v = json(&[
        "lift", "--group", "V(2,5):M=[[0,-1],[1,-1]]", "--classes", "[3a,3a,3b,3b]", "--mode", "inner-reduced",
        "--cover", "heis(5)", "--ell", "5",
    ]);
    let orbits = v["result"]["orbits"].as_array().unwrap();
    let trivial: Vec<_> = orbits.iter().filter(|o| !o["obstructed"].as_bool().unwrap()).collect();
    assert_eq!(trivial.len(), 1);
    assert_eq!(trivial[0]["summary"]["hm"], "present");
}

#[test]
fn tower_level_one() {
    let v = json(&["tower", "--ell", "2", "--rank", "2", "--action", "[[0,-1],[1,-1]]", "--classes", "[3a,3a,3b,3b]"]);
    let levels = v["result"]["levels"].as_array().unwrap();
    assert_eq!(levels[1]["order"], 48);
    assert_eq!(v["result"]["edges_consistent"], true);
}

#[test]
fn validation_errors_exit_2() {
    let mut args = vec!["genus"];
    args.extend(["--group", "A4", "--classes", "[3a,3a,3b,3b]", "--mode", "inner"]);
    assert_eq!(hurwitz(&args).status.code(), Some(2));
    assert_eq!(hurwitz(&["orbits", "--group", "Q(8", "--classes", "[2a]"]).status.code(), Some(2));
    assert_eq!(hurwitz(&["orbits", "--group", "A4", "--classes", "[9z,3a,3a]"]).status.code(), Some(2));
    assert_eq!(hurwitz(&["orbits", "--group", "A4", "--classes", "[3a,3a,3a]", "--orbit-cap", "0"]).status.code(), Some(2));
    assert_eq!(hurwitz(&["tower", "--ell", "2", "--rank", "3", "--action", "[[0,-1],[1,-1]]", "--classes", "[3a,3a,3b,3b]"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // the kernel of (Z/4)^2:Z/3 -> (Z/2)^2:Z/3 is not central
    std::fs::write(
        &path,
        r#"{"source": "V(2,4):M=[[0,-1],[1,-1]]", "target": "V(2,2):M=[[0,-1],[1,-1]]", "images": ["([1,0];[0])", "([0,1];[0])", "([0,0];[1])"]}"#,
    )
    .unwrap();
    let cover = format!("hom:{}", path.display());
    let o = hurwitz(&["lift", "--cover", cover.as_str(), "--classes", "[3a,3a,3b,3b]"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn budget_errors_exit_3() {
    let o = hurwitz(&["orbits", "--group", "A5", "--classes", "[3a,3a,3a,3a]", "--orbit-cap", "3"]);
    assert_eq!(o.status.code(), Some(3));
    let o = hurwitz(&["orbits", "--group", "A7", "--classes", "[3a,3a,3a]", "--order-bound", "100"]);
    assert_eq!(o.status.code(), Some(3));
    let o = hurwitz(&["tower", "--ell", "3", "--family", "dihedral", "--classes", "[2a,2a,2a,2a]", "--k-max", "4", "--order-bound", "100"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("truncated"));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"group": "A5", "classes": "[3a,3a,3a,3a]", "mode": "inner", "format": "json"}"#).unwrap();
    let o = hurwitz(&["orbits", "--config", cfg.to_str().unwrap(), "--group", "A4", "--classes", "[3a,3a,3b,3b]"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["input"]["group"], "A4");
    assert_eq!(v["input"]["mode"], "inner");
    assert_eq!(v["result"]["orbits"].as_array().unwrap().len(), 2);
}
