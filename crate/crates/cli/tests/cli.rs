use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cocycle_lab::scenario::Scenario;
use serde_json::Value;

const MINIMAL: &str = r#"
name = "minimal"
suite = "verify"
seed = 1

[samples]
triples = 4
pairs = 4
points = 4

[model]
kind = "plane"

[maps.u]
kind = "translation"
shift = [1.0, 0.0]

[maps.v]
kind = "translation"
shift = [0.0, 1.0]
"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cocycle-lab"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().unwrap()
}

fn records(path: &Path) -> Vec<Value> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

#[test]
fn minimal_verify_reports_the_heisenberg_value() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "m.toml", MINIMAL);
    let out = run(&["verify", "m.toml"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let recs = records(&dir.path().join("minimal.jsonl"));
    let uv = recs
        .iter()
        .find(|r| r["check_id"] == "heisenberg.u.v")
        .unwrap();
    assert!((uv["value"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    for key in [
        "check_id", "anchor", "inputs", "value", "residual", "tol", "pass",
    ] {
        assert!(uv.get(key).is_some(), "missing {key}");
    }
    let ids: Vec<&str> = recs.iter().filter_map(|r| r["check_id"].as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(recs[recs.len() - 2].get("summary").is_some());
    assert!(recs[recs.len() - 1].get("environment").is_some());
}

#[test]
fn undefined_map_exits_two_naming_it() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{MINIMAL}\n[maps.w]\nkind = \"word\"\nfactors = [\"u\", \"ghost\"]\n");
    write(dir.path(), "bad.toml", &text);
    let out = run(&["run", "bad.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ghost"));
}

#[test]
fn parse_error_exits_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.toml", "name = \"x\"\nsuite = verify\n");
    let out = run(&["run", "bad.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn missing_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        run(&["run", "nope.toml"], dir.path()).status.code(),
        Some(2)
    );
}

#[test]
fn failed_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // G(u, v) is 0.5 only up to one ulp
    let text = MINIMAL.replace(
        "[samples]",
        "[tolerances]\nclosed_form = 1e-30\n\n[samples]",
    );
    write(dir.path(), "strict.toml", &text);
    let out = run(&["verify", "strict.toml", "--out", "r.jsonl"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let recs = records(&dir.path().join("r.jsonl"));
    let summary = &recs[recs.len() - 2]["summary"];
    assert_eq!(summary["exit_code"], 1);
    assert!(summary["failed"].as_u64().unwrap() > 0);
}

#[test]
fn integrator_failure_exits_three_and_keeps_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"
name = "stiff"
suite = "table"
[model]
kind = "plane"
[hamiltonians.spike]
kind = "gaussian"
center = [0.95, 0.0]
width = 0.05
amplitude = 50.0
[maps.f]
kind = "flow"
hamiltonian = "spike"
step = 1.0
[maps.u]
kind = "translation"
shift = [1.0, 0.0]
"#;
    write(dir.path(), "stiff.toml", text);
    let out = run(&["run", "stiff.toml"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let csv = std::fs::read_to_string(dir.path().join("stiff.csv")).unwrap();
    assert!(csv.contains("f,u,nan"));
    assert!(csv.contains("u,u,0"));
}

#[test]
fn table_writes_csv_grid() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "m.toml", MINIMAL);
    let out = run(&["table", "m.toml", "--out", "g.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("g.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "g,h,value");
    assert_eq!(lines.len(), 5);
    let uv: f64 = lines.iter().find(|l| l.starts_with("u,v,")).unwrap()[4..]
        .parse()
        .unwrap();
    assert!((uv - 0.5).abs() < 1e-12);
}

#[test]
fn suite_flag_and_seed_override() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "m.toml", MINIMAL);
    run(
        &["run", "m.toml", "--seed", "5", "--out", "a.jsonl"],
        dir.path(),
    );
    run(
        &["run", "m.toml", "--seed", "6", "--out", "b.jsonl"],
        dir.path(),
    );
    let summary = |f: &str| {
        records(&dir.path().join(f))
            .into_iter()
            .rev()
            .nth(1)
            .unwrap()
    };
    assert_eq!(summary("a.jsonl")["summary"]["seed"], 5);
    assert_ne!(
        std::fs::read_to_string(dir.path().join("a.jsonl")).unwrap(),
        std::fs::read_to_string(dir.path().join("b.jsonl")).unwrap()
    );
    let out = run(
        &["run", "m.toml", "--suite", "table", "--out", "t.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(dir.path().join("t.csv"))
        .unwrap()
        .starts_with("g,h,value"));
}

#[test]
fn kahler_suite_on_the_plane_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "m.toml", MINIMAL);
    assert_eq!(
        run(&["kahler", "m.toml"], dir.path()).status.code(),
        Some(2)
    );
}

#[test]
fn thread_count_does_not_change_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = scenarios_dir().join("plane_verify.toml");
    let mut texts = Vec::new();
    for threads in ["1", "4"] {
        let out = format!("r{threads}.jsonl");
        let status = bin()
            .args(["run", scenario.to_str().unwrap(), "--out", &out])
            .env("COCYCLE_LAB_THREADS", threads)
            .current_dir(dir.path())
            .output()
            .unwrap();
        assert_eq!(status.status.code(), Some(0));
        let text = std::fs::read_to_string(dir.path().join(&out)).unwrap();
        texts.push(
            text.lines()
                .filter(|l| !l.contains("\"environment\""))
                .collect::<Vec<_>>()
                .join("\n"),
        );
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn shipped_scenarios_round_trip() {
    for entry in std::fs::read_dir(scenarios_dir()).unwrap() {
        let path = entry.unwrap().path();
        let s = Scenario::load(&path).unwrap();
        let again = Scenario::parse(&s.to_toml().unwrap()).unwrap();
        assert_eq!(s, again, "{}", path.display());
        s.build().unwrap_or_else(|e| panic!("{e}"));
    }
}

#[test]
fn shipped_hamiltonian_and_table_scenarios_pass() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["hamiltonian_actions", "grid_table"] {
        let scenario = scenarios_dir().join(format!("{name}.toml"));
        let out = run(&["run", scenario.to_str().unwrap()], dir.path());
        assert_eq!(
            out.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}
