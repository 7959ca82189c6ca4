use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mfc(args: &[&str], out_env: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mfc"));
    cmd.args(args).env_remove("MFC_OUT_DIR");
    if let Some(dir) = out_env {
        cmd.env("MFC_OUT_DIR", dir);
    }
    cmd.output().expect("spawn mfc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Dumps `name` with a textual substitution into `dir/file`.
fn scenario_file(dir: &Path, file: &str, name: &str, from: &str, to: &str) -> String {
    let text = stdout(&mfc(&["dump-preset", name], None));
    assert!(text.contains(from), "{from} not in {name}");
    let p = dir.join(file);
    fs::write(&p, text.replacen(from, to, 1)).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn run_writes_the_log_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = mfc(&["run", "case4", "--out", out], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("case4: rmse_tail"));

    let csv = fs::read_to_string(dir.path().join("case4.csv")).unwrap();
    // 10 s at 10 ms plus the initial row, plus the header
    assert_eq!(csv.lines().count(), 1002);
    let side: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("case4.json")).unwrap()).unwrap();
    assert_eq!(side["seed"], 2013);
    assert_eq!(side["scenario"]["name"], "case4");
    assert_eq!(side["metrics"]["diverged"], false);
}

#[test]
fn seed_flag_reaches_the_sidecar_and_the_noise() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    mfc(&["run", "case1", "--seed", "7", "--out", a.to_str().unwrap()], None);
    mfc(&["run", "case1", "--out", b.to_str().unwrap()], None);
    let side: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(a.join("case1.json")).unwrap()).unwrap();
    assert_eq!(side["seed"], 7);
    assert_ne!(fs::read(a.join("case1.csv")).unwrap(), fs::read(b.join("case1.csv")).unwrap());
}

#[test]
fn output_directory_defaults_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = mfc(&["run", "case2"], Some(dir.path()));
    assert!(o.status.success());
    assert!(dir.path().join("case2.csv").is_file());
}

#[test]
fn dumped_presets_run_like_the_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("heat.json");
    fs::write(&file, stdout(&mfc(&["dump-preset", "heat"], None))).unwrap();
    let (x, y) = (dir.path().join("x"), dir.path().join("y"));
    assert!(mfc(&["run", "heat", "--out", x.to_str().unwrap()], None).status.success());
    assert!(mfc(&["run", file.to_str().unwrap(), "--out", y.to_str().unwrap()], None).status.success());
    assert_eq!(fs::read(x.join("heat.csv")).unwrap(), fs::read(y.join("heat.csv")).unwrap());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(mfc(&["run", "no-such-preset", "--out", out], None).status.code(), Some(1));

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\"schema_version\": 1}").unwrap();
    assert_eq!(mfc(&["run", broken.to_str().unwrap(), "--out", out], None).status.code(), Some(1));

    // wrong sign of α on the unstable plant
    let flipped = scenario_file(dir.path(), "flipped.json", "linear", "\"alpha\": 1.0", "\"alpha\": -1.0");
    let o = mfc(&["run", &flipped, "--out", out], None);
    assert_eq!(o.status.code(), Some(2));
    // the truncated log is still written
    let side: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("linear.json")).unwrap()).unwrap();
    assert_eq!(side["metrics"]["diverged"], true);
}

#[test]
fn list_covers_every_preset() {
    let text = stdout(&mfc(&["list-presets"], None));
    for name in ["linear", "case1", "case2", "case3", "case4", "three_tank", "heat"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
}

#[test]
fn batch_runs_every_file_and_reports_the_worst_outcome() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg");
    fs::create_dir(&cfg).unwrap();
    let out = dir.path().join("out");
    for name in ["case1", "case3"] {
        fs::write(cfg.join(format!("{name}.json")), stdout(&mfc(&["dump-preset", name], None))).unwrap();
    }
    let o = mfc(&["batch", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()], None);
    assert!(o.status.success());
    assert!(out.join("case1.csv").is_file() && out.join("case3.csv").is_file());

    scenario_file(&cfg, "z.json", "linear", "\"alpha\": 1.0", "\"alpha\": -1.0");
    let o = mfc(&["batch", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    fs::write(cfg.join("zz.json"), "not json").unwrap();
    let o = mfc(&["batch", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn metrics_recomputes_from_the_log() {
    let dir = tempfile::tempdir().unwrap();
    mfc(&["run", "three_tank", "--out", dir.path().to_str().unwrap()], None);
    let side: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("three_tank.json")).unwrap()).unwrap();
    let o = mfc(&["metrics", dir.path().join("three_tank.csv").to_str().unwrap()], None);
    assert!(o.status.success());
    let m: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(m, side["metrics"]);
    assert!(m["loops"][1]["cross_coupling"].is_number());
}
