use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qws::cli::{load_config, parse_config, validate};

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn qws(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qws")).args(args).output().expect("binary runs")
}

fn config(name: &str) -> String {
    configs_dir().join(name).to_string_lossy().into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn shipped_configs_validate_cleanly() {
    let mut n = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("ini") {
            continue;
        }
        let cfg = load_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let diags = validate(&cfg);
        assert!(diags.is_empty(), "{}: {diags:?}", path.display());
        n += 1;
    }
    assert!(n >= 6);
}

#[test]
fn config_errors_are_collected() {
    let text = "task = levinson\nbogus = 1\n[channel]\nq = three\n[nowhere]\n";
    let err = parse_config(text, Path::new(".")).unwrap_err().to_string();
    for needle in ["version", "bogus", "three", "nowhere"] {
        assert!(err.contains(needle), "missing '{needle}' in: {err}");
    }
}

#[test]
fn half_bound_channel_is_diagnosed() {
    let text = "version = 1\ntask = levinson\n[channel]\nq = 2\nl = 0\n[potential]\nfamily = square-well\ndepth = 5\nr0 = 1\n";
    let cfg = parse_config(text, Path::new(".")).unwrap();
    let diags = validate(&cfg);
    assert!(diags.iter().any(|d| d.contains("λ=0 unsupported (half-bound regime)")), "{diags:?}");
}

#[test]
fn eval_special_without_a_config() {
    let out = qws(&["eval-special", "--function", "gamma", "--nu", "0", "--x", "0.5"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!((v["value"].as_f64().unwrap() - 1.7724538509).abs() < 1e-10);
    assert!(v["metadata"].is_object());
}

#[test]
fn no_metadata_runs_are_byte_identical() {
    let args = ["phase-shift", "--config", &config("phase_shift.ini"), "--no-metadata"];
    let (a, b) = (qws(&args), qws(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(!text.contains("created_unix"));
    assert!(text.starts_with("k,mu,eta_raw,eta_unwrapped"), "{}", &text[..80.min(text.len())]);
    assert_eq!(text.lines().count(), 41);
}

#[test]
fn metadata_block_leads_csv_output() {
    let out = qws(&["phase-shift", "--config", &config("phase_shift.ini")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().starts_with('#'));
    assert!(text.contains("# generator=qws"));
}

#[test]
fn levinson_on_the_two_state_well() {
    let dir = tempfile::tempdir().unwrap();
    let stairs = dir.path().join("stairs.csv");
    let out = qws(&[
        "levinson",
        "--config",
        &config("levinson_square_well.ini"),
        "--no-metadata",
        "--staircase",
        stairs.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!((v["eta0"].as_f64().unwrap() - std::f64::consts::TAU).abs() < 1e-3);
    assert_eq!(v["n_direct"].as_u64(), Some(2));
    assert_eq!(v["n_continuation"].as_u64(), Some(2));
    assert_eq!(v["pass"].as_bool(), Some(true));
    let csv = std::fs::read_to_string(stairs).unwrap();
    assert!(csv.starts_with("mu,A,staircase"));
}

#[test]
fn zero_coupling_phase_column_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(configs_dir().join("phase_shift.ini")).unwrap().replace("r0 = 1", "r0 = 1\nmu = 0");
    let path = write(dir.path(), "mu0.ini", &text);
    let out = qws(&["phase-shift", "--config", &path, "--no-metadata"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|&h| h == "eta_unwrapped").unwrap();
    let mut rows = 0;
    for line in lines {
        let eta: f64 = line.split(',').nth(col).unwrap().parse().unwrap();
        assert_eq!(eta, 0.0);
        rows += 1;
    }
    assert_eq!(rows, 40);
}

#[test]
fn output_path_and_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("bound.json");
    let out = qws(&["bound-states", "--config", &config("bound_states.ini"), "--out", target.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert!(v.is_object());
}

fn trailer(out: &Output) -> serde_json::Value {
    let err = String::from_utf8_lossy(&out.stderr);
    let last = err.lines().last().unwrap_or_default();
    serde_json::from_str(last).unwrap_or_else(|e| panic!("{e}: {err}"))
}

#[test]
fn configuration_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.ini", "version = 1\ntask = levinson\n[channel]\nq = 3\nl = 0\nspin = 1\n");
    let out = qws(&["levinson", "--config", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(trailer(&out)["error"]["category"], "config");

    let out = qws(&["levinson", "--config", &config("bound_states.ini")]);
    assert_eq!(out.status.code(), Some(2));

    let out = qws(&["solve"]);
    assert_eq!(out.status.code(), Some(2));

    let out = qws(&["levinson", "--config", "/nonexistent/run.ini"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numeric_failures_exit_with_3() {
    let out = qws(&["eval-special", "--function", "bessel-j", "--nu", "60", "--x", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(trailer(&out)["error"]["exit_code"], 3);
}

#[test]
fn threshold_resonance_exits_with_4() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(configs_dir().join("levinson_square_well.ini"))
        .unwrap()
        .replace("39.47841760435743", "2.4674011002723395");
    let path = write(dir.path(), "res.ini", &text);
    let out = qws(&["levinson", "--config", &path]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(trailer(&out)["error"]["category"], "inconclusive");
}

#[test]
fn failed_audit_exits_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(configs_dir().join("wronskian.ini")).unwrap().replace("tolerance = 1e-8", "tolerance = 1e-300");
    let path = write(dir.path(), "strict.ini", &text);
    let out = qws(&["wronskian-audit", "--config", &path, "--no-metadata"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"].as_bool(), Some(false));
}

#[test]
fn every_shipped_config_runs() {
    for (cmd, file) in [
        ("solve", "solve.ini"),
        ("wronskian-audit", "wronskian.ini"),
        ("bound-states", "bound_states.ini"),
        ("sturm-check", "sturm.ini"),
        ("levinson", "levinson_kernel.ini"),
        ("levinson", "levinson_mixed.ini"),
    ] {
        let out = qws(&[cmd, "--config", &config(file), "--no-metadata"]);
        assert_eq!(out.status.code(), Some(0), "{cmd} {file}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
