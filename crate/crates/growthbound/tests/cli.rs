//! End-to-end checks of the command-line interface: artifact round trips,
//! byte-determinism of machine-readable outputs, and exit codes.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_growthbound"))
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name))
        .unwrap_or_else(|e| panic!("missing {name} in {dir:?}: {e}"))
}

#[test]
fn demo_vmoa_is_deterministic() {
    let tmp = tempdir();
    let (a, b) = (tmp.join("a"), tmp.join("b"));
    for dir in [&a, &b] {
        let status = bin().args(["demo", "vmoa", "--out"]).arg(dir).status().unwrap();
        assert!(status.success());
    }
    for name in [
        "report.kv",
        "report.txt",
        "series_f.csv",
        "series_g.csv",
        "coeffs_a.csv",
        "profile.csv",
        "decay_profile_f.csv",
    ] {
        assert_eq!(read(&a, name), read(&b, name), "{name} differs between runs");
    }
}

#[test]
fn construct_then_certify_matches_single_process() {
    let tmp = tempdir();
    let config = tmp.join("run.toml");
    std::fs::write(
        &config,
        r#"
mode = "vmoa"
params = { q = 100, j = 8 }
grid = { k_range = "1..5", radial = 24, angles = 32 }
"#,
    )
    .unwrap();

    // two-process: construct writes artifacts, certify re-reads them
    let split = tmp.join("split");
    for sub in ["construct", "certify"] {
        let status = bin()
            .args([sub, "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&split)
            .status()
            .unwrap();
        assert!(status.success(), "{sub} failed");
    }

    // single process: certify with no artifacts present builds in memory
    let single = tmp.join("single");
    let status = bin()
        .args(["certify", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&single)
        .status()
        .unwrap();
    assert!(status.success());

    assert_eq!(read(&split, "report.kv"), read(&single, "report.kv"));
    assert_eq!(read(&split, "profile.csv"), read(&single, "profile.csv"));
}

#[test]
fn growth_construct_certify_round_trip() {
    let tmp = tempdir();
    let config = tmp.join("run.toml");
    // steeper target radius keeps the envelope short; the zero search still
    // covers B(0, t_2)
    std::fs::write(
        &config,
        r#"
mode = "growth"
weight = { family = "exponential", c = 1.0, p = 1.0 }
decay = { family = "inverse-log" }
params = { h = 8.0, x0 = -0.1, r_max_delta = 2e-3, k_max = 64 }
grid = { radial = 6, angles = 8, angle_grid = 64 }
"#,
    )
    .unwrap();
    let dir = tmp.join("growth");
    for sub in ["construct", "certify"] {
        let status = bin()
            .args([sub, "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&dir)
            .status()
            .unwrap();
        assert!(status.success(), "{sub} failed");
    }
    let single = tmp.join("growth-single");
    let status = bin()
        .args(["certify", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&single)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(read(&dir, "report.kv"), read(&single, "report.kv"));
    // envelope table re-parses to the identical envelope
    let text = read(&dir, "envelope.txt");
    let env = growthbound::Envelope::parse_table(&text).unwrap();
    assert_eq!(env.render_table(), text);
}

#[test]
fn exit_code_2_for_config_errors() {
    let tmp = tempdir();
    let config = tmp.join("bad.toml");
    std::fs::write(
        &config,
        "mode = \"growth\"\nweight = { family = \"power\", alpha = 1.0 }\nparams = { h = 4.0 }\n",
    )
    .unwrap();
    let out = bin()
        .args(["certify", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(tmp.join("x"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("h >= 8"), "stderr: {stderr}");
    // missing --config is also a config error
    let out = bin().args(["certify"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_code_3_for_certification_failure() {
    // q = 4 is a valid perfect square but far too small for the
    // dominant-term estimate, so certification honestly fails
    let tmp = tempdir();
    let config = tmp.join("q4.toml");
    std::fs::write(
        &config,
        "mode = \"bloch\"\ndecay = { family = \"constant-one\" }\nparams = { q = 4, j = 8 }\ngrid = { k_range = \"1..3\" }\n",
    )
    .unwrap();
    let out = bin()
        .args(["certify", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(tmp.join("x"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn demo_names_are_validated() {
    let out = bin().args(["demo", "nonesuch"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown demo"));
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "growthbound-cli-{}-{:x}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
