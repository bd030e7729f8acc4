use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn blockfade(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockfade"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scenario(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn version_flag() {
    let out = blockfade(&["--version"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("blockfade "));
}

#[test]
fn validate_accepts_bundled_scenarios() {
    for name in [
        "two-users-time.json",
        "single-user.json",
        "paper-a-quick.json",
    ] {
        let out = blockfade(&["validate", &scenario(name)]);
        assert!(
            out.status.success(),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok:"));
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_syntax = dir.path().join("syntax.json");
    fs::write(&bad_syntax, "{\"seed\": 1,\n  \"geometry\": }").unwrap();
    let out = blockfade(&["validate", bad_syntax.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let bad_value = dir.path().join("value.json");
    let text = fs::read_to_string(scenario("single-user.json")).unwrap();
    fs::write(
        &bad_value,
        text.replace("\"spread_fraction\": 1", "\"spread_fraction\": 1.5"),
    )
    .unwrap();
    let out = blockfade(&["simulate", bad_value.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("spread_fraction") && err.contains("[0, 1]"),
        "{err}"
    );

    let missing = dir.path().join("missing.json");
    assert_eq!(
        blockfade(&["validate", missing.to_str().unwrap()])
            .status
            .code(),
        Some(4)
    );

    assert_eq!(blockfade(&["preset", "fig7"]).status.code(), Some(2));

    // output directory path is an existing file
    let blocker = dir.path().join("blocker");
    fs::write(&blocker, "").unwrap();
    let out = blockfade(&[
        "simulate",
        &scenario("single-user.json"),
        "--out",
        blocker.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn simulate_writes_manifested_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir: PathBuf = dir.path().join("run");
    let out = blockfade(&[
        "simulate",
        &scenario("two-users-time.json"),
        "--out",
        out_dir.to_str().unwrap(),
        "--threads",
        "2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        read(&out_dir, "histogram.csv").lines().next(),
        Some("re_center,im_center,count")
    );
    assert_eq!(
        read(&out_dir, "eigencdf.csv").lines().next(),
        Some("eigenvalue,cdf")
    );
    assert_eq!(
        read(&out_dir, "xcorr_hist.csv").lines().next(),
        Some("magnitude_center,count")
    );
    assert_eq!(
        read(&out_dir, "power_profile.csv").lines().next(),
        Some("antenna_index,user_index,mean_power")
    );
    assert_eq!(read(&out_dir, "correlation_matrix.csv").lines().count(), 2);

    let manifest = read(&out_dir, "manifest.csv");
    let mut lines = manifest.lines();
    assert_eq!(lines.next(), Some("artifact,rows,sha256"));
    let mut names = Vec::new();
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 3);
        assert!(out_dir.join(cells[0]).is_file(), "{}", cells[0]);
        assert_eq!(cells[2].len(), 64);
        names.push(cells[0].to_string());
    }
    assert!(names.contains(&"config.json".to_string()));

    // the echoed config reproduces the run
    let again = dir.path().join("again");
    let out = blockfade(&[
        "simulate",
        out_dir.join("config.json").to_str().unwrap(),
        "--out",
        again.to_str().unwrap(),
        "--threads",
        "1",
    ]);
    assert!(out.status.success());
    assert_eq!(read(&again, "manifest.csv"), manifest);
}

#[test]
fn seed_flag_overrides_document() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str, name: &str| {
        let out_dir = dir.path().join(name);
        let args = [
            "simulate",
            &scenario("single-user.json"),
            "--seed",
            seed,
            "--out",
            out_dir.to_str().unwrap(),
        ];
        assert!(blockfade(&args).status.success());
        read(&out_dir, "power_profile.csv")
    };
    assert_eq!(run("5", "a"), run("5", "b"));
    assert_ne!(run("5", "a"), run("6", "c"));
    assert!(read(&dir.path().join("c"), "config.json").contains("\"seed\": 6"));
}

#[test]
fn preset_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = blockfade(&["preset", "fig4", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let rows: u64 = read(dir.path(), "xcorr_hist.csv")
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(rows, 2000);
    assert!(read(dir.path(), "xcorr_hist.svg").starts_with("<svg"));
}
