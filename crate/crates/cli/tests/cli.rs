use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use redsm_cli::CSV_HEADER;

fn redsm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_redsm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn out_arg(p: &Path) -> String {
    p.display().to_string()
}

#[test]
fn header_matches_golden() {
    let golden = include_str!("golden/header.csv");
    assert_eq!(golden.trim_end(), CSV_HEADER.join(","));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.csv");
    let o = redsm(&[
        "run",
        "custom",
        "--protocols",
        "mub",
        "--nc",
        "1000",
        "--batches",
        "2",
        "--out",
        &out_arg(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), golden.trim_end());
}

#[test]
fn fig2a_writes_twelve_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2a.csv");
    let o = redsm(&["run", "fig2a", "--batches", "5", "--out", &out_arg(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut reader = csv::Reader::from_path(&out).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().collect::<Result<_, _>>().unwrap();
    assert_eq!(rows.len(), 12);
    for r in &rows {
        let mean: f64 = r[6].parse().unwrap();
        assert!(mean > 0.0 && mean < 1.0);
        assert_eq!(&r[8], "5");
    }
    assert!(stdout(&o).contains("wrote 12 rows"));
}

#[test]
fn custom_without_protocols_fails() {
    let o = redsm(&["run", "custom"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("protocols"), "{}", stderr(&o));
}

#[test]
fn theta_out_of_range_names_key() {
    let o = redsm(&["run", "fig2a", "--theta", "0"]);
    assert!(!o.status.success());
    let err = stderr(&o);
    assert!(err.contains("theta") && err.contains("0<θ≤π/2"), "{err}");
}

#[test]
fn unknown_scenario_fails() {
    let o = redsm(&["run", "fig9"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("fig9"));
}

#[test]
fn flags_override_file_and_seed_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# sweep\ntheta = 0.25pi\nprotocols = dsm_pure\nnc = 1e4\nbatches = 2\n",
    )
    .unwrap();
    let out = dir.path().join("o.csv");
    let o = redsm(&[
        "run",
        "custom",
        "--config",
        &out_arg(&cfg),
        "--theta",
        "0.5pi",
        "--out",
        &out_arg(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let echo = stdout(&o);
    assert!(echo.contains("theta       = 0.5pi"), "{echo}");
    assert!(echo.contains("seed        = 20160915"), "{echo}");

    let mut reader = csv::Reader::from_path(&out).unwrap();
    let row = reader.records().next().unwrap().unwrap();
    let theta: f64 = row[3].parse().unwrap();
    assert!((theta - std::f64::consts::FRAC_PI_2).abs() < 1e-7);
    assert_eq!(&row[9], "20160915");
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("{k}.csv"));
        let o = redsm(&[
            "run",
            "fig3a",
            "--nc",
            "1e4,1e5",
            "--batches",
            "4",
            "--seed",
            "3",
            "--out",
            &out_arg(&out),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        bytes.push(fs::read(&out).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
}

#[test]
fn failed_run_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("partial.csv");
    // At d = 7, 40 copies leave every n with no copies.
    let o = redsm(&[
        "run",
        "custom",
        "--protocols",
        "redsm_pure",
        "--d",
        "7",
        "--nc",
        "40",
        "--batches",
        "1",
        "--out",
        &out_arg(&out),
    ]);
    assert!(!o.status.success());
    assert!(!out.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}
