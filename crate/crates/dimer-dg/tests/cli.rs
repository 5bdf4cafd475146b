//! Black-box checks of the command-line front end: exit codes, one-line
//! errors, CSV schemas, and rerun determinism.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dimer-dg"))
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn converge_roundtrip_and_determinism() {
    let dir = std::env::temp_dir().join("dimer_dg_cli_converge");
    std::fs::remove_dir_all(&dir).ok();
    let run = || {
        bin()
            .args([
                "converge",
                "--problem",
                "example1",
                "--flux",
                "upwind",
                "--q",
                "1",
                "--cells",
                "10,20",
                "--tfinal",
                "0.1",
                "--out",
            ])
            .arg(&dir)
            .output()
            .unwrap()
    };
    let out = run();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let first = read(&dir, "errors_upwind.csv");
    assert!(first.starts_with("q,cells,e_w1,order_w1,"));
    assert_eq!(first.lines().count(), 3);
    let manifest = read(&dir, "manifest.txt");
    assert!(manifest.contains("errors_upwind.csv"));
    run();
    assert_eq!(first, read(&dir, "errors_upwind.csv"), "rerun not byte-identical");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn simulate_writes_snapshots_and_energy() {
    let dir = std::env::temp_dir().join("dimer_dg_cli_simulate");
    std::fs::remove_dir_all(&dir).ok();
    let out = bin()
        .args([
            "simulate", "--problem", "example2", "--q", "2", "--cells", "20", "--tfinal", "0.05",
            "--out",
        ])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let snaps = read(&dir, "snapshots.csv");
    assert!(snaps.starts_with("t,x,w1,w2,b1,b2"));
    // two time levels x 20 elements x 8 sample points
    assert_eq!(snaps.lines().count(), 1 + 2 * 20 * 8);
    let energy = read(&dir, "energy.csv");
    assert!(energy.starts_with("step,t,E_h,box_E_h"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bad_inputs_exit_nonzero_with_one_line_error() {
    for args in [
        vec!["converge", "--problem", "bogus"],
        vec!["converge", "--flux", "custom:1,1,1,0"], // violates stability
        vec!["simulate", "--flux", "wrongname"],
        vec!["kink", "--tfinal", "100"], // gated behind --long
    ] {
        let out = bin().args(&args).output().unwrap();
        assert!(!out.status.success(), "args {args:?} unexpectedly succeeded");
        let stderr = String::from_utf8_lossy(&out.stderr);
        let lines: Vec<&str> = stderr.trim_end().lines().collect();
        assert_eq!(lines.len(), 1, "expected one-line error, got: {stderr}");
        assert!(lines[0].starts_with("error: "), "got: {stderr}");
    }
}

#[test]
fn unstable_flux_allowed_when_requested() {
    let dir = std::env::temp_dir().join("dimer_dg_cli_unstable");
    std::fs::remove_dir_all(&dir).ok();
    // tiny horizon: instability growth is bounded, run must complete
    let out = bin()
        .args([
            "simulate",
            "--problem",
            "example1",
            "--flux",
            "custom:1,1,1,0",
            "--allow-unstable",
            "--q",
            "1",
            "--cells",
            "10",
            "--tfinal",
            "0.01",
            "--out",
        ])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn kink_profile_csv_schema() {
    let dir = std::env::temp_dir().join("dimer_dg_cli_kink");
    std::fs::remove_dir_all(&dir).ok();
    let out = bin()
        .args([
            "kink", "--q", "1", "--cells", "60", "--tfinal", "0", "--xa", "-40", "--xb", "80",
            "--out",
        ])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let profile = read(&dir, "profile.csv");
    assert!(profile.starts_with("z,w1,w2,Q"));
    assert_eq!(profile.lines().count(), 1 + 2001);
    let energy = read(&dir, "energy.csv");
    // box column populated for kink runs
    let last = energy.lines().last().unwrap();
    assert!(!last.ends_with(','), "box energy missing: {last}");
    std::fs::remove_dir_all(&dir).ok();
}
