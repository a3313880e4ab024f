use std::process::{Command, Output};

fn urdd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_urdd")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn phases_prints_ur8_list() {
    let o = urdd(&["phases", "--n", "8", "--phi2", "1.5707963"]);
    assert!(o.status.success());
    let values: Vec<f64> = stdout(&o).lines().map(|l| l.parse().unwrap()).collect();
    let h = std::f64::consts::FRAC_PI_2;
    let want = [0.0, h, 3.0 * h, 2.0 * h, 2.0 * h, 3.0 * h, h, 0.0];
    assert_eq!(values.len(), 8);
    for (v, w) in values.iter().zip(want) {
        assert!((v - w).abs() < 1e-6, "{values:?}");
    }
}

#[test]
fn phases_rejects_odd_order() {
    let o = urdd(&["phases", "--n", "7"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn schedule_log_has_one_line_per_unit() {
    let o = urdd(&["phases", "--m", "5", "--schedule", "cpr", "--seed", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 5);
    assert!(text.starts_with("# mode=cpr"));
}

#[test]
fn validate_passes() {
    let o = urdd(&["validate"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().count() >= 7);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn witness_lists_terms() {
    let o = urdd(&["witness", "--state", "cluster4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 16);
    assert!(text.starts_with("7/16 IIII\n"));
    let o = urdd(&["witness", "--state", "triplet2", "--mapping"]);
    assert!(stdout(&o).contains("O2 YY CNOT12.Xb2.Xb1 readout 2"));
}

#[test]
fn run_is_deterministic_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let o = urdd(&[
            "run", "--state", "ghz3", "--mode", "cpr", "--m", "9", "--seed", "42", "--trajectories", "10",
            "--out", path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("time_us,m,mode,state,theta_mean,theta_stderr,shots,seed\n"));
    // CPR skips m = 1
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn run_to_stdout_with_sampling() {
    let o = urdd(&[
        "run", "--state", "triplet2", "--mode", "pr", "--m", "2", "--trajectories", "3", "--measurement", "sampled",
        "--shots", "1000",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",1000,0")));
}

#[test]
fn sweep_honours_env_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_urdd"))
        .args(["sweep", "--states", "triplet2,ghz3", "--modes", "free,standard", "--m", "2", "--trajectories", "2"])
        .env("URDD_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["triplet2_free.csv", "triplet2_standard.csv", "ghz3_free.csv", "ghz3_standard.csv"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(urdd(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(urdd(&["run", "--state", "bell", "--mode", "cpr"]).status.code(), Some(2));
    assert_eq!(urdd(&["run", "--state", "ghz3", "--mode", "cpr", "--bogus"]).status.code(), Some(2));
}

#[test]
fn invalid_experiment_exits_with_one() {
    let o = urdd(&["run", "--state", "ghz3", "--mode", "cpr", "--m", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at least two units"));
}
