use std::process::{Command, Output};

fn osdma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osdma"))
        .args(args)
        .env_remove("OSDMA_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn scaling_subcommand() {
    let o = osdma(&["scaling", "--K", "48", "--combiner", "oc"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.lines().any(|l| l.starts_with("48,oc,14.339")), "{s}");
}

#[test]
fn cdf_subcommand_hand_values() {
    let o = osdma(&["cdf", "--x-max", "1", "--points", "1"]);
    assert!(o.status.success());
    let s = stdout(&o);
    for line in [
        "1,measured,0.875,",
        "1,sc,0.765625,",
        "1,mrc,0.6875,",
        "1,oc,0.5,",
    ] {
        assert!(s.contains(line), "missing {line} in {s}");
    }
}

#[test]
fn asymptotic_subcommand() {
    let o = osdma(&["asymptotic", "--K", "50"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("combiner,C_exact,C_asymptotic_or_blank,C_scaling_or_blank"));
    assert_eq!(s.lines().filter(|l| !l.starts_with('#')).count(), 4);
}

#[test]
fn throughput_is_seeded_by_flag_or_environment() {
    let args = ["throughput", "--K", "5", "--trials", "300", "--sigma2", "1"];
    let a = osdma(&[&args[..], &["--seed", "9"]].concat());
    let b = Command::new(env!("CARGO_BIN_EXE_osdma"))
        .args(args)
        .env("OSDMA_SEED", "9")
        .output()
        .unwrap();
    let c = osdma(&[&args[..], &["--seed", "10"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert!(stdout(&a).contains("# seed = 9"));
}

#[test]
fn config_file_then_flags() {
    let dir = std::env::temp_dir().join(format!("osdma-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(
        &cfg,
        "K = 3\nsigma2 = 0.5, 1, 2\ntrials = 200\ncombiner = mrc\n",
    )
    .unwrap();
    let o = osdma(&[
        "throughput",
        "--config",
        cfg.to_str().unwrap(),
        "--combiner",
        "sc",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.contains("# sigma2 = 0.5,1,2"));
    assert!(s.contains("# combiner = sc"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn figure_writes_csv_and_plot_script() {
    let dir = std::env::temp_dir().join(format!("osdma-plot-{}", std::process::id()));
    let out = dir.join("fig4.csv");
    let o = osdma(&[
        "figure",
        "4",
        "--out",
        out.to_str().unwrap(),
        "--plot",
        "--combiner",
        "sc",
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("ignores the combiner override"));
    assert!(std::fs::read_to_string(&out)
        .unwrap()
        .starts_with("# figure = 4"));
    assert!(std::fs::read_to_string(dir.join("fig4.py"))
        .unwrap()
        .contains("read_csv"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn validate_reports_json_and_exit_status() {
    let o = osdma(&["validate", "ordering", "--trials", "20"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["suite"], "ordering");
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));

    // too few samples for a KS statistic is an error, not a silent pass
    let o = osdma(&["validate", "cdf", "--trials", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_input_is_rejected() {
    assert!(!osdma(&["figure", "9"]).status.success());
    assert_eq!(osdma(&["validate", "nonsense"]).status.code(), Some(2));
    assert_eq!(
        osdma(&["throughput", "--M", "2", "--N", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        osdma(&[
            "throughput",
            "--sigma2",
            "0",
            "--M",
            "2",
            "--N",
            "2",
            "--combiner",
            "oc"
        ])
        .status
        .code(),
        Some(2)
    );
}
