use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frontspeed"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Parses a CSV table into its header and numeric-or-text rows.
fn table(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(text: &str, name: &str) -> Vec<f64> {
    let (header, rows) = table(text);
    let i = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn speed_kpp_limit_example() {
    let out = stdout(&run(&["speed", "--reaction", "fisher", "--kappa", "1e6"]));
    let c = column(&out, "c_star")[0];
    assert!((c - 2.0).abs() <= 1e-3, "c(kappa=1e6) = {c}");
}

#[test]
fn speed_single_kappa() {
    let out = stdout(&run(&["speed", "--reaction", "fisher", "--kappa", "1"]));
    assert_eq!(
        out.lines().next(),
        Some("kappa,c_star,bracket_lo,bracket_hi,residual,c_rd")
    );
    let c = column(&out, "c_star")[0];
    assert!((c - 0.3643707).abs() < 1e-6);
    assert_eq!(column(&out, "c_rd")[0], 2.0);
}

#[test]
fn zfk_trial_example() {
    let out = stdout(&run(&[
        "bound",
        "--reaction",
        "fisher",
        "--kappa",
        "1",
        "--trial",
        "zfk",
    ]));
    let c = column(&out, "c_lower")[0];
    assert!((c - 0.3372).abs() < 5e-5, "{c}");
    assert!((c - 0.337203).abs() < 1e-6);
}

#[test]
fn compare_table_properties() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("compare.csv");
    let script = dir.path().join("compare.gp");
    let d = data.to_str().unwrap();
    stdout(&run(&[
        "compare",
        "--out",
        d,
        "--script",
        script.to_str().unwrap(),
    ]));
    let text = fs::read_to_string(&data).unwrap();
    let (header, rows) = table(&text);
    assert_eq!(
        header,
        [
            "kappa",
            "c_shoot",
            "c_bound_simple_direct",
            "c_bound_simple_paper",
            "c_bound_hyper",
            "c_zfk"
        ]
    );
    assert_eq!(rows.len(), 40);
    let kappa = column(&text, "kappa");
    assert_eq!(kappa[0], 0.05);
    assert_eq!(kappa[39], 50.0);
    let shoot = column(&text, "c_shoot");
    let hyper = column(&text, "c_bound_hyper");
    for i in 0..40 {
        assert!(hyper[i] <= shoot[i]);
    }
    assert!(shoot.windows(2).all(|w| w[1] > w[0]));
    assert!(hyper.windows(2).all(|w| w[1] > w[0]));
    let gp = fs::read_to_string(&script).unwrap();
    assert!(gp.contains(d) && gp.contains("set logscale x"));
}

#[test]
fn output_is_deterministic_across_worker_counts() {
    let a = run(&[
        "speed",
        "--reaction",
        "combustion",
        "--params",
        "a=0.3",
        "--kappa-grid",
        "0.1:10:9",
        "--jobs",
        "1",
    ]);
    let b = run(&[
        "speed",
        "--reaction",
        "combustion",
        "--params",
        "a=0.3",
        "--kappa-grid",
        "0.1:10:9",
        "--jobs",
        "4",
    ]);
    let c = run(&[
        "speed",
        "--reaction",
        "combustion",
        "--params",
        "a=0.3",
        "--kappa-grid",
        "0.1:10:9",
        "--jobs",
        "4",
    ]);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(a.stdout, c.stdout);
    let kappa = column(&stdout(&a), "kappa");
    assert_eq!(kappa.len(), 9);
    assert!(kappa.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn json_mirrors_csv() {
    let args = [
        "bound",
        "--reaction",
        "fisher",
        "--kappa-grid",
        "0.5,2",
        "--trial",
        "fisher-hyper",
    ];
    let csv = stdout(&run(&args));
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let json = stdout(&run(&json_args));
    let lines: Vec<serde_json::Value> = json.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    let c = column(&csv, "c_lower");
    for (row, expected) in lines.iter().zip(c) {
        assert_eq!(row["c_lower"].as_f64().unwrap(), expected);
        assert_eq!(row["trial"], "fisher_hyper");
    }
}

#[test]
fn optimized_bound_stays_below_speed() {
    let speed = column(
        &stdout(&run(&["speed", "--reaction", "fisher", "--kappa", "2"])),
        "c_star",
    )[0];
    for family in ["linear", "exp", "rational", "power_pair", "power_general"] {
        let out = stdout(&run(&[
            "bound",
            "--reaction",
            "fisher",
            "--kappa",
            "2",
            "--trial",
            family,
            "--optimize",
        ]));
        let c = column(&out, "c_lower")[0];
        assert!(c > 0.0 && c <= speed, "{family}: {c} vs {speed}");
    }
}

#[test]
fn optimal_trial_recovers_speed() {
    let out = stdout(&run(&[
        "bound",
        "--reaction",
        "fisher",
        "--kappa",
        "1",
        "--trial",
        "optimal",
    ]));
    let c = column(&out, "c_lower")[0];
    assert!(((c - 0.3643707) / 0.3643707).abs() < 1e-4);
}

#[test]
fn sweep_over_m_is_decreasing() {
    let out = stdout(&run(&["sweep", "--m-grid", "1:3:5", "--kappa", "1"]));
    assert_eq!(out.lines().next(), Some("m,kappa,c_star,c_rd,c_zfk_lower"));
    let c = column(&out, "c_star");
    assert_eq!(c.len(), 5);
    assert!(c.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn config_file_reaction() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    fs::write(&path, r#"{"type": "polynomial", "coefficients": [0, 1, -1]}"#).unwrap();
    let from_config = stdout(&run(&[
        "speed",
        "--config",
        path.to_str().unwrap(),
        "--kappa",
        "1",
    ]));
    let builtin = stdout(&run(&["speed", "--reaction", "fisher", "--kappa", "1"]));
    let a = column(&from_config, "c_star")[0];
    let b = column(&builtin, "c_star")[0];
    assert!((a - b).abs() < 1e-9);
}

#[test]
fn simulate_writes_trajectory_files() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("run");
    let out = stdout(&run(&[
        "simulate",
        "--reaction",
        "fisher",
        "--kappa",
        "1",
        "--l0",
        "5",
        "--n-xi",
        "201",
        "--t-end",
        "40",
        "--prefix",
        prefix.to_str().unwrap(),
    ]));
    let (_, rows) = table(&out);
    assert_eq!(rows[0][7], "spreading");
    let traj = fs::read_to_string(dir.path().join("run_trajectory.csv")).unwrap();
    assert_eq!(traj.lines().next(), Some("t,L,Ldot"));
    assert_eq!(traj.lines().count(), 82);
    let profile = fs::read_to_string(dir.path().join("run_profile.csv")).unwrap();
    assert_eq!(profile.lines().next(), Some("xi,u"));
    assert_eq!(profile.lines().count(), 202);
}

#[test]
fn selftest_subset() {
    let out = stdout(&run(&["selftest", "--only", "6,7,13"]));
    assert_eq!(out.lines().filter(|l| l.starts_with("[PASS]")).count(), 3);
    assert!(out.contains("acceptance: 3 passed, 0 failed"));
}

#[test]
fn invalid_specs_fail_with_message() {
    let cases: &[&[&str]] = &[
        &["speed", "--kappa", "1"],
        &["speed", "--reaction", "fisher"],
        &["speed", "--reaction", "nope", "--kappa", "1"],
        &["speed", "--reaction", "fisher", "--kappa", "-1"],
        &["speed", "--reaction", "fisher", "--kappa-grid", "2,1"],
        &[
            "speed",
            "--reaction",
            "fisher",
            "--config",
            "x.json",
            "--kappa",
            "1",
        ],
        &[
            "bound",
            "--reaction",
            "fisher",
            "--kappa",
            "1",
            "--trial",
            "linear",
        ],
        &[
            "bound",
            "--reaction",
            "mkpp",
            "--kappa",
            "1",
            "--trial",
            "fisher-hyper",
        ],
        &[
            "bound",
            "--reaction",
            "fisher",
            "--kappa",
            "1",
            "--trial",
            "zfk",
            "--optimize",
        ],
        &["sweep", "--reaction", "fisher", "--m-grid", "1,2", "--kappa", "1"],
        &["selftest", "--only", "99"],
    ];
    for args in cases {
        let out = run(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty(), "{args:?} should explain");
    }
}
