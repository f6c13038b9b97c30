use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn adas(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adas"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn solve_default_writes_both_files() {
    let dir = TempDir::new().unwrap();
    let out = adas(&["solve"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let eq = json(&dir.path().join("equilibrium.json"));
    let eff = json(&dir.path().join("efficiency.json"));
    assert!(eq["residual"].as_f64().unwrap() <= 1e-12);
    assert!(eff["theta_star"].as_f64().unwrap() > 0.0);

    // Independent check: the AS-AD sign change brackets the reported tightness.
    let theta = eq["theta"].as_f64().unwrap();
    let excess = |t: f64| {
        let (mu, eta, lambda, kappa) = (0.60_f64, 0.5_f64, 0.035_f64, 0.92_f64);
        let f = mu * t.powf(1.0 - eta);
        let q = mu * t.powf(-eta);
        let supply = f / (lambda + f);
        let wedge = kappa * lambda / (q - kappa * lambda);
        let demand = ((0.004 - 0.002) / 0.002011620104600386_f64).powi(2) / (1.0 + wedge);
        supply - demand
    };
    assert!(excess(theta * (1.0 - 1e-9)) < 0.0);
    assert!(excess(theta * (1.0 + 1e-9)) > 0.0);
}

#[test]
fn config_file_with_return_above_discount_rate_exits_2() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(
        &cfg,
        "# r = 0.01 - 0.002 > delta\ndelta = 0.004\ni = 0.01\n",
    )
    .unwrap();
    let out = adas(&["solve", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert_eq!(msg.trim().lines().count(), 1);
    assert!(msg.contains("delta") && msg.contains("r - tau_w"), "{msg}");
    assert!(!dir.path().join("equilibrium.json").exists());
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("typo.cfg");
    fs::write(&cfg, "detla = 0.004\n").unwrap();
    let out = adas(&["solve", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_config_file_exits_1() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("absent.cfg");
    let out = adas(&["solve", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn flag_overrides_config_file() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "i = 0.01\n").unwrap();
    let out = adas(
        &["solve", "--config", cfg.to_str().unwrap(), "--i", "0.003"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let eq = json(&dir.path().join("equilibrium.json"));
    assert_eq!(eq["params"]["policy"]["i"].as_f64(), Some(0.003));
}

#[test]
fn target_u_round_trip() {
    let dir = TempDir::new().unwrap();
    let out = adas(&["solve", "--target-u", "0.06"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let eq = json(&dir.path().join("equilibrium.json"));
    assert!((eq["u"].as_f64().unwrap() - 0.06).abs() < 1e-6);
}

#[test]
fn curves_three_point_grid() {
    let dir = TempDir::new().unwrap();
    let out = adas(&["curves", "--theta-count", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("curves.csv"));
    assert_eq!(rows.len(), 3);
    let meta = json(&dir.path().join("curves.meta.json"));
    assert!(meta["markers"]["theta_eq"].as_f64().unwrap() > 0.0);
    assert!(meta["markers"]["theta_star"].as_f64().unwrap() > 0.0);
}

#[test]
fn curves_columns_behave() {
    let dir = TempDir::new().unwrap();
    let out = adas(&["curves", "--theta-count", "200"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("curves.csv"));
    let col = |k: usize| -> Vec<f64> { rows.iter().map(|r| r[k].parse().unwrap()).collect() };
    let (supply, demand, zlb) = (col(1), col(2), col(3));
    assert!(supply.windows(2).all(|w| w[1] >= w[0]));
    assert!(demand.windows(2).all(|w| w[1] <= w[0]));
    assert!(zlb.iter().zip(&demand).all(|(z, d)| z >= d));
}

#[test]
fn table1_writes_six_rows() {
    let dir = TempDir::new().unwrap();
    let out = adas(&["table1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("statics.csv"));
    let signs: Vec<Vec<&str>> = rows
        .iter()
        .map(|r| r[5..10].iter().map(String::as_str).collect())
        .collect();
    assert_eq!(
        signs,
        vec![
            vec!["-", "-", "-", "+", "0"],
            vec!["-", "-", "-", "+", "0"],
            vec!["+", "-", "+", "-", "0"],
            vec!["+", "-", "-", "-", "0"],
            vec!["+", "+", "+", "-", "0"],
            vec!["+", "+", "+", "-", "0"],
        ]
    );
}

#[test]
fn zero_shock_has_zero_deltas() {
    let dir = TempDir::new().unwrap();
    let out = adas(
        &[
            "shock",
            "--target",
            "delta",
            "--direction",
            "decrease",
            "--magnitude",
            "0",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("statics.csv"));
    assert_eq!(rows.len(), 1);
    for d in &rows[0][10..15] {
        assert_eq!(d.parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn unknown_shock_target_exits_2() {
    let dir = TempDir::new().unwrap();
    let out = adas(
        &["shock", "--target", "rho", "--direction", "increase"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unparsable_argument_exits_2() {
    let dir = TempDir::new().unwrap();
    let out = adas(&["solve", "--delta", "abc"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn policy_gap_and_multiplier_prescribe_ten_point_cut() {
    let dir = TempDir::new().unwrap();
    let out = adas(
        &[
            "policy",
            "--gap",
            "0.05",
            "--multiplier",
            "0.5",
            "--i",
            "0.15",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let p = json(&dir.path().join("policy.json"));
    assert_eq!(p["change"].as_f64(), Some(-0.1));
    assert!((p["optimal_value"].as_f64().unwrap() - 0.05).abs() < 1e-15);
    assert_eq!(p["zlb_binding"].as_bool(), Some(false));
    assert!(String::from_utf8_lossy(&out.stdout).contains("cut by 10.0000 pp"));
}

#[test]
fn exact_policy_in_depressed_economy_hits_zlb() {
    let dir = TempDir::new().unwrap();
    let out = adas(&["policy", "--exact", "--mu-wealth", "0.01"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let p = json(&dir.path().join("policy.json"));
    assert_eq!(p["zlb_binding"].as_bool(), Some(true));
    assert_eq!(p["optimal_value"].as_f64(), Some(0.0));
}

#[test]
fn dynamics_from_beveridge_rate_is_flat() {
    let dir = TempDir::new().unwrap();
    let out = adas(&["dynamics", "--horizon", "24"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("unemployment.csv"));
    let first: f64 = rows[0][1].parse().unwrap();
    for r in &rows {
        let u: f64 = r[1].parse().unwrap();
        assert!((u - first).abs() <= 1e-15);
    }
    let meta = json(&dir.path().join("unemployment.meta.json"));
    assert_eq!(meta["state_label"].as_str(), Some("u"));
    let costate = json(&dir.path().join("costate.meta.json"));
    assert_eq!(costate["details"]["stability"].as_str(), Some("source"));
}

#[test]
fn dynamics_reports_costate_divergence() {
    let dir = TempDir::new().unwrap();
    let out = adas(
        &[
            "dynamics",
            "--gamma-ratio",
            "1.01",
            "--horizon",
            "20000",
            "--dt",
            "0.5",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let costate = json(&dir.path().join("costate.meta.json"));
    assert_eq!(costate["truncated"].as_bool(), Some(true));
    assert_eq!(
        costate["details"]["divergence"].as_str(),
        Some("positive_infinity")
    );
}

#[test]
fn sweep_marks_infeasible_points() {
    let dir = TempDir::new().unwrap();
    let out = adas(
        &[
            "sweep", "--param", "i", "--from", "0", "--to", "0.008", "--count", "5",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("sweep.csv"));
    assert_eq!(rows.len(), 5);
    assert!(rows[2][1].parse::<f64>().is_ok());
    assert!(rows[4][1].is_empty());
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for cmd in [
        &["solve"][..],
        &["curves"],
        &["table1"],
        &["policy"],
        &["dynamics", "--horizon", "12"],
    ] {
        assert_eq!(adas(cmd, a.path()).status.code(), Some(0));
        assert_eq!(adas(cmd, b.path()).status.code(), Some(0));
    }
    let mut names: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.len() >= 10);
    for name in names {
        assert_eq!(
            fs::read(a.path().join(&name)).unwrap(),
            fs::read(b.path().join(&name)).unwrap(),
            "{name:?}"
        );
    }
}
