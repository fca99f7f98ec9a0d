mod support;

use support::{run, run_scenario, scenario, write_config, Table};

const BUNDLED: [(&str, &str); 8] = [
    ("fr-demo", "fr_demo.json"),
    ("event-table", "event_table.json"),
    ("sweep", "sweep_echo_bound.json"),
    ("sweep", "sweep_variance_coefficient.json"),
    ("sweep", "sweep_event_time.json"),
    ("echo", "echo_qubit.json"),
    ("evolve", "evolve_qutrit.json"),
    ("event-time", "event_time_grain.json"),
];

#[test]
fn bundled_scenarios_run_and_validate() {
    for (command, file) in BUNDLED {
        let dir = tempfile::tempdir().unwrap();
        let out = run_scenario(command, &scenario(file), dir.path(), &[]);
        assert!(out.status.success(), "{file}: {}", String::from_utf8_lossy(&out.stderr));
        let v = run(&["validate-config", "--config", scenario(file).to_str().unwrap()]);
        assert!(v.status.success(), "{file}: {}", String::from_utf8_lossy(&v.stderr));
        for entry in std::fs::read_dir(dir.path()).unwrap() {
            let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
            let lower = text.to_lowercase();
            assert!(!lower.contains("nan") && !lower.contains("inf"), "{file}");
        }
    }
}

#[test]
fn fr_demo_mixture_and_decay() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_scenario("fr-demo", &scenario("fr_demo.json"), dir.path(), &[]).status.success());
    let states = Table::read(&dir.path().join("fr_demo.csv"));
    assert_eq!(states.text("label"), ["h0", "h1", "t0", "t1"]);
    let mixed = states.column("event_population");
    for (got, want) in mixed.iter().zip([1.0 / 3.0, 0.0, 1.0 / 3.0, 1.0 / 3.0]) {
        assert!((got - want).abs() < 1e-8);
    }
    assert!(states.column("event_offdiagonal_max").iter().all(|x| *x < 1e-15));

    let decay = Table::read(&dir.path().join("fr_demo_echo.csv"));
    let w: Vec<f64> = decay.column("witness").iter().map(|x| x.abs()).collect();
    assert!(w.windows(2).all(|p| p[1] <= p[0]));
    assert!(w[w.len() - 1] < 1e-12 * w[0]);
}

#[test]
fn event_table_rows() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_scenario("event-table", &scenario("event_table.json"), dir.path(), &[]).status.success());
    let t = Table::read(&dir.path().join("event_table.csv"));
    assert_eq!(t.column("size_m"), [1e-8, 1e-5, 1e-4]);
    let logs = t.column("log10_tau_ev");
    for (got, target) in logs.iter().zip([44.0f64, 50f64.log10(), -12.0]) {
        assert!((got.floor() - target.floor()).abs() <= 1.0, "{got} vs {target}");
    }
    let tau = t.column("tau_ev_s");
    assert!((5.0..=500.0).contains(&tau[1]));
    assert!((1e-14..=1e-10).contains(&tau[2]));
    let crossing = t.column("log10_tau_ev_crossing");
    for (c, l) in crossing.iter().zip(&logs) {
        assert!((c - l - 1.5 * 2f64.log10()).abs() < 1e-7);
    }
}

#[test]
fn echo_bound_sweep_decreases() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_scenario("sweep", &scenario("sweep_echo_bound.json"), dir.path(), &[]).status.success());
    let t = Table::read(&dir.path().join("sweep.csv"));
    let bound = t.column("log10_bound");
    assert_eq!(bound.len(), 51);
    assert!(bound.windows(2).all(|p| p[1] < p[0]));
    // T^(-1/3): one decade in T is a third of a decade in the bound
    assert!((bound[0] - bound[1] - 1.0 / 3.0).abs() < 1e-7);
    let event = t.column("event");
    assert!(event.windows(2).all(|p| p[1] >= p[0]));
    assert_eq!(event[0], 0.0);
    assert_eq!(event[50], 1.0);
}

#[test]
fn variance_sweep_minimum() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_scenario("sweep", &scenario("sweep_variance_coefficient.json"), dir.path(), &[]).status.success());
    let t = Table::read(&dir.path().join("sweep.csv"));
    let eps = t.column("epsilon");
    let sigma = t.column("sigma_scaled");
    let i = (0..sigma.len()).min_by(|&a, &b| sigma[a].total_cmp(&sigma[b])).unwrap();
    assert!((eps[i] - 0.408).abs() < 0.01, "{}", eps[i]);
    assert!((sigma[i] - 0.5).abs() < 1e-3);
    assert!(sigma.iter().all(|s| *s > 0.0));
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    for (command, file) in [("sweep", "sweep_event_time.json"), ("fr-demo", "fr_demo.json"), ("evolve", "evolve_qutrit.json")] {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        assert!(run_scenario(command, &scenario(file), a.path(), &["--threads", "1"]).status.success());
        assert!(run_scenario(command, &scenario(file), b.path(), &["--threads", "4", "--format", "csv"]).status.success());
        let mut names: Vec<_> = std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        names.sort();
        for name in names {
            let x = std::fs::read(a.path().join(&name)).unwrap();
            let y = std::fs::read(b.path().join(&name)).unwrap();
            assert_eq!(x, y, "{file}: {name:?}");
        }
    }
}

#[test]
fn manifest_echoes_resolved_conventions() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_scenario("event-table", &scenario("event_table.json"), dir.path(), &[]).status.success());
    let text = std::fs::read_to_string(dir.path().join("manifest.json")).unwrap();
    let m: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(m["command"], "event-table");
    assert_eq!(m["resolved"]["tau_convention"], "table_prefactor");
    assert_eq!(m["resolved"]["floor"]["constant"], 2.0);
    assert_eq!(m["resolved"]["constants"]["planck_time_s"], 5e-44);
    assert_eq!(m["config"]["scattering"]["particle_density_per_m3"], 3e23);
    assert!(m["resolved"]["calibrated_anchor_mass_kg"].as_f64().unwrap() > 0.0);
    assert_eq!(m["outputs"], serde_json::json!(["event_table.csv"]));
}

#[test]
fn empty_config_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "empty.json", "");
    let out = run_scenario("sweep", &cfg, dir.path(), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("usage"));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["sweep"]).status.code(), Some(2));
}

#[test]
fn config_errors_exit_2_with_key_context() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"scattering": {"size_m": 1e-8, "temperature": 300}}"#, "scattering"),
        (r#"{"sweep": {"parameter": "epsilon", "start": 2, "stop": 1, "points": 5, "spacing": "log"}}"#, "increasing"),
        (r#"{"sweep": {"parameter": "epsilon", "start": 1, "stop": 2, "points": 0, "spacing": "log"}}"#, "points"),
        (
            r#"{"constants": {"uncertainty_exponent": 1.5}, "sweep": {"parameter": "epsilon", "start": 1, "stop": 2, "points": 5, "spacing": "log"}}"#,
            "uncertainty_exponent",
        ),
        ("{\n  \"bogus\": 1\n}", "line 2"),
    ];
    for (body, needle) in cases {
        let cfg = write_config(dir.path(), "c.json", body);
        let out = run_scenario("sweep", &cfg, &dir.path().join("out"), &[]);
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(out.status.code(), Some(2), "{body}: {err}");
        assert!(err.contains(needle), "{body}: {err}");
    }
}

#[test]
fn physics_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"pointer_model": {"amplitudes": [1, 1], "overlap": "exponential", "decoherence_time_s": 1},
            "echo": {"times_s": [1]}}"#,
    );
    let out = run_scenario("echo", &cfg, dir.path(), &[]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let cfg = write_config(
        dir.path(),
        "d.json",
        r#"{"scattering": {"size_m": 1e-8, "particle_density_per_m3": 1e20, "temperature_K": -3},
            "event_table": {"sizes_m": [1e-8]}}"#,
    );
    let out = run_scenario("event-table", &cfg, dir.path(), &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ScatteringScenario"));
}

#[test]
fn io_errors_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(run_scenario("fr-demo", &missing, dir.path(), &[]).status.code(), Some(4));
    let blocker = write_config(dir.path(), "file", "x");
    let out = run_scenario("fr-demo", &scenario("fr_demo.json"), &blocker.join("sub"), &[]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn validate_config_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "validate-config",
        "--config",
        scenario("event_table.json").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["resolved"]["blocks"].as_array().unwrap().iter().any(|b| b == "event_table"));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}
