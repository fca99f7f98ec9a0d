mod support;

use eventclock::events::{variance_floor_constant, SigmaConvention, DEFAULT_EPSILON_RANGE};
use eventclock_cli::commands;
use eventclock_cli::csv::{Cell, CsvTable};
use eventclock_cli::ScenarioConfig;
use support::scenario;

fn load(file: &str) -> ScenarioConfig {
    ScenarioConfig::load(&scenario(file)).unwrap()
}

fn numbers(t: &CsvTable, name: &str) -> Vec<f64> {
    let i = t.header().iter().position(|h| h == name).unwrap();
    t.rows()
        .iter()
        .map(|r| match r[i] {
            Cell::Number(x) => x,
            ref other => panic!("{name}: {other:?}"),
        })
        .collect()
}

#[test]
fn size_sweep_ratio_is_constant() {
    let out = commands::sweep(&load("sweep_event_time.json")).unwrap();
    let t = &out.tables[0].1;
    for r in numbers(t, "scaling_ratio_to_first") {
        assert!((r - 1.0).abs() <= 1e-10, "{r}");
    }
    let logs = numbers(t, "log10_tau_ev_over_size_power");
    for l in &logs {
        assert!((l - logs[0]).abs() <= 1e-10 * logs[0].abs());
    }
    assert!((out.resolved["size_scaling_exponent"].as_f64().unwrap() + 14.5).abs() < 1e-12);
}

#[test]
fn computed_floor_is_reported() {
    let mut cfg = load("event_time_grain.json");
    let out = commands::event_time(&cfg).unwrap();
    let expected = variance_floor_constant(SigmaConvention::Scaled, DEFAULT_EPSILON_RANGE, 2.0 / 3.0).unwrap();
    assert_eq!(out.resolved["floor"]["constant"], expected.value);
    assert!((expected.value - 0.5).abs() < 1e-6);
    let t = &out.tables[0].1;
    assert!(numbers(t, "floor_constant").iter().all(|c| *c == expected.value));

    cfg.event.sigma_convention = eventclock_cli::config::SigmaConventionConfig::Fundamental;
    let out = commands::event_time(&cfg).unwrap();
    assert!((out.resolved["floor"]["constant"].as_f64().unwrap() - 0.787529).abs() < 1e-5);
}

#[test]
fn event_status_switches_at_tau_ev() {
    let mut cfg = load("event_time_grain.json");
    let tau = commands::event_time(&cfg).unwrap().resolved["tau_ev_crossing_s"]["value"]
        .as_f64()
        .unwrap();
    cfg.event.tau_convention = eventclock_cli::config::TauConventionConfig::Crossing;
    cfg.event_time.as_mut().unwrap().echo_times_s = vec![0.5 * tau, 2.0 * tau];
    let out = commands::event_time(&cfg).unwrap();
    let t = &out.tables[0].1;
    let i = t.header().iter().position(|h| h == "status").unwrap();
    let status: Vec<_> = t.rows().iter().map(|r| r[i].clone()).collect();
    assert_eq!(status, [Cell::from("no_event"), Cell::from("event")]);
}

#[test]
fn witness_blind_phases() {
    let mut cfg = load("event_time_grain.json");
    let wp = cfg.event_time.as_mut().unwrap().wavepacket.as_mut().unwrap();
    wp.b = eventclock_cli::config::Cx::Real(std::f64::consts::FRAC_1_SQRT_2);
    let out = commands::event_time(&cfg).unwrap();
    let t = &out.tables[0].1;
    let i = t.header().iter().position(|h| h == "status").unwrap();
    assert!(t.rows().iter().all(|r| r[i] == Cell::from("witness_blind")));
}

#[test]
fn master_equation_tracks_closed_form() {
    let out = commands::evolve(&load("evolve_qutrit.json")).unwrap();
    let t = &out.tables[0].1;
    let d = numbers(t, "distance_to_closed_form");
    assert_eq!(d[0], 0.0);
    assert!(d.iter().all(|x| *x < 1e-5), "{d:?}");
    for tr in numbers(t, "trace") {
        assert!((tr - 1.0).abs() < 1e-12);
    }
    let purity = numbers(t, "purity");
    assert!(purity.windows(2).all(|p| p[1] <= p[0]));
}

#[test]
fn echo_witness_matches_factor() {
    let out = commands::echo(&load("echo_qubit.json")).unwrap();
    let t = &out.tables[0].1;
    let w = numbers(t, "witness");
    let w0 = numbers(t, "initial_witness");
    let i = t.header().iter().position(|h| h == "exact_factor").unwrap();
    let j = t.header().iter().position(|h| h == "bound").unwrap();
    for (k, row) in t.rows().iter().enumerate() {
        let Cell::Number(f) = row[i] else { panic!() };
        assert!((w[k] - f * w0[k]).abs() < 1e-12);
        if let Cell::Number(b) = row[j] {
            assert!(b + 1e-12 >= w[k].abs());
        }
    }
}

#[test]
fn direct_and_scattering_inputs_are_exclusive() {
    let text = r#"{"scattering": {"size_m": 1e-8, "particle_density_per_m3": 1e20, "temperature_K": 3},
                   "event_time": {"decoherence_time_s": 1, "separation_m": 1e-8}}"#;
    let cfg = ScenarioConfig::parse(text).unwrap();
    let err = commands::event_time(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}
