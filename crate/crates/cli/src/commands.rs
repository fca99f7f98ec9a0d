//! One function per subcommand. Each returns its tables and the resolved
//! parameters echoed into the run manifest.

use eventclock::clock::{effective_state, master_equation_evolve, ClockKernel};
use eventclock::decoherence::{
    calibrate_mass, decoherence_time, event_map, scattering_constant, JointModel, MassSpec, ScatteringScenario,
};
use eventclock::echo::{
    coherence_witness, distinguishability_bound_magnitude, distinguishability_factor, echo_with_clock, EchoSystem,
};
use eventclock::events::{
    event_report, event_time_table, tau_event, uncertainty_floor, variance_coefficient, EventStatus, EventTable,
    SigmaConvention, TauConvention,
};
use eventclock::planck::FundamentalUncertainty;
use eventclock::qcore::{DensityOperator, HamiltonianSpec, C64};
use eventclock::Magnitude;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{
    require, EventTimeConfig, EvolveMethod, ResolvedFloor, ScenarioConfig, SweepParameter,
};
use crate::csv::{Cell, CsvTable};
use crate::error::{CliError, Result};

/// Tables to write plus manifest material.
#[derive(Debug, Default)]
pub struct Output {
    pub tables: Vec<(String, CsvTable)>,
    pub resolved: serde_json::Map<String, Value>,
    pub notes: Vec<String>,
}

impl Output {
    fn resolve(&mut self, key: &str, value: Value) {
        self.resolved.insert(key.to_owned(), value);
    }
}

fn finite_json(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn magnitude_json(m: Magnitude) -> Value {
    json!({ "value": m.to_f64().map_or(Value::Null, finite_json), "log10": finite_json(m.log10()) })
}

fn constants_json(law: &FundamentalUncertainty) -> Value {
    let k = law.constants();
    json!({
        "hbar_J_s": k.hbar(),
        "boltzmann_J_per_K": k.boltzmann(),
        "planck_time_s": k.planck_time(),
        "planck_length_m": k.planck_length(),
        "uncertainty_exponent": law.exponent(),
    })
}

fn kernel_json(kernel: &ClockKernel) -> Value {
    match kernel {
        ClockKernel::IdealDelta => json!({ "kernel": "ideal" }),
        ClockKernel::GaussianFundamental(_) => json!({ "kernel": "fundamental" }),
        ClockKernel::GaussianFixed { width } => json!({ "kernel": "gaussian_fixed", "width_s": width }),
        ClockKernel::Tabulated(t) => json!({ "kernel": "tabulated", "points": t.points().count(), "mass": t.mass() }),
    }
}

fn floor_json(floor: ResolvedFloor, cfg: &ScenarioConfig) -> Value {
    json!({
        "mode": cfg.event.floor,
        "sigma_convention": cfg.event.sigma_convention,
        "constant": floor.value,
        "minimizing_epsilon": floor.epsilon,
    })
}

fn tau_name(c: TauConvention) -> &'static str {
    match c {
        TauConvention::Crossing => "crossing",
        TauConvention::TablePrefactor => "table_prefactor",
    }
}

/// Row computation fanned out over the worker pool, collected in input order.
fn parallel_rows<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<Vec<Cell>> + Sync + Send) -> Result<Vec<Vec<Cell>>> {
    items.par_iter().map(f).collect()
}

fn fill(table: &mut CsvTable, rows: Vec<Vec<Cell>>) {
    for row in rows {
        table.push(row);
    }
}

fn energy_coherence(rho: &DensityOperator, h: &HamiltonianSpec) -> (Vec<f64>, f64) {
    let m = h.to_energy_basis(rho.matrix());
    let n = m.rows();
    let pops = (0..n).map(|i| m[(i, i)].re).collect();
    let mut l1 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                l1 += m[(i, j)].norm();
            }
        }
    }
    (pops, l1)
}

pub fn evolve(cfg: &ScenarioConfig) -> Result<Output> {
    let sys = require(&cfg.system, "system", "evolve")?;
    let ev = require(&cfg.evolve, "evolve", "evolve")?;
    ev.validate()?;
    let law = cfg.law()?;
    let h = sys.hamiltonian(law.constants().hbar())?;
    let rho0 = sys.state()?;
    if rho0.dim() != h.dim() {
        return Err(CliError::config(format!(
            "system state has dimension {} but the Hamiltonian has {}",
            rho0.dim(),
            h.dim()
        )));
    }
    let kernel = cfg.kernel()?;
    if ev.method == EvolveMethod::MasterEquation && !matches!(kernel, ClockKernel::GaussianFundamental(_)) {
        return Err(CliError::config("method master_equation requires the fundamental clock kernel"));
    }
    let n = h.dim();
    let mut header: Vec<String> = ["time_s", "purity", "trace", "min_eigenvalue", "energy_coherence_l1"]
        .map(String::from)
        .to_vec();
    header.extend((0..n).map(|i| format!("energy_population_{i}")));
    header.push("distance_to_closed_form".into());
    let mut table = CsvTable::new(header);

    let t_first = ev.times_s[0];
    let indexed: Vec<(usize, f64)> = ev.times_s.iter().copied().enumerate().collect();
    let rows = parallel_rows(&indexed, |&(i, t)| {
        let closed = effective_state(&rho0, &h, t, &kernel)?;
        let (state, distance) = match ev.method {
            EvolveMethod::ClosedForm => (closed, None),
            EvolveMethod::MasterEquation if i == 0 => (closed, Some(0.0)),
            EvolveMethod::MasterEquation => {
                let integrated = master_equation_evolve(&rho0, &h, &law, t_first, t, ev.steps_per_interval * i)?;
                let d = integrated.distance(&closed);
                (integrated, Some(d))
            }
        };
        let (pops, l1) = energy_coherence(&state, &h);
        let mut row = vec![
            Cell::Number(t),
            Cell::Number(state.purity()),
            Cell::Number(state.trace().re),
            Cell::Number(state.min_eigenvalue()),
            Cell::Number(l1),
        ];
        row.extend(pops.into_iter().map(Cell::Number));
        row.push(Cell::optional(distance));
        Ok(row)
    })?;
    fill(&mut table, rows);

    let mut out = Output::default();
    out.resolve("constants", constants_json(&law));
    out.resolve("clock", kernel_json(&kernel));
    out.resolve("energies_J", json!(h.energies()));
    out.resolve("method", json!(ev.method));
    out.tables.push(("evolve.csv".into(), table));
    Ok(out)
}

pub fn echo(cfg: &ScenarioConfig) -> Result<Output> {
    let pm = require(&cfg.pointer_model, "pointer_model", "echo")?;
    let ec = require(&cfg.echo, "echo", "echo")?;
    if ec.times_s.is_empty() || ec.times_s.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err(CliError::config("echo.times_s must list non-negative finite times"));
    }
    let law = cfg.law()?;
    let model = pm.resolve(law.constants().hbar())?;
    let [j, k] = ec.witness;
    let witness = coherence_witness(model.pointer_states(), j, k)?;
    let system = EchoSystem::from_pointer_model(model)?;
    let kernel = cfg.kernel()?;

    let mut table = CsvTable::new([
        "time_s",
        "span_width_s",
        "initial_witness",
        "witness",
        "exact_factor",
        "bound",
        "purity",
        "event_state_distance",
    ]);
    let rows = parallel_rows(&ec.times_s, |&t| {
        let r = echo_with_clock(&system, t, &kernel, &witness)?;
        Ok(vec![
            Cell::Number(t),
            Cell::optional(r.span_width),
            Cell::Number(r.initial_witness),
            Cell::Number(r.witness_value),
            Cell::optional(r.exact_factor),
            Cell::optional(r.bound_value),
            Cell::Number(r.final_state.purity()),
            Cell::Number(r.final_state.distance(&r.event_state)),
        ])
    })?;
    fill(&mut table, rows);

    let mut out = Output::default();
    out.resolve("constants", constants_json(&law));
    out.resolve("clock", kernel_json(&kernel));
    out.resolve("witness", json!({ "j": j, "k": k }));
    out.resolve(
        "echo_system",
        json!(match system {
            EchoSystem::Joint(_) => "joint",
            EchoSystem::Exponential(_) => "exponential",
        }),
    );
    out.tables.push(("echo.csv".into(), table));
    Ok(out)
}

/// Mass density after applying the optional calibration anchor, plus the
/// anchor mass when one was solved for.
fn calibrated(cfg: &ScenarioConfig, law: &FundamentalUncertainty) -> Result<(ScatteringScenario, Option<f64>)> {
    let sc = cfg.scattering.as_ref().expect("caller checked the scattering block");
    let s = sc.scenario()?;
    match sc.calibration() {
        None => Ok((s, None)),
        Some(cal) => {
            let anchor = s.rescaled(cal.size);
            let m = calibrate_mass(&anchor, cal.decoherence_time, law.constants())?;
            let density = m / cal.size.powi(3);
            Ok((
                ScatteringScenario {
                    mass: MassSpec::Density(density),
                    ..s
                },
                Some(m),
            ))
        }
    }
}

/// `(τ_D, L)` plus scattering details when they came from a scenario.
struct Timescales {
    decoherence_time: f64,
    separation: f64,
    scattering: Option<(ScatteringScenario, Magnitude, Option<f64>)>,
}

fn timescales(cfg: &ScenarioConfig, et: &EventTimeConfig, law: &FundamentalUncertainty) -> Result<Timescales> {
    match (et.decoherence_time_s, et.separation_m) {
        (Some(tau), Some(l)) => {
            if cfg.scattering.is_some() {
                return Err(CliError::config(
                    "give either event_time.decoherence_time_s with separation_m or a scattering block, not both",
                ));
            }
            for (key, v) in [("event_time.decoherence_time_s", tau), ("event_time.separation_m", l)] {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(CliError::config(format!("{key} must be positive, got {v}")));
                }
            }
            Ok(Timescales {
                decoherence_time: tau,
                separation: l,
                scattering: None,
            })
        }
        (None, None) => {
            if cfg.scattering.is_none() {
                return Err(CliError::config(
                    "needs event_time.decoherence_time_s and separation_m, or a scattering block",
                ));
            }
            let (s, anchor_mass) = calibrated(cfg, law)?;
            let tau = decoherence_time(&s, law.constants())?;
            let tau_lin = tau.to_f64().ok_or_else(|| {
                CliError::Physics(eventclock::Error::Domain {
                    context: "decoherence_time",
                    reason: format!("τ_D = 10^{:.3} s is outside the f64 range", tau.log10()),
                })
            })?;
            Ok(Timescales {
                decoherence_time: tau_lin,
                separation: s.separation,
                scattering: Some((s, scattering_constant(&s, law.constants())?, anchor_mass)),
            })
        }
        _ => Err(CliError::config("event_time.decoherence_time_s and separation_m go together")),
    }
}

fn status_name(s: EventStatus) -> &'static str {
    match s {
        EventStatus::Event => "event",
        EventStatus::NoEvent => "no_event",
        EventStatus::WitnessBlind => "witness_blind",
    }
}

pub fn event_time(cfg: &ScenarioConfig) -> Result<Output> {
    let default = EventTimeConfig::default();
    let et = cfg.event_time.as_ref().unwrap_or(&default);
    if et.echo_times_s.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(CliError::config("event_time.echo_times_s entries must be positive and finite"));
    }
    let law = cfg.law()?;
    let floor = cfg.event.floor(&law)?;
    let convention: TauConvention = cfg.event.tau_convention.into();
    let ts = timescales(cfg, et, &law)?;
    let wavepacket = et.wavepacket(ts.separation)?;

    let mut out = Output::default();
    if let Some(warning) = wavepacket.as_ref().and_then(|w| w.overlap_warning()) {
        out.notes.push(warning);
    }
    let crossing = tau_event(ts.decoherence_time, ts.separation, TauConvention::Crossing, floor.value, &law)?;
    let table_tau = tau_event(ts.decoherence_time, ts.separation, TauConvention::TablePrefactor, floor.value, &law)?;
    let selected = match convention {
        TauConvention::Crossing => crossing,
        TauConvention::TablePrefactor => table_tau,
    };
    let floor_mag = uncertainty_floor(ts.separation, floor.value, &law)?;
    let (mass, lambda) = match &ts.scattering {
        Some((s, lambda, _)) => (Cell::Number(s.mass_kg()), Cell::log10(*lambda)),
        None => (Cell::Empty, Cell::Empty),
    };

    let mut table = CsvTable::new([
        "echo_time_s",
        "decoherence_time_s",
        "separation_m",
        "mass_kg",
        "log10_scattering_constant",
        "floor_constant",
        "tau_ev_s",
        "log10_tau_ev",
        "tau_ev_crossing_s",
        "log10_tau_ev_crossing",
        "tau_ev_table_s",
        "log10_tau_ev_table",
        "log10_bound",
        "log10_floor",
        "status",
    ]);
    let common = |echo: Cell, bound: Cell, status: Cell| {
        vec![
            echo,
            Cell::Number(ts.decoherence_time),
            Cell::Number(ts.separation),
            mass.clone(),
            lambda.clone(),
            Cell::Number(floor.value),
            Cell::linear(selected),
            Cell::log10(selected),
            Cell::linear(crossing),
            Cell::log10(crossing),
            Cell::linear(table_tau),
            Cell::log10(table_tau),
            bound,
            Cell::log10(floor_mag),
            status,
        ]
    };
    if et.echo_times_s.is_empty() {
        table.push(common(Cell::Empty, Cell::Empty, Cell::Empty));
    } else {
        for &t in &et.echo_times_s {
            let r = event_report(
                wavepacket.as_ref(),
                t,
                ts.decoherence_time,
                ts.separation,
                convention,
                floor.value,
                &law,
            )?;
            table.push(common(Cell::Number(t), Cell::log10(r.bound), status_name(r.status).into()));
        }
    }

    out.resolve("constants", constants_json(&law));
    out.resolve("floor", floor_json(floor, cfg));
    out.resolve("tau_convention", json!(tau_name(convention)));
    out.resolve("decoherence_time_s", json!(ts.decoherence_time));
    out.resolve("separation_m", json!(ts.separation));
    if let Some((s, _, anchor)) = &ts.scattering {
        if let MassSpec::Density(rho) = s.mass {
            out.resolve("mass_density_kg_per_m3", json!(rho));
        }
        out.resolve("mass_kg", json!(s.mass_kg()));
        out.resolve("calibrated_anchor_mass_kg", json!(anchor));
    }
    out.resolve("tau_ev_crossing_s", magnitude_json(crossing));
    out.resolve("tau_ev_table_s", magnitude_json(table_tau));
    out.tables.push(("event_time.csv".into(), table));
    Ok(out)
}

const TABLE_COLUMNS: [&str; 12] = [
    "size_m",
    "mass_kg",
    "scattering_constant_per_m2_s",
    "log10_scattering_constant",
    "decoherence_time_s",
    "log10_decoherence_time",
    "tau_ev_s",
    "log10_tau_ev",
    "tau_ev_crossing_s",
    "log10_tau_ev_crossing",
    "tau_ev_table_s",
    "log10_tau_ev_table",
];

fn table_rows(table: &EventTable, convention: TauConvention) -> Vec<Vec<Cell>> {
    table
        .rows
        .iter()
        .map(|r| {
            let selected = match convention {
                TauConvention::Crossing => r.event_time_crossing,
                TauConvention::TablePrefactor => r.event_time_table,
            };
            vec![
                Cell::Number(r.size),
                Cell::Number(r.mass),
                Cell::linear(r.scattering_constant),
                Cell::log10(r.scattering_constant),
                Cell::linear(r.decoherence_time),
                Cell::log10(r.decoherence_time),
                Cell::linear(selected),
                Cell::log10(selected),
                Cell::linear(r.event_time_crossing),
                Cell::log10(r.event_time_crossing),
                Cell::linear(r.event_time_table),
                Cell::log10(r.event_time_table),
            ]
        })
        .collect()
}

fn run_table(cfg: &ScenarioConfig, sizes: &[f64], command: &str) -> Result<(EventTable, ResolvedFloor, FundamentalUncertainty)> {
    let sc = require(&cfg.scattering, "scattering", command)?;
    let base = sc.scenario()?;
    let law = cfg.law()?;
    let floor = cfg.event.floor(&law)?;
    let table = event_time_table(&base, sizes, sc.calibration(), floor.value, &law)?;
    Ok((table, floor, law))
}

fn table_manifest(out: &mut Output, cfg: &ScenarioConfig, table: &EventTable, floor: ResolvedFloor, law: &FundamentalUncertainty) {
    out.resolve("constants", constants_json(law));
    out.resolve("floor", floor_json(floor, cfg));
    out.resolve("tau_convention", json!(tau_name(cfg.event.tau_convention.into())));
    out.resolve("mass_density_kg_per_m3", json!(table.mass_density));
    out.resolve("calibrated_anchor_mass_kg", json!(table.calibrated_anchor_mass));
}

pub fn event_table(cfg: &ScenarioConfig) -> Result<Output> {
    let et = require(&cfg.event_table, "event_table", "event-table")?;
    if et.sizes_m.is_empty() {
        return Err(CliError::config("event_table.sizes_m must not be empty"));
    }
    let (table, floor, law) = run_table(cfg, &et.sizes_m, "event-table")?;
    let mut csv = CsvTable::new(TABLE_COLUMNS);
    fill(&mut csv, table_rows(&table, cfg.event.tau_convention.into()));
    let mut out = Output::default();
    table_manifest(&mut out, cfg, &table, floor, &law);
    out.tables.push(("event_table.csv".into(), csv));
    Ok(out)
}

const FR_LABELS: [&str; 4] = ["h0", "h1", "t0", "t1"];

pub fn fr_demo(cfg: &ScenarioConfig) -> Result<Output> {
    let default = Default::default();
    let fr = cfg.fr_demo.as_ref().unwrap_or(&default);
    let law = cfg.law()?;
    let third = (1.0 / 3.0f64).sqrt();
    let amplitudes: Vec<C64> = match &fr.amplitudes {
        Some(a) => a.iter().map(|z| z.value()).collect(),
        None => [third, 0.0, third, third].map(|x| C64::new(x, 0.0)).to_vec(),
    };
    if amplitudes.len() != 4 {
        return Err(CliError::config("fr_demo.amplitudes needs four entries over h0, h1, t0, t1"));
    }
    let energies = fr.energies.clone().unwrap_or_else(|| vec![0.0, 1e-21, 2.5e-21, 4e-21]);
    if energies.len() != 4 {
        return Err(CliError::config("fr_demo.energies_J needs four entries"));
    }
    let times = fr
        .times_s
        .clone()
        .unwrap_or_else(|| (0..=50).map(|k| 10f64.powi(k)).collect());
    if times.is_empty() || times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err(CliError::config("fr_demo.times_s must list non-negative finite times"));
    }

    let rho = DensityOperator::pure(&amplitudes)?;
    let basis = |i: usize| -> Vec<C64> { (0..4).map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect() };
    // outcomes the agents can record: (h, 0), (t, 0), (t, 1)
    let pointers = vec![basis(0), basis(2), basis(3)];
    let mixed = event_map(&rho, &pointers, 1)?;

    let mut states = CsvTable::new(["basis_index", "label", "pure_population", "event_population", "event_offdiagonal_max"]);
    for (i, label) in FR_LABELS.iter().enumerate() {
        let off = (0..4)
            .filter(|&j| j != i)
            .map(|j| mixed.matrix()[(i, j)].norm())
            .fold(0.0, f64::max);
        states.push(vec![
            Cell::from(i),
            (*label).into(),
            Cell::Number(rho.matrix()[(i, i)].re),
            Cell::Number(mixed.matrix()[(i, i)].re),
            Cell::Number(off),
        ]);
    }

    let h = HamiltonianSpec::from_energies(&energies, law.constants().hbar())?;
    let system = EchoSystem::Joint(JointModel {
        state: rho,
        hamiltonian: h,
        pointer_states: pointers.clone(),
        environment_dim: 1,
    });
    let witness = coherence_witness(&pointers, 0, 1)?;
    let kernel = cfg.kernel()?;
    let mut decay = CsvTable::new(["time_s", "span_width_s", "initial_witness", "witness", "event_state_distance"]);
    let rows = parallel_rows(&times, |&t| {
        let r = echo_with_clock(&system, t, &kernel, &witness)?;
        Ok(vec![
            Cell::Number(t),
            Cell::optional(r.span_width),
            Cell::Number(r.initial_witness),
            Cell::Number(r.witness_value),
            Cell::Number(r.final_state.distance(&r.event_state)),
        ])
    })?;
    fill(&mut decay, rows);

    let mut out = Output::default();
    out.resolve("constants", constants_json(&law));
    out.resolve("clock", kernel_json(&kernel));
    out.resolve("basis", json!(FR_LABELS));
    out.resolve("pointer_labels", json!(["h0", "t0", "t1"]));
    out.resolve("energies_J", json!(energies));
    out.tables.push(("fr_demo.csv".into(), states));
    out.tables.push(("fr_demo_echo.csv".into(), decay));
    Ok(out)
}

/// `τ_ev ∝ a^k` at fixed mass density and `L = a`, with
/// `k = (p - 11/2) / (1 - p)`.
pub fn size_scaling_exponent(p: f64) -> f64 {
    (p - 5.5) / (1.0 - p)
}

pub fn sweep(cfg: &ScenarioConfig) -> Result<Output> {
    let sw = require(&cfg.sweep, "sweep", "sweep")?;
    let values = sw.values()?;
    let law = cfg.law()?;
    let mut out = Output::default();
    out.resolve("constants", constants_json(&law));
    out.resolve("sweep_values", json!(values));
    let table = match sw.parameter {
        SweepParameter::EchoTimeS => {
            if values[0] <= 0.0 {
                return Err(CliError::config("an echo_time_s sweep needs positive times"));
            }
            let default = EventTimeConfig::default();
            let et = cfg.event_time.as_ref().unwrap_or(&default);
            let ts = timescales(cfg, et, &law)?;
            let floor = cfg.event.floor(&law)?;
            let floor_mag = uncertainty_floor(ts.separation, floor.value, &law)?;
            let mut t = CsvTable::new([
                "echo_time_s",
                "log10_echo_time",
                "span_width_s",
                "exact_factor",
                "bound",
                "log10_bound",
                "log10_floor",
                "event",
            ]);
            let rows = parallel_rows(&values, |&time| {
                let width = law.delta_t(2.0 * time)?;
                let factor = distinguishability_factor(width, ts.decoherence_time)?;
                let bound = distinguishability_bound_magnitude(time, ts.decoherence_time, &law)?;
                let event = bound.log10() <= floor_mag.log10();
                Ok(vec![
                    Cell::Number(time),
                    Cell::Number(time.log10()),
                    Cell::Number(width),
                    Cell::Number(factor),
                    Cell::linear(bound),
                    Cell::log10(bound),
                    Cell::log10(floor_mag),
                    Cell::Integer(i64::from(event)),
                ])
            })?;
            fill(&mut t, rows);
            out.resolve("decoherence_time_s", json!(ts.decoherence_time));
            out.resolve("separation_m", json!(ts.separation));
            out.resolve("floor", floor_json(floor, cfg));
            t
        }
        SweepParameter::Epsilon => {
            if values[0] <= 0.0 {
                return Err(CliError::config("an epsilon sweep needs positive values"));
            }
            let p = law.exponent();
            let mut t = CsvTable::new(["epsilon", "sigma_scaled", "sigma_fundamental"]);
            let rows = parallel_rows(&values, |&e| {
                Ok(vec![
                    Cell::Number(e),
                    Cell::Number(variance_coefficient(e, SigmaConvention::Scaled, p)),
                    Cell::Number(variance_coefficient(e, SigmaConvention::Fundamental, p)),
                ])
            })?;
            fill(&mut t, rows);
            t
        }
        SweepParameter::SizeM => {
            if values[0] <= 0.0 {
                return Err(CliError::config("a size_m sweep needs positive sizes"));
            }
            let (table, floor, law) = run_table(cfg, &values, "sweep")?;
            let convention: TauConvention = cfg.event.tau_convention.into();
            let k = size_scaling_exponent(law.exponent());
            let mut header = TABLE_COLUMNS.to_vec();
            header.extend(["log10_tau_ev_over_size_power", "scaling_ratio_to_first"]);
            let mut t = CsvTable::new(header);
            let pick = |i: usize| match convention {
                TauConvention::Crossing => table.rows[i].event_time_crossing,
                TauConvention::TablePrefactor => table.rows[i].event_time_table,
            };
            let first = pick(0);
            for (i, mut row) in table_rows(&table, convention).into_iter().enumerate() {
                let a = values[i];
                let tau = pick(i);
                let ratio = tau / first / Magnitude::from_f64(a / values[0]).powf(k);
                row.push(Cell::Number(tau.log10() - k * a.log10()));
                row.push(Cell::linear(ratio));
                t.push(row);
            }
            table_manifest(&mut out, cfg, &table, floor, &law);
            out.resolve("size_scaling_exponent", json!(k));
            t
        }
    };
    out.tables.push(("sweep.csv".into(), table));
    Ok(out)
}

/// Resolves every block that is present without running anything.
pub fn validate(cfg: &ScenarioConfig) -> Result<Output> {
    let law = cfg.law()?;
    let kernel = cfg.kernel()?;
    let mut out = Output::default();
    out.resolve("constants", constants_json(&law));
    out.resolve("clock", kernel_json(&kernel));
    out.resolve("floor", floor_json(cfg.event.floor(&law)?, cfg));
    if let Some(sys) = &cfg.system {
        let h = sys.hamiltonian(law.constants().hbar())?;
        let rho = sys.state()?;
        if rho.dim() != h.dim() {
            return Err(CliError::config("system state and Hamiltonian dimensions differ"));
        }
    }
    if let Some(ev) = &cfg.evolve {
        ev.validate()?;
    }
    if let Some(pm) = &cfg.pointer_model {
        let model = pm.resolve(law.constants().hbar())?;
        if let Some(ec) = &cfg.echo {
            let [j, k] = ec.witness;
            coherence_witness(model.pointer_states(), j, k)?;
        }
    }
    if cfg.scattering.is_some() || cfg.event_time.is_some() {
        let default = EventTimeConfig::default();
        let et = cfg.event_time.as_ref().unwrap_or(&default);
        let ts = timescales(cfg, et, &law)?;
        et.wavepacket(ts.separation)?;
    }
    if let Some(sw) = &cfg.sweep {
        sw.values()?;
    }
    out.resolve("blocks", json!(cfg.blocks()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_exponent_default() {
        assert!((size_scaling_exponent(2.0 / 3.0) + 14.5).abs() < 1e-12);
    }
}
