//! Command line front end for `eventclock`: reads a JSON scenario, runs one
//! experiment family and writes CSV tables plus a `manifest.json`.

pub mod commands;
pub mod config;
pub mod csv;
pub mod error;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

pub use config::ScenarioConfig;
pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "eventclock", version, about = "Clock dephasing, global echoes and event timescales")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Scenario file (strict JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Directory receiving the CSV tables and manifest.json.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads for sweep points; all cores when absent.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Clock-conditioned state of a closed system at the listed readings.
    Evolve(RunArgs),
    /// Global echo with clock dephasing on a pointer model.
    Echo(RunArgs),
    /// Event timescale and event condition for one scenario.
    EventTime(RunArgs),
    /// Event timescales over a list of central-system sizes.
    EventTable(RunArgs),
    /// Event mixture and echo decay for the four-outcome two-agent state.
    FrDemo(RunArgs),
    /// One-parameter sweep emitting curve data.
    Sweep(RunArgs),
    /// Parses and resolves a scenario without running it.
    ValidateConfig(RunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Evolve(_) => "evolve",
            Command::Echo(_) => "echo",
            Command::EventTime(_) => "event-time",
            Command::EventTable(_) => "event-table",
            Command::FrDemo(_) => "fr-demo",
            Command::Sweep(_) => "sweep",
            Command::ValidateConfig(_) => "validate-config",
        }
    }

    pub fn args(&self) -> &RunArgs {
        match self {
            Command::Evolve(a)
            | Command::Echo(a)
            | Command::EventTime(a)
            | Command::EventTable(a)
            | Command::FrDemo(a)
            | Command::Sweep(a)
            | Command::ValidateConfig(a) => a,
        }
    }
}

/// Runs a parsed command line and returns the files written.
pub fn execute(command: &Command) -> Result<Vec<PathBuf>> {
    let args = command.args();
    let cfg = ScenarioConfig::load(&args.config)?;
    let threads = match args.threads {
        Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => n,
        None => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} worker threads: {e}")))?;
    let output = pool.install(|| match command {
        Command::Evolve(_) => commands::evolve(&cfg),
        Command::Echo(_) => commands::echo(&cfg),
        Command::EventTime(_) => commands::event_time(&cfg),
        Command::EventTable(_) => commands::event_table(&cfg),
        Command::FrDemo(_) => commands::fr_demo(&cfg),
        Command::Sweep(_) => commands::sweep(&cfg),
        Command::ValidateConfig(_) => commands::validate(&cfg),
    })?;
    if matches!(command, Command::ValidateConfig(_)) {
        let report = json!({ "config": cfg, "resolved": output.resolved, "notes": output.notes });
        println!("{}", serde_json::to_string_pretty(&report).expect("JSON values serialize"));
        return Ok(Vec::new());
    }

    std::fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;
    let mut written = Vec::new();
    for (name, table) in &output.tables {
        let path = args.out.join(name);
        write(&path, table.render())?;
        written.push(path);
    }
    let manifest = json!({
        "command": command.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "format": "csv",
        "config": cfg,
        "resolved": output.resolved,
        "outputs": output.tables.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>(),
        "notes": output.notes,
    });
    let path = args.out.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest).expect("JSON values serialize");
    text.push('\n');
    write(&path, text)?;
    written.push(path);
    for note in &output.notes {
        eprintln!("warning: {note}");
    }
    Ok(written)
}

fn write(path: &Path, text: String) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}
