//! Experiment drivers behind the command-line interface: scenario files,
//! user files, the coverage-radius curve, single placements and the CoV sweep.

pub mod config;
pub mod io;
pub mod report;
pub mod sweep;

use std::path::{Path, PathBuf};

use crate::error::Result;

pub use config::{CovMode, Overrides, Scenario, ScenarioFile, UserSource, CONFIG_ENV_VAR};
pub use io::{fmt_sig, format_users, parse_users, read_users};
pub use sweep::{run_sweep, sweep_csv, SweepOutcome, SweepRecord};

/// `<prefix>.csv` and `<prefix>.meta.toml`.
pub fn sweep_paths(prefix: &Path) -> (PathBuf, PathBuf) {
    let base = prefix.as_os_str().to_os_string();
    let mut csv = base.clone();
    csv.push(".csv");
    let mut meta = base;
    meta.push(".meta.toml");
    (PathBuf::from(csv), PathBuf::from(meta))
}

/// Run the sweep and write its CSV and metadata files. Returns the CSV path.
pub fn run_and_write_sweep(scenario: &Scenario) -> Result<(PathBuf, SweepOutcome)> {
    let outcome = run_sweep(scenario)?;
    let (csv_path, meta_path) = sweep_paths(&scenario.output);
    io::write_file(&csv_path, &sweep_csv(&outcome.records))?;
    let mut meta = scenario.describe();
    let unreachable: Vec<String> = outcome
        .unreachable
        .iter()
        .map(|(t, _)| t.to_string())
        .collect();
    meta.push_str(&format!(
        "unreachable_targets = [{}]\n",
        unreachable.join(", ")
    ));
    io::write_file(&meta_path, &meta)?;
    Ok((csv_path, outcome))
}
