//! Scenario files.
//!
//! A scenario is a TOML file with flat sections; every key is optional and
//! falls back to the reference deployment (3 km x 3 km, 2 GHz, 30 dBm,
//! -70 dBm, 100 m floor, 9 users/km^2). Keys that fell back are recorded so
//! that sweep outputs can label them.
//!
//! ```toml
//! environments = ["urban", "suburban"]
//! output = "results/sweep"
//!
//! [radio]
//! carrier_hz = 2e9
//! p_t_dbm = 30.0
//!
//! [process]
//! users_per_km2 = 9.0
//! mean_offspring = 45.0
//!
//! [seeds]
//! base = 1
//! replications = 500
//!
//! [sweep]
//! mode = "target"
//! cov_targets = [1, 2, 3, 4, 5, 6, 7]
//!
//! [custom_environments.my-city]
//! a = 9.61
//! b = 0.16
//! eta_los = 1.0
//! eta_nlos = 20.0
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::channel::{Environment, RadioConfig};
use crate::error::{Error, Result};
use crate::spatial::{Region, SigmaSearch, ThomasParams};

/// Environment variable naming the default scenario file.
pub const CONFIG_ENV_VAR: &str = "UAVBS_CONFIG";

pub const DEFAULT_USERS_PER_KM2: f64 = 9.0;
pub const DEFAULT_MEAN_OFFSPRING: f64 = 45.0;
pub const DEFAULT_SIGMA_M: f64 = 150.0;
pub const DEFAULT_REPLICATIONS: usize = 500;
pub const DEFAULT_BIN_WIDTH: f64 = 0.5;
pub const DEFAULT_COV_TARGETS: [f64; 7] = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0];

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub environments: Option<Vec<String>>,
    pub output: Option<PathBuf>,
    pub region: Option<RegionSection>,
    pub radio: Option<RadioSection>,
    pub process: Option<ProcessSection>,
    pub seeds: Option<SeedSection>,
    pub sweep: Option<SweepSection>,
    pub custom_environments: Option<BTreeMap<String, EnvSection>>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSection {
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub y_min: Option<f64>,
    pub y_max: Option<f64>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioSection {
    pub carrier_hz: Option<f64>,
    pub p_t_dbm: Option<f64>,
    pub p_min_dbm: Option<f64>,
    pub h_min_m: Option<f64>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessSection {
    pub users_per_km2: Option<f64>,
    pub parent_intensity: Option<f64>,
    pub mean_offspring: Option<f64>,
    pub sigma_m: Option<f64>,
    pub user_file: Option<PathBuf>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedSection {
    pub base: Option<u64>,
    pub replications: Option<usize>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub mode: Option<String>,
    pub cov_targets: Option<Vec<f64>>,
    pub bin_width: Option<f64>,
    pub calibration_samples: Option<usize>,
    pub sigma_min_m: Option<f64>,
    pub sigma_max_m: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvSection {
    pub a: f64,
    pub b: f64,
    pub eta_los: f64,
    pub eta_nlos: f64,
}

/// Where the users of a sweep come from.
#[derive(Debug, Clone, PartialEq)]
pub enum UserSource {
    Thomas(ThomasParams),
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovMode {
    /// Calibrate sigma per CoV target, then replicate at that sigma.
    Target,
    /// Draw sigma log-uniformly per replication and bin by measured CoV.
    Measured,
}

impl CovMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "target" => Ok(CovMode::Target),
            "measured" => Ok(CovMode::Measured),
            other => Err(Error::Config(format!(
                "unknown sweep mode `{other}` (expected `target` or `measured`)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CovMode::Target => "target",
            CovMode::Measured => "measured",
        }
    }
}

/// Command-line values that take precedence over the scenario file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub environments: Option<Vec<String>>,
    pub output: Option<PathBuf>,
    pub base_seed: Option<u64>,
    pub replications: Option<usize>,
    pub mode: Option<String>,
    pub cov_targets: Option<Vec<f64>>,
    pub calibration_samples: Option<usize>,
}

/// A fully resolved sweep scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub region: Region,
    pub environments: Vec<Environment>,
    pub radio: RadioConfig,
    pub users: UserSource,
    pub base_seed: u64,
    pub replications: usize,
    pub mode: CovMode,
    pub cov_targets: Vec<f64>,
    pub bin_width: f64,
    pub search: SigmaSearch,
    pub output: PathBuf,
    /// Keys that took built-in defaults.
    pub defaulted: Vec<String>,
}

/// Resolve an environment name against the presets and inline definitions.
pub fn resolve_environment(
    name: &str,
    custom: &BTreeMap<String, EnvSection>,
) -> Result<Environment> {
    if let Some(e) = custom.get(name) {
        return Environment::new(name, e.a, e.b, e.eta_los, e.eta_nlos);
    }
    Environment::preset(name)
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

struct Defaults<'a>(&'a mut Vec<String>);

impl Defaults<'_> {
    fn get<T>(&mut self, key: &str, value: Option<T>, default: T) -> T {
        value.unwrap_or_else(|| {
            self.0.push(key.to_string());
            default
        })
    }
}

impl Scenario {
    pub fn resolve(file: ScenarioFile, cli: Overrides) -> Result<Self> {
        let mut defaulted = Vec::new();
        let mut d = Defaults(&mut defaulted);

        let custom = file.custom_environments.clone().unwrap_or_default();
        let env_names = d.get(
            "environments",
            cli.environments.or(file.environments),
            vec!["urban".to_string(), "suburban".to_string()],
        );
        if env_names.is_empty() {
            return Err(Error::Config("no environments selected".into()));
        }
        let environments = env_names
            .iter()
            .map(|n| resolve_environment(n, &custom))
            .collect::<Result<Vec<_>>>()?;

        let r = file.region.unwrap_or_default();
        let region = Region::new(
            d.get("region.x_min", r.x_min, 0.0),
            d.get("region.x_max", r.x_max, 3000.0),
            d.get("region.y_min", r.y_min, 0.0),
            d.get("region.y_max", r.y_max, 3000.0),
        )?;

        let reference = RadioConfig::reference();
        let radio_file = file.radio.unwrap_or_default();
        let radio = RadioConfig::new(
            d.get("radio.carrier_hz", radio_file.carrier_hz, reference.f_c),
            d.get("radio.p_t_dbm", radio_file.p_t_dbm, reference.p_t),
            d.get("radio.p_min_dbm", radio_file.p_min_dbm, reference.p_min),
            d.get("radio.h_min_m", radio_file.h_min_m, reference.h_min),
        )?;

        let p = file.process.unwrap_or_default();
        let users = match p.user_file {
            Some(path) => UserSource::File(path),
            None => {
                let mean_offspring = d.get(
                    "process.mean_offspring",
                    p.mean_offspring,
                    DEFAULT_MEAN_OFFSPRING,
                );
                let sigma = d.get("process.sigma_m", p.sigma_m, DEFAULT_SIGMA_M);
                let params = match (p.users_per_km2, p.parent_intensity) {
                    (Some(_), Some(_)) => return Err(Error::Config(
                        "set either process.users_per_km2 or process.parent_intensity, not both"
                            .into(),
                    )),
                    (None, Some(k)) => ThomasParams {
                        parent_intensity: k,
                        mean_offspring,
                        sigma,
                        total_intensity_target: None,
                    },
                    (lambda, None) => ThomasParams::with_total_intensity(
                        d.get("process.users_per_km2", lambda, DEFAULT_USERS_PER_KM2),
                        mean_offspring,
                        sigma,
                    ),
                };
                params.validate()?;
                UserSource::Thomas(params)
            }
        };

        let seeds = file.seeds.unwrap_or_default();
        let base_seed = d.get("seeds.base", cli.base_seed.or(seeds.base), 1);
        let replications = d.get(
            "seeds.replications",
            cli.replications.or(seeds.replications),
            DEFAULT_REPLICATIONS,
        );
        if replications == 0 {
            return Err(Error::Config("replication count must be >= 1".into()));
        }

        let s = file.sweep.unwrap_or_default();
        let mode = CovMode::parse(&d.get("sweep.mode", cli.mode.or(s.mode), "target".to_string()))?;
        let cov_targets = d.get(
            "sweep.cov_targets",
            cli.cov_targets.or(s.cov_targets),
            DEFAULT_COV_TARGETS.to_vec(),
        );
        if cov_targets.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::Config(
                "CoV targets must be finite and non-negative".into(),
            ));
        }
        let bin_width = d.get("sweep.bin_width", s.bin_width, DEFAULT_BIN_WIDTH);
        if bin_width.is_nan() || bin_width <= 0.0 {
            return Err(Error::Config("bin width must be positive".into()));
        }
        let default_search = SigmaSearch::default();
        let search = SigmaSearch {
            sigma_min: d.get("sweep.sigma_min_m", s.sigma_min_m, default_search.sigma_min),
            sigma_max: d.get("sweep.sigma_max_m", s.sigma_max_m, default_search.sigma_max),
            samples: d.get(
                "sweep.calibration_samples",
                cli.calibration_samples.or(s.calibration_samples),
                default_search.samples,
            ),
            seed: calibration_seed(base_seed),
            tolerance: default_search.tolerance,
        };
        if !(search.sigma_min > 0.0 && search.sigma_max > search.sigma_min && search.samples > 0) {
            return Err(Error::Config(format!(
                "invalid sigma search range {search:?}"
            )));
        }
        let output = d.get("output", cli.output.or(file.output), PathBuf::from("sweep"));

        Ok(Scenario {
            region,
            environments,
            radio,
            users,
            base_seed,
            replications,
            mode,
            cov_targets,
            bin_width,
            search,
            output,
            defaulted,
        })
    }

    /// Effective settings as `key = value` lines, with tool defaults marked.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        let names: Vec<String> = self
            .environments
            .iter()
            .map(|e| format!("\"{}\"", e.name))
            .collect();
        let _ = writeln!(out, "environments = [{}]", names.join(", "));
        let r = &self.region;
        let _ = writeln!(
            out,
            "region = [{}, {}, {}, {}]",
            r.x_min, r.x_max, r.y_min, r.y_max
        );
        let c = &self.radio;
        let _ = writeln!(out, "carrier_hz = {}", c.f_c);
        let _ = writeln!(out, "p_t_dbm = {}", c.p_t);
        let _ = writeln!(out, "p_min_dbm = {}", c.p_min);
        let _ = writeln!(out, "h_min_m = {}", c.h_min);
        match &self.users {
            UserSource::Thomas(p) => {
                let _ = writeln!(
                    out,
                    "parent_intensity_per_km2 = {}",
                    p.effective_parent_intensity()
                );
                let _ = writeln!(out, "mean_offspring = {}", p.mean_offspring);
                if let Some(l) = p.total_intensity_target {
                    let _ = writeln!(out, "users_per_km2 = {l}");
                }
            }
            UserSource::File(path) => {
                let _ = writeln!(out, "user_file = \"{}\"", path.display());
            }
        }
        let _ = writeln!(out, "base_seed = {}", self.base_seed);
        let _ = writeln!(out, "replications = {}", self.replications);
        let _ = writeln!(out, "mode = \"{}\"", self.mode.as_str());
        let targets: Vec<String> = self.cov_targets.iter().map(|t| t.to_string()).collect();
        let _ = writeln!(out, "cov_targets = [{}]", targets.join(", "));
        let _ = writeln!(out, "bin_width = {}", self.bin_width);
        let _ = writeln!(
            out,
            "sigma_range_m = [{}, {}]",
            self.search.sigma_min, self.search.sigma_max
        );
        let _ = writeln!(out, "calibration_samples = {}", self.search.samples);
        let defaulted: Vec<String> = self.defaulted.iter().map(|k| format!("\"{k}\"")).collect();
        let _ = writeln!(
            out,
            "# keys below took the tool's built-in defaults, not published values"
        );
        let _ = writeln!(out, "defaulted = [{}]", defaulted.join(", "));
        out
    }
}

/// Seed for sigma calibration, kept apart from the replication seeds.
pub fn calibration_seed(base_seed: u64) -> u64 {
    base_seed ^ 0xC0FF_EE00_0000_0000
}
