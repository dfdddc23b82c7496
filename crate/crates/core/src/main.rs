//! `uavbs` command-line interface.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use uavbs::harness::{self, config, io, report, Overrides, Scenario, ScenarioFile};
use uavbs::spatial::{self, SigmaSearch};
use uavbs::{Environment, Error, RadioConfig, Region, Result, ThomasParams};

#[derive(Parser, Debug)]
#[command(
    name = "uavbs",
    version,
    about = "Energy-efficient 3D placement of a UAV base station"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimal elevation angle of an environment.
    Angle {
        #[command(flatten)]
        env: EnvArgs,
    },
    /// Coverage radius versus altitude (CSV).
    RadiusCurve {
        /// Environments (comma separated).
        #[arg(long, value_delimiter = ',', default_value = "urban")]
        env: Vec<String>,
        /// Path-loss budgets in dB (comma separated).
        #[arg(long = "l-th", value_delimiter = ',', default_value = "100,103")]
        l_th: Vec<f64>,
        /// First altitude, m.
        #[arg(long, default_value_t = 50.0)]
        h_start: f64,
        /// Last altitude, m.
        #[arg(long, default_value_t = 3000.0)]
        h_end: f64,
        #[arg(long, default_value_t = 10.0)]
        step: f64,
        #[arg(long, default_value_t = 2e9)]
        carrier_hz: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Place the UAV for the users in a file.
    Place {
        /// Two-column user file (x y in meters).
        users: PathBuf,
        #[command(flatten)]
        env: EnvArgs,
        #[command(flatten)]
        radio: RadioArgs,
        /// Also write per-user C1/C2 membership to this CSV.
        #[arg(long)]
        snapshot: Option<PathBuf>,
        /// Random full-power deployment instead of the optimized placement.
        #[arg(long)]
        baseline: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Region for the baseline draw: x_min,x_max,y_min,y_max.
        #[arg(
            long,
            value_delimiter = ',',
            num_args = 4,
            default_value = "0,3000,0,3000"
        )]
        region: Vec<f64>,
    },
    /// Sweep required power and coverage over user heterogeneity (CSV).
    SweepCov {
        /// Scenario file; defaults to $UAVBS_CONFIG.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        env: Option<Vec<String>>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        replications: Option<usize>,
        /// `target` or `measured`.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, value_delimiter = ',')]
        cov_targets: Option<Vec<f64>>,
        #[arg(long)]
        calibration_samples: Option<usize>,
        /// Output path prefix (`<prefix>.csv`, `<prefix>.meta.toml`).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Draw users from a Thomas cluster process.
    GenUsers {
        #[arg(
            long,
            value_delimiter = ',',
            num_args = 4,
            default_value = "0,3000,0,3000"
        )]
        region: Vec<f64>,
        /// Users per km^2; every realization holds exactly this density.
        #[arg(long, default_value_t = 9.0, conflicts_with = "parent_intensity")]
        users_per_km2: f64,
        /// Parents per km^2 with a Poisson number of users per parent.
        #[arg(long)]
        parent_intensity: Option<f64>,
        #[arg(long, default_value_t = config::DEFAULT_MEAN_OFFSPRING)]
        mean_offspring: f64,
        /// Cluster spread in meters.
        #[arg(long, default_value_t = config::DEFAULT_SIGMA_M, conflicts_with = "target_cov")]
        sigma: f64,
        /// Calibrate the cluster spread to this mean CoV instead.
        #[arg(long)]
        target_cov: Option<f64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct EnvArgs {
    /// Preset name, or `custom` with --a --b --eta-los --eta-nlos.
    #[arg(long, default_value = "urban")]
    env: String,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    eta_los: Option<f64>,
    #[arg(long)]
    eta_nlos: Option<f64>,
}

impl EnvArgs {
    fn resolve(&self) -> Result<Environment> {
        let custom = [self.a, self.b, self.eta_los, self.eta_nlos];
        if self.env == "custom" {
            match custom {
                [Some(a), Some(b), Some(l), Some(n)] => Environment::new("custom", a, b, l, n),
                _ => Err(Error::InvalidParameter(
                    "--env custom needs --a, --b, --eta-los and --eta-nlos".into(),
                )),
            }
        } else if custom.iter().any(Option::is_some) {
            Err(Error::InvalidParameter(
                "--a/--b/--eta-los/--eta-nlos require --env custom".into(),
            ))
        } else {
            Environment::preset(&self.env)
        }
    }
}

#[derive(Args, Debug)]
struct RadioArgs {
    #[arg(long, default_value_t = 2e9)]
    carrier_hz: f64,
    /// Maximum transmit power, dBm.
    #[arg(long, default_value_t = 30.0, allow_hyphen_values = true)]
    p_t: f64,
    /// Receiver sensitivity, dBm.
    #[arg(long, default_value_t = -70.0, allow_hyphen_values = true)]
    p_min: f64,
    /// Minimum altitude, m.
    #[arg(long, default_value_t = 100.0)]
    h_min: f64,
}

impl RadioArgs {
    fn resolve(&self) -> Result<RadioConfig> {
        RadioConfig::new(self.carrier_hz, self.p_t, self.p_min, self.h_min)
    }
}

fn region_from(v: &[f64]) -> Result<Region> {
    Region::new(v[0], v[1], v[2], v[3])
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => io::write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Angle { env } => {
            print!("{}", report::angle_report(&env.resolve()?)?);
        }
        Command::RadiusCurve {
            env,
            l_th,
            h_start,
            h_end,
            step,
            carrier_hz,
            out,
        } => {
            let envs = env
                .iter()
                .map(|n| Environment::preset(n))
                .collect::<Result<Vec<_>>>()?;
            let mut cfg = RadioConfig::reference();
            cfg.f_c = carrier_hz;
            cfg.validate()?;
            let csv = report::radius_curve_csv(&envs, &cfg, &l_th, h_start, h_end, step)?;
            emit(out.as_ref(), &csv)?;
        }
        Command::Place {
            users,
            env,
            radio,
            snapshot,
            baseline,
            seed,
            region,
        } => {
            let env = env.resolve()?;
            let cfg = radio.resolve()?;
            let pts = io::read_users(&users)?;
            if baseline {
                let region = region_from(&region)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let b = uavbs::random_baseline(&pts, &env, &cfg, &region, &mut rng)?;
                print!("{}", report::baseline_record(&b));
            } else {
                let p = uavbs::place_3d(&pts, &env, &cfg)?;
                print!("{}", report::placement_record(&p));
                if let Some(path) = snapshot {
                    io::write_file(&path, &report::snapshot_csv(&pts, &p))?;
                }
            }
        }
        Command::SweepCov {
            config,
            env,
            seed,
            replications,
            mode,
            cov_targets,
            calibration_samples,
            output,
        } => {
            let path =
                config.or_else(|| std::env::var_os(harness::CONFIG_ENV_VAR).map(PathBuf::from));
            let file = match path {
                Some(p) => ScenarioFile::load(&p)?,
                None => ScenarioFile::default(),
            };
            let scenario = Scenario::resolve(
                file,
                Overrides {
                    environments: env,
                    output,
                    base_seed: seed,
                    replications,
                    mode,
                    cov_targets,
                    calibration_samples,
                },
            )?;
            let (csv, outcome) = harness::run_and_write_sweep(&scenario)?;
            for (target, why) in &outcome.unreachable {
                eprintln!("warning: CoV target {target} skipped: {why}");
            }
            eprintln!("wrote {} ({} rows)", csv.display(), outcome.records.len());
        }
        Command::GenUsers {
            region,
            users_per_km2,
            parent_intensity,
            mean_offspring,
            sigma,
            target_cov,
            seed,
            out,
        } => {
            let region = region_from(&region)?;
            let mut params = match parent_intensity {
                Some(k) => ThomasParams {
                    parent_intensity: k,
                    mean_offspring,
                    sigma,
                    total_intensity_target: None,
                },
                None => ThomasParams::with_total_intensity(users_per_km2, mean_offspring, sigma),
            };
            params.validate()?;
            if let Some(target) = target_cov {
                let search = SigmaSearch {
                    seed: config::calibration_seed(seed),
                    ..SigmaSearch::default()
                };
                params.sigma = spatial::calibrate_sigma(&region, &params, target, &search)?;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let users = spatial::sample_thomas(&region, &params, &mut rng);
            let cov = spatial::voronoi_cov(&users, &region)
                .map(harness::fmt_sig)
                .unwrap_or_else(|_| "undefined".into());
            let header = vec![
                format!(
                    "thomas parent_intensity={} mean_offspring={} sigma={} seed={seed}",
                    params.effective_parent_intensity(),
                    params.mean_offspring,
                    params.sigma
                ),
                format!("users={} cov={cov}", users.len()),
            ];
            emit(out.as_ref(), &io::format_users(&users, &header))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
