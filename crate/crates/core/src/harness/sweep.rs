//! Monte Carlo sweep of required power and coverage versus user
//! heterogeneity.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::Environment;
use crate::error::{Error, Result};
use crate::geometry::Point2D;
use crate::placement::{place_3d, random_baseline};
use crate::spatial::{calibrate_sigma, sample_thomas_at_least, voronoi_cov, ThomasParams};

use super::config::{CovMode, Scenario, UserSource};
use super::io::{fmt_sig, read_users};

/// Aggregated outcome of one CoV bin in one environment.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub environment: String,
    pub cov_bin: f64,
    /// Mean cluster spread of the contributing replications, m.
    pub sigma: f64,
    pub replications: usize,
    pub mean_cov: f64,
    pub mean_users: f64,
    pub mean_p_req: f64,
    pub se_p_req: f64,
    pub mean_covered: f64,
    pub se_covered: f64,
    pub mean_covered_baseline: f64,
    pub se_covered_baseline: f64,
    pub clamped_fraction: f64,
}

pub const CSV_HEADER: &str = "environment,cov_bin,sigma_m,replications,mean_cov,mean_users,\
mean_p_req_dbm,se_p_req_db,mean_covered,se_covered,mean_covered_baseline,se_covered_baseline,\
clamped_fraction";

impl SweepRecord {
    pub fn csv_row(&self) -> String {
        [
            self.environment.clone(),
            fmt_sig(self.cov_bin),
            fmt_sig(self.sigma),
            self.replications.to_string(),
            fmt_sig(self.mean_cov),
            fmt_sig(self.mean_users),
            fmt_sig(self.mean_p_req),
            fmt_sig(self.se_p_req),
            fmt_sig(self.mean_covered),
            fmt_sig(self.se_covered),
            fmt_sig(self.mean_covered_baseline),
            fmt_sig(self.se_covered_baseline),
            fmt_sig(self.clamped_fraction),
        ]
        .join(",")
    }
}

pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(out, "{}", r.csv_row());
    }
    out
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub records: Vec<SweepRecord>,
    /// CoV targets that could not be reached, with the reason.
    pub unreachable: Vec<(f64, String)>,
}

/// Running sums; merging is addition, so the result does not depend on the
/// order in which replications are folded in.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: usize,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn mean(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.sum / self.n as f64
        }
    }

    /// Standard error of the mean (sample standard deviation / sqrt n).
    fn se(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        let var = ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }
}

#[derive(Debug, Clone, Copy)]
struct EnvTrial {
    p_req: f64,
    covered: usize,
    baseline: usize,
    clamped: bool,
}

#[derive(Debug, Clone)]
struct Trial {
    sigma: f64,
    cov: Option<f64>,
    users: usize,
    per_env: Vec<EnvTrial>,
}

#[derive(Debug, Default, Clone)]
struct Bin {
    sigma: Moments,
    cov: Moments,
    users: Moments,
    p_req: Moments,
    covered: Moments,
    baseline: Moments,
    clamped: Moments,
}

impl Bin {
    fn push(&mut self, trial: &Trial, env: usize) {
        let e = &trial.per_env[env];
        self.sigma.push(trial.sigma);
        if let Some(c) = trial.cov {
            self.cov.push(c);
        }
        self.users.push(trial.users as f64);
        self.p_req.push(e.p_req);
        self.covered.push(e.covered as f64);
        self.baseline.push(e.baseline as f64);
        self.clamped.push(if e.clamped { 1.0 } else { 0.0 });
    }

    fn record(&self, environment: &str, cov_bin: f64) -> SweepRecord {
        SweepRecord {
            environment: environment.to_string(),
            cov_bin,
            sigma: self.sigma.mean(),
            replications: self.p_req.n,
            mean_cov: self.cov.mean(),
            mean_users: self.users.mean(),
            mean_p_req: self.p_req.mean(),
            se_p_req: self.p_req.se(),
            mean_covered: self.covered.mean(),
            se_covered: self.covered.se(),
            mean_covered_baseline: self.baseline.mean(),
            se_covered_baseline: self.baseline.se(),
            clamped_fraction: self.clamped.mean(),
        }
    }
}

fn evaluate<R: Rng>(
    scenario: &Scenario,
    users: &[Point2D],
    sigma: f64,
    rng: &mut R,
) -> Result<Trial> {
    let cov = voronoi_cov(users, &scenario.region).ok();
    let per_env = scenario
        .environments
        .iter()
        .map(|env| {
            let placed = place_3d(users, env, &scenario.radio)?;
            let base = random_baseline(users, env, &scenario.radio, &scenario.region, rng)?;
            Ok(EnvTrial {
                p_req: placed.p_req,
                covered: placed.count(),
                baseline: base.count(),
                clamped: placed.clamped,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trial {
        sigma,
        cov,
        users: users.len(),
        per_env,
    })
}

fn thomas_trial(scenario: &Scenario, params: &ThomasParams, seed: u64) -> Result<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let users = sample_thomas_at_least(&scenario.region, params, 3, &mut rng);
    evaluate(scenario, &users, params.sigma, &mut rng)
}

fn seeds(scenario: &Scenario) -> impl IndexedParallelIterator<Item = u64> + '_ {
    (0..scenario.replications)
        .into_par_iter()
        .map(move |i| scenario.base_seed.wrapping_add(i as u64))
}

fn records_for(envs: &[Environment], bins: &BTreeMap<i64, (f64, Vec<Bin>)>) -> Vec<SweepRecord> {
    let mut out = Vec::new();
    for (e, env) in envs.iter().enumerate() {
        for (cov_bin, per_env) in bins.values() {
            out.push(per_env[e].record(&env.name, *cov_bin));
        }
    }
    out
}

/// Run the sweep described by `scenario`.
///
/// Replication `i` uses seed `base_seed + i`. In target mode the same seeds
/// are reused for every CoV target, with sigma calibrated per target.
pub fn run_sweep(scenario: &Scenario) -> Result<SweepOutcome> {
    for env in &scenario.environments {
        // Fail fast on budgets that cannot cover anything.
        crate::altitude::solve_vertical(env, &scenario.radio, scenario.radio.loss_budget())?;
    }
    let n_env = scenario.environments.len();
    let mut bins: BTreeMap<i64, (f64, Vec<Bin>)> = BTreeMap::new();
    let mut unreachable = Vec::new();

    match (&scenario.users, scenario.mode) {
        (UserSource::File(path), _) => {
            let users = read_users(path)?;
            if users.is_empty() {
                return Err(Error::EmptyInput("user file has no users"));
            }
            let trials = seeds(scenario)
                .map(|seed| evaluate(scenario, &users, 0.0, &mut ChaCha8Rng::seed_from_u64(seed)))
                .collect::<Result<Vec<_>>>()?;
            let cov = trials[0].cov.unwrap_or(0.0);
            let entry = bins
                .entry(0)
                .or_insert_with(|| (cov, vec![Bin::default(); n_env]));
            for t in &trials {
                for (e, bin) in entry.1.iter_mut().enumerate() {
                    bin.push(t, e);
                }
            }
        }
        (UserSource::Thomas(params), CovMode::Target) => {
            for (k, &target) in scenario.cov_targets.iter().enumerate() {
                let sigma =
                    match calibrate_sigma(&scenario.region, params, target, &scenario.search) {
                        Ok(s) => s,
                        Err(err @ Error::UnreachableTarget { .. }) => {
                            unreachable.push((target, err.to_string()));
                            continue;
                        }
                        Err(err) => return Err(err),
                    };
                let at_sigma = params.with_sigma(sigma);
                let trials = seeds(scenario)
                    .map(|seed| thomas_trial(scenario, &at_sigma, seed))
                    .collect::<Result<Vec<_>>>()?;
                let entry = bins
                    .entry(k as i64)
                    .or_insert_with(|| (target, vec![Bin::default(); n_env]));
                for t in &trials {
                    for (e, bin) in entry.1.iter_mut().enumerate() {
                        bin.push(t, e);
                    }
                }
            }
        }
        (UserSource::Thomas(params), CovMode::Measured) => {
            let (lo, hi) = (
                scenario.search.sigma_min.ln(),
                scenario.search.sigma_max.ln(),
            );
            let trials = seeds(scenario)
                .map(|seed| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let sigma = rng.random_range(lo..=hi).exp();
                    let at_sigma = params.with_sigma(sigma);
                    let users = sample_thomas_at_least(&scenario.region, &at_sigma, 3, &mut rng);
                    evaluate(scenario, &users, sigma, &mut rng)
                })
                .collect::<Result<Vec<_>>>()?;
            for t in &trials {
                let Some(cov) = t.cov else { continue };
                let idx = (cov / scenario.bin_width).round() as i64;
                let entry = bins.entry(idx).or_insert_with(|| {
                    (idx as f64 * scenario.bin_width, vec![Bin::default(); n_env])
                });
                for (e, bin) in entry.1.iter_mut().enumerate() {
                    bin.push(t, e);
                }
            }
        }
    }

    Ok(SweepOutcome {
        records: records_for(&scenario.environments, &bins),
        unreachable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments() {
        let mut m = Moments::default();
        for x in [1.0, 2.0, 3.0, 4.0] {
            m.push(x);
        }
        assert_eq!(m.mean(), 2.5);
        // sample sd = sqrt(5/3), se = sd / 2
        assert!((m.se() - (5.0f64 / 3.0).sqrt() / 2.0).abs() < 1e-12);
        assert_eq!(Moments::default().se(), 0.0);
    }

    #[test]
    fn csv_has_fixed_columns() {
        let r = SweepRecord {
            environment: "urban".into(),
            cov_bin: 6.0,
            sigma: 151.234567,
            replications: 500,
            mean_cov: 6.01,
            mean_users: 81.0,
            mean_p_req: 25.51234567,
            se_p_req: 0.1,
            mean_covered: 70.0,
            se_covered: 0.5,
            mean_covered_baseline: 22.0,
            se_covered_baseline: 0.7,
            clamped_fraction: 0.0,
        };
        let csv = sweep_csv(&[r]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(
            lines[1],
            "urban,6,151.235,500,6.01,81,25.5123,0.1,70,0.5,22,0.7,0"
        );
        assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());
    }
}
