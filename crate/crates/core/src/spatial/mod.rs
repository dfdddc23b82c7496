//! Synthetic user drops and their spatial heterogeneity.

mod voronoi;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Point2D;

pub use voronoi::{voronoi_cell_areas, voronoi_cov, POISSON_COV};

/// Axis-aligned deployment area, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Region {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let finite = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !finite || x_max <= x_min || y_max <= y_min {
            return Err(Error::InvalidParameter(format!(
                "degenerate region [{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        Ok(Region {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    /// `[0, side] x [0, side]`.
    pub fn square(side: f64) -> Self {
        Region::new(0.0, side, 0.0, side).expect("positive side")
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    /// Area in m^2.
    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains(&self, p: Point2D) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    pub fn expanded(&self, margin: f64) -> Region {
        Region {
            x_min: self.x_min - margin,
            x_max: self.x_max + margin,
            y_min: self.y_min - margin,
            y_max: self.y_max + margin,
        }
    }
}

/// Thomas cluster process: Poisson parents, each with a Poisson number of
/// children displaced by an isotropic Gaussian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThomasParams {
    /// Parents per km^2. Ignored when `total_intensity_target` is set.
    pub parent_intensity: f64,
    /// Expected children per parent.
    pub mean_offspring: f64,
    /// Standard deviation of the child displacement per axis, m.
    pub sigma: f64,
    /// Users per km^2. Fixes the parent intensity to `target / mean_offspring`
    /// and the number of users per realization to `target * area`.
    pub total_intensity_target: Option<f64>,
}

impl ThomasParams {
    /// Parameters with a fixed overall user density (users per km^2).
    pub fn with_total_intensity(users_per_km2: f64, mean_offspring: f64, sigma: f64) -> Self {
        ThomasParams {
            parent_intensity: users_per_km2 / mean_offspring,
            mean_offspring,
            sigma,
            total_intensity_target: Some(users_per_km2),
        }
    }

    pub fn with_sigma(self, sigma: f64) -> Self {
        ThomasParams { sigma, ..self }
    }

    pub fn effective_parent_intensity(&self) -> f64 {
        match self.total_intensity_target {
            Some(lambda) => lambda / self.mean_offspring,
            None => self.parent_intensity,
        }
    }

    /// Expected users per km^2.
    pub fn total_intensity(&self) -> f64 {
        self.effective_parent_intensity() * self.mean_offspring
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.effective_parent_intensity() > 0.0
            && self.mean_offspring > 0.0
            && self.sigma > 0.0
            && self.total_intensity_target.is_none_or(|t| t > 0.0)
            && self.effective_parent_intensity().is_finite()
            && self.sigma.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "invalid Thomas parameters {self:?}"
            )))
        }
    }
}

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean)
        .expect("positive finite mean")
        .sample(rng) as usize
}

/// Draw one realization of the Thomas process restricted to `region`.
///
/// Parents are drawn over the region grown by `3 sigma` on each side so that
/// clusters centered just outside still contribute; children falling outside
/// the region are dropped.
///
/// With `total_intensity_target` set, the realization is conditioned on
/// holding exactly `round(target * area)` users: given at least one parent,
/// users are drawn i.i.d. from the parents' Gaussian mixture restricted to
/// the region.
pub fn sample_thomas<R: Rng + ?Sized>(
    region: &Region,
    params: &ThomasParams,
    rng: &mut R,
) -> Vec<Point2D> {
    match params.total_intensity_target {
        None => sample_free(region, params, rng),
        Some(lambda) => {
            let n = (lambda * region.area() / 1e6).round() as usize;
            sample_fixed_count(region, params, n, rng)
        }
    }
}

fn draw_parents<R: Rng + ?Sized>(
    window: &Region,
    params: &ThomasParams,
    rng: &mut R,
) -> Vec<Point2D> {
    let n = poisson_count(
        params.effective_parent_intensity() * window.area() / 1e6,
        rng,
    );
    (0..n)
        .map(|_| {
            Point2D::new(
                rng.random_range(window.x_min..window.x_max),
                rng.random_range(window.y_min..window.y_max),
            )
        })
        .collect()
}

fn sample_free<R: Rng + ?Sized>(
    region: &Region,
    params: &ThomasParams,
    rng: &mut R,
) -> Vec<Point2D> {
    let window = region.expanded(3.0 * params.sigma);
    let offset = Normal::new(0.0, params.sigma).expect("finite sigma");
    let mut users = Vec::new();
    for parent in draw_parents(&window, params, rng) {
        for _ in 0..poisson_count(params.mean_offspring, rng) {
            let child = Point2D::new(parent.x + offset.sample(rng), parent.y + offset.sample(rng));
            if region.contains(child) {
                users.push(child);
            }
        }
    }
    users
}

fn sample_fixed_count<R: Rng + ?Sized>(
    region: &Region,
    params: &ThomasParams,
    n: usize,
    rng: &mut R,
) -> Vec<Point2D> {
    if n == 0 {
        return Vec::new();
    }
    let window = region.expanded(3.0 * params.sigma);
    let offset = Normal::new(0.0, params.sigma).expect("finite sigma");
    let max_attempts = 10_000 * n;
    loop {
        let parents = draw_parents(&window, params, rng);
        if parents.is_empty() {
            continue;
        }
        let mut users = Vec::with_capacity(n);
        let mut attempts = 0;
        while users.len() < n && attempts < max_attempts {
            attempts += 1;
            let parent = parents[rng.random_range(0..parents.len())];
            let child = Point2D::new(parent.x + offset.sample(rng), parent.y + offset.sample(rng));
            if region.contains(child) {
                users.push(child);
            }
        }
        // Parents whose mass barely reaches the region are redrawn.
        if users.len() == n {
            return users;
        }
    }
}

/// Redraw until the realization has at least `min_users` users, giving up
/// after a bounded number of attempts and returning the last draw.
pub fn sample_thomas_at_least<R: Rng + ?Sized>(
    region: &Region,
    params: &ThomasParams,
    min_users: usize,
    rng: &mut R,
) -> Vec<Point2D> {
    let mut users = sample_thomas(region, params, rng);
    for _ in 0..10_000 {
        if users.len() >= min_users {
            break;
        }
        users = sample_thomas(region, params, rng);
    }
    users
}

/// Monte Carlo settings for [`calibrate_sigma`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaSearch {
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Realizations averaged per evaluated sigma.
    pub samples: usize,
    pub seed: u64,
    /// Accepted gap between the mean CoV and the target.
    pub tolerance: f64,
}

impl Default for SigmaSearch {
    fn default() -> Self {
        SigmaSearch {
            sigma_min: 1.0,
            sigma_max: 6000.0,
            samples: 200,
            seed: 0x5eed,
            tolerance: 0.15,
        }
    }
}

/// Mean Voronoi CoV of `samples` realizations seeded `seed, seed + 1, ...`.
/// Realizations are conditioned on having at least three users; degenerate
/// ones are skipped.
pub fn mean_cov(region: &Region, params: &ThomasParams, samples: usize, seed: u64) -> f64 {
    let values: Vec<Option<f64>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let users = sample_thomas_at_least(region, params, 3, &mut rng);
            voronoi_cov(&users, region).ok()
        })
        .collect();
    let (sum, n) = values
        .iter()
        .flatten()
        .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

/// Find the cluster spread whose Monte Carlo mean CoV matches `target_cov`.
///
/// The mean CoV decreases from strongly clustered (small sigma) towards 1
/// (large sigma); bisection runs on `ln sigma`. Targets at or below the
/// CoV reached at `sigma_max` return `sigma_max`.
pub fn calibrate_sigma(
    region: &Region,
    params: &ThomasParams,
    target_cov: f64,
    search: &SigmaSearch,
) -> Result<f64> {
    params.validate()?;
    if !(search.sigma_min > 0.0 && search.sigma_max > search.sigma_min && search.samples > 0) {
        return Err(Error::InvalidParameter(format!(
            "invalid sigma search {search:?}"
        )));
    }
    let eval = |sigma: f64| {
        mean_cov(
            region,
            &params.with_sigma(sigma),
            search.samples,
            search.seed,
        )
    };
    let cov_flat = eval(search.sigma_max);
    if target_cov <= cov_flat + search.tolerance {
        return Ok(search.sigma_max);
    }
    let cov_tight = eval(search.sigma_min);
    if target_cov.is_nan() || target_cov > cov_tight + search.tolerance {
        return Err(Error::UnreachableTarget {
            target: target_cov,
            min: cov_flat,
            max: cov_tight,
        });
    }
    let (mut lo, mut hi) = (search.sigma_min.ln(), search.sigma_max.ln());
    let mut best = (search.sigma_min, (cov_tight - target_cov).abs());
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let sigma = mid.exp();
        let gap = eval(sigma) - target_cov;
        if gap.abs() < best.1 {
            best = (sigma, gap.abs());
        }
        if gap.abs() <= 0.01 || hi - lo < 1e-4 {
            break;
        }
        if gap > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if best.1 > search.tolerance {
        return Err(Error::UnreachableTarget {
            target: target_cov,
            min: cov_flat,
            max: cov_tight,
        });
    }
    Ok(best.0)
}
