//! Horizontal placement and the full 3D placement pipeline.
//!
//! 1. Largest coverage radius `R1` for the budget `p_t - p_min` and its altitude `h1`.
//! 2. Disk of radius `R1` covering the most users (`C1`).
//! 3. Smallest circle enclosing those users (`C2`, radius `R2`).
//! 4. Altitude `max(h_min, R2 tan(theta_opt))` and the power that still
//!    reaches the border of `C2`.

mod cover;
mod enclosing;

use rand::Rng;

use crate::altitude::{altitude_for_radius, solve_vertical, VerticalSolution};
use crate::channel::{path_loss, Environment, RadioConfig};
use crate::error::Result;
use crate::geometry::{Disk, Point2D};
use crate::spatial::Region;

pub use cover::{max_cover_disk, CoverSolution, BOUNDARY_TOL};
pub use enclosing::smallest_enclosing_circle;

/// Output of the placement pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement3D {
    /// Horizontal position of the UAV (center of `C2`).
    pub center: Point2D,
    /// Final altitude, m.
    pub h_star: f64,
    /// Radius of `C2`, m.
    pub r2: f64,
    /// Indices of covered users, ascending.
    pub covered: Vec<usize>,
    /// Minimum transmit power that keeps every covered user covered, dBm.
    pub p_req: f64,
    /// `h_min` was binding.
    pub clamped: bool,
    /// Coverage region `C1` before shrinking.
    pub c1: Disk,
    pub vertical: VerticalSolution,
}

impl Placement3D {
    pub fn count(&self) -> usize {
        self.covered.len()
    }

    pub fn c2(&self) -> Disk {
        Disk::new(self.center, self.r2)
    }

    /// Clamped at `h_min` and the border users need more than `p_t`.
    pub fn exceeds_budget(&self, cfg: &RadioConfig) -> bool {
        self.p_req > cfg.p_t
    }
}

/// Energy-efficient 3D placement covering the maximum number of users.
pub fn place_3d(users: &[Point2D], env: &Environment, cfg: &RadioConfig) -> Result<Placement3D> {
    let vertical = solve_vertical(env, cfg, cfg.loss_budget())?;
    let cover = max_cover_disk(users, vertical.r1)?;
    let c2 = cover.enclosing;
    let h_tilt = altitude_for_radius(c2.radius, vertical.theta_opt);
    let clamped = h_tilt < cfg.h_min;
    let h_star = if clamped { cfg.h_min } else { h_tilt };
    let p_req = cfg.p_min + path_loss(env, cfg, h_star, c2.radius)?;
    Ok(Placement3D {
        center: c2.center,
        h_star,
        r2: c2.radius,
        covered: cover.covered,
        p_req,
        clamped,
        c1: cover.disk,
        vertical,
    })
}

/// Reference deployment: full power, altitude `h1`, horizontal position
/// drawn uniformly over the region.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselinePlacement {
    pub center: Point2D,
    pub altitude: f64,
    pub radius: f64,
    pub covered: Vec<usize>,
    pub p_req: f64,
}

impl BaselinePlacement {
    pub fn count(&self) -> usize {
        self.covered.len()
    }
}

pub fn random_baseline<R: Rng + ?Sized>(
    users: &[Point2D],
    env: &Environment,
    cfg: &RadioConfig,
    region: &Region,
    rng: &mut R,
) -> Result<BaselinePlacement> {
    let vertical = solve_vertical(env, cfg, cfg.loss_budget())?;
    let center = Point2D::new(
        rng.random_range(region.x_min..=region.x_max),
        rng.random_range(region.y_min..=region.y_max),
    );
    let disk = Disk::new(center, vertical.r1);
    let covered = users
        .iter()
        .enumerate()
        .filter(|(_, &u)| disk.contains_within(u, BOUNDARY_TOL))
        .map(|(i, _)| i)
        .collect();
    Ok(BaselinePlacement {
        center,
        altitude: vertical.h1,
        radius: vertical.r1,
        covered,
        p_req: cfg.p_t,
    })
}
