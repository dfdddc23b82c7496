//! Vertical placement: the elevation angle that maximizes the coverage
//! radius, the radius itself for a loss budget, and the matching altitude.

use std::f64::consts::{FRAC_PI_2, LN_10, PI};

use crate::channel::{Environment, RadioConfig};
use crate::error::{Error, Result};
use crate::roots;

/// Distance kept from 0 and pi/2 when bracketing the elevation root, rad.
const ANGLE_MARGIN: f64 = 1e-3;
const ANGLE_SCAN_STEP: f64 = 0.5 * PI / 180.0;

/// Result of the vertical subproblem for one loss budget.
#[derive(Debug, Clone, PartialEq)]
pub struct VerticalSolution {
    /// Optimal elevation angle, rad.
    pub theta_opt: f64,
    /// Maximum coverage radius, m.
    pub r1: f64,
    /// Altitude at which `r1` is achieved, m.
    pub h1: f64,
    /// Loss budget, dB.
    pub l_th: f64,
}

/// Stationarity condition of the coverage radius in the elevation angle.
/// Its unique root on `(0, pi/2)` is the optimal elevation.
pub fn elevation_residual(env: &Environment, theta: f64) -> f64 {
    let e = (-env.b * (theta.to_degrees() - env.a)).exp();
    let denom = env.a * e + 1.0;
    PI / (9.0 * LN_10) * theta.tan() + env.a * env.b * env.excess_loss_gap() * e / (denom * denom)
}

/// Coverage radius up to a factor that depends on the budget and carrier
/// only: `ln R(theta) + const`.
fn log_radius_shape(env: &Environment, theta: f64) -> f64 {
    theta.cos().ln() - env.excess_loss_gap() * env.los_probability_at(theta) * LN_10 / 20.0
}

/// Optimal elevation angle (radians) of the environment.
///
/// The radius grows where the stationarity condition is negative and shrinks
/// where it is positive, so every `-` to `+` crossing is a local maximum.
/// Most environments have exactly one; when there are several (the highrise
/// preset has two) the one with the larger radius wins.
pub fn optimal_elevation(env: &Environment) -> Result<f64> {
    let f = |t: f64| elevation_residual(env, t);
    let hi = FRAC_PI_2 - ANGLE_MARGIN;
    let mut start = ANGLE_MARGIN;
    let mut best: Option<f64> = None;
    while let Some((a, b)) = roots::scan_bracket(f, start, hi, ANGLE_SCAN_STEP) {
        let (fa, fb) = (f(a), f(b));
        if (fa < 0.0 && fb >= 0.0) || (fa == 0.0 && fb > 0.0) {
            let root = roots::bisect(f, a, b, 0.0);
            let better =
                best.is_none_or(|t| log_radius_shape(env, root) > log_radius_shape(env, t));
            if better {
                best = Some(root);
            }
        }
        if b >= hi {
            break;
        }
        start = b;
    }
    best.ok_or_else(|| {
        Error::NoRoot(format!(
            "elevation condition has no sign change for environment `{}`",
            env.name
        ))
    })
}

fn radius_at_angle(env: &Environment, cfg: &RadioConfig, theta: f64, l_th: f64) -> f64 {
    let excess = env.excess_loss_gap() * env.los_probability_at(theta);
    theta.cos() * 10f64.powf((l_th - excess - cfg.loss_offset(env)) / 20.0)
}

/// Largest coverage radius (m) attainable with loss budget `l_th`, reached at
/// the optimal elevation angle.
pub fn max_coverage_radius(env: &Environment, cfg: &RadioConfig, l_th: f64) -> Result<f64> {
    solve_vertical(env, cfg, l_th).map(|v| v.r1)
}

/// Altitude that sees horizontal distance `r` at elevation `theta`.
pub fn altitude_for_radius(r: f64, theta: f64) -> f64 {
    debug_assert!(r >= 0.0 && theta > 0.0 && theta < FRAC_PI_2);
    r * theta.tan()
}

/// Solve the vertical subproblem for the budget `l_th`.
pub fn solve_vertical(env: &Environment, cfg: &RadioConfig, l_th: f64) -> Result<VerticalSolution> {
    let theta_opt = optimal_elevation(env)?;
    let r1 = radius_at_angle(env, cfg, theta_opt, l_th);
    if r1.is_nan() || r1 < 1.0 {
        return Err(Error::BudgetTooSmall {
            l_th_db: l_th,
            radius_m: r1,
        });
    }
    Ok(VerticalSolution {
        theta_opt,
        r1,
        h1: altitude_for_radius(r1, theta_opt),
        l_th,
    })
}
