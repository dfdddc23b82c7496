//! Text and CSV renderings of single computations.

use std::fmt::Write as _;

use crate::altitude::{elevation_residual, optimal_elevation, solve_vertical};
use crate::channel::{coverage_radius_at, Environment, RadioConfig};
use crate::error::{Error, Result};
use crate::geometry::Point2D;
use crate::placement::{BaselinePlacement, Placement3D, BOUNDARY_TOL};

use super::io::fmt_sig;

pub fn angle_report(env: &Environment) -> Result<String> {
    let theta = optimal_elevation(env)?;
    let mut out = String::new();
    let _ = writeln!(out, "environment = {}", env.name);
    let _ = writeln!(out, "theta_opt_deg = {}", fmt_sig(theta.to_degrees()));
    let _ = writeln!(out, "theta_opt_rad = {theta}");
    let _ = writeln!(out, "residual = {:e}", elevation_residual(env, theta));
    Ok(out)
}

pub const CURVE_HEADER: &str = "environment,l_th_db,altitude_m,radius_m,kind";

/// Coverage radius versus altitude for each budget, followed by one
/// `optimum` row at `(h1, R1)` per budget.
pub fn radius_curve_csv(
    envs: &[Environment],
    cfg: &RadioConfig,
    budgets: &[f64],
    h_lo: f64,
    h_hi: f64,
    step: f64,
) -> Result<String> {
    if !(h_lo > 0.0 && h_hi >= h_lo && step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "altitude range {h_lo}..{h_hi} step {step} is invalid"
        )));
    }
    let steps = ((h_hi - h_lo) / step + 1e-9).floor() as usize;
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for env in envs {
        for &l_th in budgets {
            for k in 0..=steps {
                let h = h_lo + k as f64 * step;
                let r = coverage_radius_at(env, cfg, h, l_th)?;
                let _ = writeln!(
                    out,
                    "{},{},{},{},curve",
                    env.name,
                    fmt_sig(l_th),
                    fmt_sig(h),
                    fmt_sig(r)
                );
            }
            let v = solve_vertical(env, cfg, l_th)?;
            let _ = writeln!(
                out,
                "{},{},{},{},optimum",
                env.name,
                fmt_sig(l_th),
                fmt_sig(v.h1),
                fmt_sig(v.r1)
            );
        }
    }
    Ok(out)
}

pub const PLACEMENT_HEADER: &str = "center_x,center_y,h_star,r2,covered,p_req,clamped";

pub fn placement_record(p: &Placement3D) -> String {
    format!(
        "{PLACEMENT_HEADER}\n{},{},{},{},{},{},{}\n",
        fmt_sig(p.center.x),
        fmt_sig(p.center.y),
        fmt_sig(p.h_star),
        fmt_sig(p.r2),
        p.count(),
        fmt_sig(p.p_req),
        p.clamped
    )
}

/// Baseline in the placement record layout: the radius column holds `R1`
/// and the altitude column `h1`.
pub fn baseline_record(b: &BaselinePlacement) -> String {
    format!(
        "{PLACEMENT_HEADER}\n{},{},{},{},{},{},false\n",
        fmt_sig(b.center.x),
        fmt_sig(b.center.y),
        fmt_sig(b.altitude),
        fmt_sig(b.radius),
        b.count(),
        fmt_sig(b.p_req)
    )
}

pub const SNAPSHOT_HEADER: &str = "x,y,covered_c1,covered_c2";

/// Per-user membership in the disks before (`C1`) and after (`C2`) shrinking.
pub fn snapshot_csv(users: &[Point2D], p: &Placement3D) -> String {
    let c1 = p.c1;
    let c2 = p.c2();
    let tol2 = BOUNDARY_TOL + 1e-12 * p.r2.max(1.0);
    let mut out = String::from(SNAPSHOT_HEADER);
    out.push('\n');
    for u in users {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_sig(u.x),
            fmt_sig(u.y),
            u8::from(c1.contains_within(*u, BOUNDARY_TOL)),
            u8::from(c2.contains_within(*u, tol2))
        );
    }
    out
}
