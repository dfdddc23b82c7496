//! Energy-efficient 3D placement of a single UAV base station.
//!
//! The vertical and horizontal placement problems are solved separately:
//! the optimal elevation angle depends only on the propagation environment,
//! which fixes the largest coverage disk for a given path-loss budget
//! ([`altitude`]). The disk is then placed to cover as many users as possible
//! and shrunk to the smallest circle enclosing the covered users
//! ([`placement`]), which lowers the required transmit power.
//!
//! [`spatial`] generates clustered user drops and measures their
//! heterogeneity; [`harness`] drives the Monte Carlo experiments and the CLI.

pub mod altitude;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod placement;
mod roots;
pub mod spatial;

pub use altitude::{
    altitude_for_radius, elevation_residual, max_coverage_radius, optimal_elevation,
    solve_vertical, VerticalSolution,
};
pub use channel::{
    coverage_radius_at, p_los, path_loss, path_loss_at_elevation, received_power, Environment,
    RadioConfig,
};
pub use error::{Error, Result};
pub use geometry::{Disk, Point2D};
pub use placement::{
    max_cover_disk, place_3d, random_baseline, smallest_enclosing_circle, BaselinePlacement,
    CoverSolution, Placement3D,
};
pub use spatial::{
    calibrate_sigma, sample_thomas, voronoi_cell_areas, voronoi_cov, Region, SigmaSearch,
    ThomasParams,
};
