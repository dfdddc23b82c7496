//! Air-to-ground mean path loss.
//!
//! The link is line-of-sight with a probability that follows an S-curve in
//! the elevation angle. The mean path loss averages free-space loss plus the
//! LoS and NLoS excess losses over that probability. A user is covered when
//! its mean path loss does not exceed the budget `p_t - p_min`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Absolute tolerance on radii found by bisection, m.
pub const RADIUS_TOL: f64 = 0.01;
/// Absolute tolerance on path loss at a bisected radius, dB.
pub const LOSS_TOL: f64 = 1e-3;

/// Propagation parameters of one urban class.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    pub name: String,
    /// S-curve offset (degrees).
    pub a: f64,
    /// S-curve steepness (per degree).
    pub b: f64,
    /// Mean excess loss of LoS links, dB.
    pub eta_los: f64,
    /// Mean excess loss of NLoS links, dB.
    pub eta_nlos: f64,
}

/// Names accepted by [`Environment::preset`].
pub const PRESET_NAMES: [&str; 4] = ["suburban", "urban", "dense-urban", "highrise-urban"];

impl Environment {
    pub fn new(
        name: impl Into<String>,
        a: f64,
        b: f64,
        eta_los: f64,
        eta_nlos: f64,
    ) -> Result<Self> {
        let env = Environment {
            name: name.into(),
            a,
            b,
            eta_los,
            eta_nlos,
        };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.a, self.b, self.eta_los, self.eta_nlos]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.a <= 0.0 || self.b <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "environment `{}`: a and b must be finite and positive",
                self.name
            )));
        }
        if !(self.eta_los >= 0.0 && self.eta_nlos > self.eta_los) {
            return Err(Error::InvalidParameter(format!(
                "environment `{}`: need eta_nlos > eta_los >= 0",
                self.name
            )));
        }
        Ok(())
    }

    pub fn suburban() -> Self {
        Self::preset_unchecked("suburban", 4.88, 0.43, 0.1, 21.0)
    }

    pub fn urban() -> Self {
        Self::preset_unchecked("urban", 9.61, 0.16, 1.0, 20.0)
    }

    pub fn dense_urban() -> Self {
        Self::preset_unchecked("dense-urban", 12.08, 0.11, 1.6, 23.0)
    }

    pub fn highrise_urban() -> Self {
        Self::preset_unchecked("highrise-urban", 27.23, 0.08, 2.3, 34.0)
    }

    /// Look up a built-in environment. Accepts `dense_urban`/`highrise_urban`
    /// spellings as well.
    pub fn preset(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().replace('_', "-").as_str() {
            "suburban" => Ok(Self::suburban()),
            "urban" => Ok(Self::urban()),
            "dense-urban" | "denseurban" => Ok(Self::dense_urban()),
            "highrise-urban" | "highrise" | "high-rise-urban" => Ok(Self::highrise_urban()),
            _ => Err(Error::UnknownEnvironment(name.to_string())),
        }
    }

    pub fn presets() -> [Environment; 4] {
        [
            Self::suburban(),
            Self::urban(),
            Self::dense_urban(),
            Self::highrise_urban(),
        ]
    }

    fn preset_unchecked(name: &str, a: f64, b: f64, eta_los: f64, eta_nlos: f64) -> Self {
        Environment {
            name: name.to_string(),
            a,
            b,
            eta_los,
            eta_nlos,
        }
    }

    /// `A = eta_los - eta_nlos` (negative for valid environments).
    pub fn excess_loss_gap(&self) -> f64 {
        self.eta_los - self.eta_nlos
    }

    /// LoS probability at elevation angle `theta` (radians).
    pub fn los_probability_at(&self, theta: f64) -> f64 {
        1.0 / (1.0 + self.a * (-self.b * (theta.to_degrees() - self.a)).exp())
    }
}

/// Radio parameters of the UAV base station and the ground receivers.
#[derive(Debug, Clone, PartialEq)]
pub struct RadioConfig {
    /// Carrier frequency, Hz.
    pub f_c: f64,
    /// Maximum transmit power, dBm.
    pub p_t: f64,
    /// Receiver sensitivity, dBm.
    pub p_min: f64,
    /// Minimum allowed altitude, m.
    pub h_min: f64,
}

impl RadioConfig {
    pub fn new(f_c: f64, p_t: f64, p_min: f64, h_min: f64) -> Result<Self> {
        let cfg = RadioConfig {
            f_c,
            p_t,
            p_min,
            h_min,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// 2 GHz carrier, 30 dBm transmit power, -70 dBm sensitivity, 100 m floor.
    pub fn reference() -> Self {
        RadioConfig {
            f_c: 2e9,
            p_t: 30.0,
            p_min: -70.0,
            h_min: 100.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f_c.is_finite() && self.f_c > 0.0) {
            return Err(Error::InvalidParameter(
                "carrier frequency must be positive".into(),
            ));
        }
        if !(self.h_min.is_finite() && self.h_min >= 0.0) {
            return Err(Error::InvalidParameter("h_min must be >= 0".into()));
        }
        if !(self.p_t.is_finite() && self.p_min.is_finite() && self.p_t > self.p_min) {
            return Err(Error::InvalidParameter("need p_t > p_min".into()));
        }
        Ok(())
    }

    /// Path-loss budget `p_t - p_min`, dB.
    pub fn loss_budget(&self) -> f64 {
        self.p_t - self.p_min
    }

    /// `20 log10(4 pi f_c / c)`, dB.
    pub fn free_space_offset(&self) -> f64 {
        20.0 * (4.0 * PI * self.f_c / SPEED_OF_LIGHT).log10()
    }

    /// `B = 20 log10(4 pi f_c / c) + eta_nlos`, dB.
    pub fn loss_offset(&self, env: &Environment) -> f64 {
        self.free_space_offset() + env.eta_nlos
    }
}

fn check_link(h: f64, r: f64) -> Result<()> {
    if !(h.is_finite() && r.is_finite() && h >= 0.0 && r >= 0.0) {
        return Err(Error::Domain(format!(
            "altitude and distance must be finite and non-negative (h={h}, r={r})"
        )));
    }
    if h == 0.0 && r == 0.0 {
        return Err(Error::Domain("zero link distance".into()));
    }
    Ok(())
}

/// Probability of a line-of-sight link from altitude `h` to a user at
/// horizontal distance `r`. `r = 0` is the nadir (90 degrees elevation).
pub fn p_los(env: &Environment, h: f64, r: f64) -> Result<f64> {
    check_link(h, r)?;
    Ok(env.los_probability_at(h.atan2(r)))
}

/// Mean path loss (dB) averaged over LoS and NLoS conditions, evaluated
/// through the slant distance `sqrt(h^2 + r^2)`.
pub fn path_loss(env: &Environment, cfg: &RadioConfig, h: f64, r: f64) -> Result<f64> {
    check_link(h, r)?;
    let d = h.hypot(r);
    let p = env.los_probability_at(h.atan2(r));
    Ok(env.excess_loss_gap() * p
        + 20.0 * (4.0 * PI * cfg.f_c * d / SPEED_OF_LIGHT).log10()
        + env.eta_nlos)
}

/// Mean path loss at horizontal distance `r > 0` and elevation `theta`
/// (radians), i.e. the `r / cos(theta)` parameterization.
pub fn path_loss_at_elevation(env: &Environment, cfg: &RadioConfig, r: f64, theta: f64) -> f64 {
    env.excess_loss_gap() * env.los_probability_at(theta)
        + 20.0 * (r / theta.cos()).log10()
        + cfg.loss_offset(env)
}

/// Received power (dBm) for a link with the given path loss.
pub fn received_power(cfg: &RadioConfig, loss: f64) -> f64 {
    cfg.p_t - loss
}

/// Whether a link with the given path loss meets the receiver sensitivity.
pub fn is_covered(cfg: &RadioConfig, loss: f64) -> bool {
    received_power(cfg, loss) >= cfg.p_min
}

/// Largest horizontal distance at which the mean path loss from altitude `h`
/// stays within `l_th`. Zero when even the nadir exceeds the budget.
pub fn coverage_radius_at(env: &Environment, cfg: &RadioConfig, h: f64, l_th: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Domain(format!("altitude must be positive, got {h}")));
    }
    let excess =
        |r: f64| path_loss(env, cfg, h, r).expect("h > 0 keeps the link distance positive") - l_th;
    if excess(0.0) > 0.0 {
        return Ok(0.0);
    }
    let mut hi = h.max(1.0);
    while excess(hi) <= 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoRoot("coverage radius unbounded".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        if hi - lo <= RADIUS_TOL && excess(hi) - excess(lo) <= LOSS_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn urban() -> Environment {
        Environment::urban()
    }

    #[test]
    fn los_probability_at_45_degrees() {
        // Direct evaluation: 1 / (1 + 9.61 exp(-0.16 (45 - 9.61))).
        let p = p_los(&urban(), 1000.0, 1000.0).unwrap();
        assert!((p - 0.967_692).abs() < 1e-6, "{p}");
    }

    #[test]
    fn los_probability_on_the_ground() {
        for env in Environment::presets() {
            let p = p_los(&env, 0.0, 250.0).unwrap();
            let expected = 1.0 / (1.0 + env.a * (env.a * env.b).exp());
            assert!((p - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn los_probability_increases_with_altitude() {
        let env = urban();
        let mut prev = p_los(&env, 0.0, 500.0).unwrap();
        for i in 1..200 {
            let p = p_los(&env, i as f64 * 25.0, 500.0).unwrap();
            assert!(p > prev && p < 1.0);
            prev = p;
        }
    }

    #[test]
    fn zero_distance_is_a_domain_error() {
        assert!(matches!(p_los(&urban(), 0.0, 0.0), Err(Error::Domain(_))));
        let cfg = RadioConfig::reference();
        assert!(matches!(
            path_loss(&urban(), &cfg, 0.0, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(path_loss(&urban(), &cfg, -1.0, 3.0).is_err());
    }

    #[test]
    fn mean_path_loss_reference_value() {
        // A = -19, B = 58.4684 dB, p_los = 0.967692, 20 log10(sqrt(2) 1000) = 63.0103.
        let cfg = RadioConfig::reference();
        let l = path_loss(&urban(), &cfg, 1000.0, 1000.0).unwrap();
        assert!((l - 103.092_537).abs() < 1e-5, "{l}");
        let b = cfg.loss_offset(&urban());
        assert!((b - 58.468_38).abs() < 1e-4, "{b}");
    }

    #[test]
    fn nadir_loss() {
        let env = urban();
        let cfg = RadioConfig::reference();
        let h0 = 120.0;
        let expected = env.excess_loss_gap() * env.los_probability_at(PI / 2.0)
            + 20.0 * (4.0 * PI * cfg.f_c * h0 / SPEED_OF_LIGHT).log10()
            + env.eta_nlos;
        assert_eq!(path_loss(&env, &cfg, h0, 0.0).unwrap(), expected);
    }

    #[test]
    fn received_power_and_coverage() {
        let cfg = RadioConfig::reference();
        assert_eq!(received_power(&cfg, 100.0), -70.0);
        assert!(is_covered(&cfg, 100.0));
        assert_eq!(received_power(&cfg, 0.0), 30.0);
        let pr = received_power(&cfg, 103.08);
        assert!((pr + 73.08).abs() < 1e-12);
        assert!(!is_covered(&cfg, 103.08));
    }

    #[test]
    fn path_loss_increasing_in_distance_dense_scan() {
        let cfg = RadioConfig::reference();
        for env in Environment::presets() {
            for &h in &[10.0, 100.0, 500.0, 2000.0] {
                let mut prev = path_loss(&env, &cfg, h, 1.0).unwrap();
                let mut r = 1.0;
                while r < 10_000.0 {
                    r *= 1.001;
                    let l = path_loss(&env, &cfg, h, r).unwrap();
                    assert!(l > prev, "{} h={h} r={r}", env.name);
                    prev = l;
                }
            }
        }
    }

    #[test]
    fn distance_and_elevation_forms_agree() {
        let cfg = RadioConfig::reference();
        for env in Environment::presets() {
            for &(h, r) in &[(100.0, 50.0), (646.0, 706.5), (10.0, 9000.0), (3000.0, 1.0)] {
                let a = path_loss(&env, &cfg, h, r).unwrap();
                let b = path_loss_at_elevation(&env, &cfg, r, (h / r).atan());
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn fixed_elevation_loss_increases_with_radius() {
        let cfg = RadioConfig::reference();
        let env = urban();
        let theta: f64 = 0.7;
        let mut prev = path_loss(&env, &cfg, 1.0 * theta.tan(), 1.0).unwrap();
        for i in 2..500 {
            let r = i as f64 * 7.0;
            let l = path_loss(&env, &cfg, r * theta.tan(), r).unwrap();
            assert!(l > prev);
            prev = l;
        }
    }

    #[test]
    fn coverage_radius_hits_the_threshold() {
        let cfg = RadioConfig::reference();
        for env in Environment::presets() {
            for &h in &[50.0, 300.0, 900.0] {
                let r = coverage_radius_at(&env, &cfg, h, 103.0).unwrap();
                if r > 0.0 {
                    let l = path_loss(&env, &cfg, h, r).unwrap();
                    assert!((l - 103.0).abs() <= 1e-3, "{} h={h}: {l}", env.name);
                    assert!(l <= 103.0);
                }
            }
        }
    }

    #[test]
    fn coverage_radius_zero_when_nadir_exceeds_budget() {
        let cfg = RadioConfig::reference();
        assert_eq!(
            coverage_radius_at(&urban(), &cfg, 100_000.0, 100.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!(
            Environment::preset("lunar"),
            Err(Error::UnknownEnvironment(_))
        ));
        assert_eq!(
            Environment::preset("dense_urban").unwrap(),
            Environment::dense_urban()
        );
    }

    #[test]
    fn invalid_environment_rejected() {
        assert!(Environment::new("x", 1.0, 0.1, 5.0, 2.0).is_err());
        assert!(Environment::new("x", -1.0, 0.1, 1.0, 2.0).is_err());
        assert!(RadioConfig::new(2e9, -70.0, 30.0, 100.0).is_err());
    }
}
