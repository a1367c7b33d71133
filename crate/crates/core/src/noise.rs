//! Measurement and process noise covariances for the geodetic UKF, and the
//! linear-wave-theory kinematics that size the process noise.
//!
//! State order everywhere is `[lon (deg), lat (deg), SOG (m/s), COG (deg)]`.

use crate::linalg::{project_psd, Mat4, Vec4};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Standard gravity (m/s²).
pub const STANDARD_GRAVITY: f64 = 9.80665;
/// Meters spanned by one degree of longitude at the equator.
pub const METERS_PER_DEGREE_EQUATOR: f64 = 111_319.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoiseError {
    #[error("latitude {0} too close to a pole for longitude process noise")]
    PolarLatitude(f64),
    #[error("domain error: {0}")]
    Domain(&'static str),
}

/// Diagonal measurement noise covariance `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementNoise(Mat4);

impl MeasurementNoise {
    /// From per-field standard deviations `(lon°, lat°, SOG m/s, COG°)`.
    pub fn from_std_devs(lon: f64, lat: f64, sog: f64, cog: f64) -> Result<Self, NoiseError> {
        Self::from_variances(Vec4::new(lon * lon, lat * lat, sog * sog, cog * cog))
    }

    pub fn from_variances(var: Vec4) -> Result<Self, NoiseError> {
        if var.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(NoiseError::Domain("measurement variances must be positive and finite"));
        }
        Ok(Self(Mat4::from_diagonal(&var)))
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }
}

impl Default for MeasurementNoise {
    fn default() -> Self {
        default_measurement_noise()
    }
}

/// AIS measurement noise: position spread of moored vessels, SOG/COG from a
/// dual-antenna GNSS compass datasheet.
pub fn default_measurement_noise() -> MeasurementNoise {
    MeasurementNoise(Mat4::from_diagonal(&Vec4::new(
        1.90e-5 * 1.90e-5,
        1.45e-5 * 1.45e-5,
        0.05 * 0.05,
        0.2 * 0.2,
    )))
}

/// How the time step enters the position diagonal of `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DtScaling {
    /// Position variances carry their own `Δt` and the whole matrix is scaled
    /// by `Δt` again, so they grow as `Δt²`.
    #[default]
    AsPrinted,
    /// Every entry scales once with `Δt`.
    Single,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProcessNoiseParams {
    /// Unmodeled wave-induced displacement to absorb (m).
    pub zeta0: f64,
    /// Meters per degree of longitude at the equator.
    pub meters_per_degree: f64,
    /// SOG process noise (m/s).
    pub sigma_sog: f64,
    /// COG process noise (deg).
    pub sigma_cog: f64,
    pub dt_scaling: DtScaling,
}

impl Default for ProcessNoiseParams {
    fn default() -> Self {
        Self {
            zeta0: 2.0,
            meters_per_degree: METERS_PER_DEGREE_EQUATOR,
            sigma_sog: 0.08,
            sigma_cog: 1.2,
            dt_scaling: DtScaling::AsPrinted,
        }
    }
}

impl ProcessNoiseParams {
    /// Latitude process noise standard deviation (deg).
    pub fn sigma_lat(&self) -> f64 {
        self.zeta0 / self.meters_per_degree
    }

    /// Longitude process noise standard deviation at `lat` (deg). The same
    /// displacement spans more degrees of longitude toward the poles.
    pub fn sigma_lon(&self, lat: f64) -> Result<f64, NoiseError> {
        if !(lat.abs() < 90.0) {
            return Err(NoiseError::PolarLatitude(lat));
        }
        Ok(self.zeta0 / (self.meters_per_degree * lat.to_radians().cos()))
    }
}

/// Process noise covariance `Q_k` for a vessel at `lat` steering `cog` over a
/// step of `dt` seconds.
///
/// The SOG/position cross terms follow the course: `(σ_lon sin α)²` couples
/// longitude to speed and `(σ_lat cos α)²` couples latitude to speed. The
/// result is symmetric and projected onto the PSD cone if rounding (or the
/// cross terms) push an eigenvalue below zero.
pub fn build_process_noise(
    params: &ProcessNoiseParams,
    lat: f64,
    cog: f64,
    dt: f64,
) -> Result<Mat4, NoiseError> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(NoiseError::Domain("dt must be positive"));
    }
    let s_lon = params.sigma_lon(lat)?;
    let s_lat = params.sigma_lat();
    let s_u = params.sigma_sog;
    let s_a = params.sigma_cog;
    let (sin_a, cos_a) = cog.to_radians().sin_cos();
    let lon_u = (s_lon * sin_a).powi(2);
    let lat_u = (s_lat * cos_a).powi(2);
    let pos_dt = match params.dt_scaling {
        DtScaling::AsPrinted => dt,
        DtScaling::Single => 1.0,
    };
    #[rustfmt::skip]
    let q = Mat4::new(
        s_lon * s_lon * pos_dt, 0.0,                    lon_u,     0.0,
        0.0,                    s_lat * s_lat * pos_dt, lat_u,     0.0,
        lon_u,                  lat_u,                  s_u * s_u, 0.0,
        0.0,                    0.0,                    0.0,       s_a * s_a,
    ) * dt;
    Ok(project_psd(&q))
}

/// Orbital motion of water particles at the surface under a progressive
/// linear wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveKinematics {
    pub height: f64,
    pub period: f64,
    /// Wavenumber from the dispersion relation (rad/m).
    pub wavenumber: f64,
    /// Orbital radius magnitude (m).
    pub zeta: f64,
    /// Maximum orbital velocity (m/s).
    pub u_max: f64,
}

/// Solves `ω² = g k tanh(k h)` for `k` by bisection.
pub fn solve_dispersion(period: f64, depth: f64, g: f64) -> f64 {
    let omega = 2.0 * PI / period;
    let f = |k: f64| g * k * (k * depth).tanh() - omega * omega;
    // deep-water k is a lower bound since tanh <= 1
    let mut lo = omega * omega / g;
    let mut hi = (lo + omega / (g * depth).sqrt()).max(lo * 2.0);
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    if f(lo) >= 0.0 {
        return lo;
    }
    while (hi - lo) > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Surface orbital radius and peak velocity for wave height `height` (m),
/// period `period` (s) in water `depth` (m) deep.
pub fn wave_orbital_kinematics(
    height: f64,
    period: f64,
    depth: f64,
    g: f64,
) -> Result<WaveKinematics, NoiseError> {
    if !(height >= 0.0) || !(period > 0.0) || !(depth > 0.0) || !(g > 0.0) {
        return Err(NoiseError::Domain("need H >= 0, T > 0, depth > 0, g > 0"));
    }
    let k = solve_dispersion(period, depth, g);
    let coth = 1.0 / (k * depth).tanh();
    Ok(WaveKinematics {
        height,
        period,
        wavenumber: k,
        zeta: height / 2.0 * coth,
        u_max: g * period * height * k / (4.0 * PI) * coth,
    })
}

/// Fully developed sea states: `(Beaufort number, Hs m, Tp s)`.
pub const BEAUFORT_SEA_STATES: [(u8, f64, f64); 7] = [
    (4, 1.0, 5.0),
    (5, 2.0, 7.1),
    (6, 3.3, 9.1),
    (7, 5.3, 11.5),
    (8, 8.2, 14.3),
    (9, 11.4, 16.9),
    (10, 15.5, 19.7),
];

/// Default water depth for the sea-state table (deep water for every row).
pub const DEEP_WATER_DEPTH: f64 = 1000.0;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::min_eigenvalue;

    #[test]
    fn default_r_entries() {
        let r = default_measurement_noise();
        let m = r.matrix();
        assert!((m[(0, 0)] - 3.61e-10).abs() < 1e-22);
        assert!((m[(1, 1)] - 2.1025e-10).abs() < 1e-22);
        assert!((m[(2, 2)] - 2.5e-3).abs() < 1e-15);
        assert!((m[(3, 3)] - 0.04).abs() < 1e-15);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(m[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn measurement_noise_rejects_nonpositive() {
        assert!(MeasurementNoise::from_std_devs(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(MeasurementNoise::from_variances(Vec4::new(1.0, 1.0, f64::NAN, 1.0)).is_err());
    }

    #[test]
    fn sigma_lon_reference_values() {
        let p = ProcessNoiseParams::default();
        let eq = p.sigma_lon(0.0).unwrap();
        let seventy = p.sigma_lon(70.0).unwrap();
        assert!((eq - 1.78e-5).abs() / 1.78e-5 < 0.01, "{eq}");
        assert!((seventy - 5.25e-5).abs() / 5.25e-5 < 0.01, "{seventy}");
    }

    #[test]
    fn polar_latitude_rejected() {
        let p = ProcessNoiseParams::default();
        assert!(matches!(build_process_noise(&p, 90.0, 0.0, 1.0), Err(NoiseError::PolarLatitude(_))));
        assert!(build_process_noise(&p, 10.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn cross_terms_at_north_heading() {
        let p = ProcessNoiseParams::default();
        let q = build_process_noise(&p, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(q[(0, 2)], 0.0);
        let s_lat = p.sigma_lat();
        assert!((q[(1, 2)] - s_lat * s_lat).abs() < 1e-24);
        assert!((q[(3, 3)] - 1.44).abs() < 1e-12);
        assert!((q[(2, 2)] - 0.0064).abs() < 1e-15);
    }

    #[test]
    fn dt_scaling_modes() {
        let mut p = ProcessNoiseParams::default();
        let q = build_process_noise(&p, 30.0, 45.0, 3.0).unwrap();
        let s = p.sigma_lat();
        assert!((q[(1, 1)] - s * s * 9.0).abs() < 1e-20);
        assert!((q[(2, 2)] - 0.0064 * 3.0).abs() < 1e-15);
        p.dt_scaling = DtScaling::Single;
        let q = build_process_noise(&p, 30.0, 45.0, 3.0).unwrap();
        assert!((q[(1, 1)] - s * s * 3.0).abs() < 1e-20);
    }

    #[test]
    fn q_is_symmetric_psd_on_grid() {
        let p = ProcessNoiseParams::default();
        for lat in [-89.8, -60.0, 0.0, 42.3, 89.8] {
            for cog in [0.0, 33.0, 90.0, 181.0, 359.9] {
                for dt in [0.01, 1.0, 68.0, 120.0] {
                    let q = build_process_noise(&p, lat, cog, dt).unwrap();
                    assert_eq!(q, q.transpose());
                    assert!(min_eigenvalue(&q) >= 0.0 - 1e-18);
                }
            }
        }
    }

    #[test]
    fn dispersion_deep_and_shallow_limits() {
        let g = STANDARD_GRAVITY;
        let k = solve_dispersion(5.0, 1000.0, g);
        let deep = (2.0 * PI / 5.0f64).powi(2) / g;
        assert!((k - deep).abs() / deep < 1e-9);
        // shallow water: k ≈ ω / sqrt(g h)
        let k = solve_dispersion(60.0, 2.0, g);
        let shallow = 2.0 * PI / 60.0 / (g * 2.0f64).sqrt();
        assert!((k - shallow).abs() / shallow < 1e-3);
        let omega = 2.0 * PI / 60.0;
        assert!((g * k * (k * 2.0).tanh() - omega * omega).abs() < 1e-12 * omega * omega * 10.0);
    }

    #[test]
    fn deep_water_radius_is_half_height() {
        let w = wave_orbital_kinematics(3.0, 6.0, 5000.0, STANDARD_GRAVITY).unwrap();
        assert!((w.zeta - 1.5).abs() < 1e-12);
    }

    #[test]
    fn beaufort_rows_4_and_7() {
        let w = wave_orbital_kinematics(1.0, 5.0, DEEP_WATER_DEPTH, STANDARD_GRAVITY).unwrap();
        assert!((w.zeta - 0.5).abs() / 0.5 < 0.05);
        assert!((w.u_max - 0.62).abs() / 0.62 < 0.05);
        let w = wave_orbital_kinematics(5.3, 11.5, DEEP_WATER_DEPTH, STANDARD_GRAVITY).unwrap();
        assert!((w.zeta - 2.65).abs() / 2.65 < 0.05);
        assert!((w.u_max - 1.45).abs() / 1.45 < 0.05);
    }

    #[test]
    fn wave_kinematics_domain() {
        assert!(wave_orbital_kinematics(-1.0, 5.0, 10.0, STANDARD_GRAVITY).is_err());
        assert!(wave_orbital_kinematics(1.0, 0.0, 10.0, STANDARD_GRAVITY).is_err());
        let w = wave_orbital_kinematics(0.0, 5.0, 10.0, STANDARD_GRAVITY).unwrap();
        assert_eq!(w.zeta, 0.0);
        assert_eq!(w.u_max, 0.0);
    }
}
