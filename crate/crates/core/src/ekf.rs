//! Plane-Cartesian EKF baseline.
//!
//! Positions are expressed in a North-East-Down frame tangent to the WGS84
//! ellipsoid at a fixed origin. The state is `[x (m N), y (m E), U (m/s),
//! χ (rad)]` with constant-velocity kinematics `ẋ = U cos χ`, `ẏ = U sin χ`.

use crate::geodesy::{normalize_lon, wrap_360, GeoPoint, WGS84_A, WGS84_F};
use crate::linalg::{is_finite, symmetrize, Mat4, Vec4};
use crate::ukf::{GeodeticState, Measurement, UkfError};
use std::f64::consts::{PI, TAU};

/// Default tangent-plane origin (Boston Harbor entrance).
pub const DEFAULT_ORIGIN: GeoPoint = GeoPoint { lon: -71.0237, lat: 42.3469 };

const E2: f64 = WGS84_F * (2.0 - WGS84_F);

/// WGS84 geodetic coordinates (degrees, meters) to ECEF.
pub fn geodetic_to_ecef(lon: f64, lat: f64, h: f64) -> [f64; 3] {
    let (sl, cl) = lat.to_radians().sin_cos();
    let (so, co) = lon.to_radians().sin_cos();
    let n = WGS84_A / (1.0 - E2 * sl * sl).sqrt();
    [(n + h) * cl * co, (n + h) * cl * so, (n * (1.0 - E2) + h) * sl]
}

/// ECEF to WGS84 `(lon, lat, h)` by fixed-point iteration on latitude.
pub fn ecef_to_geodetic(p: [f64; 3]) -> (f64, f64, f64) {
    let [x, y, z] = p;
    let r = x.hypot(y);
    let lon = y.atan2(x).to_degrees();
    let mut lat = z.atan2(r * (1.0 - E2));
    let mut h = 0.0;
    for _ in 0..30 {
        let s = lat.sin();
        let n = WGS84_A / (1.0 - E2 * s * s).sqrt();
        h = if lat.cos().abs() > 1e-10 {
            r / lat.cos() - n
        } else {
            z.abs() / s.abs() - n * (1.0 - E2)
        };
        let next = z.atan2(r * (1.0 - E2 * n / (n + h)));
        let done = (next - lat).abs() < 1e-15;
        lat = next;
        if done {
            break;
        }
    }
    (normalize_lon(lon), lat.to_degrees(), h)
}

/// Local NED frame at a fixed origin on the ellipsoid surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentPlane {
    origin: GeoPoint,
    origin_ecef: [f64; 3],
    // Rows are the N, E, D unit vectors in ECEF.
    rot: [[f64; 3]; 3],
}

impl Default for TangentPlane {
    fn default() -> Self {
        Self::new(DEFAULT_ORIGIN)
    }
}

impl TangentPlane {
    pub fn new(origin: GeoPoint) -> Self {
        let (sl, cl) = origin.lat.to_radians().sin_cos();
        let (so, co) = origin.lon.to_radians().sin_cos();
        Self {
            origin,
            origin_ecef: geodetic_to_ecef(origin.lon, origin.lat, 0.0),
            rot: [
                [-sl * co, -sl * so, cl],
                [-so, co, 0.0],
                [-cl * co, -cl * so, -sl],
            ],
        }
    }

    pub fn origin(&self) -> GeoPoint {
        self.origin
    }

    /// Full NED coordinates of a surface point.
    pub fn to_ned(&self, p: GeoPoint) -> [f64; 3] {
        let e = geodetic_to_ecef(p.lon, p.lat, 0.0);
        let d = [e[0] - self.origin_ecef[0], e[1] - self.origin_ecef[1], e[2] - self.origin_ecef[2]];
        self.rot.map(|row| row[0] * d[0] + row[1] * d[1] + row[2] * d[2])
    }

    fn ned_to_ecef(&self, ned: [f64; 3]) -> [f64; 3] {
        let mut out = self.origin_ecef;
        for (i, o) in out.iter_mut().enumerate() {
            *o += self.rot[0][i] * ned[0] + self.rot[1][i] * ned[1] + self.rot[2][i] * ned[2];
        }
        out
    }
}

/// North/East coordinates (m) of a surface point.
pub fn geodetic_to_ned(p: GeoPoint, plane: &TangentPlane) -> (f64, f64) {
    let [n, e, _] = plane.to_ned(p);
    (n, e)
}

/// Surface point whose North/East coordinates are `(x, y)`; the inverse of
/// [`geodetic_to_ned`]. The down offset is found by iterating until the point
/// lies on the ellipsoid.
pub fn ned_to_geodetic(x: f64, y: f64, plane: &TangentPlane) -> GeoPoint {
    let mut d = (x * x + y * y) / (2.0 * WGS84_A);
    let mut lon_lat = (plane.origin.lon, plane.origin.lat);
    for _ in 0..50 {
        let (lon, lat, h) = ecef_to_geodetic(plane.ned_to_ecef([x, y, d]));
        lon_lat = (lon, lat);
        if h.abs() < 1e-10 {
            break;
        }
        d += h;
    }
    GeoPoint::new_clamped(lon_lat.0, lon_lat.1)
}

/// Planar EKF state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarState {
    /// Meters North of the origin.
    pub x: f64,
    /// Meters East of the origin.
    pub y: f64,
    /// Speed (m/s).
    pub u: f64,
    /// Course (rad).
    pub chi: f64,
}

impl PlanarState {
    pub fn to_vector(&self) -> Vec4 {
        Vec4::new(self.x, self.y, self.u, self.chi)
    }

    pub fn from_vector(v: &Vec4) -> Self {
        Self { x: v[0], y: v[1], u: v[2], chi: v[3] }
    }

    /// Converts to geodetic coordinates with COG in degrees.
    pub fn to_geodetic(&self, plane: &TangentPlane) -> GeodeticState {
        let p = ned_to_geodetic(self.x, self.y, plane);
        GeodeticState {
            lon: p.lon,
            lat: p.lat,
            sog: self.u.max(0.0),
            cog: wrap_360(self.chi.to_degrees()),
        }
    }
}

/// `f(x) = [U cos χ, U sin χ, 0, 0]`.
pub fn dynamics(s: &PlanarState) -> Vec4 {
    let (sc, cc) = s.chi.sin_cos();
    Vec4::new(s.u * cc, s.u * sc, 0.0, 0.0)
}

/// Jacobian `∂f/∂x`.
pub fn jacobian(s: &PlanarState) -> Mat4 {
    let (sc, cc) = s.chi.sin_cos();
    let mut a = Mat4::zeros();
    a[(0, 2)] = cc;
    a[(0, 3)] = -s.u * sc;
    a[(1, 2)] = sc;
    a[(1, 3)] = s.u * cc;
    a
}

/// Euler step `x += f(x) dt`, `P ← Φ P Φᵀ + Q dt` with `Φ = I + A dt`.
pub fn ekf_predict(state: &PlanarState, p: &Mat4, dt: f64, q: &Mat4) -> (PlanarState, Mat4) {
    let phi = Mat4::identity() + jacobian(state) * dt;
    let x = state.to_vector() + dynamics(state) * dt;
    (PlanarState::from_vector(&x), symmetrize(&(phi * p * phi.transpose() + q * dt)))
}

/// Measurement in the planar frame; `z[3]` is in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarMeasurement {
    pub z: Vec4,
    pub mask: [bool; 4],
}

impl PlanarMeasurement {
    /// Maps a geodetic measurement onto the plane. Position is observed only
    /// when both lon and lat are present.
    pub fn from_geodetic(m: &Measurement, plane: &TangentPlane) -> Self {
        let mut z = Vec4::zeros();
        let mut mask = [false; 4];
        if let (Some(lon), Some(lat)) = (m.get(0), m.get(1)) {
            let (x, y) = geodetic_to_ned(GeoPoint::new_clamped(lon, lat), plane);
            z[0] = x;
            z[1] = y;
            mask[0] = true;
            mask[1] = true;
        }
        if let Some(u) = m.get(2) {
            z[2] = u;
            mask[2] = true;
        }
        if let Some(c) = m.get(3) {
            z[3] = c.to_radians();
            mask[3] = true;
        }
        Self { z, mask }
    }
}

/// Shortest signed angle `measured - predicted` in radians, in `[-π, π)`.
pub fn wrap_residual_rad(predicted: f64, measured: f64) -> f64 {
    let w = (measured - predicted + PI).rem_euclid(TAU) - PI;
    if w >= PI {
        -PI
    } else {
        w
    }
}

/// Kalman update with `H` the identity with unobserved rows zeroed; Joseph
/// form covariance. Returns the posterior and the innovation `(y, S)`.
pub fn ekf_update(
    state: &PlanarState,
    p: &Mat4,
    meas: &PlanarMeasurement,
    r: &Mat4,
) -> Result<(PlanarState, Mat4, Vec4, Mat4), UkfError> {
    let h = Mat4::from_diagonal(&Vec4::from_fn(|i, _| if meas.mask[i] { 1.0 } else { 0.0 }));
    let x = state.to_vector();
    let mut y = Vec4::zeros();
    for i in 0..4 {
        if meas.mask[i] {
            y[i] = if i == 3 { wrap_residual_rad(x[3], meas.z[3]) } else { meas.z[i] - x[i] };
        }
    }
    let s = h * p * h.transpose() + r;
    if meas.mask.iter().all(|m| !m) {
        return Ok((*state, *p, y, s));
    }
    let s_inv = s.try_inverse().filter(is_finite).ok_or(UkfError::SingularInnovation)?;
    let k = p * h.transpose() * s_inv;
    let mut post = PlanarState::from_vector(&(x + k * y));
    post.chi = post.chi.rem_euclid(TAU);
    let i_kh = Mat4::identity() - k * h;
    let cov = symmetrize(&(i_kh * p * i_kh.transpose() + k * r * k.transpose()));
    Ok((post, cov, y, s))
}

/// Initial covariance, process and measurement noise in planar units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EkfTuning {
    pub p0: Mat4,
    pub q: Mat4,
    pub r: Mat4,
}

impl Default for EkfTuning {
    fn default() -> Self {
        Self {
            p0: Mat4::identity() * 0.1,
            q: Mat4::from_diagonal(&Vec4::new(0.01, 0.01, 0.1, 0.1)),
            r: Mat4::from_diagonal(&Vec4::new(1e-3, 1e-3, 1e-3, 1e-2)),
        }
    }
}

/// A single planar EKF instance.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarEkf {
    pub tuning: EkfTuning,
    pub plane: TangentPlane,
    state: PlanarState,
    cov: Mat4,
    time: f64,
}

impl PlanarEkf {
    /// Starts from a measurement carrying at least a position.
    pub fn initialize(
        meas: &Measurement,
        t: f64,
        tuning: EkfTuning,
        plane: TangentPlane,
    ) -> Result<Self, UkfError> {
        let pm = PlanarMeasurement::from_geodetic(meas, &plane);
        if !pm.mask[0] {
            return Err(UkfError::InvalidInput("initialization needs a position"));
        }
        let state = PlanarState::from_vector(&pm.z);
        Ok(Self { tuning, plane, state, cov: tuning.p0, time: t })
    }

    pub fn state(&self) -> &PlanarState {
        &self.state
    }

    pub fn covariance(&self) -> &Mat4 {
        &self.cov
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn geodetic(&self) -> GeodeticState {
        self.state.to_geodetic(&self.plane)
    }

    /// One-sigma horizontal position uncertainty (m).
    pub fn position_sigma_m(&self) -> f64 {
        (self.cov[(0, 0)] + self.cov[(1, 1)]).max(0.0).sqrt()
    }

    pub fn predict_to(&mut self, t: f64) {
        let dt = t - self.time;
        if dt > 0.0 {
            let (s, p) = ekf_predict(&self.state, &self.cov, dt, &self.tuning.q);
            self.state = s;
            self.cov = p;
            self.time = t;
        }
    }

    pub fn update(&mut self, meas: &Measurement) -> Result<(), UkfError> {
        let pm = PlanarMeasurement::from_geodetic(meas, &self.plane);
        let (s, p, _, _) = ekf_update(&self.state, &self.cov, &pm, &self.tuning.r)?;
        self.state = s;
        self.cov = p;
        Ok(())
    }
}
