//! Geometric kernels on the sphere and the WGS84 ellipsoid.
//!
//! Angles at the public surface are degrees, distances are meters. Longitudes
//! are normalized into `[-180, 180)` on the way out of every operation, never
//! in the middle of one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// WGS84 semi-major axis (m).
pub const WGS84_A: f64 = 6_378_137.0;
/// WGS84 flattening.
pub const WGS84_F: f64 = 1.0 / 298.257_223_563;
/// Mean Earth radius used by the spherical process model (m).
pub const MEAN_EARTH_RADIUS: f64 = 6.371e6;

const VINCENTY_TOLERANCE: f64 = 1e-12;
const VINCENTY_MAX_ITERATIONS: usize = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeodesyError {
    #[error("latitude {0} outside [-90, 90]")]
    LatitudeOutOfRange(f64),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("Vincenty iteration did not converge after {0} iterations")]
    NonConvergence(usize),
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("invalid earth model: {0}")]
    InvalidModel(&'static str),
}

/// Wraps a longitude into `[-180, 180)`.
pub fn normalize_lon(lon: f64) -> f64 {
    let w = (lon + 180.0).rem_euclid(360.0) - 180.0;
    if w >= 180.0 {
        -180.0
    } else {
        w
    }
}

/// Wraps an angle into `[0, 360)`.
pub fn wrap_360(deg: f64) -> f64 {
    let w = deg.rem_euclid(360.0);
    if w >= 360.0 {
        0.0
    } else {
        w
    }
}

/// A point on the Earth's surface, degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lon: f64,
    pub lat: f64,
}

impl GeoPoint {
    /// Builds a point, normalizing `lon` and rejecting latitudes outside
    /// `[-90, 90]`.
    pub fn new(lon: f64, lat: f64) -> Result<Self, GeodesyError> {
        if !lon.is_finite() || !lat.is_finite() {
            return Err(GeodesyError::NonFinite);
        }
        if !(-90.0..=90.0).contains(&lat) {
            return Err(GeodesyError::LatitudeOutOfRange(lat));
        }
        Ok(Self {
            lon: normalize_lon(lon),
            lat,
        })
    }

    pub(crate) fn new_clamped(lon: f64, lat: f64) -> Self {
        Self {
            lon: normalize_lon(lon),
            lat: lat.clamp(-90.0, 90.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EarthShape {
    Sphere,
    Ellipsoid,
}

/// Earth figure used for propagation and distance scoring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EarthModel {
    pub mode: EarthShape,
    pub sphere_radius: f64,
    pub semi_major: f64,
    pub flattening: f64,
}

impl Default for EarthModel {
    fn default() -> Self {
        Self::sphere()
    }
}

impl EarthModel {
    /// Sphere of mean radius 6.371e6 m; WGS84 ellipsoid parameters are kept
    /// alongside for scoring.
    pub fn sphere() -> Self {
        Self {
            mode: EarthShape::Sphere,
            sphere_radius: MEAN_EARTH_RADIUS,
            semi_major: WGS84_A,
            flattening: WGS84_F,
        }
    }

    pub fn wgs84() -> Self {
        Self {
            mode: EarthShape::Ellipsoid,
            ..Self::sphere()
        }
    }

    pub fn validate(&self) -> Result<(), GeodesyError> {
        if !(self.sphere_radius > 0.0) {
            return Err(GeodesyError::InvalidModel("sphere radius must be positive"));
        }
        if !(self.semi_major > 0.0) {
            return Err(GeodesyError::InvalidModel("semi-major axis must be positive"));
        }
        if !(0.0..1.0).contains(&self.flattening) {
            return Err(GeodesyError::InvalidModel("flattening must lie in [0, 1)"));
        }
        Ok(())
    }

    /// `(a, f)` of the figure this model describes; a sphere is an ellipsoid
    /// with zero flattening.
    fn axes(&self) -> (f64, f64) {
        match self.mode {
            EarthShape::Sphere => (self.sphere_radius, 0.0),
            EarthShape::Ellipsoid => (self.semi_major, self.flattening),
        }
    }
}

/// Output of the direct geodesic problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSolution {
    pub destination: GeoPoint,
    /// Forward azimuth at the destination, `[0, 360)`.
    pub final_bearing: f64,
    pub iterations: usize,
}

/// Output of the inverse geodesic problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicInverse {
    pub distance: f64,
    pub initial_bearing: f64,
    pub final_bearing: f64,
    pub iterations: usize,
}

/// Great-circle step without longitude normalization.
///
/// Returns `(lon, lat)` in degrees where `lon` is the input longitude plus the
/// increment, so that callers averaging several propagated points (sigma
/// points) never see a wrap at the antimeridian.
pub(crate) fn sphere_step(lon: f64, lat: f64, bearing: f64, distance: f64, radius: f64) -> (f64, f64) {
    if lat.abs() >= 90.0 {
        // At a pole every direction is south (north); the bearing names the
        // meridian taken out of the pole.
        let c = (distance / radius).to_degrees();
        let lat_out = if lat > 0.0 { 90.0 - c } else { -90.0 + c };
        return (bearing, lat_out.clamp(-90.0, 90.0));
    }
    let phi = lat.to_radians();
    let alpha = bearing.to_radians();
    let c = distance / radius;
    let (sin_phi, cos_phi) = phi.sin_cos();
    let (sin_c, cos_c) = c.sin_cos();
    let (sin_a, cos_a) = alpha.sin_cos();

    let sin_lat2 = (sin_phi * cos_c + cos_phi * sin_c * cos_a).clamp(-1.0, 1.0);
    let lat2 = sin_lat2.asin();
    let dlon = (sin_c * sin_a).atan2(cos_phi * cos_c - sin_phi * sin_c * cos_a);
    (lon + dlon.to_degrees(), lat2.to_degrees())
}

/// Forward azimuth on arrival after `distance` meters along the great circle
/// leaving `p` at `bearing` degrees.
pub fn great_circle_final_bearing(p: GeoPoint, bearing: f64, distance: f64, radius: f64) -> f64 {
    let (sin_phi, cos_phi) = p.lat.to_radians().sin_cos();
    let (sin_a, cos_a) = bearing.to_radians().sin_cos();
    let (sin_c, cos_c) = (distance / radius).sin_cos();
    let y = sin_a * cos_phi;
    let x = cos_c * cos_phi * cos_a - sin_phi * sin_c;
    wrap_360(y.atan2(x).to_degrees())
}

/// Point reached after `distance` meters along the great circle leaving `p`
/// at `bearing` degrees on a sphere of radius `radius`.
pub fn propagate_sphere(p: GeoPoint, bearing: f64, distance: f64, radius: f64) -> GeoPoint {
    if distance == 0.0 {
        return p;
    }
    let (lon, lat) = sphere_step(p.lon, p.lat, bearing, distance, radius);
    GeoPoint::new_clamped(lon, lat)
}

fn vincenty_coefficients(u_sq: f64) -> (f64, f64) {
    let a = 1.0 + u_sq / 16384.0 * (4096.0 + u_sq * (-768.0 + u_sq * (320.0 - 175.0 * u_sq)));
    let b = u_sq / 1024.0 * (256.0 + u_sq * (-128.0 + u_sq * (74.0 - 47.0 * u_sq)));
    (a, b)
}

fn delta_sigma(b: f64, sin_s: f64, cos_s: f64, cos_2sm: f64) -> f64 {
    let c2 = cos_2sm * cos_2sm;
    b * sin_s
        * (cos_2sm
            + b / 4.0
                * (cos_s * (-1.0 + 2.0 * c2)
                    - b / 6.0 * cos_2sm * (-3.0 + 4.0 * sin_s * sin_s) * (-3.0 + 4.0 * c2)))
}

/// Vincenty's direct solution on the model's ellipsoid.
pub fn vincenty_direct(
    p: GeoPoint,
    bearing: f64,
    distance: f64,
    model: &EarthModel,
) -> Result<GeodesicSolution, GeodesyError> {
    model.validate()?;
    if !(distance >= 0.0) || !bearing.is_finite() {
        return Err(GeodesyError::Domain("distance must be >= 0 and bearing finite"));
    }
    if distance == 0.0 {
        return Ok(GeodesicSolution {
            destination: p,
            final_bearing: wrap_360(bearing),
            iterations: 1,
        });
    }
    let (a, f) = model.axes();
    let b = a * (1.0 - f);
    let alpha1 = bearing.to_radians();
    let (sin_a1, cos_a1) = alpha1.sin_cos();

    let tan_u1 = (1.0 - f) * p.lat.to_radians().tan();
    let cos_u1 = 1.0 / (1.0 + tan_u1 * tan_u1).sqrt();
    let sin_u1 = tan_u1 * cos_u1;
    let sigma1 = tan_u1.atan2(cos_a1);
    let sin_alpha = cos_u1 * sin_a1;
    let cos_sq_alpha = 1.0 - sin_alpha * sin_alpha;
    let u_sq = cos_sq_alpha * (a * a - b * b) / (b * b);
    let (big_a, big_b) = vincenty_coefficients(u_sq);

    let sigma0 = distance / (b * big_a);
    let mut sigma = sigma0;
    let mut iterations = 0;
    let (sin_s, cos_s, cos_2sm) = loop {
        iterations += 1;
        let cos_2sm = (2.0 * sigma1 + sigma).cos();
        let (sin_s, cos_s) = sigma.sin_cos();
        let next = sigma0 + delta_sigma(big_b, sin_s, cos_s, cos_2sm);
        let done = (next - sigma).abs() < VINCENTY_TOLERANCE;
        sigma = next;
        if done {
            let (sin_s, cos_s) = sigma.sin_cos();
            break (sin_s, cos_s, (2.0 * sigma1 + sigma).cos());
        }
        if iterations >= VINCENTY_MAX_ITERATIONS {
            return Err(GeodesyError::NonConvergence(iterations));
        }
    };

    let tmp = sin_u1 * sin_s - cos_u1 * cos_s * cos_a1;
    let lat2 = (sin_u1 * cos_s + cos_u1 * sin_s * cos_a1)
        .atan2((1.0 - f) * (sin_alpha * sin_alpha + tmp * tmp).sqrt());
    let lambda = (sin_s * sin_a1).atan2(cos_u1 * cos_s - sin_u1 * sin_s * cos_a1);
    let c = f / 16.0 * cos_sq_alpha * (4.0 + f * (4.0 - 3.0 * cos_sq_alpha));
    let l = lambda
        - (1.0 - c)
            * f
            * sin_alpha
            * (sigma + c * sin_s * (cos_2sm + c * cos_s * (-1.0 + 2.0 * cos_2sm * cos_2sm)));
    let final_bearing = sin_alpha.atan2(-tmp).to_degrees();

    Ok(GeodesicSolution {
        destination: GeoPoint::new_clamped(p.lon + l.to_degrees(), lat2.to_degrees()),
        final_bearing: wrap_360(final_bearing),
        iterations,
    })
}

/// Vincenty's inverse solution: geodesic distance and azimuths between two
/// points. Fails with [`GeodesyError::NonConvergence`] for nearly antipodal
/// pairs.
pub fn vincenty_inverse(
    p1: GeoPoint,
    p2: GeoPoint,
    model: &EarthModel,
) -> Result<GeodesicInverse, GeodesyError> {
    model.validate()?;
    let (a, f) = model.axes();
    let b = a * (1.0 - f);
    let l = normalize_lon(p2.lon - p1.lon).to_radians();

    let tan_u1 = (1.0 - f) * p1.lat.to_radians().tan();
    let cos_u1 = 1.0 / (1.0 + tan_u1 * tan_u1).sqrt();
    let sin_u1 = tan_u1 * cos_u1;
    let tan_u2 = (1.0 - f) * p2.lat.to_radians().tan();
    let cos_u2 = 1.0 / (1.0 + tan_u2 * tan_u2).sqrt();
    let sin_u2 = tan_u2 * cos_u2;

    let mut lambda = l;
    let mut iterations = 0;
    let mut settled = false;
    loop {
        iterations += 1;
        let (sin_l, cos_l) = lambda.sin_cos();
        let t1 = cos_u2 * sin_l;
        let t2 = cos_u1 * sin_u2 - sin_u1 * cos_u2 * cos_l;
        let sin_s = (t1 * t1 + t2 * t2).sqrt();
        if sin_s == 0.0 {
            return Ok(GeodesicInverse {
                distance: 0.0,
                initial_bearing: 0.0,
                final_bearing: 0.0,
                iterations,
            });
        }
        let cos_s = sin_u1 * sin_u2 + cos_u1 * cos_u2 * cos_l;
        let sigma = sin_s.atan2(cos_s);
        let sin_alpha = cos_u1 * cos_u2 * sin_l / sin_s;
        let cos_sq_alpha = 1.0 - sin_alpha * sin_alpha;
        let cos_2sm = if cos_sq_alpha != 0.0 {
            cos_s - 2.0 * sin_u1 * sin_u2 / cos_sq_alpha
        } else {
            0.0
        };
        let c = f / 16.0 * cos_sq_alpha * (4.0 + f * (4.0 - 3.0 * cos_sq_alpha));
        let next = l
            + (1.0 - c)
                * f
                * sin_alpha
                * (sigma + c * sin_s * (cos_2sm + c * cos_s * (-1.0 + 2.0 * cos_2sm * cos_2sm)));
        if next.abs() > PI {
            return Err(GeodesyError::NonConvergence(iterations));
        }
        let converged = (next - lambda).abs() < VINCENTY_TOLERANCE;
        lambda = next;
        if converged && !settled {
            // One more pass so sigma and alpha belong to the converged lambda.
            settled = true;
            continue;
        }
        if settled {
            let u_sq = cos_sq_alpha * (a * a - b * b) / (b * b);
            let (big_a, big_b) = vincenty_coefficients(u_sq);
            let ds = delta_sigma(big_b, sin_s, cos_s, cos_2sm);
            let distance = b * big_a * (sigma - ds);
            let (sin_l, cos_l) = lambda.sin_cos();
            let az1 = (cos_u2 * sin_l).atan2(cos_u1 * sin_u2 - sin_u1 * cos_u2 * cos_l);
            let az2 = (cos_u1 * sin_l).atan2(-sin_u1 * cos_u2 + cos_u1 * sin_u2 * cos_l);
            return Ok(GeodesicInverse {
                distance,
                initial_bearing: wrap_360(az1.to_degrees()),
                final_bearing: wrap_360(az2.to_degrees()),
                iterations,
            });
        }
        if iterations >= VINCENTY_MAX_ITERATIONS {
            return Err(GeodesyError::NonConvergence(iterations));
        }
    }
}

/// Spherical great-circle distance (haversine form of the law of cosines).
pub fn great_circle_distance(p1: GeoPoint, p2: GeoPoint, radius: f64) -> f64 {
    let phi1 = p1.lat.to_radians();
    let phi2 = p2.lat.to_radians();
    let dphi = phi2 - phi1;
    let dlam = normalize_lon(p2.lon - p1.lon).to_radians();
    let h = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlam / 2.0).sin().powi(2);
    2.0 * radius * h.sqrt().clamp(0.0, 1.0).asin()
}

/// Ellipsoidal distance via Vincenty's inverse, falling back to the spherical
/// distance when the iteration does not converge.
pub fn surface_distance(p1: GeoPoint, p2: GeoPoint) -> f64 {
    match vincenty_inverse(p1, p2, &EarthModel::wgs84()) {
        Ok(inv) => inv.distance,
        Err(_) => great_circle_distance(p1, p2, MEAN_EARTH_RADIUS),
    }
}

/// Points distributed uniformly over the sphere's surface area.
///
/// `lon = 360 u`, `lat = acos(2v - 1) - 90°` with `u, v ~ U[0, 1)` drawn from
/// a ChaCha8 stream seeded with `seed`.
pub fn sample_uniform_sphere(n: usize, seed: u64) -> Vec<GeoPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| uniform_sphere_point(&mut rng)).collect()
}

/// One area-uniform point drawn from `rng`.
pub fn uniform_sphere_point<R: Rng + ?Sized>(rng: &mut R) -> GeoPoint {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    let lon = (2.0 * PI * u).to_degrees();
    let lat = ((2.0 * v - 1.0).acos() - PI / 2.0).to_degrees();
    GeoPoint::new_clamped(lon, lat)
}

/// Range error incurred by measuring the separation of two points on a local
/// tangent plane instead of along the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationError {
    /// Projected (planar) separation.
    pub delta_l: f64,
    /// True great-circle separation.
    pub delta_s: f64,
    /// `delta_s - delta_l`.
    pub epsilon: f64,
}

/// Separation error for two points whose tangent-plane projections lie at
/// distances `l1`, `l2` from the plane origin with in-plane angle `gamma`.
pub fn tangent_plane_separation_error(
    l1: f64,
    l2: f64,
    gamma: f64,
    radius: f64,
) -> Result<SeparationError, GeodesyError> {
    if !(0.0..radius).contains(&l1) || !(0.0..radius).contains(&l2) {
        return Err(GeodesyError::Domain("projected distance must lie in [0, R)"));
    }
    if !(0.0..=PI).contains(&gamma) {
        return Err(GeodesyError::Domain("gamma must lie in [0, pi]"));
    }
    let delta_l = (l1 * l1 + l2 * l2 - 2.0 * l1 * l2 * gamma.cos()).max(0.0).sqrt();
    // Central angle between points at angular distances θ1, θ2 from the
    // origin, separated by γ: haversine form of the spherical law of cosines.
    let t1 = (l1 / radius).asin();
    let t2 = (l2 / radius).asin();
    let hav = ((t1 - t2) / 2.0).sin().powi(2) + t1.sin() * t2.sin() * (gamma / 2.0).sin().powi(2);
    let delta_s = 2.0 * radius * hav.sqrt().clamp(0.0, 1.0).asin();
    Ok(SeparationError {
        delta_l,
        delta_s,
        epsilon: delta_s - delta_l,
    })
}

/// Separation error for two points on the same great circle through the
/// plane origin, at arc distances `s1`, `s2` on the same side.
pub fn great_circle_separation_error(s1: f64, s2: f64, radius: f64) -> f64 {
    let ds = (s2 - s1).abs();
    let dl = 2.0 * radius * (((s2 - s1) / (2.0 * radius)).sin() * ((s1 + s2) / (2.0 * radius)).cos()).abs();
    ds - dl
}
