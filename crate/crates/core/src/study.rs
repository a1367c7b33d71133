//! Batch numerical studies: spherical-model error against the ellipsoid,
//! tangent-plane separation error, and the sea-state kinematics table.

use crate::geodesy::{
    propagate_sphere, surface_distance, tangent_plane_separation_error, uniform_sphere_point, vincenty_direct,
    EarthModel, GeoPoint, GeodesyError, MEAN_EARTH_RADIUS,
};
use crate::noise::{wave_orbital_kinematics, NoiseError, BEAUFORT_SEA_STATES, DEEP_WATER_DEPTH, STANDARD_GRAVITY};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

const CHUNK: usize = 4096;

/// Settings for the spherical-model error study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereErrorConfig {
    pub samples: usize,
    pub seed: u64,
    /// Distance range (m); distances are drawn log-uniformly.
    pub min_distance: f64,
    pub max_distance: f64,
    pub radius: f64,
}

impl Default for SphereErrorConfig {
    fn default() -> Self {
        Self { samples: 100_000, seed: 0, min_distance: 1.0, max_distance: 500_000.0, radius: MEAN_EARTH_RADIUS }
    }
}

/// One start point, bearing and distance, with the gap between the sphere
/// and WGS84 endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereErrorSample {
    pub lon: f64,
    pub lat: f64,
    pub bearing: f64,
    pub distance: f64,
    pub error_m: f64,
    /// `error_m / distance`.
    pub normalized: f64,
}

/// Draws the samples and evaluates them in parallel. The result depends only
/// on the config, not on the thread count.
pub fn sphere_error_samples(cfg: &SphereErrorConfig) -> Result<Vec<SphereErrorSample>, GeodesyError> {
    if !(cfg.min_distance > 0.0 && cfg.max_distance >= cfg.min_distance && cfg.max_distance.is_finite()) {
        return Err(GeodesyError::Domain("distance range must satisfy 0 < min <= max"));
    }
    let model = EarthModel::wgs84();
    let (ln_lo, ln_hi) = (cfg.min_distance.ln(), cfg.max_distance.ln());
    let chunks = cfg.samples.div_ceil(CHUNK);
    let parts: Result<Vec<Vec<SphereErrorSample>>, GeodesyError> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(c as u64);
            let n = CHUNK.min(cfg.samples - c * CHUNK);
            (0..n)
                .map(|_| {
                    let p = uniform_sphere_point(&mut rng);
                    let bearing = rng.random::<f64>() * 360.0;
                    let distance = (ln_lo + rng.random::<f64>() * (ln_hi - ln_lo)).exp();
                    sphere_error(p, bearing, distance, cfg.radius, &model)
                })
                .collect()
        })
        .collect();
    Ok(parts?.into_iter().flatten().collect())
}

fn sphere_error(
    p: GeoPoint,
    bearing: f64,
    distance: f64,
    radius: f64,
    model: &EarthModel,
) -> Result<SphereErrorSample, GeodesyError> {
    let s = propagate_sphere(p, bearing, distance, radius);
    let v = vincenty_direct(p, bearing, distance, model)?.destination;
    let error_m = surface_distance(s, v);
    Ok(SphereErrorSample { lon: p.lon, lat: p.lat, bearing, distance, error_m, normalized: error_m / distance })
}

/// Nearest-rank percentile of an ascending slice, `q` in `[0, 1]`.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let rank = (q.clamp(0.0, 1.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Distribution of normalized error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorSummary {
    pub count: usize,
    pub p50: f64,
    pub p75: f64,
    pub p95: f64,
    pub max: f64,
}

impl ErrorSummary {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let mut v: Vec<f64> = values.into_iter().collect();
        v.sort_by(f64::total_cmp);
        Self {
            count: v.len(),
            p50: percentile(&v, 0.50),
            p75: percentile(&v, 0.75),
            p95: percentile(&v, 0.95),
            max: v.last().copied().unwrap_or(f64::NAN),
        }
    }
}

/// Normalized-error summary per latitude band of `width` degrees, south to
/// north. Empty bands are omitted.
pub fn latitude_bands(samples: &[SphereErrorSample], width: f64) -> Vec<(f64, f64, ErrorSummary)> {
    let width = width.clamp(1e-6, 180.0);
    let bands = (180.0 / width).ceil() as usize;
    let mut bins: Vec<Vec<f64>> = vec![Vec::new(); bands];
    for s in samples {
        let i = (((s.lat + 90.0) / width) as usize).min(bands - 1);
        bins[i].push(s.normalized);
    }
    bins.into_iter()
        .enumerate()
        .filter(|(_, b)| !b.is_empty())
        .map(|(i, b)| {
            let lo = -90.0 + i as f64 * width;
            (lo, (lo + width).min(90.0), ErrorSummary::of(b))
        })
        .collect()
}

/// One point of the tangent-plane error surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlaneErrorPoint {
    pub l1: f64,
    pub l2: f64,
    pub gamma: f64,
    pub delta_l: f64,
    pub delta_s: f64,
    pub epsilon: f64,
}

/// Evaluates the separation error on an `n_l × n_l × n_gamma` grid with
/// `L` evenly spaced over `[0, l_max]` and `γ` over `[0, π]`. Rows are
/// ordered by `l1`, then `l2`, then `γ`.
pub fn plane_error_grid(
    l_max: f64,
    n_l: usize,
    n_gamma: usize,
    radius: f64,
) -> Result<Vec<PlaneErrorPoint>, GeodesyError> {
    if n_l < 2 || n_gamma < 2 {
        return Err(GeodesyError::Domain("grid needs at least two points per axis"));
    }
    let ls: Vec<f64> = (0..n_l).map(|i| l_max * i as f64 / (n_l - 1) as f64).collect();
    let gs: Vec<f64> = (0..n_gamma).map(|j| PI * j as f64 / (n_gamma - 1) as f64).collect();
    let mut out = Vec::with_capacity(n_l * n_l * n_gamma);
    for &l1 in &ls {
        for &l2 in &ls {
            for &gamma in &gs {
                let e = tangent_plane_separation_error(l1, l2, gamma, radius)?;
                out.push(PlaneErrorPoint { l1, l2, gamma, delta_l: e.delta_l, delta_s: e.delta_s, epsilon: e.epsilon });
            }
        }
    }
    Ok(out)
}

/// `(l1, l2)` pairs of a grid from [`plane_error_grid`] along which `ε`
/// decreases somewhere as `γ` grows, allowing `tol` of rounding slack.
pub fn gamma_monotonicity_violations(grid: &[PlaneErrorPoint], n_gamma: usize, tol: f64) -> Vec<(f64, f64)> {
    grid.chunks(n_gamma.max(1))
        .filter(|row| row.windows(2).any(|w| w[1].epsilon < w[0].epsilon - tol))
        .map(|row| (row[0].l1, row[0].l2))
        .collect()
}

/// One row of the sea-state table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveRow {
    pub beaufort: u8,
    pub hs: f64,
    pub tp: f64,
    pub zeta: f64,
    pub u_max: f64,
}

/// Orbital kinematics for each tabulated fully developed sea state.
pub fn wave_table(depth: f64) -> Result<Vec<WaveRow>, NoiseError> {
    BEAUFORT_SEA_STATES
        .iter()
        .map(|&(beaufort, hs, tp)| {
            let w = wave_orbital_kinematics(hs, tp, depth, STANDARD_GRAVITY)?;
            Ok(WaveRow { beaufort, hs, tp, zeta: w.zeta, u_max: w.u_max })
        })
        .collect()
}

/// [`wave_table`] in deep water.
pub fn default_wave_table() -> Vec<WaveRow> {
    wave_table(DEEP_WATER_DEPTH).expect("tabulated sea states are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percentile_nearest_rank() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(percentile(&v, 0.75), 3.0);
        assert_eq!(percentile(&v, 0.0), 1.0);
        assert_eq!(percentile(&v, 1.0), 4.0);
        assert!(percentile(&[], 0.5).is_nan());
    }

    #[test]
    fn sphere_samples_are_deterministic_and_in_range() {
        let cfg = SphereErrorConfig { samples: 5000, seed: 9, ..Default::default() };
        let a = sphere_error_samples(&cfg).unwrap();
        let b = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| sphere_error_samples(&cfg));
        assert_eq!(a, b.unwrap());
        assert_eq!(a.len(), 5000);
        for s in &a {
            assert!((1.0..=500_000.0).contains(&s.distance));
            assert!((0.0..360.0).contains(&s.bearing));
            assert!(s.normalized < 0.0056);
        }
    }

    #[test]
    fn sphere_config_validation() {
        let cfg = SphereErrorConfig { min_distance: 0.0, ..Default::default() };
        assert!(sphere_error_samples(&cfg).is_err());
        let cfg = SphereErrorConfig { samples: 0, ..Default::default() };
        assert!(sphere_error_samples(&cfg).unwrap().is_empty());
    }

    #[test]
    fn bands_cover_all_samples() {
        let cfg = SphereErrorConfig { samples: 2000, seed: 1, ..Default::default() };
        let s = sphere_error_samples(&cfg).unwrap();
        let bands = latitude_bands(&s, 10.0);
        assert_eq!(bands.iter().map(|b| b.2.count).sum::<usize>(), 2000);
        assert!(bands.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn plane_grid_shape_and_corner() {
        let g = plane_error_grid(100_000.0, 5, 3, MEAN_EARTH_RADIUS).unwrap();
        assert_eq!(g.len(), 75);
        let last = g.last().unwrap();
        assert_eq!((last.l1, last.l2, last.gamma), (100_000.0, 100_000.0, PI));
        assert!(last.epsilon > 8.0 && last.epsilon < 8.3);
        assert!(plane_error_grid(1.0, 1, 3, MEAN_EARTH_RADIUS).is_err());
    }

    #[test]
    fn monotone_on_equal_radii() {
        let g = plane_error_grid(100_000.0, 6, 20, MEAN_EARTH_RADIUS).unwrap();
        let bad = gamma_monotonicity_violations(&g, 20, 1e-9);
        assert!(bad.iter().all(|(a, b)| a != b));
    }

    #[test]
    fn wave_rows() {
        let t = default_wave_table();
        assert_eq!(t.len(), 7);
        assert_eq!(t[0].beaufort, 4);
        assert!((t[0].zeta - 0.5).abs() < 1e-6);
        assert!((t[0].u_max - 0.628).abs() < 0.01);
    }
}
