//! Geodesic solutions against vectors from an independent ODE integration on
//! the WGS84 ellipsoid.

use geotrack::geodesy::{
    great_circle_distance, propagate_sphere, vincenty_direct, vincenty_inverse, EarthModel, GeoPoint,
    MEAN_EARTH_RADIUS,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const VECTORS: &str = include_str!("data/geodesic_vectors.csv");

struct Vector {
    start: GeoPoint,
    az1: f64,
    s: f64,
    end: GeoPoint,
    az2: f64,
}

fn vectors() -> Vec<Vector> {
    VECTORS
        .lines()
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            Vector {
                start: GeoPoint::new(v[1], v[0]).unwrap(),
                az1: v[2],
                s: v[3],
                end: GeoPoint::new(v[5], v[4]).unwrap(),
                az2: v[6],
            }
        })
        .collect()
}

fn angle_diff(a: f64, b: f64) -> f64 {
    ((a - b + 540.0).rem_euclid(360.0) - 180.0).abs()
}

/// Small-offset ground distance between two nearby points on the ellipsoid.
fn local_distance(p: GeoPoint, q: GeoPoint) -> f64 {
    let model = EarthModel::wgs84();
    vincenty_inverse(p, q, &model).map(|s| s.distance).unwrap_or(f64::INFINITY)
}

#[test]
fn direct_matches_integrated_geodesics() {
    let model = EarthModel::wgs84();
    let vs = vectors();
    assert!(vs.len() >= 40);
    for v in &vs {
        let sol = vincenty_direct(v.start, v.az1, v.s, &model).unwrap();
        let miss = local_distance(sol.destination, v.end);
        assert!(miss < 1e-3, "{:?} az {} s {}: miss {miss} m", v.start, v.az1, v.s);
        assert!(angle_diff(sol.final_bearing, v.az2) < 1e-8, "final bearing {} vs {}", sol.final_bearing, v.az2);
    }
}

#[test]
fn inverse_recovers_integrated_geodesics() {
    let model = EarthModel::wgs84();
    for v in vectors() {
        if v.s == 0.0 {
            continue;
        }
        let inv = vincenty_inverse(v.start, v.end, &model).unwrap();
        assert!((inv.distance - v.s).abs() < 1e-3, "{} vs {}", inv.distance, v.s);
        assert!(angle_diff(inv.initial_bearing, v.az1) < 1e-7);
        assert!(angle_diff(inv.final_bearing, v.az2) < 1e-7);
    }
}

#[test]
fn direct_inverse_round_trip() {
    let model = EarthModel::wgs84();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 10_000 {
        let p = GeoPoint::new(rng.random_range(-180.0..180.0), rng.random_range(-85.0..85.0)).unwrap();
        let az = rng.random_range(0.0..360.0);
        let s = 10f64.powf(rng.random_range(2.0..7.0));
        let d = vincenty_direct(p, az, s, &model).unwrap();
        let inv = vincenty_inverse(p, d.destination, &model).unwrap();
        assert!((inv.distance - s).abs() <= 1e-9 * s, "{p:?} az {az} s {s} got {}", inv.distance);
        assert!(angle_diff(inv.initial_bearing, az) <= 1e-9 * az.max(1.0), "{p:?} az {az} got {}", inv.initial_bearing);
        checked += 1;
    }
}

#[test]
fn sphere_mode_is_a_great_circle() {
    let model = EarthModel::sphere();
    let p = GeoPoint::new(-71.0237, 42.3469).unwrap();
    for az in [0.0, 45.0, 137.5, 270.0] {
        let v = vincenty_direct(p, az, 25_000.0, &model).unwrap().destination;
        let g = propagate_sphere(p, az, 25_000.0, MEAN_EARTH_RADIUS);
        assert!(great_circle_distance(v, g, MEAN_EARTH_RADIUS) < 1e-6);
    }
}

proptest! {
    #[test]
    fn propagation_preserves_distance(
        lon in -180.0f64..180.0, lat in -89.0f64..89.0, az in 0.0f64..360.0, s in 0.0f64..2.0e6,
    ) {
        let p = GeoPoint::new(lon, lat).unwrap();
        let q = propagate_sphere(p, az, s, MEAN_EARTH_RADIUS);
        prop_assert!((-180.0..180.0).contains(&q.lon));
        prop_assert!((great_circle_distance(p, q, MEAN_EARTH_RADIUS) - s).abs() < 1e-6 * s.max(1.0));
    }
}
