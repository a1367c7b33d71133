//! Geodetic vessel tracking.
//!
//! Vessels reporting over AIS are tracked with an unscented Kalman filter whose
//! state lives directly in geodetic coordinates `[lon, lat, SOG, COG]`. The
//! process model moves each sigma point along a great circle, so no local
//! tangent plane is needed. A plane-Cartesian EKF is included as a baseline.
//!
//! Modules:
//! - [`geodesy`]: great-circle propagation, Vincenty direct/inverse, sphere
//!   sampling, tangent-plane linearization error.
//! - [`noise`]: measurement and process noise covariances, wave kinematics.
//! - [`ukf`]: the geodetic UKF.
//! - [`ekf`]: the planar EKF and geodetic/NED conversions.
//! - [`ais`]: AIVDM sentence parsing, fragment reassembly and payload decoding.
//! - [`tracker`]: per-MMSI track table driven by decoded reports.
//! - [`sim`]: truth trajectories, synthetic AIS and filter comparison runs.
//! - [`study`]: sphere-error, plane-error and sea-state tables.

pub mod ais;
pub mod ekf;
pub mod geodesy;
pub mod linalg;
pub mod noise;
pub mod sim;
pub mod study;
pub mod tracker;
pub mod ukf;

pub use geodesy::{EarthModel, GeoPoint};
pub use ukf::{GaussianBelief, GeodeticState, Measurement};
