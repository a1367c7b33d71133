//! Acceptance suite for the geotrack workspace; see `tests/acceptance.rs`.
