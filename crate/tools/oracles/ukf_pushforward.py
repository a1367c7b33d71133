"""Monte Carlo push-forward of a Gaussian geodetic belief through one
constant-velocity great-circle step, used as the reference for the UKF
a-priori mean and covariance.

Writes JSON with the input belief, the sample mean and the sample covariance
(state order lon, lat, sog, cog; degrees and m/s).
"""
import json
import sys

import numpy as np

R = 6.371e6
N = 1_000_000
SEED = 20200608

CASES = [
    {"mean": [-71.0237, 42.3469, 7.0, 137.5], "var": 1e-10, "dt": 6.0},
    {"mean": [179.9999, -12.0, 15.0, 85.0], "var": 1e-10, "dt": 6.0},
    {"mean": [10.0, 60.0, 7.0, 0.5], "var": 1e-10, "dt": 6.0},
]


def step(lon, lat, sog, cog, dt):
    phi1 = np.radians(lat)
    lam1 = np.radians(lon)
    th = np.radians(cog)
    d = sog * dt / R
    phi2 = np.arcsin(np.sin(phi1) * np.cos(d) + np.cos(phi1) * np.sin(d) * np.cos(th))
    lam2 = lam1 + np.arctan2(np.sin(th) * np.sin(d) * np.cos(phi1), np.cos(d) - np.sin(phi1) * np.sin(phi2))
    return np.degrees(lam2), np.degrees(phi2), sog, cog


def case(rng, c):
    mu = np.array(c["mean"])
    x = mu + rng.standard_normal((N, 4)) * np.sqrt(c["var"])
    lon, lat, sog, cog = step(x[:, 0], x[:, 1], x[:, 2], x[:, 3], c["dt"])
    # Longitude kept unwrapped relative to the input so the seam is harmless.
    y = np.stack([lon, lat, sog, cog], axis=1)
    m = y.mean(axis=0)
    cov = np.cov(y, rowvar=False, ddof=1)
    m[0] = (m[0] + 180.0) % 360.0 - 180.0
    return {**c, "samples": N, "mc_mean": m.tolist(), "mc_cov": cov.tolist()}


def main():
    rng = np.random.default_rng(SEED)
    json.dump([case(rng, c) for c in CASES], sys.stdout, indent=1)
    print()


if __name__ == "__main__":
    main()
