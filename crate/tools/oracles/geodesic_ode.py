"""Independent geodesic oracle: integrates the geodesic ODEs on the WGS84
ellipsoid in (lat, lon, azimuth) with a high-order adaptive Runge-Kutta
(DOP853, rtol 1e-13) and writes direct-problem test vectors.

    dphi/ds    = cos(az) / M(phi)
    dlambda/ds = sin(az) / (N(phi) cos(phi))
    daz/ds     = sin(az) tan(phi) / N(phi)

Output columns: lat1,lon1,az1,s,lat2,lon2,az2 (degrees, meters).
"""
import csv
import sys

import numpy as np
from scipy.integrate import solve_ivp

A = 6378137.0
F = 1 / 298.257223563
E2 = F * (2 - F)


def rhs(_s, y):
    phi, _lam, az = y
    w = 1.0 - E2 * np.sin(phi) ** 2
    n = A / np.sqrt(w)
    m = A * (1 - E2) / w**1.5
    return [np.cos(az) / m, np.sin(az) / (n * np.cos(phi)), np.sin(az) * np.tan(phi) / n]


def solve(lat1, lon1, az1, s):
    y0 = np.radians([lat1, lon1, az1])
    sol = solve_ivp(rhs, (0.0, s), y0, method="DOP853", rtol=1e-13, atol=1e-15)
    phi, lam, az = sol.y[:, -1]
    lon2 = (np.degrees(lam) + 180.0) % 360.0 - 180.0
    return np.degrees(phi), lon2, np.degrees(az) % 360.0


def main(path):
    rng = np.random.default_rng(20240607)
    cases = [
        (0.0, 0.0, 90.0, A * np.pi / 180.0),
        (0.0, 0.0, 0.0, 1000.0),
        (42.3469, -71.0237, 0.0, 1000.0),
        (42.3469, -71.0237, 90.0, 1000.0),
        (42.3469, -71.0237, 137.5, 25000.0),
        (-33.9, 151.2, 300.0, 500000.0),
        (70.0, 20.0, 45.0, 200.0),
        (-60.0, -120.0, 225.0, 1500000.0),
    ]
    for _ in range(40):
        lat = rng.uniform(-75, 75)
        lon = rng.uniform(-180, 180)
        az = rng.uniform(0, 360)
        s = 10 ** rng.uniform(0, 6.3)
        cases.append((lat, lon, az, s))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["lat1", "lon1", "az1", "s", "lat2", "lon2", "az2"])
        for lat1, lon1, az1, s in cases:
            lat2, lon2, az2 = solve(lat1, lon1, az1, s)
            w.writerow([f"{v:.15g}" for v in (lat1, lon1, az1, s)] + [f"{v:.15f}" for v in (lat2, lon2, az2)])


if __name__ == "__main__":
    main(sys.argv[1])
