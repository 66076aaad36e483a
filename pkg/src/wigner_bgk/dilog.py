"""Real dilogarithm Li2(z) = -int_0^z ln(1-t)/t dt for z <= 1."""

from __future__ import annotations

import math

PI2_6 = math.pi**2 / 6.0


def _series(z: float) -> float:
    # |z| <= 1/2: terms fall at least like 2^-k / k^2
    total, term, k = 0.0, z, 1
    while True:
        add = term / (k * k)
        total += add
        if abs(add) < 1e-17 * max(abs(total), 1e-300):
            return total
        k += 1
        term *= z


def dilog(z: float) -> float:
    """Real branch of the dilogarithm, absolute error around 1e-15.

    Uses the power series on [-1/2, 1/2] and maps everything else into it:
    Euler reflection on (1/2, 1], Landen on [-1, -1/2) and inversion below -1.
    """
    z = float(z)
    if z > 1.0 or math.isnan(z):
        raise ValueError(f"dilog is only defined on the real branch z <= 1, got {z}")
    if z == 1.0:
        return PI2_6
    if z == 0.0:
        return 0.0
    if -0.5 <= z <= 0.5:
        return _series(z)
    if z > 0.5:
        return PI2_6 - math.log(z) * math.log1p(-z) - _series(1.0 - z)
    if z >= -1.0:
        # Landen: Li2(z) = -Li2(z/(z-1)) - ln^2(1-z)/2, with z/(z-1) in (1/3, 1/2]
        return -_series(z / (z - 1.0)) - 0.5 * math.log1p(-z) ** 2
    # inversion: Li2(z) = -pi^2/6 - ln^2(-z)/2 - Li2(1/z), 1/z in (-1, 0)
    return -PI2_6 - 0.5 * math.log(-z) ** 2 - dilog(1.0 / z)
