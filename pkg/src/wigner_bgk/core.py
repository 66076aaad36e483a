"""Dimensionless phase-space primitives for the quartic oscillator.

Positions and momenta are rescaled as q = k x, p = k v / omega and the
Wigner function as F = omega f / k**2, so the only physical input left is
the quantum parameter ``gamma = hbar**2 k**4 / (6 m**2 omega**2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

# Largest exponent accepted before exp() is treated as a domain error.
MAX_EXPONENT = 700.0


class DomainError(ValueError):
    """Raised when an evaluation point lies outside the solution's domain."""


class ExponentOverflowError(ArithmeticError):
    """Raised instead of returning inf when an exponent exceeds MAX_EXPONENT."""


@dataclass(frozen=True)
class PhysicalUnits:
    m: float
    hbar: float
    omega: float
    k: float

    def __post_init__(self):
        for name in ("m", "hbar", "omega", "k"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")

    @property
    def gamma(self) -> float:
        return self.hbar**2 * self.k**4 / (6.0 * self.m**2 * self.omega**2)

    def to_dimensionless(self, x, v, f=None):
        """Map (x, v[, f]) to (q, p[, F])."""
        q = self.k * np.asarray(x)
        p = self.k * np.asarray(v) / self.omega
        if f is None:
            return q, p
        return q, p, self.omega * np.asarray(f) / self.k**2


@dataclass(frozen=True)
class QuarticParams:
    """Well shape ``mu`` (+1 single well, -1 double well) and quantum strength ``gamma``."""

    mu: int
    gamma: float

    def __post_init__(self):
        if self.mu not in (1, -1):
            raise ValueError(f"mu must be +1 or -1, got {self.mu!r}")
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ValueError(f"gamma must be positive and finite, got {self.gamma!r}")

    @classmethod
    def from_units(cls, mu: int, units: PhysicalUnits, gamma: Optional[float] = None):
        g = units.gamma
        if gamma is not None and abs(gamma - g) > 1e-12 * abs(g):
            raise ValueError(f"gamma={gamma} inconsistent with units (gives {g})")
        return cls(mu, g)


@dataclass(frozen=True)
class PhasePoint:
    q: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.q) and math.isfinite(self.p)):
            raise ValueError("phase point coordinates must be finite")


@dataclass(frozen=True)
class AnsatzValue:
    """Coefficients (A, B, C) of (A H + B) exp(C H) at one position."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not self.c < 0:
            raise ValueError(f"exponent coefficient must be negative, got c={self.c}")


def potential(q: ArrayLike, mu: int):
    """mu (q^2/2 - q^4/24); vectorised."""
    q = np.asarray(q, dtype=float)
    q2 = q * q
    return mu * (0.5 * q2 - q2 * q2 / 24.0)


def energy(pt: PhasePoint, params: QuarticParams) -> float:
    return energy_qp(pt.q, pt.p, params.mu)


def energy_qp(q: ArrayLike, p: ArrayLike, mu: int):
    p = np.asarray(p, dtype=float)
    return 0.5 * p * p + potential(q, mu)


def safe_exp(x: ArrayLike):
    """exp(x) that raises ExponentOverflowError above MAX_EXPONENT."""
    x = np.asarray(x, dtype=float)
    if np.any(x > MAX_EXPONENT):
        raise ExponentOverflowError(f"exponent {np.max(x):.6g} exceeds {MAX_EXPONENT}")
    return np.exp(x)


def ansatz_eval(H: ArrayLike, v: AnsatzValue):
    return _ansatz(H, v.a, v.b, v.c, 0)


def ansatz_dH(H: ArrayLike, v: AnsatzValue, order: int):
    """Exact d^k/dH^k of (a H + b) e^{c H} for k in {1, 2, 3}.

    The k-th derivative is c^(k-1) (k a + c (a H + b)) e^{c H}.
    """
    if order not in (1, 2, 3):
        raise ValueError(f"order must be 1, 2 or 3, got {order}")
    return _ansatz(H, v.a, v.b, v.c, order)


def _ansatz(H, a, b, c, order, log_scale=0.0):
    # log_scale lets callers fold a large prefactor into the exponent
    H = np.asarray(H, dtype=float)
    lin = a * H + b
    e = safe_exp(c * H + log_scale)
    if order == 0:
        out = lin * e
    else:
        out = c ** (order - 1) * (order * a + c * lin) * e
    return out if out.ndim else float(out)
