"""Pointwise residuals of the stationary quartic Wigner equation.

p-structure (through H) is differentiated analytically; the q-dependence of
the closed-form coefficients is differentiated numerically.
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .core import DomainError, energy_qp, potential
from .numerics import richardson_derivative
from .quartic import QuarticEquilibrium, coeff_C, reduced_coefficients


@dataclass
class ResidualReport:
    max_abs_residual: float
    location: tuple
    grid: dict
    form: str  # "qp" or "Hq"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["location"] = list(self.location)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ResidualReport":
        d = dict(d)
        d["location"] = tuple(d["location"])
        return cls(**d)


def _derivs_H(H, a, b, c):
    """(F, F_H, F_HH, F_HHH) for (a H + b) e^{c H}, exponent already folded into ``e``."""
    lin = a * H + b
    return lin, (a + c * lin), c * (2 * a + c * lin), c * c * (3 * a + c * lin)


def _h_derivatives(coeffs, q, H):
    a, b, c, L = coeffs(q)
    e = np.exp(c * H + L)
    return [x * e for x in _derivs_H(H, a, b, c)]


def standard_qp_grid(eq: QuarticEquilibrium, n: int = 101):
    """Default residual grid: |q| <= 0.9 q_max (or 4), |p| <= 8/sqrt|C(q)| scaled per row."""
    qm = 0.9 * eq.q_max if eq.mu == 1 else 4.0
    q = np.linspace(-qm, qm, n)
    s = np.linspace(-1.0, 1.0, n)
    pw = 8.0 / np.sqrt(np.abs(coeff_C(q, eq)))
    return q[:, None] * np.ones((1, n)), pw[:, None] * s[None, :]


def _check_stencil(q, h, eq):
    if eq.mu == 1 and np.max(np.abs(q)) + h >= eq.q_max:
        raise DomainError("finite-difference stencil crosses the support boundary")


def residual_qp_coeffs(coeffs, mu: int, gamma: float, Q, P, h: float = 1e-2, levels: int = 3):
    """Residual of p F_q - mu (q - q^3/6) F_p - mu G q F_ppp for F = (a H + b) e^{c H + L}.

    ``coeffs`` maps q to (a, b, c, L); the equilibrium-free form lets the
    same code check trial functions and deliberately broken coefficients.
    """
    Q = np.asarray(Q, dtype=float)
    P = np.asarray(P, dtype=float)

    def F(x):
        a, b, c, L = coeffs(x)
        H = energy_qp(x, P, mu)
        return (a * H + b) * np.exp(c * H + L)

    dFdq = richardson_derivative(F, Q, h, levels)
    H = energy_qp(Q, P, mu)
    _, F1, F2, F3 = _h_derivatives(coeffs, Q, H)
    dFdp = P * F1
    d3Fdp3 = 3 * P * F2 + P**3 * F3
    return P * dFdq - mu * (Q - Q**3 / 6.0) * dFdp - mu * gamma * Q * d3Fdp3


def residual_Hq_coeffs(coeffs, mu: int, gamma: float, Hs, Q, h: float = 1e-2, levels: int = 3):
    """Residual of F_q|_H - mu G q ([2H - mu W] F_HHH + 3 F_HH), W = q^2 - q^4/12."""
    Hs = np.asarray(Hs, dtype=float)
    Q = np.asarray(Q, dtype=float)

    def f_at_H(x):
        a, b, c, L = coeffs(x)
        return (a * Hs + b) * np.exp(c * Hs + L)

    dFdq = richardson_derivative(f_at_H, Q, h, levels)
    _, _, F2, F3 = _h_derivatives(coeffs, Q, Hs)
    w = Q * Q - Q**4 / 12.0
    return dFdq - mu * gamma * Q * ((2 * Hs - mu * w) * F3 + 3 * F2)


def _eq_coeffs(eq):
    return lambda x: reduced_coefficients(x, eq)


def residual_qp_field(eq: QuarticEquilibrium, Q, P, h: float = 1e-2, levels: int = 3):
    _check_stencil(np.asarray(Q), h, eq)
    return residual_qp_coeffs(_eq_coeffs(eq), eq.mu, eq.gamma, Q, P, h, levels)


def residual_Hq_field(eq: QuarticEquilibrium, Hs, Q, h: float = 1e-2, levels: int = 3):
    Q = np.asarray(Q, dtype=float)
    _check_stencil(Q, h, eq)
    if np.any(np.asarray(Hs) < potential(Q, eq.mu) - 1e-12):
        raise DomainError("energy below the potential at q (classically unreachable)")
    return residual_Hq_coeffs(_eq_coeffs(eq), eq.mu, eq.gamma, Hs, Q, h, levels)


def _report(res, X, Y, form, grid):
    k = int(np.argmax(np.abs(res)))
    return ResidualReport(float(np.abs(res).flat[k]), (float(X.flat[k]), float(Y.flat[k])), grid, form)


def residual_qp(eq: QuarticEquilibrium, grid: Optional[tuple] = None, h: float = 1e-2) -> ResidualReport:
    Q, P = standard_qp_grid(eq) if grid is None else grid
    res = residual_qp_field(eq, Q, P, h)
    desc = {"shape": list(np.shape(Q)), "q_range": [float(np.min(Q)), float(np.max(Q))],
            "p_range": [float(np.min(P)), float(np.max(P))], "h": h}
    return _report(res, Q, P, "qp", desc)


def standard_Hq_grid(eq: QuarticEquilibrium, n: int = 101):
    """(H, q) pairs with H from the potential minimum at q up to where e^{CH} ~ e^{-32}."""
    qm = 0.9 * eq.q_max if eq.mu == 1 else 4.0
    q = np.linspace(-qm, qm, n)
    vmin = potential(q, eq.mu)
    span = 32.0 / np.abs(coeff_C(q, eq))
    t = np.linspace(0.0, 1.0, n)
    Q = q[:, None] * np.ones((1, n))
    Hs = vmin[:, None] + span[:, None] * t[None, :]
    return Hs, Q


def residual_Hq(eq: QuarticEquilibrium, grid: Optional[tuple] = None, h: float = 1e-2) -> ResidualReport:
    Hs, Q = standard_Hq_grid(eq) if grid is None else grid
    res = residual_Hq_field(eq, Hs, Q, h)
    desc = {"shape": list(np.shape(Q)), "q_range": [float(np.min(Q)), float(np.max(Q))],
            "H_range": [float(np.min(Hs)), float(np.max(Hs))], "h": h}
    # location is reported as (q, p) with p recovered from H where real
    k = int(np.argmax(np.abs(res)))
    qk, hk = float(Q.flat[k]), float(Hs.flat[k])
    pk = math.sqrt(max(0.0, 2.0 * (hk - float(potential(qk, eq.mu)))))
    return ResidualReport(float(np.abs(res).flat[k]), (qk, pk), desc, "Hq")


def write_residual_csv(path, eq: QuarticEquilibrium, grid: Optional[tuple] = None, h: float = 1e-2):
    Q, P = standard_qp_grid(eq) if grid is None else grid
    res = residual_qp_field(eq, Q, P, h)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["q", "p", "residual"])
        for row in zip(np.ravel(Q), np.ravel(P), np.ravel(res)):
            w.writerow([f"{x:.17g}" for x in row])
