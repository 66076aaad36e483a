"""Closed-form equilibria F = [A(q) H + B(q)] exp(C(q) H) of the quartic Wigner equation.

The coefficients solve the linear system obtained by requiring the ansatz
to satisfy the stationary equation identically in H. With s = C0 - 2 mu G q^2:

    C = -s^(-1/2)
    A = A0 s^(-9/4) exp(L(q))
    B = [B0 s^(-3/4) + A0 beta(q)] exp(L(q))

Two variants of (L, beta) are provided:

``"published"``
    The previously published closed form, kept verbatim. It does not
    satisfy the coefficient system away from q = 0 (the shared exponent has
    the wrong sign and one term of beta is off), but the reference numbers
    (purities, normalisation constants, the Gamma ~ 0.3 density threshold)
    come from it.

``"exact"`` (default)
    The true solution, normalised so that A, B, C coincide with the
    published ones at q = 0. Everything stated at the origin (the n(0) >= 0
    inequality, hump and negativity onsets) is therefore shared.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike

from .core import DomainError, QuarticParams, safe_exp, energy_qp
from .numerics import richardson_derivative

Form = Literal["exact", "published"]
FORMS = ("exact", "published")


class SingularBoundaryWarning(UserWarning):
    """mu=+1 with C0 >= 24 Gamma: the published form blows up at the support edge."""


class UnsupportedCaseError(ValueError):
    pass


@dataclass(frozen=True)
class AnsatzConstants:
    a0: float
    b0: float
    c0: float

    def __post_init__(self):
        if self.c0 == 0:
            raise ValueError("c0 must be nonzero")
        if self.a0 == 0 and self.b0 == 0:
            # B(q) vanishes identically, which the coefficient system does not admit
            raise ValueError("a0 and b0 cannot both vanish")
        for v in (self.a0, self.b0, self.c0):
            if not math.isfinite(v):
                raise ValueError("integration constants must be finite")


@dataclass(frozen=True)
class QuarticEquilibrium:
    params: QuarticParams
    consts: AnsatzConstants
    form: Form = "exact"

    def __post_init__(self):
        if self.form not in FORMS:
            raise ValueError(f"form must be one of {FORMS}, got {self.form!r}")
        if not self.consts.c0 > 0:
            raise ValueError("c0 must be positive (needed for C(q) < 0 at the origin)")
        if self.params.mu == 1 and self.consts.c0 >= 24.0 * self.params.gamma:
            warnings.warn(
                f"mu=+1 with c0={self.consts.c0} >= 24*gamma={24 * self.params.gamma}: "
                "the published solution is singular at the support edge",
                SingularBoundaryWarning, stacklevel=3)

    @classmethod
    def build(cls, mu, gamma, a0, b0, c0, form: Form = "exact") -> "QuarticEquilibrium":
        return cls(QuarticParams(int(mu), float(gamma)), AnsatzConstants(float(a0), float(b0), float(c0)), form)

    @property
    def mu(self) -> int:
        return self.params.mu

    @property
    def gamma(self) -> float:
        return self.params.gamma

    @property
    def q_support(self):
        """``"unbounded"`` for mu=-1, otherwise q_max = sqrt(c0 / (2 gamma))."""
        if self.params.mu == -1:
            return "unbounded"
        return math.sqrt(self.consts.c0 / (2.0 * self.params.gamma))

    @property
    def q_max(self) -> float:
        return math.inf if self.params.mu == -1 else self.q_support

    def scaled(self, s: float) -> "QuarticEquilibrium":
        c = self.consts
        return replace(self, consts=AnsatzConstants(s * c.a0, s * c.b0, c.c0))

    def with_form(self, form: Form) -> "QuarticEquilibrium":
        return replace(self, form=form)

    def to_dict(self) -> dict:
        c = self.consts
        return {"mu": self.mu, "gamma": self.gamma, "a0": c.a0, "b0": c.b0, "c0": c.c0, "form": self.form}


# -- building blocks -----------------------------------------------------------

def _radicand(q, eq: QuarticEquilibrium):
    q = np.asarray(q, dtype=float)
    return eq.consts.c0 - 2.0 * eq.params.mu * eq.params.gamma * q * q


def _published_exponent(q, s, eq):
    mu, g, c0 = eq.params.mu, eq.params.gamma, eq.consts.c0
    q2 = q * q
    num = 2 * c0**2 - 2 * mu * g * c0 * (18 + q2) + g**2 * q2 * (36 - q2)
    return num / (72 * mu * g**2 * np.sqrt(s))


def _log_factor(q, s, eq):
    x = _published_exponent(q, s, eq)
    if eq.form == "published":
        return x
    x0 = _published_exponent(0.0, eq.consts.c0, eq)
    return 2 * x0 - x


def _b_reduced(q, s, eq):
    """B(q) without the shared exponential factor."""
    mu, g = eq.params.mu, eq.params.gamma
    a0, b0, c0 = eq.consts.a0, eq.consts.b0, eq.consts.c0
    q2 = q * q
    poly = -2 * c0**2 + 6 * mu * c0 * g * (2 + q2) - 3 * g**2 * q2 * (q2 + 12)
    tail = mu * poly / (24 * g**2 * s**2.25)
    if eq.form == "published":
        return b0 * s**-0.75 + a0 * (1.5 / s**1.75 + tail)
    return (b0 + 3 * a0 / c0) * s**-0.75 + a0 * (-1.5 / s**1.75 + tail)


def _check_inside(s):
    if np.any(s <= 0):
        raise DomainError("position outside the solution domain (C0 - 2 mu Gamma q^2 <= 0)")


def _outside(q, eq):
    q = np.asarray(q, dtype=float)
    if eq.params.mu == -1:
        return np.zeros(q.shape, dtype=bool)
    # the edge itself counts as outside: s = 0 there and F is set to zero
    return q * q >= eq.consts.c0 / (2.0 * eq.params.gamma)


def _scalar(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def reduced_coefficients(q: ArrayLike, eq: QuarticEquilibrium):
    """(A_red, B_red, C, L) with A = A_red e^L, B = B_red e^L; q must lie inside the domain."""
    q = np.asarray(q, dtype=float)
    s = _radicand(q, eq)
    _check_inside(s)
    a_red = eq.consts.a0 * s**-2.25
    b_red = _b_reduced(q, s, eq)
    c = -1.0 / np.sqrt(s)
    return a_red, b_red, c, _log_factor(q, s, eq)


# -- public operations ----------------------------------------------------------

def coeff_C(q: ArrayLike, eq: QuarticEquilibrium):
    s = _radicand(q, eq)
    _check_inside(s)
    return _scalar(-1.0 / np.sqrt(s))


def _coeff_masked(q, eq, which):
    q = np.asarray(q, dtype=float)
    out = np.zeros(q.shape)
    inside = ~_outside(q, eq)
    if np.any(inside):
        a_red, b_red, _, L = reduced_coefficients(q[inside], eq)
        red = a_red if which == "A" else b_red
        if which == "A" and eq.consts.a0 == 0:
            out[inside] = 0.0
        else:
            out[inside] = red * safe_exp(L)
    return _scalar(out)


def coeff_A(q: ArrayLike, eq: QuarticEquilibrium):
    """A(q); zero outside the mu=+1 support."""
    return _coeff_masked(q, eq, "A")


def coeff_B(q: ArrayLike, eq: QuarticEquilibrium):
    """B(q); zero outside the mu=+1 support."""
    return _coeff_masked(q, eq, "B")


def coefficients(q: ArrayLike, eq: QuarticEquilibrium):
    return coeff_A(q, eq), coeff_B(q, eq), coeff_C(q, eq)


def eval_wigner(q: ArrayLike, p: ArrayLike, eq: QuarticEquilibrium):
    """F(q, p), broadcasting q against p. Exactly zero outside the mu=+1 support."""
    q, p = np.broadcast_arrays(np.asarray(q, dtype=float), np.asarray(p, dtype=float))
    out = np.zeros(q.shape)
    inside = ~_outside(q, eq)
    if np.any(inside):
        qi, pi = q[inside], p[inside]
        a_red, b_red, c, L = reduced_coefficients(qi, eq)
        H = energy_qp(qi, pi, eq.params.mu)
        # fold the shared factor into one exponent so neither piece overflows alone
        out[inside] = (a_red * H + b_red) * safe_exp(c * H + L)
    return _scalar(out)


def density_closed(q: ArrayLike, eq: QuarticEquilibrium):
    """Closed-form spatial marginal n(q) = integral of F over p."""
    q = np.asarray(q, dtype=float)
    out = np.zeros(q.shape)
    inside = ~_outside(q, eq)
    if np.any(inside):
        qi = q[inside]
        a_red, b_red, c, L = reduced_coefficients(qi, eq)
        mu = eq.params.mu
        w = qi * qi - qi**4 / 12.0
        ac = np.abs(c)
        pref = np.sqrt(np.pi / (2.0 * ac))
        out[inside] = pref * safe_exp(-0.5 * mu * ac * w + L) * (a_red / ac + mu * a_red * w + 2.0 * b_red)
    return _scalar(out)


def origin_positivity(eq: QuarticEquilibrium) -> bool:
    """Analytic n(0) >= 0 test for the double well with A0 <= 0 < B0."""
    a0, b0, c0 = eq.consts.a0, eq.consts.b0, eq.consts.c0
    if eq.params.mu != -1 or a0 > 0 or b0 <= 0:
        raise UnsupportedCaseError("origin_positivity is stated for mu=-1, A0 <= 0, B0 > 0 only")
    g = eq.params.gamma
    lhs = 12.0 * b0 * c0**1.5 * g**2
    rhs = abs(a0) * (c0**2 + 6.0 * g * c0 + 24.0 * g**2 * math.sqrt(c0))
    return lhs >= rhs


def ode_residual(q: float, eq: QuarticEquilibrium, h: float = 1e-2, levels: int = 3):
    """Residuals of the three coefficient equations at q.

    A', B', C' come from Richardson-extrapolated central differences of the
    closed forms; the largest stencil offset is ``h``.
    """
    q = float(q)
    s = _radicand(np.array([q - h, q, q + h]), eq)
    if np.any(s <= 0) or (eq.params.mu == 1 and abs(q) + h >= eq.q_max):
        raise DomainError(f"finite-difference stencil at q={q} (h={h}) leaves the support")
    mu, g = eq.params.mu, eq.params.gamma

    def abc(x):
        return np.array(coefficients(x, eq))

    a, b, c = abc(q)
    da, db, dc = richardson_derivative(abc, q, h, levels)
    w = q * q - q**4 / 12.0
    r1 = da + b * dc - mu * g * q * (9 * a * c**2 + 2 * b * c**3 - mu * a * c**3 * w)
    r2 = db - mu * g * q * (6 * a * c + 3 * b * c**2 - mu * (3 * a * c**2 + b * c**3) * w)
    r3 = a * dc - 2 * mu * g * q * c**3 * a
    return float(r1), float(r2), float(r3)


def dC_exact(q: ArrayLike, eq: QuarticEquilibrium):
    """C'(q) = 2 mu Gamma q C^3, used to cross-check the finite differences."""
    c = coeff_C(q, eq)
    return 2.0 * eq.params.mu * eq.params.gamma * np.asarray(q) * np.asarray(c) ** 3
