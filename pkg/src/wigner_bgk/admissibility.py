"""Necessary conditions for a genuine Wigner function, normalisation and Gamma scans."""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Union

import numpy as np
from scipy import integrate

from .core import MAX_EXPONENT, DomainError, ExponentOverflowError, potential
from .numerics import bisect_predicate
from .quartic import QuarticEquilibrium, coeff_C, density_closed, eval_wigner, reduced_coefficients

Window = tuple[float, float]


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class UnphysicalParameterError(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureSpec:
    """Integration windows and tolerances.

    ``q_window=None`` means: the support for mu=+1, otherwise the symmetric
    interval outside which the integrand stays below ``decay`` times its
    peak. ``p_window`` may be a fixed interval, a callable q -> interval, or
    None for +-p_factor*sqrt(2/|C(q)|).
    """

    q_window: Optional[Window] = None
    p_window: Union[Window, Callable[[float], Window], None] = None
    epsabs: float = 1e-11
    epsrel: float = 1e-10
    limit: int = 200
    p_factor: float = 8.0
    decay: float = 1e-14

    def __post_init__(self):
        if not (self.epsabs > 0 and self.epsrel > 0):
            raise ValueError("tolerances must be positive")
        if self.limit < 1:
            raise ValueError("limit must be at least 1")
        if self.q_window is not None and not all(map(math.isfinite, self.q_window)):
            raise ValueError("q_window must be finite")

    def refined(self, factor: float = 0.01) -> "QuadratureSpec":
        return QuadratureSpec(self.q_window, self.p_window, self.epsabs * factor, self.epsrel * factor,
                              self.limit * 2, self.p_factor, self.decay)


@dataclass
class AdmissibilityReport:
    norm: float
    min_spatial_density: float
    min_velocity_marginal: float
    purity: float
    purity_bound: float
    flags: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.flags.values())

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "AdmissibilityReport":
        return cls(**d)


def purity_bound(gamma: float) -> float:
    return 1.0 / (2.0 * math.pi * math.sqrt(6.0 * gamma))


def _quad(f, a, b, spec: QuadratureSpec):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(f, a, b, epsabs=spec.epsabs, epsrel=spec.epsrel, limit=spec.limit)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(str(exc).strip().splitlines()[0]) from None
    if not math.isfinite(val):
        raise QuadratureError("non-finite quadrature result")
    return val, err


def integrate_2d(f: Callable[[float, float], float], spec: QuadratureSpec):
    """Nested adaptive Gauss-Kronrod quadrature of f(q, p); returns (value, error estimate)."""
    if spec.q_window is None or spec.p_window is None:
        raise ValueError("integrate_2d needs explicit q and p windows")
    pwin = spec.p_window if callable(spec.p_window) else (lambda q, w=spec.p_window: w)
    errs = []

    def inner(q):
        lo, hi = pwin(q)
        v, e = _quad(lambda p: f(q, p), lo, hi, spec)
        errs.append(e)
        return v

    val, err = _quad(inner, *spec.q_window, spec)
    return val, err + (max(errs) * (spec.q_window[1] - spec.q_window[0]) if errs else 0.0)


# -- windows for an equilibrium ---------------------------------------------------

def p_halfwidth(q: float, eq: QuarticEquilibrium, factor: float = 8.0) -> float:
    return factor * math.sqrt(2.0 / abs(coeff_C(q, eq)))


def _envelope(q, eq):
    hw = p_halfwidth(q, eq)
    p = np.linspace(0.0, hw, 401)
    return float(np.max(np.abs(eval_wigner(q, p, eq))))


def q_cut(eq: QuarticEquilibrium, decay: float = 1e-14, step: float = 0.25, q_limit: float = 60.0) -> float:
    """Half-width of the q window for mu=-1 (integrand below decay * peak beyond it)."""
    if eq.mu == 1:
        return eq.q_max
    qs = np.arange(0.0, q_limit + step, step)
    env = np.array([_envelope(q, eq) for q in qs])
    peak = env.max()
    big = np.nonzero(env > decay * peak)[0]
    return float(qs[min(big[-1] + 1, len(qs) - 1)])


def equilibrium_spec(eq: QuarticEquilibrium, spec: Optional[QuadratureSpec] = None) -> QuadratureSpec:
    """Fill in the automatic windows of ``spec`` for this equilibrium."""
    spec = spec or QuadratureSpec()
    qw = spec.q_window
    if qw is None:
        qc = q_cut(eq, spec.decay)
        qw = (-qc, qc)
    pw = spec.p_window
    if pw is None:
        def pw(q, eq=eq, fac=spec.p_factor):
            h = p_halfwidth(q, eq, fac)
            return (-h, h)
    return QuadratureSpec(qw, pw, spec.epsabs, spec.epsrel, spec.limit, spec.p_factor, spec.decay)


# -- conditions ---------------------------------------------------------------------

def spatial_norm(eq: QuarticEquilibrium, spec: Optional[QuadratureSpec] = None) -> float:
    """Integral of the closed-form density over q (1-D route to the norm)."""
    spec = equilibrium_spec(eq, spec)
    return _quad(lambda q: density_closed(q, eq), *spec.q_window, spec)[0]


def _p_slice(q: float, eq: QuarticEquilibrium):
    """Scalar p -> F(q, p) with the q-dependent coefficients computed once."""
    if eq.mu == 1 and abs(q) >= eq.q_max:
        return lambda p: 0.0
    a, b, c, L = (float(x) for x in reduced_coefficients(q, eq))
    v = potential(q, eq.mu)

    def f(p):
        H = 0.5 * p * p + v
        x = c * H + L
        if x > MAX_EXPONENT:
            raise ExponentOverflowError(f"exponent {x:.6g} exceeds {MAX_EXPONENT}")
        return (a * H + b) * math.exp(x)
    return f


def check_admissibility(eq: QuarticEquilibrium, spec: Optional[QuadratureSpec] = None,
                        norm_tol: float = 1e-2, n_q: int = 2001, n_p: int = 41) -> AdmissibilityReport:
    """Evaluate the four necessary conditions on F.

    The norm and purity come from 2-D quadrature of F itself, not from the
    closed-form density. F is even in q and in p, so only the first quadrant
    is integrated. ``norm_tol`` is loose by default because the published
    constants carry two or three significant digits.
    """
    spec = equilibrium_spec(eq, spec)
    qhi = spec.q_window[1]
    pw = spec.p_window
    half = QuadratureSpec((0.0, qhi), lambda q: (0.0, pw(q)[1]), spec.epsabs, spec.epsrel, spec.limit)
    slices = {}

    def f(q, p):
        g = slices.get(q)
        if g is None:
            g = slices[q] = _p_slice(q, eq)
        return g(p)

    norm = 4.0 * integrate_2d(f, half)[0]
    purity = 4.0 * integrate_2d(lambda q, p: f(q, p) ** 2, half)[0]

    qs = np.linspace(0.0, qhi, n_q)
    if eq.mu == 1:
        qs = qs[:-1]
    min_n = float(np.min(density_closed(qs, eq)))

    pmax = max(pw(q)[1] for q in np.linspace(0.0, qhi, 9)[:-1])
    marg = [2.0 * _quad(lambda q, p=p: eval_wigner(q, p, eq), 0.0, qhi, spec)[0]
            for p in np.linspace(0.0, pmax, n_p)]
    min_v = float(np.min(marg))

    bound = purity_bound(eq.gamma)
    scale = max(abs(norm), 1e-300)
    flags = {
        "norm": abs(norm - 1.0) <= norm_tol,
        "spatial_density": min_n >= -1e-12 * scale,
        "velocity_marginal": min_v >= -1e-12 * scale,
        "purity": purity <= bound,
    }
    return AdmissibilityReport(norm, min_n, min_v, purity, bound, flags)


def normalize(eq: QuarticEquilibrium, spec: Optional[QuadratureSpec] = None) -> QuarticEquilibrium:
    """Rescale (A0, B0) jointly so the norm is one."""
    n = spatial_norm(eq, spec)
    if n == 0:
        raise UnphysicalParameterError("norm vanishes; cannot normalise")
    if n < 0:
        raise UnphysicalParameterError(f"norm is negative ({n:.6g}): no positive rescaling normalises it")
    return eq.scaled(1.0 / n)


# -- velocity-profile structure and Gamma scans ---------------------------------------

def default_p_grid(eq: QuarticEquilibrium, q: float = 0.0, n: int = 2001):
    hw = 8.0 / math.sqrt(abs(coeff_C(q, eq)))
    return np.linspace(-hw, hw, n)


def count_local_maxima(values, rel_tol: float = 1e-12) -> int:
    """Strict interior local maxima after merging near-equal neighbours into plateaus."""
    v = np.asarray(values, dtype=float)
    tol = rel_tol * max(float(np.max(np.abs(v))), 1e-300)
    runs = []
    start = v[0]
    for x in v:
        if abs(x - start) > tol:
            runs.append(start)
            start = x
    runs.append(start)
    return sum(1 for i in range(1, len(runs) - 1) if runs[i] > runs[i - 1] and runs[i] > runs[i + 1])


def count_humps(eq: QuarticEquilibrium, q: float = 0.0, p_grid=None) -> int:
    if eq.mu == 1 and abs(q) >= eq.q_max:
        raise DomainError("q outside the support")
    p = default_p_grid(eq, q) if p_grid is None else np.asarray(p_grid, dtype=float)
    return count_local_maxima(eval_wigner(q, p, eq))


def is_two_humped(eq: QuarticEquilibrium) -> bool:
    return count_humps(eq, 0.0) >= 2


def is_negative_at_origin(eq: QuarticEquilibrium) -> bool:
    return float(np.min(eval_wigner(0.0, default_p_grid(eq), eq))) < 0


def min_density(eq: QuarticEquilibrium, n_q: int = 4001) -> float:
    qc = q_cut(eq) if eq.mu == -1 else eq.q_max
    qs = np.linspace(0.0, qc, n_q)
    if eq.mu == 1:
        qs = qs[:-1]
    return float(np.min(density_closed(qs, eq)))


def has_nonnegative_density(eq: QuarticEquilibrium, n_q: int = 4001) -> bool:
    qc = q_cut(eq) if eq.mu == -1 else eq.q_max
    qs = np.linspace(0.0, qc, n_q)
    if eq.mu == 1:
        qs = qs[:-1]
    n = density_closed(qs, eq)
    return float(np.min(n)) >= -1e-12 * float(np.max(np.abs(n)))


PREDICATES = {
    "two-hump": is_two_humped,
    "negativity": is_negative_at_origin,
    "density-nonneg": has_nonnegative_density,
}


def critical_gamma(family: Callable[[float], QuarticEquilibrium], predicate, bracket: Window,
                   tol: float = 1e-4) -> float:
    """Gamma at which ``predicate`` switches truth value along ``family``.

    ``predicate`` is a name from PREDICATES or a callable on equilibria.
    """
    pred = PREDICATES[predicate] if isinstance(predicate, str) else predicate
    lo, hi = bracket
    if not 0 < lo < hi:
        raise ValueError(f"bracket must satisfy 0 < lo < hi, got {bracket}")
    return bisect_predicate(lambda g: pred(family(g)), lo, hi, tol)


def ratio_family(mu: int = -1, ratio: float = -2.5, a0: float = 1.0, c0: float = 1.0, form="exact"):
    """Gamma -> equilibrium with B0 = ratio * A0 (the family used for the thresholds)."""
    def family(g):
        return QuarticEquilibrium.build(mu, g, a0, ratio * a0, c0, form)
    family.description = {"mu": mu, "b0_over_a0": ratio, "a0": a0, "c0": c0, "form": form}
    return family
