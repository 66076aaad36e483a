"""Self-consistent Wigner-Poisson equilibria f = B(n) exp(C(n) H) to first order in hbar^2.

Natural units (e = m = hbar = n0 = omega_p = epsilon0 = 1) are the default.
With alpha = hbar^2 omega_p^2 C0^2 / (6 n0) the coefficients are

    C(n) = -C0 / sqrt(1 - alpha n)
    B(n) = B0 (1 - alpha n)^(-3/4) exp[-kappa I(n)],   kappa = hbar^2 omega_p^2 / (12 n0)
    I(n) = int_0^n C(s)^2 ln((s / B0) sqrt(-C(s) m / 2 pi)) ds

where B has been replaced by B0 inside the logarithm (first-order closure),
and the potential follows from n = B sqrt(2 pi / (-C m)) exp(-e C phi).
Everything breaks down at the density cutoff n_cut = 1 / alpha.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from functools import cached_property
from typing import Literal, Optional

import numpy as np
from scipy import integrate, optimize

from .core import DomainError
from .dilog import dilog

Method = Literal["quad", "dilog"]


@dataclass(frozen=True)
class WPUnits:
    e: float = 1.0
    m: float = 1.0
    hbar: float = 1.0
    n0: float = 1.0
    omega_p: float = 1.0
    epsilon0: float = 1.0

    def __post_init__(self):
        for name in ("e", "m", "n0", "omega_p", "epsilon0"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if not self.hbar >= 0:
            raise ValueError("hbar must be non-negative")
        expected = self.n0 * self.e**2 / (self.m * self.epsilon0)
        if abs(self.omega_p**2 - expected) > 1e-12 * expected:
            raise ValueError(f"omega_p^2={self.omega_p**2} inconsistent with n0 e^2/(m eps0)={expected}")

    @classmethod
    def consistent(cls, e=1.0, m=1.0, hbar=1.0, n0=1.0, epsilon0=1.0) -> "WPUnits":
        return cls(e, m, hbar, n0, math.sqrt(n0 * e**2 / (m * epsilon0)), epsilon0)


@dataclass(frozen=True)
class WPEquilibrium:
    units: WPUnits = field(default_factory=WPUnits)
    c0: float = 1.0
    b0: float = 1.0

    def __post_init__(self):
        if not self.c0 > 0:
            raise ValueError("c0 must be positive for an integrable Wigner function")
        if not self.b0 > 0:
            raise ValueError("b0 must be positive")

    @property
    def alpha(self) -> float:
        u = self.units
        return u.hbar**2 * u.omega_p**2 * self.c0**2 / (6.0 * u.n0)

    @property
    def kappa(self) -> float:
        u = self.units
        return u.hbar**2 * u.omega_p**2 / (12.0 * u.n0)

    @property
    def n_cut(self) -> float:
        a = self.alpha
        return math.inf if a == 0 else 1.0 / a

    @cached_property
    def table(self) -> dict:
        """(n, C, B, phi) on a default grid inside (0, n_cut)."""
        return tabulate(self)

    def to_dict(self) -> dict:
        return {"units": asdict(self.units), "c0": self.c0, "b0": self.b0, "n_cut": self.n_cut}


def _check_density(n, eq):
    if not (n > 0 and n < eq.n_cut):
        raise DomainError(f"density n={n} outside (0, n_cut={eq.n_cut})")


def wp_C(n: float, eq: WPEquilibrium) -> float:
    _check_density(n, eq)
    return -eq.c0 / math.sqrt(1.0 - eq.alpha * n)


def _log_integrand(n, eq):
    c = wp_C(n, eq)
    return c * c * math.log((n / eq.b0) * math.sqrt(-c * eq.units.m / (2.0 * math.pi)))


def log_integral_quad(n: float, eq: WPEquilibrium) -> float:
    """I(n) by adaptive quadrature in t = sqrt(n') (removes the log singularity at 0)."""
    _check_density(n, eq)

    def f(t):
        return 0.0 if t == 0.0 else 2.0 * t * _log_integrand(t * t, eq)

    with warnings.catch_warnings():
        # near the cutoff the last digits are limited by round-off in 1 - alpha n
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(f, 0.0, math.sqrt(n), epsabs=1e-14, epsrel=1e-13, limit=400)
    return val


def log_integral_dilog(n: float, eq: WPEquilibrium) -> float:
    """Closed form of kappa * I(n) (note: already multiplied by kappa).

    kappa I = 1/2 [ -ln n ln u - Li2(alpha n) - K ln u + (ln u)^2 / 8 ],
    u = 1 - alpha n, K = ln(C0 m / 2 pi)/2 - ln B0.
    """
    _check_density(n, eq)
    a = eq.alpha
    if a == 0:
        return 0.0
    lu = math.log1p(-a * n)
    k = 0.5 * math.log(eq.c0 * eq.units.m / (2.0 * math.pi)) - math.log(eq.b0)
    return 0.5 * (-math.log(n) * lu - dilog(a * n) - k * lu + lu * lu / 8.0)


def wp_B(n: float, eq: WPEquilibrium, method: Method = "quad") -> float:
    _check_density(n, eq)
    if method == "quad":
        expo = eq.kappa * log_integral_quad(n, eq) if eq.kappa else 0.0
    elif method == "dilog":
        expo = log_integral_dilog(n, eq)
    else:
        raise ValueError(f"unknown method {method!r}")
    return eq.b0 * (1.0 - eq.alpha * n) ** -0.75 * math.exp(-expo)


def wp_phi(n: float, eq: WPEquilibrium, method: Method = "quad") -> float:
    c = wp_C(n, eq)
    b = wp_B(n, eq, method)
    return -math.log(n * math.sqrt(-c * eq.units.m / (2.0 * math.pi)) / b) / (eq.units.e * c)


def density_from_phi(phi: float, n: float, eq: WPEquilibrium, method: Method = "quad") -> float:
    """Forward map n = B sqrt(2 pi / (-C m)) exp(-e C phi) with C, B taken at density n."""
    c = wp_C(n, eq)
    b = wp_B(n, eq, method)
    return b * math.sqrt(2.0 * math.pi / (-c * eq.units.m)) * math.exp(-eq.units.e * c * phi)


def wp_eval_f(H: float, n: float, eq: WPEquilibrium, method: Method = "quad") -> float:
    x = wp_C(n, eq) * H
    if x > 700:
        raise ArithmeticError(f"exponent {x:.6g} exceeds 700")
    return wp_B(n, eq, method) * math.exp(x)


def velocity_integral(n: float, eq: WPEquilibrium, method: Method = "quad") -> float:
    """int f(m v^2/2 - e phi(n), n) dv, which must reproduce n."""
    u = eq.units
    phi = wp_phi(n, eq, method)
    c = wp_C(n, eq)
    b = wp_B(n, eq, method)
    width = 12.0 / math.sqrt(-c * u.m)

    def f(v):
        return b * math.exp(c * (0.5 * u.m * v * v - u.e * phi))

    val, _ = integrate.quad(f, -width, width, epsabs=0.0, epsrel=1e-13, limit=200)
    return val


def default_n_grid(eq: WPEquilibrium, n_points: int = 400, n_min: float = 1e-3):
    """Uniform interior grid plus geometric refinement towards the cutoff."""
    nc = eq.n_cut if math.isfinite(eq.n_cut) else 10.0
    body = np.linspace(n_min * nc, nc, n_points, endpoint=False)
    tail = nc * (1.0 - np.logspace(-3, -11, 17))
    return np.unique(np.concatenate([body, tail]))


def tabulate(eq: WPEquilibrium, n_grid=None, method: Method = "quad") -> dict:
    ns = default_n_grid(eq) if n_grid is None else np.asarray(n_grid, dtype=float)
    C = np.array([wp_C(n, eq) for n in ns])
    B = np.array([wp_B(n, eq, method) for n in ns])
    phi = np.array([-math.log(n * math.sqrt(-c * eq.units.m / (2 * math.pi)) / b) / (eq.units.e * c)
                    for n, c, b in zip(ns, C, B)])
    return {"n": ns, "C": C, "B": B, "phi": phi}


def phi_peak(eq: WPEquilibrium, method: Method = "dilog") -> tuple[float, float]:
    """(n*, phi(n*)) where phi(n) reaches its maximum before the cutoff.

    phi -> 0+ at the cutoff after becoming positive, so phi(n) is increasing
    only on (0, n*]. Located in the variable ln(1 - n/n_cut).
    """
    nc = eq.n_cut
    if not math.isfinite(nc):
        raise DomainError("no cutoff in the classical limit; phi(n) is monotone")

    def neg(y):
        return -wp_phi(nc * (1.0 - math.exp(y)), eq, method)

    ys = np.linspace(-30.0, -1e-3, 400)
    vals = [neg(y) for y in ys]
    k = int(np.argmin(vals))
    lo, hi = ys[max(k - 1, 0)], ys[min(k + 1, len(ys) - 1)]
    res = optimize.minimize_scalar(neg, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    n_star = nc * (1.0 - math.exp(res.x))
    return n_star, -res.fun


def density_of_phi(phi: float, eq: WPEquilibrium, n_max: Optional[float] = None,
                   method: Method = "dilog") -> float:
    """Invert phi(n) on its increasing branch (0, n_max]."""
    if n_max is None:
        n_max = phi_peak(eq, method)[0] if math.isfinite(eq.n_cut) else 1e6
    top = wp_phi(n_max, eq, method)
    if phi > top:
        raise DomainError(f"phi={phi} above the branch maximum {top}")
    lo = math.log(n_max) - 1.0
    while wp_phi(math.exp(lo), eq, method) > phi:
        lo -= 10.0
        if lo < -700:
            raise DomainError(f"phi={phi} below the representable range")
    x = optimize.brentq(lambda y: wp_phi(math.exp(y), eq, method) - phi, lo, math.log(n_max),
                        xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    return math.exp(x)


@dataclass
class PotentialProfile:
    x: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    n: np.ndarray
    exit_x: Optional[float] = None
    exit_reason: str = ""


def wp_phi_profile(x_grid, eq: WPEquilibrium, phi0: float, dphi0: float, substeps: int = 4,
                   method: Method = "dilog") -> PotentialProfile:
    """Integrate phi'' = (e/eps0) (n(phi) - n0) with classical RK4 along x_grid.

    Stops early, recording the exit location, if phi leaves the range on
    which n(phi) is defined.
    """
    u = eq.units
    xs = np.asarray(x_grid, dtype=float)
    if xs.ndim != 1 or len(xs) < 2 or np.any(np.diff(xs) <= 0):
        raise ValueError("x_grid must be strictly increasing with at least two points")
    n_max = phi_peak(eq, method)[0] if math.isfinite(eq.n_cut) else 1e6
    coef = u.e / u.epsilon0

    def rhs(y):
        return np.array([y[1], coef * (density_of_phi(y[0], eq, n_max, method) - u.n0)])

    y = np.array([phi0, dphi0], dtype=float)
    n_start = density_of_phi(phi0, eq, n_max, method)
    out_phi, out_dphi, out_n = [phi0], [dphi0], [n_start]
    for i in range(len(xs) - 1):
        h = (xs[i + 1] - xs[i]) / substeps
        try:
            for _ in range(substeps):
                k1 = rhs(y)
                k2 = rhs(y + 0.5 * h * k1)
                k3 = rhs(y + 0.5 * h * k2)
                k4 = rhs(y + h * k3)
                y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            n_new = density_of_phi(y[0], eq, n_max, method)
        except DomainError as exc:
            m = len(out_phi)
            return PotentialProfile(xs[:m], np.array(out_phi), np.array(out_dphi), np.array(out_n),
                                    exit_x=float(xs[i]), exit_reason=str(exc))
        out_phi.append(y[0])
        out_dphi.append(y[1])
        out_n.append(n_new)
    return PotentialProfile(xs, np.array(out_phi), np.array(out_dphi), np.array(out_n))


def first_integral(profile: PotentialProfile, eq: WPEquilibrium, method: Method = "dilog"):
    """(1/2) phi'^2 - (e/eps0) int_{phi(0)}^{phi} (n(s) - n0) ds along the profile.

    The potential integral is evaluated in the density variable:
    int n dphi = [n phi] - int phi(n) dn.
    """
    u = eq.units
    n_a, phi_a = profile.n[0], profile.phi[0]
    out = []
    for n_b, phi_b, d in zip(profile.n, profile.phi, profile.dphi):
        if n_b == n_a:
            g = 0.0
        else:
            inner, _ = integrate.quad(lambda s: wp_phi(s, eq, method), n_a, n_b, epsabs=0.0, epsrel=1e-13)
            g = (n_b * phi_b - n_a * phi_a - inner) - u.n0 * (phi_b - phi_a)
        out.append(0.5 * d * d - (u.e / u.epsilon0) * g)
    return np.array(out)


def dn_dphi(n: float, eq: WPEquilibrium, method: Method = "dilog", rel_step: float = 1e-4) -> float:
    """Slope of n(phi) at density n, from a central difference of phi(n)."""
    h = rel_step * n
    return 2 * h / (wp_phi(n + h, eq, method) - wp_phi(n - h, eq, method))
