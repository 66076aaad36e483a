"""Time-dependent spectral solver for dF/dt + p F_q - mu (q - q^3/6) F_p = mu G q F_ppp.

Strang splitting: half a step of the q-shear (exact in Fourier-q), a full
step of the p-operator (the force term and the third derivative are both
diagonal in Fourier-p, so they are applied together as one phase), then
another half q-shear. Consecutive half q-shears are fused. Both sub-steps
are unitary and leave the zero mode untouched, so mass is conserved to
round-off.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Optional, Union

import numpy as np
from scipy import fft

from .core import QuarticParams
from .numerics import thread_count
from .quartic import QuarticEquilibrium, eval_wigner


class StabilityError(ValueError):
    pass


class EdgeDecayError(ValueError):
    """Initial data not small enough at the box edges; periodic wrap-around would pollute the run."""


@dataclass(frozen=True)
class Dynamics:
    """Like QuarticParams but admits gamma = 0 (classical transport), for solver checks."""

    mu: int
    gamma: float

    def __post_init__(self):
        if self.mu not in (1, -1):
            raise ValueError(f"mu must be +1 or -1, got {self.mu!r}")
        if not (self.gamma >= 0 and math.isfinite(self.gamma)):
            raise ValueError(f"gamma must be non-negative and finite, got {self.gamma!r}")


def _pow2(n):
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class EvolutionGrid:
    l_q: float
    l_p: float
    n_q: int = 256
    n_p: int = 256
    dt: float = 1e-3
    T: float = 10.0

    def __post_init__(self):
        for n in (self.n_q, self.n_p):
            if n < 64 or not _pow2(n):
                raise ValueError(f"grid sizes must be powers of two >= 64, got {n}")
        if not (self.l_q > 0 and self.l_p > 0 and self.dt > 0 and self.T >= 0):
            raise ValueError("box half-widths and dt must be positive, T non-negative")
        steps = self.T / self.dt
        if abs(steps - round(steps)) > 1e-9 * max(steps, 1.0):
            raise ValueError(f"T={self.T} is not an integer multiple of dt={self.dt}")

    @property
    def n_steps(self) -> int:
        return int(round(self.T / self.dt))

    @property
    def q(self):
        return -self.l_q + 2 * self.l_q * np.arange(self.n_q) / self.n_q

    @property
    def p(self):
        return -self.l_p + 2 * self.l_p * np.arange(self.n_p) / self.n_p

    @property
    def dq(self) -> float:
        return 2 * self.l_q / self.n_q

    @property
    def dp(self) -> float:
        return 2 * self.l_p / self.n_p

    def mesh(self):
        return np.meshgrid(self.q, self.p, indexing="ij")

    def max_dt(self, anharmonic: bool = True) -> float:
        q = self.q
        force = np.abs(q - q**3 / 6.0) if anharmonic else np.abs(q)
        return 0.5 * min(self.dq / self.l_p, self.dp / float(np.max(force)))

    def with_time(self, T: float, dt_max: Optional[float] = None) -> "EvolutionGrid":
        """Same box, final time T; dt is lowered just enough that T/dt is an integer."""
        dt_max = self.dt if dt_max is None else dt_max
        if T == 0:
            return EvolutionGrid(self.l_q, self.l_p, self.n_q, self.n_p, dt_max, 0.0)
        steps = max(1, math.ceil(T / dt_max - 1e-9))
        return EvolutionGrid(self.l_q, self.l_p, self.n_q, self.n_p, T / steps, T)

    def with_size(self, n: int) -> "EvolutionGrid":
        """n x n points in the same box, dt reduced if the finer grid needs it."""
        g = EvolutionGrid(self.l_q, self.l_p, n, n, self.dt, 0.0)
        return g.with_time(self.T, min(self.dt, g.max_dt()))


def _edge_extent(profile, thr, step):
    """Smallest half-width beyond which ``profile`` (sampled at multiples of step) stays below thr."""
    big = np.nonzero(profile > thr)[0]
    return (big[-1] + 1) * step if len(big) else step


def default_grid(eq: QuarticEquilibrium, n: int = 256, T: float = 10.0, decay: float = 1e-13,
                 dt_cap: float = 1e-3) -> EvolutionGrid:
    """Box sized so that |F| < decay * max|F| on its edges, dt from the stability bound."""
    if eq.mu != -1:
        raise ValueError("automatic boxes are provided for the double well (mu=-1) only")
    step = 0.25
    qs = np.arange(0.0, 40.0, step)
    ps = np.arange(0.0, 80.0, step)
    F = np.abs(eval_wigner(qs[:, None], ps[None, :], eq))
    thr = decay * F.max()
    l_q = float(_edge_extent(F.max(axis=1), thr, step) + 2 * step)
    l_p = float(_edge_extent(F.max(axis=0), thr, step) + 2 * step)
    g = EvolutionGrid(l_q, l_p, n, n, dt_cap, 0.0)
    return g.with_time(T, min(dt_cap, g.max_dt()))


def _check_edges(F0, tol):
    peak = float(np.max(np.abs(F0)))
    edge = max(float(np.max(np.abs(F0[[0, -1], :]))), float(np.max(np.abs(F0[:, [0, -1]]))))
    if edge > tol * peak:
        raise EdgeDecayError(f"|F0| at the box edge is {edge:.3g} (peak {peak:.3g}); enlarge the box")


def _wavenumbers(n, length):
    k = 2 * np.pi * fft.rfftfreq(n, length / n)
    # odd operators must not act on the unpaired Nyquist mode, or the result stops being real
    k[-1] = 0.0
    return k


def evolve(F0, grid: EvolutionGrid, params: Union[QuarticParams, Dynamics], anharmonic: bool = True,
           edge_tol: float = 1e-12, workers: Optional[int] = None):
    """Advance gridded F0 (indexed [q, p]) to time grid.T; returns a new array."""
    F0 = np.asarray(F0, dtype=float)
    if F0.shape != (grid.n_q, grid.n_p):
        raise ValueError(f"F0 has shape {F0.shape}, grid expects {(grid.n_q, grid.n_p)}")
    bound = grid.max_dt(anharmonic)
    if grid.dt > bound * (1 + 1e-12):
        raise StabilityError(f"dt={grid.dt:.3g} exceeds the stability bound {bound:.3g}")
    _check_edges(F0, edge_tol)
    f = F0.copy()
    if grid.n_steps == 0:
        return f
    w = workers or thread_count()
    mu, g = params.mu, params.gamma
    # the first grid point -L is its own periodic mirror; odd multipliers must vanish
    # there or the (q, p) -> (-q, -p) symmetry is broken
    q, p = grid.q.copy(), grid.p.copy()
    q[0] = p[0] = 0.0
    kq = _wavenumbers(grid.n_q, 2 * grid.l_q)
    kp = _wavenumbers(grid.n_p, 2 * grid.l_p)
    force = mu * (q - q**3 / 6.0) if anharmonic else mu * q

    def shear(frac):
        return np.exp(-1j * frac * grid.dt * np.outer(kq, p))

    half, full = shear(0.5), shear(1.0)
    kick = np.exp(1j * grid.dt * (np.outer(force, kp) - mu * g * np.outer(q, kp**3)))

    def q_step(x, ph):
        return fft.irfft(fft.rfft(x, axis=0, workers=w) * ph, n=grid.n_q, axis=0, workers=w)

    def p_step(x):
        return fft.irfft(fft.rfft(x, axis=1, workers=w) * kick, n=grid.n_p, axis=1, workers=w)

    f = q_step(f, half)
    for i in range(grid.n_steps):
        f = p_step(f)
        f = q_step(f, full if i < grid.n_steps - 1 else half)
    return f


def relative_l2(a, b) -> float:
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


def stationarity_deviation(eq: QuarticEquilibrium, grid: Optional[EvolutionGrid] = None,
                           T: Optional[float] = None, initial=None) -> float:
    """||F(T) - F(0)|| / ||F(0)|| on the grid.

    ``initial`` replaces the starting state (an equilibrium or a callable
    (Q, P) -> F, for perturbed controls) while the dynamics keep ``eq``'s
    parameters.
    """
    if eq.mu != -1:
        raise ValueError("stationarity runs are restricted to mu=-1: the mu=+1 solution "
                         "is cut off at the support edge and spectral evolution would only "
                         "measure the Gibbs oscillations of that discontinuity")
    grid = grid or default_grid(eq)
    if T is not None:
        grid = grid.with_time(T)
    Q, P = grid.mesh()
    if initial is None:
        F0 = eval_wigner(Q, P, eq)
    elif isinstance(initial, QuarticEquilibrium):
        F0 = eval_wigner(Q, P, initial)
    else:
        F0 = np.asarray(initial(Q, P), dtype=float)
    FT = evolve(F0, grid, eq.params)
    return relative_l2(FT, F0)


def scaled_b_state(eq: QuarticEquilibrium, factor: float):
    """(Q, P) -> (A H + factor B) e^{C H}: B(q) rescaled with A(q) and C(q) untouched.

    Rescaling B0 alone would still be an exact solution (B0 only weights a
    homogeneous solution), so this is the control that actually leaves the
    solution set.
    """
    from .core import energy_qp
    from .quartic import reduced_coefficients

    def f(Q, P):
        a, b, c, L = reduced_coefficients(Q, eq)
        H = energy_qp(Q, P, eq.mu)
        return (a * H + factor * b) * np.exp(c * H + L)
    return f


def write_snapshot(path: str, F, grid: EvolutionGrid, params: QuarticParams, fmt: str = "csv",
                   t: Optional[float] = None) -> dict:
    """Dump F as CSV (q, p, F) or raw little-endian float64 with a JSON header at path + '.json'."""
    F = np.asarray(F, dtype=float)
    header = {"n_q": grid.n_q, "n_p": grid.n_p, "l_q": grid.l_q, "l_p": grid.l_p, "dt": grid.dt,
              "T": grid.T if t is None else t, "params": asdict(params), "order": "q-major", "dtype": "<f8"}
    if fmt == "csv":
        Q, P = grid.mesh()
        with open(path, "w", newline="") as fh:
            fh.write("q,p,F\n")
            for row in zip(Q.ravel(), P.ravel(), F.ravel()):
                fh.write(",".join(f"{x:.17g}" for x in row) + "\n")
    elif fmt == "bin":
        F.astype("<f8").tofile(path)
    else:
        raise ValueError(f"unknown snapshot format {fmt!r}")
    with open(path + ".json", "w") as fh:
        json.dump(header, fh, indent=2)
    return header


def read_snapshot(path: str):
    with open(path + ".json") as fh:
        header = json.load(fh)
    F = np.fromfile(path, dtype=header["dtype"]).reshape(header["n_q"], header["n_p"])
    return F, header
