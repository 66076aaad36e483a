import math

import numpy as np
import pytest

from wigner_bgk.core import QuarticParams
from wigner_bgk.evolution import (Dynamics, EdgeDecayError, EvolutionGrid, StabilityError, default_grid,
                                  evolve, read_snapshot, relative_l2, scaled_b_state, stationarity_deviation,
                                  write_snapshot)
from wigner_bgk.quartic import QuarticEquilibrium

FIG4 = (-1, 0.2, 0.52, -1.3, 1.0)
FIG6 = (-1, 0.5, -0.48, 1.2, 1.0)


def build(args, form="exact"):
    return QuarticEquilibrium.build(*args, form=form)


def blob(Q, P, q0, p0):
    return np.exp(-((Q - q0) ** 2 + (P - p0) ** 2) / 2)


def test_grid_validation():
    with pytest.raises(ValueError):
        EvolutionGrid(6, 10, 32, 64)
    with pytest.raises(ValueError):
        EvolutionGrid(6, 10, 96, 64)
    with pytest.raises(ValueError):
        EvolutionGrid(6, 10, 64, 64, dt=0.3, T=1.0)
    g = EvolutionGrid(6, 10, 64, 128, dt=1e-3, T=1.0)
    assert g.n_steps == 1000
    assert g.q[0] == -6 and g.q[-1] == pytest.approx(6 - 12 / 64)


def test_with_time_keeps_integer_steps():
    g = EvolutionGrid(6, 10, 64, 64, dt=1e-3, T=0).with_time(2 * math.pi)
    assert g.n_steps * g.dt == pytest.approx(2 * math.pi, rel=1e-14)
    assert g.dt <= 1e-3


def test_stability_bound_enforced():
    g = EvolutionGrid(6, 10, 256, 256, dt=1e-2, T=0.1)
    Q, P = g.mesh()
    with pytest.raises(StabilityError):
        evolve(blob(Q, P, 0, 0), g, QuarticParams(-1, 0.5))


def test_edge_decay_enforced():
    g = EvolutionGrid(3, 3, 64, 64, dt=1e-3, T=0.01)
    Q, P = g.mesh()
    with pytest.raises(EdgeDecayError):
        evolve(blob(Q, P, 0, 0), g, QuarticParams(-1, 0.5))


def test_harmonic_rotation_returns_after_one_period():
    g = EvolutionGrid(10, 10, 64, 64, dt=1e-3, T=0).with_time(2 * math.pi)
    Q, P = g.mesh()
    F0 = blob(Q, P, 2.0, 1.0)
    F = evolve(F0, g, Dynamics(1, 0.0), anharmonic=False)
    assert relative_l2(F, F0) <= 1e-6


def test_harmonic_quarter_turn():
    g = EvolutionGrid(10, 10, 64, 64, dt=1e-3, T=0).with_time(math.pi / 2)
    Q, P = g.mesh()
    F = evolve(blob(Q, P, 2.0, 1.0), g, Dynamics(1, 0.0), anharmonic=False)
    # clockwise rotation: (q, p) -> (q cos t + p sin t, p cos t - q sin t)
    assert relative_l2(F, blob(Q, P, 1.0, -2.0)) <= 1e-6


def test_mass_conserved_per_step():
    g = EvolutionGrid(9, 16, 128, 128, dt=5e-4, T=5e-4)
    Q, P = g.mesh()
    F = blob(Q, P, 1.5, -2.0) - 0.3 * blob(Q, P, -1.0, 1.0)
    m0 = F.sum() * g.dq * g.dp
    for _ in range(20):
        F = evolve(F, g, QuarticParams(-1, 0.5), edge_tol=1e-8)
        m = F.sum() * g.dq * g.dp
        assert abs(m - m0) <= 1e-10 * abs(m0)
        m0 = m


def test_parity_preserved():
    g = EvolutionGrid(9, 16, 128, 128, dt=5e-4, T=0.5)
    Q, P = g.mesh()
    F0 = blob(Q, P, 1.0, 2.0) + blob(Q, P, -1.0, -2.0)
    F = evolve(F0, g, QuarticParams(-1, 0.5), edge_tol=1e-10)
    idx = (-np.arange(g.n_q)) % g.n_q
    mirrored = F[idx][:, idx]
    assert np.max(np.abs(F - mirrored)) <= 1e-13 * np.max(np.abs(F))
    assert relative_l2(F, F0) > 1e-2


def test_zero_time_is_identity():
    eq = build(FIG4)
    assert stationarity_deviation(eq, T=0.0) == 0.0


def test_mu_plus_one_rejected():
    with pytest.raises(ValueError):
        stationarity_deviation(build((1, 1.0, 0.0, 0.42, 16.0)), T=1.0)


def test_default_grid_decays():
    for args in (FIG4, FIG6):
        eq = build(args)
        g = default_grid(eq)
        assert g.dt <= g.max_dt() and g.dt <= 1e-3
        assert g.n_steps * g.dt == pytest.approx(10.0)


@pytest.mark.parametrize("args", [FIG4, FIG6])
def test_short_run_stationary(args):
    eq = build(args)
    assert stationarity_deviation(eq, default_grid(eq, T=1.0)) <= 1e-6


def test_short_run_controls():
    eq = build(FIG6)
    g = default_grid(eq, T=1.0)
    assert stationarity_deviation(eq, g, initial=scaled_b_state(eq, 1.1)) > 1e-3
    pub = eq.with_form("published")
    assert stationarity_deviation(eq, default_grid(pub, T=1.0), initial=pub) > 1e-2


def test_spectral_convergence_until_time_floor():
    eq = build(FIG6)
    base = default_grid(eq, n=256, T=1.0)
    devs = [stationarity_deviation(eq, base.with_size(n)) for n in (64, 128, 256)]
    assert devs[0] / devs[1] >= 4
    # by 128 points the time-step error dominates
    assert devs[2] == pytest.approx(devs[1], rel=0.05)


def test_snapshot_round_trip(tmp_path):
    g = EvolutionGrid(9, 16, 64, 64, dt=1e-3, T=0.0)
    Q, P = g.mesh()
    F = blob(Q, P, 0.5, 0.25)
    path = str(tmp_path / "snap.bin")
    head = write_snapshot(path, F, g, QuarticParams(-1, 0.5), "bin")
    back, h2 = read_snapshot(path)
    assert np.array_equal(back, F) and h2 == head
    csv_path = str(tmp_path / "snap.csv")
    write_snapshot(csv_path, F, g, QuarticParams(-1, 0.5), "csv")
    rows = open(csv_path).read().splitlines()
    assert rows[0] == "q,p,F" and len(rows) == 64 * 64 + 1
    assert float(rows[1].split(",")[2]) == F[0, 0]
