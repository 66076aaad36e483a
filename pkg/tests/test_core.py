import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wigner_bgk.core import (AnsatzValue, ExponentOverflowError, PhasePoint, PhysicalUnits, QuarticParams,
                             ansatz_dH, ansatz_eval, energy)
from wigner_bgk.numerics import richardson_derivative

finite = st.floats(-20, 20, allow_nan=False)


def test_energy_examples():
    for mu in (1, -1):
        assert energy(PhasePoint(0.0, 0.0), QuarticParams(mu, 1.0)) == 0.0
    assert energy(PhasePoint(2 * math.sqrt(3), 0.0), QuarticParams(1, 1.0)) == pytest.approx(0.0, abs=1e-14)
    assert energy(PhasePoint(1.0, 1.0), QuarticParams(-1, 1.0)) == pytest.approx(1 / 24, rel=1e-15)


@given(finite, finite, st.sampled_from([1, -1]))
def test_energy_parity(q, p, mu):
    par = QuarticParams(mu, 1.0)
    e = energy(PhasePoint(q, p), par)
    assert energy(PhasePoint(-q, p), par) == e
    assert energy(PhasePoint(q, -p), par) == e


def test_params_validation():
    with pytest.raises(ValueError):
        QuarticParams(0, 1.0)
    with pytest.raises(ValueError):
        QuarticParams(1, 0.0)
    with pytest.raises(ValueError):
        QuarticParams(1, -2.0)
    with pytest.raises(ValueError):
        AnsatzValue(1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        PhasePoint(math.inf, 0.0)


def test_units_gamma():
    u = PhysicalUnits(m=2.0, hbar=3.0, omega=0.5, k=1.5)
    g = 3.0**2 * 1.5**4 / (6 * 2.0**2 * 0.5**2)
    assert u.gamma == pytest.approx(g, rel=1e-15)
    assert QuarticParams.from_units(-1, u).gamma == pytest.approx(g)
    QuarticParams.from_units(-1, u, gamma=g * (1 + 1e-14))
    with pytest.raises(ValueError):
        QuarticParams.from_units(-1, u, gamma=g * (1 + 1e-9))
    with pytest.raises(ValueError):
        PhysicalUnits(m=0.0, hbar=1.0, omega=1.0, k=1.0)


def test_ansatz_examples():
    assert ansatz_eval(0.0, AnsatzValue(3.0, 0.042, -0.25)) == pytest.approx(0.042, rel=1e-15)
    assert ansatz_eval(2.0, AnsatzValue(0.0, 1.0, -1.0)) == pytest.approx(math.exp(-2), rel=1e-15)
    assert ansatz_eval(1.0, AnsatzValue(1.0, -1.0, -1.0)) == 0.0
    assert ansatz_dH(0.0, AnsatzValue(0.0, 1.0, -1.0), 1) == pytest.approx(-1.0)
    assert ansatz_dH(0.0, AnsatzValue(1.0, 0.0, -1.0), 1) == pytest.approx(1.0)
    assert ansatz_dH(1.0, AnsatzValue(0.0, 1.0, -2.0), 3) == pytest.approx(-8 * math.exp(-2), rel=1e-14)


def test_ansatz_overflow_is_an_error():
    with pytest.raises(ExponentOverflowError):
        ansatz_eval(-800.0, AnsatzValue(0.0, 1.0, -1.0))
    with pytest.raises(ValueError):
        ansatz_dH(0.0, AnsatzValue(0.0, 1.0, -1.0), 4)


@given(st.floats(-5, 5), st.floats(-3, 3), st.floats(-3, 3), st.floats(-4, -0.05), st.sampled_from([1, 2, 3]))
def test_ansatz_dH_matches_finite_differences(H, a, b, c, order):
    v = AnsatzValue(a, b, c)
    target = ansatz_dH(H, v, order)
    lower = (lambda x: ansatz_eval(x, v)) if order == 1 else (lambda x: ansatz_dH(x, v, order - 1))
    fd = richardson_derivative(lower, H, h=1e-2, levels=3)
    scale = max(abs(target), abs(ansatz_eval(H, v)), 1e-300)
    assert abs(fd - target) <= 1e-6 * scale


@given(st.floats(-5, 5), st.floats(-3, 3), st.floats(-3, 3), st.floats(-4, -0.05), st.floats(-10, 10))
def test_ansatz_linear_in_a_b(H, a, b, c, s):
    base = ansatz_eval(H, AnsatzValue(a, b, c))
    scaled = ansatz_eval(H, AnsatzValue(s * a, s * b, c))
    assert scaled == pytest.approx(s * base, rel=1e-12, abs=1e-300)


def test_richardson_polynomial_exact():
    f = lambda x: x**5 - 3 * x**2
    assert richardson_derivative(f, 1.3, h=0.1, levels=3) == pytest.approx(5 * 1.3**4 - 6 * 1.3, rel=1e-12)
    vec = richardson_derivative(lambda x: np.array([np.sin(x), np.exp(x)]), 0.4)
    assert np.allclose(vec, [np.cos(0.4), np.exp(0.4)], rtol=1e-10)
