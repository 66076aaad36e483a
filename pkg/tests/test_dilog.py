import math

import pytest
from hypothesis import given, strategies as st
from scipy.special import spence

from wigner_bgk.dilog import dilog


def test_special_values():
    assert dilog(0.0) == 0.0
    assert abs(dilog(1.0) - math.pi**2 / 6) <= 1e-12
    assert abs(dilog(-1.0) + math.pi**2 / 12) <= 1e-12
    assert abs(dilog(0.5) - (math.pi**2 / 12 - math.log(2) ** 2 / 2)) <= 1e-12


def test_rejects_outside_real_branch():
    with pytest.raises(ValueError):
        dilog(1.0 + 1e-12)
    with pytest.raises(ValueError):
        dilog(float("nan"))


# scipy's spence(x) is the integral from 1 to x of ln(s)/(1-s), which equals Li2(1-x)
@given(st.floats(-1e6, 1.0))
def test_matches_scipy_spence(z):
    assert dilog(z) == pytest.approx(float(spence(1.0 - z)), abs=1e-12, rel=1e-13)


@given(st.floats(0.001, 0.999))
def test_euler_reflection(z):
    lhs = dilog(z) + dilog(1 - z)
    assert lhs == pytest.approx(math.pi**2 / 6 - math.log(z) * math.log(1 - z), abs=1e-13)


@given(st.floats(-0.999, 0.999))
def test_duplication(z):
    assert dilog(z) + dilog(-z) == pytest.approx(0.5 * dilog(z * z), abs=1e-13)


def test_derivative():
    z, h = 0.3, 1e-5
    fd = (dilog(z + h) - dilog(z - h)) / (2 * h)
    assert fd == pytest.approx(-math.log1p(-z) / z, rel=1e-8)
