import math

import mpmath
import numpy as np
import pytest

from hotspots.bessel import J0_FIRST_ZERO, SERIES_LIMIT, bessel, bessel_zero_j0

MP = {"J0": mpmath.besselj, "J1": mpmath.besselj, "Y0": mpmath.bessely, "Y1": mpmath.bessely}


def reference(kind, x):
    with mpmath.workdps(40):
        return float(MP[kind](int(kind[1]), mpmath.mpf(x)))


@pytest.mark.parametrize("kind", ["J0", "J1", "Y0", "Y1"])
def test_against_mpmath_on_grid(kind):
    xs = np.concatenate([np.geomspace(1e-6, 1.0, 40), np.linspace(1.0, SERIES_LIMIT, 300), [50.5, 63.0, 120.0]])
    worst = 0.0
    for x in xs:
        ref = reference(kind, x)
        got = bessel(kind, x)
        # relative error, floored by the local scale of the oscillation
        scale = max(abs(ref), 1e-3 * math.sqrt(2 / (math.pi * x)) if x > 1 else abs(ref))
        worst = max(worst, abs(got - ref) / scale)
    assert worst <= 1e-12


def test_values_at_zero():
    assert bessel("J0", 0.0) == 1.0
    assert bessel("J1", 0.0) == 0.0
    with pytest.raises(ValueError):
        bessel("Y0", 0.0)
    with pytest.raises(ValueError):
        bessel("Y1", -1.0)


def test_unknown_kind():
    with pytest.raises(ValueError):
        bessel("J2", 1.0)


def test_parity_for_negative_arguments():
    assert bessel("J0", -1.3) == bessel("J0", 1.3)
    assert bessel("J1", -1.3) == -bessel("J1", 1.3)


def test_array_input():
    x = np.array([0.5, 1.5, 2.5])
    out = bessel("J0", x)
    assert out.shape == (3,)
    assert out[1] == bessel("J0", 1.5)


def test_first_zero():
    assert abs(J0_FIRST_ZERO - 2.404825557695773) <= 1e-12
    assert abs(bessel_zero_j0() - float(mpmath.besseljzero(0, 1))) <= 1e-12
    assert abs(bessel("J0", J0_FIRST_ZERO)) <= 1e-13
    assert (J0_FIRST_ZERO / 2) ** 2 == pytest.approx(1.44579, abs=1e-5)


def test_j0_positive_and_decreasing_before_first_zero():
    x = np.linspace(0.0, J0_FIRST_ZERO, 1000, endpoint=False)
    assert np.all(bessel("J0", x) > 0)
    # J0' = -J1
    x = np.linspace(0.0, J0_FIRST_ZERO, 1001)[1:]
    assert np.all(-bessel("J1", x) < 0)
