import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from suita_lab import closed_form as cf
from suita_lab.errors import ParameterError

PI2 = math.pi ** 2


def generic(m, b):
    return PI2 * (-(m - 1) / (2 * m * (3 * m - 2) * (3 * m - 1)) * b ** (6 * m + 2)
                  - 3 * (m - 1) / (2 * m * (m - 2) * (m + 1)) * b ** (2 * m + 2)
                  + m / (2 * (m - 2) * (3 * m - 2)) * b ** 6
                  + 3 * m / (3 * m - 1) * b ** 4 - (4 * m - 1) / (2 * m) * b ** 2 + m / (m + 1))


def two_thirds(b):
    return PI2 / 80 * (-65 * b ** 6 + 40 * b ** 6 * math.log(b) + 160 * b ** 4
                       - 27 * b ** (10 / 3) - 100 * b ** 2 + 32)


def two(b):
    return PI2 / 240 * (-3 * b ** 14 - 25 * b ** 6 - 120 * b ** 6 * math.log(b)
                        + 288 * b ** 4 - 420 * b ** 2 + 160)


def test_center():
    for m in (0.5, 2 / 3, 1, 2, 3.7, 100):
        assert cf.volume_em(m, 0).value == pytest.approx(PI2 * m / (m + 1), rel=1e-14)


def test_ball():
    for b in np.linspace(0, 0.99, 50):
        assert cf.volume_em(1, b).value == pytest.approx(PI2 * (1 - b * b) ** 3 / 2, rel=1e-12)


@pytest.mark.parametrize("m", [0.5, 0.9, 1.3, 3, 8, 64])
def test_generic_formula(m):
    for b in (0.1, 0.5, 0.8):
        r = cf.volume_em(m, b)
        assert r.branch == "GENERIC_M"
        assert r.value == pytest.approx(generic(m, b), rel=1e-11)


def test_special_exponents():
    for b in (0.1, 0.5, 0.9):
        assert cf.volume_em(2 / 3, b).value == pytest.approx(two_thirds(b), rel=1e-13)
        assert cf.volume_em(2, b).value == pytest.approx(two(b), rel=1e-13)
    assert cf.volume_em(2, 0.5).branch == "SPECIAL_M"


@pytest.mark.parametrize("m0,special", [(2 / 3, two_thirds), (2.0, two)])
def test_continuity_at_special_exponents(m0, special):
    for b in (0.2, 0.6, 0.95):
        exact = special(b)
        for eps, tol in ((1e-3, 1e-5), (1e-5, 1e-8), (1e-7, 1e-8)):
            mean = (cf.volume_em(m0 + eps, b).value + cf.volume_em(m0 - eps, b).value) / 2
            assert abs(mean - exact) < tol * exact
        assert cf.volume_em(m0 + 5e-5, b).branch == "BLEND_M"


@settings(max_examples=200, deadline=None)
@given(st.floats(0.5, 200), st.floats(0, 0.999))
def test_positive_and_below_domain_volume(m, b):
    v = cf.volume_em(m, b).value
    assert 0 < v <= PI2 * m / (m + 1) * (1 + 1e-12)


def test_em_components():
    assert cf.volume_em_i2(1, 0.5) == pytest.approx(PI2 * 0.25 * 0.75 ** 3 / 2, rel=1e-14)
    i12, i2 = cf.volume_em_components(3.3, 0)
    assert i12 == pytest.approx(PI2 * 3.3 / 4.3, rel=1e-14)
    i12, i2 = cf.volume_em_components(4, 0.3)
    assert i12 + i2 == pytest.approx(cf.volume_em(4, 0.3).value, rel=1e-12)
    i12, i2 = cf.volume_em_components(2, 0.3)
    assert i12 + i2 == pytest.approx(two(0.3), rel=1e-12)


def test_l1_center_and_quarter():
    assert cf.volume_l1_diag(0).value == pytest.approx(PI2 / 6, rel=1e-15)
    with mpmath.workdps(40):
        q = mpmath.mpf(1) / 4
        target = mpmath.mpf(15887) / 196608 * mpmath.pi ** 2
        assert abs(cf.chi_minus(q, "mpmath") - target) < 1e-13 * PI2
        assert abs(cf.chi_plus(q, "mpmath") - target) < 1e-13 * PI2
    assert cf.chi_minus(0.25) == pytest.approx(cf.chi_plus(0.25), rel=1e-14)


def test_branches():
    assert cf.volume_l1_diag(0.25).branch == "BELOW_QUARTER"
    assert cf.volume_l1_diag(0.2500001).branch == "ABOVE_QUARTER"


def test_l1_components():
    b = 0.2
    i12, i1, i0 = cf.volume_l1_diag_components(b)
    assert i0 == 0
    poly = (1 - 32 * b ** 2 + 80 * b ** 3 - 12 * b ** 4 - 112 * b ** 5 + 176 * b ** 6
            - 192 * b ** 7 + 110 * b ** 8)
    assert i12 == pytest.approx(PI2 / 6 * poly, rel=1e-13)
    for b in np.linspace(0.01, 0.49, 60):
        i12, i1, i0 = cf.volume_l1_diag_components(b)
        assert i12 + 2 * i1 + i0 == pytest.approx(cf.volume_l1_diag(b).value, rel=1e-12)


def test_arccos_arctan_identity():
    for b in np.linspace(0.26, 0.49, 50):
        lhs = math.acos(-1 + (4 * b - 1) / (2 * b * b))
        rhs = math.atan((2 * b * b - 4 * b + 1) / ((1 - 2 * b) * math.sqrt(4 * b - 1))) + math.pi / 2
        assert lhs == pytest.approx(rhs, rel=1e-13)


def test_alternative_representation():
    hi = 1 - 1 / math.sqrt(2)
    for b in np.linspace(0.25, hi, 52)[1:-1]:
        assert cf.chi_plus_alternative(b) == pytest.approx(cf.chi_plus(b), rel=1e-12)
    # the sign-flipped arctan term does not reproduce the general form
    assert abs(cf.chi_plus_alternative(0.27, as_printed=True) / cf.chi_plus(0.27) - 1) > 0.01
    with pytest.raises(ParameterError):
        cf.chi_plus_alternative(hi + 0.01)


def test_l1_positive_decreasing_and_vanishing():
    bs = np.linspace(0, 0.4999, 1000)
    v = np.array([cf.volume_l1_diag(b).value for b in bs])
    assert np.all(v > 0)
    assert np.all(np.diff(v) < 0)
    assert cf.volume_l1_diag(0.5 - 1e-3).value < 1e-6


def test_float_and_mpmath_agree_near_half():
    for b in (0.46, 0.49, 0.499, 0.4999):
        with mpmath.workdps(50):
            ref = float(cf.chi_plus(b, "mpmath"))
        assert cf.volume_l1_diag(b).value == pytest.approx(ref, rel=1e-10)


def test_offdiag():
    assert cf.volume_l1_offdiag(0) == pytest.approx(PI2 / 6)
    assert cf.volume_l1_offdiag(0.5) == pytest.approx(PI2 / 6 * 0.5 ** 4 * (0.5 ** 4 + 4))
    with pytest.raises(ParameterError):
        cf.volume_l1_offdiag(1.0)


def test_derivative_table():
    t = cf.chi_derivatives_at_quarter()
    assert t[0]["left_over_pi2"] == Fraction(15887, 196608)
    assert t[1]["left_over_pi2"] == Fraction(-3521, 6144)
    assert t[2]["right_over_pi2"] == Fraction(-215, 1536)
    assert t[3]["right_over_pi2"] == Fraction(1785, 64)
    assert t[4]["left_over_pi2"] == Fraction(1549, 16)
    assert t[4]["right"] == math.inf


def test_derivatives_by_mpmath():
    # low orders from both closed forms, independently of the probe
    with mpmath.workdps(50):
        q = mpmath.mpf(1) / 4
        t = cf.chi_derivatives_at_quarter()
        for k in (1, 2, 3):
            exact = float(t[k]["left_over_pi2"]) * PI2
            left = mpmath.diff(lambda x: cf.chi_minus(x, "mpmath"), q, k)
            assert float(left) == pytest.approx(exact, rel=1e-12)
        left4 = mpmath.diff(lambda x: cf.chi_minus(x, "mpmath"), q, 4)
        assert float(left4) == pytest.approx(float(t[4]["left_over_pi2"]) * PI2, rel=1e-12)


def test_parameter_errors():
    with pytest.raises(ParameterError):
        cf.volume_em(0.4, 0.2)
    with pytest.raises(ParameterError):
        cf.volume_em(2, 1.0)
    with pytest.raises(ParameterError):
        cf.volume_l1_diag(0.5)
    with pytest.raises(ParameterError):
        cf.volume_l1_diag(-0.1)
