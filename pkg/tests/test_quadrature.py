import math

import numpy as np
import pytest

from suita_lab.errors import ConvergenceError, ParameterError
from suita_lab.quadrature import QuadratureSpec, gk21, integrate_1d, integrate_2d_iterated


def test_polynomial():
    v, e = integrate_1d(lambda x: x ** 2, 0, 1)
    assert v == pytest.approx(1 / 3, abs=1e-15)
    assert gk21(lambda x: x ** 20, -1, 1)[0] == pytest.approx(2 / 21, rel=1e-14)


def test_singular_endpoint():
    spec = QuadratureSpec().with_singular(True, False)
    v, _ = integrate_1d(lambda x: x ** -0.5, 0, 1, spec)
    assert v == pytest.approx(2, rel=1e-10)


def test_break_point():
    v, _ = integrate_1d(lambda x: np.abs(x - 0.3), 0, 1, points=(0.3,))
    assert v == pytest.approx(0.3 ** 2 / 2 + 0.7 ** 2 / 2, rel=1e-13)


def test_2d_triangle():
    v, _ = integrate_2d_iterated(lambda s, t: np.ones_like(t), (0, 1), lambda s: (0, 1 - s))
    assert v == pytest.approx(0.5, rel=1e-12)


def test_2d_empty_inner_rows():
    v, _ = integrate_2d_iterated(lambda s, t: np.ones_like(t), (0, 2),
                                 lambda s: (0, max(0.0, 1 - s)), outer_points=(1.0,))
    assert v == pytest.approx(0.5, rel=1e-12)


BATTERY = [
    (lambda x: x ** 3 - x, 0.0, 2.0, 2.0, (False, False), ()),
    (lambda x: np.exp(x), 0.0, 1.0, math.e - 1, (False, False), ()),
    (lambda x: np.abs(x) ** -0.5, 0.0, 1.0, 2.0, (True, False), ()),
    # right-end singularity as a log: 1 - x near 1 is only resolved to an ulp
    (lambda x: np.log(1 - x), 0.0, 1.0, -1.0, (False, True), ()),
    (lambda x: np.log(x), 0.0, 1.0, -1.0, (True, False), ()),
    (lambda x: np.arccos(np.clip(x, -1, 1)), -1.0, 1.0, math.pi, (True, True), ()),
    (lambda x: np.sqrt(np.abs(x - 0.5)), 0.0, 1.0, 2 * (2 / 3) * 0.5 ** 1.5, (False, False), (0.5,)),
    (lambda x: np.sin(10 * x), 0.0, math.pi, 0.0, (False, False), ()),
    (lambda x: 1 / (1 + x * x), -5.0, 5.0, 2 * math.atan(5), (False, False), ()),
    (lambda x: np.sqrt(1 - x * x), -1.0, 1.0, math.pi / 2, (True, True), ()),
]


def test_error_estimate_honesty():
    honest = 0
    for f, a, b, exact, sing, pts in BATTERY:
        spec = QuadratureSpec(1e-12, 1e-10, 2000, sing)
        v, e = integrate_1d(f, a, b, spec, pts)
        assert abs(v - exact) <= max(1e-10, 1e-9 * abs(exact))
        if abs(v - exact) <= 10 * e + 1e-15:
            honest += 1
    assert honest >= 0.95 * len(BATTERY)


def test_determinism():
    f = lambda x: np.sqrt(x) * np.cos(7 * x)
    spec = QuadratureSpec().with_singular(True, False)
    assert integrate_1d(f, 0, 3, spec) == integrate_1d(f, 0, 3, spec)


def test_nonconvergence_carries_partial():
    spec = QuadratureSpec(1e-15, 1e-15, 3)
    with pytest.raises(ConvergenceError) as exc:
        integrate_1d(lambda x: np.sin(1 / (x + 1e-3)), 0, 1, spec)
    assert math.isfinite(exc.value.partial)


def test_bad_inputs():
    with pytest.raises(ParameterError):
        QuadratureSpec(abs_tol=0)
    with pytest.raises(ParameterError):
        QuadratureSpec(max_subdivisions=0)
    with pytest.raises(ParameterError):
        integrate_1d(lambda x: x, 1, 0)
