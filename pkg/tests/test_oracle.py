import math

import numpy as np
import pytest

from suita_lab import closed_form as cf
from suita_lab import oracle
from suita_lab.domains import EllipsoidSpec
from suita_lab.errors import ParameterError
from suita_lab.geodesics import BoundaryChart, chart_domain_bounds, chart_point

PI2 = math.pi ** 2


def test_param_em():
    r = oracle.volume_param_integral(EllipsoidSpec.omega(1), 0.4)
    assert r.value == pytest.approx(PI2 * (1 - 0.16) ** 3 / 2, rel=1e-8)
    for m, b in ((2 / 3, 0.5), (2, 0.7), (8, 0.3)):
        r = oracle.volume_param_integral(EllipsoidSpec.omega(m), b)
        assert r.value == pytest.approx(cf.volume_em(m, b).value, rel=1e-8)


@pytest.mark.parametrize("b", [0.2, 0.3, 0.4])
def test_param_l1(b):
    r = oracle.volume_param_integral(EllipsoidSpec.l1(), b)
    assert r.value == pytest.approx(cf.volume_l1_diag(b).value, rel=1e-8)
    i12, i1, i0 = cf.volume_l1_diag_components(b)
    assert r.meta["I12"] == pytest.approx(i12, rel=1e-8)
    assert r.meta["I1"] == pytest.approx(i1, rel=1e-8)
    assert r.meta["I0"] == pytest.approx(i0, rel=1e-8, abs=1e-14)


def test_i0_plane_and_lifted_routes_agree():
    for b in (0.3, 0.35):
        plane, _ = oracle.l1_i0_plane(b)
        assert plane == pytest.approx(cf.volume_l1_diag_components(b)[2], rel=1e-8)


def test_shadow():
    assert oracle.volume_reinhardt_shadow(1, 0.5).value == pytest.approx(PI2 * 0.75 ** 3 / 2,
                                                                         rel=1e-6)
    assert oracle.volume_reinhardt_shadow(4, 0.3).value == pytest.approx(
        cf.volume_em(4, 0.3).value, rel=1e-6)
    for m in (0.5, 3.0):
        assert oracle.volume_reinhardt_shadow(m, 1e-4).value == pytest.approx(
            PI2 * m / (m + 1), rel=1e-6)


def test_shadow_curve_is_monotone():
    u, v = oracle.shadow_curve(3.0, 0.6, 2000)
    assert np.all(np.diff(u) >= -1e-15) and np.all(np.diff(v) <= 1e-15)


def test_sphere_directions_are_unit_and_deterministic():
    x1, x2 = oracle.sphere_directions(1000)
    assert np.allclose(np.abs(x1) ** 2 + np.abs(x2) ** 2, 1)
    y1, y2 = oracle.sphere_directions(1000)
    assert np.array_equal(x1, y1) and np.array_equal(x2, y2)


@pytest.mark.parametrize("b", [0.2, 0.3])
def test_gauge(b):
    r = oracle.volume_gauge_l1(b, 40000)
    assert r.value == pytest.approx(cf.volume_l1_diag(b).value, rel=5e-3)
    assert r.meta["failed"] <= 40
    assert r.meta["multi_solution_conflicts"] == 0


def test_gauge_solves_have_small_residual():
    x1, x2 = oracle.sphere_directions(500, seed=5)
    sols = oracle.gauge_solve(0.35, list(zip(x1, x2)))
    ok = [s for s in sols if s.chart_used]
    assert len(ok) == 500
    assert max(s.residual for s in ok) < 1e-9
    assert all(math.isfinite(s.radius) and s.radius > 0 for s in ok)


def test_axis_direction_radius():
    # along (1, 0) the gauge radius is the largest |f| over chart points with g = 0
    b = 0.3
    sol = oracle.gauge_solve(b, [(1 + 0j, 0j)])[0]
    best = 0.0
    for tag in ("L1_12", "L1_1", "L1_0"):
        ch = BoundaryChart(tag, b)
        dom = chart_domain_bounds(ch)
        U, V = np.meshgrid(np.linspace(*dom.u_range, 1500), np.linspace(*dom.v_range, 1500))
        keep = dom.inside(U, V)
        f, g = chart_point(ch, U[keep], V[keep], check=False)
        near = np.abs(g) < 2e-3 * np.abs(f)
        if np.any(near):
            best = max(best, float(np.max(np.abs(f[near]))))
    assert sol.radius == pytest.approx(best, rel=5e-3)


def test_offdiag_gauge():
    for b in (0.2, 0.3, 0.5):
        r = oracle.volume_gauge_l1_axis(b, 100000)
        assert r.value == pytest.approx(cf.volume_l1_offdiag(b), rel=5e-3)


def test_gauge_error_decreases():
    b = 0.3
    exact = cf.volume_l1_offdiag(b)
    ns = np.array([1000 * 4 ** k for k in range(5)])
    errs = np.array([abs(oracle.volume_gauge_l1_axis(b, int(n)).value - exact) for n in ns])
    slope = np.polyfit(np.log(ns), np.log(errs), 1)[0]
    assert slope <= -0.4


@pytest.mark.parametrize("b", [0.27, 0.3, 0.35])
def test_indefinite_integrals(b):
    rep = oracle.verify_indefinite_integrals(b)
    assert rep.passed, rep
    assert len(rep.antiderivatives) >= 3


def test_parameter_errors():
    with pytest.raises(ParameterError):
        oracle.volume_gauge_l1(0.3, 100)
    with pytest.raises(ParameterError):
        oracle.volume_gauge_l1(0.5, 20000)
    with pytest.raises(ParameterError):
        oracle.volume_param_integral(EllipsoidSpec.l1(), 0.0)
    with pytest.raises(ParameterError):
        oracle.volume_reinhardt_shadow(0.3, 0.5)
    with pytest.raises(ParameterError):
        oracle.verify_indefinite_integrals(0.2)
