import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from suita_lab import analysis as an
from suita_lab.bergman import kernel_l1
from suita_lab.errors import ParameterError

PI2 = math.pi ** 2


def test_f_at_center_and_ball():
    for m in (0.5, 2 / 3, 3, 100):
        assert an.f_em(m, 0) == pytest.approx(1, abs=1e-14)
    assert an.f_em(1, 0.7) == pytest.approx(1, abs=1e-12)
    assert an.f_l1_diag(0) == pytest.approx(1, abs=1e-14)
    assert an.f_l1_offdiag(0) == pytest.approx(1, abs=1e-14)


def test_f_l1_at_quarter():
    expected = math.sqrt(kernel_l1((0.25, 0.25)) * 15887 * PI2 / 196608)
    assert an.f_l1_diag(0.25) == pytest.approx(expected, rel=1e-14)


def test_large_m_peak_region():
    assert max(an.f_em(64, b) for b in np.linspace(0.85, 0.97, 121)) > 1.009


@settings(max_examples=150, deadline=None)
@given(st.floats(0.5, 1024), st.floats(0, 0.999))
def test_em_bounds(m, b):
    assert 1 - 1e-9 <= an.f_em(m, b) <= 4


@settings(max_examples=150, deadline=None)
@given(st.floats(0, 0.4999))
def test_l1_bounds(b):
    assert 1 - 1e-9 <= an.f_l1_diag(b) <= 4
    assert 1 - 1e-9 <= an.f_l1_offdiag(2 * b) <= 4


def test_maximize_l1diag():
    r = an.maximize_f("l1diag")
    assert r.max == pytest.approx(1.008902, abs=1e-5)
    assert 0.2 < r.argmax["b"] < 0.25
    assert r.meta["unimodal"]


def test_maximize_em_family():
    r = an.maximize_f("em")
    assert r.max == pytest.approx(1.010182, abs=1e-5)
    assert r.meta["m_at_box_edge"]
    assert an.maximize_f("em") == r


def test_maximize_ball_is_one():
    assert an.maximize_f("em", m=1).max == pytest.approx(1, abs=1e-12)


def test_maximize_fixed_m_increases_with_m():
    vals = [an.maximize_f("em", m=m).max for m in (4, 8, 16, 32, 64, 128)]
    assert np.all(np.diff(vals) > 0)


def test_maximize_bad_family():
    with pytest.raises(ParameterError):
        an.maximize_f("nope")


def test_bound_check_reports():
    rows = an.scan("em", np.linspace(0, 0.99, 50), m=4)
    rep = an.bound_check(rows)
    assert rep.passed and rep.min_F == pytest.approx(1) and rep.argmin[2] == 0
    rows = an.scan("l1diag", np.linspace(0, 0.49, 400))
    assert an.bound_check(rows).max_F == pytest.approx(1.008902, abs=1e-4)
    bad = rows[:3] + [an.ScanRow("l1diag", None, 0.3, 1.0, 1.0, 0.5)]
    rep = an.bound_check(bad)
    assert not rep.passed and len(rep.violations) == 1


def test_continuation_dips_below_one():
    dips, b, f = an.continuation_dips_below_one()
    assert dips and 0.25 < b < 0.5 and f < 1


def test_scan_order_and_threads(monkeypatch):
    bs = np.linspace(0.01, 0.49, 37)
    serial = an.scan("l1diag", bs, continue_b14=True)
    monkeypatch.setenv("SUITA_LAB_THREADS", "4")
    assert an.scan("l1diag", bs, continue_b14=True) == serial
    assert [r.b for r in serial] == list(bs)
    monkeypatch.setenv("SUITA_LAB_THREADS", "x")
    with pytest.raises(ParameterError):
        an.scan("l1diag", bs)


def test_scan_row_consistency():
    r = an.scan_row("em", 0.4, m=3)
    assert r.F == pytest.approx(math.sqrt(r.kernel * r.volume), rel=1e-15)
    assert r.spec.m == 3
    with pytest.raises(ParameterError):
        an.scan_row("em", 0.4)


def test_smoothness_probe():
    reps = {(r.order, r.side): r for r in an.smoothness_probe()}
    for k in (1, 2, 3):
        left, right = reps[(k, "left")], reps[(k, "right")]
        assert left.rel_error < 1e-6 and right.rel_error < 1e-6
        assert left.extrapolated == pytest.approx(right.extrapolated, rel=1e-6)
    assert reps[(4, "left")].rel_error < 1e-4
    right4 = reps[(4, "right")]
    assert right4.divergent
    assert abs(right4.divergence_exponent + 0.5) < 0.1
    assert len(right4.step_ladder) == 13
    # the raw right-side estimates grow as h shrinks
    est = [e for _, e in right4.step_ladder]
    assert abs(est[-1]) > abs(est[0])


def test_smoothness_probe_center_fixed():
    with pytest.raises(ParameterError):
        an.smoothness_probe(center=0.3)
