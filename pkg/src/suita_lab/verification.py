"""Verification suites behind ``suita-lab verify``.

Each suite returns a SuiteReport of named checks with the tolerance used
and the error attained; nothing here raises on a failed check.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import numpy as np

from . import analysis, closed_form, oracle
from .domains import EllipsoidSpec
from .errors import ParameterError
from .geodesics import BoundaryChart, chart_domain_bounds, chart_point
from .jacobian import h_closed

EM_M_GRID = (0.5, 2 / 3, 1.0, 2.0, 4.0, 8.0, 64.0)
EM_B_GRID = tuple(round(0.1 * k, 1) for k in range(1, 10))
L1_B_GRID = (0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45)
INDEF_B = (0.27, 0.3, 0.35)
VALUE_AT_QUARTER = Fraction(15887, 196608)
JACOBIAN_SEED = 7


@dataclass
class Check:
    name: str
    passed: bool
    tolerance: float
    error: float
    detail: Dict[str, object] = field(default_factory=dict)


@dataclass
class SuiteReport:
    suite: str
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, error, tolerance, **detail):
        err = float(error)
        self.checks.append(Check(name, bool(err <= tolerance), tolerance, err, detail))

    def to_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed,
                "checks": [asdict(c) for c in self.checks]}


def _rel(a, b):
    return abs(a - b) / abs(b)


def suite_ball(n: int = 100) -> SuiteReport:
    rep = SuiteReport("ball")
    worst = max(abs(analysis.f_em(1.0, b) - 1) for b in np.linspace(0, 0.99, n))
    rep.add("F = 1 on the unit ball", worst, 1e-12, n=n)
    return rep


def suite_em_threeway(tol: float = 1e-6) -> SuiteReport:
    rep = SuiteReport("em-threeway")
    for m in EM_M_GRID:
        for b in EM_B_GRID:
            c = closed_form.volume_em(m, b).value
            p = oracle.volume_param_integral(EllipsoidSpec.omega(m), b).value
            s = oracle.volume_reinhardt_shadow(m, b).value
            err = max(_rel(c, p), _rel(c, s), _rel(p, s))
            rep.add(f"m={m:.6g} b={b:g}", err, tol, closed=c, param=p, shadow=s)
    return rep


def suite_l1_oracles(n_directions: int = 100000, param_tol: float = 1e-8,
                     gauge_tol: float = 5e-3, b_values=L1_B_GRID) -> SuiteReport:
    rep = SuiteReport("l1-oracles")
    for b in b_values:
        c = closed_form.volume_l1_diag(b).value
        p = oracle.volume_param_integral(EllipsoidSpec.l1(), b).value
        rep.add(f"param b={b:g}", _rel(p, c), param_tol, closed=c, param=p)
        g = oracle.volume_gauge_l1(b, n_directions)
        rep.add(f"gauge b={b:g}", _rel(g.value, c), gauge_tol, gauge=g.value,
                failed=g.meta["failed"], overlap=g.meta["overlap"])
    return rep


def suite_offdiag(n_directions: int = 100000, tol: float = 5e-3) -> SuiteReport:
    rep = SuiteReport("offdiag")
    for b in (0.2, 0.5):
        c = closed_form.volume_l1_offdiag(b)
        g = oracle.volume_gauge_l1_axis(b, n_directions).value
        rep.add(f"gauge b={b:g}", _rel(g, c), tol, closed=c, gauge=g)
    return rep


def suite_smoothness() -> SuiteReport:
    import mpmath

    rep = SuiteReport("smoothness")
    with mpmath.workdps(40):
        q = mpmath.mpf(1) / 4
        target = VALUE_AT_QUARTER.numerator * mpmath.pi ** 2 / VALUE_AT_QUARTER.denominator
        for name, fun in (("left", closed_form.chi_minus), ("right", closed_form.chi_plus)):
            err = abs(fun(q, "mpmath") - target) / mpmath.pi ** 2
            rep.add(f"value at 1/4, {name} branch", err, 1e-13)
    for r in analysis.smoothness_probe():
        if r.divergent:
            rep.add(f"order {r.order} {r.side}: divergence exponent",
                    abs(r.divergence_exponent + 0.5), 0.1, exponent=r.divergence_exponent)
        else:
            tol = 1e-4 if r.order == 4 else 1e-6
            rep.add(f"order {r.order} {r.side}", r.rel_error, tol,
                    estimate=r.extrapolated, exact=r.exact)
    return rep


def bound_rows() -> List[analysis.ScanRow]:
    rows = []
    for m in (0.5, 2 / 3, 2, 4, 8, 16, 32, 64, 128, 1024):
        rows += analysis.scan("em", np.linspace(0, 0.999, 400), m=m)
    rows += analysis.scan("l1diag", np.linspace(0, 0.4999, 400))
    rows += analysis.scan("l1offdiag", np.linspace(0, 0.999, 400))
    return rows


def suite_bounds() -> SuiteReport:
    rep = SuiteReport("bounds")
    br = analysis.bound_check(bound_rows())
    # distance outside [1 - slack, 4]
    err = max(0.0, (1 - analysis.LOWER_SLACK) - br.min_F, br.max_F - 4)
    rep.add("1 <= F <= 4 on the scan grids", err, 0.0, rows=br.n, min_F=br.min_F,
            max_F=br.max_F)
    dips, b, f = analysis.continuation_dips_below_one()
    rep.checks.append(Check("continued b <= 1/4 formula drops below 1 on (1/4, 1/2)", dips,
                            0.0, max(0.0, f - 1), {"b": b, "F": f}))
    return rep


def suite_maximize() -> SuiteReport:
    rep = SuiteReport("maximize")
    for fam, target in (("l1diag", 1.008902), ("em", 1.010182)):
        r = analysis.maximize_f(fam)
        rep.add(f"sup F, {fam}", abs(r.max - target), 1e-5, max=r.max, argmax=r.argmax)
    return rep


def suite_indefinite() -> SuiteReport:
    rep = SuiteReport("indefinite")
    for b in INDEF_B:
        r = oracle.verify_indefinite_integrals(b)
        for c in r.antiderivatives:
            rep.add(f"b={b:g} {c.name}", c.max_deviation, 1e-8, points=c.n_points)
        for d in r.definite:
            rep.add(f"b={b:g} {d.name}", d.rel_error, 1e-9)
    return rep


# ---------------------------------------------------------------------------
# Jacobian lemma against a finite-difference 4x4 determinant

JACOBIAN_TAGS = ("EM_12", "EM_2", "L1AX_12", "L1AX_2", "L1_12", "L1_1", "L1_0", "L1_0_LIFT")


def _fd_jacobian(chart, zeta, u, v, h=1e-6):
    def F(x):
        z = complex(x[0], x[1])
        f, g = chart_point(chart, x[2], x[3], check=False)
        return np.array([(z * f).real, (z * f).imag, (z * g).real, (z * g).imag])

    x0 = np.array([zeta.real, zeta.imag, u, v])
    J = np.empty((4, 4))
    for k in range(4):
        e = np.zeros(4)
        e[k] = h * max(1.0, abs(x0[k]))
        J[:, k] = (F(x0 + e) - F(x0 - e)) / (2 * e[k])
    return float(np.linalg.det(J))


def random_chart_point(rng: np.random.Generator, tag: str, margin: float = 0.02):
    """A random (chart, u, v) kept ``margin`` (relative) away from the chart edges."""
    while True:
        m = float(np.exp(rng.uniform(math.log(0.5), math.log(64)))) if tag.startswith("EM") else None
        if tag.startswith("L1_0"):
            b = float(rng.uniform(0.26, 0.49))
        elif tag.startswith("L1_"):
            b = float(rng.uniform(0.02, 0.49))
        else:
            b = float(rng.uniform(0.05, 0.95))
        chart = BoundaryChart(tag, b, m=m, root=int(rng.choice([1, -1])) if tag == "L1_0" else 1)
        dom = chart_domain_bounds(chart)
        if dom.empty:
            continue
        (u0, u1), (v0, v1) = dom.u_range, dom.v_range
        du, dv = (u1 - u0) * margin, (v1 - v0) * margin
        for _ in range(200):
            u = float(rng.uniform(u0 + du, u1 - du))
            v = float(rng.uniform(v0 + dv, v1 - dv))
            ok = all(dom.inside(u + su * du, v + sv * dv) for su in (-1, 0, 1) for sv in (-1, 0, 1))
            if ok:
                return chart, u, v


def suite_jacobian(n: int = 1000, tol: float = 1e-6, seed: int = JACOBIAN_SEED) -> SuiteReport:
    rep = SuiteReport("jacobian")
    rng = np.random.default_rng(seed)
    worst = 0.0
    where = None
    for k in range(n):
        tag = JACOBIAN_TAGS[k % len(JACOBIAN_TAGS)]
        chart, u, v = random_chart_point(rng, tag)
        zeta = complex(*rng.uniform(-1, 1, 2))
        det = _fd_jacobian(chart, zeta, u, v)
        lemma = abs(zeta) ** 2 * abs(float(h_closed(chart, u, v, check=False)))
        err = _rel(abs(det), lemma)
        if err > worst:
            worst, where = err, (tag, chart.b, chart.m, u, v)
    rep.add(f"|zeta|^2 |H| vs finite-difference det, {n} triples", worst, tol, worst_at=where)
    return rep


def suite_alternative(n: int = 50, tol: float = 1e-12) -> SuiteReport:
    rep = SuiteReport("alternative")
    hi = 1 - 1 / math.sqrt(2)
    bs = np.linspace(0.25, hi, n + 2)[1:-1]
    worst = max(_rel(closed_form.chi_plus_alternative(b), closed_form.chi_plus(b)) for b in bs)
    rep.add(f"rewritten form vs general form, {n} values", worst, tol)
    printed = max(_rel(closed_form.chi_plus_alternative(b, as_printed=True),
                       closed_form.chi_plus(b)) for b in bs)
    rep.checks[-1].detail["printed_sign_variant_error"] = printed
    return rep


SUITES: Dict[str, Callable[[], SuiteReport]] = {
    "ball": suite_ball,
    "em-threeway": suite_em_threeway,
    "l1-oracles": suite_l1_oracles,
    "offdiag": suite_offdiag,
    "smoothness": suite_smoothness,
    "bounds": suite_bounds,
    "maximize": suite_maximize,
    "indefinite": suite_indefinite,
    "jacobian": suite_jacobian,
    "alternative": suite_alternative,
}


def run_suite(name: str, n: Optional[int] = None) -> SuiteReport:
    if name not in SUITES:
        raise ParameterError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if n is not None and name in ("l1-oracles", "offdiag"):
        return SUITES[name](n_directions=n)
    return SUITES[name]()
