"""Real Jacobian of maps (zeta, z) -> zeta (f(z), g(z)).

For holomorphic zeta and smooth f, g of one complex variable z the real
Jacobian determinant is |zeta|^2 H(z) with

    H = |f|^2 (|g_zbar|^2 - |g_z|^2) + |g|^2 (|f_zbar|^2 - |f_z|^2)
        + 2 Re( f conj(g) (conj(f_z) g_z - conj(f_zbar) g_zbar) ).

``h_closed`` gives H in closed form for each boundary chart, in the chart's
own real coordinates (z = u + i v).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError
from .geodesics import (BoundaryChart, disc_D, axis_gammas, chart_domain_bounds, chart_point,
                        lift_jacobian, lift_to_plane)


@dataclass(frozen=True)
class WirtingerData:
    f: complex
    g: complex
    f_z: complex
    f_zbar: complex
    g_z: complex
    g_zbar: complex

    def __post_init__(self):
        vals = np.array([self.f, self.g, self.f_z, self.f_zbar, self.g_z, self.g_zbar],
                        dtype=object)
        for x in vals:
            if not np.all(np.isfinite(np.asarray(x, dtype=complex))):
                raise ParameterError("WirtingerData entries must be finite")

    def scaled(self, c: float) -> "WirtingerData":
        return WirtingerData(*(c * x for x in (self.f, self.g, self.f_z, self.f_zbar,
                                               self.g_z, self.g_zbar)))


def h_factor(d: WirtingerData):
    f, g = d.f, d.g
    cross = f * np.conj(g) * (np.conj(d.f_z) * d.g_z - np.conj(d.f_zbar) * d.g_zbar)
    return (np.abs(f) ** 2 * (np.abs(d.g_zbar) ** 2 - np.abs(d.g_z) ** 2)
            + np.abs(g) ** 2 * (np.abs(d.f_zbar) ** 2 - np.abs(d.f_z) ** 2)
            + 2 * np.real(cross))


def wirtinger_numeric(func, u: float, v: float, step: float | None = None) -> WirtingerData:
    """Wirtinger data of z -> func(Re z, Im z) = (f, g) by central differences."""
    h = step if step is not None else 1e-6 * max(1.0, abs(complex(u, v)))
    f, g = func(u, v)
    fu1, gu1 = func(u + h, v)
    fu0, gu0 = func(u - h, v)
    fv1, gv1 = func(u, v + h)
    fv0, gv0 = func(u, v - h)
    fx, gx = (fu1 - fu0) / (2 * h), (gu1 - gu0) / (2 * h)
    fy, gy = (fv1 - fv0) / (2 * h), (gv1 - gv0) / (2 * h)
    return WirtingerData(f, g, (fx - 1j * fy) / 2, (fx + 1j * fy) / 2,
                         (gx - 1j * gy) / 2, (gx + 1j * gy) / 2)


def h_numeric(chart: BoundaryChart, u: float, v: float) -> float:
    """H from the lemma with numerically differentiated chart_point."""
    return float(h_factor(wirtinger_numeric(lambda a, c: chart_point(chart, a, c, check=False),
                                            u, v)))


def _h_em12(m, b, r):
    beta = (b / r) ** (2 * m)
    r2 = r * r
    return (-(b * b / (m * m)) / r ** 3
            * (beta * (-m * r2 + m - 1) + 1)
            * ((m - 1) * r2 + m - (2 * m - 1) * r2 * beta)
            * (r2 * beta + (m - 1) * r2 - m))


def _h_axis(b, r, tag):
    g1, g2 = axis_gammas(b, r, tag)
    if tag == "L1AX_12":
        d1 = b * (1 - 1 / (r * r))
        d2 = -d1
    else:
        d1 = 2 * b * (1 - b) + 0 * r
        d2 = -2 * b * (1 - b) * r
    return g1 * g2 * (g1 * d2 - d1 * g2)


def _h_l1_12(b, x, y):
    cy = np.cos(y)
    return (b * b * (1 - 2 * b * b * (cy + 1))
            * (-b * x * x + (1 + 2 * b * b * (cy + 1)) * (x - 2 * b)
               + 2 * b ** 3 * (1 - np.cos(2 * y))))


def _h_l1_1(b, x, y):
    s = x * x + y * y
    return (4 * (1 - b) * b * b
            * (b * b * (1 + 2 * x) - (1 - b) * (1 + b * s))
            * (-1 + 2 * b + b ** 3 - 2 * b * b * (1 - b) * x + b * (1 - b) ** 2 * s))


def _h_l1_0(b, x, y, root):
    D = disc_D(b, x, y)
    if np.any(D <= 0):
        raise DomainError("D <= 0: the A = {} integrand is singular here (integrable edge)")
    return 16 * b ** 3 * (1 - 2 * b) ** 3 / (1 - b) * (1 + root * b ** 1.5 * x / np.sqrt(D))


def h_closed(chart: BoundaryChart, u, v=0.0, check: bool = True):
    """Closed-form H in the chart coordinates (u, v)."""
    if check:
        dom = chart_domain_bounds(chart)
        if dom.empty or not np.all(dom.inside(u, v)):
            raise DomainError(f"({u!r}, {v!r}) outside the {chart.case_tag} chart")
    b = chart.b
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    tag = chart.case_tag
    if tag == "EM_12":
        return _h_em12(chart.m, b, u) + 0 * v
    if tag == "EM_2":
        m = chart.m
        return -b * b * (1 - b ** (2 * m)) ** 3 * u / (m * m) + 0 * v
    if tag in ("L1AX_12", "L1AX_2"):
        return _h_axis(b, u, tag) + 0 * v
    if tag == "L1_12":
        return _h_l1_12(b, u, v)
    if tag == "L1_1":
        return _h_l1_1(b, u, v)
    if tag == "L1_0":
        return _h_l1_0(b, u, v, chart.root)
    # lifted A = {} chart: plane H times the coordinate change
    x, y, root = lift_to_plane(b, u, v)
    return _h_l1_0(b, x, y, root) * lift_jacobian(b, u, v)


def lift_density(b: float, q):
    """|H| |det d(x,y)/d(q,theta)| on the lifted chart; equals C q exactly."""
    return 16 * b ** 3 * (1 - 2 * b) ** 3 / (1 - b) * np.asarray(q, dtype=float)


def em_h_from_gammas(m: float, b: float, r: float, piece: str, step: float = 1e-6) -> float:
    """gamma1 gamma2 (gamma1 gamma2' - gamma1' gamma2) with finite-difference gamma'."""
    from .geodesics import em_gammas
    g1, g2 = em_gammas(m, b, r, piece)
    p1, p2 = em_gammas(m, b, r + step, piece)
    q1, q2 = em_gammas(m, b, r - step, piece)
    d1 = (p1 - q1) / (2 * step)
    d2 = (p2 - q2) / (2 * step)
    return float(g1 * g2 * (g1 * d2 - d1 * g2))

