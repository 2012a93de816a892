"""Geodesics (extremal discs) of convex complex ellipsoids

    E(p) = {|z1|^(2 p1) + |z2|^(2 p2) < 1}

and explicit parametrizations ("charts") of the boundary of the Kobayashi
indicatrix at the points used in this package.

A geodesic through w is fixed by data (A, a, alpha0, alpha); component j is

    a_j (zeta - alpha_j)/(1 - conj(alpha_j) zeta) * R_j(zeta)^(1/p_j)   if j in A
    a_j R_j(zeta)^(1/p_j)                                              otherwise

with R_j = (1 - conj(alpha_j) zeta)/(1 - conj(alpha0) zeta).  Indices j are
1-based throughout, matching the set A.

Charts.  Every chart maps two real parameters (u, v) to a boundary point
(f, g) of the indicatrix; the whole indicatrix piece is {zeta (f, g)} for
zeta in the closed unit disc.

    EM_12, EM_2      Omega_m at (b, 0);  u = r, v = t (phase of z1)
    L1_12            l1-ball at (b, b), A = {1,2};  (x, y) with x = r + 1/r
    L1_1             l1-ball at (b, b), A = {1};    alpha2 = x + iy
    L1_0             l1-ball at (b, b), A = {};     alpha2 = x + iy, root sign
    L1_0_LIFT        the A = {} piece in coordinates (q, theta) with
                     alpha1 = q and alpha2 on the circle that solves the
                     constraints for that q; covers both roots without a fold
    L1AX_12, L1AX_2  l1-ball at (b, 0); u = r, v = t

Charts built with ``mirrored=True`` also cover the complex-conjugate half
that the diagonal l1 charts otherwise fold away (y -> -y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, FrozenSet, Optional, Tuple

import numpy as np

from .errors import ConstraintError, DomainError, ParameterError

MARGIN = 1e-12

EM_TAGS = ("EM_12", "EM_2")
L1_TAGS = ("L1_12", "L1_1", "L1_0", "L1_0_LIFT")
AXIS_TAGS = ("L1AX_12", "L1AX_2")
ALL_TAGS = EM_TAGS + L1_TAGS + AXIS_TAGS


def _clamped_arccos(x):
    """arccos for arguments that may overshoot [-1, 1] by rounding."""
    x = np.asarray(x, dtype=float)
    bad = (x > 1 + MARGIN) | (x < -1 - MARGIN)
    out = np.arccos(np.clip(x, -1.0, 1.0))
    return np.where(bad, np.nan, out)


def arccos_near_minus_one(eps):
    """arccos(-1 + eps) for 0 <= eps <= 2 without the cancellation in -1 + eps."""
    return math.pi - 2.0 * np.arcsin(np.sqrt(np.asarray(eps, dtype=float) / 2.0))


# ---------------------------------------------------------------------------
# general geodesic data

@dataclass(frozen=True)
class GeodesicParams:
    """Data (A, a, alpha0, alpha, p) of a geodesic of E(p) in C^2.

    Fields may hold numpy arrays of equal shape to describe many geodesics
    at once.
    """

    A: FrozenSet[int]
    a: Tuple[complex, complex]
    alpha0: complex
    alpha: Tuple[complex, complex]
    p: Tuple[float, float]

    def c1_residual(self):
        """|alpha0 - sum |a_j|^(2 p_j) alpha_j|"""
        s = sum(np.abs(self.a[j]) ** (2 * self.p[j]) * self.alpha[j] for j in range(2))
        return np.abs(self.alpha0 - s)

    def c2_residual(self):
        """|1 + |alpha0|^2 - sum |a_j|^(2 p_j) (1 + |alpha_j|^2)|"""
        s = sum(np.abs(self.a[j]) ** (2 * self.p[j]) * (1 + np.abs(self.alpha[j]) ** 2)
                for j in range(2))
        return np.abs(1 + np.abs(self.alpha0) ** 2 - s)

    def validate(self, tol: float = 1e-12) -> None:
        if not self.A <= {1, 2}:
            raise ConstraintError(f"A must be a subset of {{1, 2}}, got {set(self.A)}")
        if min(self.p) < 0.5:
            raise ConstraintError("exponents p_j must be >= 1/2")
        if np.any(np.abs(self.alpha0) >= 1):
            raise ConstraintError("|alpha0| must be < 1")
        for j in (1, 2):
            aj = np.abs(self.alpha[j - 1])
            if j in self.A and np.any(aj >= 1):
                raise ConstraintError(f"|alpha_{j}| must be < 1 for j in A")
            if j not in self.A and np.any(aj > 1):
                raise ConstraintError(f"|alpha_{j}| must be <= 1 for j not in A")
            if np.any(self.a[j - 1] == 0):
                raise ConstraintError(f"a_{j} must be nonzero")
        r1 = np.max(self.c1_residual())
        r2 = np.max(self.c2_residual())
        if r1 > tol or r2 > tol:
            raise ConstraintError(f"constraint residuals too large: c1={r1:.3e}, c2={r2:.3e}")


def geodesic_component(params: GeodesicParams, j: int, zeta, check: bool = True):
    """phi_j(zeta) for zeta in the closed unit disc (j = 1 or 2)."""
    if check:
        params.validate()
    if j not in (1, 2):
        raise ParameterError("component index must be 1 or 2")
    zeta = np.asarray(zeta, dtype=complex)
    aj = params.a[j - 1]
    al = params.alpha[j - 1]
    num = 1.0 - np.conj(al) * zeta
    den = 1.0 - np.conj(params.alpha0) * zeta
    # log-difference keeps the branch continuous from value 1 at zeta = 0
    with np.errstate(divide="ignore"):
        power = np.exp((np.log(num) - np.log(den)) / params.p[j - 1])
    if j in params.A:
        return aj * (zeta - al) / num * power
    return aj * power


def geodesic_derivative_at_zero(params: GeodesicParams, j: int, check: bool = True):
    """phi_j'(0) from the closed expression in the geodesic data."""
    if check:
        params.validate()
    if j not in (1, 2):
        raise ParameterError("component index must be 1 or 2")
    aj = params.a[j - 1]
    al = params.alpha[j - 1]
    pj = params.p[j - 1]
    a0c = np.conj(params.alpha0)
    if j in params.A:
        return aj * (1 + (1 / pj - 1) * np.abs(al) ** 2 - al * a0c / pj)
    return aj * (a0c - np.conj(al)) / pj


def geodesic_value_at_zero(params: GeodesicParams, j: int):
    if j in params.A:
        return -params.a[j - 1] * params.alpha[j - 1]
    return params.a[j - 1]


# ---------------------------------------------------------------------------
# charts

@dataclass(frozen=True)
class BoundaryChart:
    case_tag: str
    b: float
    m: Optional[float] = None
    root: int = 1
    mirrored: bool = False

    def __post_init__(self):
        if self.case_tag not in ALL_TAGS:
            raise ParameterError(f"unknown chart {self.case_tag!r}")
        if self.case_tag in EM_TAGS:
            if self.m is None or not self.m >= 0.5:
                raise ParameterError("EM charts need m >= 1/2")
            if not 0 < self.b < 1:
                raise ParameterError(f"EM charts need 0 < b < 1, got {self.b!r}")
        elif self.case_tag in AXIS_TAGS:
            if not 0 < self.b < 1:
                raise ParameterError(f"axis charts need 0 < b < 1, got {self.b!r}")
        elif not 0 < self.b < 0.5:
            raise ParameterError(f"diagonal l1 charts need 0 < b < 1/2, got {self.b!r}")
        if self.root not in (1, -1):
            raise ParameterError("root must be +1 or -1")

    @property
    def p(self) -> Tuple[float, float]:
        return (self.m, 1.0) if self.case_tag in EM_TAGS else (0.5, 0.5)

    @property
    def point(self) -> Tuple[float, float]:
        """The base point w of the indicatrix."""
        return (self.b, self.b) if self.case_tag in L1_TAGS else (self.b, 0.0)


@dataclass
class ChartDomain:
    """Admissible parameter region of a chart.

    ``inside(u, v)`` is the vectorized membership test; the remaining fields
    are the boundary curves the volume quadratures need, filled per chart.
    """

    chart: BoundaryChart
    u_range: Tuple[float, float]
    v_range: Tuple[float, float]
    inside: Callable
    empty: bool = False
    y0: Optional[float] = None
    x_upper: Optional[Callable] = None
    disk_center: Optional[float] = None
    disk_radius: Optional[float] = None
    r_full: Optional[float] = None
    t_cut: Optional[Callable] = None
    x_end: Optional[float] = None
    x_split: Optional[float] = None
    y_lower: Optional[Callable] = None
    r0: Optional[float] = None
    theta_min: Optional[Callable] = None
    extras: dict = field(default_factory=dict)


def _l1_consts(b: float):
    c = b / (1 - b)
    R = (1 - 2 * b) / (math.sqrt(b) * (1 - b))
    return c, R


def quarter_angle(b: float) -> float:
    """y0: pi for b <= 1/4, arccos(-1 + (4b-1)/(2b^2)) above."""
    if b <= 0.25:
        return math.pi
    return float(arccos_near_minus_one((4 * b - 1) / (2 * b * b)))


def t_of_r(b: float, r):
    """Polar half-angle at which the circle |alpha2 - b/(1-b)| = r meets |alpha2| = 1."""
    r = np.asarray(r, dtype=float)
    return _clamped_arccos((1 - 2 * b - (1 - b) ** 2 * r * r) / (2 * b * r * (1 - b)))


def r0_of_b(b: float) -> float:
    return (1 - 2 * b - b ** 1.5) / (math.sqrt(b) * (1 - b))


def lift_radius(b: float, q):
    """Radius of the circle of alpha2 solving the A = {} constraint for alpha1 = q."""
    c = b / (1 - b)
    K = (1 - 2 * b) / (b * (1 - b))
    return np.sqrt(K - (1 - c * c) * np.asarray(q, dtype=float) ** 2)


def _lift_kappa(b: float, q):
    c = b / (1 - b)
    q = np.asarray(q, dtype=float)
    rho = lift_radius(b, q)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (1 - c * c * q * q - rho * rho) / (2 * c * q * rho)


def chart_domain_bounds(chart: BoundaryChart) -> ChartDomain:
    b = chart.b
    tag = chart.case_tag
    mir = chart.mirrored
    if tag == "EM_12" or tag == "L1AX_12":
        return ChartDomain(chart, (b, 1.0), (0.0, 2 * math.pi),
                           inside=lambda u, v: (np.asarray(u) > b) & (np.asarray(u) < 1))
    if tag == "EM_2" or tag == "L1AX_2":
        return ChartDomain(chart, (0.0, 1.0), (0.0, 2 * math.pi),
                           inside=lambda u, v: (np.asarray(u) > 0) & (np.asarray(u) < 1))
    if tag == "L1_12":
        y0 = quarter_angle(b)

        def x_upper(y):
            return 1 / b + 2 * b * (1 + np.cos(y)) - 2

        def inside(x, y):
            x = np.asarray(x, dtype=float)
            y = np.asarray(y, dtype=float)
            yy = np.abs(y) if mir else y
            return (x > 2) & (yy > 0) & (yy < y0) & (x < x_upper(y))

        return ChartDomain(chart, (2.0, 1 / b + 4 * b - 2), (-y0 if mir else 0.0, y0),
                           inside=inside, y0=y0, x_upper=x_upper)
    c, R = _l1_consts(b)
    if tag == "L1_1":
        def inside(x, y):
            x = np.asarray(x, dtype=float)
            y = np.asarray(y, dtype=float)
            return (x * x + y * y < 1) & ((x - c) ** 2 + y * y < R * R)

        return ChartDomain(chart, (-1.0, 1.0), (-1.0, 1.0), inside=inside,
                           disk_center=c, disk_radius=R, r_full=(1 - 2 * b) / (1 - b),
                           t_cut=lambda r: t_of_r(b, r))
    if tag == "L1_0":
        x_end = -1 + (4 * b - 1) / (2 * b * b)
        x_split = (b ** 1.5 + 2 * b - 1) / (math.sqrt(b) * (1 - b))

        def y_lower(x):
            x = np.asarray(x, dtype=float)
            inner = np.clip(R * R - (x - c) ** 2, 0.0, None)
            return np.where(x <= x_split, 0.0, np.sqrt(inner))

        def inside(x, y):
            x = np.asarray(x, dtype=float)
            y = np.asarray(y, dtype=float)
            D = disc_D(b, x, y)
            with np.errstate(invalid="ignore"):
                Q = (b ** 1.5 * x + chart.root * np.sqrt(D)) / (math.sqrt(b) * (1 - b))
            half = (y != 0) if mir else (y > 0)
            return half & (x * x + y * y < 1) & (D >= 0) & (Q > 0) & (Q < 1)

        return ChartDomain(chart, (-1.0, 1.0), (-1.0 if mir else 0.0, 1.0), inside=inside,
                           empty=b <= 0.25, disk_center=c, disk_radius=R, x_end=x_end,
                           x_split=x_split, y_lower=y_lower, r0=r0_of_b(b))
    # L1_0_LIFT
    def theta_min(q):
        return np.arccos(np.clip(_lift_kappa(b, q), -1.0, 1.0))

    def inside(q, th):
        q = np.asarray(q, dtype=float)
        th = np.asarray(th, dtype=float)
        alpha2 = c * q + lift_radius(b, q) * np.exp(1j * th)
        half = (np.abs(th) < math.pi) & (th != 0) if mir else (th > 0) & (th < math.pi)
        return (q > 0) & (q < 1) & half & (np.abs(alpha2) < 1)

    return ChartDomain(chart, (0.0, 1.0), (-math.pi if mir else 0.0, math.pi), inside=inside,
                       empty=b <= 0.25, theta_min=theta_min)


def disc_D(b, x, y):
    return -b * (1 - b) ** 2 * (x * x + y * y) + b ** 3 * x * x + (1 - b) * (1 - 2 * b)


def em_gammas(m: float, b: float, r, piece: str):
    """(gamma1(r), gamma2(r)) for the Omega_m charts with phases set to zero."""
    r = np.asarray(r, dtype=float)
    if piece == "EM_12":
        beta = (b / r) ** (2 * m)
        g1 = b / r + b * (1 / m - 1) * r - b * r * beta / m
        g2 = np.sqrt(np.clip((1 - beta) * (1 - beta * r * r), 0.0, None))
        return g1, g2
    bm = b ** (2 * m)
    return b * (1 - bm) * r / m, np.sqrt((1 - bm) * (1 - bm * r * r))


def axis_gammas(b: float, r, piece: str):
    """(|phi1'(0)|, |phi2'(0)|) along the two l1-ball charts at (b, 0)."""
    r = np.asarray(r, dtype=float)
    if piece == "L1AX_12":
        s = r + 1 / r
        return b * s - 2 * b * b, 1 + b * b - b * s
    return 2 * b * (1 - b) * r, (1 - b) * (1 - b * r * r)


def chart_map(chart: BoundaryChart, u, v):
    """Unchecked vectorized chart map."""
    b = chart.b
    tag = chart.case_tag
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if tag in EM_TAGS:
        g1, g2 = em_gammas(chart.m, b, u, tag)
        return g1 * np.exp(1j * v), g2 + 0j * v
    if tag in AXIS_TAGS:
        g1, g2 = axis_gammas(b, u, tag)
        return g1 * np.exp(1j * v), g2 + 0j * v
    if tag == "L1_12":
        x, y = u, v
        f = 2 * b * b + b * (2 * b - x) * np.exp(-1j * y)
        g = b * x - 1 - 2j * b * b * np.sin(y)
        return f, g
    if tag == "L1_1":
        x, y = u, v
        T = 1 / b + b - 1 + 2 * b * x - (1 - b) * (x * x + y * y)
        f = 2 * b * b * (1 + x) - b * T - 2j * b * b * y
        g = 2 * b * b - 2 * b * (1 - b) * x + 2j * b * (1 - b) * y
        return f, g
    if tag == "L1_0":
        x, y = u, v
        D = disc_D(b, x, y)
        with np.errstate(invalid="ignore"):
            Q = (b ** 1.5 * x + chart.root * np.sqrt(D)) / (math.sqrt(b) * (1 - b))
        f = 2 * b * ((b - 1) * Q + b * x) - 2j * b * b * y
        g = 2 * b * (b * Q + (b - 1) * x) + 2j * b * (1 - b) * y
        return f, g
    # L1_0_LIFT
    q, th = u, v
    c = b / (1 - b)
    alpha2c = np.conj(c * q + lift_radius(b, q) * np.exp(1j * th))
    return 2 * b * ((b - 1) * q + b * alpha2c), 2 * b * (b * q + (b - 1) * alpha2c)


def chart_point(chart: BoundaryChart, u, v=0.0, check: bool = True):
    """Boundary point (f, g) of the indicatrix at chart parameters (u, v)."""
    if check:
        dom = chart_domain_bounds(chart)
        if dom.empty or not np.all(dom.inside(u, v)):
            raise DomainError(f"parameters ({u!r}, {v!r}) outside the {chart.case_tag} chart "
                              f"at b={chart.b!r}")
    f, g = chart_map(chart, u, v)
    if np.ndim(f) == 0:
        return complex(f), complex(g)
    return f, g


def _root_below_one(T):
    """The root in (0, 1) of s + 1/s = T (T > 2)."""
    return (T - np.sqrt(T * T - 4)) / 2


def chart_params(chart: BoundaryChart, u, v=0.0) -> GeodesicParams:
    """Geodesic data whose derivative at 0 is ``chart_point(chart, u, v)``."""
    dom = chart_domain_bounds(chart)
    if dom.empty or not np.all(dom.inside(u, v)):
        raise DomainError(f"parameters ({u!r}, {v!r}) outside the {chart.case_tag} chart")
    b = chart.b
    tag = chart.case_tag
    p = chart.p
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if tag in EM_TAGS or tag in AXIS_TAGS:
        r, t = u, v
        alpha1 = -r * np.exp(-1j * t)
        if tag in EM_TAGS:
            g1, g2 = em_gammas(chart.m, b, r, tag)
            w = b ** (2 * chart.m)
        else:
            g1, g2 = axis_gammas(b, r, tag)
            w = b
        zero = np.zeros_like(alpha1)
        if tag.endswith("_12"):
            a1 = -b / alpha1
            alpha0 = w * alpha1 / np.abs(alpha1) ** (2 * p[0])
            return GeodesicParams(frozenset({1, 2}), (a1, g2 + 0j), alpha0, (alpha1, zero), p)
        return GeodesicParams(frozenset({2}), (b + 0j * r, g2 + 0j), w * alpha1,
                              (alpha1, zero), p)
    if tag == "L1_12":
        x, y = u, v
        r = _root_below_one(x)
        rho = _root_below_one(1 / b + 2 * b * (1 + np.cos(y)) - x)
        alpha1 = r * np.exp(1j * y)
        alpha2 = rho + 0j
        return GeodesicParams(frozenset({1, 2}), (-b / alpha1, -b / alpha2),
                              b * (np.exp(1j * y) + 1), (alpha1, alpha2), p)
    if tag == "L1_1":
        x, y = u, v
        T = 1 / b + b - 1 + 2 * b * x - (1 - b) * (x * x + y * y)
        alpha1 = _root_below_one(T) + 0j
        alpha2 = x + 1j * y
        return GeodesicParams(frozenset({1}), (-b / alpha1, b + 0j * x), b * (1 + alpha2),
                              (alpha1, alpha2), p)
    if tag == "L1_0":
        x, y = u, v
        D = disc_D(b, x, y)
        alpha1 = (b ** 1.5 * x + chart.root * np.sqrt(D)) / (math.sqrt(b) * (1 - b)) + 0j
        alpha2 = x + 1j * y
    else:
        c = b / (1 - b)
        alpha1 = u + 0j
        alpha2 = c * u + lift_radius(b, u) * np.exp(1j * v)
    bb = b + 0j * np.real(alpha1)
    return GeodesicParams(frozenset(), (bb, bb), b * (alpha1 + alpha2), (alpha1, alpha2), p)


def lift_to_plane(b: float, q, theta):
    """(x, y, root) of the A = {} chart point with lifted coordinates (q, theta)."""
    c = b / (1 - b)
    q = np.asarray(q, dtype=float)
    rho = lift_radius(b, q)
    x = c * q + rho * np.cos(theta)
    y = rho * np.sin(theta)
    # sqrt(D) = sqrt(b)(1-b) q - b^(3/2) x for the root that produced q
    sqrt_d = math.sqrt(b) * (1 - b) * q - b ** 1.5 * x
    root = np.where(sqrt_d >= 0, 1, -1)
    return x, y, root


def lift_jacobian(b: float, q, theta):
    """Determinant of (q, theta) -> (x, y) for the lifted A = {} chart."""
    c = b / (1 - b)
    q = np.asarray(q, dtype=float)
    rho = lift_radius(b, q)
    drho = -q * (1 - c * c) / rho
    return rho * (c * np.cos(theta) + drho)
