"""Independent numerical volumes of Kobayashi indicatrices.

param    integrate |H| over the chart parameter domains (Jacobian lemma plus
         the |zeta|^2 disc integral pi/2)
shadow   Omega_m at (b, 0) is Reinhardt: 4 pi^2 times the integral of u v
         over the modulus shadow, done as a line integral along the
         boundary curve
gauge    balanced-body formula vol = (2 pi^2 / 4) mean(r(xi)^4) over
         quasi-uniform directions xi on S^3; r(xi) from Newton solves of
         f xi2 - g xi1 = 0 on the boundary charts

plus numeric checks of the printed antiderivatives used for the l1 pieces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import mpmath
import numpy as np
from scipy.optimize import brentq
from scipy.spatial import cKDTree
from scipy.stats import qmc

from .domains import EllipsoidSpec, VolumeResult
from .errors import CoverageError, GeometryError, ParameterError
from .geodesics import (BoundaryChart, chart_map, axis_gammas, chart_domain_bounds, em_gammas,
                        lift_radius, quarter_angle, t_of_r)
from .jacobian import h_closed, lift_density
from .quadrature import QuadratureSpec, integrate_1d, integrate_2d_iterated

PARAM_SPEC = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-12, max_subdivisions=4000)
HALTON_SEED = 20150501
GAUGE_RESIDUAL = 1e-10


# ---------------------------------------------------------------------------
# parameter-space integration

def _em_param(m: float, b: float, qs: QuadratureSpec):
    c12 = BoundaryChart("EM_12", b, m)
    c2 = BoundaryChart("EM_2", b, m)
    i12, e12 = integrate_1d(lambda r: np.abs(h_closed(c12, r, check=False)), b, 1.0,
                            qs.with_singular(True, False))
    i2, e2 = integrate_1d(lambda r: np.abs(h_closed(c2, r, check=False)), 0.0, 1.0, qs)
    pi2 = math.pi ** 2
    return {"I12": pi2 * i12, "I2": pi2 * i2}, pi2 * (e12 + e2)


def _l1_i12(b: float, qs: QuadratureSpec):
    ch = BoundaryChart("L1_12", b)
    y0 = quarter_angle(b)

    def inner(y, x):
        return np.abs(h_closed(ch, x, y, check=False))

    val, err = integrate_2d_iterated(
        inner, (0.0, y0), lambda y: (2.0, 1 / b + 2 * b * (1 + math.cos(y)) - 2.0),
        qs.with_singular(False, b > 0.25))
    return math.pi * val, math.pi * err


def _l1_i1(b: float, qs: QuadratureSpec):
    ch = BoundaryChart("L1_1", b)
    if b <= 0.25:
        # the whole unit disc; H is even in y
        def f(rho, th):
            return rho * np.abs(h_closed(ch, rho * np.cos(th), rho * np.sin(th), check=False))

        val, err = integrate_2d_iterated(f, (0.0, 1.0), lambda rho: (0.0, math.pi), qs)
        return math.pi * val, math.pi * err
    dom = chart_domain_bounds(ch)
    c, R, r1 = dom.disk_center, dom.disk_radius, dom.r_full

    def f(r, t):
        return r * np.abs(h_closed(ch, c + r * np.cos(t), r * np.sin(t), check=False))

    def bounds(r):
        return (0.0 if r <= r1 else float(t_of_r(b, r)), math.pi)

    val, err = integrate_2d_iterated(f, (0.0, R), bounds, qs, outer_points=(r1,))
    return math.pi * val, math.pi * err


def lift_theta_min(b: float, q):
    c = b / (1 - b)
    q = np.asarray(q, dtype=float)
    rho = lift_radius(b, q)
    with np.errstate(divide="ignore", invalid="ignore"):
        kappa = (1 - c * c * q * q - rho * rho) / (2 * c * q * rho)
    return np.arccos(np.clip(kappa, -1.0, 1.0)), kappa


def _lift_kinks(b: float) -> List[float]:
    """q where the admissible theta-range starts, ends or becomes a full circle."""
    qs = np.linspace(1e-9, 1 - 1e-9, 4001)
    _, kappa = lift_theta_min(b, qs)
    pts = []
    for level in (1.0, -1.0):
        d = kappa - level
        for i in np.nonzero(np.sign(d[:-1]) != np.sign(d[1:]))[0]:
            pts.append(brentq(lambda q: float(lift_theta_min(b, q)[1]) - level,
                              qs[i], qs[i + 1], xtol=1e-15))
    return sorted(pts)


def _l1_i0(b: float, qs: QuadratureSpec):
    """A = {} piece on the lifted chart: |H| dx dy = C q dq dtheta."""
    if b <= 0.25:
        return 0.0, 0.0

    def f(q):
        th, _ = lift_theta_min(b, q)
        return lift_density(b, q) * 2 * (math.pi - th)

    val, err = integrate_1d(f, 0.0, 1.0, qs, points=_lift_kinks(b))
    return math.pi / 2 * val, math.pi / 2 * err


def l1_i0_plane(b: float, qs: QuadratureSpec = PARAM_SPEC):
    """A = {} piece integrated in alpha2 = x + iy over the region bounded by y2(x).

    Only the root with the plus sign contributes when b < (3 - sqrt 5)/2; this
    route is a cross-check of the lifted chart there.
    """
    if not 0.25 < b < (3 - math.sqrt(5)) / 2:
        raise ParameterError("the plane route needs 1/4 < b < (3 - sqrt 5)/2")
    ch = BoundaryChart("L1_0", b)
    dom = chart_domain_bounds(ch)

    def f(x, y):
        return np.abs(h_closed(ch, x, y, check=False))

    def bounds(x):
        return (float(dom.y_lower(x)), math.sqrt(max(0.0, 1 - x * x)))

    val, err = integrate_2d_iterated(f, (-1.0, dom.x_end), bounds, qs.with_singular(True, True),
                                     outer_points=(dom.x_split,))
    # the integral covers y > 0; conjugation doubles it, the disc factor halves it
    return math.pi * val, math.pi * err


def volume_param_integral(spec: EllipsoidSpec, b: float,
                          qspec: QuadratureSpec = PARAM_SPEC) -> VolumeResult:
    """Volume from the chart parametrizations by adaptive quadrature of |H|."""
    if spec.kind == "em":
        if not 0 < b < 1:
            raise ParameterError(f"b must lie in (0, 1), got {b!r}")
        parts, err = _em_param(spec.m, b, qspec)
        value = math.fsum(parts.values())
        return VolumeResult(value, "param", b, spec, "EM", err, meta=parts)
    if not 0 < b < 0.5:
        raise ParameterError(f"b must lie in (0, 1/2), got {b!r}")
    i12, e12 = _l1_i12(b, qspec)
    i1, e1 = _l1_i1(b, qspec)
    i0, e0 = _l1_i0(b, qspec)
    value = math.fsum([i12, 2 * i1, i0])
    return VolumeResult(value, "param", b, spec, "BELOW_QUARTER" if b <= 0.25 else "ABOVE_QUARTER",
                        e12 + 2 * e1 + e0, meta={"I12": i12, "I1": i1, "I0": i0})


# ---------------------------------------------------------------------------
# Reinhardt shadow

def _graded_curve(fun, n: int):
    """Sample sigma in [0, 1] so points are evenly spread in arc length + sigma."""
    dense = np.linspace(0.0, 1.0, 8 * n + 1)
    u, v = fun(dense)
    seg = np.hypot(np.diff(u), np.diff(v))
    s = np.concatenate([[0.0], np.cumsum(seg)])
    s = s / s[-1] + dense  # keep some density where the curve is short
    target = np.linspace(0.0, s[-1], n + 1)
    sig = np.interp(target, s, dense)
    return fun(sig)


def _shadow_integral(u, v) -> float:
    """Integral of u v^2/2 du along the polyline; exact per linear segment (Simpson)."""
    du = np.diff(u)
    um = 0.5 * (u[1:] + u[:-1])
    vm = 0.5 * (v[1:] + v[:-1])
    vals = (u[:-1] * v[:-1] ** 2 + 4 * um * vm ** 2 + u[1:] * v[1:] ** 2) / 6 * du / 2
    return math.fsum(np.sort(vals))


def shadow_curve(m: float, b: float, n: int):
    """Boundary of the modulus shadow, from the z2-axis to the z1-axis."""
    def piece2(sig):
        return em_gammas(m, b, sig, "EM_2")

    def piece12(sig):
        # sigma 0 -> r = 1, sigma 1 -> r = b; r - b ~ (1-sigma)^2 near the end
        r = b ** (1 - (1 - sig) ** 2)
        return em_gammas(m, b, r, "EM_12")

    u2, v2 = _graded_curve(piece2, n)
    u12, v12 = _graded_curve(piece12, n)
    u = np.concatenate([u2, u12[1:]])
    v = np.concatenate([v2, v12[1:]])
    return u, v


def volume_reinhardt_shadow(m: float, b: float, n: int = 10000) -> VolumeResult:
    """4 pi^2 times the integral of u v over the shadow, Richardson in n."""
    if not m >= 0.5:
        raise ParameterError(f"m must be >= 1/2, got {m!r}")
    if not 0 < b < 1:
        raise ParameterError(f"b must lie in (0, 1), got {b!r}")
    vals = []
    for k in (n, 2 * n):
        u, v = shadow_curve(m, b, k)
        if np.any(np.diff(u) < -1e-15) or np.any(np.diff(v) > 1e-15):
            raise GeometryError(f"shadow boundary of Omega_{m:g} at b={b} is not monotone")
        vals.append(4 * math.pi ** 2 * _shadow_integral(u, v))
    # chord error is O(n^-2)
    value = vals[1] + (vals[1] - vals[0]) / 3
    return VolumeResult(value, "shadow", b, EllipsoidSpec.omega(m), "EM",
                        abs(vals[1] - vals[0]) / 3, meta={"n": n})


# ---------------------------------------------------------------------------
# gauge Monte Carlo

@dataclass(frozen=True)
class GaugeSolve:
    direction: Tuple[complex, complex]
    radius: float
    chart_used: str
    residual: float


def sphere_directions(n: int, seed: int = HALTON_SEED):
    """n quasi-uniform points of S^3 in C^2 (scrambled Halton, fixed seed)."""
    pts = qmc.Halton(d=3, scramble=True, seed=seed).random(n)
    x1 = np.sqrt(1 - pts[:, 0]) * np.exp(2j * math.pi * pts[:, 1])
    x2 = np.sqrt(pts[:, 0]) * np.exp(2j * math.pi * pts[:, 2])
    return x1, x2


def _hopf(f, g):
    n2 = np.abs(f) ** 2 + np.abs(g) ** 2
    fg = f * np.conj(g)
    return np.stack([2 * fg.real / n2, 2 * fg.imag / n2, (np.abs(f) ** 2 - np.abs(g) ** 2) / n2],
                    axis=-1)


class _GaugeChart:
    """One boundary chart as seen by the gauge solver."""

    def __init__(self, name: str, chart: BoundaryChart, swap: bool = False, periodic=None):
        self.name = name
        self.chart = chart
        self.swap = swap
        self.dom = chart_domain_bounds(chart)
        self.periodic = periodic  # (lo, hi) of a periodic v coordinate
        self.u_range, self.v_range = self.dom.u_range, self.dom.v_range

    def to_chart(self, u, v):
        return u, v

    def fg(self, u, v):
        f, g = chart_map(self.chart, *self.to_chart(u, v))
        return (g, f) if self.swap else (f, g)

    def wrap(self, v):
        if self.periodic is None:
            return v
        lo, hi = self.periodic
        return lo + np.mod(v - lo, hi - lo)

    def inside(self, u, v):
        return self.dom.inside(*self.to_chart(u, v))

    def seeds(self, n: int):
        (u0, u1), (v0, v1) = self.u_range, self.v_range
        uu = u0 + (u1 - u0) * (np.arange(n) + 0.5) / n
        vv = v0 + (v1 - v0) * (np.arange(n) + 0.5) / n
        U, V = np.meshgrid(uu, vv, indexing="ij")
        U, V = U.ravel(), V.ravel()
        ok = self.inside(U, V)
        return U[ok], V[ok]


class _FoldFreeChart(_GaugeChart):
    """The A = {1,2} chart with x = 2 + (x_upper(y) - 2) sin^2(phi).

    In x the chart folds like a square root at both edges (|alpha1| -> 1 at
    x = 2, alpha2 -> 1 at x_upper), which stalls Newton next to the seams.
    """

    def __init__(self, b: float):
        super().__init__("L1_12", BoundaryChart("L1_12", b, mirrored=True),
                         periodic=(-math.pi, math.pi) if b <= 0.25 else None)
        self.u_range = (0.0, math.pi / 2)

    def to_chart(self, u, v):
        width = self.dom.x_upper(v) - 2.0
        return 2.0 + width * np.sin(u) ** 2, v

    def inside(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return ((u > 0) & (u < math.pi / 2) & (np.abs(v) < self.dom.y0)
                & (self.dom.x_upper(v) > 2.0))


def _l1_gauge_charts(b: float) -> List[_GaugeChart]:
    charts = [
        _FoldFreeChart(b),
        _GaugeChart("L1_1", BoundaryChart("L1_1", b)),
        _GaugeChart("L1_2", BoundaryChart("L1_1", b), swap=True),
    ]
    if b > 0.25:
        charts.append(_GaugeChart("L1_0", BoundaryChart("L1_0_LIFT", b, mirrored=True),
                                  periodic=(-math.pi, math.pi)))
    return charts


def _residual(ch: _GaugeChart, u, v, x1, x2):
    f, g = ch.fg(u, v)
    nrm = np.sqrt(np.abs(f) ** 2 + np.abs(g) ** 2)
    return (f * x2 - g * x1) / nrm, f, g


def _newton(ch: _GaugeChart, u, v, x1, x2, iters: int = 60):
    """Damped Newton on Re/Im of the normalized residual; vectorized."""
    u = u.copy()
    v = v.copy()
    G, _, _ = _residual(ch, u, v, x1, x2)
    res = np.abs(G)
    active = np.isfinite(res)
    for _ in range(iters):
        act = active & (res > 1e-14)
        if not np.any(act):
            break
        idx = np.nonzero(act)[0]
        ua, va, a1, a2 = u[idx], v[idx], x1[idx], x2[idx]
        hu = 1e-7 * np.maximum(1.0, np.abs(ua))
        hv = 1e-7 * np.maximum(1.0, np.abs(va))
        g0 = G[idx]
        gu = (_residual(ch, ua + hu, va, a1, a2)[0] - _residual(ch, ua - hu, va, a1, a2)[0]) / (2 * hu)
        gv = (_residual(ch, ua, va + hv, a1, a2)[0] - _residual(ch, ua, va - hv, a1, a2)[0]) / (2 * hv)
        j11, j12, j21, j22 = gu.real, gv.real, gu.imag, gv.imag
        det = j11 * j22 - j12 * j21
        with np.errstate(divide="ignore", invalid="ignore"):
            du = -(j22 * g0.real - j12 * g0.imag) / det
            dv = -(-j21 * g0.real + j11 * g0.imag) / det
        bad = ~np.isfinite(du) | ~np.isfinite(dv)
        du[bad] = 0.0
        dv[bad] = 0.0
        lam = np.ones_like(du)
        done = np.zeros(idx.size, dtype=bool)
        new_u = ua.copy()
        new_v = va.copy()
        new_g = g0.copy()
        for _ in range(30):
            tu = ua + lam * du
            tv = ch.wrap(va + lam * dv)
            with np.errstate(invalid="ignore", divide="ignore"):
                inside = ch.inside(tu, tv)
                tg = np.where(inside, _residual(ch, tu, tv, a1, a2)[0], np.nan)
            good = ~done & inside & np.isfinite(tg) & (np.abs(tg) < np.abs(g0))
            new_u[good], new_v[good], new_g[good] = tu[good], tv[good], tg[good]
            done |= good
            if done.all():
                break
            lam = np.where(done, lam, lam / 2)
        stalled = ~done | bad
        u[idx], v[idx], G[idx] = new_u, new_v, new_g
        res[idx] = np.abs(new_g)
        active[idx[stalled]] = False
    _, f, g = _residual(ch, u, v, x1, x2)
    return u, v, res, np.sqrt(np.abs(f) ** 2 + np.abs(g) ** 2)


def _gauge_solve_arrays(charts: Sequence[_GaugeChart], x1, x2, k: int, grid: int):
    """Newton from the k Hopf-nearest seeds of every chart; keep the largest radius."""
    n = len(x1)
    target = _hopf(x1, x2)
    radius = np.full(n, -np.inf)
    used = np.full(n, -1)
    resid = np.full(n, np.inf)
    hits = np.zeros((n, len(charts)), dtype=bool)
    rvals = np.full((n, len(charts)), np.nan)
    for ci, ch in enumerate(charts):
        su, sv = ch.seeds(grid)
        if su.size == 0:
            continue
        kk = min(k, su.size)
        _, nb = cKDTree(_hopf(*ch.fg(su, sv))).query(target, k=kk)
        nb = nb.reshape(n, kk)
        dirs = np.repeat(np.arange(n), kk)
        s = nb.ravel()
        _, _, res, r = _newton(ch, su[s], sv[s], x1[dirs], x2[dirs])
        ok = res < GAUGE_RESIDUAL
        best = np.full(n, -np.inf)
        np.maximum.at(best, dirs[ok], r[ok])
        found = best > -np.inf
        hits[found, ci] = True
        rvals[found, ci] = best[found]
        better = found & (best > radius)
        radius[better] = best[better]
        used[better] = ci
        rmin = np.full(n, np.inf)
        np.minimum.at(rmin, dirs[ok], res[ok])
        resid[better] = rmin[better]
    return radius, used, resid, hits, rvals


def _gauge_radii(charts, x1, x2):
    radius, used, resid, hits, rvals = _gauge_solve_arrays(charts, x1, x2, k=1, grid=70)
    failed = np.nonzero(used < 0)[0]
    if failed.size:
        r2, u2, s2, h2, v2 = _gauge_solve_arrays(charts, x1[failed], x2[failed], k=16, grid=160)
        radius[failed], used[failed], resid[failed] = r2, u2, s2
        hits[failed], rvals[failed] = h2, v2
    return radius, used, resid, hits, rvals


def gauge_solve(b: float, directions: Sequence[Tuple[complex, complex]]) -> List[GaugeSolve]:
    """Gauge radius of the l1 indicatrix at (b, b) along the given directions."""
    if not 0 < b < 0.5:
        raise ParameterError(f"b must lie in (0, 1/2), got {b!r}")
    d = np.asarray(directions, dtype=complex).reshape(-1, 2)
    d = d / np.linalg.norm(d, axis=1)[:, None]
    charts = _l1_gauge_charts(b)
    radius, used, resid, _, _ = _gauge_radii(charts, d[:, 0], d[:, 1])
    out = []
    for i in range(len(d)):
        name = charts[used[i]].name if used[i] >= 0 else "none"
        out.append(GaugeSolve((complex(d[i, 0]), complex(d[i, 1])),
                              float(radius[i]) if used[i] >= 0 else math.nan, name,
                              float(resid[i])))
    return out


def volume_gauge_l1(b: float, n_directions: int = 100000, max_fail_fraction: float = 1e-3,
                    seed: int = HALTON_SEED) -> VolumeResult:
    """Gauge Monte Carlo volume of the l1 indicatrix at (b, b)."""
    if not 0 < b < 0.5:
        raise ParameterError(f"b must lie in (0, 1/2), got {b!r}")
    if n_directions < 10000:
        raise ParameterError("n_directions must be >= 10^4")
    x1, x2 = sphere_directions(n_directions, seed)
    charts = _l1_gauge_charts(b)
    radius, used, _, hits, rvals = _gauge_radii(charts, x1, x2)
    ok = used >= 0
    n_fail = int(np.count_nonzero(~ok))
    if n_fail > max_fail_fraction * n_directions:
        raise CoverageError(f"{n_fail} of {n_directions} directions had no chart solution",
                            failed=n_fail, total=n_directions)
    r4 = radius[ok] ** 4
    value = 2 * math.pi ** 2 / 4 * math.fsum(r4) / r4.size
    err = 2 * math.pi ** 2 / 4 * float(np.std(r4)) / math.sqrt(r4.size)
    multi = hits.sum(axis=1) > 1
    spread = np.nanmax(rvals, axis=1) - np.nanmin(rvals, axis=1)
    meta = {
        "n_directions": n_directions,
        "failed": n_fail,
        "charts": {ch.name: int(np.count_nonzero(used == i)) for i, ch in enumerate(charts)},
        "overlap": int(np.count_nonzero(multi & (spread <= 1e-8 * radius))),
        "multi_solution_conflicts": int(np.count_nonzero(multi & (spread > 1e-8 * radius))),
    }
    return VolumeResult(value, "gauge", b, EllipsoidSpec.l1(),
                        "BELOW_QUARTER" if b <= 0.25 else "ABOVE_QUARTER", err, meta=meta)


def axis_gauge_radius(b: float, ratio):
    """Radius of the l1 indicatrix at (b, 0) along moduli |xi1| : |xi2| = ratio : 1.

    The indicatrix is Reinhardt, so only the moduli of a direction matter; the
    boundary point on the ray is found by bisection in r along the two charts.
    """
    ratio = np.asarray(ratio, dtype=float)
    out = np.empty_like(ratio)
    g1, g2 = axis_gammas(b, 1.0, "L1AX_2")
    split = g1 / g2  # the two pieces meet at r = 1
    for tag, lo, hi, mask in (("L1AX_2", 0.0, 1.0, ratio <= split),
                              ("L1AX_12", 1.0, b, ratio > split)):
        if not np.any(mask):
            continue
        q = ratio[mask]
        a = np.full(q.shape, lo)
        c = np.full(q.shape, hi)
        for _ in range(200):
            mid = 0.5 * (a + c)
            u, v = axis_gammas(b, mid, tag)
            below = u < q * v
            a = np.where(below, mid, a)
            c = np.where(below, c, mid)
        u, v = axis_gammas(b, 0.5 * (a + c), tag)
        out[mask] = np.hypot(u, v)
    return out


def volume_gauge_l1_axis(b: float, n_directions: int = 100000,
                         seed: int = HALTON_SEED) -> VolumeResult:
    """Gauge Monte Carlo volume of the l1 indicatrix at (b, 0)."""
    if not 0 < b < 1:
        raise ParameterError(f"b must lie in (0, 1), got {b!r}")
    x1, x2 = sphere_directions(n_directions, seed)
    with np.errstate(divide="ignore"):
        ratio = np.abs(x1) / np.abs(x2)
    ratio = np.minimum(ratio, 1e300)
    r = axis_gauge_radius(b, ratio) / np.hypot(np.abs(x1), np.abs(x2))
    r4 = r ** 4
    value = 2 * math.pi ** 2 / 4 * math.fsum(r4) / r4.size
    err = 2 * math.pi ** 2 / 4 * float(np.std(r4)) / math.sqrt(r4.size)
    return VolumeResult(value, "gauge", b, EllipsoidSpec.l1(), "OFF_DIAGONAL", err,
                        meta={"n_directions": n_directions})


# ---------------------------------------------------------------------------
# printed antiderivatives

def _S(a, v):
    return mpmath.sqrt(-a * a + 2 * a * v * v - v ** 4 + v * v)


def antiderivative_v_arccos(a, v):
    s = _S(a, v)
    return (s / 4 + (4 * a + 1) / 8 * mpmath.atan((2 * a - 2 * v * v + 1) / (2 * s))
            + v * v / 2 * mpmath.acos(a / v - v))


def antiderivative_v5_arccos(a, v):
    s = _S(a, v)
    return ((15 + 78 * a + 80 * a * a + (10 + 32 * a) * v * v + 8 * v ** 4) * s / 288
            + (5 + 36 * a + 72 * a * a + 32 * a ** 3) / 192
            * mpmath.atan((2 * a - 2 * v * v + 1) / (2 * s))
            + v ** 6 / 6 * mpmath.acos(a / v - v))


def antiderivative_arctan(a, v):
    w = mpmath.sqrt(-a * v * v + v - 1)
    return (w / (2 * v) - mpmath.atan(w) / v
            - a / 2 * mpmath.atan(2 * a * w / (-a * v - 2 * a + 1))
            + (2 * a - 1) / 4 * mpmath.atan((v - 2) * w / (2 * a * v * v - 2 * v + 2)))


@dataclass
class AntiderivativeCheck:
    name: str
    a: float
    interval: Tuple[float, float]
    max_deviation: float
    n_points: int
    passed: bool


@dataclass
class DefiniteCheck:
    name: str
    quadrature: float
    printed: float
    rel_error: float
    passed: bool


@dataclass
class IndefiniteReport:
    b: float
    antiderivatives: List[AntiderivativeCheck] = field(default_factory=list)
    definite: List[DefiniteCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.antiderivatives) and all(c.passed for c in self.definite)


def _check_antiderivative(name, F, integrand, a, lo, hi, n, tol):
    worst = 0.0
    # interior points, kept off the branch points of the arctan terms
    for k in range(n):
        v = mpmath.mpf(lo) + (mpmath.mpf(hi) - lo) * (k + 0.5) / n
        d = mpmath.diff(lambda t: F(a, t), v)
        worst = max(worst, float(abs(d - integrand(v))))
    return AntiderivativeCheck(name, float(a), (float(lo), float(hi)), worst, n, worst < tol)


def verify_indefinite_integrals(b: float, n_points: int = 100, tol: float = 1e-8,
                                rel_tol: float = 1e-9) -> IndefiniteReport:
    """Differentiate each printed antiderivative and recompute the definite displays."""
    if not 0.25 < b < 0.5:
        raise ParameterError("the printed antiderivatives are used for 1/4 < b < 1/2")
    old = mpmath.mp.dps
    mpmath.mp.dps = 30
    try:
        B = mpmath.mpf(b)
        rep = IndefiniteReport(b)
        # the t(r) integrals of the A = {1} piece: v = (1-b) r/(2b)
        a_t = (1 - 2 * B) / (4 * B * B)
        # the arccos integral of the A = {} piece
        a_0 = (1 - 3 * B + B * B) * (1 - B) / (4 * B ** 3)
        uses = [("t(r)", a_t)]
        if b < (3 - math.sqrt(5)) / 2:
            # the A = {} arccos integral is only used on (1/4, (3 - sqrt 5)/2)
            uses.append(("I0 arccos", a_0))
        for label, a in uses:
            lo = (-1 + mpmath.sqrt(1 + 4 * a)) / 2
            hi = (1 + mpmath.sqrt(1 + 4 * a)) / 2
            rep.antiderivatives.append(_check_antiderivative(
                f"v arccos(a/v - v), {label}", antiderivative_v_arccos,
                lambda v, a=a: v * mpmath.acos(a / v - v), a, lo, hi, n_points, tol))
        lo = (-1 + mpmath.sqrt(1 + 4 * a_t)) / 2
        hi = (1 + mpmath.sqrt(1 + 4 * a_t)) / 2
        rep.antiderivatives.append(_check_antiderivative(
            "v^5 arccos(a/v - v), t(r)", antiderivative_v5_arccos,
            lambda v: v ** 5 * mpmath.acos(a_t / v - v), a_t, lo, hi, n_points, tol))
        a_w = (1 - B) / 4
        lo = (1 - mpmath.sqrt(B)) / (2 * a_w)
        hi = (1 + mpmath.sqrt(B)) / (2 * a_w)
        rep.antiderivatives.append(_arctan_check(a_w, lo, hi, n_points, tol))
        if b < (3 - math.sqrt(5)) / 2:
            rep.definite.extend(_definite_checks(b, rel_tol))
        return rep
    finally:
        mpmath.mp.dps = old


def _arctan_check(a, lo, hi, n, tol):
    F = antiderivative_arctan

    def integrand(v):
        return mpmath.atan(mpmath.sqrt(-a * v * v + v - 1)) / (v * v)

    # the arctan terms of F jump by pi where their denominators vanish;
    # F is piecewise an antiderivative, so sample away from those points
    poles = [(1 - 2 * a) / a]
    disc = 4 - 8 * a
    if disc >= 0:
        poles += [(2 + mpmath.sqrt(disc)) / (4 * a), (2 - mpmath.sqrt(disc)) / (4 * a)]
    worst = 0.0
    count = 0
    k = 0
    while count < n:
        v = lo + (hi - lo) * (k + 0.5) / (n + 8)
        k += 1
        if any(abs(v - p) < 1e-3 * (hi - lo) for p in poles):
            continue
        d = mpmath.diff(lambda t: F(a, t), v)
        worst = max(worst, float(abs(d - integrand(v))))
        count += 1
    return AntiderivativeCheck("arctan(sqrt(-a v^2 + v - 1))/v^2", float(a),
                               (float(lo), float(hi)), worst, n, worst < tol)


def _definite_checks(b: float, rel_tol: float) -> List[DefiniteCheck]:
    pi = math.pi
    r0 = (1 - 2 * b - b ** 1.5) / (math.sqrt(b) * (1 - b))
    k = 1 - 3 * b + b * b
    spec = QuadratureSpec(1e-15, 1e-13, 4000, (True, False))

    def f1(r):
        return r * np.arccos(np.clip((k - b * (1 - b) * r * r) / (2 * b * b * r), -1, 1))

    def f2(r):
        num = np.sqrt(np.clip(4 * b ** 4 * r * r - (k - b * (1 - b) * r * r) ** 2, 0, None))
        return r * np.arctan(num / (1 - b - b * b - b * (1 - b) * r * r))

    s = math.sqrt(4 * b - 1)
    acos_main = math.acos(-1 + (4 * b - 1) / (2 * b * b))
    at_a = math.atan((1 - 3 * b) / ((1 - b) * s))
    printed1 = (pi * (2 * b ** 3 - 8 * b * b + 6 * b - 1) / (4 * (b - 1) ** 2 * b)
                - acos_main / 2 + (1 - 2 * b) / (4 * b * (1 - b)) * s
                + (1 - 2 * b) ** 2 / (2 * b * (1 - b) ** 2) * at_a)
    printed2 = (pi * (1 - 2 * b) * (b + 1) / (8 * (1 - b) ** 2)
                + (1 - 2 * b) / (4 * b * (1 - b)) * s
                - (b + 2) * (1 - 2 * b) / (4 * b * (1 - b)) * math.atan(s)
                - (1 + b) * (1 - 2 * b) / (4 * (1 - b) ** 2) * at_a)
    out = []
    for name, f, printed in (("r arccos(...) over (r0, 1)", f1, printed1),
                             ("r arctan(...) over (r0, 1)", f2, printed2)):
        q, _ = integrate_1d(f, r0, 1.0, spec)
        rel = abs(q - printed) / abs(printed)
        out.append(DefiniteCheck(name, q, printed, rel, rel < rel_tol))
    return out


__all__ = [
    "GaugeSolve", "IndefiniteReport", "axis_gauge_radius", "gauge_solve", "l1_i0_plane",
    "shadow_curve", "sphere_directions", "verify_indefinite_integrals", "volume_gauge_l1",
    "volume_gauge_l1_axis", "volume_param_integral", "volume_reinhardt_shadow",
]
