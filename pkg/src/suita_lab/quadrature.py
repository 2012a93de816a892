"""Adaptive Gauss-Kronrod quadrature in one dimension and iterated in two.

Integrands are called with a 1-D numpy array of abscissae and must return an
array of the same shape.  Panels are refined by bisection of the panel with
the largest error estimate; endpoints flagged as singular get an initial mesh
graded geometrically toward them, which is what the inverse square-root
integrands of the indicatrix charts need.

Results do not depend on evaluation order: the panel list is summed with
``math.fsum`` after sorting by left endpoint.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np

from .errors import ConvergenceError, ParameterError

# 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077715880514745,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

# Full symmetric node set on [-1, 1] and matching weights.
NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_gauss_half = np.zeros(11)
_gauss_half[1:10:2] = _WG
GAUSS_WEIGHTS = np.concatenate([_gauss_half[:-1], _gauss_half[::-1]])

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000
    singular_endpoints: Tuple[bool, bool] = (False, False)

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ParameterError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ParameterError("max_subdivisions must be >= 1")

    def with_singular(self, left: bool, right: bool) -> "QuadratureSpec":
        return QuadratureSpec(self.abs_tol, self.rel_tol, self.max_subdivisions, (left, right))


DEFAULT_SPEC = QuadratureSpec()


def gk21(f: Callable, a: float, b: float) -> Tuple[float, float]:
    """One Gauss-Kronrod 10/21 panel: (Kronrod value, error estimate)."""
    half = 0.5 * (b - a)
    center = 0.5 * (a + b)
    x = center + half * NODES
    # on very thin panels nodes can round onto an (often singular) endpoint
    x = np.clip(x, np.nextafter(a, b), np.nextafter(b, a)) if b > a else x
    fx = np.asarray(f(x), dtype=float)
    if fx.shape != NODES.shape:
        fx = np.broadcast_to(fx, NODES.shape)
    if not np.all(np.isfinite(fx)):
        raise ConvergenceError(f"non-finite integrand on [{a!r}, {b!r}]")
    kron = float(np.dot(KRONROD_WEIGHTS, fx)) * half
    gauss = float(np.dot(GAUSS_WEIGHTS, fx)) * half
    # QUADPACK error heuristic
    mean = kron / (2 * half) if half != 0 else 0.0
    resasc = abs(half) * float(np.dot(KRONROD_WEIGHTS, np.abs(fx - mean)))
    resabs = abs(half) * float(np.dot(KRONROD_WEIGHTS, np.abs(fx)))
    err = abs(kron - gauss)
    if resasc != 0 and err != 0:
        err = resasc * min(1.0, (200 * err / resasc) ** 1.5)
    if resabs > np.finfo(float).tiny / (50 * _EPS):
        err = max(50 * _EPS * resabs, err)
    return kron, err


def _initial_mesh(a: float, b: float, spec: QuadratureSpec, points: Sequence[float]):
    cuts = sorted({float(p) for p in points if a < p < b})
    edges = [a] + cuts + [b]
    last = len(edges) - 2
    mesh = []
    for i in range(last + 1):
        # interior break points are graded like singular endpoints
        left = i > 0 or spec.singular_endpoints[0]
        right = i < last or spec.singular_endpoints[1]
        mesh.extend(_graded(edges[i], edges[i + 1], left, right))
    return mesh


def _graded(lo: float, hi: float, left: bool, right: bool, levels: int = 12):
    if not (left or right):
        return [(lo, hi)]
    if left and right:
        mid = 0.5 * (lo + hi)
        return _graded(lo, mid, True, False, levels) + _graded(mid, hi, False, True, levels)
    width = hi - lo
    ratios = [0.25 ** k for k in range(levels, 0, -1)]
    if left:
        xs = [lo] + [lo + width * r for r in ratios] + [hi]
    else:
        xs = [lo] + [hi - width * r for r in reversed(ratios)] + [hi]
    return [(xs[i], xs[i + 1]) for i in range(len(xs) - 1)]


def integrate_1d(f: Callable, a: float, b: float, spec: QuadratureSpec = DEFAULT_SPEC,
                 points: Sequence[float] = ()) -> Tuple[float, float]:
    """Integrate ``f`` over [a, b]; returns ``(value, err_est)``.

    ``points`` are interior break points (kinks, square-root corners); the
    mesh is graded toward them as well as toward flagged singular endpoints.
    Raises ConvergenceError (carrying the partial value) when
    ``max_subdivisions`` panels do not reach the tolerance.
    """
    a = float(a)
    b = float(b)
    if not a < b:
        if a == b:
            return 0.0, 0.0
        raise ParameterError(f"integrate_1d needs a < b, got [{a}, {b}]")
    panels = {}
    heap = []
    counter = 0
    for lo, hi in _initial_mesh(a, b, spec, points):
        val, err = gk21(f, lo, hi)
        panels[counter] = (lo, hi, val, err)
        heapq.heappush(heap, (-err, counter))
        counter += 1
    n_split = 0
    while True:
        total = math.fsum(p[2] for p in panels.values())
        err_total = math.fsum(p[3] for p in panels.values())
        if err_total <= max(spec.abs_tol, spec.rel_tol * abs(total)):
            break
        if n_split >= spec.max_subdivisions:
            raise ConvergenceError(
                f"no convergence on [{a}, {b}] after {n_split} subdivisions "
                f"(err_est={err_total:.3e})", partial=total, err_est=err_total)
        _, key = heapq.heappop(heap)
        lo, hi, _, _ = panels.pop(key)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            # panel cannot be split further in floating point; accept it
            raise ConvergenceError(f"panel [{lo}, {hi}] exhausted floating-point resolution",
                                   partial=total, err_est=err_total)
        for sub in ((lo, mid), (mid, hi)):
            val, err = gk21(f, *sub)
            panels[counter] = (sub[0], sub[1], val, err)
            heapq.heappush(heap, (-err, counter))
            counter += 1
        n_split += 1
    ordered = sorted(panels.values(), key=lambda p: p[0])
    return math.fsum(p[2] for p in ordered), math.fsum(p[3] for p in ordered)


def integrate_2d_iterated(f: Callable, outer: Tuple[float, float],
                          inner_bounds: Callable[[float], Tuple[float, float]],
                          spec: QuadratureSpec = DEFAULT_SPEC,
                          inner_spec: QuadratureSpec | None = None,
                          outer_points: Sequence[float] = (),
                          inner_points: Callable[[float], Sequence[float]] | None = None,
                          ) -> Tuple[float, float]:
    """Integrate ``f(s, t)`` over {a < s < b, lo(s) < t < hi(s)}.

    ``f`` receives a scalar outer coordinate and an array of inner ones.
    Empty inner ranges (hi <= lo) contribute zero.
    """
    if inner_spec is None:
        inner_spec = QuadratureSpec(spec.abs_tol / 10, spec.rel_tol / 10,
                                    spec.max_subdivisions)
    inner_errs = []

    def outer_integrand(svals):
        out = np.empty_like(svals)
        for i, s in enumerate(svals):
            lo, hi = inner_bounds(float(s))
            if not hi > lo:
                out[i] = 0.0
                continue
            pts = inner_points(float(s)) if inner_points is not None else ()
            val, err = integrate_1d(lambda t: f(float(s), t), lo, hi, inner_spec, pts)
            out[i] = val
            inner_errs.append(err)
        return out

    value, err = integrate_1d(outer_integrand, outer[0], outer[1], spec, outer_points)
    inner_worst = max(inner_errs) if inner_errs else 0.0
    return value, err + (outer[1] - outer[0]) * inner_worst
