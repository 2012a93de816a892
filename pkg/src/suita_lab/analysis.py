"""F = (K * lambda(I))^(1/2), scans, suprema, bound checks and the
regularity probe of the l1 diagonal volume at b = 1/4."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from scipy.optimize import minimize_scalar

from . import bergman, closed_form
from .domains import EllipsoidSpec
from .errors import ParameterError

FAMILIES = ("em", "l1diag", "l1offdiag")
M_BOX = (0.5, 1024.0)
LOWER_SLACK = 1e-9


@dataclass(frozen=True)
class ScanRow:
    family: str
    m: Optional[float]
    b: float
    kernel: float
    volume: float
    F: float
    F_b14: Optional[float] = None

    @property
    def spec(self) -> EllipsoidSpec:
        return EllipsoidSpec.omega(self.m) if self.family == "em" else EllipsoidSpec.l1()


def f_em(m: float, b: float) -> float:
    k = bergman.kernel_em_axis(m, b)
    return math.sqrt(k * closed_form.volume_em(m, b).value)


def f_l1_diag(b: float) -> float:
    return math.sqrt(bergman.kernel_l1_diag(b) * closed_form.volume_l1_diag(b).value)


def f_l1_offdiag(b: float) -> float:
    return math.sqrt(bergman.kernel_l1((b, 0.0)) * closed_form.volume_l1_offdiag(b))


def f_b14_continuation(b: float) -> float:
    """F built from the b <= 1/4 polynomial, continued to all of [0, 1/2)."""
    v = float(closed_form.chi_minus(b))
    return math.sqrt(bergman.kernel_l1_diag(b) * v) if v > 0 else math.nan


def scan_row(family: str, b: float, m: Optional[float] = None,
             continue_b14: bool = False) -> ScanRow:
    if family == "em":
        if m is None:
            raise ParameterError("the em family needs m")
        k = bergman.kernel_em_axis(m, b)
        v = closed_form.volume_em(m, b).value
    elif family == "l1diag":
        k = bergman.kernel_l1_diag(b)
        v = closed_form.volume_l1_diag(b).value
    elif family == "l1offdiag":
        k = bergman.kernel_l1((b, 0.0))
        v = closed_form.volume_l1_offdiag(b)
    else:
        raise ParameterError(f"unknown family {family!r}")
    extra = f_b14_continuation(b) if continue_b14 and family == "l1diag" else None
    return ScanRow(family, m if family == "em" else None, b, k, v, math.sqrt(k * v), extra)


def _threads() -> int:
    raw = os.environ.get("SUITA_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ParameterError(f"SUITA_LAB_THREADS must be an integer, got {raw!r}") from None


def scan(family: str, b_values: Sequence[float], m: Optional[float] = None,
         continue_b14: bool = False) -> List[ScanRow]:
    """Rows in the order of ``b_values``; SUITA_LAB_THREADS caps parallelism."""
    def one(b):
        return scan_row(family, float(b), m, continue_b14)

    n = _threads()
    if n == 1:
        return [one(b) for b in b_values]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(one, b_values))


# ---------------------------------------------------------------------------
# maximization

@dataclass
class MaxResult:
    family: str
    argmax: Dict[str, float]
    max: float
    iterations: int
    meta: Dict[str, object] = field(default_factory=dict)


class _Counter:
    def __init__(self, fun):
        self.fun = fun
        self.n = 0

    def __call__(self, x):
        self.n += 1
        return self.fun(x)


def _local_maxima(vals: np.ndarray, floor: float = 1e-10) -> List[int]:
    """Grid peaks; bumps smaller than ``floor`` (relative) count as rounding noise."""
    idx = []
    n = len(vals)
    for i in range(n):
        if not np.isfinite(vals[i]):
            continue
        left = vals[i - 1] if i > 0 else -np.inf
        right = vals[i + 1] if i + 1 < n else -np.inf
        if not (vals[i] >= left and vals[i] >= right):
            continue
        # prominence: drop to the lower of the two valleys on either side
        lo_l = np.nanmin(vals[:i + 1])
        lo_r = np.nanmin(vals[i:])
        if i == int(np.nanargmax(vals)) or vals[i] - max(lo_l, lo_r) > floor * abs(vals[i]):
            idx.append(i)
    return idx


def _maximize_1d(fun: Callable[[float], float], lo: float, hi: float, n_grid: int, xatol: float):
    """Grid scan, then bounded Brent (golden section + parabolic steps) around the best cell.

    A grid with several local maxima is refined around each and flagged.
    """
    grid = np.linspace(lo, hi, n_grid)
    vals = np.array([fun(x) for x in grid])
    peaks = _local_maxima(vals)
    best_x, best_v = grid[int(np.nanargmax(vals))], float(np.nanmax(vals))
    for i in peaks:
        a, c = grid[max(i - 1, 0)], grid[min(i + 1, n_grid - 1)]
        if i in (0, n_grid - 1):
            x, v = grid[i], vals[i]
        else:
            r = minimize_scalar(lambda x: -fun(x), bounds=(a, c), method="bounded",
                                options={"xatol": xatol})
            x, v = float(r.x), -float(r.fun)
        if v > best_v:
            best_x, best_v = x, v
    return best_x, best_v, {"unimodal": len(peaks) == 1, "grid_peaks": len(peaks)}


def _em_best_b(m: float, counter: _Counter):
    """max over b of F_{Omega_m}((b, 0)) in tau = -log(1 - b)."""
    def obj(tau):
        return counter(-math.expm1(-tau))

    tau, val, info = _maximize_1d(obj, 0.0, 12.0, 121, 1e-10)
    return -math.expm1(-tau), val, info


def maximize_f(family: str, m: Optional[float] = None,
               m_box: Tuple[float, float] = M_BOX) -> MaxResult:
    """Supremum of F over b (and over m in ``m_box`` on a log scale when m is None)."""
    if family == "l1diag":
        cnt = _Counter(f_l1_diag)
        b, v, info = _maximize_1d(cnt, 0.0, 0.5 - 1e-9, 201, 1e-12)
        return MaxResult(family, {"b": b}, v, cnt.n, info)
    if family == "l1offdiag":
        cnt = _Counter(f_l1_offdiag)
        b, v, info = _maximize_1d(cnt, 0.0, 1 - 1e-9, 201, 1e-12)
        return MaxResult(family, {"b": b}, v, cnt.n, info)
    if family != "em":
        raise ParameterError(f"unknown family {family!r}")
    if m is not None:
        cnt = _Counter(lambda b: f_em(m, b))
        b, v, info = _em_best_b(m, cnt)
        return MaxResult(family, {"m": m, "b": b}, v, cnt.n, info)
    lo, hi = m_box
    if not M_BOX[0] <= lo < hi:
        raise ParameterError(f"bad m box {m_box!r}")
    total = 0
    cache: Dict[float, Tuple[float, float]] = {}

    def outer(logm):
        nonlocal total
        if logm not in cache:
            mm = math.exp(logm)
            cnt = _Counter(lambda b: f_em(mm, b))
            b, v, _ = _em_best_b(mm, cnt)
            total += cnt.n
            cache[logm] = (b, v)
        return cache[logm][1]

    logm, v, info = _maximize_1d(outer, math.log(lo), math.log(hi), 41, 1e-8)
    b = cache[logm][0] if logm in cache else _em_best_b(math.exp(logm), _Counter(
        lambda bb: f_em(math.exp(logm), bb)))[0]
    info["m_at_box_edge"] = bool(abs(logm - math.log(hi)) < 1e-6 or abs(logm - math.log(lo)) < 1e-6)
    return MaxResult(family, {"m": math.exp(logm), "b": b}, v, total, info)


# ---------------------------------------------------------------------------
# bounds

@dataclass
class BoundReport:
    n: int
    min_F: float
    max_F: float
    argmin: Tuple[str, Optional[float], float]
    argmax: Tuple[str, Optional[float], float]
    violations: List[ScanRow]

    @property
    def passed(self) -> bool:
        return not self.violations


def bound_check(rows: Sequence[ScanRow], lower_slack: float = LOWER_SLACK) -> BoundReport:
    """1 - slack <= F <= 4 on every row; violations are reported, not raised."""
    if not rows:
        raise ParameterError("bound_check needs at least one row")
    fs = np.array([r.F for r in rows])
    bad = [r for r in rows if not (1 - lower_slack <= r.F <= 4)]
    i, j = int(np.argmin(fs)), int(np.argmax(fs))
    return BoundReport(len(rows), float(fs[i]), float(fs[j]),
                       (rows[i].family, rows[i].m, rows[i].b),
                       (rows[j].family, rows[j].m, rows[j].b), bad)


def continuation_dips_below_one(n: int = 2000) -> Tuple[bool, float, float]:
    """Whether F from the continued (b14) polynomial drops below 1 on (1/4, 1/2)."""
    bs = np.linspace(0.25, 0.5, n + 2)[1:-1]
    fs = np.array([f_b14_continuation(b) for b in bs])
    valid = np.isfinite(fs)
    k = int(np.argmin(np.where(valid, fs, np.inf)))
    below = (~valid) | (fs < 1)
    return bool(np.any(below)), float(bs[k]), float(fs[k])


# ---------------------------------------------------------------------------
# smoothness at 1/4

@dataclass
class SmoothnessReport:
    order: int
    side: str
    step_ladder: List[Tuple[float, float]]
    extrapolated: Optional[float]
    divergence_exponent: Optional[float] = None
    exact: Optional[float] = None
    rel_error: Optional[float] = None
    flagged: bool = False

    @property
    def divergent(self) -> bool:
        return self.extrapolated is None


def _richardson(values: List, exponents: Sequence[float]):
    """Eliminate h^p error terms on a halving ladder; returns the table's last column."""
    cols = [list(values)]
    for p in exponents:
        prev = cols[-1]
        if len(prev) < 2:
            break
        w = mpmath.mpf(2) ** p
        cols.append([(w * prev[i + 1] - prev[i]) / (w - 1) for i in range(len(prev) - 1)])
    return cols


def _one_sided(fun, c, h, k: int, side: int):
    """k-th forward (side=+1) or backward (side=-1) difference quotient."""
    total = mpmath.mpf(0)
    for j in range(k + 1):
        total += (-1) ** (k - j) * mpmath.binomial(k, j) * fun(c + side * j * h)
    return total / (side * h) ** k if side > 0 else total * (-1) ** k / h ** k


def smoothness_probe(center: float = 0.25, ladder: Sequence[int] = tuple(range(8, 21)),
                     orders: Sequence[int] = (1, 2, 3, 4), dps: int = 60,
                     levels: int = 6) -> List[SmoothnessReport]:
    """One-sided derivative estimates of the l1 diagonal volume at ``center``.

    Differences use the exact closed forms on each side (left: the b <= 1/4
    polynomial; right: the b > 1/4 formula), steps h = 2^-k center, and
    Richardson elimination of h^1, h^2, ... on the left and of
    h^(1/2), h^1, h^(3/2), ... on the right, where the expansion carries
    half-integer powers of (4b - 1).
    """
    if center != 0.25:
        raise ParameterError("the probe is defined at the branch point b = 1/4")
    old = mpmath.mp.dps
    mpmath.mp.dps = dps
    try:
        c = mpmath.mpf(1) / 4
        left = lambda b: closed_form.chi_minus(b, "mpmath")  # noqa: E731
        right = lambda b: closed_form.chi_plus(b, "mpmath")  # noqa: E731
        table = closed_form.chi_derivatives_at_quarter()
        pi2 = mpmath.pi ** 2
        out = []
        hs = [c * mpmath.mpf(2) ** (-k) for k in ladder]
        for k in orders:
            for side_name, fun, sgn, exps in (("left", left, -1, [1, 2, 3, 4, 5, 6, 7, 8]),
                                              ("right", right, 1, [x / 2 for x in range(1, 17)])):
                ests = [_one_sided(fun, c, h, k, sgn) for h in hs]
                steps = [(float(h), float(e)) for h, e in zip(hs, ests)]
                exact_frac = table[k]["left_over_pi2" if side_name == "left" else "right_over_pi2"]
                exact = float(exact_frac) * float(pi2) if exact_frac is not None else None
                if k == 4 and side_name == "right":
                    d = [abs(ests[i] - ests[i + 1]) for i in range(len(ests) - 1)]
                    x = np.array([math.log(float(h)) for h in hs[:-1]])
                    y = np.array([math.log(float(v)) for v in d])
                    slope = float(np.polyfit(x, y, 1)[0])
                    out.append(SmoothnessReport(k, side_name, steps, None, slope, None, None,
                                                flagged=False))
                    continue
                cols = _richardson(ests, exps[:levels])
                best = cols[-1][-1]
                prev = cols[-2][-1]
                flagged = abs(best - prev) > 1e-6 * abs(best)
                rel = float(abs(best - exact_frac * pi2) / abs(exact_frac * pi2))
                out.append(SmoothnessReport(k, side_name, steps, float(best), None, exact, rel,
                                            flagged))
        return out
    finally:
        mpmath.mp.dps = old
