"""Closed-form volumes of Kobayashi indicatrices.

Omega_m at (b, 0):  a sum of six powers b^e with m-dependent coefficients.
Three of the coefficients have poles at m = 2/3 and m = 2, where the
limit picks up a b^6 log b term.

l1-ball at (b, b):  a polynomial for b <= 1/4 (chi_minus) and a combination
of polynomials, sqrt(4b - 1), arccos and arctan terms above (chi_plus).

l1-ball at (b, 0):  a polynomial.

Numerics.  Near b = 1 the Omega_m sum cancels to O((1-b)^3); the first
three moments of the coefficient/exponent pairs vanish identically, so
the sum is rewritten with E3(x) = e^x - 1 - x - x^2/2, L = log b.
Near b = 1/4 the l1 terms are evaluated from u = 4b - 1 (arccos(-1 + eps)
via arcsin).  Polynomial coefficients are integer tuples (ascending
powers) so an mpmath backend can evaluate the same expressions exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import mpmath

from .domains import M_MIN, EllipsoidSpec, VolumeResult
from .errors import ParameterError

PI2 = math.pi ** 2

SPECIAL_M = (Fraction(2, 3), Fraction(2))
BLEND_RADIUS = 1e-4
SPECIAL_RADIUS = 1e-9

# ---------------------------------------------------------------------------
# Omega_m


def _em_terms(m: float) -> List[Tuple[float, float]]:
    """(coefficient, exponent) pairs of the generic formula, without pi^2."""
    return [
        (-(m - 1) / (2 * m * (3 * m - 2) * (3 * m - 1)), 6 * m + 2),
        (-3 * (m - 1) / (2 * m * (m - 2) * (m + 1)), 2 * m + 2),
        (m / (2 * (m - 2) * (3 * m - 2)), 6.0),
        (3 * m / (3 * m - 1), 4.0),
        (-(4 * m - 1) / (2 * m), 2.0),
        (m / (m + 1), 0.0),
    ]


# special m: (coefficient, exponent) pairs plus the coefficient d of b^6 log b
_SPECIAL_TERMS: Dict[Fraction, Tuple[List[Tuple[Fraction, Fraction]], Fraction]] = {
    Fraction(2, 3): ([(Fraction(-65, 80), Fraction(6)), (Fraction(160, 80), Fraction(4)),
                      (Fraction(-27, 80), Fraction(10, 3)), (Fraction(-100, 80), Fraction(2)),
                      (Fraction(32, 80), Fraction(0))], Fraction(40, 80)),
    Fraction(2): ([(Fraction(-3, 240), Fraction(14)), (Fraction(-25, 240), Fraction(6)),
                   (Fraction(288, 240), Fraction(4)), (Fraction(-420, 240), Fraction(2)),
                   (Fraction(160, 240), Fraction(0))], Fraction(-120, 240)),
}


def _e3(x: float) -> float:
    """e^x - 1 - x - x^2/2 without cancellation for small x."""
    if abs(x) < 0.5:
        term = x ** 3 / 6
        total = 0.0
        k = 3
        while abs(term) > 1e-18 * abs(total) or total == 0.0:
            total += term
            k += 1
            term *= x / k
            if term == 0.0:
                break
        return total
    return math.expm1(x) - x - 0.5 * x * x


def _e2(x: float) -> float:
    """e^x - 1 - x without cancellation for small x."""
    if abs(x) < 0.5:
        term = x * x / 2
        total = 0.0
        k = 2
        while abs(term) > 1e-18 * abs(total) or total == 0.0:
            total += term
            k += 1
            term *= x / k
            if term == 0.0:
                break
        return total
    return math.expm1(x) - x


def _sum_powers(terms, b: float, log_coeff: float = 0.0) -> float:
    """sum c b^e (+ d b^6 log b), picking the better-conditioned of two forms."""
    if b == 0.0:
        return math.fsum(float(c) for c, e in terms if e == 0)
    L = math.log(b)
    direct = [float(c) * b ** float(e) for c, e in terms]
    stable = [float(c) * _e3(float(e) * L) for c, e in terms]
    if log_coeff:
        direct.append(log_coeff * b ** 6 * L)
        # b^6 L = L + 6 L^2 + ... ; the L and L^2 parts cancel against the powers
        stable.append(log_coeff * (L * _e2(6 * L)))
    cond_direct = math.fsum(abs(t) for t in direct)
    cond_stable = math.fsum(abs(t) for t in stable)
    return math.fsum(stable) if cond_stable < cond_direct else math.fsum(direct)


def _check_em(m: float, b: float) -> None:
    if not (isinstance(m, (int, float)) and m >= M_MIN and math.isfinite(m)):
        raise ParameterError(f"m must be a finite number >= 1/2, got {m!r}")
    if not 0 <= b < 1:
        raise ParameterError(f"b must lie in [0, 1), got {b!r}")


def _em_generic(m: float, b: float) -> float:
    return PI2 * _sum_powers(_em_terms(m), b)


def _em_special(m0: Fraction, b: float) -> float:
    terms, d = _SPECIAL_TERMS[m0]
    return PI2 * _sum_powers(terms, b, float(d))


def _nearest_special(m: float):
    m0 = min(SPECIAL_M, key=lambda s: abs(m - float(s)))
    return m0, abs(m - float(m0))


def volume_em(m: float, b: float) -> VolumeResult:
    """lambda(I_{Omega_m}((b, 0)))."""
    _check_em(m, b)
    spec = EllipsoidSpec.omega(m)
    m0, dist = _nearest_special(m)
    if dist <= SPECIAL_RADIUS:
        return VolumeResult(_em_special(m0, b), "closed", b, spec, "SPECIAL_M",
                            meta={"m0": str(m0)})
    if dist < BLEND_RADIUS:
        # quadratic through (m0 - d, G), (m0, S), (m0 + d, G)
        c = float(m0)
        d = BLEND_RADIUS
        g_lo = _em_generic(c - d, b)
        g_hi = _em_generic(c + d, b)
        s = _em_special(m0, b)
        t = (m - c) / d
        value = s + t * (g_hi - g_lo) / 2 + t * t * ((g_hi + g_lo) / 2 - s)
        return VolumeResult(value, "closed", b, spec, "BLEND_M", meta={"m0": str(m0)})
    return VolumeResult(_em_generic(m, b), "closed", b, spec, "GENERIC_M")


def volume_em_i2(m: float, b: float) -> float:
    return PI2 * b * b * (1 - b ** (2 * m)) ** 3 / (2 * m * m)


def _em_i12_printed(m: float, b: float) -> float:
    terms = [
        ((1 - 2 * m) ** 2 / (m * m * (3 * m - 1) * (3 * m - 2)), 6 * m + 2),
        (-3 / (m * m * (m + 1) * (m - 2)), 2 * m + 2),
        (-3 / (2 * m * m), 4 * m + 2),
        (m / (2 * (m - 2) * (3 * m - 2)), 6.0),
        (3 * m / (3 * m - 1), 4.0),
        (-(4 * m * m - m + 1) / (2 * m * m), 2.0),
        (m / (m + 1), 0.0),
    ]
    return PI2 * _sum_powers(terms, b)


def volume_em_components(m: float, b: float) -> Tuple[float, float]:
    """(lambda(I_12), lambda(I_2)); near a singular m, I_12 is total minus I_2."""
    _check_em(m, b)
    i2 = volume_em_i2(m, b)
    _, dist = _nearest_special(m)
    if dist < BLEND_RADIUS:
        return volume_em(m, b).value - i2, i2
    return _em_i12_printed(m, b), i2


# ---------------------------------------------------------------------------
# l1-ball, exact coefficient tables (ascending powers of b)

B14 = (1, 0, -8, -16, 76, -80, 80, -64, 30)                 # times pi^2/6
I12_POLY = (1, 0, -32, 80, -12, -112, 176, -192, 110)        # (i12) polynomial
I1_POLY = (3, -9, 2, 6, -6, 10)                              # times 2 pi^2/3 (1-b) b^2

A14_P1 = (4, -6, 3, -2)
A14_P2 = (1, -18, 89, -144, -76, 424, -260, -176, 238, -124, 30)
A14_P3 = (37, -305, 922, -1214, 754, -554, 444, -180)
A14_P4 = (-2, 2, 7)

I12_SQRT = (37, -140, 270, -528, 530, -712, 660)
I1_P1 = (-4, 21, -6, -166, 414, -375, 84, 54, -36, 10)
I1_P2 = (-8, 32, -26, -19, 43, -58, 30)
I1_P3 = (-1, -2, 2)
I1_P4 = (3, -9, 2, 6, -6, 10)
I0_P1 = (-2, 9, -6)

QUARTER = Fraction(1, 4)

# one-sided derivatives of chi at 1/4 in units of pi^2 (orders 0..3 agree)
CHI_DERIVATIVES = {
    0: Fraction(15887, 196608),
    1: Fraction(-3521, 6144),
    2: Fraction(-215, 1536),
    3: Fraction(1785, 64),
}
CHI4_LEFT = Fraction(1549, 16)


class _Float:
    pi = math.pi
    sqrt = staticmethod(math.sqrt)
    asin = staticmethod(math.asin)
    atan = staticmethod(math.atan)
    atan2 = staticmethod(math.atan2)
    acos = staticmethod(math.acos)

    @staticmethod
    def num(x):
        return float(x)


class _Mp:
    sqrt = staticmethod(mpmath.sqrt)
    asin = staticmethod(mpmath.asin)
    atan = staticmethod(mpmath.atan)
    atan2 = staticmethod(mpmath.atan2)
    acos = staticmethod(mpmath.acos)

    @property
    def pi(self):
        return mpmath.pi

    @staticmethod
    def num(x):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpf(x)


def _backend(name: str):
    if name == "float":
        return _Float()
    if name == "mpmath":
        return _Mp()
    raise ParameterError(f"unknown backend {name!r}")


def poly(coeffs: Sequence[int], x):
    """Horner evaluation of an ascending coefficient tuple."""
    acc = 0 * x
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


class _Trig:
    """Shared transcendental pieces for b in (1/4, 1/2)."""

    def __init__(self, b, be):
        u = 4 * b - 1
        s = be.sqrt(u)
        rb = be.sqrt(b)
        self.s = s
        # arccos(-1 + u/(2b^2))
        self.acos_main = be.pi - 2 * be.asin(s / (2 * b))
        self.atan_s = be.atan(s)
        # arctan((1-3b)/((1-b)s)) and arctan((2b^2-4b+1)/((1-2b)s)), s > 0
        self.atan_a = be.atan2(1 - 3 * b, (1 - b) * s)
        self.atan_b = be.atan2(2 * b * b - 4 * b + 1, (1 - 2 * b) * s)
        # arccos((3b-1)/(2 b^1.5)) with 1 + x = (sqrt b + 1)^2 u / ((2 sqrt b + 1) 2 b^1.5)
        one_plus = (rb + 1) ** 2 * u / ((2 * rb + 1) * 2 * b * rb)
        self.acos_b15 = be.pi - 2 * be.asin(be.sqrt(one_plus / 2))


def _check_diag(b, lo_open=False) -> None:
    if not (0 < b < 0.5 if lo_open else 0 <= b < 0.5):
        raise ParameterError(f"b must lie in [0, 1/2), got {b!r}")


def chi_minus(b, backend: str = "float"):
    """(b14) as a function of b (also its analytic continuation past 1/4)."""
    be = _backend(backend)
    b = be.num(b)
    return be.pi ** 2 / 6 * poly(B14, b)


def chi_plus(b, backend: str = "float"):
    """(a14); defined for 1/4 <= b < 1/2."""
    be = _backend(backend)
    b = be.num(b)
    if not 0.25 <= b < 0.5:
        raise ParameterError(f"chi_plus needs 1/4 <= b < 1/2, got {b!r}")
    t = _Trig(b, be)
    pi = be.pi
    om = 1 - b
    tb = 1 - 2 * b
    return (2 * pi ** 2 * b * tb ** 3 * poly(A14_P1, b) / (3 * om ** 2)
            + pi * poly(A14_P2, b) / (6 * om ** 2) * t.acos_main
            + pi * tb * poly(A14_P3, b) / (72 * om) * t.s
            + 4 * pi * b * tb ** 4 * poly(A14_P4, b) / (3 * om ** 2) * t.atan_s
            + 4 * pi * b ** 2 * tb ** 4 * (2 - b) / om ** 2 * t.atan_a)


def chi_plus_alternative(b, backend: str = "float", as_printed: bool = False):
    """The rewritten (a14) valid on (1/4, 1 - 1/sqrt 2); validation fixture.

    ``as_printed=True`` keeps a plus sign on the arctan((1-2b)s/(2b^2-4b+1))
    term; that variant does not equal (a14) and exists only to show it.
    """
    be = _backend(backend)
    b = be.num(b)
    if not 0.25 < b < 1 - 1 / math.sqrt(2):
        raise ParameterError("the alternative form needs 1/4 < b < 1 - 1/sqrt(2)")
    s = be.sqrt(4 * b - 1)
    pi = be.pi
    om = 1 - b
    tb = 1 - 2 * b
    return (pi ** 2 / 6 * poly(B14, b)
            + pi * tb * poly(A14_P3, b) / (72 * om) * s
            + 4 * pi * b * tb ** 4 * poly(A14_P4, b) / (3 * om ** 2) * be.atan(s)
            # minus sign forced by arccos(...) = pi - arctan((1-2b)s/(2b^2-4b+1))
            + (1 if as_printed else -1) * pi * poly(A14_P2, b) / (6 * om ** 2)
            * be.atan(tb * s / (2 * b * b - 4 * b + 1))
            - 4 * pi * b ** 2 * tb ** 4 * (2 - b) / om ** 2 * be.atan(om * s / (1 - 3 * b)))


CANCEL_B = 0.45


def volume_l1_diag(b: float) -> VolumeResult:
    """lambda(I((b, b))) for the l1-ball."""
    _check_diag(b)
    if b <= 0.25:
        return VolumeResult(float(chi_minus(b)), "closed", b, EllipsoidSpec.l1(),
                            "BELOW_QUARTER")
    if b < CANCEL_B:
        v = float(chi_plus(b))
    else:
        # the terms cancel to O((1/2 - b)^6); carry extra digits
        with mpmath.workdps(40):
            v = float(chi_plus(b, "mpmath"))
    return VolumeResult(v, "closed", b, EllipsoidSpec.l1(), "ABOVE_QUARTER")


def l1_i12(b, backend: str = "float"):
    be = _backend(backend)
    b = be.num(b)
    if b <= 0.25:
        return be.pi ** 2 / 6 * poly(I12_POLY, b)
    t = _Trig(b, be)
    return (be.pi / 72 * poly(I12_SQRT, b) * (1 - 2 * b) * t.s
            + be.pi / 6 * poly(I12_POLY, b) * t.acos_main)


def l1_i1(b, backend: str = "float"):
    be = _backend(backend)
    b = be.num(b)
    pi = be.pi
    if b <= 0.25:
        return 2 * pi ** 2 / 3 * (1 - b) * b * b * poly(I1_POLY, b)
    t = _Trig(b, be)
    om = 1 - b
    tb = 1 - 2 * b
    return (-pi ** 2 * b * poly(I1_P1, b) / (3 * om ** 2)
            + pi * b * tb * poly(I1_P2, b) / (9 * om) * t.s
            + 4 * pi * tb ** 4 * b * poly(I1_P3, b) / (3 * om ** 2) * t.acos_b15
            + 2 * pi * om * b * b * poly(I1_P4, b) / 3 * t.atan_b)


def l1_i0(b, backend: str = "float"):
    be = _backend(backend)
    b = be.num(b)
    if b <= 0.25:
        return 0 * b
    t = _Trig(b, be)
    pi = be.pi
    om = 1 - b
    tb = 1 - 2 * b
    return (2 * pi ** 2 * b * b * tb ** 3 * poly(I0_P1, b) / om ** 2
            - 8 * pi * b ** 3 * tb ** 3 / om * t.acos_main
            + 4 * pi * b * b * tb ** 4 * (b + 2) / om ** 2 * t.atan_s
            + 4 * pi * b * b * tb ** 4 * (2 - b) / om ** 2 * t.atan_a)


def volume_l1_diag_components(b: float) -> Tuple[float, float, float]:
    """(lambda(I_12), lambda(I_1), lambda(I_0)); the total is I_12 + 2 I_1 + I_0."""
    _check_diag(b, lo_open=True)
    return float(l1_i12(b)), float(l1_i1(b)), float(l1_i0(b))


def volume_l1_offdiag(b: float) -> float:
    """lambda(I((b, 0))) for the l1-ball."""
    if not 0 <= b < 1:
        raise ParameterError(f"b must lie in [0, 1), got {b!r}")
    c = 1 - b
    return PI2 / 6 * c ** 4 * (c ** 4 + 8 * b)


def chi_derivatives_at_quarter() -> Dict[str, object]:
    """One-sided derivatives of the l1 diagonal volume at b = 1/4.

    Values are exact multiples of pi^2 (as Fractions, key ``*_over_pi2``);
    the right fourth derivative diverges, marked by ``float('inf')``.
    """
    table = {}
    for k, v in CHI_DERIVATIVES.items():
        table[k] = {"left_over_pi2": v, "right_over_pi2": v,
                    "left": float(v) * PI2, "right": float(v) * PI2}
    table[4] = {"left_over_pi2": CHI4_LEFT, "right_over_pi2": None,
                "left": float(CHI4_LEFT) * PI2, "right": math.inf}
    return table
