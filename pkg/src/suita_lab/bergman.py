"""Bergman kernels on the diagonal for Omega_m and the l1-ball, and the
automorphisms of Omega_m used to check the kernel transformation rule."""

from __future__ import annotations

import cmath
import math

from .domains import M_MIN, ComplexPair
from .errors import DomainError, ParameterError

_TINY = 1e-300


def _check_m(m: float) -> None:
    if not m >= M_MIN:
        raise ParameterError(f"exponent m must be >= 1/2, got {m!r}")


def kernel_em(m: float, w: ComplexPair) -> float:
    """K_{Omega_m}(w) for w strictly inside Omega_m."""
    _check_m(m)
    a1 = abs(w[0]) ** 2
    a2 = abs(w[1]) ** 2
    s = 1.0 - a2
    if s <= _TINY:
        raise DomainError(f"|w2| = {abs(w[1])!r} is on or beyond the boundary")
    log_s = math.log(s)
    s_pow = math.exp(log_s / m)  # (1 - |w2|^2)^(1/m)
    gap = s_pow - a1
    if not gap > 0:
        raise DomainError(f"point {w!r} is not inside Omega_{m:g}")
    prefactor = math.exp((1.0 / m - 2.0) * log_s)
    numer = (1.0 / m + 1.0) * s_pow + (1.0 / m - 1.0) * a1
    return prefactor * numer / (math.pi ** 2 * gap ** 3)


def kernel_em_axis(m: float, b: float) -> float:
    """K_{Omega_m}((b, 0)) in the reduced form used for F."""
    _check_m(m)
    if not 0 <= b < 1:
        raise DomainError(f"(b, 0) needs 0 <= b < 1, got b={b!r}")
    one_minus = (1.0 - b) * (1.0 + b)
    return (m + 1.0 + (1.0 - m) * b * b) / (math.pi ** 2 * m * one_minus ** 3)


def kernel_l1(w: ComplexPair) -> float:
    """K(w) for the l1-ball {|z1| + |z2| < 1}."""
    if not abs(w[0]) + abs(w[1]) < 1:
        raise DomainError(f"point {w!r} is not inside the l1-ball")
    a1 = abs(w[0]) ** 2
    a2 = abs(w[1]) ** 2
    n2 = a1 + a2
    denom = (1.0 - n2) ** 2 - 4.0 * a1 * a2
    numer = 3.0 * (1.0 - n2) ** 2 * (1.0 + n2) + 4.0 * a1 * a2 * (5.0 - 3.0 * n2)
    return 2.0 / math.pi ** 2 * numer / denom ** 3


def kernel_l1_diag(b: float) -> float:
    """K((b, b)) for the l1-ball."""
    if not 0 <= b < 0.5:
        raise DomainError(f"(b, b) needs 0 <= b < 1/2, got b={b!r}")
    b2 = b * b
    return 2.0 * (3.0 - 6.0 * b2 + 8.0 * b2 * b2) / (math.pi ** 2 * ((1 - 2 * b) * (1 + 2 * b)) ** 3)


def _check_disc(a: complex) -> None:
    if not abs(a) < 1:
        raise ParameterError(f"automorphism needs |a| < 1, got |a| = {abs(a)!r}")


def automorphism_em(m: float, a: complex, t: float, z: ComplexPair) -> ComplexPair:
    """The automorphism

        z -> ( e^{it} (1-|a|^2)^{1/2m} (1 - conj(a) z2)^{-1/m} z1,  (z2 - a)/(1 - conj(a) z2) )

    of Omega_m.  Powers use the principal branch; 1 - conj(a) z2 has positive
    real part on the domain.
    """
    _check_m(m)
    _check_disc(a)
    z1, z2 = complex(z[0]), complex(z[1])
    if not abs(z1) ** (2 * m) + abs(z2) ** 2 < 1:
        raise DomainError(f"point {z!r} is not inside Omega_{m:g}")
    d = 1.0 - a.conjugate() * z2
    scale = (1.0 - abs(a) ** 2) ** (1.0 / (2 * m))
    return (cmath.exp(1j * t) * scale * cmath.exp(-cmath.log(d) / m) * z1, (z2 - a) / d)


def jacobian_automorphism_em(m: float, a: complex, t: float, z: ComplexPair) -> complex:
    """Complex Jacobian determinant of :func:`automorphism_em` at z.

    The map is triangular (the second component does not see z1), so the
    determinant is d(Phi_1)/d(z1) * d(Phi_2)/d(z2)
      = e^{it} (1-|a|^2)^{1/2m} (1 - conj(a) z2)^{-1/m} * (1-|a|^2) / (1 - conj(a) z2)^2.
    """
    _check_m(m)
    _check_disc(a)
    z2 = complex(z[1])
    d = 1.0 - a.conjugate() * z2
    one_minus = 1.0 - abs(a) ** 2
    return (cmath.exp(1j * t) * one_minus ** (1.0 / (2 * m)) * cmath.exp(-cmath.log(d) / m)
            * one_minus / (d * d))
