"""Small value types shared across modules."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

from .errors import ParameterError

# A point or tangent vector of C^2.
ComplexPair = Tuple[complex, complex]

M_MIN = 0.5


@dataclass(frozen=True)
class EllipsoidSpec:
    """Which domain: ``kind="em"`` is Omega_m, ``kind="l1"`` the l1-ball E(1/2, 1/2)."""

    kind: str
    m: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("em", "l1"):
            raise ParameterError(f"unknown ellipsoid kind {self.kind!r}")
        if self.kind == "em":
            if self.m is None or not self.m >= M_MIN:
                raise ParameterError(f"Omega_m needs m >= 1/2, got {self.m!r}")
        elif self.m is not None:
            raise ParameterError("the l1-ball takes no exponent")

    @classmethod
    def omega(cls, m: float) -> "EllipsoidSpec":
        return cls("em", float(m))

    @classmethod
    def l1(cls) -> "EllipsoidSpec":
        return cls("l1")

    def exponents(self) -> Tuple[float, float]:
        """(p1, p2) with the domain written as |z1|^(2 p1) + |z2|^(2 p2) < 1."""
        if self.kind == "em":
            return (self.m, 1.0)
        return (0.5, 0.5)

    def contains(self, w: ComplexPair) -> bool:
        p1, p2 = self.exponents()
        return abs(w[0]) ** (2 * p1) + abs(w[1]) ** (2 * p2) < 1.0

    def label(self) -> str:
        return "l1" if self.kind == "l1" else f"em(m={self.m:g})"


@dataclass(frozen=True)
class VolumeResult:
    """Lebesgue volume of an indicatrix together with how it was obtained.

    ``method`` is one of closed-form, quadrature, shadow, gauge.
    ``branch`` names the formula branch (BELOW_QUARTER, ABOVE_QUARTER,
    GENERIC_M, SPECIAL_M, BLEND_M, OFF_DIAGONAL) or the oracle route.
    """

    value: float
    method: str
    b: float
    spec: EllipsoidSpec
    branch: str
    err_est: float = 0.0
    meta: dict = field(default_factory=dict, compare=False)
