"""Closed-form hyperbolic trigonometry and matrix-to-length conversions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_genus, check_positive
from .exceptions import DomainError, NotHyperbolic

DET_TOL = 1e-9
HYPERBOLIC_MARGIN = 1e-12


@dataclass(frozen=True)
class MobiusTransform:
    """Orientation-preserving isometry of the upper half-plane.

    The entries are rescaled so that ``ad - bc == 1``. ``M`` and ``-M``
    act identically; equality below is entrywise and does not identify them.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if not math.isfinite(det) or det <= 0.0:
            raise DomainError(f"matrix must have positive determinant, got {det!r}")
        if abs(det - 1.0) > 0.0:
            s = math.sqrt(det)
            for name in "abcd":
                object.__setattr__(self, name, getattr(self, name) / s)

    @classmethod
    def from_array(cls, m):
        m = np.asarray(m, dtype=float)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def translation(cls, length):
        """Translation by ``length`` along the imaginary axis, towards infinity."""
        h = math.exp(length / 2.0)
        return cls(h, 0.0, 0.0, 1.0 / h)

    def as_array(self):
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def trace(self):
        return self.a + self.d

    @property
    def determinant(self):
        return self.a * self.d - self.b * self.c

    def is_hyperbolic(self):
        return abs(self.trace) > 2.0 + HYPERBOLIC_MARGIN

    def inverse(self):
        return MobiusTransform(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other):
        return MobiusTransform(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = MobiusTransform.identity()
        base = self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def __call__(self, z):
        return (self.a * z + self.b) / (self.c * z + self.d)

    def conjugate_by(self, g):
        """Return ``g @ self @ g^-1``."""
        return g @ self @ g.inverse()


@dataclass(frozen=True)
class HexagonAlternatingSides:
    """Three pairwise non-adjacent sides of a right-angled hexagon."""

    s1: float
    s2: float
    s3: float

    def __post_init__(self):
        for name in ("s1", "s2", "s3"):
            check_positive(getattr(self, name), name)

    def astuple(self):
        return (self.s1, self.s2, self.s3)


def trace_to_length(m):
    """Translation length ``2 arccosh(|tr| / 2)`` of a hyperbolic element.

    Accepts a :class:`MobiusTransform` or any 2x2 array with unit determinant.
    """
    if isinstance(m, MobiusTransform):
        tr = m.trace
    else:
        arr = np.asarray(m, dtype=float)
        tr = arr[0, 0] + arr[1, 1]
    tr = abs(tr)
    if not tr > 2.0 + HYPERBOLIC_MARGIN:
        raise NotHyperbolic(f"|trace| = {tr!r} <= 2: no closed geodesic")
    return 2.0 * math.acosh(tr / 2.0)


def length_to_trace(length):
    """Inverse of :func:`trace_to_length` on the positive branch."""
    return 2.0 * math.cosh(check_positive(length, "length") / 2.0)


def collar_width(length):
    """Width ``arcsinh(1 / sinh(length / 2))`` of the standard collar."""
    length = check_positive(length, "length")
    return math.asinh(1.0 / math.sinh(length / 2.0))


def collar_boundary_length(length):
    """Length ``length * coth(length / 2)`` of either collar boundary curve."""
    length = check_positive(length, "length")
    return length / math.tanh(length / 2.0)


def loop_collar_distance_bound(loop_length):
    """Upper bound ``log(sinh(loop_length / 2))`` on loop-to-collar distance."""
    loop_length = check_positive(loop_length, "loop_length")
    return math.log(math.sinh(loop_length / 2.0))


def hexagon_complete(sides):
    """Opposite sides of a right-angled hexagon from three alternating sides.

    Returns ``(t1, t2, t3)`` with ``t_i`` the side opposite ``s_i``; the map
    is an involution.
    """
    if not isinstance(sides, HexagonAlternatingSides):
        sides = HexagonAlternatingSides(*sides)
    s = sides.astuple()
    ch = [math.cosh(x) for x in s]
    sh = [math.sinh(x) for x in s]
    out = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        out.append(math.acosh((ch[i] + ch[j] * ch[k]) / (sh[j] * sh[k])))
    return tuple(out)


def arc_length_from_chain(cuff1, cuff2, chain_length):
    """Length of the orthogeodesic joining the first two cuffs of a pair of pants.

    The pants has boundary lengths ``(cuff1, cuff2, chain_length)``; the arc is
    the hexagon side opposite the half chain.
    """
    cuff1 = check_positive(cuff1, "cuff1")
    cuff2 = check_positive(cuff2, "cuff2")
    chain_length = check_positive(chain_length, "chain_length")
    return hexagon_complete((cuff1 / 2.0, cuff2 / 2.0, chain_length / 2.0))[2]


def bavard_radius(g):
    """Radius ``arccosh(1 / (2 sin(pi / (12g - 6))))`` bounding shortest loops."""
    g = check_genus(g)
    return math.acosh(1.0 / (2.0 * math.sin(math.pi / (12 * g - 6))))


__all__ = [
    "MobiusTransform",
    "HexagonAlternatingSides",
    "trace_to_length",
    "length_to_trace",
    "collar_width",
    "collar_boundary_length",
    "loop_collar_distance_bound",
    "hexagon_complete",
    "arc_length_from_chain",
    "bavard_radius",
]
