"""Gap functions and the boundary McShane identity on one-holed tori.

For a one-holed torus with boundary ``beta`` of length ``x`` every embedded
pair of pants bounded by ``beta`` is the complement of one simple closed
geodesic ``gamma``, so the identity reads

    sum over simple gamma of mu(x, l(gamma), l(gamma)) = 1.

Simple closed geodesics are enumerated through trace triples: the triangles
of the Farey tessellation carry traces ``(x, y, z)`` of three pairwise
once-intersecting simple curves, and crossing an edge replaces ``z`` by
``x y - z``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._validation import check_positive, check_real
from .exceptions import DomainError
from .hypgeom import trace_to_length
from .surface import BOUNDARY_WORD, FuchsianGroup, Presentation
from .words import christoffel_word

INVARIANT_TOL = 1e-6


@dataclass(frozen=True)
class GapInputs:
    """Boundary lengths ``(x, y, z)`` of a pair of pants; ``x`` is ``beta``."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, check_positive(getattr(self, name), name))


def _inputs(inp, y=None, z=None):
    if isinstance(inp, GapInputs):
        return inp
    if y is None:
        return GapInputs(*inp)
    return GapInputs(inp, y, z)


def mu(inp, y=None, z=None):
    """``(4/x) arctanh(sinh(x/2) / (cosh(x/2) + e^{(y+z)/2}))``.

    Accepts a :class:`GapInputs` or the three lengths.
    """
    p = _inputs(inp, y, z)
    s = math.exp(-(p.y + p.z) / 2.0)
    ratio = math.sinh(p.x / 2.0) * s / (math.cosh(p.x / 2.0) * s + 1.0)
    return 4.0 / p.x * math.atanh(ratio)


def eta(inp, y=None, z=None):
    """``1 - (2/x) arctanh(sinh(x/2) sinh(y/2) / (cosh(z/2) + cosh(x/2) cosh(y/2)))``."""
    p = _inputs(inp, y, z)
    ratio = math.sinh(p.x / 2.0) * math.sinh(p.y / 2.0) / (
        math.cosh(p.z / 2.0) + math.cosh(p.x / 2.0) * math.cosh(p.y / 2.0)
    )
    return 1.0 - 2.0 / p.x * math.atanh(ratio)


@dataclass(frozen=True)
class MarkovTriple:
    """Traces of ``A``, ``B`` and ``AB`` for a one-holed torus group."""

    ta: float
    tb: float
    tab: float

    def __post_init__(self):
        for name in ("ta", "tb", "tab"):
            v = check_real(getattr(self, name), name)
            if v <= 2.0:
                raise DomainError(f"{name} must exceed 2, got {v!r}")
            object.__setattr__(self, name, v)
        if self.boundary_trace <= 2.0:
            raise DomainError("trace triple does not describe a torus with geodesic boundary")

    @classmethod
    def from_group(cls, group):
        a, b = group.generators
        return cls(abs(a.trace), abs(b.trace), abs((a @ b).trace))

    @property
    def invariant(self):
        """``ta^2 + tb^2 + tab^2 - ta tb tab``, preserved by every move."""
        return self.ta**2 + self.tb**2 + self.tab**2 - self.ta * self.tb * self.tab

    @property
    def boundary_trace(self):
        """``|tr [A, B]| = 2 - invariant``."""
        return 2.0 - self.invariant

    @property
    def boundary_length(self):
        return 2.0 * math.acosh(self.boundary_trace / 2.0)

    def flip(self, i):
        """Replace trace ``i`` by the product of the other two minus itself."""
        t = [self.ta, self.tb, self.tab]
        j, k = [m for m in range(3) if m != i]
        t[i] = t[j] * t[k] - t[i]
        return MarkovTriple(*t)


@dataclass(frozen=True)
class SimpleGeodesic:
    """A simple closed geodesic with slope ``(p, q)`` relative to ``(A, B)``."""

    slope: tuple
    word: str
    trace: float

    @property
    def length(self):
        return 2.0 * math.acosh(self.trace / 2.0)


def _norm(v):
    p, q = v
    return (p, q) if p > 0 or (p == 0 and q > 0) else (-p, -q)


def _third(u, v, avoid):
    """The Farey neighbour ``u +- v`` of the edge ``{u, v}`` other than ``avoid``."""
    plus = _norm((u[0] + v[0], u[1] + v[1]))
    return _norm((u[0] - v[0], u[1] - v[1])) if plus == avoid else plus


def _descend(regions):
    """Flip towards smaller traces until no flip decreases (the sink triangle)."""
    while True:
        best = None
        for i in range(3):
            j, k = [m for m in range(3) if m != i]
            new = regions[j][0] * regions[k][0] - regions[i][0]
            if new < regions[i][0] - 1e-12 and (best is None or new < best[1]):
                best = (i, new)
        if best is None:
            return regions
        i, new = best
        j, k = [m for m in range(3) if m != i]
        slope = _third(regions[j][1], regions[k][1], regions[i][1])
        regions = list(regions)
        regions[i] = (new, slope)


def simple_traces(triple, cutoff):
    """``(trace, slope)`` for every simple closed curve of length ``<= cutoff``.

    Slopes are relative to ``A = (1, 0)``, ``B = (0, 1)``, ``AB = (1, 1)``.
    Beyond an edge where the new trace ``w`` exceeds both neighbours every
    further trace exceeds ``w``, so such a branch is pruned once ``w`` passes
    the threshold ``2 cosh(cutoff / 2)``.
    """
    cutoff = float(cutoff)
    if cutoff <= 0.0:
        return []
    bound = 2.0 * math.cosh(cutoff / 2.0)
    start = [(triple.ta, (1, 0)), (triple.tb, (0, 1)), (triple.tab, (1, 1))]
    sink = _descend(start)
    found = {r[1]: r[0] for r in sink if r[0] <= bound}
    stack = [(sink[0], sink[1], sink[2]), (sink[1], sink[2], sink[0]), (sink[2], sink[0], sink[1])]
    while stack:
        X, Y, Z = stack.pop()
        w = X[0] * Y[0] - Z[0]
        if w > bound and w >= max(X[0], Y[0]):
            continue
        W = (w, _third(X[1], Y[1], Z[1]))
        if w <= bound:
            found[W[1]] = w
        stack.append((X, W, Y))
        stack.append((W, Y, X))
    return sorted(((t, s) for s, t in found.items()), key=lambda r: (r[0], r[1]))


def enumerate_simple_torus(group, cutoff):
    """Simple closed geodesics of length ``<= cutoff`` on a one-holed torus group."""
    if not isinstance(group, FuchsianGroup) or group.presentation is not Presentation.FREE2:
        raise DomainError("simple geodesic enumeration needs a one-holed torus group")
    triple = MarkovTriple.from_group(group)
    return [SimpleGeodesic(s, christoffel_word(*s), t) for t, s in simple_traces(triple, cutoff)]


@dataclass(frozen=True)
class McShaneReport:
    boundary_length: float
    cutoff: float
    terms: int
    partial_sum: float
    deficit: float

    def to_dict(self):
        return {
            "boundary_length": self.boundary_length,
            "cutoff": self.cutoff,
            "terms": self.terms,
            "partial_sum": self.partial_sum,
            "deficit": self.deficit,
        }


def mcshane_report(group, boundary_length=None, cutoff=20.0):
    """Partial sum of the identity over simple geodesics up to ``cutoff``."""
    if boundary_length is None:
        boundary_length = trace_to_length(group.word_matrix(BOUNDARY_WORD))
    x = check_positive(boundary_length, "boundary_length")
    cutoff = check_real(cutoff, "cutoff")
    curves = enumerate_simple_torus(group, cutoff) if cutoff > 0 else []
    total = math.fsum(mu(x, c.length, c.length) for c in curves)
    return McShaneReport(x, cutoff, len(curves), total, 1.0 - total)


def verify_identity(group, boundary_length=None, cutoff=20.0):
    """Deficit ``1 - sum mu(x, l, l)`` over simple geodesics of length ``<= cutoff``."""
    return mcshane_report(group, boundary_length, cutoff).deficit


def pants_count(group, L):
    """Embedded pants bounded by the boundary with other cuffs ``<= L``.

    On a one-holed torus there is one such pants per simple closed geodesic.
    """
    return len(enumerate_simple_torus(group, L))


def pants_count_check(group, L):
    """``(count, e^L, count <= e^L)``."""
    n = pants_count(group, L)
    bound = math.exp(L)
    return n, bound, n <= bound


__all__ = [
    "GapInputs",
    "MarkovTriple",
    "SimpleGeodesic",
    "McShaneReport",
    "mu",
    "eta",
    "simple_traces",
    "enumerate_simple_torus",
    "mcshane_report",
    "verify_identity",
    "pants_count",
    "pants_count_check",
]
