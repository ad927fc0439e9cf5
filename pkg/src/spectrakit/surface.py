"""Hyperbolic surfaces from Fenchel-Nielsen data, as explicit matrix groups.

Construction recipe
-------------------
One-holed torus with interior curve ``A`` of length ``l``, boundary length
``x`` and twist ``t``::

    A = diag(e^{l/2}, e^{-l/2})
    B = T_t @ [[b/2, p], [p, b/2]],   T_t = diag(e^{t/2}, e^{-t/2})

where ``b`` is fixed by requiring ``tr [A, B] = -2 cosh(x/2)`` and
``p = sqrt(b^2/4 - 1)``. At ``t = 0`` the axis of ``B`` crosses the axis of
``A`` at ``i`` perpendicularly, which is the symmetric point.

Closed genus 2 is glued from two such tori ``<A, B>`` and ``<C, D>`` with
interior cuffs ``l1``, ``l2`` and common boundary ``l3`` along the separating
curve ``K = ABab``. On each side the gluing point on ``K`` is the foot of the
orthogeodesic from the interior cuff (``A`` or ``C``) to ``K``; the third twist
is the signed distance between those feet along ``K``. The group is
written in the frame of ``K`` with the third twist split evenly between the
two halves, which keeps all four generators of moderate size. Up to
conjugation, the twist along ``A`` acts by ``B -> B T`` for the translation
``T`` along ``A``, and the twist along ``C`` by ``D -> D T'``.

Words use ``A, B`` (and ``C, D`` in genus 2); lower case means inverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Mapping

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import _plane as pl
from . import words as wd
from ._validation import check_int, check_positive, check_real
from .exceptions import (
    DegenerateSurface,
    DomainError,
    InconsistentData,
    NoSolution,
    NotHyperbolic,
)
from .hypgeom import (
    HYPERBOLIC_MARGIN,
    MobiusTransform,
    arc_length_from_chain,
    hexagon_complete,
    trace_to_length,
)

RELATOR_TOL = 1e-6
DEFAULT_BOUNDARY_LENGTH = 2.0


class Topology(str, Enum):
    ONE_HOLED_TORUS = "one_holed_torus"
    CLOSED_GENUS2 = "closed_genus2"


class Presentation(str, Enum):
    FREE2 = "Free2"
    GENUS2_STANDARD = "Genus2Standard"


CUFF_WORDS = {
    Topology.ONE_HOLED_TORUS: ("A",),
    Topology.CLOSED_GENUS2: ("A", "C", "ABab"),
}
BOUNDARY_WORD = "ABab"


@dataclass(frozen=True)
class FenchelNielsenSurface:
    """Cuff lengths and twists (in length units) of a pants decomposition.

    For the one-holed torus there is one interior cuff and ``boundary_length``
    is the length of the geodesic boundary. For closed genus 2 the cuffs are
    ``(A, C, ABab)``: two non-separating curves and the separating one.
    """

    topology: Topology
    cuff_lengths: tuple
    twists: tuple
    boundary_length: float | None = None

    def __post_init__(self):
        try:
            topo = Topology(self.topology)
        except ValueError:
            raise DomainError(f"unknown topology {self.topology!r}") from None
        object.__setattr__(self, "topology", topo)
        cuffs = tuple(check_positive(c, "cuff length") for c in self.cuff_lengths)
        twists = tuple(check_real(t, "twist") for t in self.twists)
        arity = 1 if topo is Topology.ONE_HOLED_TORUS else 3
        if len(cuffs) != arity or len(twists) != arity:
            raise DomainError(
                f"{topo.value} needs {arity} cuff lengths and twists, "
                f"got {len(cuffs)} and {len(twists)}"
            )
        object.__setattr__(self, "cuff_lengths", cuffs)
        object.__setattr__(self, "twists", twists)
        if topo is Topology.ONE_HOLED_TORUS:
            bl = DEFAULT_BOUNDARY_LENGTH if self.boundary_length is None else self.boundary_length
            object.__setattr__(self, "boundary_length", check_positive(bl, "boundary_length"))
        elif self.boundary_length is not None:
            raise DomainError("boundary_length only applies to the one-holed torus")

    @property
    def genus(self):
        return 1 if self.topology is Topology.ONE_HOLED_TORUS else 2

    def with_twist(self, index, value):
        twists = list(self.twists)
        twists[index] = value
        return replace(self, twists=tuple(twists))

    def mirror(self):
        return replace(self, twists=tuple(-t for t in self.twists))

    def to_dict(self):
        out = {
            "topology": self.topology.value,
            "cuff_lengths": list(self.cuff_lengths),
            "twists": list(self.twists),
        }
        if self.topology is Topology.ONE_HOLED_TORUS:
            out["boundary_length"] = self.boundary_length
        return out

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(
                topology=data["topology"],
                cuff_lengths=tuple(data["cuff_lengths"]),
                twists=tuple(data["twists"]),
                boundary_length=data.get("boundary_length"),
            )
        except KeyError as exc:
            raise DomainError(f"surface description lacks field {exc.args[0]!r}") from None
        except TypeError as exc:
            raise DomainError(f"malformed surface description: {exc}") from None


@dataclass(frozen=True)
class FuchsianGroup:
    """Generators of a surface group together with their presentation."""

    generators: tuple
    presentation: Presentation
    names: str = ""

    def __post_init__(self):
        gens = tuple(
            g if isinstance(g, MobiusTransform) else MobiusTransform.from_array(g)
            for g in self.generators
        )
        presentation = Presentation(self.presentation)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "presentation", presentation)
        expected = 2 if presentation is Presentation.FREE2 else 4
        if len(gens) != expected:
            raise DegenerateSurface(f"{presentation.value} needs {expected} generators")
        if not self.names:
            object.__setattr__(self, "names", "ABCD"[:expected])
        for name, g in zip(self.names, gens):
            if not g.is_hyperbolic():
                raise DegenerateSurface(f"generator {name} is not hyperbolic")
        if presentation is Presentation.GENUS2_STANDARD:
            err = relator_error(self)
            if err > RELATOR_TOL:
                raise DegenerateSurface(f"relator [A,B][C,D] off identity by {err:.3g}")

    def matrices(self):
        return np.array([g.as_array() for g in self.generators])

    def word_matrix(self, word):
        out = MobiusTransform.identity()
        gens = self.generators
        for i, sign in wd.parse(word, self.names):
            out = out @ (gens[i] if sign > 0 else gens[i].inverse())
        return out


def relator_error(group):
    a, b, c, d = group.generators
    r = (a @ b @ a.inverse() @ b.inverse() @ c @ d @ c.inverse() @ d.inverse()).as_array()
    sign = 1.0 if r[0, 0] + r[1, 1] > 0 else -1.0
    return float(np.max(np.abs(r - sign * np.eye(2))))


def curve_length(group, word):
    """Length of the closed geodesic in the free homotopy class of ``word``."""
    if not word:
        raise DomainError("word must be nonempty")
    return trace_to_length(group.word_matrix(word))


# --- construction ----------------------------------------------------------


def _torus_arrays(interior_length, twist, boundary_length):
    l = interior_length
    a = 2.0 * math.cosh(l / 2.0)
    b2 = (a * a - 2.0 + 2.0 * math.cosh(boundary_length / 2.0)) / (a * a / 4.0 - 1.0)
    b = math.sqrt(b2)
    p = math.sqrt(b2 / 4.0 - 1.0)
    h = math.exp(l / 2.0)
    A = pl.mat(h, 0.0, 0.0, 1.0 / h)
    s = math.exp(twist / 2.0)
    B = pl.mat(s, 0.0, 0.0, 1.0 / s) @ pl.mat(b / 2.0, p, p, b / 2.0)
    return A, B


def build_one_holed_torus(interior_length, twist=0.0, boundary_length=DEFAULT_BOUNDARY_LENGTH):
    """Free group ``<A, B>`` uniformizing a one-holed torus.

    ``A`` has length ``interior_length``, the commutator ``ABab`` is the
    boundary, and ``twist`` translates ``B`` along the axis of ``A``.
    """
    interior_length = check_positive(interior_length, "interior_length")
    twist = check_real(twist, "twist")
    boundary_length = check_positive(boundary_length, "boundary_length")
    A, B = _torus_arrays(interior_length, twist, boundary_length)
    group = FuchsianGroup((A, B), Presentation.FREE2)
    k = group.word_matrix(BOUNDARY_WORD)
    if abs(k.trace) <= 2.0 + HYPERBOLIC_MARGIN:
        raise DegenerateSurface("boundary commutator is not hyperbolic")
    return group


def torus_from_traces(ta, tb, tab):
    """Free group with prescribed traces of ``A``, ``B`` and ``AB``.

    The triple must describe a one-holed torus with geodesic boundary, i.e.
    ``ta^2 + tb^2 + tab^2 - ta tb tab < 0`` and all traces > 2.
    """
    ta, tb, tab = (float(x) for x in (ta, tb, tab))
    if min(ta, tb, tab) <= 2.0:
        raise DomainError("traces must exceed 2")
    kappa = ta * ta + tb * tb + tab * tab - ta * tb * tab - 2.0
    if kappa >= -2.0 - HYPERBOLIC_MARGIN:
        raise DegenerateSurface(f"commutator trace {kappa:.6g} is not below -2")
    h = math.exp(math.acosh(ta / 2.0))
    # B = [[x, y], [y, w]] with x + w = tb and h x + w / h = tab
    x = (tab - tb / h) / (h - 1.0 / h)
    w = tb - x
    y2 = x * w - 1.0
    if y2 <= 0.0:
        raise DegenerateSurface("trace triple does not give a torus with geodesic boundary")
    y = math.sqrt(y2)
    return FuchsianGroup((pl.mat(h, 0.0, 0.0, 1.0 / h), pl.mat(x, y, y, w)), Presentation.FREE2)


def _as_array(m):
    return m.as_array() if isinstance(m, MobiusTransform) else np.asarray(m, dtype=float)


def _axis(m):
    return pl.fixed_points(_as_array(m))


def _comm(a, b):
    return a @ b @ pl.inv(a) @ pl.inv(b)


def _gluing_frame(X, Y):
    """Normalizer for ``K = [X, Y]`` sending the foot from ``axis(X)`` to ``i``."""
    K = _comm(X, Y)
    rep, att = _axis(K)
    foot = pl.common_perpendicular(_axis(X), (rep, att))[1]
    return pl.normalizer(rep, att, foot)


def build_genus2(fn):
    """Closed genus-2 group ``<A, B, C, D | [A,B][C,D]>`` from Fenchel-Nielsen data."""
    if not isinstance(fn, FenchelNielsenSurface) or fn.topology is not Topology.CLOSED_GENUS2:
        raise DomainError("build_genus2 needs closed genus-2 Fenchel-Nielsen data")
    l1, l2, l3 = fn.cuff_lengths
    t1, t2, t3 = fn.twists
    A, B = _torus_arrays(l1, t1, l3)
    C0, D0 = _torus_arrays(l2, t2, l3)
    try:
        M1 = _gluing_frame(A, B)
        M2 = _gluing_frame(C0, D0)
    except (ValueError, ZeroDivisionError) as exc:
        raise DegenerateSurface(f"gluing failed: {exc}") from None
    # work in the frame of the separating curve, splitting the twist evenly
    # between the halves so neither side's entries blow up
    s = math.exp(t3 / 4.0)
    L = pl.mat(1.0 / s, 0.0, 0.0, s) @ M1
    R = pl.mat(s, 0.0, 0.0, 1.0 / s) @ pl.mat(0.0, -1.0, 1.0, 0.0) @ M2
    Li, Ri = pl.inv(L), pl.inv(R)
    return FuchsianGroup((L @ A @ Li, L @ B @ Li, R @ C0 @ Ri, R @ D0 @ Ri), Presentation.GENUS2_STANDARD)


def build_surface(fn):
    if fn.topology is Topology.ONE_HOLED_TORUS:
        return build_one_holed_torus(fn.cuff_lengths[0], fn.twists[0], fn.boundary_length)
    return build_genus2(fn)


def sample_genus2(rng, cuff_range=(1.5, 3.0), twist_range=(-1.0, 1.0)):
    """Random genus-2 Fenchel-Nielsen data drawn from ``rng``.

    Cuffs well above the systole bound keep spectra cheap to enumerate.
    """
    rng = np.random.default_rng(rng)
    cuffs = rng.uniform(*cuff_range, size=3)
    twists = rng.uniform(*twist_range, size=3)
    return FenchelNielsenSurface(
        Topology.CLOSED_GENUS2, tuple(float(c) for c in cuffs), tuple(float(t) for t in twists)
    )


# --- twist measurement ---------------------------------------------------------


def _interior_twist(X, Y):
    """Twist of the torus ``<X, Y>`` along ``X``, measured with transversal ``Y``."""
    axis_x = _axis(X)
    other = (pl.act(Y, axis_x[0]), pl.act(Y, axis_x[1]))
    foot1, foot2 = pl.common_perpendicular(axis_x, other)
    q = pl.act(pl.inv(Y), foot2)
    return pl.signed_distance_along(axis_x[0], axis_x[1], q, foot1)


def measure_twists(group):
    """Recover the Fenchel-Nielsen twists of a group built by this module."""
    m = [g.as_array() for g in group.generators]
    if group.presentation is Presentation.FREE2:
        return (_interior_twist(m[0], m[1]),)
    A, B, C, D = m
    K = _comm(A, B)
    rep, att = _axis(K)
    foot_a = pl.common_perpendicular(_axis(A), (rep, att))[1]
    foot_c = pl.common_perpendicular(_axis(C), (rep, att))[1]
    t3 = pl.signed_distance_along(rep, att, foot_a, foot_c)
    return (_interior_twist(A, B), _interior_twist(C, D), t3)


def measure_surface(group):
    """Fenchel-Nielsen data of a group built by this module."""
    twists = measure_twists(group)
    if group.presentation is Presentation.FREE2:
        return FenchelNielsenSurface(
            Topology.ONE_HOLED_TORUS,
            (curve_length(group, "A"),),
            twists,
            boundary_length=curve_length(group, BOUNDARY_WORD),
        )
    cuffs = tuple(curve_length(group, w) for w in CUFF_WORDS[Topology.CLOSED_GENUS2])
    return FenchelNielsenSurface(Topology.CLOSED_GENUS2, cuffs, twists)


# --- curve-and-chain systems ------------------------------------------------------


@dataclass(frozen=True)
class ArcRecord:
    """An arc between two curves; ``sides`` tells which side of each curve it leaves.

    Sides are ``"+"`` or ``"-"`` for a non-separating curve seen from a pants
    where it appears twice, and ``""`` otherwise.
    """

    curves: tuple
    sides: tuple = ("", "")


@dataclass(frozen=True)
class CurveChainSystem:
    """Curves, arcs and chains with their lengths and twist parameters.

    ``curves`` and ``chains`` map labels to generator words; ``chains`` has
    one entry per arc, keyed by the arc label.
    """

    curves: Mapping
    arcs: Mapping
    chains: Mapping
    curve_lengths: Mapping = field(default_factory=dict)
    twist_params: Mapping = field(default_factory=dict)
    chain_lengths: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if set(self.chains) != set(self.arcs):
            raise InconsistentData("there must be exactly one chain per arc")
        for label, arc in self.arcs.items():
            for c in arc.curves:
                if c not in self.curves:
                    raise InconsistentData(f"arc {label} ends on unknown curve {c!r}")

    def is_full_decomposition(self, genus):
        return len(self.arcs) == 6 * genus - 6


# Pants P1 has boundary (A, Bab, ABab^-1) and P2 has (C, Dcd, CDcd^-1);
# each arc's chain is the remaining boundary of its pants.
_PANTS_ARCS = {
    "a1": (ArcRecord(("g1", "g1"), ("+", "-")), "ABab"),
    "a2": (ArcRecord(("g1", "g3"), ("+", "")), "Bab"),
    "a3": (ArcRecord(("g1", "g3"), ("-", "")), "A"),
    "a4": (ArcRecord(("g2", "g2"), ("+", "-")), "CDcd"),
    "a5": (ArcRecord(("g2", "g3"), ("+", "")), "Dcd"),
    "a6": (ArcRecord(("g2", "g3"), ("-", "")), "C"),
}
_CURVES = {"g1": "A", "g2": "C", "g3": "ABab"}


def pants_curve_chain_system(curve_lengths=None, twist_params=None, chain_lengths=None):
    """The genus-2 pants decomposition as a curve-and-chain system (lengths optional)."""
    return CurveChainSystem(
        curves=dict(_CURVES),
        arcs={k: v[0] for k, v in _PANTS_ARCS.items()},
        chains={k: v[1] for k, v in _PANTS_ARCS.items()},
        curve_lengths=dict(curve_lengths or {}),
        twist_params=dict(twist_params or {}),
        chain_lengths=dict(chain_lengths or {}),
    )


def measure_cc(group):
    """Measure curve lengths, twists and chain lengths on a genus-2 group."""
    if group.presentation is not Presentation.GENUS2_STANDARD:
        raise DomainError("curve-and-chain measurement needs a closed genus-2 group")
    twists = measure_twists(group)
    return pants_curve_chain_system(
        {k: curve_length(group, w) for k, w in _CURVES.items()},
        dict(zip(("g1", "g2", "g3"), twists)),
        {k: curve_length(group, v[1]) for k, v in _PANTS_ARCS.items()},
    )


def cc_reconstruct(cc, tol=1e-6):
    """Fenchel-Nielsen data from the genus-2 pants curve-and-chain system.

    Arc lengths come from the chains; each pants' three arcs then determine
    its half-cuffs through the hexagon relation, which must agree with the
    stated curve lengths.
    """
    if set(cc.curves) != set(_CURVES) or set(cc.arcs) != set(_PANTS_ARCS):
        raise DomainError("only the genus-2 pants curve-and-chain system is reconstructible")
    try:
        L = {k: check_positive(cc.curve_lengths[k], f"length of {k}") for k in _CURVES}
        twists = tuple(check_real(cc.twist_params[k], f"twist along {k}") for k in ("g1", "g2", "g3"))
        chain = {k: check_positive(cc.chain_lengths[k], f"chain {k}") for k in _PANTS_ARCS}
    except KeyError as exc:
        raise InconsistentData(f"missing data for {exc.args[0]!r}") from None
    except DomainError as exc:
        raise InconsistentData(str(exc)) from None

    recovered = {}
    for inner, arcs in (("g1", ("a1", "a2", "a3")), ("g2", ("a4", "a5", "a6"))):
        pair, plus, minus = arcs
        # boundary order (inner+, inner-, g3); arc opposite boundary i
        a12 = arc_length_from_chain(L[inner], L[inner], chain[pair])
        a13 = arc_length_from_chain(L[inner], L["g3"], chain[plus])
        a23 = arc_length_from_chain(L[inner], L["g3"], chain[minus])
        h1, h2, h3 = (2.0 * x for x in hexagon_complete((a23, a13, a12)))
        for got, want, what in ((h1, L[inner], inner), (h2, L[inner], inner), (h3, L["g3"], "g3")):
            if abs(got - want) > tol * max(1.0, want):
                raise InconsistentData(
                    f"chains around {inner} imply length {got:.9g} for {what}, stated {want:.9g}"
                )
        recovered[inner] = (h1 + h2) / 2.0
        recovered.setdefault("g3", []).append(h3)
    cuffs = (recovered["g1"], recovered["g2"], sum(recovered["g3"]) / 2.0)
    return FenchelNielsenSurface(Topology.CLOSED_GENUS2, cuffs, twists)


# --- twist deformations -----------------------------------------------------------


def _unit_axis(m):
    """Return ``(half_length, S)`` with ``m = +-(cosh h I + sinh h S)`` and ``S^2 = I``."""
    m = _as_array(m)
    if m[0, 0] + m[1, 1] < 0:
        m = -m
    h = math.acosh((m[0, 0] + m[1, 1]) / 2.0)
    return h, (m - math.cosh(h) * np.eye(2)) / math.sinh(h)


def translations_along(m, amounts):
    """Translations by each of ``amounts`` along the axis of ``m``, towards its attracting end."""
    _, S = _unit_axis(m)
    s = np.asarray(amounts, dtype=float)[:, None, None] / 2.0
    return np.cosh(s) * np.eye(2) + np.sinh(s) * S


def _cuff_axis_word(fn, index):
    if fn.topology is Topology.ONE_HOLED_TORUS:
        return "A"
    return CUFF_WORDS[Topology.CLOSED_GENUS2][index]


def twisted_generators(group, index, amounts):
    """Generators after adding each of ``amounts`` to twist ``index``; shape ``(n, k, 2, 2)``."""
    gens = group.matrices()
    n = len(amounts)
    out = np.broadcast_to(gens, (n,) + gens.shape).copy()
    # right multiplication keeps [A, B] (resp. [C, D]) fixed; it differs from
    # twisting the far side by a global conjugation, and stays well conditioned
    if index == 0:
        out[:, 1] = gens[1] @ translations_along(gens[0], amounts)
    elif index == 1:
        out[:, 3] = gens[3] @ translations_along(gens[2], amounts)
    else:
        K = group.word_matrix(BOUNDARY_WORD).as_array()
        half = np.asarray(amounts, dtype=float) / 2.0
        T, S = translations_along(K, half), translations_along(K, -half)
        Ti, Si = pl.batch_inv(T), pl.batch_inv(S)
        out[:, 0] = S @ gens[0] @ Si
        out[:, 1] = S @ gens[1] @ Si
        out[:, 2] = T @ gens[2] @ Ti
        out[:, 3] = T @ gens[3] @ Ti
    return out


def batch_word_matrices(gens, word, names="ABCD"):
    """Evaluate ``word`` on a batch of generator tuples of shape ``(n, k, 2, 2)``."""
    gens = np.asarray(gens, dtype=float)
    inv = pl.batch_inv(gens.reshape(-1, 2, 2)).reshape(gens.shape)
    out = np.broadcast_to(np.eye(2), (gens.shape[0], 2, 2)).copy()
    for i, sign in wd.parse(word, names[: gens.shape[1]]):
        out = out @ (gens[:, i] if sign > 0 else inv[:, i])
    return out


def twist_length_function(family, word, free_twist=0):
    """Vectorized map from absolute values of one twist to the length of ``word``."""
    group = build_surface(family)
    base = family.twists[free_twist]
    names = group.names
    wd.parse(word, names)

    def f(ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        gens = twisted_generators(group, free_twist, ts - base)
        ms = batch_word_matrices(gens, word, names)
        tr = np.abs(ms[:, 0, 0] + ms[:, 1, 1])
        if np.any(tr <= 2.0 + HYPERBOLIC_MARGIN):
            raise NotHyperbolic(f"word {word!r} is not hyperbolic along the twist family")
        return 2.0 * np.arccosh(tr / 2.0)

    return f


def _minimize_convex(f, center, scale):
    grid = center + scale * np.linspace(-2.0, 2.0, 81)
    for _ in range(60):
        vals = f(grid)
        k = int(np.argmin(vals))
        if 0 < k < len(grid) - 1:
            break
        width = grid[-1] - grid[0]
        grid = grid[k] + width * np.linspace(-1.0, 1.0, 81)
    else:
        raise NoSolution("length function has no minimum along the twist")
    lo, hi = grid[k - 1], grid[k + 1]
    res = minimize_scalar(
        lambda t: float(f(t)[0]), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12}
    )
    t_star = float(res.x)
    return t_star, float(f(t_star)[0])


def twist_minimum(family, word, free_twist=0):
    """Minimizer and minimum of the (strictly convex) twist length function."""
    f = twist_length_function(family, word, free_twist)
    period = family.cuff_lengths[free_twist] if family.topology is Topology.CLOSED_GENUS2 else family.cuff_lengths[0]
    return _minimize_convex(f, family.twists[free_twist], period)


def twist_solutions(family, transversal_word, target_length, free_twist=0, window=None, tol=1e-9):
    """All twists at which ``transversal_word`` has length ``target_length``.

    Length is strictly convex along a twist, so there are at most two
    solutions on the whole real line; they are found by bisection on the two
    monotone branches around the minimizer. ``window = (lo, hi)`` keeps only
    solutions in ``[lo, hi)``, e.g. ``(0, cuff_length)`` for one period.
    A target within ``tol`` of the minimum returns the minimizer alone.
    """
    free_twist = check_int(free_twist, "free_twist", minimum=0)
    if free_twist >= len(family.twists):
        raise DomainError(f"surface has no twist number {free_twist}")
    target = check_positive(target_length, "target_length")
    f = twist_length_function(family, transversal_word, free_twist)
    period = family.cuff_lengths[free_twist]
    base = family.twists[free_twist]
    if np.ptp(f([base - period, base, base + period])) < 1e-10:
        raise DomainError(f"length of {transversal_word!r} does not vary with twist {free_twist}")
    t_star, f_min = _minimize_convex(f, base, period)
    if target < f_min - tol:
        raise NoSolution(f"target {target!r} is below the minimum length {f_min!r}")
    if target <= f_min + tol:
        sols = [t_star]
    else:
        g = lambda t: float(f(t)[0]) - target
        sols = []
        for direction in (-1.0, 1.0):
            step = period
            while g(t_star + direction * step) <= 0.0:
                step *= 2.0
            a, b = sorted((t_star, t_star + direction * step))
            sols.append(brentq(g, a, b, xtol=1e-14, rtol=4 * np.finfo(float).eps))
    if window is not None:
        lo, hi = window
        sols = [t for t in sols if lo <= t < hi]
    return tuple(sorted(sols))


__all__ = [
    "Topology",
    "Presentation",
    "FenchelNielsenSurface",
    "FuchsianGroup",
    "ArcRecord",
    "CurveChainSystem",
    "build_one_holed_torus",
    "torus_from_traces",
    "build_genus2",
    "build_surface",
    "sample_genus2",
    "curve_length",
    "relator_error",
    "measure_twists",
    "measure_surface",
    "pants_curve_chain_system",
    "measure_cc",
    "cc_reconstruct",
    "translations_along",
    "twisted_generators",
    "batch_word_matrices",
    "twist_length_function",
    "twist_minimum",
    "twist_solutions",
]
