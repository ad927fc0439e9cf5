"""Closed-form counting bounds for isospectral sets, evaluated in log space.

Values such as ``g^{154 g}`` overflow a double long before ``g = 100``, so
every evaluator returns a natural logarithm unless its name says otherwise.
Where an exact count and a rounded envelope are both available, both are
returned and compared rather than assumed to be ordered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_genus, check_int
from .exceptions import InvalidContext
from .hypgeom import bavard_radius

MAINCOUNT_EXPONENT = 154
SIMPLIFIED_EXPONENT = 114
LOG_A = 6.0 * math.log(3.0) + 75.0 * math.log(2.0) + 67.0


@dataclass(frozen=True)
class BoundContext:
    """Genus with curve-and-chain cardinalities ``k = k0 + k1 <= 3g - 3``.

    ``k0`` counts the short curves handled as thin parts and ``k1`` the
    remaining curves of the short system.
    """

    g: int
    k: int = 0
    k0: int = 0
    k1: int = 0

    def __post_init__(self):
        check_genus(self.g)
        for name in ("k", "k0", "k1"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 0:
                raise InvalidContext(f"{name} must be a nonnegative integer, got {value!r}")
        if self.k0 + self.k1 != self.k:
            raise InvalidContext(f"k0 + k1 = {self.k0 + self.k1} differs from k = {self.k}")
        if self.k > 3 * self.g - 3:
            raise InvalidContext(f"k = {self.k} exceeds 3g - 3 = {3 * self.g - 3}")


def ncc_bound(g):
    """Log of ``e^-6 (12^6 / e^5)^(g-1) (g-1)^(6g-6)``, the curve-and-chain type count."""
    g = check_genus(g)
    return -6.0 + (g - 1) * (6.0 * math.log(12.0) - 5.0) + (6 * g - 6) * math.log(g - 1)


def cc_length_bounds(g):
    """``(curve, chain, transversal, nextgeom)`` length bounds (not logs).

    ``2 log 4g``, ``8 log 4g``, ``14 log 4g`` and ``6 log 8g``.
    """
    g = check_genus(g)
    l4 = math.log(4 * g)
    return 2.0 * l4, 8.0 * l4, 14.0 * l4, 6.0 * math.log(8 * g)


def nextgeom_raw(g):
    """``6 log 4g + arcsinh(1) + 2 sqrt 2 log(1 + sqrt 2)``, before rounding up to ``6 log 8g``."""
    g = check_genus(g)
    return 6.0 * math.log(4 * g) + math.asinh(1.0) + 2.0 * math.sqrt(2.0) * math.log(1.0 + math.sqrt(2.0))


def przytycki_bound(chi):
    """``2 |chi| (|chi| + 1)`` arcs pairwise intersecting at most once."""
    chi = abs(check_int(chi, "chi"))
    return 2 * chi * (chi + 1)


def type_one_report(g):
    """Exact type (I) counts next to their stated envelopes, with the comparisons."""
    g = check_genus(g)
    count = (8 * g - 8) * (2 * g - 1)
    count_env = 16 * (g - 1) ** 2
    return {
        "count": count,
        "count_envelope": count_env,
        "count_within_envelope": count < count_env,
        "isometry_types": 2 * count,
        "isometry_envelope": 2 * count_env,
        "isometry_within_envelope": 2 * count < 2 * count_env,
    }


@dataclass(frozen=True)
class ThinBounds:
    """Logs of the Przytycki, type (I), type (II) and thick-to-thin bounds."""

    przytycki: float
    type_one: float
    type_two: float
    thin: float
    thin_per_step: float


def thin_bounds(g, context=None):
    """Thin-part bounds for genus ``g``; ``context.k0`` sets the thin step count.

    ``type_one`` is the exact ``2 (8g-8)(2g-1)``; ``thin`` is ``8^(k0+1) g^(12 k0)``
    and ``thin_per_step`` is ``k0`` times the per-curve estimate ``8 (8g)^12``.
    """
    g = check_genus(g)
    ctx = context if context is not None else BoundContext(g)
    if ctx.g != g:
        raise InvalidContext("context genus differs from g")
    k0 = ctx.k0
    return ThinBounds(
        przytycki=math.log(przytycki_bound(2 * g - 2)),
        type_one=math.log(2 * (8 * g - 8) * (2 * g - 1)),
        type_two=math.log(4.0) + 12.0 * math.log(8 * g),
        thin=(k0 + 1) * math.log(8.0) + 12 * k0 * math.log(g),
        thin_per_step=k0 * (math.log(8.0) + 12.0 * math.log(8 * g)),
    )


def _factor(g, power):
    """Log of ``16 e^6 (g - 1) g^power``."""
    return math.log(16.0) + 6.0 + math.log(g - 1) + power * math.log(g)


def bigcount(context):
    """Log of the isometry-type count for one curve-and-chain configuration."""
    if not isinstance(context, BoundContext):
        raise InvalidContext("bigcount needs a BoundContext")
    g, k, k0, k1 = context.g, context.k, context.k0, context.k1
    return (
        ncc_bound(g)
        + k * _factor(g, 2)
        + (6 * g - 6) * _factor(g, 8)
        + k1 * _factor(g, 14)
        + k1 * math.log(2.0)
        + (k0 + 1) * math.log(8.0)
        + 12 * k0 * math.log(g)
    )


def max_bigcount(g):
    """Largest :func:`bigcount` over admissible contexts, with its maximizer.

    The log is linear in ``(k0, k1)`` with positive coefficients, so the
    maximum sits at ``k = 3g - 3`` with all weight on ``k0`` or on ``k1``.
    """
    g = check_genus(g)
    top = 3 * g - 3
    candidates = (BoundContext(g, top, 0, top), BoundContext(g, top, top, 0))
    return max(((bigcount(c), c) for c in candidates), key=lambda pair: pair[0])


def simplified_bound(g):
    """Log of ``(8 / e^6) A^(g-1) g^(B (g-1))`` with ``A = 3^6 2^75 e^67``, ``B = 114``."""
    g = check_genus(g)
    return math.log(8.0) - 6.0 + (g - 1) * LOG_A + SIMPLIFIED_EXPONENT * (g - 1) * math.log(g)


def maincount_bound(g):
    """Log of ``g^(154 g)``."""
    g = check_genus(g)
    return MAINCOUNT_EXPONENT * g * math.log(g)


def sweep_size(g):
    """``16 e^6 (g-1) g^14``, the length of the initial question sweep (a float)."""
    g = check_genus(g)
    return math.exp(_factor(g, 14))


def question_budget(g, family_size=None, log_family_size=None):
    """Log of ``M - 1 + 16 e^6 (g-1) g^14 + 3g - 3``.

    ``M`` defaults to the largest isometry-type count, the size of the
    candidate family the protocol may have to separate.
    """
    g = check_genus(g)
    if log_family_size is None:
        if family_size is None:
            log_family_size = max_bigcount(g)[0]
        else:
            log_family_size = math.log(check_int(family_size, "family_size", minimum=1))
    rest = sweep_size(g) + 3 * g - 4
    return float(np.logaddexp(log_family_size, math.log(rest)))


def bounds_table(g):
    """Every named bound at genus ``g``, as a JSON-ready dict."""
    g = check_genus(g)
    curve, chain, transversal, nextgeom = cc_length_bounds(g)
    thin = thin_bounds(g, BoundContext(g, 1, 1, 0))
    log_max, arg = max_bigcount(g)
    return {
        "genus": g,
        "bavard_radius": bavard_radius(g),
        "log_ncc": ncc_bound(g),
        "cc_length": {
            "curve": curve,
            "chain": chain,
            "transversal": transversal,
            "nextgeom": nextgeom,
            "nextgeom_raw": nextgeom_raw(g),
        },
        "przytycki": przytycki_bound(2 * g - 2),
        "type_one": type_one_report(g),
        "log_type_two": thin.type_two,
        "log_thin_k0_1": thin.thin,
        "log_thin_per_step_k0_1": thin.thin_per_step,
        "log_bigcount_max": log_max,
        "bigcount_argmax": {"k": arg.k, "k0": arg.k0, "k1": arg.k1},
        "log_simplified_bound": simplified_bound(g),
        "log_maincount_bound": maincount_bound(g),
        "log_sweep_size": math.log(sweep_size(g)),
        "log_question_budget": question_budget(g),
    }


__all__ = [
    "BoundContext",
    "ThinBounds",
    "ncc_bound",
    "cc_length_bounds",
    "nextgeom_raw",
    "przytycki_bound",
    "type_one_report",
    "thin_bounds",
    "bigcount",
    "max_bigcount",
    "simplified_bound",
    "maincount_bound",
    "sweep_size",
    "question_budget",
    "bounds_table",
]
