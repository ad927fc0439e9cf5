"""Length spectra: certified enumeration of primitive closed geodesics.

Method
------
1. Build a Dirichlet polygon ``D`` for the group, certified exact by its
   area (cut down to the convex core when the surface has boundary). Let
   ``rho`` be its circumradius.
2. Every closed geodesic of length ``<= L`` has a lift whose axis crosses
   ``D``; the corresponding element ``g`` moves the centre by at most
   ``L + 2 rho``. All such elements are found by a breadth-first walk over
   tiles ``u D`` through the side pairings, expanding tiles within
   ``L + 3 rho`` (a tile meeting a ball of radius ``r`` has centre within
   ``r + rho``, and tiles crossed by a segment are face-connected).
3. Among elements with translation length ``<= L`` whose axis meets ``D``,
   those sharing an axis generate a cyclic group: only the shortest is
   primitive. Two such primitive elements are conjugate exactly when a chain
   of conjugations by neighbours of ``D`` links them, because the tiles
   along an axis form a chain of neighbours.

The word length budget limits the words used to reach tiles; if a needed
tile is beyond it the result is flagged uncertified.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.cluster.hierarchy import DisjointSet
from scipy.spatial import cKDTree
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import _domain as dom
from . import _plane as pl
from . import words as wd
from ._validation import check_int, check_positive
from .exceptions import BudgetExhausted, DomainError, IncomparableCutoffs
from .hypgeom import HYPERBOLIC_MARGIN
from .surface import (
    BOUNDARY_WORD,
    FenchelNielsenSurface,
    FuchsianGroup,
    Presentation,
    build_surface,
)

DEFAULT_MERGE_TOLERANCE = 1e-6
DEFAULT_MAX_WORD_LENGTH = 256
AXIS_TOL = 1e-9


@dataclass(frozen=True)
class LengthSpectrum:
    """Ordered primitive lengths up to ``cutoff`` with multiplicities."""

    entries: tuple
    cutoff: float
    merge_tolerance: float = DEFAULT_MERGE_TOLERANCE
    certified: bool = True
    representatives: tuple = field(default=(), compare=False)

    def __post_init__(self):
        entries = tuple((float(l), int(m)) for l, m in self.entries)
        object.__setattr__(self, "entries", entries)
        check_positive(self.cutoff, "cutoff")
        check_positive(self.merge_tolerance, "merge_tolerance")
        for (l0, _), (l1, _) in zip(entries, entries[1:]):
            if not l1 - l0 > self.merge_tolerance:
                raise DomainError("entries must increase by more than merge_tolerance")
        for l, m in entries:
            if not 0.0 < l <= self.cutoff or m < 1:
                raise DomainError(f"invalid entry ({l}, {m}) for cutoff {self.cutoff}")

    def lengths(self, up_to=None):
        """Multiplicity-expanded lengths, optionally only those ``<= up_to``."""
        out = [l for l, m in self.entries for _ in range(m) if up_to is None or l <= up_to]
        return np.array(out)

    def count(self, up_to=None):
        return sum(m for l, m in self.entries if up_to is None or l <= up_to)

    def truncate(self, cutoff):
        keep = [i for i, (l, _) in enumerate(self.entries) if l <= cutoff]
        reps = tuple(self.representatives[i] for i in keep) if self.representatives else ()
        return LengthSpectrum(
            tuple(self.entries[i] for i in keep),
            min(cutoff, self.cutoff),
            self.merge_tolerance,
            self.certified,
            reps,
        )

    def to_dict(self):
        return {
            "cutoff": self.cutoff,
            "merge_tolerance": self.merge_tolerance,
            "certified": self.certified,
            "entries": [{"length": l, "multiplicity": m} for l, m in self.entries],
        }

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(
                tuple((e["length"], e["multiplicity"]) for e in data["entries"]),
                data["cutoff"],
                data["merge_tolerance"],
                bool(data["certified"]),
            )
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed spectrum: {exc}") from None

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["length", "multiplicity"])
        for l, m in self.entries:
            writer.writerow([repr(l), m])
        return buf.getvalue()


@dataclass(frozen=True)
class EnumerationBudget:
    """Limits for :func:`enumerate_spectrum`.

    ``certified=True`` demands a certified result: the enumeration raises
    :class:`BudgetExhausted` instead of returning a partial spectrum.
    """

    length_cutoff: float
    max_word_length: int = DEFAULT_MAX_WORD_LENGTH
    certified: bool = False

    def __post_init__(self):
        check_positive(self.length_cutoff, "length_cutoff")
        check_int(self.max_word_length, "max_word_length", minimum=1)


@dataclass(frozen=True)
class ClassRecord:
    """A conjugacy class (up to inversion) with a representative word."""

    word: str
    length: float


def merge_lengths(lengths, tol):
    """Group sorted lengths into entries; a gap above ``tol`` starts a new entry."""
    lengths = np.sort(np.asarray(lengths, dtype=float))
    entries, groups = [], []
    start = 0
    for i in range(1, len(lengths) + 1):
        if i == len(lengths) or lengths[i] - lengths[i - 1] > tol:
            chunk = lengths[start:i]
            entries.append((float(np.mean(chunk)), len(chunk)))
            groups.append((start, i))
            start = i
    return entries, groups


def primitive_filter(classes, merge_tolerance=DEFAULT_MERGE_TOLERANCE):
    """Drop classes that are proper powers.

    A class goes if its cyclically reduced word is a proper power, or if its
    length is ``n`` times that of a listed class whose word it is the
    ``n``-th power of.
    """
    classes = list(classes)
    by_word = {wd.cyclic_reduce(c.word): c for c in classes}
    out = []
    for c in classes:
        w = wd.cyclic_reduce(c.word)
        if wd.is_proper_power(w):
            continue
        drop = False
        for n in range(2, len(w) + 1):
            if len(w) % n:
                continue
            root = w[: len(w) // n]
            d = by_word.get(root)
            if d is not None and root * n == w and abs(c.length - n * d.length) <= merge_tolerance:
                drop = True
                break
        if not drop:
            out.append(c)
    return out


# --- enumeration engine -------------------------------------------------------


def _expected_area(group):
    return 2.0 * math.pi if group.presentation is Presentation.FREE2 else 4.0 * math.pi


def _sign_normalize(ms):
    s = np.where(ms[:, 0, 0] + ms[:, 1, 1] < 0, -1.0, 1.0)
    return ms * s[:, None, None]


class _Tiles:
    """Group elements found by the tile walk, with parent pointers for words."""

    def __init__(self, side_mats, side_words):
        self.side_mats = side_mats
        self.side_words = side_words
        self.mats = [np.eye(2)[None]]
        self.parent = [np.array([-1])]
        self.side = [np.array([-1])]
        self.wlen = [np.array([0])]

    def finish(self):
        self.mats = np.concatenate(self.mats)
        self.parent = np.concatenate(self.parent)
        self.side = np.concatenate(self.side)
        self.wlen = np.concatenate(self.wlen)

    def word(self, i):
        parts = []
        while self.parent[i] >= 0:
            parts.append(self.side_words[self.side[i]])
            i = self.parent[i]
        return wd.free_reduce("".join(reversed(parts)))


def _walk_tiles(side_mats, side_words, reach, max_word_length):
    """All tiles whose centre lies within ``reach`` of the base point."""
    tiles = _Tiles(side_mats, side_words)
    side_len = np.array([len(w) for w in side_words])
    ch = math.cosh(reach)
    known = [np.zeros((1, 2))]
    front = np.array([0])
    front_mats = tiles.mats[0]
    front_len = tiles.wlen[0]
    offset = 1
    skipped = []
    while len(front):
        prod = (front_mats[:, None] @ side_mats[None]).reshape(-1, 2, 2)
        parent = np.repeat(front, len(side_mats))
        side = np.tile(np.arange(len(side_mats)), len(front))
        wlen = np.repeat(front_len, len(side_mats)) + side_len[side]
        t, x1, x2 = pl.orbit_coords(prod)
        near = t <= ch
        pts = np.stack([x1, x2], axis=1)
        over = near & (wlen > max_word_length)
        if over.any():
            skipped.append((pts[over], t[over]))
        idx = np.nonzero(near & ~over)[0]
        if len(idx) == 0:
            break
        fresh = idx[dom.novel_points(np.concatenate(known), pts[idx], t[idx])]
        if len(fresh) == 0:
            break
        tiles.mats.append(prod[fresh])
        tiles.parent.append(parent[fresh])
        tiles.side.append(side[fresh])
        tiles.wlen.append(wlen[fresh])
        known.append(pts[fresh])
        front = np.arange(offset, offset + len(fresh))
        offset += len(fresh)
        front_mats = prod[fresh]
        front_len = wlen[fresh]
    tiles.finish()
    complete = True
    if skipped:
        allpts = np.concatenate(known)
        tree = cKDTree(allpts)
        for pts, t in skipped:
            dist, _ = tree.query(pts)
            if np.any(dist > 1e-7 * np.maximum(t, 1.0)):
                complete = False
                break
    return tiles, complete


def _axis_meets(ends, vertices, tol=AXIS_TOL):
    """Whether each axis chord (Klein endpoints ``(n, 2, 2)``) meets the polygon."""
    e1, e2 = ends[:, 0], ends[:, 1]
    normal = np.stack([e2[:, 1] - e1[:, 1], e1[:, 0] - e2[:, 0]], axis=1)
    vals = vertices @ normal.T - np.sum(normal * e1, axis=1)
    scale = np.linalg.norm(normal, axis=1)
    return (vals.min(axis=0) <= tol * scale) & (vals.max(axis=0) >= -tol * scale)


def _matrix_keys(ms):
    m = _sign_normalize(ms)
    return m.reshape(len(m), 4)


def _conjugation_links(cand, neigh, tree, keys, workers):
    """Pairs ``(i, j)`` with ``cand[j] = s cand[i] s^-1`` for a neighbour ``s``."""
    ninv = pl.batch_inv(neigh)

    def work(chunk):
        lo, hi = chunk
        prod = (neigh[None] @ cand[lo:hi, None] @ ninv[None]).reshape(-1, 2, 2)
        k = _matrix_keys(prod)
        tol = 1e-7 * np.maximum(1.0, np.max(np.abs(k), axis=1))
        dist, j = tree.query(k, distance_upper_bound=float(np.max(tol)) if len(tol) else 0.0)
        hit = dist <= tol
        i = lo + np.arange(hi - lo).repeat(len(neigh))
        return [(int(a), int(b)) for a, b in zip(i[hit], j[hit])]

    size = max(1, len(cand) // (4 * max(workers, 1)) + 1)
    chunks = [(lo, min(lo + size, len(cand))) for lo in range(0, len(cand), size)]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(work, chunks))
    else:
        parts = [work(c) for c in chunks]
    return [p for part in parts for p in part]


def _axis_key(ends):
    """Continuous key of an unordered endpoint pair: sum and sym. outer product of the difference."""
    total = ends[:, 0] + ends[:, 1]
    dx, dy = (ends[:, 0] - ends[:, 1]).T
    return np.column_stack([total, dx * dx, dx * dy, dy * dy])


def enumerate_classes(group, cutoff, max_word_length=DEFAULT_MAX_WORD_LENGTH, workers=1, base=None):
    """Primitive unoriented conjugacy classes of length ``<= cutoff``.

    Returns ``(records, certified, info)``; records are sorted by length,
    then word.
    """
    cutoff = check_positive(cutoff, "cutoff")
    gens = group.matrices()
    boundary = group.word_matrix(BOUNDARY_WORD).as_array() if group.presentation is Presentation.FREE2 else None
    m0, elements, poly = dom.build_polygon(gens, group.names, _expected_area(group), boundary, base)
    certified = bool(poly.certified)
    info = {"polygon_sides": len(poly.vertices), "rho": poly.rho, "area": poly.area}
    if not math.isfinite(poly.rho):
        return [], False, info
    labels = sorted({lab for lab in poly.side_labels if lab is not None and lab >= 0})
    side_mats = elements.mats[labels]
    side_words = [elements.words[i] for i in labels]
    rho = poly.rho
    tiles, complete = _walk_tiles(side_mats, side_words, cutoff + 3.0 * rho, max_word_length)
    certified = certified and complete
    info["tiles"] = len(tiles.mats)

    t, _, _ = pl.orbit_coords(tiles.mats)
    tr = np.abs(tiles.mats[:, 0, 0] + tiles.mats[:, 1, 1])
    hyp = tr > 2.0 + HYPERBOLIC_MARGIN
    length = np.full(len(tr), np.inf)
    length[hyp] = 2.0 * np.arccosh(tr[hyp] / 2.0)
    idx = np.nonzero(hyp & (length <= cutoff + 1e-9) & (t <= math.cosh(cutoff + 2.0 * rho) * (1 + 1e-9)))[0]
    if len(idx):
        idx = idx[_axis_meets(pl.batch_axis_endpoints(tiles.mats[idx]), poly.vertices)]
    info["candidates"] = len(idx)
    if len(idx) == 0:
        return [], certified, info
    cand = tiles.mats[idx]
    clen = length[idx]

    # elements sharing an axis: keep the shortest (the primitive ones)
    ends = pl.batch_axis_endpoints(cand)
    axis_key = _axis_key(ends)
    ds = DisjointSet(range(len(cand)))
    for i, j in sorted(cKDTree(axis_key).query_pairs(1e-7)):
        ds.merge(i, j)
    primitive = np.zeros(len(cand), dtype=bool)
    for subset in ds.subsets():
        members = sorted(subset)
        shortest = min(clen[m] for m in members)
        for m in members:
            primitive[m] = clen[m] <= shortest * (1.0 + 1e-9) + 1e-12
    keep = np.nonzero(primitive)[0]
    cand, clen, idx = cand[keep], clen[keep], idx[keep]
    same_axis = DisjointSet(range(len(cand)))
    for i, j in sorted(cKDTree(axis_key[keep]).query_pairs(1e-7)):
        same_axis.merge(i, j)

    neigh_idx = np.nonzero((t <= math.cosh(2.0 * rho) * (1 + 1e-9) + 1e-9) & (np.arange(len(t)) > 0))[0]
    neigh = tiles.mats[neigh_idx]
    keys = _matrix_keys(cand)
    tree = cKDTree(keys)
    classes = DisjointSet(range(len(cand)))
    for subset in same_axis.subsets():
        members = sorted(subset)
        for m in members[1:]:
            classes.merge(members[0], m)
    for i, j in _conjugation_links(cand, neigh, tree, keys, max(1, int(workers))):
        classes.merge(i, j)

    records = []
    for subset in classes.subsets():
        members = sorted(subset)
        words = sorted((len(w), w) for w in (wd.cyclic_reduce(tiles.word(idx[m])) for m in members))
        records.append(ClassRecord(words[0][1], float(np.median(clen[members]))))
    records.sort(key=lambda r: (r.length, r.word))
    info["classes"] = len(records)
    return records, certified, info


def enumerate_spectrum(group, budget, merge_tolerance=DEFAULT_MERGE_TOLERANCE, workers=1, base=None):
    """Length spectrum of ``group`` up to ``budget.length_cutoff``.

    ``group`` may also be Fenchel-Nielsen data, which is built first.
    """
    if isinstance(group, FenchelNielsenSurface):
        group = build_surface(group)
    if not isinstance(group, FuchsianGroup):
        raise DomainError("enumerate_spectrum needs a FuchsianGroup or FenchelNielsenSurface")
    if not isinstance(budget, EnumerationBudget):
        budget = EnumerationBudget(float(budget))
    merge_tolerance = check_positive(merge_tolerance, "merge_tolerance")
    records, certified, _ = enumerate_classes(
        group, budget.length_cutoff, budget.max_word_length, workers, base
    )
    records = [r for r in primitive_filter(records, merge_tolerance) if r.length <= budget.length_cutoff]
    if budget.certified and not certified:
        raise BudgetExhausted(
            f"enumeration to length {budget.length_cutoff} is uncertified within "
            f"max_word_length {budget.max_word_length}"
        )
    entries, groups = merge_lengths([r.length for r in records], merge_tolerance)
    entries = [(min(l, budget.length_cutoff), m) for l, m in entries]
    reps = tuple(tuple(r.word for r in records[a:b]) for a, b in groups)
    return LengthSpectrum(tuple(entries), budget.length_cutoff, merge_tolerance, certified, reps)


def isospectral_compare(s1, s2, cutoff, tol=1e-8):
    """Compare multiplicity-expanded spectra up to ``cutoff``.

    Returns ``(True, None)`` on agreement, else ``(False, k)`` with ``k`` the
    1-based index of the first differing length. Lengths within ``tol`` of
    the cutoff may be missing from one side without counting as a difference.
    """
    cutoff = check_positive(cutoff, "cutoff")
    for s in (s1, s2):
        if s.cutoff < cutoff - 1e-12:
            raise IncomparableCutoffs(f"spectrum known only to {s.cutoff}, comparison asks {cutoff}")
        if not s.certified:
            raise IncomparableCutoffs("spectrum is not certified")
    a = s1.lengths(cutoff + tol)
    b = s2.lengths(cutoff + tol)
    n = min(len(a), len(b))
    for i in range(n):
        if abs(a[i] - b[i]) > tol:
            return False, i + 1
    rest = a[n:] if len(a) > n else b[n:]
    if len(rest) and rest[0] < cutoff - tol:
        return False, n + 1
    return True, None


def count_bound(g, L):
    """The bound ``(g - 1) e^{L + 6}`` on primitive geodesics of length ``<= L``."""
    g = check_int(g, "genus", minimum=2)
    return (g - 1) * math.exp(check_positive(L, "L") + 6.0)


def count_bound_check(s, g, L):
    """Whether the spectrum respects the counting bound at length ``L``."""
    bound = count_bound(g, L)
    if s.cutoff < L - 1e-12:
        raise IncomparableCutoffs(f"spectrum known only to {s.cutoff}, bound asked at {L}")
    return s.count(L) <= bound


def default_workers():
    try:
        return max(1, int(os.environ.get("SPECTRAKIT_WORKERS", "1")))
    except ValueError:
        return 1


class SpectrumEnumerator(TransformerMixin, BaseEstimator):
    """Estimator wrapper around :func:`enumerate_spectrum`.

    ``fit(X)`` takes one surface (group or Fenchel-Nielsen data) and stores
    ``spectrum_``. ``transform(X)`` maps a list of surfaces to the first
    ``n_lengths`` multiplicity-expanded lengths each, padded with NaN.
    """

    def __init__(self, cutoff=6.0, max_word_length=DEFAULT_MAX_WORD_LENGTH, merge_tolerance=DEFAULT_MERGE_TOLERANCE,
                 require_certified=False, n_lengths=10, workers=1):
        self.cutoff = cutoff
        self.max_word_length = max_word_length
        self.merge_tolerance = merge_tolerance
        self.require_certified = require_certified
        self.n_lengths = n_lengths
        self.workers = workers

    def _budget(self):
        return EnumerationBudget(self.cutoff, self.max_word_length, self.require_certified)

    def _spectrum(self, surface):
        return enumerate_spectrum(surface, self._budget(), self.merge_tolerance, self.workers)

    def fit(self, X, y=None):
        self.spectrum_ = self._spectrum(X)
        return self

    def transform(self, X):
        check_is_fitted(self, "spectrum_")
        n = check_int(self.n_lengths, "n_lengths", minimum=1)
        out = np.full((len(X), n), np.nan)
        for row, surface in enumerate(X):
            lengths = self._spectrum(surface).lengths()[:n]
            out[row, : len(lengths)] = lengths
        return out


__all__ = [
    "LengthSpectrum",
    "EnumerationBudget",
    "ClassRecord",
    "merge_lengths",
    "primitive_filter",
    "enumerate_classes",
    "enumerate_spectrum",
    "isospectral_compare",
    "count_bound",
    "count_bound_check",
    "SpectrumEnumerator",
]
