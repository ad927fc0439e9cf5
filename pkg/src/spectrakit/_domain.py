"""Dirichlet fundamental polygons, certified by area.

The polygon centred at the base point ``i`` is the intersection of the
bisector half-planes ``{p : d(p, i) <= d(p, g i)}`` over group elements
``g``. For a group with boundary (the one-holed torus) it is also cut down to
the convex core by the half-planes bounded by the boundary axes. Any finite
set of elements gives a superset of the true polygon, so an area equal to
``2 pi |chi|`` proves the polygon exact.

Everything is done in the Klein model, where these half-planes are linear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import cKDTree

from . import _plane as pl
from . import words as wd

AREA_TOL = 1e-7
IDEAL_MARGIN = 1e-12
MIN_DISPLACEMENT_T = 1e-6  # cosh(d) - 1 below this is the identity, d < 1.4e-3


def minkowski(u, v):
    return -u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] + u[..., 2] * v[..., 2]


def polygon_area(vertices):
    """Hyperbolic area of a convex Klein polygon, from its interior angles."""
    n = len(vertices)
    hyp = pl.klein_to_hyperboloid(vertices)
    total = 0.0
    for j in range(n):
        v, a, b = hyp[j], hyp[j - 1], hyp[(j + 1) % n]
        ua = a + minkowski(v, a) * v
        ub = b + minkowski(v, b) * v
        # det(v, ua, ub) is |ua||ub| sin(angle) for unit timelike v
        total += math.atan2(abs(np.linalg.det(np.stack([v, ua, ub]))), minkowski(ua, ub))
    return (n - 2) * math.pi - total


def clip(vertices, labels, normal, offset, label):
    """Intersect a convex polygon with ``{k : normal . k <= offset}``."""
    vals = vertices @ normal - offset
    out_v, out_l = [], []
    n = len(vertices)
    for j in range(n):
        p, q = vertices[j], vertices[(j + 1) % n]
        fp, fq = vals[j], vals[(j + 1) % n]
        pin, qin = fp <= 0.0, fq <= 0.0
        if pin:
            out_v.append(p)
            out_l.append(labels[j])
        if pin != qin:
            x = p + (q - p) * (fp / (fp - fq))
            out_v.append(x)
            out_l.append(label if pin else labels[j])
    if not out_v:
        return np.empty((0, 2)), []
    verts = np.array(out_v)
    keep = [j for j in range(len(verts)) if np.linalg.norm(verts[j] - verts[(j + 1) % len(verts)]) > 1e-14]
    return verts[keep], [out_l[j] for j in keep]


@dataclass
class ElementSet:
    """Group elements (conjugated so the base point is ``i``) with words."""

    mats: np.ndarray
    words: list

    def coords(self):
        return pl.orbit_coords(self.mats)


def letter_table(gens, names):
    mats = list(gens) + [pl.inv(g) for g in gens]
    letters = list(names) + [c.lower() for c in names]
    return np.array(mats), letters


def novel_points(known, pts, t, rel=1e-7):
    """Mask of ``pts`` matching neither ``known`` nor an earlier entry of ``pts``.

    Orbit points of distinct elements are a definite distance apart, so a
    tolerance relative to the coordinate size identifies repeats safely.
    """
    tol = rel * np.maximum(t, 1.0)
    dist, _ = cKDTree(known).query(pts, distance_upper_bound=float(np.max(tol)) if len(tol) else 0.0)
    mask = ~(dist <= tol)
    if mask.sum() > 1:
        cand = np.nonzero(mask)[0]
        tree = cKDTree(pts[cand])
        # per-point radii: one far orbit point must not widen every query
        for j, near in enumerate(tree.query_ball_point(pts[cand], r=tol[cand])):
            if any(i < j and mask[cand[i]] for i in near):
                mask[cand[j]] = False
    return mask


def element_ball(gens, names, cap, depth):
    """Elements reachable by reduced words of length <= depth without leaving
    displacement ``cap`` along the way (the identity excluded)."""
    lmats, letters = letter_table(gens, names)
    nl = len(letters)
    inverse_of = np.array([letters.index(wd.invert_letter(c)) for c in letters] + [-1])
    ch = math.cosh(cap)
    known_mats = [np.eye(2)[None]]
    known_words = [""]
    _, x1, x2 = pl.orbit_coords(np.eye(2)[None])
    known_pts = [np.stack([x1, x2], axis=1)]
    front_mats = np.eye(2)[None]
    front_last = np.array([-1])
    front_words = [""]
    for _ in range(depth):
        prod = (front_mats[:, None] @ lmats[None]).reshape(-1, 2, 2)
        last = np.tile(np.arange(nl), len(front_mats))
        parent = np.repeat(np.arange(len(front_mats)), nl)
        ok = inverse_of[front_last[parent]] != last
        t, x1, x2 = pl.orbit_coords(prod)
        ok &= t <= ch
        idx = np.nonzero(ok)[0]
        if len(idx) == 0:
            break
        pts = np.stack([x1[idx], x2[idx]], axis=1)
        fresh = idx[novel_points(np.concatenate(known_pts), pts, t[idx])]
        front_mats = prod[fresh]
        front_last = last[fresh]
        front_words = [front_words[parent[i]] + letters[last[i]] for i in fresh]
        known_mats.append(front_mats)
        known_words.extend(front_words)
        known_pts.append(np.stack([x1[fresh], x2[fresh]], axis=1))
        if len(fresh) == 0:
            break
    mats = np.concatenate(known_mats)[1:]
    return ElementSet(mats, known_words[1:])


@dataclass
class DirichletPolygon:
    vertices: np.ndarray
    side_labels: list
    rho: float
    area: float
    expected_area: float

    @property
    def certified(self):
        return (
            len(self.vertices) >= 3
            and np.all(np.sum(self.vertices**2, axis=1) < 1.0 - IDEAL_MARGIN)
            and abs(self.area - self.expected_area) <= AREA_TOL * max(1.0, self.expected_area)
        )


def dirichlet_polygon(elements, chords, expected_area):
    """Polygon cut out by bisectors of ``elements`` and by boundary ``chords``.

    ``chords`` is an array ``(m, 2, 2)`` of Klein endpoints; for each, the
    side containing the origin is kept. Side labels are element indices for
    bisector sides and ``-1 - j`` for chord ``j``.
    """
    t, x1, x2 = elements.coords()
    normals = np.stack([x1, x2], axis=1)
    offsets = t - 1.0
    labels_all = list(range(len(t)))
    if len(chords):
        e1, e2 = chords[:, 0], chords[:, 1]
        cn = np.stack([e2[:, 1] - e1[:, 1], e1[:, 0] - e2[:, 0]], axis=1)
        co = np.sum(cn * e1, axis=1)
        flip = co < 0.0
        cn[flip] *= -1.0
        co[flip] *= -1.0
        normals = np.concatenate([normals, cn])
        offsets = np.concatenate([offsets, co])
        labels_all += [-1 - j for j in range(len(chords))]
    labels_all = np.array(labels_all)
    verts = np.array([[-2.0, -2.0], [2.0, -2.0], [2.0, 2.0], [-2.0, 2.0]])
    labs = [None] * 4
    scale = np.maximum(1.0, np.abs(offsets))
    used = np.zeros(len(offsets), dtype=bool)
    while len(verts):
        excess = (np.max(verts @ normals.T, axis=0) - offsets) / scale
        excess[used] = -np.inf
        cutting = np.nonzero(excess > 1e-13)[0]
        if len(cutting) == 0:
            break
        # the nearest cutting bisector first keeps the polygon small
        j = cutting[np.argmin(offsets[cutting])]
        used[j] = True
        verts, labs = clip(verts, labs, normals[j], offsets[j], int(labels_all[j]))
    if len(verts) < 3 or np.any(np.sum(verts**2, axis=1) >= 1.0 - IDEAL_MARGIN) or None in labs:
        return DirichletPolygon(verts, labs, math.inf, math.inf, expected_area)
    hyp = pl.klein_to_hyperboloid(verts)
    rho = float(np.max(np.arccosh(np.maximum(hyp[:, 0], 1.0))))
    return DirichletPolygon(verts, labs, rho, polygon_area(_collapse(verts)), expected_area)


def _collapse(verts, tol=1e-7):
    """Merge runs of nearly coincident vertices.

    Several bisectors through one vertex leave edges of length ~1e-9 whose
    directions, and hence the angles, are poorly conditioned.
    """
    out = [verts[0]]
    for v in verts[1:]:
        if np.linalg.norm(v - out[-1]) > tol:
            out.append(v)
    if len(out) > 1 and np.linalg.norm(out[0] - out[-1]) <= tol:
        out.pop()
    return np.array(out)


def boundary_chords(elements, boundary):
    """Klein axis endpoints of ``u K u^-1`` for the identity and every element ``u``."""
    mats = np.concatenate([np.eye(2)[None], elements.mats])
    conj = mats @ boundary @ pl.batch_inv(mats)
    return pl.batch_axis_endpoints(conj)


def choose_base_point(gens):
    """A point with small total displacement by the generators and their products."""
    gens = np.asarray(gens)
    pairs = [g @ h for g in gens for h in gens] + [g @ pl.inv(h) for g in gens for h in gens]
    probe = np.concatenate([gens, np.array(pairs)])

    def cost(v):
        z = complex(v[0], math.exp(v[1]))
        m = pl.to_base_point(z)
        conj = m @ probe @ pl.inv(m)
        t, _, _ = pl.orbit_coords(conj)
        return float(np.log(np.sum(t)))

    res = minimize(cost, np.array([0.0, 0.0]), method="Nelder-Mead", options={"xatol": 1e-8, "fatol": 1e-12})
    return complex(res.x[0], math.exp(res.x[1]))


def _merge(elements, mats, words):
    """Append the elements of ``mats`` whose orbit points are new."""
    if len(mats) == 0:
        return elements, 0
    t, x1, x2 = pl.orbit_coords(mats)
    pts = np.stack([x1, x2], axis=1)
    old_t, ox1, ox2 = elements.coords()
    known = np.concatenate([[[0.0, 0.0]], np.stack([ox1, ox2], axis=1)])
    # round-off can leave a relator product a hair away from the identity
    mask = novel_points(known, pts, t) & (t > 1.0 + MIN_DISPLACEMENT_T)
    if not mask.any():
        return elements, 0
    idx = np.nonzero(mask)[0]
    merged = ElementSet(
        np.concatenate([elements.mats, mats[idx]]),
        elements.words + [words[i] for i in idx],
    )
    return merged, len(idx)


def _products(elements, chosen, cap):
    """Products ``a b`` over ``a, b`` in ``chosen`` (with inverses) within displacement ``cap``."""
    mats = elements.mats[chosen]
    words = [elements.words[i] for i in chosen]
    mats = np.concatenate([mats, pl.batch_inv(mats)])
    words = words + [wd.inverse(w) for w in words]
    prod = (mats[:, None] @ mats[None]).reshape(-1, 2, 2)
    t, _, _ = pl.orbit_coords(prod)
    keep = np.nonzero(t <= math.cosh(cap))[0]
    n = len(words)
    return prod[keep], [wd.free_reduce(words[k // n] + words[k % n]) for k in keep]


def _extend(elements, chosen, lmats, letters):
    """Products ``s l`` and ``l s`` of chosen elements with single letters.

    Used while the polygon still reaches the ideal boundary, when there is
    no finite radius to bound products of pairs.
    """
    mats = elements.mats[chosen]
    words = [elements.words[i] for i in chosen]
    right = (mats[:, None] @ lmats[None]).reshape(-1, 2, 2)
    left = (lmats[None] @ mats[:, None]).reshape(-1, 2, 2)
    n = len(letters)
    out_words = [wd.free_reduce(words[k // n] + letters[k % n]) for k in range(len(right))]
    out_words += [wd.free_reduce(letters[k % n] + words[k // n]) for k in range(len(left))]
    return np.concatenate([right, left]), out_words


def build_polygon(gens, names, expected_area, boundary=None, base=None, max_rounds=40):
    """Certified Dirichlet polygon for the group generated by ``gens``.

    Starts from words of length <= 2 and repeatedly adds products of pairs
    of side elements lying within twice the current circumradius, which is
    where every missing neighbour must come from. Returns
    ``(conjugator, elements, polygon)`` where ``conjugator`` moves the base
    point to ``i`` and ``elements`` are conjugated accordingly.
    """
    gens = np.asarray(gens, dtype=float)
    if base is None:
        base = choose_base_point(gens)
    m0 = pl.to_base_point(base)
    cg = m0 @ gens @ pl.inv(m0)
    cb = None if boundary is None else m0 @ boundary @ pl.inv(m0)
    elements = ElementSet(np.empty((0, 2, 2)), [])
    elements, _ = _merge(elements, *_products(ElementSet(cg, list(names)), list(range(len(cg))), math.inf))
    lm, letters = letter_table(cg, names)
    elements, _ = _merge(elements, lm, letters)
    poly = None
    for _ in range(max_rounds):
        chords = boundary_chords(elements, cb) if cb is not None else np.empty((0, 2, 2))
        poly = dirichlet_polygon(elements, chords, expected_area)
        if poly.certified:
            break
        sides = sorted({lab for lab in poly.side_labels if lab is not None and lab >= 0})
        if not sides:
            sides = list(range(len(elements.words)))
        if math.isfinite(poly.rho):
            grow = lambda chosen: _products(elements, chosen, 2.0 * poly.rho + 1e-6)
        else:
            grow = lambda chosen: _extend(elements, chosen, lm, letters)
        elements, added = _merge(elements, *grow(sides))
        if added == 0:
            elements, added = _merge(elements, *grow(list(range(len(elements.words)))))
            if added == 0:
                break
    return m0, elements, poly
