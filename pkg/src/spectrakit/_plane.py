"""Low-level hyperbolic plane geometry on raw numpy matrices.

Points live in the upper half-plane; ``math.inf`` stands for the point at
infinity. Batched helpers take arrays of shape ``(n, 2, 2)``. Klein-model
coordinates come from the hyperboloid chart

    z = x + iy  ->  (t, X1, X2) = ((1+|z|^2)/2y, x/y, (|z|^2-1)/2y)

so the base point ``i`` sits at the origin of the Klein disc.
"""

from __future__ import annotations

import math

import numpy as np

INF = math.inf


def mat(a, b, c, d):
    return np.array([[a, b], [c, d]], dtype=float)


def inv(m):
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


def act(m, z):
    if z == INF:
        return INF if m[1, 0] == 0 else m[0, 0] / m[1, 0]
    den = m[1, 0] * z + m[1, 1]
    if den == 0:
        return INF
    return (m[0, 0] * z + m[0, 1]) / den


def renormalize(m):
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    return m / math.sqrt(det)


def batch_renormalize(ms):
    det = ms[:, 0, 0] * ms[:, 1, 1] - ms[:, 0, 1] * ms[:, 1, 0]
    return ms / np.sqrt(det)[:, None, None]


def batch_inv(ms):
    out = np.empty_like(ms)
    out[:, 0, 0] = ms[:, 1, 1]
    out[:, 1, 1] = ms[:, 0, 0]
    out[:, 0, 1] = -ms[:, 0, 1]
    out[:, 1, 0] = -ms[:, 1, 0]
    return out


def orbit_coords(ms):
    """Hyperboloid coordinates ``(t, X1, X2)`` of ``m(i)`` for each matrix."""
    ms = np.asarray(ms)
    a, b, c, d = ms[..., 0, 0], ms[..., 0, 1], ms[..., 1, 0], ms[..., 1, 1]
    t = 0.5 * (a * a + b * b + c * c + d * d)
    x1 = a * c + b * d
    x2 = 0.5 * (a * a + b * b - c * c - d * d)
    return t, x1, x2


def displacement(ms):
    """Hyperbolic distance from ``i`` to ``m(i)``."""
    t, _, _ = orbit_coords(ms)
    return np.arccosh(np.maximum(t, 1.0))


def translation_length(ms):
    """Translation lengths, with NaN for non-hyperbolic entries."""
    ms = np.asarray(ms)
    tr = np.abs(ms[..., 0, 0] + ms[..., 1, 1])
    out = np.full(tr.shape, np.nan)
    hyp = tr > 2.0 + 1e-12
    out[hyp] = 2.0 * np.arccosh(tr[hyp] / 2.0)
    return out


def axis_distance(disp, length):
    """Distance from ``i`` to the axis, from displacement and translation length."""
    ratio = np.sinh(np.asarray(disp) / 2.0) / np.sinh(np.asarray(length) / 2.0)
    return np.arccosh(np.maximum(ratio, 1.0))


def point_to_klein(z):
    x, y = z.real, z.imag
    r2 = x * x + y * y
    return np.array([2.0 * x / (1.0 + r2), (r2 - 1.0) / (1.0 + r2)])


def boundary_to_klein(x):
    """Klein coordinates of an ideal point (real or infinite)."""
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape + (2,))
    fin = np.isfinite(x)
    xf = x[fin]
    out[fin, 0] = 2.0 * xf / (1.0 + xf * xf)
    out[fin, 1] = (xf * xf - 1.0) / (1.0 + xf * xf)
    out[~fin, 0] = 0.0
    out[~fin, 1] = 1.0
    return out


def klein_to_hyperboloid(k):
    k = np.asarray(k, dtype=float)
    t = 1.0 / np.sqrt(1.0 - np.sum(k * k, axis=-1))
    return np.concatenate([t[..., None], k * t[..., None]], axis=-1)


def fixed_points(m):
    """Return ``(repelling, attracting)`` fixed points of a hyperbolic matrix."""
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    tr = a + d
    disc = math.sqrt(max(tr * tr - 4.0, 0.0))
    scale = max(abs(a), abs(b), abs(c), abs(d))
    if abs(c) <= 1e-14 * scale:
        other = b / (d - a)
        # multiplier at infinity is d/a
        return (other, INF) if abs(a) > abs(d) else (INF, other)
    # roots of c z^2 - (a - d) z - b, in the form that avoids cancellation
    q = 0.5 * ((a - d) + math.copysign(disc, a - d))
    z1, z2 = q / c, -b / q
    if abs(c * z1 + d) > 1.0:
        return z2, z1
    return z1, z2


def batch_axis_endpoints(ms):
    """Klein coordinates of both axis endpoints, shape ``(n, 2, 2)``."""
    a, b, c, d = ms[:, 0, 0], ms[:, 0, 1], ms[:, 1, 0], ms[:, 1, 1]
    tr = a + d
    disc = np.sqrt(np.maximum(tr * tr - 4.0, 0.0))
    scale = np.max(np.abs(ms.reshape(len(ms), 4)), axis=1)
    small = np.abs(c) <= 1e-14 * scale
    u = a - d
    pos = u >= 0.0
    q = 0.5 * (u + np.where(pos, disc, -disc))
    with np.errstate(divide="ignore", invalid="ignore"):
        far = np.where(small, np.inf, q / c)
        near = -b / q
    z1 = np.where(pos, far, near)
    z2 = np.where(pos, near, far)
    out = np.empty((len(ms), 2, 2))
    out[:, 0] = boundary_to_klein(z1)
    out[:, 1] = boundary_to_klein(z2)
    return out


def normalizer(repelling, attracting, through=None):
    """Matrix sending the geodesic ``repelling -> attracting`` to ``0 -> inf``.

    If ``through`` (a point on that geodesic) is given, it is sent to ``i``.
    """
    if attracting == INF:
        n = mat(1.0, -repelling, 0.0, 1.0)
    elif repelling == INF:
        n = mat(0.0, -1.0, 1.0, -attracting)
    else:
        n = mat(1.0, -repelling, -1.0, attracting)
        if attracting < repelling:
            n = mat(-1.0, repelling, -1.0, attracting)
    n = renormalize(n)
    if through is not None:
        w = act(n, through)
        y = abs(w)
        n = mat(1.0 / math.sqrt(y), 0.0, 0.0, math.sqrt(y)) @ n
    return n


def common_perpendicular(g1, g2):
    """Feet of the common perpendicular of two disjoint geodesics.

    Each geodesic is a pair of ideal endpoints. Returns ``(foot_on_g1,
    foot_on_g2)`` as complex numbers in the upper half-plane.
    """
    n = normalizer(g1[0], g1[1])
    u, v = (act(n, p) for p in g2)
    if u == INF or v == INF or u * v <= 0:
        raise ValueError("geodesics are not disjoint")
    r = math.sqrt(u * v)
    mid = 0.5 * (u + v)
    x = u * v / mid
    y = math.sqrt(max(u * v - x * x, 0.0))
    ninv = inv(n)
    return act(ninv, complex(0.0, r)), act(ninv, complex(x, y))


def signed_distance_along(repelling, attracting, p, q):
    """Signed distance from ``p`` to ``q`` along an oriented geodesic."""
    n = normalizer(repelling, attracting)
    return math.log(act(n, q).imag / act(n, p).imag)


def distance(z, w):
    num = abs(z - w) ** 2
    return math.acosh(1.0 + num / (2.0 * z.imag * w.imag))


def to_base_point(z):
    """Orientation-preserving matrix sending ``z`` to ``i``."""
    s = math.sqrt(z.imag)
    return mat(1.0 / s, -z.real / s, 0.0, s)
