import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize

from spectrakit.exceptions import DomainError, NotHyperbolic
from spectrakit.hypgeom import (
    HexagonAlternatingSides,
    MobiusTransform,
    arc_length_from_chain,
    bavard_radius,
    collar_boundary_length,
    collar_width,
    hexagon_complete,
    length_to_trace,
    loop_collar_distance_bound,
    trace_to_length,
)

# mpmath at 40 digits
R2 = 1.719107120615051545948519779872790807944
HEX111 = 1.70491283235801369120416184891292124292
SHORT_BOUNDARY = 2.492900960560922053576080321002272010603

pos = st.floats(0.05, 6.0)


def _sl2(rng):
    while True:
        m = rng.normal(size=(2, 2))
        d = np.linalg.det(m)
        if abs(d) > 0.2:
            if d < 0:
                m[:, 0] *= -1
                d = -d
            return m / math.sqrt(d)


def _displacement(m, z):
    w = (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])
    return math.acosh(1.0 + abs(w - z) ** 2 / (2.0 * z.imag * w.imag))


def test_mobius_normalizes_determinant():
    m = MobiusTransform.from_array([[2.0, 0.0], [0.0, 2.0]])
    assert abs(m.determinant - 1.0) < 1e-12


def test_trace_to_length_diagonal():
    assert trace_to_length(np.diag([math.e, 1 / math.e])) == pytest.approx(2.0, abs=1e-14)


def test_identity_is_not_hyperbolic():
    with pytest.raises(NotHyperbolic):
        trace_to_length(np.eye(2))
    with pytest.raises(NotHyperbolic):
        trace_to_length(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_trace_three_matches_minimal_displacement():
    # oracle: minimize the displacement d(z, m z) over the upper half-plane
    m = np.array([[2.0, 1.0], [1.0, 1.0]])
    res = minimize(lambda p: _displacement(m, complex(p[0], math.exp(p[1]))), [0.0, 0.0],
                   method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 5000})
    assert trace_to_length(m) == pytest.approx(2 * math.acosh(1.5), abs=1e-12)
    assert res.fun == pytest.approx(trace_to_length(m), abs=1e-8)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.floats(0.1, 5.0))
def test_conjugation_invariance(seed, length):
    rng = np.random.default_rng(seed)
    g = _sl2(rng)
    m = np.diag([math.exp(length / 2), math.exp(-length / 2)])
    conj = g @ m @ np.linalg.inv(g)
    assert trace_to_length(conj) == pytest.approx(length, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 8))
def test_iterate_scaling(seed, n):
    rng = np.random.default_rng(seed)
    length = rng.uniform(0.2, 2.0)
    g = _sl2(rng)
    m = g @ np.diag([math.exp(length / 2), math.exp(-length / 2)]) @ np.linalg.inv(g)
    mt = MobiusTransform.from_array(m)
    assert trace_to_length(mt**n) == pytest.approx(n * trace_to_length(mt), abs=1e-8)


def test_length_to_trace_inverse():
    h = length_to_trace(3.0) / 2
    m = np.array([[h, 1.0], [h * h - 1.0, h]])
    assert trace_to_length(m) == pytest.approx(3.0, abs=1e-12)


def test_collar_width_examples():
    assert collar_width(2 * math.asinh(1)) == pytest.approx(math.asinh(1), abs=1e-15)
    assert collar_width(2 * math.asinh(1 / math.sinh(1))) == pytest.approx(1.0, abs=1e-14)
    assert collar_width(0.1) > collar_width(1.0)
    with pytest.raises(DomainError):
        collar_width(0.0)


@given(pos)
def test_collar_width_round_trip(x):
    w = collar_width(x)
    assert 2 * math.asinh(1 / math.sinh(w)) == pytest.approx(x, rel=1e-10)


@given(pos, pos)
def test_collar_width_decreasing(a, b):
    if a < b:
        assert collar_width(a) > collar_width(b)


def test_collar_boundary_examples():
    assert collar_boundary_length(2 * math.asinh(1)) == pytest.approx(SHORT_BOUNDARY, abs=1e-12)
    assert collar_boundary_length(2.0) == pytest.approx(2 / math.tanh(1.0), abs=1e-15)
    assert collar_boundary_length(1e-4) > 2.0
    with pytest.raises(DomainError):
        collar_boundary_length(-1.0)


@given(st.floats(1e-6, 2 * math.asinh(1)), st.floats(1e-6, 2 * math.asinh(1)))
def test_collar_boundary_range_and_monotone(a, b):
    for x in (a, b):
        assert 2.0 <= collar_boundary_length(x) <= SHORT_BOUNDARY + 1e-12
    if a < b:
        assert collar_boundary_length(a) <= collar_boundary_length(b)


def test_loop_collar_distance_examples():
    assert loop_collar_distance_bound(2 * math.asinh(1)) == pytest.approx(0.0, abs=1e-15)
    assert loop_collar_distance_bound(4.0) == pytest.approx(math.log(math.sinh(2.0)))
    assert loop_collar_distance_bound(2 * bavard_radius(2)) < math.log(4.0)
    assert loop_collar_distance_bound(0.5) < 0
    with pytest.raises(DomainError):
        loop_collar_distance_bound(0.0)


def _boost(d):
    return np.array([[math.cosh(d), 0, math.sinh(d)], [0, 1, 0], [math.sinh(d), 0, math.cosh(d)]])


_TURN = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])


def _hexagon_closes(s, t):
    """Walk the sides s1 t3 s2 t1 s3 t2 in the hyperboloid, turning a right angle at each corner."""
    walk = np.eye(3)
    for d in (s[0], t[2], s[1], t[0], s[2], t[1]):
        walk = walk @ _boost(d) @ _TURN
    return np.max(np.abs(walk - np.eye(3)))


def test_hexagon_regular():
    a = math.acosh(2.0)
    assert hexagon_complete((a, a, a)) == pytest.approx((a, a, a), abs=1e-12)


def test_hexagon_unit_sides_by_construction():
    t = hexagon_complete(HexagonAlternatingSides(1.0, 1.0, 1.0))
    assert t == pytest.approx((HEX111,) * 3, abs=1e-12)
    assert _hexagon_closes((1.0, 1.0, 1.0), t) < 1e-10


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 4.0), st.floats(0.1, 4.0), st.floats(0.1, 4.0))
def test_hexagon_closes_and_involution(a, b, c):
    t = hexagon_complete((a, b, c))
    assert _hexagon_closes((a, b, c), t) < 1e-7 * max(1.0, math.exp(max(a, b, c, *t)))
    assert hexagon_complete(t) == pytest.approx((a, b, c), abs=1e-10, rel=1e-10)


def test_hexagon_round_trip_example():
    assert hexagon_complete(hexagon_complete((1.0, 2.0, 3.0))) == pytest.approx((1.0, 2.0, 3.0), abs=1e-10)


def test_hexagon_rejects_nonpositive():
    with pytest.raises(DomainError):
        hexagon_complete((0.0, 1.0, 1.0))


def test_arc_length_regular_pants():
    L = 2 * math.acosh(2.0)
    assert arc_length_from_chain(L, L, L) == pytest.approx(math.acosh(2.0), abs=1e-12)


def test_arc_length_grows_with_chain():
    vals = [arc_length_from_chain(1.0, 1.5, c) for c in np.linspace(0.5, 30, 60)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


@given(st.floats(0.1, 6), st.floats(0.1, 6), st.floats(0.1, 6))
def test_arc_length_round_trip(c1, c2, ch):
    a = arc_length_from_chain(c1, c2, ch)
    opposite = hexagon_complete((c1 / 2, c2 / 2, ch / 2))
    assert opposite[2] == a
    assert hexagon_complete(opposite)[2] == pytest.approx(ch / 2, abs=1e-10, rel=1e-9)


def test_arc_length_rejects_nonpositive():
    with pytest.raises(DomainError):
        arc_length_from_chain(1.0, -1.0, 1.0)


def test_bavard_radius():
    assert bavard_radius(2) == pytest.approx(R2, abs=1e-14)
    g = np.arange(2, 10**4 + 1)
    r = np.array([bavard_radius(int(x)) for x in g])
    assert np.all(r < np.log(4 * g))
    assert np.all(np.diff(r[:999]) > 0)
    with pytest.raises(DomainError):
        bavard_radius(1)


def test_fixed_points_of_nearly_diagonal_matrix():
    from spectrakit._plane import batch_axis_endpoints, boundary_to_klein, fixed_points

    # axis from 0 to infinity, perturbed so that c is tiny but not negligible
    m = np.array([[3.7320508075688772, 0.0], [1e-12, 0.2679491924311228]])
    rep, att = fixed_points(m)
    assert abs(rep) < 1e-9 and abs(att) > 1e9
    ends = batch_axis_endpoints(m[None])[0]
    assert ends[0] == pytest.approx(boundary_to_klein(np.inf), abs=1e-9)
    assert ends[1] == pytest.approx(boundary_to_klein(0.0), abs=1e-9)
