import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadric_axes.errors import InputError
from quadric_axes.numkernel import RealPoly, canonical_sign, line_angle, real_roots, sym_eigen, unit


def test_sym_eigen_sorted_and_orthonormal(rng):
    for n in (2, 3):
        for _ in range(50):
            A = rng.normal(size=(n, n))
            S = A + A.T
            vals, vecs = sym_eigen(S)
            assert np.all(np.diff(vals) <= 0)
            assert np.allclose(vecs.T @ vecs, np.eye(n), atol=1e-12)
            assert np.allclose(S @ vecs, vecs * vals, atol=1e-10)


def test_sym_eigen_reads_upper_triangle_only():
    m = np.array([[2.0, 1.0], [99.0, 3.0]])
    vals, _ = sym_eigen(m)
    ref = np.linalg.eigvalsh(np.array([[2.0, 1.0], [1.0, 3.0]]))[::-1]
    assert np.allclose(vals, ref)


@pytest.mark.parametrize("bad", [np.eye(4), np.ones((2, 3)), np.array([[np.nan, 0], [0, 1.0]])])
def test_sym_eigen_rejects(bad):
    with pytest.raises(InputError):
        sym_eigen(bad)


def test_unit_and_angle():
    assert np.allclose(unit([3.0, 4.0]), [0.6, 0.8])
    assert line_angle([1, 0, 0], [-1, 0, 0]) == pytest.approx(0.0, abs=1e-15)
    assert line_angle([1, 0], [0, 2]) == pytest.approx(math.pi / 2)
    with pytest.raises(InputError):
        unit([0.0, 0.0])


def test_canonical_sign_is_idempotent(rng):
    for _ in range(20):
        v = rng.normal(size=3)
        c = canonical_sign(v)
        assert np.allclose(canonical_sign(-v), c)


def test_real_roots_of_planted_quartic():
    roots = [-2.0, -0.5, 1.0, 3.0]
    p = RealPoly.from_descending(np.poly(roots))
    got = [r.value for r in real_roots(p)]
    assert np.allclose(got, roots, atol=1e-12)


def test_real_roots_double_root_multiplicity():
    p = RealPoly.from_descending(np.poly([1.0, 1.0, -2.0]))
    rs = real_roots(p)
    assert [r.multiplicity for r in rs] == [1, 2]
    assert rs[1].value == pytest.approx(1.0, abs=1e-6)


def test_real_roots_quadratic_without_cancellation():
    # roots 1e8 and 1e-8
    p = RealPoly.from_descending([1.0, -(1e8 + 1e-8), 1.0])
    rs = [r.value for r in real_roots(p)]
    assert rs[0] == pytest.approx(1e-8, rel=1e-12)
    assert rs[1] == pytest.approx(1e8, rel=1e-12)


def test_real_roots_none_and_bracket():
    assert real_roots(RealPoly.from_descending([1.0, 0.0, 1.0])) == []
    p = RealPoly.from_descending(np.poly([-1.0, 2.0, 5.0]))
    assert [round(r.value, 9) for r in real_roots(p, bracket_hint=(0.0, 3.0))] == [2.0]


def test_real_poly_rejects_high_degree_and_zero():
    with pytest.raises(InputError):
        RealPoly((1.0,) * 6)
    with pytest.raises(InputError):
        real_roots(RealPoly((0.0,)))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=4))
def test_real_roots_recovers_separated_roots(roots):
    roots = sorted(roots)
    if any(b - a < 1e-2 for a, b in zip(roots, roots[1:])):
        return
    p = RealPoly.from_descending(np.poly(roots))
    got = [r.value for r in real_roots(p)]
    assert len(got) == len(roots)
    assert np.allclose(got, roots, atol=1e-7)
