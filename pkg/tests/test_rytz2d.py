import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadric_axes import ConjugateSystem, DegenerateError, rytz_axes
from quadric_axes.numkernel import line_angle, sym_eigen
from quadric_axes.rytz2d import rytz_in_plane, section_basis, section_ellipse


def conjugate_pair(a, b, phi, t):
    R = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
    P = R @ [a * math.cos(t), b * math.sin(t)]
    Q = R @ [-a * math.sin(t), b * math.cos(t)]
    return P, Q, R


def eigen_axes(P, Q):
    X = np.column_stack([P, Q])
    vals, vecs = sym_eigen(X @ X.T)
    return np.sqrt(vals), vecs


def test_textbook_example():
    tr = rytz_axes([3.0, 0.0], [1.0, 2.0])
    lens, vecs = eigen_axes(np.array([3.0, 0.0]), np.array([1.0, 2.0]))
    assert tr.axis_lengths == pytest.approx(tuple(lens), rel=1e-12)
    for k in range(2):
        assert line_angle(tr.axis_dirs[:, k], vecs[:, k]) < 1e-12
    # |OL| = a + b and |OM| = a - b
    assert np.hypot(*tr.L) + np.hypot(*tr.M) == pytest.approx(2 * lens[0])


@settings(max_examples=200, deadline=None)
@given(st.floats(0.2, 10), st.floats(0.05, 0.95), st.floats(0, math.pi), st.floats(0, 2 * math.pi))
def test_matches_eigen_oracle(a, ratio, phi, t):
    b = a * ratio
    P, Q, _ = conjugate_pair(a, b, phi, t)
    tr = rytz_axes(P, Q)
    assert tr.axis_lengths[0] == pytest.approx(a, rel=1e-10)
    assert tr.axis_lengths[1] == pytest.approx(b, rel=1e-10)
    lens, vecs = eigen_axes(P, Q)
    for k in range(2):
        assert line_angle(tr.axis_dirs[:, k], vecs[:, k]) <= 1e-8


def test_principal_pair_bypasses_bisectors():
    tr = rytz_axes([0.0, 1.0], [2.0, 0.0])
    assert tr.branch == "principal"
    assert tr.axis_lengths == (2.0, 1.0)
    assert tr.T is None


def test_near_circle_uses_length_fallback():
    P, Q, _ = conjugate_pair(1.0, 1.0 - 1e-7, 0.3, 0.7)
    tr = rytz_axes(P, Q)
    assert tr.axis_lengths[0] == pytest.approx(1.0, rel=1e-8)
    assert tr.axis_lengths[1] == pytest.approx(1.0 - 1e-7, rel=1e-8)


@pytest.mark.parametrize("P,Q", [([0, 0], [1, 0]), ([1, 1], [2, 2])])
def test_degenerate_pairs(P, Q):
    with pytest.raises(DegenerateError):
        rytz_axes(P, Q)


def test_trace_round_trips_to_dict():
    d = rytz_axes([3.0, 0.0], [1.0, 2.0]).to_dict()
    assert set(d) >= {"P", "Q", "M", "L", "T", "Pprime", "axis_lengths", "branch"}
    assert d["branch"] == "general"


def test_section_of_a_3d_system(ell321):
    from quadric_axes import random_system
    from quadric_axes.confocal import section_radii_oracle
    sys_, placed = random_system(ell321, seed=8)
    basis, P2, Q2 = section_ellipse(sys_, 1, 2)
    tr, dirs3, lens = rytz_in_plane(basis, P2, Q2)
    x = placed.to_canonical(sys_.X[:, 0])
    ref = np.sqrt(section_radii_oracle(ell321, x))[::-1]
    assert lens == pytest.approx(tuple(ref), rel=1e-10)
    assert np.allclose(dirs3.T @ dirs3, np.eye(2), atol=1e-12)


def test_section_basis_rejects_parallel():
    with pytest.raises(DegenerateError):
        section_basis([1, 0, 0], [2, 0, 0])
