import numpy as np
import pytest

from quadric_axes import (
    ConjugateSystem,
    DegenerateError,
    Ellipsoid,
    InputError,
    axes_oracle,
    check_conjugacy,
    implied_quadric,
    random_system,
    sum_of_squares,
    volume,
)
from quadric_axes.conjugate import AxesResult

from conftest import random_semi_axes


def test_random_system_lies_on_its_ellipsoid(ell321):
    sys_, placed = random_system(ell321, seed=3)
    M = placed.quadric_matrix()
    for v in sys_.diameters:
        assert v @ M @ v == pytest.approx(1.0, abs=1e-12)
    for i in range(3):
        for j in range(i + 1, 3):
            assert check_conjugacy(sys_.X[:, i], sys_.X[:, j], placed) == pytest.approx(0.0, abs=1e-12)


def test_invariants(ell321):
    for seed in range(50):
        sys_, _ = random_system(ell321, seed=seed)
        assert sum_of_squares(sys_) == pytest.approx(14.0, rel=1e-12)
        assert abs(volume(sys_)) == pytest.approx(6.0, rel=1e-12)


def test_implied_quadric_matches_placed_ellipsoid(ell321):
    sys_, placed = random_system(ell321, seed=11)
    assert np.allclose(implied_quadric(sys_), placed.quadric_matrix(), atol=1e-12)


def test_oracle_recovers_axes(rng):
    for _ in range(30):
        a = random_semi_axes(rng)
        sys_, placed = random_system(Ellipsoid(a), seed=int(rng.integers(1 << 30)))
        ora = axes_oracle(sys_)
        assert np.allclose(ora.lengths, a, rtol=1e-12)
        truth = AxesResult(placed.frame, a, "truth")
        assert ora.compare(truth)["max_angle"] < 1e-10


def test_compare_handles_repeated_lengths():
    sys_, placed = random_system(Ellipsoid((2.0, 1.0, 1.0)), seed=5)
    ora = axes_oracle(sys_)
    truth = AxesResult(placed.frame, (2.0, 1.0, 1.0), "truth")
    m = ora.compare(truth)
    assert m["max_angle"] < 1e-8
    assert m["max_length_rel_err"] < 1e-12


def test_unrotated_unmixed_system_is_principal(ell321):
    sys_, _ = random_system(ell321, rotate=False, mix=False)
    assert np.allclose(sys_.X, np.diag([3.0, 2.0, 1.0]))


@pytest.mark.parametrize("axes", [(1.0,), (1.0, 2.0), (3.0, -1.0), (3.0, float("inf"))])
def test_ellipsoid_rejects_bad_axes(axes):
    with pytest.raises(InputError):
        Ellipsoid(axes)


def test_degenerate_system_rejected():
    with pytest.raises(DegenerateError):
        ConjugateSystem.from_rows([[1, 0, 0], [2, 0, 0], [0, 0, 1]])
    with pytest.raises(InputError):
        ConjugateSystem(np.ones((2, 3)))


def test_conjugacy_needs_nonzero(ell321):
    with pytest.raises(InputError):
        check_conjugacy([0, 0, 0], [1, 0, 0], ell321)


def test_two_dimensional_system():
    sys_, _ = random_system(Ellipsoid((4.0, 1.5)), seed=1)
    assert axes_oracle(sys_).lengths == pytest.approx((4.0, 1.5), rel=1e-12)
