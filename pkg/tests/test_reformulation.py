import numpy as np
import pytest

from sbls import AuxPair, INTEGER, RELAXED, Point, check_pair, lift, normal_E_membership


def pt(x, y):
    return Point(np.asarray(x, float), np.asarray(y, float))


def test_lift_reference_point(paper_a):
    pair = lift(paper_a.known_point)
    np.testing.assert_array_equal(pair.w, [0, 0, 1, 0, 0, 1])
    assert check_pair(pair, 2, 2, INTEGER)
    assert check_pair(pair, 2, 2, RELAXED)


def test_complementarity_violation():
    z = pt([1, 1, 0], [1, 0, 0])
    w = np.array([0.0, 1.0, 1.0, 0.0, 1.0, 1.0])  # overlaps z at index 1
    assert not check_pair(AuxPair(z, w), 2, 2, INTEGER)


def test_counting_budgets():
    z = pt([1, 0, 0], [1, 0, 0])
    w_ok = np.array([0.0, 1.0, 1.0, 0.0, 1.0, 1.0])
    assert check_pair(AuxPair(z, w_ok), 2, 2, INTEGER)
    # too few declared zeros in the x block: claims 3 nonzeros with s = 2
    w_low = np.array([0.0, 0.0, 0.0, 0.0, 1.0, 1.0])
    assert not check_pair(AuxPair(z, w_low), 2, 2, INTEGER)


def test_integer_vs_relaxed():
    z = pt([1, 0, 0], [1, 0, 0])
    w = np.array([0.0, 0.5, 1.0, 0.0, 1.0, 1.0])
    assert not check_pair(AuxPair(z, w), 2, 2, INTEGER)
    assert check_pair(AuxPair(z, w), 2, 2, RELAXED)
    w_neg = np.array([0.0, -0.2, 1.0, 0.0, 1.0, 1.0])
    assert not check_pair(AuxPair(z, w_neg), 2, 2, RELAXED)


def test_pair_length_validation():
    with pytest.raises(ValueError):
        AuxPair(pt([1, 0, 0], [1, 0, 0]), np.zeros(5))


def test_lift_requires_pivot():
    with pytest.raises(ValueError):
        lift(pt([0, 0, 0], [1, 0, 0]))


def test_normal_E_membership():
    p = pt([0, 1, 0], [1, 0, 0])  # pivot at index 1
    assert normal_E_membership(p, [7, 3, 0, 0, 0, 0])
    assert not normal_E_membership(p, [0, 0, 1e-6, 0, 0, 0])
    assert normal_E_membership(p, [0, 0, 1e-6, 0, 0, 0], tol=1e-5)
    with pytest.raises(ValueError):
        normal_E_membership(p, [1, 2, 3])
