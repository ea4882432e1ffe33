import numpy as np
import pytest

from sbls import (
    BOULIGAND,
    CLARKE,
    InfeasiblePointError,
    Point,
    is_feasible,
    nb_zero_set,
    normal_membership,
    require_feasible,
    support_profile,
    tangent_membership,
)


def pt(x, y):
    return Point(np.asarray(x, float), np.asarray(y, float))


def test_support_profile_basics():
    prof = support_profile(pt([0.0, 1.0, 0.0, 2.0, 0.0], [0.0, 0.0, 3.0, 0.0]))
    assert prof.gamma1 == (1, 3)
    assert prof.gamma2 == (7,)
    assert prof.gamma_x == 1
    assert prof.card1 == 2 and prof.card2 == 1
    assert prof.gamma == (1, 3, 7)


def test_support_profile_ignores_subtolerance_entries():
    prof = support_profile(pt([1e-12, 1.0, 0.0], [0.0, 1e-11, 2.0]))
    assert prof.gamma1 == (1,)
    assert prof.gamma2 == (5,)


def test_feasibility_rules(paper_a):
    inst = paper_a.instance
    assert is_feasible(inst, paper_a.known_point)
    assert not is_feasible(inst, pt([0, 0, 0], [1, 1, 0]))
    assert not is_feasible(inst, pt([1, 1, 1], [1, 0, 0]))  # x over budget
    assert not is_feasible(inst, pt([1, 0, 0], [1, 1, 1]))  # y over budget
    assert not is_feasible(inst, pt([2, 0, 0], [1, 0, 0]))  # pivot must be 1
    assert is_feasible(inst, pt([0, 1, 0], [0, 0, 0]))  # zero y is fine


def test_require_feasible_messages(paper_a):
    inst = paper_a.instance
    with pytest.raises(InfeasiblePointError, match="pivot constraint cannot hold"):
        require_feasible(inst, pt([0, 0, 0], [1, 0, 0]))
    with pytest.raises(InfeasiblePointError, match="budget s=2"):
        require_feasible(inst, pt([1, 1, 1], [1, 0, 0]))
    with pytest.raises(InfeasiblePointError, match="expected 1"):
        require_feasible(inst, pt([0, 3, 0], [1, 0, 0]))


def test_nb_zero_set_four_cases():
    m, n, s, t = 5, 4, 3, 2
    both = support_profile(pt([0, 1, 1, 0, 2], [3, 0, 4, 0]))
    assert nb_zero_set(both, m, n, s, t) == frozenset({2, 4, 5, 7})
    x_only = support_profile(pt([0, 1, 1, 0, 2], [0, 0, 4, 0]))
    assert nb_zero_set(x_only, m, n, s, t) == frozenset({2, 4, 5, 6, 7, 8})
    y_only = support_profile(pt([0, 1, 1, 0, 0], [3, 0, 4, 0]))
    assert nb_zero_set(y_only, m, n, s, t) == frozenset({2, 3, 4, 5, 7})
    neither = support_profile(pt([0, 1, 1, 0, 0], [0, 0, 4, 0]))
    assert nb_zero_set(neither, m, n, s, t) == frozenset(range(2, 9))


def test_nb_zero_set_always_covers_clarke_set():
    rng = np.random.default_rng(3)
    m, n, s, t = 6, 5, 3, 2
    for _ in range(50):
        k1 = rng.integers(1, s + 1)
        k2 = rng.integers(0, t + 1)
        x = np.zeros(m)
        x[np.sort(rng.choice(m, size=k1, replace=False))] = 1.0
        y = np.zeros(n)
        if k2:
            y[np.sort(rng.choice(n, size=k2, replace=False))] = 1.0
        prof = support_profile(Point(x, y))
        zs = nb_zero_set(prof, m, n, s, t)
        clarke = set(prof.gamma) - {prof.gamma_x}
        assert clarke <= zs


def test_tangent_membership_bouligand():
    p = pt([1, 1, 0], [1, 1, 0])
    s = t = 2
    assert tangent_membership(p, [0, 1, 0, 0, 0, 0], BOULIGAND, s, t)
    assert tangent_membership(p, [0, 0, 0, 1, 1, 0], BOULIGAND, s, t)
    assert not tangent_membership(p, [1, 0, 0, 0, 0, 0], BOULIGAND, s, t)
    assert not tangent_membership(p, [0, 0, 1, 0, 0, 0], BOULIGAND, s, t)
    assert not tangent_membership(p, [0, 0, 0, 0, 0, 1], BOULIGAND, s, t)


def test_tangent_membership_clarke():
    p = pt([1, 1, 0], [1, 1, 0])
    assert tangent_membership(p, [0, 2, 0, 3, -1, 0], CLARKE, 2, 2)
    assert not tangent_membership(p, [0, 0, 1, 0, 0, 0], CLARKE, 2, 2)
    assert not tangent_membership(p, [1, 0, 0, 0, 0, 0], CLARKE, 2, 2)


def test_tangent_membership_unsaturated_budget():
    p = pt([1, 0, 0], [1, 0, 0])
    # one x slot and one y slot still free: new indices past the pivot work
    assert tangent_membership(p, [0, 1, 0, 0, 1, 0], BOULIGAND, 2, 2)
    assert not tangent_membership(p, [0, 1, 1, 0, 0, 0], BOULIGAND, 2, 2)


def test_normal_membership():
    p = pt([1, 1, 0], [1, 1, 0])
    s = t = 2
    assert normal_membership(p, [5, 0, 7, 0, 0, 9], BOULIGAND, s, t)
    assert not normal_membership(p, [0, 1, 0, 0, 0, 0], BOULIGAND, s, t)
    assert normal_membership(p, [5, 0, 7, 0, 0, 9], CLARKE, s, t)
    q = pt([1, 0, 0], [1, 0, 0])
    # nothing past the pivot may be nonzero when both budgets have room
    assert normal_membership(q, [4, 0, 0, 0, 0, 0], BOULIGAND, s, t)
    assert not normal_membership(q, [0, 0, 0, 0, 0, 1], BOULIGAND, s, t)
    assert normal_membership(q, [0, 1, 1, 0, 1, 1], CLARKE, s, t)


def test_bad_sense_rejected():
    p = pt([1, 0, 0], [1, 0, 0])
    with pytest.raises(ValueError):
        tangent_membership(p, [0, 0, 0, 0, 0, 0], "fancy", 2, 2)
    with pytest.raises(ValueError):
        normal_membership(p, [0, 0, 0, 0, 0, 0], "fancy", 2, 2)
