import numpy as np
import pytest

from sbls import (
    Point,
    SupportPair,
    enumerate_supports,
    gen_planted,
    global_brute,
    is_feasible,
    objective,
    solve_restricted,
)


def test_enumeration_shape():
    pairs = enumerate_supports(3, 3, 2, 2)
    assert len(pairs) == 42
    assert pairs[0] == SupportPair(s1=(0,), s2=())
    assert pairs[1] == SupportPair(s1=(0,), s2=(3,))
    assert pairs == sorted(pairs, key=lambda p: (p.s1, p.s2))
    assert len(set(pairs)) == len(pairs)


def test_enumeration_budget():
    with pytest.raises(ValueError):
        enumerate_supports(24, 24, 12, 12)


def test_restricted_solve_single_column(paper_a):
    point, f = solve_restricted(paper_a.instance, SupportPair((0,), (3,)))
    assert f == pytest.approx(6.25, abs=1e-12)
    np.testing.assert_allclose(point.z, [1, 0, 0, 2.5, 0, 0], atol=1e-12)


def test_restricted_solve_validates_pair(paper_a):
    inst = paper_a.instance
    with pytest.raises(ValueError):
        solve_restricted(inst, SupportPair((), (3,)))
    with pytest.raises(ValueError):
        solve_restricted(inst, SupportPair((0, 1, 2), (3,)))
    with pytest.raises(ValueError):
        solve_restricted(inst, SupportPair((0,), (0,)))  # y index below m


def test_brute_force_certifies_reference_instance(paper_a):
    inst = paper_a.instance
    res = global_brute(inst)
    assert res.f == pytest.approx(0.0, abs=1e-12)
    assert res.certified and not res.heuristic
    assert is_feasible(inst, res.point)
    # the published optimum reaches the same value
    alt = Point(np.array([1.0, 1.0, 0.0]), np.array([1.0, 0.0, 1.0]))
    assert objective(inst, alt) == pytest.approx(0.0, abs=1e-12)


def test_brute_force_finds_planted_zero():
    inst, plant = gen_planted(4, 4, 4, 2, 2, seed=12)
    res = global_brute(inst)
    assert res.certified
    assert res.f <= 1e-12 * (1.0 + 0.5 * float(inst.b @ inst.b))


def test_brute_force_deterministic(paper_a):
    r1 = global_brute(paper_a.instance)
    r2 = global_brute(paper_a.instance)
    assert r1.pair == r2.pair and r1.f == r2.f
    np.testing.assert_array_equal(r1.point.z, r2.point.z)


def test_thread_count_does_not_change_result(paper_a, monkeypatch):
    serial = global_brute(paper_a.instance)
    monkeypatch.setenv("SBLS_THREADS", "2")
    threaded = global_brute(paper_a.instance)
    assert serial.pair == threaded.pair
    assert serial.f == threaded.f
    np.testing.assert_array_equal(serial.point.z, threaded.point.z)


def test_thread_env_validation(monkeypatch):
    monkeypatch.setenv("SBLS_THREADS", "0")
    from sbls._threads import worker_count

    with pytest.raises(ValueError):
        worker_count()
