import numpy as np
import pytest

from sbls import (
    Instance,
    Point,
    bilinear_map,
    fd_gradient,
    gradient,
    mode2_product,
    mode3_product,
    objective,
    residual,
)
from conftest import rand_instance, rand_point


def test_mode2_rows(paper_a):
    got = mode2_product(paper_a.instance.tensor, np.array([1.0, 1.0, 0.0]))
    np.testing.assert_array_equal(got, [[2.0, 2.0, 3.0], [1.0, 1.0, -1.0]])


def test_mode3_rows(paper_a):
    got = mode3_product(paper_a.instance.tensor, np.array([1.0, 1.0, 0.0]))
    np.testing.assert_array_equal(got, [[2.0, 2.0, 0.0], [1.0, 1.0, 1.0]])


def test_contraction_consistency():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((4, 3, 5))
    for _ in range(20):
        x = rng.standard_normal(3)
        y = rng.standard_normal(5)
        v = bilinear_map(a, x, y)
        np.testing.assert_allclose(v, mode2_product(a, x) @ y, atol=1e-12)
        np.testing.assert_allclose(v, mode3_product(a, y) @ x, atol=1e-12)


def test_objective_is_half_residual_norm(paper_a):
    inst = paper_a.instance
    p = paper_a.known_point
    r = residual(inst, p)
    assert objective(inst, p) == pytest.approx(0.5 * float(r @ r), abs=1e-14)
    assert objective(inst, p) == pytest.approx(2.5, abs=1e-12)


def test_gradient_blocks(paper_a):
    inst = paper_a.instance
    p = paper_a.known_point
    g = gradient(inst, p)
    np.testing.assert_allclose(g, [0.0, 0.0, 2.0, 0.0, 0.0, -5.0], atol=1e-10)
    r = residual(inst, p)
    gx = mode3_product(inst.tensor, p.y).T @ r
    gy = mode2_product(inst.tensor, p.x).T @ r
    np.testing.assert_allclose(g, np.concatenate([gx, gy]), atol=1e-12)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(7)
    inst = rand_instance(rng, l=5, m=4, n=4)
    for _ in range(5):
        p = rand_point(inst, rng)
        g = gradient(inst, p)
        fd = fd_gradient(inst, p)
        denom = 1.0 + np.linalg.norm(g)
        assert np.linalg.norm(g - fd) / denom <= 1e-6


def test_point_helpers():
    p = Point(np.array([1.0, 0.0, 2.0]), np.array([0.0, 3.0]))
    assert p.m == 3 and p.n == 2
    np.testing.assert_array_equal(p.z, [1.0, 0.0, 2.0, 0.0, 3.0])
    q = Point.from_z(p.z, 3)
    np.testing.assert_array_equal(q.x, p.x)
    np.testing.assert_array_equal(q.y, p.y)
    r = p.replace_coord(4, 7.0)
    assert r.y[1] == 7.0 and p.y[1] == 3.0


def test_instance_validation():
    a = np.zeros((2, 3, 3))
    b = np.zeros(2)
    with pytest.raises(ValueError):
        Instance(np.zeros((2, 3)), b, 1, 1)
    with pytest.raises(ValueError):
        Instance(a, np.zeros(5), 1, 1)
    with pytest.raises(ValueError):
        Instance(a, b, 0, 1)
    with pytest.raises(ValueError):
        Instance(a, b, 3, 1)  # s must stay below m
    with pytest.raises(ValueError):
        Instance(np.full((2, 3, 3), np.nan), b, 1, 1)
    inst = Instance(a, b, 2, 2)
    with pytest.raises(ValueError):
        inst.check_point(Point(np.zeros(4), np.zeros(3)))
