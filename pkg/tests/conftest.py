import numpy as np
import pytest

from sbls import Instance, load_bundled, random_feasible_point


@pytest.fixture(scope="session")
def paper_a():
    return load_bundled("paperA")


@pytest.fixture(scope="session")
def paper_b():
    return load_bundled("paperB")


def rand_instance(rng, l=6, m=5, n=5, s=2, t=2):
    """Dense gaussian instance; b is random so f > 0 generically."""
    a = rng.standard_normal((l, m, n))
    b = rng.standard_normal(l)
    return Instance(a, b, s, t)


def rand_point(inst, rng):
    return random_feasible_point(inst, rng)
