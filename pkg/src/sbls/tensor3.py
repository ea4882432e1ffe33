"""Third-order tensor contractions and the bilinear least-squares objective.

The data of a problem instance is a dense real tensor A of shape (l, m, n),
a right-hand side b of length l, and sparsity budgets s < m, t < n.  A point
is a pair (x, y) with x of length m and y of length n; the map

    (A x y)_i = sum_{j,k} a_{ijk} x_j y_k

is linear in each block, and the objective is f(x, y) = 0.5 * ||A x y - b||^2.

Everything here is plain numpy.  Gradients are exact (computed from the two
partial contractions); the finite-difference routine at the bottom exists
only as a verification oracle and is never used by the solvers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Point",
    "Instance",
    "mode2_product",
    "mode3_product",
    "bilinear_map",
    "residual",
    "objective",
    "gradient",
    "fd_gradient",
]


def _as_vector(v, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1-d vector, got shape {arr.shape}")
    return arr


def _as_tensor(a) -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 3:
        raise ValueError(f"tensor must be 3-d, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class Point:
    """A candidate solution: the x block (length m) and y block (length n).

    Indices into the concatenated vector z = (x, y) run 0..m+n-1, with the
    y block occupying positions m..m+n-1.
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", _as_vector(self.x, "x"))
        object.__setattr__(self, "y", _as_vector(self.y, "y"))

    @property
    def m(self) -> int:
        return self.x.shape[0]

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def z(self) -> np.ndarray:
        """Concatenated coordinate vector (a fresh copy)."""
        return np.concatenate([self.x, self.y])

    @classmethod
    def from_z(cls, z, m: int) -> "Point":
        z = _as_vector(z, "z")
        if not 0 < m < z.shape[0]:
            raise ValueError(f"split index m={m} out of range for length {z.shape[0]}")
        return cls(z[:m].copy(), z[m:].copy())

    def replace_coord(self, i: int, value: float) -> "Point":
        """Copy of the point with concatenated coordinate i set to value."""
        z = self.z
        z[i] = value
        return Point.from_z(z, self.m)


@dataclass(frozen=True)
class Instance:
    """Problem data: tensor (l, m, n), rhs b (l,), and sparsity levels s, t."""

    tensor: np.ndarray
    b: np.ndarray
    s: int
    t: int

    def __post_init__(self):
        a = _as_tensor(self.tensor)
        b = _as_vector(self.b, "b")
        object.__setattr__(self, "tensor", a)
        object.__setattr__(self, "b", b)
        l, m, n = a.shape
        if b.shape[0] != l:
            raise ValueError(f"b has length {b.shape[0]}, expected l={l}")
        if not np.all(np.isfinite(a)) or not np.all(np.isfinite(b)):
            raise ValueError("tensor and b must be finite")
        if not (isinstance(self.s, (int, np.integer)) and 1 <= self.s < m):
            raise ValueError(f"s must satisfy 1 <= s < m={m}, got {self.s}")
        if not (isinstance(self.t, (int, np.integer)) and 1 <= self.t < n):
            raise ValueError(f"t must satisfy 1 <= t < n={n}, got {self.t}")

    @property
    def l(self) -> int:
        return self.tensor.shape[0]

    @property
    def m(self) -> int:
        return self.tensor.shape[1]

    @property
    def n(self) -> int:
        return self.tensor.shape[2]

    def check_point(self, p: Point) -> None:
        if p.m != self.m or p.n != self.n:
            raise ValueError(
                f"point dims ({p.m},{p.n}) do not match instance ({self.m},{self.n})"
            )


def mode2_product(a, x) -> np.ndarray:
    """Contract the tensor with x along the middle index: result (l, n).

    Entry (i, k) is sum_j a_{ijk} x_j.  Columns of the result are the
    response directions for the y coordinates at fixed x.
    """
    a = _as_tensor(a)
    x = _as_vector(x, "x")
    if x.shape[0] != a.shape[1]:
        raise ValueError(f"x has length {x.shape[0]}, expected m={a.shape[1]}")
    return np.einsum("ijk,j->ik", a, x)


def mode3_product(a, y) -> np.ndarray:
    """Contract the tensor with y along the last index: result (l, m).

    Entry (i, j) is sum_k a_{ijk} y_k; columns are the response directions
    for the x coordinates at fixed y.
    """
    a = _as_tensor(a)
    y = _as_vector(y, "y")
    if y.shape[0] != a.shape[2]:
        raise ValueError(f"y has length {y.shape[0]}, expected n={a.shape[2]}")
    return np.einsum("ijk,k->ij", a, y)


def bilinear_map(a, x, y) -> np.ndarray:
    """Full contraction (A x y)_i = sum_{j,k} a_{ijk} x_j y_k, length l."""
    a = _as_tensor(a)
    x = _as_vector(x, "x")
    y = _as_vector(y, "y")
    if x.shape[0] != a.shape[1] or y.shape[0] != a.shape[2]:
        raise ValueError(
            f"vector lengths ({x.shape[0]},{y.shape[0]}) do not match "
            f"tensor dims ({a.shape[1]},{a.shape[2]})"
        )
    return np.einsum("ijk,j,k->i", a, x, y)


def residual(inst: Instance, p: Point) -> np.ndarray:
    inst.check_point(p)
    return bilinear_map(inst.tensor, p.x, p.y) - inst.b


def objective(inst: Instance, p: Point) -> float:
    """f(x, y) = 0.5 * ||A x y - b||^2."""
    r = residual(inst, p)
    return 0.5 * float(r @ r)


def gradient(inst: Instance, p: Point) -> np.ndarray:
    """Exact gradient of f, concatenated (length m+n).

    With r = A x y - b, the x block is (A .3 y)^T r and the y block is
    (A .2 x)^T r, where .2/.3 are the partial contractions above.
    """
    inst.check_point(p)
    r = bilinear_map(inst.tensor, p.x, p.y) - inst.b
    gx = mode3_product(inst.tensor, p.y).T @ r
    gy = mode2_product(inst.tensor, p.x).T @ r
    return np.concatenate([gx, gy])


def fd_gradient(inst: Instance, p: Point, h: float = 1e-6) -> np.ndarray:
    """Central finite-difference gradient. Test oracle only."""
    inst.check_point(p)
    z = p.z
    g = np.empty_like(z)
    for i in range(z.shape[0]):
        zp = z.copy()
        zm = z.copy()
        zp[i] += h
        zm[i] -= h
        fp = objective(inst, Point.from_z(zp, p.m))
        fm = objective(inst, Point.from_z(zm, p.m))
        g[i] = (fp - fm) / (2.0 * h)
    return g
