"""Projection onto the feasible set, in the scaled ("like") and plain metrics.

The feasible set F couples a sparsity cap with the pivot constraint (first
nonzero of x equals 1), so the Euclidean projection of an arbitrary point is
awkward to use inside projected-gradient schemes: the pivot constraint fights
the scaling freedom of the bilinear model.  The like-projection fixes this by
measuring the distance after rescaling a candidate u through the map

    psi_z(u) = (x_g * u_x, u_y / x_g),   g = first index with u_i != 0 and x_i != 0,

where x is the x block of the base point z (psi is the identity when x = 0,
and undefined when no such g exists).  like_project(z) returns the feasible
minimizers of ||psi_z(u) - z||^2.  They admit a closed form: keep the s
largest magnitudes of x (ties resolved every possible way) rescaled by the
first surviving nonzero of x, and the t largest of y scaled oppositely.  The
attained squared distance telescopes to the tail sums

    sum of the (s+1)-th.. largest |x|^2  +  sum of the (t+1)-th.. largest |y|^2,

plus 1 instead of the x tail when x = 0 (the pivot must be created from
nothing).  `like_project_oracle` recomputes all of this by brute force over
support classes, straight from the definition of psi; it exists to check the
closed form and is capped at dimensions 8 x 8.

`classic_project` is the plain Euclidean projection onto F (no rescaling),
used for contrast: pick a pivot slot, pay (x_g - 1)^2 plus everything before
it, keep the s-1 largest magnitudes after it.

Tie handling uses exact float equality on magnitudes: the reported count is
the number of numerically distinct minimizers.  zero_tol enters only where
"nonzero" decides structure (the x = 0 branch and pivot selection).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .feasible import ZERO_TOL
from .tensor3 import Point

__all__ = [
    "MAX_MATERIALIZED",
    "ProjectionResult",
    "psi",
    "like_project",
    "like_project_oracle",
    "classic_project",
]

MAX_MATERIALIZED = 64


@dataclass(frozen=True)
class ProjectionResult:
    """Minimizer set of a projection.

    `minimizers` holds every minimizer when count <= MAX_MATERIALIZED,
    otherwise only the representative (lexicographically smallest support).
    `count` is always the true number of distinct minimizers.
    """

    minimizers: tuple
    count: int
    distance_sq: float

    @property
    def representative(self) -> Point:
        return self.minimizers[0]


def psi(z: Point, u: Point, zero_tol: float = ZERO_TOL):
    """Rescaling map used by the like-projection; None when undefined.

    Identity when the x block of z is zero.  Otherwise scales u by the
    entry of z.x at the first index where both u and z.x are nonzero.
    """
    if u.m != z.m or u.n != z.n:
        raise ValueError(f"u dims ({u.m},{u.n}) do not match z ({z.m},{z.n})")
    if np.all(np.abs(z.x) <= zero_tol):
        return Point(u.x.copy(), u.y.copy())
    both = (np.abs(u.x) > zero_tol) & (np.abs(z.x) > zero_tol)
    idx = np.nonzero(both)[0]
    if idx.size == 0:
        return None
    pivot = z.x[idx[0]]
    return Point(pivot * u.x, u.y / pivot)


def _check_budgets(m: int, n: int, s: int, t: int) -> None:
    if not 1 <= s < m:
        raise ValueError(f"s must satisfy 1 <= s < m={m}, got {s}")
    if not 1 <= t < n:
        raise ValueError(f"t must satisfy 1 <= t < n={n}, got {t}")


def _selection(v: np.ndarray, k: int):
    """Tie structure of "keep the k largest magnitudes of v".

    Returns (cut, above, tied, take, tail_sq): cut is the k-th largest
    magnitude, `above` the indices strictly above it (always fewer than k),
    `tied` the indices exactly at it, `take` how many of `tied` are kept,
    and tail_sq the squared sum of the discarded magnitudes (identical for
    every choice).  Exact float comparisons throughout.
    """
    mags = np.sort(np.abs(v))[::-1]
    cut = float(mags[k - 1])
    above = [int(i) for i in range(v.shape[0]) if abs(v[i]) > cut]
    tied = [int(i) for i in range(v.shape[0]) if abs(v[i]) == cut]
    take = k - len(above)
    tail_sq = float(np.sum(mags[k:] ** 2))
    return cut, above, tied, take, tail_sq


def _choices(cut, tied, take):
    """Kept-index choices among the tied entries, lexicographic order.

    When the threshold magnitude is exactly zero every choice yields the
    same vector, so the factor collapses to the first choice.
    """
    if take == 0:
        return [()]
    if cut == 0.0:
        return [tuple(tied[:take])]
    return [tuple(c) for c in combinations(tied, take)]


def _n_choices(cut, tied, take) -> int:
    if take == 0 or cut == 0.0:
        return 1
    return math.comb(len(tied), take)


def like_project(z: Point, s: int, t: int, zero_tol: float = ZERO_TOL,
                 max_materialized: int = MAX_MATERIALIZED) -> ProjectionResult:
    """All minimizers of ||psi_z(u) - z||^2 over the feasible set."""
    m, n = z.m, z.n
    _check_budgets(m, n, s, t)
    cut2, above2, tied2, take2, y_tail_sq = _selection(z.y, t)
    y_choices = _choices(cut2, tied2, take2)
    n2 = _n_choices(cut2, tied2, take2)

    x_zero = bool(np.all(np.abs(z.x) <= zero_tol))
    if x_zero:
        # No pivot to rescale through: psi is the identity, the unit pivot
        # costs 1 wherever it goes, and the y block is kept unscaled.
        count = m * n2
        dist = 1.0 + y_tail_sq
        mins = []
        for i0 in range(m):
            ux = np.zeros(m)
            ux[i0] = 1.0
            for c2 in y_choices:
                uy = np.zeros(n)
                keep2 = above2 + list(c2)
                uy[keep2] = z.y[keep2]
                mins.append(Point(ux, uy))
                if count > max_materialized:
                    return ProjectionResult(tuple(mins), count, dist)
        return ProjectionResult(tuple(mins), count, dist)

    cut1, above1, tied1, take1, x_tail_sq = _selection(z.x, s)
    x_choices = _choices(cut1, tied1, take1)
    n1 = _n_choices(cut1, tied1, take1)
    count = n1 * n2
    dist = x_tail_sq + y_tail_sq
    mins = []
    for c1 in x_choices:
        omega1 = sorted(above1 + list(c1))
        live = [i for i in omega1 if abs(z.x[i]) > zero_tol]
        pivot = z.x[live[0]]
        ux = np.zeros(m)
        ux[omega1] = z.x[omega1] / pivot
        for c2 in y_choices:
            uy = np.zeros(n)
            keep2 = above2 + list(c2)
            uy[keep2] = pivot * z.y[keep2]
            mins.append(Point(ux, uy))
            if count > max_materialized:
                return ProjectionResult(tuple(mins), count, dist)
    return ProjectionResult(tuple(mins), count, dist)


def like_project_oracle(z: Point, s: int, t: int,
                        zero_tol: float = ZERO_TOL) -> ProjectionResult:
    """Brute-force like-projection over support classes; dims capped at 8.

    Enumerates every feasible support shape (pivot slot p, up to s-1 extra
    x slots past p, up to t y slots), plugs in the per-class optimum of the
    separable distance, and evaluates ||psi_z(u) - z||^2 literally through
    psi.  Independent of the closed form above, hence useful against it.
    """
    m, n = z.m, z.n
    if m > 8 or n > 8:
        raise ValueError(f"oracle is capped at 8x8 dims, got {m}x{n}")
    _check_budgets(m, n, s, t)

    zvec = z.z
    y_supports = [c for size in range(t + 1) for c in combinations(range(n), size)]
    x_zero = bool(np.all(np.abs(z.x) <= zero_tol))

    candidates = []
    if x_zero:
        for p in range(m):
            ux = np.zeros(m)
            ux[p] = 1.0
            for sy in y_supports:
                uy = np.zeros(n)
                uy[list(sy)] = z.y[list(sy)]
                u = Point(ux, uy)
                v = psi(z, u, zero_tol)
                d = v.z - zvec
                candidates.append((float(d @ d), u))
    else:
        for p in range(m):
            for extra in range(s):
                for tail in combinations(range(p + 1, m), extra):
                    T = (p,) + tail
                    live = [i for i in T if abs(z.x[i]) > zero_tol]
                    if not live:
                        continue  # psi undefined everywhere on this class
                    g = live[0]
                    ux = np.zeros(m)
                    ux[list(T)] = z.x[list(T)] / z.x[g]
                    ux[p] = 1.0
                    for sy in y_supports:
                        uy = np.zeros(n)
                        uy[list(sy)] = z.x[g] * z.y[list(sy)]
                        u = Point(ux, uy)
                        v = psi(z, u, zero_tol)
                        if v is None:
                            continue
                        d = v.z - zvec
                        candidates.append((float(d @ d), u))

    best = min(d for d, _ in candidates)
    atol = 1e-12 * (1.0 + best)
    seen = set()
    mins = []
    for d, u in candidates:
        if d > best + atol:
            continue
        key = tuple(u.z.tolist())
        if key in seen:
            continue
        seen.add(key)
        mins.append(u)
    mins.sort(key=lambda u: (tuple(np.nonzero(u.z)[0].tolist()), tuple(u.z.tolist())))
    count = len(mins)
    if count > MAX_MATERIALIZED:
        mins = mins[:1]
    return ProjectionResult(tuple(mins), count, best)


def classic_project(z: Point, s: int, t: int, zero_tol: float = ZERO_TOL,
                    max_materialized: int = MAX_MATERIALIZED) -> ProjectionResult:
    """Plain Euclidean projection onto the feasible set.

    For each pivot slot g: pay (x_g - 1)^2, zero everything before g, keep
    the s-1 largest magnitudes after g.  The y block keeps its t largest
    magnitudes.  Minimizing pivots are collected up to a 1e-12 relative
    tolerance (costs are sums accumulated in different orders).
    """
    m, n = z.m, z.n
    _check_budgets(m, n, s, t)
    cut2, above2, tied2, take2, y_tail_sq = _selection(z.y, t)
    y_choices = _choices(cut2, tied2, take2)
    n2 = _n_choices(cut2, tied2, take2)

    per_pivot = []
    for g in range(m):
        rest = z.x[g + 1:]
        kk = min(s - 1, rest.shape[0])
        if kk == 0:
            cut, above, tied, take = 0.0, [], [], 0
            tail_sq = float(np.sum(rest ** 2))
        else:
            cut, above, tied, take, tail_sq = _selection(rest, kk)
        head_sq = float(np.sum(z.x[:g] ** 2))
        cost = (z.x[g] - 1.0) ** 2 + head_sq + tail_sq
        per_pivot.append((cost, g, cut, above, tied, take))

    best = min(c for c, *_ in per_pivot)
    atol = 1e-12 * (1.0 + best)
    winners = [w for w in per_pivot if w[0] <= best + atol]

    count = sum(_n_choices(cut, tied, take) for _, _, cut, _, tied, take in winners) * n2
    dist = best + y_tail_sq
    mins = []
    for _, g, cut, above, tied, take in winners:
        for c1 in _choices(cut, tied, take):
            ux = np.zeros(m)
            ux[g] = 1.0
            keep1 = [g + 1 + i for i in above + list(c1)]
            ux[keep1] = z.x[keep1]
            for c2 in y_choices:
                uy = np.zeros(n)
                keep2 = above2 + list(c2)
                uy[keep2] = z.y[keep2]
                mins.append(Point(ux, uy))
                if count > max_materialized:
                    return ProjectionResult(tuple(mins), count, dist)
    return ProjectionResult(tuple(mins), count, dist)
