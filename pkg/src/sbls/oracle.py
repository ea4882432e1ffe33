"""Brute-force global solver: enumerate supports, solve each restriction.

With supports fixed the problem is a small bilinear least-squares fit, which
alternating exact least squares handles well; multiple starts guard against
its local minima.  Enumerating every admissible support pair then takes a
global minimum over a finite union.  The result is still heuristic (the
restricted solves are not certified global) except when the optimum is an
exact fit: f = 0 is a certificate by itself.

Deterministic throughout: support pairs come out in lexicographic order,
ties in f keep the earliest pair, and the random restarts derive from one
seed.  The enumeration refuses to start above a one-million-pair budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from ._threads import parallel_map
from .tensor3 import Instance, Point, mode2_product, mode3_product, objective

__all__ = ["SupportPair", "OracleResult", "enumerate_supports", "solve_restricted", "global_brute"]

ENUMERATION_BUDGET = 1_000_000


@dataclass(frozen=True)
class SupportPair:
    """Candidate supports: s1 for x (nonempty; its minimum is the pivot slot),
    s2 for y.  Both use 0-based concatenated indexing, so s2 lives in
    m..m+n-1."""

    s1: tuple
    s2: tuple


@dataclass(frozen=True)
class OracleResult:
    point: Point
    f: float
    heuristic: bool
    pair: SupportPair

    @property
    def certified(self) -> bool:
        return not self.heuristic


def enumerate_supports(m: int, n: int, s: int, t: int):
    """All support pairs (|s1| in 1..s, |s2| in 0..t), lexicographic order."""
    n1 = sum(math.comb(m, k) for k in range(1, s + 1))
    n2 = sum(math.comb(n, k) for k in range(0, t + 1))
    if n1 * n2 > ENUMERATION_BUDGET:
        raise ValueError(
            f"support enumeration needs {n1 * n2} pairs, over the {ENUMERATION_BUDGET} budget"
        )
    s1_list = sorted(c for k in range(1, s + 1) for c in combinations(range(m), k))
    s2_list = sorted(c for k in range(0, t + 1) for c in combinations(range(n), k))
    return [SupportPair(a, tuple(j + m for j in b)) for a in s1_list for b in s2_list]


def _als(inst: Instance, s1, s2_local, x0: np.ndarray, sweeps: int = 100):
    """Alternating exact least squares on fixed supports, from a given x."""
    a = inst.tensor
    pivot = s1[0]
    free = list(s1[1:])
    x = x0
    y = np.zeros(inst.n)
    f_prev = np.inf
    best = None
    for _ in range(sweeps):
        if s2_local:
            C = mode2_product(a, x)[:, s2_local]
            sol = np.linalg.lstsq(C, inst.b, rcond=None)[0]
            y = np.zeros(inst.n)
            y[s2_local] = sol
        else:
            y = np.zeros(inst.n)
        B = mode3_product(a, y)
        x = np.zeros(inst.m)
        x[pivot] = 1.0
        if free:
            rhs = inst.b - B[:, pivot]
            sol = np.linalg.lstsq(B[:, free], rhs, rcond=None)[0]
            x[free] = sol
        p = Point(x, y)
        f = objective(inst, p)
        best = (p, f)
        # stop on relative progress only: an absolute floor here would strand
        # exact-fit supports around f ~ 1e-14, where the gradient is still far
        # from zero, instead of letting them run down to fp stagnation
        if f_prev - f <= 1e-15 * f:
            break
        f_prev = f
    return best


def _grid_polish(inst: Instance, s1, s2_local, resolution: int = 41):
    """Dense grid scan over the free coordinates (only sensible for <= 3)."""
    pivot = s1[0]
    free = list(s1[1:])
    axes = [np.linspace(-3.0, 3.0, resolution)] * (len(free) + len(s2_local))
    best = None
    for values in product(*axes):
        x = np.zeros(inst.m)
        x[pivot] = 1.0
        x[free] = values[:len(free)]
        y = np.zeros(inst.n)
        y[s2_local] = values[len(free):]
        p = Point(x, y)
        f = objective(inst, p)
        if best is None or f < best[1]:
            best = (p, f)
    return best


def solve_restricted(inst: Instance, pair: SupportPair, n_starts: int = 8,
                     seed: int = 0, grid: bool = False, sweeps: int = 100):
    """Best found (point, f) with supports restricted to the given pair.

    One deterministic start (all-ones x on s1) plus n_starts random ones;
    with grid=True and at most three free coordinates, a 41-point-per-axis
    grid scan over [-3, 3] competes with the alternating solves.
    """
    s1 = tuple(sorted(pair.s1))
    if not s1:
        raise ValueError("s1 must be nonempty (x needs a pivot)")
    if len(s1) > inst.s or any(not 0 <= i < inst.m for i in s1):
        raise ValueError(f"s1 {s1} invalid for m={inst.m}, s={inst.s}")
    s2_local = tuple(sorted(j - inst.m for j in pair.s2))
    if len(s2_local) > inst.t or any(not 0 <= j < inst.n for j in s2_local):
        raise ValueError(f"s2 {pair.s2} invalid for n={inst.n}, t={inst.t}")

    rng = np.random.default_rng(seed)
    x_starts = []
    x0 = np.zeros(inst.m)
    x0[list(s1)] = 1.0
    x_starts.append(x0)
    for _ in range(n_starts):
        xr = np.zeros(inst.m)
        xr[list(s1)] = rng.standard_normal(len(s1))
        xr[s1[0]] = 1.0
        x_starts.append(xr)

    best = None
    for x0 in x_starts:
        cand = _als(inst, s1, list(s2_local), x0, sweeps=sweeps)
        if best is None or cand[1] < best[1]:
            best = cand
    if grid and 0 < len(s1) - 1 + len(s2_local) <= 3:
        cand = _grid_polish(inst, s1, list(s2_local))
        if cand[1] < best[1]:
            best = cand
    return best


def global_brute(inst: Instance, n_starts: int = 8, seed: int = 0,
                 grid: bool = False) -> OracleResult:
    """Minimum over every admissible support pair; certified only when f = 0.

    The certification threshold is 1e-12 * (1 + f(0)): an exact fit computed
    in floats.  Anything above that is flagged heuristic, since alternating
    least squares on a fixed support may have missed that support's optimum.
    """
    pairs = enumerate_supports(inst.m, inst.n, inst.s, inst.t)
    results = parallel_map(lambda pr: solve_restricted(inst, pr, n_starts, seed, grid), pairs)
    best_i = 0
    for i in range(1, len(pairs)):
        if results[i][1] < results[best_i][1]:
            best_i = i
    point, f = results[best_i]
    # slowly converging supports (ill-conditioned restricted systems) may
    # still be far from their optimum after the default sweep budget, so
    # the winner alone gets a much longer run
    polished = solve_restricted(inst, pairs[best_i], n_starts, seed, grid, sweeps=4000)
    if polished[1] < f:
        point, f = polished
    f_zero = 0.5 * float(inst.b @ inst.b)
    certified = f <= 1e-12 * (1.0 + f_zero)
    return OracleResult(point, f, heuristic=not certified, pair=pairs[best_i])
