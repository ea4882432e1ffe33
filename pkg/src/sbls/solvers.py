"""Descent methods: like-projected gradient steps and alternating hard thresholding.

Both solvers are monotone by construction.  Neither assumes a known Lipschitz
constant: the step parameter L starts at L0 and doubles (backtrack_factor)
whenever the trial point fails to decrease f, up to max_L; running out of
doublings ends the solve with status "stalled" rather than an exception.
There is no convergence theory attached to this schedule, it is the standard
practical recipe.

Termination: a step whose objective decrease is at most f_tol, or whose
length is at most step_tol, is discarded and the previous iterate returned
(status "converged").  Starting at a fixed point therefore yields a trace of
length one.  status "max_iter" means the iteration budget ran out.

`multistart` draws all starting supports/values up front from one seeded
generator, then runs both methods on every start (optionally threaded, see
SBLS_THREADS); the winner minimizes (final f, start index, method index),
so results never depend on thread scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ._threads import parallel_map
from .feasible import ZERO_TOL, require_feasible, support_profile
from .likeproj import like_project
from .stationarity import StationarityReport, classify
from .tensor3 import Instance, Point, gradient, objective

__all__ = [
    "SolveConfig",
    "IterateRecord",
    "SolveTrace",
    "liht_step",
    "liht_solve",
    "alternating_ht",
    "multistart",
    "random_feasible_point",
]


@dataclass(frozen=True)
class SolveConfig:
    L0: float = 1.0
    max_iter: int = 500
    f_tol: float = 1e-13
    step_tol: float = 1e-12
    backtrack_factor: float = 2.0
    max_L: float = 1e12
    seed: int = 0
    n_starts: int = 8


@dataclass(frozen=True)
class IterateRecord:
    iteration: int
    f: float
    L: float
    step_norm: float


@dataclass(frozen=True)
class SolveTrace:
    iterates: tuple
    final: Point
    final_f: float
    status: str
    final_report: StationarityReport
    method: str
    start_index: int = 0


def liht_step(inst: Instance, p: Point, L: float, zero_tol: float = ZERO_TOL) -> Point:
    """One like-projected gradient step: deterministic representative of
    the projection of p - grad/L."""
    if L <= 0:
        raise ValueError(f"L must be positive, got {L}")
    g = gradient(inst, p)
    shifted = Point.from_z(p.z - g / L, p.m)
    return like_project(shifted, inst.s, inst.t, zero_tol).representative


def liht_solve(inst: Instance, z0: Point, cfg: SolveConfig = SolveConfig()) -> SolveTrace:
    require_feasible(inst, z0)
    L = cfg.L0
    cur = z0
    f_cur = objective(inst, cur)
    iterates = [IterateRecord(0, f_cur, L, 0.0)]
    status = "max_iter"
    for k in range(1, cfg.max_iter + 1):
        cand = None
        while True:
            trial = liht_step(inst, cur, L)
            f_new = objective(inst, trial)
            if f_new <= f_cur:
                cand = trial
                break
            L *= cfg.backtrack_factor
            if L > cfg.max_L:
                break
        if cand is None:
            status = "stalled"
            break
        step = float(np.linalg.norm(cand.z - cur.z))
        if f_cur - f_new <= cfg.f_tol or step <= cfg.step_tol:
            status = "converged"
            break
        cur, f_cur = cand, f_new
        iterates.append(IterateRecord(k, f_cur, L, step))
    report = classify(inst, cur, min(L, cfg.max_L))
    return SolveTrace(tuple(iterates), cur, f_cur, status, report, "liht")


def _threshold_keep(v: np.ndarray, k: int, forced=None):
    """Indices of the k largest magnitudes of v (ties to the smaller index),
    plus the forced index if given (which does not count against k)."""
    order = sorted((i for i in range(v.shape[0]) if i != forced),
                   key=lambda i: (-abs(v[i]), i))
    keep = set(order[:k])
    if forced is not None:
        keep.add(forced)
    return keep


def alternating_ht(inst: Instance, z0: Point, cfg: SolveConfig = SolveConfig()) -> SolveTrace:
    """Alternating gradient steps with hard thresholding per block.

    The x update keeps the current pivot slot plus the s-1 largest entries
    of the stepped vector, then renormalizes so the new first nonzero is 1
    (transferring the scale onto y, which leaves f unchanged); the y update
    keeps the t largest.  One L is shared by both blocks and backtracks on
    any failed decrease.  An x step whose thresholded vector is entirely
    zero is treated like a failed decrease (larger L shrinks the step until
    the pivot slot survives).
    """
    require_feasible(inst, z0)
    L = cfg.L0
    cur = z0
    f_cur = objective(inst, cur)
    iterates = [IterateRecord(0, f_cur, L, 0.0)]
    status = "max_iter"

    def x_step(p, f_ref, L):
        while True:
            g = gradient(inst, p)[:inst.m]
            v = p.x - g / L
            pivot = support_profile(p).gamma_x
            keep = _threshold_keep(v, inst.s - 1, forced=pivot)
            x_new = np.where([i in keep for i in range(inst.m)], v, 0.0)
            live = np.nonzero(np.abs(x_new) > ZERO_TOL)[0]
            if live.size:
                alpha = x_new[live[0]]
                trial = Point(x_new / alpha, p.y * alpha)
                f_try = objective(inst, trial)
                if f_try <= f_ref:
                    return trial, f_try, L
            L *= cfg.backtrack_factor
            if L > cfg.max_L:
                return None, f_ref, L

    def y_step(p, f_ref, L):
        while True:
            g = gradient(inst, p)[inst.m:]
            v = p.y - g / L
            keep = _threshold_keep(v, inst.t)
            y_new = np.where([i in keep for i in range(inst.n)], v, 0.0)
            trial = Point(p.x.copy(), y_new)
            f_try = objective(inst, trial)
            if f_try <= f_ref:
                return trial, f_try, L
            L *= cfg.backtrack_factor
            if L > cfg.max_L:
                return None, f_ref, L

    for k in range(1, cfg.max_iter + 1):
        z_before = cur.z
        p1, f1, L = x_step(cur, f_cur, L)
        if p1 is None:
            status = "stalled"
            break
        p2, f2, L = y_step(p1, f1, L)
        if p2 is None:
            status = "stalled"
            break
        step = float(np.linalg.norm(p2.z - z_before))
        if f_cur - f2 <= cfg.f_tol or step <= cfg.step_tol:
            status = "converged"
            break
        cur, f_cur = p2, f2
        iterates.append(IterateRecord(k, f_cur, L, step))
    report = classify(inst, cur, min(L, cfg.max_L))
    return SolveTrace(tuple(iterates), cur, f_cur, status, report, "alternating")


def random_feasible_point(inst: Instance, rng: np.random.Generator) -> Point:
    """Uniform random supports of full size, standard normal values, pivot 1."""
    supp1 = np.sort(rng.choice(inst.m, size=inst.s, replace=False))
    x = np.zeros(inst.m)
    x[supp1] = rng.standard_normal(inst.s)
    x[supp1[0]] = 1.0
    supp2 = np.sort(rng.choice(inst.n, size=inst.t, replace=False))
    y = np.zeros(inst.n)
    y[supp2] = rng.standard_normal(inst.t)
    return Point(x, y)


def multistart(inst: Instance, cfg: SolveConfig = SolveConfig(),
               methods: tuple = ("liht", "alternating")) -> SolveTrace:
    """Best of the requested methods over seeded random starts."""
    solvers = {"liht": liht_solve, "alternating": alternating_ht}
    for name in methods:
        if name not in solvers:
            raise ValueError(f"unknown method {name!r}")
    rng = np.random.default_rng(cfg.seed)
    n_starts = max(1, cfg.n_starts)
    starts = [random_feasible_point(inst, rng) for _ in range(n_starts)]
    single = replace(cfg, n_starts=1)
    jobs = [(si, mi, z0) for si, z0 in enumerate(starts) for mi in range(len(methods))]

    def run(job):
        si, mi, z0 = job
        tr = solvers[methods[mi]](inst, z0, single)
        return replace(tr, start_index=si)

    traces = parallel_map(run, jobs)
    best = min(range(len(jobs)), key=lambda i: (traces[i].final_f, jobs[i][0], jobs[i][1]))
    winner = traces[best]
    # a winner cut off by the iteration cap is still descending; give that one
    # run (and only it) a fresh budget from where it stopped, a few times over
    for _ in range(7):
        if winner.status != "max_iter":
            break
        more = solvers[winner.method](inst, winner.final, single)
        offset = winner.iterates[-1].iteration
        tail = tuple(replace(r, iteration=r.iteration + offset) for r in more.iterates[1:])
        winner = replace(more, iterates=winner.iterates + tail,
                         start_index=winner.start_index)
        if not tail:
            break
    return winner
