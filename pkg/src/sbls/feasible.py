"""Feasible set geometry: supports, the pivot convention, tangent and normal cones.

A point (x, y) is feasible when x has at most s nonzeros, y at most t, and the
first nonzero entry of x equals 1 (the "pivot", written gamma_x here).  The
pivot removes the bilinear scaling ambiguity (x, y) ~ (x/a, a*y).

Tangent/normal cone membership comes in two senses, "bouligand" and "clarke".
Both are unions/intersections of coordinate subspaces, so membership reduces
to support checks on the direction vector.  The Bouligand normal cone depends
on whether each sparsity budget is saturated; `nb_zero_set` returns the index
set on which a normal direction (equivalently, a vanishing gradient) must be
zero, one of four cases keyed on (|x|_0 == s, |y|_0 == t).

All indices are 0-based positions into the concatenated vector z = (x, y).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor3 import Instance, Point, _as_vector

__all__ = [
    "ZERO_TOL",
    "BOULIGAND",
    "CLARKE",
    "InfeasiblePointError",
    "SupportProfile",
    "support_profile",
    "is_feasible",
    "require_feasible",
    "nb_zero_set",
    "tangent_membership",
    "normal_membership",
]

ZERO_TOL = 1e-10

BOULIGAND = "bouligand"
CLARKE = "clarke"


class InfeasiblePointError(ValueError):
    """Raised when an operation requires a feasible point and got none."""


@dataclass(frozen=True)
class SupportProfile:
    """Support data of a point. gamma2 uses concatenated indexing (>= m)."""

    gamma1: tuple
    gamma2: tuple
    gamma_x: int | None
    card1: int
    card2: int

    @property
    def gamma(self) -> tuple:
        return self.gamma1 + self.gamma2


def support_profile(p: Point, zero_tol: float = ZERO_TOL) -> SupportProfile:
    g1 = tuple(int(i) for i in np.nonzero(np.abs(p.x) > zero_tol)[0])
    g2 = tuple(int(i) + p.m for i in np.nonzero(np.abs(p.y) > zero_tol)[0])
    gamma_x = g1[0] if g1 else None
    return SupportProfile(g1, g2, gamma_x, len(g1), len(g2))


def _infeasible_reason(p: Point, s: int, t: int, zero_tol: float) -> str | None:
    prof = support_profile(p, zero_tol)
    if prof.gamma_x is None:
        return "x block is zero (the pivot constraint cannot hold)"
    if prof.card1 > s:
        return f"x has {prof.card1} nonzeros, budget s={s}"
    if prof.card2 > t:
        return f"y has {prof.card2} nonzeros, budget t={t}"
    pivot = p.x[prof.gamma_x]
    if abs(pivot - 1.0) > zero_tol:
        return f"first nonzero of x is {pivot!r} at index {prof.gamma_x}, expected 1"
    return None


def is_feasible(inst: Instance, p: Point, zero_tol: float = ZERO_TOL) -> bool:
    inst.check_point(p)
    return _infeasible_reason(p, inst.s, inst.t, zero_tol) is None


def require_feasible(inst: Instance, p: Point, zero_tol: float = ZERO_TOL) -> SupportProfile:
    """Support profile of p, raising InfeasiblePointError when p is not feasible."""
    inst.check_point(p)
    reason = _infeasible_reason(p, inst.s, inst.t, zero_tol)
    if reason is not None:
        raise InfeasiblePointError(reason)
    return support_profile(p, zero_tol)


def nb_zero_set(prof: SupportProfile, m: int, n: int, s: int, t: int) -> frozenset:
    """Indices where the gradient must vanish for Bouligand-normal stationarity.

    Four cases on (|x|_0 == s, |y|_0 == t); g is the pivot index:
      both saturated   -> support minus {g}
      only x saturated -> (x-support minus {g}) plus the whole y block
      only y saturated -> all x slots past g, plus the y support
      neither          -> every index past g
    """
    g = prof.gamma_x
    if g is None:
        raise InfeasiblePointError("x block is zero (the pivot constraint cannot hold)")
    x_full = prof.card1 == s
    y_full = prof.card2 == t
    if x_full and y_full:
        idx = set(prof.gamma) - {g}
    elif x_full:
        idx = (set(prof.gamma1) - {g}) | set(range(m, m + n))
    elif y_full:
        idx = set(range(g + 1, m)) | set(prof.gamma2)
    else:
        idx = set(range(g + 1, m + n))
    return frozenset(idx)


def _check_sense(sense: str) -> str:
    if sense not in (BOULIGAND, CLARKE):
        raise ValueError(f"sense must be {BOULIGAND!r} or {CLARKE!r}, got {sense!r}")
    return sense


def tangent_membership(p: Point, d, sense: str, s: int, t: int,
                       zero_tol: float = ZERO_TOL) -> bool:
    """Is d a tangent direction at the feasible point p, in the given sense?

    Bouligand: the x part of d may touch at most s-1 coordinates, none at or
    before the pivot, and supports of d must fit the budgets jointly with the
    point's supports.  Clarke: d lives on the support minus the pivot.
    """
    _check_sense(sense)
    d = _as_vector(d, "d")
    if d.shape[0] != p.m + p.n:
        raise ValueError(f"d has length {d.shape[0]}, expected {p.m + p.n}")
    reason = _infeasible_reason(p, s, t, zero_tol)
    if reason is not None:
        raise InfeasiblePointError(reason)
    prof = support_profile(p, zero_tol)
    supp = np.nonzero(np.abs(d) > zero_tol)[0]
    dx = {int(i) for i in supp if i < p.m}
    dy = {int(i) for i in supp if i >= p.m}
    if sense == CLARKE:
        return (dx | dy) <= (set(prof.gamma) - {prof.gamma_x})
    if len(dx) > s - 1 or len(dy) > t:
        return False
    if any(i <= prof.gamma_x for i in dx):
        return False
    if len(dx | set(prof.gamma1)) > s:
        return False
    if len(dy | set(prof.gamma2)) > t:
        return False
    return True


def normal_membership(p: Point, d, sense: str, s: int, t: int,
                      zero_tol: float = ZERO_TOL) -> bool:
    """Is d in the normal cone at the feasible point p, in the given sense?

    Both cones are subspaces here: d is normal iff it vanishes on the
    relevant index set (`nb_zero_set` for bouligand, support minus pivot
    for clarke).
    """
    _check_sense(sense)
    d = _as_vector(d, "d")
    if d.shape[0] != p.m + p.n:
        raise ValueError(f"d has length {d.shape[0]}, expected {p.m + p.n}")
    reason = _infeasible_reason(p, s, t, zero_tol)
    if reason is not None:
        raise InfeasiblePointError(reason)
    prof = support_profile(p, zero_tol)
    if sense == BOULIGAND:
        idx = nb_zero_set(prof, p.m, p.n, s, t)
    else:
        idx = set(prof.gamma) - {prof.gamma_x}
    return all(abs(d[i]) <= zero_tol for i in idx)
