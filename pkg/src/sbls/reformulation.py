"""Complementarity lifting of the sparsity constraints.

The cardinality caps can be traded for continuous variables: pair the point
z with an auxiliary vector w of the same length and require

    z_i * w_i = 0 for every i,    sum(w_x) >= m - s,    sum(w_y) >= n - t,

with w either binary (integer mode) or boxed in [0, 1] (relaxed mode).  Any
feasible z lifts to such a pair by putting w = 1 exactly off the support, and
conversely the counting constraints force enough zeros in z.  The pivot
constraint stays as an explicit smooth set E = {first nonzero of x equals 1};
its normal directions at a point with pivot index g are the vectors supported
on {0..g}, which is what `normal_E_membership` tests (the complement view:
nothing past the pivot).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .feasible import ZERO_TOL, InfeasiblePointError, support_profile
from .tensor3 import Point, _as_vector

__all__ = ["AuxPair", "lift", "check_pair", "normal_E_membership"]

INTEGER = "integer"
RELAXED = "relaxed"


@dataclass(frozen=True)
class AuxPair:
    z: Point
    w: np.ndarray

    def __post_init__(self):
        w = _as_vector(self.w, "w")
        if w.shape[0] != self.z.m + self.z.n:
            raise ValueError(f"w has length {w.shape[0]}, expected {self.z.m + self.z.n}")
        object.__setattr__(self, "w", w)


def _require_pivot(p: Point, zero_tol: float):
    prof = support_profile(p, zero_tol)
    if prof.gamma_x is None:
        raise InfeasiblePointError("x block is zero (the pivot constraint cannot hold)")
    if abs(p.x[prof.gamma_x] - 1.0) > zero_tol:
        raise InfeasiblePointError(
            f"first nonzero of x is {p.x[prof.gamma_x]!r}, expected 1"
        )
    return prof


def lift(p: Point, zero_tol: float = ZERO_TOL) -> AuxPair:
    """Canonical auxiliary vector for a point: w = 1 exactly off the support."""
    _require_pivot(p, zero_tol)
    w = (np.abs(p.z) <= zero_tol).astype(float)
    return AuxPair(p, w)


def check_pair(pair: AuxPair, s: int, t: int, mode: str = INTEGER,
               zero_tol: float = ZERO_TOL) -> bool:
    """Does (z, w) satisfy the lifted constraints for budgets (s, t)?

    Complementarity is checked as sum|z_i w_i| <= zero_tol * (1 + |z|_inf);
    the counting constraints get a fixed 1e-9 slack since they compare float
    sums against integers.
    """
    if mode not in (INTEGER, RELAXED):
        raise ValueError(f"mode must be {INTEGER!r} or {RELAXED!r}, got {mode!r}")
    z = pair.z
    w = pair.w
    try:
        _require_pivot(z, zero_tol)
    except InfeasiblePointError:
        return False
    zvec = z.z
    scale = 1.0 + float(np.max(np.abs(zvec)))
    if float(np.sum(np.abs(zvec * w))) > zero_tol * scale:
        return False
    if float(np.sum(w[:z.m])) < z.m - s - 1e-9:
        return False
    if float(np.sum(w[z.m:])) < z.n - t - 1e-9:
        return False
    if mode == INTEGER:
        return bool(np.all((np.abs(w) <= zero_tol) | (np.abs(w - 1.0) <= zero_tol)))
    return bool(np.all((w >= -zero_tol) & (w <= 1.0 + zero_tol)))


def normal_E_membership(p: Point, d, tol: float = ZERO_TOL) -> bool:
    """Is d normal to the pivot constraint set at p (zero past the pivot)?"""
    d = _as_vector(d, "d")
    if d.shape[0] != p.m + p.n:
        raise ValueError(f"d has length {d.shape[0]}, expected {p.m + p.n}")
    prof = support_profile(p, ZERO_TOL)
    if prof.gamma_x is None:
        raise InfeasiblePointError("x block is zero (no pivot index)")
    return bool(np.all(np.abs(d[prof.gamma_x + 1:]) <= tol))
