"""Bundled worked examples, re-runnable as named checks (`sbls repro <name>`).

Each entry recomputes published values from scratch and compares against the
expectations frozen here.  paperA and paperB load their instance files from
the package data; the likeproj entries are pure vector examples.

paperB is special: the reference gradient published with that example,
(2, 0, 0, 0, 0, 0, 0, 0), disagrees with recomputation.  The value asserted
here, (2, -2, 0, 0, 0, 0, 0, 0), is validated independently against central
finite differences at runtime, and the check reports the re-evaluated
stationarity conclusions alongside a note about the discrepancy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .io_cli import parse
from .likeproj import classic_project, like_project
from .stationarity import check_CW, check_Llike, check_NB, classify, minimal_L
from .tensor3 import Point, fd_gradient, gradient, objective

__all__ = ["REPRO_NAMES", "ReproOutcome", "run_repro", "load_bundled"]

REPRO_NAMES = ("paperA", "paperB", "likeproj1", "likeproj2", "likeproj3")


@dataclass
class ReproOutcome:
    name: str
    ok: bool = True
    lines: list = field(default_factory=list)
    payload: dict = field(default_factory=dict)

    def check(self, label: str, passed: bool, detail: str = ""):
        tag = "PASS" if passed else "FAIL"
        suffix = f" ({detail})" if detail else ""
        self.lines.append(f"{tag}  {label}{suffix}")
        if not passed:
            self.ok = False


def load_bundled(name: str):
    """Parse one of the instance files shipped with the package."""
    text = resources.files("sbls").joinpath(f"data/{name}.json").read_text()
    return parse(text)


def _same_vector(a, b, atol):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a.shape == b.shape and float(np.max(np.abs(a - b))) <= atol


def _same_set(points, expected, atol=1e-12):
    """Set equality of minimizer lists up to atol, order-free."""
    if len(points) != len(expected):
        return False
    got = sorted(tuple(p.z.tolist()) for p in points)
    want = sorted(tuple(np.asarray(e, dtype=float).tolist()) for e in expected)
    return all(
        max(abs(x - y) for x, y in zip(g, w)) <= atol for g, w in zip(got, want)
    )


def _repro_paper_a() -> ReproOutcome:
    out = ReproOutcome("paperA")
    f = load_bundled("paperA")
    inst, z = f.instance, f.known_point

    fval = objective(inst, z)
    out.payload["objective"] = fval
    out.check("objective at reference point equals 5/2", abs(fval - 2.5) <= 1e-12,
              f"f = {fval!r}")

    g = gradient(inst, z)
    g_expected = [0.0, 0.0, 2.0, 0.0, 0.0, -5.0]
    out.payload["gradient"] = g.tolist()
    out.check("gradient equals (0, 0, 2, 0, 0, -5)", _same_vector(g, g_expected, 1e-10),
              f"grad = {g.tolist()}")

    nb, bad = check_NB(inst, z)
    out.check("point is basic-stationary", nb, f"violations {bad}")

    min_l = minimal_L(inst, z)
    out.payload["minimal_L"] = min_l
    out.check("smallest workable step constant is 5", min_l is not None and abs(min_l - 5.0) <= 1e-12,
              f"minimal_L = {min_l}")

    cw, wit = check_CW(inst, z)
    out.check("point is not a coordinate-wise minimum", not cw)
    target = [1.0, 1.0, 0.0, 1.0, 0.0, 1.0]
    if wit is None:
        out.check("witness swap reaches f = 0 at (1,1,0,1,0,1)", False, "no witness")
    else:
        out.payload["witness"] = {
            "removed": wit.removed, "inserted": wit.inserted,
            "u_opt": wit.u_opt, "f_min": wit.f_min, "point": wit.point.z.tolist(),
        }
        hit = abs(wit.f_min) <= 1e-12 and _same_vector(wit.point.z, target, 1e-12)
        out.check("witness swap reaches f = 0 at (1,1,0,1,0,1)", hit,
                  f"swap ({wit.removed},{wit.inserted}) -> f = {wit.f_min!r}")

    report = classify(inst, z, L=5.0)
    out.payload["flags"] = {k: getattr(report, k) for k in ("nb", "tb", "nc", "tc", "cw", "llike", "m")}
    out.check("fixed-point test holds at L = 5", report.llike)
    return out


def _repro_paper_b() -> ReproOutcome:
    out = ReproOutcome("paperB")
    f = load_bundled("paperB")
    inst, z = f.instance, f.known_point

    g = gradient(inst, z)
    g_fd = fd_gradient(inst, z)
    g_expected = [2.0, -2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    out.payload["gradient"] = g.tolist()
    out.payload["gradient_fd"] = g_fd.tolist()
    rel = float(np.max(np.abs(g - g_fd))) / (1.0 + float(np.max(np.abs(g))))
    out.check("analytic gradient matches central finite differences", rel <= 1e-6,
              f"rel err {rel:.2e}")
    out.check("gradient equals (2, -2, 0, 0, 0, 0, 0, 0)", _same_vector(g, g_expected, 1e-10),
              f"grad = {g.tolist()}")
    out.lines.append(
        "NOTE  the reference gradient published with this example, (2, 0, 0, 0, 0, 0, 0, 0), "
        "disagrees with the FD-validated recomputation above; conclusions below use the "
        "recomputed value"
    )

    fval = objective(inst, z)
    out.payload["objective"] = fval
    out.check("objective at reference point equals 5/2", abs(fval - 2.5) <= 1e-12)

    nb, bad = check_NB(inst, z)
    out.payload["nb"] = nb
    out.payload["nb_violations"] = list(bad)
    out.check("re-evaluated: point is NOT basic-stationary (gradient entry 2 is -2)",
              nb is False and bad == (1,), f"nb = {nb}, violations {bad}")

    for L in (0.1, 1.0, 10.0, 100.0):
        ok = check_Llike(inst, z, L)
        out.check(f"fixed-point test fails at L = {L}", ok is False)
    return out


def _repro_likeproj_1() -> ReproOutcome:
    out = ReproOutcome("likeproj1")
    z = Point.from_z(np.array([0.0, 0.0, 3.0, 3.0, -4.0, 2.0]), 3)
    pr = like_project(z, 2, 2)
    out.payload["like"] = [p.z.tolist() for p in pr.minimizers]
    out.payload["like_distance_sq"] = pr.distance_sq
    out.check("scaled projection is the single point (0,0,1,9,-12,0)",
              _same_set(pr.minimizers, [[0, 0, 1, 9, -12, 0]]) and pr.count == 1)
    out.check("scaled projection distance^2 = 4", abs(pr.distance_sq - 4.0) <= 1e-12)

    cp = classic_project(z, 2, 2)
    out.payload["classic"] = [p.z.tolist() for p in cp.minimizers]
    out.payload["classic_distance_sq"] = cp.distance_sq
    out.check("plain projection is the pair (1,0,3,3,-4,0), (0,1,3,3,-4,0)",
              _same_set(cp.minimizers, [[1, 0, 3, 3, -4, 0], [0, 1, 3, 3, -4, 0]]) and cp.count == 2)
    out.check("plain projection distance^2 = 5", abs(cp.distance_sq - 5.0) <= 1e-12)
    return out


def _repro_likeproj_2() -> ReproOutcome:
    out = ReproOutcome("likeproj2")
    z = Point.from_z(np.array([0.0, 0.0, 1.0, 3.0, -4.0, 2.0]), 3)
    pr = like_project(z, 2, 2)
    cp = classic_project(z, 2, 2)
    out.payload["like"] = [p.z.tolist() for p in pr.minimizers]
    out.payload["classic"] = [p.z.tolist() for p in cp.minimizers]
    expected = [[0, 0, 1, 3, -4, 0]]
    out.check("scaled projection is the single point (0,0,1,3,-4,0)",
              _same_set(pr.minimizers, expected) and pr.count == 1)
    out.check("plain projection agrees with the scaled one here",
              _same_set(cp.minimizers, expected) and cp.count == 1)
    out.check("both distances equal 4",
              abs(pr.distance_sq - 4.0) <= 1e-12 and abs(cp.distance_sq - 4.0) <= 1e-12)
    return out


def _repro_likeproj_3() -> ReproOutcome:
    out = ReproOutcome("likeproj3")
    z = Point.from_z(np.array([0.0, 0.0, 0.0, 3.0, -4.0, 2.0]), 3)
    pr = like_project(z, 2, 2)
    out.payload["like"] = [p.z.tolist() for p in pr.minimizers]
    expected = [
        [1, 0, 0, 3, -4, 0],
        [0, 1, 0, 3, -4, 0],
        [0, 0, 1, 3, -4, 0],
    ]
    out.check("zero x block yields the three pivot placements",
              _same_set(pr.minimizers, expected) and pr.count == 3)
    out.check("distance^2 = 5 (unit pivot cost plus the y tail)",
              abs(pr.distance_sq - 5.0) <= 1e-12)
    cp = classic_project(z, 2, 2)
    out.check("plain projection agrees when x = 0",
              _same_set(cp.minimizers, expected) and abs(cp.distance_sq - 5.0) <= 1e-12)
    return out


_RUNNERS = {
    "paperA": _repro_paper_a,
    "paperB": _repro_paper_b,
    "likeproj1": _repro_likeproj_1,
    "likeproj2": _repro_likeproj_2,
    "likeproj3": _repro_likeproj_3,
}


def run_repro(name: str) -> ReproOutcome:
    if name not in _RUNNERS:
        raise ValueError(f"unknown repro name {name!r}; choose from {', '.join(REPRO_NAMES)}")
    return _RUNNERS[name]()
