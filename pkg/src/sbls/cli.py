"""Command-line front end.  Subcommands:

  check    stationarity report for a point of an instance file
  project  like (or classic) projection of an arbitrary point
  solve    run the descent methods from random starts
  oracle   brute-force support enumeration
  gen      write a generated instance file with a planted solution
  repro    re-run a bundled worked example and verify it

Exit codes: 0 success, 2 usage or file-format errors, 3 infeasible point,
4 repro mismatch.  All vector/index output is 1-based to match the file
format; vectors are plain JSON lists.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .feasible import InfeasiblePointError
from .io_cli import InstanceFile, gen_blind_deconv, gen_matrix_sensing, gen_planted, parse, plant_point, serialize
from .likeproj import classic_project, like_project
from .oracle import global_brute
from .repro import REPRO_NAMES, run_repro
from .solvers import SolveConfig, multistart
from .stationarity import classify, default_tolerance
from .tensor3 import Instance, Point, bilinear_map, gradient, objective

__all__ = ["main"]


def _load(path: str) -> InstanceFile:
    return parse(Path(path).read_text())


def _point_from_csv(text: str, m: int, n: int) -> Point:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise ValueError(f"could not parse point {text!r} as comma-separated numbers")
    if len(values) != m + n:
        raise ValueError(f"point has {len(values)} entries, expected m+n = {m + n}")
    return Point.from_z(np.array(values), m)


def _resolve_point(args, f: InstanceFile) -> Point:
    if args.point is not None:
        return _point_from_csv(args.point, f.instance.m, f.instance.n)
    if f.known_point is not None:
        return f.known_point
    raise ValueError("no --point given and the instance file has no known_point")


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, default=float))


def _one_based(indices) -> list:
    return [int(i) + 1 for i in indices]


def _report_dict(report) -> dict:
    d = {
        "flags": {k: getattr(report, k) for k in ("nb", "tb", "nc", "tc", "cw", "llike", "m")},
        "L": report.L,
        "restricted_grad_norm": {
            "bouligand": report.restricted_grad_norm_b,
            "clarke": report.restricted_grad_norm_c,
        },
        "minimal_L": report.minimal_L,
        "nb_violations": _one_based(report.nb_violations),
        "cw_witness": None,
        "m_witness": None,
    }
    if report.cw_witness is not None:
        w = report.cw_witness
        d["cw_witness"] = {
            "removed": None if w.removed is None else w.removed + 1,
            "inserted": w.inserted + 1,
            "u_opt": w.u_opt,
            "f_min": w.f_min,
            "point": w.point.z.tolist(),
        }
    if report.m_witness is not None:
        w, mu = report.m_witness
        d["m_witness"] = {"w": w.tolist(), "mu": mu.tolist()}
    return d


def _cmd_check(args) -> int:
    f = _load(args.file)
    p = _resolve_point(args, f)
    tol = None
    if args.grad_tol is not None or args.obj_tol is not None or args.zero_tol is not None:
        tol = default_tolerance(f.instance, p)
        if args.grad_tol is not None:
            tol = replace(tol, grad_tol=args.grad_tol)
        if args.obj_tol is not None:
            tol = replace(tol, obj_tol=args.obj_tol)
        if args.zero_tol is not None:
            tol = replace(tol, zero_tol=args.zero_tol)
    report = classify(f.instance, p, args.L, tol)
    out = {
        "objective": objective(f.instance, p),
        "gradient": gradient(f.instance, p).tolist(),
    }
    out.update(_report_dict(report))
    _emit(out)
    return 0


_DIMS_RE = re.compile(r"(\d+),(\d+),(\d+),(\d+)")


def _cmd_project(args) -> int:
    match = _DIMS_RE.fullmatch(args.target)
    if match:
        m, n, s, t = (int(g) for g in match.groups())
    else:
        f = _load(args.target)
        m, n, s, t = f.instance.m, f.instance.n, f.instance.s, f.instance.t
    p = _point_from_csv(args.point, m, n)
    proj = classic_project if args.classic else like_project
    pr = proj(p, s, t)
    _emit({
        "kind": "classic" if args.classic else "like",
        "count": pr.count,
        "distance_sq": pr.distance_sq,
        "truncated": pr.count > len(pr.minimizers),
        "representative": pr.representative.z.tolist(),
        "minimizers": [u.z.tolist() for u in pr.minimizers],
    })
    return 0


def _cmd_solve(args) -> int:
    f = _load(args.file)
    cfg = SolveConfig(L0=args.L0, max_iter=args.max_iter, seed=args.seed,
                      n_starts=args.starts)
    methods = {"liht": ("liht",), "alt": ("alternating",),
               "both": ("liht", "alternating")}[args.method]
    tr = multistart(f.instance, cfg, methods=methods)
    _emit({
        "method": tr.method,
        "status": tr.status,
        "start_index": tr.start_index,
        "final_f": tr.final_f,
        "final_point": tr.final.z.tolist(),
        "iterations": len(tr.iterates) - 1,
        "report": _report_dict(tr.final_report),
        "trace": [
            {"iteration": r.iteration, "f": r.f, "L": r.L, "step_norm": r.step_norm}
            for r in tr.iterates
        ],
    })
    return 0


def _cmd_oracle(args) -> int:
    f = _load(args.file)
    res = global_brute(f.instance, n_starts=args.starts, seed=args.seed, grid=args.grid)
    _emit({
        "f": res.f,
        "point": res.point.z.tolist(),
        "heuristic": res.heuristic,
        "certified": res.certified,
        "support": {"s1": _one_based(res.pair.s1), "s2": _one_based(res.pair.s2)},
    })
    return 0


def _cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.kind == "planted":
        inst, p = gen_planted(args.l, args.m, args.n, args.s, args.t, args.seed)
    else:
        if args.kind == "blind-deconv":
            H = rng.standard_normal((args.l, args.m))
            G = rng.standard_normal((args.l, args.n))
            tensor = gen_blind_deconv(H, G)
        else:
            tensor = gen_matrix_sensing(rng.standard_normal((args.l, args.m, args.n)))
        p = plant_point(args.m, args.n, args.s, args.t, rng)
        b = bilinear_map(tensor, p.x, p.y)
        inst = Instance(tensor, b, args.s, args.t)
    text = serialize(inst, known_point=p, label="planted")
    Path(args.out).write_text(text)
    _emit({
        "path": args.out,
        "kind": args.kind,
        "dims": {"l": inst.l, "m": inst.m, "n": inst.n},
        "sparsity": {"s": inst.s, "t": inst.t},
        "planted_objective": objective(inst, p),
    })
    return 0


def _cmd_repro(args) -> int:
    names = REPRO_NAMES if args.name == "all" else (args.name,)
    all_ok = True
    for name in names:
        outcome = run_repro(name)
        print(f"== {name} ==")
        for line in outcome.lines:
            print(line)
        all_ok = all_ok and outcome.ok
    print("repro: OK" if all_ok else "repro: MISMATCH")
    return 0 if all_ok else 4


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sbls",
                                description="Sparse bilinear least-squares toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="stationarity report for a point")
    c.add_argument("file", help="instance file")
    c.add_argument("--point", help="comma-separated point (default: the file's known_point)")
    c.add_argument("--L", type=float, default=1.0, help="step constant for the fixed-point flag")
    c.add_argument("--grad-tol", type=float, default=None)
    c.add_argument("--obj-tol", type=float, default=None)
    c.add_argument("--zero-tol", type=float, default=None)
    c.set_defaults(func=_cmd_check)

    c = sub.add_parser("project", help="project a point onto the feasible set")
    c.add_argument("target", help="instance file, or inline dims m,n,s,t")
    c.add_argument("--point", required=True, help="comma-separated point to project")
    c.add_argument("--classic", action="store_true", help="plain Euclidean projection")
    c.set_defaults(func=_cmd_project)

    c = sub.add_parser("solve", help="run the descent methods")
    c.add_argument("file", help="instance file")
    c.add_argument("--method", choices=("liht", "alt", "both"), default="both")
    c.add_argument("--starts", type=int, default=8)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--L0", type=float, default=1.0)
    c.add_argument("--max-iter", type=int, default=500)
    c.set_defaults(func=_cmd_solve)

    c = sub.add_parser("oracle", help="brute-force over all supports")
    c.add_argument("file", help="instance file")
    c.add_argument("--starts", type=int, default=8)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--grid", action="store_true",
                   help="add a grid scan on supports with <= 3 free coordinates")
    c.set_defaults(func=_cmd_oracle)

    c = sub.add_parser("gen", help="generate an instance file with a planted solution")
    c.add_argument("kind", choices=("planted", "blind-deconv", "matrix-sensing"))
    c.add_argument("--out", required=True, help="output path")
    c.add_argument("--l", type=int, default=6)
    c.add_argument("--m", type=int, default=5)
    c.add_argument("--n", type=int, default=5)
    c.add_argument("--s", type=int, default=2)
    c.add_argument("--t", type=int, default=2)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=_cmd_gen)

    c = sub.add_parser("repro", help="re-run a bundled worked example")
    c.add_argument("name", choices=REPRO_NAMES + ("all",))
    c.set_defaults(func=_cmd_repro)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except InfeasiblePointError as e:
        print(f"error: infeasible point: {e}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
