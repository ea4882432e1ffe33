"""Instance file format (JSON, schema_version 1) and instance generators.

Layout:

    {
      "schema_version": 1,
      "dims":     {"l": 2, "m": 3, "n": 3},
      "sparsity": {"s": 2, "t": 2},
      "tensor":   [...],
      "b":        [5.0, 0.0],
      "known_point": {"z": [...], "label": "reference"}   // optional
    }

The tensor is either a flat row-major list of l*m*n numbers (dense) or a
list of [i, j, k, value] quadruples with 1-based indices (sparse; the empty
list is the zero tensor).  Serialization always writes the dense form.
Floats survive a write/read cycle bit-exactly (shortest-repr JSON floats).
Unknown fields anywhere are rejected by name rather than ignored, so a typo
like "sparsityy" fails loudly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .tensor3 import Instance, Point, bilinear_map

__all__ = [
    "InstanceFile",
    "parse",
    "serialize",
    "gen_blind_deconv",
    "gen_matrix_sensing",
    "gen_planted",
    "plant_point",
]


@dataclass(frozen=True)
class InstanceFile:
    instance: Instance
    known_point: Point | None = None
    label: str | None = None


def _require_keys(obj: dict, allowed: set, required: set, where: str) -> None:
    for k in obj:
        if k not in allowed:
            raise ValueError(f"unknown field {k!r} in {where}")
    for k in required:
        if k not in obj:
            raise ValueError(f"missing field {k!r} in {where}")


def _as_int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{what} must be an integer, got {value!r}")
    return value


def _as_num(value, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{what} must be a number, got {value!r}")
    return float(value)


def _num_list(values, what: str) -> list:
    if not isinstance(values, list):
        raise ValueError(f"{what} must be a list")
    return [_as_num(v, f"{what}[{i}]") for i, v in enumerate(values)]


def _parse_tensor(raw, l: int, m: int, n: int) -> np.ndarray:
    if not isinstance(raw, list):
        raise ValueError("tensor must be a list (flat dense or [i,j,k,value] rows)")
    if not raw:
        return np.zeros((l, m, n))
    if isinstance(raw[0], list):
        a = np.zeros((l, m, n))
        seen = set()
        for pos, row in enumerate(raw):
            if not isinstance(row, list) or len(row) != 4:
                raise ValueError(f"tensor entry {pos} must be [i, j, k, value]")
            i = _as_int(row[0], f"tensor entry {pos}: i")
            j = _as_int(row[1], f"tensor entry {pos}: j")
            k = _as_int(row[2], f"tensor entry {pos}: k")
            v = _as_num(row[3], f"tensor entry {pos}: value")
            if not (1 <= i <= l and 1 <= j <= m and 1 <= k <= n):
                raise ValueError(
                    f"tensor entry {pos}: index ({i},{j},{k}) out of range for dims ({l},{m},{n})"
                )
            if (i, j, k) in seen:
                raise ValueError(f"duplicate tensor entry at ({i},{j},{k})")
            seen.add((i, j, k))
            a[i - 1, j - 1, k - 1] = v
        return a
    flat = _num_list(raw, "tensor")
    if len(flat) != l * m * n:
        raise ValueError(f"tensor has {len(flat)} entries, expected l*m*n = {l * m * n}")
    return np.array(flat).reshape(l, m, n)


def parse(text) -> InstanceFile:
    """Parse an instance file (str or bytes of JSON)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    obj = json.loads(text)
    if not isinstance(obj, dict):
        raise ValueError("instance file must be a JSON object")
    _require_keys(obj, {"schema_version", "dims", "sparsity", "tensor", "b", "known_point"},
                  {"schema_version", "dims", "sparsity", "tensor", "b"}, "instance file")
    if obj["schema_version"] != 1:
        raise ValueError(f"unsupported schema_version {obj['schema_version']!r} (expected 1)")
    dims = obj["dims"]
    if not isinstance(dims, dict):
        raise ValueError("dims must be an object")
    _require_keys(dims, {"l", "m", "n"}, {"l", "m", "n"}, "dims")
    l = _as_int(dims["l"], "dims.l")
    m = _as_int(dims["m"], "dims.m")
    n = _as_int(dims["n"], "dims.n")
    if min(l, m, n) < 1:
        raise ValueError(f"dims must be positive, got ({l},{m},{n})")
    sp = obj["sparsity"]
    if not isinstance(sp, dict):
        raise ValueError("sparsity must be an object")
    _require_keys(sp, {"s", "t"}, {"s", "t"}, "sparsity")
    s = _as_int(sp["s"], "sparsity.s")
    t = _as_int(sp["t"], "sparsity.t")
    a = _parse_tensor(obj["tensor"], l, m, n)
    b = _num_list(obj["b"], "b")
    if len(b) != l:
        raise ValueError(f"b has {len(b)} entries, expected l = {l}")
    inst = Instance(a, np.array(b), s, t)

    point = None
    label = None
    if "known_point" in obj:
        kp = obj["known_point"]
        if not isinstance(kp, dict):
            raise ValueError("known_point must be an object")
        _require_keys(kp, {"z", "label"}, {"z"}, "known_point")
        z = _num_list(kp["z"], "known_point.z")
        if len(z) != m + n:
            raise ValueError(f"known_point.z has {len(z)} entries, expected m+n = {m + n}")
        point = Point.from_z(np.array(z), m)
        label = kp.get("label")
        if label is not None and not isinstance(label, str):
            raise ValueError("known_point.label must be a string")
    return InstanceFile(inst, point, label)


def serialize(inst: Instance, known_point: Point | None = None,
              label: str | None = None) -> str:
    """Instance (and optional known point) as canonical JSON text."""
    obj = {
        "schema_version": 1,
        "dims": {"l": inst.l, "m": inst.m, "n": inst.n},
        "sparsity": {"s": int(inst.s), "t": int(inst.t)},
        "tensor": inst.tensor.ravel().tolist(),
        "b": inst.b.tolist(),
    }
    if known_point is not None:
        inst.check_point(known_point)
        kp = {"z": known_point.z.tolist()}
        if label is not None:
            kp["label"] = label
        obj["known_point"] = kp
    return json.dumps(obj, indent=2) + "\n"


def gen_blind_deconv(H, G) -> np.ndarray:
    """Rank-one-slice tensor a_ijk = H_ij * G_ik, so (A x y) = (Hx) .* (Gy)."""
    H = np.asarray(H, dtype=float)
    G = np.asarray(G, dtype=float)
    if H.ndim != 2 or G.ndim != 2:
        raise ValueError("H and G must be matrices")
    if H.shape[0] != G.shape[0]:
        raise ValueError(f"H and G must have the same row count, got {H.shape[0]} and {G.shape[0]}")
    return np.einsum("ij,ik->ijk", H, G)


def gen_matrix_sensing(mats) -> np.ndarray:
    """Tensor whose i-th slice is the i-th sensing matrix, so (A x y)_i = x^T M_i y."""
    mats = [np.asarray(M, dtype=float) for M in mats]
    if not mats:
        raise ValueError("need at least one sensing matrix")
    shape = mats[0].shape
    for i, M in enumerate(mats):
        if M.ndim != 2 or M.shape != shape:
            raise ValueError(f"sensing matrix {i} has shape {M.shape}, expected {shape}")
    return np.stack(mats, axis=0)


def plant_point(m: int, n: int, s: int, t: int, rng: np.random.Generator) -> Point:
    """Random feasible point with full supports: pivot 1, normal values."""
    supp1 = np.sort(rng.choice(m, size=s, replace=False))
    x = np.zeros(m)
    x[supp1] = rng.standard_normal(s)
    x[supp1[0]] = 1.0
    supp2 = np.sort(rng.choice(n, size=t, replace=False))
    y = np.zeros(n)
    y[supp2] = rng.standard_normal(t)
    return Point(x, y)


def gen_planted(l: int, m: int, n: int, s: int, t: int, seed: int = 0):
    """Random instance with a known zero-residual point.

    b is defined as the bilinear map evaluated at the planted point, so the
    planted residual is exactly zero (bitwise, not just within tolerance).
    Returns (instance, planted_point).
    """
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((l, m, n))
    p = plant_point(m, n, s, t, rng)
    b = bilinear_map(a, p.x, p.y)
    return Instance(a, b, s, t), p
