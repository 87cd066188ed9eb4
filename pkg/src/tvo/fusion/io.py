"""JSON serialization of fusion systems.

Layout::

    {"name": ..., "rank": r,
     "labels": [{"name": "1", "dual": 0}, ...],
     "N": [[i, j, k, value], ...],
     "dims": [...],
     "F": [[i, j, k, l, m, alpha, beta, n, gamma, delta, re, im], ...],
     "tolerance": 1e-9}

``N`` and ``F`` are sparse.  Blocks missing from ``F`` that have a unit leg, or that are
1x1, take their canonical value (identity, respectively 1), so hand-written files only need
the nontrivial entries.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import InvalidSystem, SchemaError
from .ring import FusionRing, validate_fusion_ring
from .system import DEFAULT_TOL, FusionSystem, build_system

_FIELDS = ("name", "rank", "labels", "N", "F")


def system_to_dict(fs: FusionSystem, drop_zeros=True) -> dict:
    N = fs.N
    n_entries = [[int(i), int(j), int(k), int(N[i, j, k])] for i, j, k in np.argwhere(N > 0)]
    f_entries = []
    for q in sorted(fs.F):
        blk = fs.F[q]
        for a, lk in enumerate(blk.left):
            for b, rk in enumerate(blk.right):
                z = complex(blk.matrix[a, b])
                if drop_zeros and z == 0:
                    continue
                f_entries.append([*map(int, q), *map(int, lk), *map(int, rk), z.real, z.imag])
    return {
        "name": fs.name,
        "rank": fs.rank,
        "labels": [{"name": lab.name, "dual": lab.dual} for lab in fs.ring.labels],
        "N": n_entries,
        "dims": [float(x) for x in fs.d],
        "F": f_entries,
        "tolerance": fs.tolerance,
    }


def dumps_system(fs: FusionSystem) -> str:
    return json.dumps(system_to_dict(fs), indent=1)


def save_system(fs: FusionSystem, path) -> None:
    Path(path).write_text(dumps_system(fs) + "\n", encoding="utf-8")


def system_from_dict(obj: dict) -> FusionSystem:
    """Build a system from the JSON layout.

    Raises
    ------
    SchemaError
        Missing fields or malformed entries.
    InvalidSystem
        The fusion ring violates its invariants.  The validation report is attached.
    """
    missing = [k for k in _FIELDS if k not in obj]
    if missing:
        raise SchemaError(f"fusion-system file lacks {missing}")
    try:
        r = int(obj["rank"])
        labels = obj["labels"]
        if len(labels) != r:
            raise SchemaError(f"rank {r} but {len(labels)} labels")
        N = np.zeros((r, r, r), dtype=np.int64)
        for i, j, k, v in obj["N"]:
            N[i, j, k] = v
        ring = FusionRing(N, [lab["dual"] for lab in labels], [lab["name"] for lab in labels])
    except (TypeError, ValueError, KeyError, IndexError) as exc:
        raise SchemaError(f"malformed ring data: {exc}") from None
    rep = validate_fusion_ring(ring)
    if not rep.valid:
        raise InvalidSystem(rep.format(), rep)
    values = {}
    for row in obj["F"]:
        if len(row) != 12:
            raise SchemaError(f"F entry needs 12 fields, got {row}")
        values[tuple(int(x) for x in row[:10])] = complex(row[10], row[11])
    tol = float(obj.get("tolerance", DEFAULT_TOL))
    try:
        fs = build_system(ring, values, name=obj["name"], tolerance=tol, default_one=True)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    if "dims" in obj and obj["dims"] is not None:
        given = np.asarray(obj["dims"], dtype=float)
        if given.shape != fs.d.shape or np.max(np.abs(given - fs.d)) > max(tol, 1e-9) * 10:
            raise InvalidSystem(f"declared dims {given.tolist()} differ from {fs.d.tolist()}")
    return fs


def loads_system(text: str) -> FusionSystem:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not JSON: {exc}") from None
    return system_from_dict(obj)


def load_system(path) -> FusionSystem:
    return loads_system(Path(path).read_text(encoding="utf-8"))
