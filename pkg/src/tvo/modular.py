"""Modular data (a Verlinde basis): validation, Verlinde fusion rules, conjugation, file I/O."""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import AxiomFailure, NonIntegral, SchemaError, ValidationReport

VERLINDE_ROUND_TOL = 1e-6


class ModularData:
    """Unitary symmetric ``S`` and twists ``t`` with the vacuum at index 0.

    Parameters
    ----------
    S : array_like, shape (m+1, m+1)
    t : array_like, shape (m+1,)
    labels : list of str, optional
    name : str
    tolerance : float
    provenance : dict, optional
    """

    def __init__(self, S, t, labels=None, name="", tolerance=1e-8, provenance=None, lam=None):
        self.S = np.array(S, dtype=complex)
        self.t = np.array(t, dtype=complex)
        if self.S.ndim != 2 or self.S.shape[0] != self.S.shape[1] or self.t.shape != (self.S.shape[0],):
            raise SchemaError(f"S must be square and t must match it; got {self.S.shape}, {self.t.shape}")
        self.S.setflags(write=False)
        self.t.setflags(write=False)
        self.labels = list(labels) if labels is not None else [str(i) for i in range(self.rank)]
        self.name = name
        self.tolerance = float(tolerance)
        self.provenance = dict(provenance or {})
        self._lam = lam
        self.report = None

    @property
    def rank(self):
        return self.S.shape[0]

    @property
    def lam(self):
        if self._lam is not None:
            return float(self._lam)
        return float(1 / self.S[0, 0].real)

    @property
    def dims(self):
        return (self.lam * self.S[0]).real

    def __repr__(self):
        return f"ModularData({self.name!r}, rank={self.rank})"

    def __eq__(self, other):
        if not isinstance(other, ModularData):
            return NotImplemented
        return (np.array_equal(self.S, other.S) and np.array_equal(self.t, other.t)
                and self.labels == other.labels and self.name == other.name)

    def permuted(self, order):
        order = list(order)
        return ModularData(self.S[np.ix_(order, order)], self.t[order], [self.labels[i] for i in order],
                           self.name, self.tolerance, self.provenance, self._lam)


def charge_conjugation(md: ModularData, tol=None):
    """Permutation ``C`` with ``S^2 e_i = e_{C(i)}``, or ``None`` if ``S^2`` is no permutation."""
    tol = md.tolerance if tol is None else tol
    S2 = md.S @ md.S
    perm = np.argmax(np.abs(S2), axis=0)
    P = np.zeros_like(S2)
    P[perm, np.arange(md.rank)] = 1
    if np.max(np.abs(S2 - P)) > tol:
        return None
    return perm


def validate_verlinde_axioms(md: ModularData, tol=None) -> ValidationReport:
    """Check the Verlinde-basis axioms; each failure carries its axiom tag.

    Tags: ``iia`` (S unitary and symmetric), ``iib`` (S^2 a permutation fixing the vacuum),
    ``iic1`` (S_{i0} real and nonzero), ``iic2`` (Verlinde numbers non-negative integers),
    ``T-diag`` (|t_i| = 1).  ``t0`` (t_0 = 1) and compatibility of C with t are warnings.
    Axiom (iv) is not modelled.
    """
    tol = md.tolerance if tol is None else tol
    rep = ValidationReport(subject=f"modular data {md.name} (rank {md.rank})")
    S, t = md.S, md.t
    n = md.rank
    uni = float(np.max(np.abs(S @ S.conj().T - np.eye(n))))
    sym = float(np.max(np.abs(S - S.T)))
    rep.record("unitarity", uni)
    rep.record("symmetry", sym)
    if uni > tol:
        rep.fail("iia", f"S not unitary (residual {uni:.2e})")
    if sym > tol:
        rep.fail("iia", f"S not symmetric (residual {sym:.2e})")
    perm = charge_conjugation(md, tol)
    if perm is None:
        rep.fail("iib", "S^2 is not a permutation matrix")
    else:
        if perm[0] != 0:
            rep.fail("iib", "S^2 moves the vacuum")
        if np.any(perm[perm] != np.arange(n)):
            rep.fail("iib", "charge conjugation is not an involution")
        elif np.max(np.abs(t[perm] - t)) > tol:
            rep.warn("C-t", "t is not invariant under charge conjugation")
    col = S[:, 0]
    rep.record("S_i0_imag", float(np.max(np.abs(col.imag))))
    if np.max(np.abs(col.imag)) > tol:
        rep.fail("iic1", "S_{i0} not real")
    if np.min(np.abs(col)) <= tol:
        rep.fail("iic1", "some S_{i0} vanishes")
    tdev = float(np.max(np.abs(np.abs(t) - 1)))
    rep.record("t_modulus", tdev)
    if tdev > tol:
        rep.fail("T-diag", f"|t_i| != 1 (max deviation {tdev:.2e})")
    if abs(t[0] - 1) > tol:
        rep.warn("t0", f"t_0 = {t[0]:.6g} != 1")
    if np.min(np.abs(col)) > tol:
        raw = _verlinde_raw(md)
        rounded = np.rint(raw.real)
        dev = float(np.max(np.abs(raw - rounded)))
        rep.record("verlinde_integrality", dev)
        if dev > VERLINDE_ROUND_TOL:
            rep.fail("iic2", f"Verlinde numbers not integral (deviation {dev:.2e})")
        elif np.any(rounded < 0):
            rep.fail("iic2", "negative Verlinde number")
        elif not np.array_equal(rounded[0], np.eye(n)):
            rep.fail("iic2", "vacuum is not the fusion unit")
    rep.notes.append("axiom (iv) (the U map) is not checked")
    return rep


def _verlinde_raw(md):
    S = md.S
    return np.einsum("il,jl,lk,l->ijk", S, S, S.conj(), 1 / S[0], optimize=True)


def fusion_rules(md: ModularData, tol=VERLINDE_ROUND_TOL):
    """Verlinde numbers ``N_{ij}^k = sum_l S_il S_jl conj(S_lk) / S_0l`` as an integer tensor.

    Returns
    -------
    N : ndarray of int, shape (m+1, m+1, m+1)
    deviation : float
        ``max |raw - rounded|``.
    """
    raw = _verlinde_raw(md)
    rounded = np.rint(raw.real)
    dev = float(np.max(np.abs(raw - rounded)))
    if dev > tol:
        raise NonIntegral(f"Verlinde numbers deviate from integers by {dev:.3e}")
    return rounded.astype(np.int64), dev


def conjugate(md: ModularData) -> ModularData:
    """Orientation reversal: entrywise conjugate ``S`` and ``t``."""
    out = ModularData(md.S.conj(), md.t.conj(), md.labels, md.name, md.tolerance, md.provenance, md._lam)
    return out


# ----------------------------------------------------------------------------------
# matching up to label permutation
# ----------------------------------------------------------------------------------

def match_labels(a: ModularData, b: ModularData, tol=1e-8):
    """Permutation ``perm`` with ``b.permuted(perm) == a`` within ``tol``, or ``None``.

    Greedy on the twist and the sorted modulus profile of the S-column; ambiguous choices
    are resolved by backtracking so that symmetric labels (which have identical
    fingerprints) are still matched consistently.
    """
    if a.rank != b.rank:
        return None
    n = a.rank

    def fp(md, i):
        return np.sort(np.abs(md.S[:, i]))

    cands = []
    for i in range(n):
        ci = [j for j in range(n) if abs(a.t[i] - b.t[j]) < tol
              and np.max(np.abs(fp(a, i) - fp(b, j))) < tol]
        if not ci:
            return None
        cands.append(ci)
    order = sorted(range(n), key=lambda i: (len(cands[i]), i))
    perm = [-1] * n
    used = set()

    def ok(i, j):
        for i2 in range(n):
            j2 = perm[i2]
            if j2 >= 0 and abs(a.S[i, i2] - b.S[j, j2]) > tol:
                return False
        return abs(a.S[i, i] - b.S[j, j]) < tol

    def go(k):
        if k == n:
            return True
        i = order[k]
        for j in cands[i]:
            if j in used or not ok(i, j):
                continue
            perm[i] = j
            used.add(j)
            if go(k + 1):
                return True
            used.discard(j)
            perm[i] = -1
        return False

    return perm if go(0) else None


def equivalent(a: ModularData, b: ModularData, tol=1e-8) -> bool:
    return match_labels(a, b, tol) is not None


def tensor_product(a: ModularData, b: ModularData, name=None) -> ModularData:
    labels = [f"{x}.{y}" for x in a.labels for y in b.labels]
    return ModularData(np.kron(a.S, b.S), np.kron(a.t, b.t), labels, name or f"{a.name}x{b.name}",
                       max(a.tolerance, b.tolerance))


# ----------------------------------------------------------------------------------
# file format
# ----------------------------------------------------------------------------------

def fmt(x: float) -> str:
    """Canonical 17-significant-digit rendering of a float."""
    x = float(x)
    if x == 0:
        return "0"
    return f"{x:.17g}"


def _cplx(z):
    return f"[{fmt(z.real)}, {fmt(z.imag)}]"


def dumps(md: ModularData) -> str:
    """Canonical JSON text (row-major, 17 significant digits, UNIX newlines)."""
    lines = ["{"]
    lines.append(f'  "name": {json.dumps(md.name)},')
    lines.append(f'  "rank": {md.rank},')
    lines.append(f'  "labels": {json.dumps(md.labels)},')
    lines.append(f'  "lambda": {fmt(md.lam)},')
    rows = [("    [" + ", ".join(_cplx(z) for z in row) + "]") for row in md.S]
    lines.append('  "S": [\n' + ",\n".join(rows) + "\n  ],")
    lines.append('  "t": [' + ", ".join(_cplx(z) for z in md.t) + "],")
    lines.append(f'  "provenance": {json.dumps(md.provenance, sort_keys=True)},')
    lines.append(f'  "tolerance": {fmt(md.tolerance)}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def save(md: ModularData, path):
    Path(path).write_text(dumps(md), encoding="utf-8", newline="\n")


def _pair(z, where):
    if not (isinstance(z, list) and len(z) == 2 and all(isinstance(v, (int, float)) for v in z)):
        raise SchemaError(f"{where}: expected [re, im], got {z!r}")
    return complex(z[0], z[1])


def loads(text: str, strict=False) -> ModularData:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    for key in ("S", "t"):
        if key not in obj:
            raise SchemaError(f"missing field {key!r}")
    S = obj["S"]
    if not isinstance(S, list) or not all(isinstance(r, list) for r in S):
        raise SchemaError("S must be a list of rows")
    Sm = [[_pair(z, f"S[{i}][{j}]") for j, z in enumerate(row)] for i, row in enumerate(S)]
    n = len(Sm)
    if any(len(r) != n for r in Sm):
        raise SchemaError("S is not square")
    t = [_pair(z, f"t[{i}]") for i, z in enumerate(obj["t"])]
    if len(t) != n:
        raise SchemaError("t has the wrong length")
    if "rank" in obj and obj["rank"] != n:
        raise SchemaError(f"rank {obj['rank']} does not match S ({n})")
    labels = obj.get("labels") or [str(i) for i in range(n)]
    if len(labels) != n:
        raise SchemaError("labels have the wrong length")
    md = ModularData(Sm, t, labels, obj.get("name", ""), obj.get("tolerance", 1e-8),
                     obj.get("provenance"), obj.get("lambda"))
    rep = validate_verlinde_axioms(md)
    md.report = rep
    if not rep.valid:
        if strict:
            raise AxiomFailure(rep.format(), sorted(rep.tags()))
        md.provenance = dict(md.provenance)
        md.warning = True
    return md


def load(path, strict=False) -> ModularData:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from None
    return loads(text, strict=strict)


def from_dims_check(md: ModularData) -> float:
    """``|sum d_i^2 - lambda^2|``; for a center this vanishes."""
    return abs(float(np.sum(md.dims ** 2)) - md.lam ** 2)


def is_close_phase(a, b, tol=1e-9):
    return abs(a - b) < tol


def exact_root(turns_num, turns_den):
    ang = 2 * math.pi * turns_num / turns_den
    return complex(math.cos(ang), math.sin(ang))
