"""Fusion rings: labels, duals, multiplicities and Perron-Frobenius dimensions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NoPositiveSolution, ValidationReport


@dataclass(frozen=True)
class Label:
    id: int
    name: str
    dual: int


class FusionRing:
    """Based ring with unit ``0``.

    Parameters
    ----------
    N : array_like of int, shape (rank, rank, rank)
        ``N[i, j, k]`` is the multiplicity of ``k`` in ``i * j``.
    duals : sequence of int
        ``duals[i]`` is the index of the dual label.
    names : sequence of str, optional
    """

    def __init__(self, N, duals, names=None):
        N = np.asarray(N, dtype=np.int64)
        if N.ndim != 3 or len(set(N.shape)) != 1:
            raise ValueError(f"N must have shape (r, r, r), got {N.shape}")
        self.rank = N.shape[0]
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        self.N = N
        self.N.setflags(write=False)
        self.duals = tuple(int(x) for x in duals)
        if len(self.duals) != self.rank:
            raise ValueError("need one dual per label")
        if names is None:
            names = ["1"] + [f"x{i}" for i in range(1, self.rank)]
        self.labels = tuple(Label(i, str(n), self.duals[i]) for i, n in enumerate(names))

    @property
    def names(self):
        return [lab.name for lab in self.labels]

    def dual(self, i):
        return self.duals[i]

    def fuse(self, i, j):
        """Labels appearing in ``i * j`` (with multiplicity > 0)."""
        return [k for k in range(self.rank) if self.N[i, j, k]]

    def fusion_matrix(self, i):
        """``L_i[k, j] = N[i, j, k]``: left multiplication by ``i``."""
        return self.N[i].T.astype(float)

    def __repr__(self):
        return f"FusionRing(rank={self.rank}, labels={self.names})"


def validate_fusion_ring(ring: FusionRing) -> ValidationReport:
    """Check the unit, associativity and duality axioms exactly (integer arithmetic)."""
    rep = ValidationReport(subject=f"fusion ring {ring.names}")
    N = ring.N
    r = ring.rank
    eye = np.eye(r, dtype=np.int64)
    if np.any(N < 0):
        rep.fail("nonneg", "negative multiplicity")
    if not np.array_equal(N[0], eye):
        rep.fail("unit", "N[0][j][k] != delta_jk")
    if not np.array_equal(N[:, 0, :], eye):
        rep.fail("unit", "N[i][0][k] != delta_ik")
    # (i j) k -> l  versus  i (j k) -> l
    lhs = np.einsum("ijm,mkl->ijkl", N, N)
    rhs = np.einsum("jkm,iml->ijkl", N, N)
    bad = np.argwhere(lhs != rhs)
    for i, j, k, l in bad[:10]:
        rep.fail("assoc", f"({i}{j}){k}->{l}: {lhs[i, j, k, l]} != {rhs[i, j, k, l]}")
    if len(bad) > 10:
        rep.fail("assoc", f"... {len(bad) - 10} more associativity violations")
    for i in range(r):
        d = ring.duals[i]
        if not 0 <= d < r:
            rep.fail("dual", f"dual({i}) = {d} out of range")
            continue
        if ring.duals[d] != i:
            rep.fail("dual", f"dual(dual({i})) != {i}")
        for j in range(r):
            want = 1 if j == d else 0
            if N[i, j, 0] != want:
                rep.fail("dual", f"N[{i}][{j}][0] = {N[i, j, 0]}, expected {want}")
    if ring.duals[0] != 0:
        rep.fail("dual", "unit is not self-dual")
    return rep


@dataclass(frozen=True)
class QuantumDims:
    d: np.ndarray
    lam: float

    def __iter__(self):
        return iter(self.d)


def quantum_dims(ring: FusionRing, tol=1e-9) -> QuantumDims:
    """Perron-Frobenius dimensions ``d_i`` (``d_0 = 1``) and global index ``sum d_i**2``.

    The dimension vector is the common positive eigenvector of the fusion matrices; it is
    read off the Perron eigenvector of their sum, which is irreducible for a valid ring.
    """
    r = ring.rank
    total = sum(ring.fusion_matrix(i) for i in range(r))
    vals, vecs = np.linalg.eig(total)
    k = int(np.argmax(vals.real))
    v = vecs[:, k]
    v = v / v[0] if abs(v[0]) > 0 else v
    d = np.real_if_close(v, tol=1e6)
    if np.iscomplexobj(d) or abs(v[0]) == 0 or np.any(np.asarray(d) <= 0):
        raise NoPositiveSolution("fusion matrices have no strictly positive common eigenvector")
    d = np.asarray(d, dtype=float)
    resid = np.einsum("ijk,k->ij", ring.N, d) - np.outer(d, d)
    if np.max(np.abs(resid)) > max(tol, 1e-9) * max(1.0, float(np.max(d)) ** 2):
        raise NoPositiveSolution(f"d_i d_j = sum N d_k fails (residual {np.max(np.abs(resid)):.2e})")
    d.setflags(write=False)
    return QuantumDims(d=d, lam=float(np.sum(d**2)))
