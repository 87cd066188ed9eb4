"""Izumi's tube algebra of a fusion system, its center, and the modular data it carries.

Basis elements are ``(xi zeta | X | zeta eta)`` with ``X`` a matrix unit of
``Hom(xi zeta -> zeta eta)``: in the block of total charge ``p`` it maps the ``j``-th
left-comb tree of ``xi zeta`` (``X_1``) to the ``i``-th tree of ``zeta eta`` (``X_2``),
i.e. ``X = X_2 X_1^*``.  Elements of the algebra are complex vectors over that basis.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DegenerateSplit, DimensionMismatch, NotDiagonal, ValidationReport, VacuumNotUnique
from .fusion.calculus import Morphism, cup, cupbar, vertex, word
from .fusion.system import FusionSystem


@dataclass(frozen=True)
class TubeBasisElement:
    xi: int
    zeta: int
    eta: int
    p: int
    b1: int
    b2: int

    def __str__(self):
        return f"({self.xi}{self.zeta}|p={self.p},{self.b2}<-{self.b1}|{self.zeta}{self.eta})"


@dataclass
class TubeAlgebra:
    """Structure constants of ``Tube_I``.

    Attributes
    ----------
    basis : list of TubeBasisElement
    mult : ndarray, shape (D, D, D)
        ``e_a e_b = sum_c mult[a, b, c] e_c``.
    star : ndarray, shape (D, D)
        ``x^* = star @ conj(x)``.
    gram : ndarray, shape (D, D)
        ``<x, y> = x @ gram @ conj(y)``.
    unit : ndarray
    """

    fs: FusionSystem
    basis: list
    offsets: dict
    mult: np.ndarray
    star: np.ndarray
    gram: np.ndarray
    unit: np.ndarray

    @property
    def dim(self):
        return len(self.basis)

    @property
    def lam(self):
        return self.fs.lam

    @property
    def dims(self):
        return self.fs.d

    def product(self, x, y):
        return np.einsum("a,b,abc->c", x, y, self.mult, optimize=True)

    def left_matrix(self, x):
        """Matrix of ``y -> x y``."""
        return np.einsum("a,abc->cb", x, self.mult, optimize=True)

    def right_matrix(self, y):
        """Matrix of ``x -> x y``."""
        return np.einsum("b,abc->ca", y, self.mult, optimize=True)

    def adjoint(self, x):
        return self.star @ np.conj(x)

    def inner(self, x, y):
        return complex(x @ self.gram @ np.conj(y))

    def element(self, xi, zeta, eta, X: Morphism):
        """Vector of ``(xi zeta | X | zeta eta)``."""
        off, n = self.offsets[xi, zeta, eta]
        v = np.zeros(self.dim, dtype=complex)
        vec = X.vector()
        if len(vec) != n:
            raise DimensionMismatch(f"{X} does not live in (xi zeta, zeta eta) = ({xi}{zeta},{zeta}{eta})")
        v[off:off + n] = vec
        return v

    def morphism(self, x, xi, zeta, eta) -> Morphism:
        off, n = self.offsets[xi, zeta, eta]
        return Morphism.from_vector(self.fs, word(xi, zeta), word(zeta, eta), x[off:off + n])


def tube_dimension(fs: FusionSystem) -> int:
    """``sum N_{xi zeta}^p N_{zeta eta}^p``."""
    N = fs.N
    return int(np.einsum("xzp,zyp->", N, N))


def _stack(ms):
    """Stack morphisms of equal type into ``{c: array (n, rows, cols)}``."""
    out = {}
    for c in ms[0].blocks:
        out[c] = np.stack([m.blocks[c] for m in ms])
    return out


def build_tube(fs: FusionSystem) -> TubeAlgebra:
    """Structure constants, star, unit and inner product of the tube algebra of ``fs``."""
    r = fs.rank
    d = fs.d
    basis, offsets = [], {}
    spaces = {}
    for xi, zeta, eta in itertools.product(range(r), repeat=3):
        zero = Morphism.zero(fs, word(xi, zeta), word(zeta, eta))
        elems = []
        for c in sorted(zero.blocks):
            rows, cols = zero.blocks[c].shape
            for i in range(rows):
                for j in range(cols):
                    basis.append(TubeBasisElement(xi, zeta, eta, c, j, i))
                    m = Morphism.zero(fs, zero.src, zero.tgt)
                    m.blocks[c][i, j] = 1.0
                    elems.append(m)
        if elems:
            offsets[xi, zeta, eta] = (len(basis) - len(elems), len(elems))
            spaces[xi, zeta, eta] = elems
    D = len(basis)
    if D != tube_dimension(fs):
        raise DimensionMismatch(f"enumerated {D} basis elements, formula gives {tube_dimension(fs)}")

    mult = np.zeros((D, D, D), dtype=complex)
    # vertices A of H^nu_{zeta zeta'} together with their sector images
    for (xi, zeta, eta), Xs in spaces.items():
        ox, nx = offsets[xi, zeta, eta]
        for zp, etap in itertools.product(range(r), repeat=2):
            if (eta, zp, etap) not in spaces:
                continue
            Ys = spaces[eta, zp, etap]
            oy, ny = offsets[eta, zp, etap]
            Xe = _stack([X.rtensor(word(zp)) for X in Xs])
            Ye = _stack([Y.ltensor(word(zeta)) for Y in Ys])
            for nu in range(r):
                if (xi, nu, etap) not in offsets:
                    continue
                oz, nz = offsets[xi, nu, etap]
                acc = None
                for mu in range(fs.N[zeta, zp, nu]):
                    A = vertex(fs, zeta, zp, nu, mu)
                    xA = A.ltensor(word(xi))
                    As = A.adj().rtensor(word(etap))
                    tgt = Morphism.zero(fs, word(xi, nu), word(nu, etap))
                    parts = []
                    for c in sorted(tgt.blocks):
                        blk = np.einsum("ab,lbc,kcd,de->klae", As.blocks[c], Ye[c], Xe[c],
                                        xA.blocks[c], optimize=True)
                        parts.append(blk.reshape(nx, ny, -1))
                    val = np.concatenate(parts, axis=2)
                    acc = val if acc is None else acc + val
                if acc is not None:
                    mult[ox:ox + nx, oy:oy + ny, oz:oz + nz] += acc

    star = np.zeros((D, D), dtype=complex)
    gram = np.zeros((D, D), dtype=complex)
    for (xi, zeta, eta), Xs in spaces.items():
        ox, nx = offsets[xi, zeta, eta]
        zb = fs.dual(zeta)
        oz, nz = offsets[eta, zb, xi]
        Rz = cup(fs, zeta)
        Rbz = cupbar(fs, zeta)
        pre = Rz.rtensor(word(eta, zb))
        cap = Rbz.adj().ltensor(word(xi))
        Rin = Rz.rtensor(word(eta))
        for k, X in enumerate(Xs):
            inner = cap @ X.adj().rtensor(word(zb))
            val = d[zeta] * (inner.ltensor(word(zb)) @ pre)
            # star is conjugate linear: store its action on the real basis vector
            star[oz:oz + nz, ox + k] = val.vector()
            for l, Y in enumerate(Xs):
                g = (Rin.adj() @ (X @ Y.adj()).ltensor(word(zb)) @ Rin).scalar()
                gram[ox + k, ox + l] = d[xi] ** 2 * g
    unit = np.zeros(D, dtype=complex)
    for xi in range(r):
        unit[offsets[xi, 0, xi][0]] = 1.0
    return TubeAlgebra(fs=fs, basis=basis, offsets=offsets, mult=mult, star=star, gram=gram, unit=unit)


def structure_report(t: TubeAlgebra) -> ValidationReport:
    """Associativity, unit, star and inner-product residuals."""
    rep = ValidationReport(subject=f"tube algebra of {t.fs.name} (dim {t.dim})")
    m = t.mult
    lhs = np.einsum("abx,xcy->abcy", m, m, optimize=True)
    rhs = np.einsum("bcx,axy->abcy", m, m, optimize=True)
    rep.record("associativity", np.max(np.abs(lhs - rhs)) if t.dim else 0.0)
    L = t.left_matrix(t.unit)
    R = t.right_matrix(t.unit)
    eye = np.eye(t.dim)
    rep.record("unit", max(np.max(np.abs(L - eye)), np.max(np.abs(R - eye))))
    S = t.star
    rep.record("star_involution", np.max(np.abs(S @ S.conj() - eye)))
    # (e_a e_b)^* = e_b^* e_a^*, and the star is conjugate linear
    ab = np.einsum("abc,dc->abd", m.conj(), S)
    ba = np.einsum("xb,ya,xyd->abd", S, S, m, optimize=True)
    rep.record("star_antihomomorphism", np.max(np.abs(ab - ba)))
    G = t.gram
    rep.record("gram_hermitian", np.max(np.abs(G - G.conj().T)))
    ev = np.linalg.eigvalsh((G + G.conj().T) / 2)
    if ev.size and ev.min() <= 0:
        rep.fail("gram", f"inner product not positive definite (min eigenvalue {ev.min():.3e})")
    tol = t.fs.tolerance
    for k, v in rep.residuals.items():
        if v > tol:
            rep.fail(k, f"residual {v:.3e} exceeds {tol:.1e}")
    return rep


# ----------------------------------------------------------------------------------
# center and minimal projections
# ----------------------------------------------------------------------------------

@dataclass
class CenterData:
    """Center of the tube algebra.

    ``center_basis`` has shape ``(D, k)``; ``projections`` is a list of ``k`` vectors.
    """

    center_basis: np.ndarray
    projections: list
    seed: int | None = None
    notes: list = field(default_factory=list)

    @property
    def rank(self):
        return len(self.projections)


def _center_basis(t: TubeAlgebra, tol):
    D = t.dim
    # [x, e_b] = 0 for all b, as a linear system in x
    C = (t.mult - t.mult.transpose(1, 0, 2)).transpose(1, 2, 0).reshape(D * D, D)
    # absolute cut: a commutative algebra gives a commutator matrix of pure rounding noise
    scale = max(1.0, float(np.max(np.abs(t.mult)))) if D else 1.0
    _, s, vh = scipy.linalg.svd(C, full_matrices=True)
    rank = int(np.sum(s > 1e3 * max(tol, 1e-12) * scale))
    return vh[rank:].conj().T


def center(t: TubeAlgebra, seed: int = 0, retries: int = 8, tol: float | None = None) -> CenterData:
    """Center of ``t`` and its minimal projections.

    The projections are the eigenvectors of multiplication by a random self-adjoint central
    element, normalized so that ``p p = p``.  A degenerate spectrum triggers a retry with a
    fresh element.
    """
    tol = t.fs.tolerance if tol is None else tol
    Z = _center_basis(t, tol)
    k = Z.shape[1]
    rng = np.random.default_rng(seed)
    pinvZ = np.linalg.pinv(Z)
    for attempt in range(retries):
        c = rng.normal(size=k) + 1j * rng.normal(size=k)
        h = Z @ c
        h = h + t.adjoint(h)
        L = pinvZ @ t.left_matrix(h) @ Z
        vals, vecs = np.linalg.eig(L)
        gaps = np.abs(vals[:, None] - vals[None, :]) + np.eye(k) * 1e300
        if k > 1 and gaps.min() < 1e-6 * max(1.0, np.max(np.abs(vals))):
            continue
        projs = []
        ok = True
        for n in range(k):
            v = Z @ vecs[:, n]
            vv = t.product(v, v)
            i = int(np.argmax(np.abs(v)))
            p = v * (v[i] / vv[i])
            if np.max(np.abs(t.product(p, p) - p)) > 1e3 * tol:
                ok = False
                break
            projs.append(p)
        if not ok:
            continue
        # deterministic order: by label sector of the largest unit component, then phase data
        projs = _refine(t, projs)
        return CenterData(center_basis=Z, projections=projs, seed=seed,
                          notes=[f"split found on attempt {attempt + 1}"])
    raise DegenerateSplit(f"could not separate {k} central projections after {retries} attempts")


def _refine(t, projs):
    # enforce p* = p and sum p = 1 exactly up to rounding, then fix a canonical order
    projs = [(p + t.adjoint(p)) / 2 for p in projs]
    key = lambda p: tuple(np.round(np.abs(p), 8))
    return sorted(projs, key=key, reverse=True)


def projection_report(t: TubeAlgebra, c: CenterData) -> ValidationReport:
    rep = ValidationReport(subject="central projections")
    P = c.projections
    worst_idem = max((np.max(np.abs(t.product(p, p) - p)) for p in P), default=0.0)
    worst_sa = max((np.max(np.abs(t.adjoint(p) - p)) for p in P), default=0.0)
    worst_orth = 0.0
    for i, j in itertools.permutations(range(len(P)), 2):
        worst_orth = max(worst_orth, np.max(np.abs(t.product(P[i], P[j]))))
    rep.record("idempotent", worst_idem)
    rep.record("self_adjoint", worst_sa)
    rep.record("orthogonal", worst_orth)
    rep.record("sum_to_unit", np.max(np.abs(sum(P) - t.unit)) if P else 0.0)
    for k, v in rep.residuals.items():
        if v > 1e-8:
            rep.fail(k, f"residual {v:.3e}")
    return rep


# ----------------------------------------------------------------------------------
# SL(2, Z) action
# ----------------------------------------------------------------------------------

def s_prime(t: TubeAlgebra, x):
    """``S'`` applied to an element supported on the ``(xi eta | X | eta xi)`` sectors."""
    fs = t.fs
    d = fs.d
    out = np.zeros(t.dim, dtype=complex)
    for (xi, eta, xi2), (off, n) in t.offsets.items():
        if xi2 != xi:
            continue
        blk = x[off:off + n]
        if not np.any(blk):
            continue
        X = Morphism.from_vector(fs, word(xi, eta), word(eta, xi), blk)
        eb = fs.dual(eta)
        inner = X.rtensor(word(eb)) @ cupbar(fs, eta).ltensor(word(xi))
        val = d[xi] * (cup(fs, eta).adj().rtensor(word(xi, eb)) @ inner.ltensor(word(eb)))
        out += t.element(eb, xi, eb, val)
    return out


def theta(t: TubeAlgebra):
    """The central element ``sum_zeta d(zeta) (zeta zetabar | R Rbar^* | zetabar zeta)``."""
    fs = t.fs
    out = np.zeros(t.dim, dtype=complex)
    for z in range(fs.rank):
        zb = fs.dual(z)
        X = cup(fs, z) @ cupbar(fs, z).adj()
        out += fs.d[z] * t.element(z, zb, z, X)
    return out


def t_prime(t: TubeAlgebra, x):
    return t.product(theta(t), x)


def t_prime_inverse(t: TubeAlgebra, x):
    """``T'^{-1}(xi eta | X_2 X_1^* | eta xi) = (xi p | X_1^* xi(X_2) | p xi)``."""
    fs = t.fs
    out = np.zeros(t.dim, dtype=complex)
    for k in np.nonzero(np.abs(x) > 0)[0]:
        b = t.basis[k]
        if b.xi != b.eta:
            continue
        xi, eta, p = b.xi, b.zeta, b.p
        X1 = Morphism.zero(fs, word(p), word(xi, eta))
        X2 = Morphism.zero(fs, word(p), word(eta, xi))
        X1.blocks[p][b.b1, 0] = 1.0
        X2.blocks[p][b.b2, 0] = 1.0
        val = X1.adj().rtensor(word(xi)) @ X2.ltensor(word(xi))
        out += x[k] * t.element(xi, p, xi, val)
    return out


def _coords(t, c: CenterData, y):
    P = np.stack(c.projections, axis=1)
    coef, *_ = np.linalg.lstsq(P, y, rcond=None)
    resid = np.max(np.abs(P @ coef - y)) if y.size else 0.0
    return coef, resid


def s_prime_action(t: TubeAlgebra, c: CenterData):
    """Matrix ``M`` with ``S'(p_j) = sum_i M[i, j] p_i``."""
    cols, worst = [], 0.0
    for p in c.projections:
        coef, res = _coords(t, c, s_prime(t, p))
        cols.append(coef)
        worst = max(worst, res)
    if worst > 1e-7:
        raise DimensionMismatch(f"S' does not preserve the center (residual {worst:.2e})")
    return np.stack(cols, axis=1)


def t_prime_action(t: TubeAlgebra, c: CenterData):
    """Matrix of ``T'`` in the projection basis; it must be diagonal."""
    th = theta(t)
    cols = []
    for p in c.projections:
        coef, _ = _coords(t, c, t.product(th, p))
        cols.append(coef)
    M = np.stack(cols, axis=1)
    off = M - np.diag(np.diag(M))
    if off.size and np.max(np.abs(off)) > 1e-7:
        raise NotDiagonal(f"T' is not diagonal on the projections (off-diagonal {np.max(np.abs(off)):.2e})")
    return M


def modular_data_from_tube(t: TubeAlgebra, c: CenterData, name=None):
    """Modular data of the center: vacuum first, ``S`` symmetric unitary, TQFT conventions.

    ``S'`` in the projection basis is ``M = D^{-1} conj(S) D`` with ``D = diag(S_{0i})``;
    the vacuum column of ``M`` is constant (``S'`` of the vacuum projection is ``1/lambda``
    times the unit).  The TQFT data are the complex conjugates of the tube data.
    """
    from .modular import ModularData, validate_verlinde_axioms
    from .errors import AxiomFailure

    M = s_prime_action(t, c)
    Tm = t_prime_action(t, c)
    tp = np.diag(Tm)
    k = len(tp)
    candidates = []
    for v in range(k):
        if abs(tp[v] - 1) > 1e-6:
            continue
        col = M[:, v]
        if np.max(np.abs(col - col[0])) > 1e-6 or abs(col[0].imag) > 1e-6 or col[0].real <= 0:
            continue
        ratio = M[v, :] / M[:, v]
        if np.any(np.abs(ratio.imag) > 1e-6) or np.any(ratio.real <= 0):
            continue
        candidates.append(v)
    if len(candidates) != 1:
        raise VacuumNotUnique(f"{len(candidates)} vacuum candidates among {k} projections")
    v = candidates[0]
    order = [v] + [i for i in range(k) if i != v]
    M = M[np.ix_(order, order)]
    tp = tp[order]
    s0 = M[0, 0].real * np.sqrt((M[0, :] / M[:, 0]).real)
    S = np.conj(M * s0[:, None] / s0[None, :])
    md = ModularData(S=S, t=np.conj(tp), labels=[str(i) for i in range(k)],
                     name=name or f"Z({t.fs.name})", tolerance=1e-8)
    rep = validate_verlinde_axioms(md)
    if not rep.valid:
        raise AxiomFailure(rep.format(), sorted(rep.tags()))
    md.projection_order = order
    return md


def tube_inner_orthonormality_check(t: TubeAlgebra, c: CenterData, md) -> ValidationReport:
    """``<(sqrt(lambda)/d_i) p_i, (sqrt(lambda)/d_j) p_j>_Tube = delta_ij``."""
    rep = ValidationReport(subject="scaled projections under the tube inner product")
    order = getattr(md, "projection_order", list(range(len(c.projections))))
    P = [c.projections[i] for i in order]
    lam = t.lam
    d = md.dims
    k = len(P)
    G = np.zeros((k, k), dtype=complex)
    for i in range(k):
        for j in range(k):
            G[i, j] = t.inner(np.sqrt(lam) / d[i] * P[i], np.sqrt(lam) / d[j] * P[j])
    dev = float(np.max(np.abs(G - np.eye(k)))) if k else 0.0
    rep.record("orthonormality", dev)
    if dev > 1e-8:
        rep.fail("orthonormal", f"max deviation {dev:.3e}")
    return rep


def derive_modular(fs: FusionSystem, seed: int = 0, name=None):
    """Full pipeline: tube, center, projections, modular data."""
    t = build_tube(fs)
    c = center(t, seed=seed)
    return modular_data_from_tube(t, c, name=name)


def dump(t: TubeAlgebra) -> dict:
    """Diagnostic listing: basis and sparsity of the structure constants."""
    names = t.fs.names
    nz = np.abs(t.mult) > 1e-12
    return {
        "system": t.fs.name,
        "dim": t.dim,
        "basis": [{"xi": names[b.xi], "zeta": names[b.zeta], "eta": names[b.eta],
                   "p": names[b.p], "b1": b.b1, "b2": b.b2} for b in t.basis],
        "nonzero_structure_constants": int(nz.sum()),
        "density": float(nz.mean()) if t.dim else 0.0,
    }


def dump_json(t: TubeAlgebra) -> str:
    return json.dumps(dump(t), indent=1)
