"""Intertwiner calculus for a fusion system in sector notation.

An object is a *word*: a tuple of non-unit labels ``(x1, ..., xn)`` standing for the
composite endomorphism ``x1 x2 ... xn`` (the empty word is the identity sector).  A
morphism ``Hom(X -> Y)`` is stored as one matrix per simple ``c``, expressed in the
left-comb tree bases of ``Hom(c -> X)`` and ``Hom(c -> Y)``::

    f T^X_j = sum_i M_c[i, j] T^Y_i

Sector notation maps onto this as follows: ``rho(V)`` is ``1_rho (x) V`` (left tensoring),
and a bare ``V in (sigma, tau)`` acting on a longer word ``sigma theta`` is ``V (x) 1_theta``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import TypeMismatch
from .system import FusionSystem

Word = Tuple[int, ...]


def word(*labels) -> Word:
    """Normalize labels into a word (drops the unit)."""
    out = []
    for x in labels:
        if isinstance(x, (tuple, list)):
            out.extend(int(y) for y in x if y != 0)
        elif x != 0:
            out.append(int(x))
    return tuple(out)


def trees(fs: FusionSystem, w: Word):
    """Left-comb fusion trees of ``w``: ``{c: [tree, ...]}``.

    A tree is a tuple of ``(intermediate, multiplicity)`` pairs, one per vertex.
    """
    w = word(w)
    key = ("trees", w)
    hit = fs._cache.get(key)
    if hit is not None:
        return hit
    N = fs.N
    if len(w) == 0:
        out = {0: [()]}
    elif len(w) == 1:
        out = {w[0]: [()]}
    else:
        prev = trees(fs, w[:-1])
        x = w[-1]
        out = {}
        for b in sorted(prev):
            for t in prev[b]:
                for c in range(fs.rank):
                    for mu in range(N[b, x, c]):
                        out.setdefault(c, []).append(t + ((c, mu),))
        out = {c: out[c] for c in sorted(out)}
    fs._cache[key] = out
    return out


def tree_index(fs, w):
    w = word(w)
    key = ("tindex", w)
    hit = fs._cache.get(key)
    if hit is None:
        hit = {c: {t: i for i, t in enumerate(ts)} for c, ts in trees(fs, w).items()}
        fs._cache[key] = hit
    return hit


def hom_dim(fs, src: Word, tgt: Word) -> int:
    ts, tt = trees(fs, src), trees(fs, tgt)
    return sum(len(ts[c]) * len(tt[c]) for c in ts if c in tt)


def _tensor_columns(fs, z, w, cp):
    """Column labels ``(c, tree, mu)`` of ``z (x) (tree of w -> c)`` followed by ``V^{zc}_{c', mu}``."""
    N = fs.N
    cols = []
    for c, ts in trees(fs, w).items():
        for t in ts:
            for mu in range(N[z, c, cp]):
                cols.append((c, t, mu))
    return cols


def left_basis_change(fs: FusionSystem, z: int, w: Word, cp: int) -> np.ndarray:
    """Matrix expressing ``z (x) (trees of w)`` in the left-comb trees of ``(z,) + w`` to ``cp``."""
    key = ("L", z, w, cp)
    hit = fs._cache.get(key)
    if hit is not None:
        return hit
    rows = trees(fs, (z,) + w).get(cp, [])
    cols = _tensor_columns(fs, z, w, cp)
    M = np.zeros((len(rows), len(cols)), dtype=complex)
    if len(w) <= 1:
        # z (x) () is z itself; z (x) (w1) then V^{z w1} is already a left-comb tree
        for j, (c, t, mu) in enumerate(cols):
            M[rows.index(((cp, mu),) if w else ()), j] = 1.0
    else:
        wp, x = w[:-1], w[-1]
        ridx = tree_index(fs, (z,) + w)[cp]
        colsp = {}
        for j, (c, t, mu) in enumerate(cols):
            tp, (_, nu) = t[:-1], t[-1]
            b = _tree_top(wp, tp)
            blk = fs.block(z, b, x, cp)
            for (e, al, be) in blk.left:
                coef = np.conj(blk[(e, al, be), (c, nu, mu)])
                if coef == 0:
                    continue
                if e not in colsp:
                    Lp = left_basis_change(fs, z, wp, e)
                    colsp[e] = (Lp, {k: n for n, k in enumerate(_tensor_columns(fs, z, wp, e))},
                                trees(fs, (z,) + wp)[e])
                Lp, cidx, rtrees = colsp[e]
                col = Lp[:, cidx[b, tp, al]]
                for n in np.nonzero(col)[0]:
                    M[ridx[rtrees[n] + ((cp, be),)], j] += coef * col[n]
    M.setflags(write=False)
    fs._cache[key] = M
    return M


def _tree_top(w, t):
    if not t:
        return w[0] if w else 0
    return t[-1][0]


class Morphism:
    """An intertwiner ``src -> tgt`` in the left-comb tree bases.

    Supports ``@`` (composition), ``+``, ``-``, scalar ``*``, ``.adj()``.
    """

    __slots__ = ("fs", "src", "tgt", "blocks")

    def __init__(self, fs, src, tgt, blocks):
        self.fs = fs
        self.src = word(src)
        self.tgt = word(tgt)
        self.blocks = blocks

    @classmethod
    def zero(cls, fs, src, tgt):
        ts, tt = trees(fs, src), trees(fs, tgt)
        return cls(fs, src, tgt, {c: np.zeros((len(tt[c]), len(ts[c])), dtype=complex)
                                  for c in ts if c in tt})

    @classmethod
    def identity(cls, fs, w):
        w = word(w)
        return cls(fs, w, w, {c: np.eye(len(ts), dtype=complex) for c, ts in trees(fs, w).items()})

    @classmethod
    def from_vector(cls, fs, src, tgt, vec):
        out = cls.zero(fs, src, tgt)
        n = 0
        for c in sorted(out.blocks):
            blk = out.blocks[c]
            out.blocks[c] = np.asarray(vec[n:n + blk.size], dtype=complex).reshape(blk.shape)
            n += blk.size
        return out

    def vector(self):
        parts = [self.blocks[c].ravel() for c in sorted(self.blocks)]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)

    @property
    def dim(self):
        return sum(b.size for b in self.blocks.values())

    def __matmul__(self, other: "Morphism") -> "Morphism":
        if other.tgt != self.src:
            raise TypeMismatch(f"cannot compose {self.src}->{self.tgt} after {other.src}->{other.tgt}")
        ts, tt = trees(self.fs, other.src), trees(self.fs, self.tgt)
        blocks = {}
        for c in ts:
            if c not in tt:
                continue
            if c in self.blocks and c in other.blocks:
                blocks[c] = self.blocks[c] @ other.blocks[c]
            else:
                blocks[c] = np.zeros((len(tt[c]), len(ts[c])), dtype=complex)
        return Morphism(self.fs, other.src, self.tgt, blocks)

    def adj(self) -> "Morphism":
        return Morphism(self.fs, self.tgt, self.src, {c: b.conj().T for c, b in self.blocks.items()})

    def _check_same(self, other):
        if (self.src, self.tgt) != (other.src, other.tgt):
            raise TypeMismatch(f"{self.src}->{self.tgt} vs {other.src}->{other.tgt}")

    def __add__(self, other):
        self._check_same(other)
        return Morphism(self.fs, self.src, self.tgt, {c: b + other.blocks[c] for c, b in self.blocks.items()})

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, s):
        return Morphism(self.fs, self.src, self.tgt, {c: s * b for c, b in self.blocks.items()})

    __rmul__ = __mul__

    def rtensor(self, w) -> "Morphism":
        """``self (x) 1_w`` (a bare intertwiner acting on a longer word)."""
        out = self
        for x in word(w):
            out = _rtensor1(out, x)
        return out

    def ltensor(self, w) -> "Morphism":
        """``1_w (x) self``, i.e. the sector action ``w(self)``."""
        out = self
        for x in reversed(word(w)):
            out = _ltensor1(out, x)
        return out

    def scalar(self) -> complex:
        """Value of an endomorphism of a simple word (or of the empty word)."""
        if self.src != self.tgt or len(self.blocks) != 1:
            raise TypeMismatch(f"{self.src}->{self.tgt} is not an endomorphism of a simple")
        (b,) = self.blocks.values()
        if b.shape != (1, 1):
            raise TypeMismatch("not a scalar")
        return complex(b[0, 0])

    def allclose(self, other, tol=1e-9):
        self._check_same(other)
        return all(np.allclose(b, other.blocks[c], atol=tol, rtol=0) for c, b in self.blocks.items())

    def norm(self):
        return float(np.sqrt(sum(np.sum(np.abs(b) ** 2) for b in self.blocks.values())))

    def __repr__(self):
        return f"Morphism({self.src}->{self.tgt}, dim={self.dim})"


# TreeVector is the same object viewed as an element of an intertwiner space.
TreeVector = Morphism


def _rtensor1(f: Morphism, x: int) -> Morphism:
    fs = f.fs
    N = fs.N
    src, tgt = f.src + (x,), f.tgt + (x,)
    ts, tt = trees(fs, f.src), trees(fs, f.tgt)
    out = Morphism.zero(fs, src, tgt)
    si, ti = tree_index(fs, src), tree_index(fs, tgt)
    for c, blk in f.blocks.items():
        for cp in range(fs.rank):
            for mu in range(N[c, x, cp]):
                if cp not in out.blocks:
                    continue
                rows = [ti[cp][_extend(f.tgt, t, cp, mu)] for t in tt[c]]
                cols = [si[cp][_extend(f.src, t, cp, mu)] for t in ts[c]]
                out.blocks[cp][np.ix_(rows, cols)] += blk
    return out


def _extend(w, t, cp, mu):
    # appending a letter to the empty word creates no vertex
    return t + ((cp, mu),) if w else t


def _ltensor1(f: Morphism, z: int) -> Morphism:
    fs = f.fs
    N = fs.N
    src, tgt = (z,) + f.src, (z,) + f.tgt
    out = Morphism.zero(fs, src, tgt)
    ts = trees(fs, f.src)
    for cp in out.blocks:
        cs = _tensor_columns(fs, z, f.src, cp)
        ct = _tensor_columns(fs, z, f.tgt, cp)
        ci_s = {k: n for n, k in enumerate(cs)}
        D = np.zeros((len(ct), len(cs)), dtype=complex)
        for c, blk in f.blocks.items():
            for mu in range(N[z, c, cp]):
                rows = [n for n, (cc, t, m) in enumerate(ct) if cc == c and m == mu]
                cols = [ci_s[c, t, mu] for t in ts[c]]
                D[np.ix_(rows, cols)] = blk
        Ls = left_basis_change(fs, z, f.src, cp)
        Lt = left_basis_change(fs, z, f.tgt, cp)
        out.blocks[cp] = Lt @ D @ Ls.conj().T
    return out


# ----------------------------------------------------------------------------------
# elementary intertwiners
# ----------------------------------------------------------------------------------

def vertex(fs, a, b, c, mu=0) -> Morphism:
    """The basis vector ``V^{ab}_{c,mu}`` of ``(c, a b)`` (unit legs give identities)."""
    if fs.N[a, b, c] <= mu:
        raise TypeMismatch(f"N[{a}][{b}][{c}] = {fs.N[a, b, c]} has no multiplicity index {mu}")
    src, tgt = word(c), word(a, b)
    out = Morphism.zero(fs, src, tgt)
    if len(tgt) < 2:
        out.blocks[c][0, 0] = 1.0
    else:
        out.blocks[c][tree_index(fs, tgt)[c][((c, mu),)], 0] = 1.0
    return out


def cup(fs, x) -> Morphism:
    """``R_x in (id, xbar x)``."""
    xb = fs.dual(x)
    return fs.r[x] * vertex(fs, xb, x, 0)


def cupbar(fs, x) -> Morphism:
    """``Rbar_x in (id, x xbar)``."""
    xb = fs.dual(x)
    return fs.rbar[x] * vertex(fs, x, xb, 0)


def hom_basis(fs, src, tgt):
    """Matrix-unit basis of ``Hom(src -> tgt)``: ``[(c, i, j, Morphism), ...]``."""
    src, tgt = word(src), word(tgt)
    z = Morphism.zero(fs, src, tgt)
    out = []
    for c in sorted(z.blocks):
        rows, cols = z.blocks[c].shape
        for i in range(rows):
            for j in range(cols):
                m = Morphism.zero(fs, src, tgt)
                m.blocks[c][i, j] = 1.0
                out.append((c, i, j, m))
    return out


# ----------------------------------------------------------------------------------
# expression trees
# ----------------------------------------------------------------------------------

class Expr:
    def evaluate(self, fs) -> Morphism:
        raise NotImplementedError

    def __matmul__(self, other):
        return Compose(self, other)

    def adj(self):
        return Adjoint(self)


@dataclass(frozen=True)
class Basis(Expr):
    """Trivalent basis vector ``V^{ab}_{c,mu}``."""
    a: int
    b: int
    c: int
    mu: int = 0

    def evaluate(self, fs):
        return vertex(fs, self.a, self.b, self.c, self.mu)


@dataclass(frozen=True)
class Identity(Expr):
    w: Word

    def evaluate(self, fs):
        return Morphism.identity(fs, self.w)


@dataclass(frozen=True)
class Cup(Expr):
    """``R_x`` (``bar=False``) or ``Rbar_x`` (``bar=True``)."""
    x: int
    bar: bool = False

    def evaluate(self, fs):
        return cupbar(fs, self.x) if self.bar else cup(fs, self.x)


@dataclass(frozen=True)
class Cap(Expr):
    """Adjoint of :class:`Cup`."""
    x: int
    bar: bool = False

    def evaluate(self, fs):
        return (cupbar(fs, self.x) if self.bar else cup(fs, self.x)).adj()


@dataclass(frozen=True)
class Adjoint(Expr):
    e: Expr

    def evaluate(self, fs):
        return self.e.evaluate(fs).adj()


@dataclass(frozen=True)
class Compose(Expr):
    """``outer @ inner`` (``inner`` acts first)."""
    outer: Expr
    inner: Expr

    def evaluate(self, fs):
        return self.outer.evaluate(fs) @ self.inner.evaluate(fs)


@dataclass(frozen=True)
class LeftTensor(Expr):
    """Sector action ``w(e)``."""
    w: Word
    e: Expr

    def evaluate(self, fs):
        return self.e.evaluate(fs).ltensor(self.w)


@dataclass(frozen=True)
class RightTensor(Expr):
    e: Expr
    w: Word

    def evaluate(self, fs):
        return self.e.evaluate(fs).rtensor(self.w)


@dataclass(frozen=True)
class Scalar(Expr):
    s: complex
    e: Expr

    def evaluate(self, fs):
        return self.s * self.e.evaluate(fs)


@dataclass(frozen=True)
class Const(Expr):
    """Wraps an already evaluated morphism."""
    m: Morphism

    def evaluate(self, fs):
        return self.m


IntertwinerExpression = Expr


def eval_expression(fs: FusionSystem, expr: Expr) -> Morphism:
    """Evaluate an intertwiner expression to its tree-basis coefficients."""
    return expr.evaluate(fs)


# ----------------------------------------------------------------------------------
# Frobenius reciprocity
# ----------------------------------------------------------------------------------

def _trivalent_labels(A: Morphism):
    if len(A.src) > 1 or len(A.tgt) > 2:
        raise TypeMismatch(f"{A.src}->{A.tgt} is not a trivalent intertwiner space")


def frobenius_tilde(fs, A: Morphism, rho: int, eta: int, zeta: int) -> Morphism:
    """``A in H^zeta_{rho eta}  ->  sqrt(d_rho d_eta / d_zeta) rhobar(A*) R_rho in H^eta_{rhobar zeta}``."""
    if A.src != word(zeta) or A.tgt != word(rho, eta):
        raise TypeMismatch(f"A is {A.src}->{A.tgt}, expected ({zeta}) -> ({rho},{eta})")
    d = fs.d
    rb = fs.dual(rho)
    s = np.sqrt(d[rho] * d[eta] / d[zeta])
    return s * (A.adj().ltensor(word(rb)) @ cup(fs, rho).rtensor(word(eta)))


def frobenius_hat(fs, A: Morphism, rho: int, eta: int, zeta: int) -> Morphism:
    """``A in H^zeta_{rho eta}  ->  sqrt(d_rho d_eta / d_zeta) A* rho(Rbar_eta) in H^rho_{zeta etabar}``."""
    if A.src != word(zeta) or A.tgt != word(rho, eta):
        raise TypeMismatch(f"A is {A.src}->{A.tgt}, expected ({zeta}) -> ({rho},{eta})")
    d = fs.d
    eb = fs.dual(eta)
    s = np.sqrt(d[rho] * d[eta] / d[zeta])
    return s * (A.adj().rtensor(word(eb)) @ cupbar(fs, eta).ltensor(word(rho)))


def inner(V: Morphism, W: Morphism) -> complex:
    """``<V, W> = W* V`` for ``V, W`` in the same trivalent space."""
    return (W.adj() @ V).scalar()


def check_duality(fs):
    """Residuals of ``R*R = Rbar*Rbar = 1`` and both zig-zag identities (``= 1/d``)."""
    worst = 0.0
    for x in range(fs.rank):
        xb = fs.dual(x)
        R, Rb = cup(fs, x), cupbar(fs, x)
        worst = max(worst, abs((R.adj() @ R).scalar() - 1), abs((Rb.adj() @ Rb).scalar() - 1))
        z1 = (Rb.adj().rtensor(word(x)) @ R.ltensor(word(x))).scalar()
        z2 = (R.adj().rtensor(word(xb)) @ Rb.ltensor(word(xb))).scalar()
        worst = max(worst, abs(z1 - 1 / fs.d[x]), abs(z2 - 1 / fs.d[x]))
    return worst


def fs_indicator(fs, x) -> complex:
    """``nu_x`` with ``Rbar_x = nu_x R_x`` for self-dual ``x`` (1 otherwise).

    ``frobenius_tilde`` applied twice returns ``nu_rho A``; ``frobenius_hat`` twice gives
    ``nu_eta A``.  In this gauge ``Rbar_x = R_xbar`` for ``x != xbar``.
    """
    if fs.dual(x) != x:
        return 1.0 + 0j
    return complex(fs.rbar[x] / fs.r[x])
