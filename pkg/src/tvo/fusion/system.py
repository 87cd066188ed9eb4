"""Fusion systems: a fusion ring together with unitary F-symbols.

Conventions
-----------
Trivalent vertices ``V^{ab}_{c,mu} : c -> a b`` are isometries (``V* V = 1``) and
``sum V V* = 1``.  The F-symbol block ``F^{abc}_d`` re-expands left trees in right trees::

    (V^{ab}_{e,alpha} (x) 1_c) V^{ec}_{d,beta}
        = sum_{f,gamma,delta} F^{abc}_d[(e,alpha,beta), (f,gamma,delta)]
                              (1_a (x) V^{bc}_{f,gamma}) V^{af}_{d,delta}

Vertices with a unit leg are identities, so every block with ``a``, ``b`` or ``c`` equal to
the unit is the identity matrix.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from ..errors import MissingEntry, ValidationReport
from .ring import FusionRing, QuantumDims, quantum_dims, validate_fusion_ring

DEFAULT_TOL = 1e-9


class FBlock:
    """Dense F-matrix for one admissible quadruple ``(a, b, c, d)``."""

    __slots__ = ("left", "right", "matrix", "_li", "_ri")

    def __init__(self, left, right, matrix):
        self.left = tuple(left)
        self.right = tuple(right)
        self.matrix = np.asarray(matrix, dtype=complex)
        self.matrix.setflags(write=False)
        self._li = {k: n for n, k in enumerate(self.left)}
        self._ri = {k: n for n, k in enumerate(self.right)}

    def __getitem__(self, key):
        lk, rk = key
        i = self._li.get(lk)
        j = self._ri.get(rk)
        if i is None or j is None:
            return 0.0
        return self.matrix[i, j]

    def row(self, lk):
        return self._li[lk]

    def col(self, rk):
        return self._ri[rk]


def left_keys(N, a, b, c, d):
    return [(e, al, be) for e in range(N.shape[0])
            for al in range(N[a, b, e]) for be in range(N[e, c, d])]


def right_keys(N, a, b, c, d):
    return [(f, ga, de) for f in range(N.shape[0])
            for ga in range(N[b, c, f]) for de in range(N[a, f, d])]


def admissible_quadruples(N):
    r = N.shape[0]
    for a, b, c, d in itertools.product(range(r), repeat=4):
        if any(N[a, b, e] and N[e, c, d] for e in range(r)):
            yield a, b, c, d


class FusionSystem:
    """A finite system: fusion ring, dimensions, F-symbols and duality coefficients.

    Instances are treated as immutable; the only mutable state is an internal memo of
    tree bases, which is a pure cache.

    Parameters
    ----------
    ring : FusionRing
    F : dict
        Maps ``(a, b, c, d)`` to :class:`FBlock`.  Only admissible quadruples appear.
    name : str
    tolerance : float
    phases : dict, optional
        Exact F values for pointed systems, as :class:`fractions.Fraction` turns,
        keyed like ``F``.  Used to check the pentagon identity exactly.
    """

    def __init__(self, ring: FusionRing, F, name="", tolerance=DEFAULT_TOL, phases=None,
                 dims: QuantumDims | None = None):
        self.ring = ring
        self.F = dict(F)
        self.name = name
        self.tolerance = float(tolerance)
        self.phases = dict(phases) if phases is not None else None
        self.dims = dims if dims is not None else quantum_dims(ring)
        self._cache = {}
        self.r, self.rbar = self._duality_coefficients()

    # ring passthroughs
    @property
    def rank(self):
        return self.ring.rank

    @property
    def N(self):
        return self.ring.N

    @property
    def d(self):
        return self.dims.d

    @property
    def lam(self):
        return self.dims.lam

    def dual(self, i):
        return self.ring.duals[i]

    @property
    def names(self):
        return self.ring.names

    def block(self, a, b, c, d) -> FBlock:
        try:
            return self.F[a, b, c, d]
        except KeyError:
            raise MissingEntry(f"no F-block for ({a},{b},{c};{d})") from None

    def _duality_coefficients(self):
        # R_rho = V^{rho-bar rho}_0, Rbar_rho = rbar * V^{rho rho-bar}_0 with the phase fixed
        # by Rbar* rho(R) = 1/d.
        r = np.ones(self.rank, dtype=complex)
        rbar = np.ones(self.rank, dtype=complex)
        for x in range(1, self.rank):
            xb = self.dual(x)
            try:
                f00 = self.block(x, xb, x, x)[(0, 0, 0), (0, 0, 0)]
            except MissingEntry:
                continue
            if abs(f00) > 0:
                z = 1.0 / (self.d[x] * f00)
                rbar[x] = z / abs(z)
        # For a pair x != xbar move the phase so that Rbar_x = R_xbar; the zig-zag products are
        # unchanged and the Frobenius maps then square to the identity.  A self-dual x keeps
        # Rbar_x = nu_x R_x with nu_x = +-1 its Frobenius-Schur indicator.
        for x in range(1, self.rank):
            xb = self.dual(x)
            if x < xb:
                r[xb] = rbar[x]
                rbar[xb] = 1.0
        r.setflags(write=False)
        rbar.setflags(write=False)
        return r, rbar

    def __repr__(self):
        return f"FusionSystem({self.name!r}, labels={self.names})"

    # -- gauge / relabel ------------------------------------------------------------
    def regauge(self, rng) -> "FusionSystem":
        """Apply random unitaries to every vertex space ``B^c_{ab}`` with ``a, b`` non-unit.

        Returns a new system describing the same category in the new tree bases.
        """
        N = self.N
        U = {}
        for a, b, c in itertools.product(range(1, self.rank), range(1, self.rank), range(self.rank)):
            n = int(N[a, b, c])
            if n:
                z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
                q, rr = np.linalg.qr(z)
                U[a, b, c] = q * (np.diag(rr) / np.abs(np.diag(rr)))

        def u(a, b, c):
            n = int(N[a, b, c])
            return U.get((a, b, c), np.eye(n))

        newF = {}
        for (a, b, c, d), blk in self.F.items():
            A = np.zeros((len(blk.left),) * 2, dtype=complex)
            for i, (e, al, be) in enumerate(blk.left):
                for j, (e2, al2, be2) in enumerate(blk.left):
                    if e == e2:
                        A[j, i] = u(a, b, e)[al2, al] * u(e, c, d)[be2, be]
            B = np.zeros((len(blk.right),) * 2, dtype=complex)
            for i, (f, ga, de) in enumerate(blk.right):
                for j, (f2, ga2, de2) in enumerate(blk.right):
                    if f == f2:
                        B[j, i] = u(b, c, f)[ga2, ga] * u(a, f, d)[de2, de]
            newF[a, b, c, d] = FBlock(blk.left, blk.right, A.T @ blk.matrix @ B.conj())
        return FusionSystem(self.ring, newF, name=self.name + "~", tolerance=self.tolerance,
                            dims=self.dims)

    def relabel(self, perm) -> "FusionSystem":
        """Rename label ``i`` to ``perm[i]`` (``perm[0]`` must be 0)."""
        perm = list(perm)
        if perm[0] != 0 or sorted(perm) != list(range(self.rank)):
            raise ValueError("perm must be a permutation fixing 0")
        inv = np.argsort(perm)
        N = self.N[np.ix_(inv, inv, inv)]
        duals = [perm[self.dual(inv[i])] for i in range(self.rank)]
        names = [self.names[inv[i]] for i in range(self.rank)]
        ring = FusionRing(N, duals, names)
        newF = {}
        for (a, b, c, d), blk in self.F.items():
            key = (perm[a], perm[b], perm[c], perm[d])
            left = [(perm[e], al, be) for e, al, be in blk.left]
            right = [(perm[f], ga, de) for f, ga, de in blk.right]
            lo = sorted(range(len(left)), key=lambda i: left[i])
            ro = sorted(range(len(right)), key=lambda i: right[i])
            newF[key] = FBlock([left[i] for i in lo], [right[i] for i in ro],
                               blk.matrix[np.ix_(lo, ro)])
        phases = None
        if self.phases is not None:
            phases = {tuple(perm[x] for x in k): v for k, v in self.phases.items()}
        return FusionSystem(ring, newF, name=self.name, tolerance=self.tolerance, phases=phases)


def build_system(ring: FusionRing, values, name="", tolerance=DEFAULT_TOL, default_one=False,
                 phases=None) -> FusionSystem:
    """Assemble F-blocks from sparse entries.

    ``values`` maps ``(a, b, c, d, e, alpha, beta, f, gamma, delta)`` to a complex number.
    With ``default_one``, unspecified 1x1 blocks and blocks with a unit leg are filled in
    with their canonical value (1, respectively the identity); entries that are otherwise
    unspecified are zero.
    """
    N = ring.N
    grouped = {}
    for key, val in values.items():
        grouped.setdefault(tuple(key[:4]), {})[tuple(key[4:])] = complex(val)
    F = {}
    for q in admissible_quadruples(N):
        a, b, c, d = q
        left = left_keys(N, *q)
        right = right_keys(N, *q)
        given = grouped.get(q)
        if given is None and not default_one:
            continue
        M = np.zeros((len(left), len(right)), dtype=complex)
        if given is None:
            if 0 in (a, b, c):
                M = _unit_block(q, left, right)
            elif len(left) == 1 and len(right) == 1:
                M[0, 0] = 1.0
            else:
                continue
        else:
            li = {k: i for i, k in enumerate(left)}
            ri = {k: i for i, k in enumerate(right)}
            for (e, al, be, f, ga, de), val in given.items():
                try:
                    M[li[e, al, be], ri[f, ga, de]] = val
                except KeyError:
                    raise ValueError(f"F entry {q + (e, al, be, f, ga, de)} is not admissible") from None
        F[q] = FBlock(left, right, M)
    return FusionSystem(ring, F, name=name, tolerance=tolerance, phases=phases)


def _unit_pairing(q, lk):
    a, b, c, d = q
    e, al, be = lk
    if a == 0:
        return (d, be, 0)
    if b == 0:
        return (c, 0, be)
    return (b, 0, al)


def _unit_block(q, left, right):
    ri = {k: i for i, k in enumerate(right)}
    M = np.zeros((len(left), len(right)), dtype=complex)
    for i, lk in enumerate(left):
        M[i, ri[_unit_pairing(q, lk)]] = 1.0
    return M


# ----------------------------------------------------------------------------------
# validation
# ----------------------------------------------------------------------------------

def validate_pentagon(fs: FusionSystem) -> ValidationReport:
    """Evaluate every pentagon equation and report the largest residual.

    Also checks unitarity of each block and the unit normalization.  For pointed systems
    carrying exact phases the pentagon is checked in exact rational arithmetic, so the
    residual is identically zero when it holds.
    """
    rep = ValidationReport(subject=f"pentagon {fs.name}")
    N = fs.N
    r = fs.rank
    tol = fs.tolerance
    for q in admissible_quadruples(N):
        if q not in fs.F:
            raise MissingEntry(f"admissible F-block {q} is absent")
    worst_u = 0.0
    for q, blk in fs.F.items():
        M = blk.matrix
        if M.shape[0] != M.shape[1]:
            rep.fail("unitary", f"block {q} is not square")
            continue
        worst_u = max(worst_u, float(np.max(np.abs(M @ M.conj().T - np.eye(M.shape[0]))))) if M.size else worst_u
        if 0 in q[:3]:
            dev = np.max(np.abs(M - _unit_block(q, blk.left, blk.right)))
            if dev > tol:
                rep.fail("unit", f"block {q} with a unit leg is not the identity (dev {dev:.2e})")
    rep.record("unitarity", worst_u)
    if worst_u > tol:
        rep.fail("unitary", f"F-blocks not unitary (max dev {worst_u:.2e})")

    if fs.phases is not None and _pointed(N):
        res = _pentagon_exact(fs)
        rep.record("pentagon", 0.0 if res == 0 else 1.0)
        rep.notes.append("pentagon checked in exact phase arithmetic")
        if res:
            rep.fail("pentagon", f"{res} exact pentagon equations fail")
        return rep

    worst = 0.0
    for a, b, c, d in itertools.product(range(r), repeat=4):
        for e in range(r):
            worst = max(worst, _pentagon_residual(fs, a, b, c, d, e))
    rep.record("pentagon", worst)
    if worst > tol:
        rep.fail("pentagon", f"pentagon residual {worst:.3e} exceeds tolerance {tol:.1e}")
    return rep


def _pointed(N):
    return bool(np.all(N.sum(axis=2) == 1))


def _pentagon_exact(fs):
    N = fs.N
    r = fs.rank
    prod_of = lambda a, b: int(np.argmax(N[a, b]))
    ph = fs.phases
    bad = 0
    for a, b, c, d in itertools.product(range(r), repeat=4):
        ab = prod_of(a, b)
        bc = prod_of(b, c)
        cd = prod_of(c, d)
        abc = prod_of(ab, c)
        bcd = prod_of(bc, d)
        e = prod_of(abc, d)
        lhs = ph[ab, c, d, e] + ph[a, b, cd, e]
        rhs = ph[a, b, c, abc] + ph[a, bc, d, e] + ph[b, c, d, bcd]
        if (lhs - rhs) % 1 != 0:
            bad += 1
    return bad


def _pentagon_residual(fs, a, b, c, d, e):
    N = fs.N
    r = fs.rank
    # initial basis: (ab->x,al)(xc->y,be)(yd->e,ga); final: (cd->z,de)(bz->w,ze)(aw->e,et)
    init = [(x, al, y, be, ga) for x in range(r) for al in range(N[a, b, x])
            for y in range(r) for be in range(N[x, c, y]) for ga in range(N[y, d, e])]
    if not init:
        return 0.0
    fin = [(z, de, w, ze, et) for z in range(r) for de in range(N[c, d, z])
           for w in range(r) for ze in range(N[b, z, w]) for et in range(N[a, w, e])]
    fi = {k: i for i, k in enumerate(fin)}
    P1 = np.zeros((len(init), len(fin)), dtype=complex)
    P2 = np.zeros_like(P1)
    for i, (x, al, y, be, ga) in enumerate(init):
        b1 = fs.block(x, c, d, e)
        for (z, de, ep) in b1.right:
            v1 = b1[(y, be, ga), (z, de, ep)]
            if v1 == 0:
                continue
            b2 = fs.block(a, b, z, e)
            for (w, ze, et) in b2.right:
                P1[i, fi[z, de, w, ze, et]] += v1 * b2[(x, al, ep), (w, ze, et)]
        b3 = fs.block(a, b, c, y)
        for (u, ka, mu) in b3.right:
            v3 = b3[(x, al, be), (u, ka, mu)]
            if v3 == 0:
                continue
            b4 = fs.block(a, u, d, e)
            for (w, nu, et) in b4.right:
                v4 = b4[(y, mu, ga), (w, nu, et)]
                if v4 == 0:
                    continue
                b5 = fs.block(b, c, d, w)
                for (z, de, ze) in b5.right:
                    P2[i, fi[z, de, w, ze, et]] += v3 * v4 * b5[(u, ka, nu), (z, de, ze)]
    return float(np.max(np.abs(P1 - P2)))


def validate_system(fs: FusionSystem) -> ValidationReport:
    """Ring axioms, dimension equations, F-block unitarity/normalization and the pentagon."""
    rep = validate_fusion_ring(fs.ring)
    rep.subject = f"fusion system {fs.name}"
    d = fs.d
    resid = np.einsum("ijk,k->ij", fs.N, d) - np.outer(d, d)
    rep.record("dims", np.max(np.abs(resid)))
    if np.max(np.abs(resid)) > fs.tolerance * max(1.0, float(np.max(d)) ** 2):
        rep.fail("dims", "d_i d_j != sum_k N_ij^k d_k")
    for i in range(fs.rank):
        if abs(d[fs.dual(i)] - d[i]) > fs.tolerance:
            rep.fail("dims", f"d[dual({i})] != d[{i}]")
        if d[i] < 1 - fs.tolerance:
            rep.fail("dims", f"d[{i}] < 1")
    if not rep.valid:
        return rep
    try:
        rep.merge(validate_pentagon(fs))
    except MissingEntry as exc:
        rep.fail("missing", str(exc))
        return rep
    worst = 0.0
    for x in range(1, fs.rank):
        f00 = fs.block(x, fs.dual(x), x, x)[(0, 0, 0), (0, 0, 0)]
        worst = max(worst, abs(abs(f00) - 1 / d[x]))
    rep.record("duality", worst)
    if worst > fs.tolerance:
        rep.fail("duality", "|F^{x xbar x}_x[0,0]| != 1/d_x")
    return rep


def exact_phase(turns: Fraction) -> complex:
    """``exp(2 pi i turns)`` evaluated from the reduced fraction, so equal angles agree bitwise."""
    t = Fraction(turns) % 1
    if t == 0:
        return 1.0 + 0.0j
    if t == Fraction(1, 2):
        return -1.0 + 0.0j
    if t == Fraction(1, 4):
        return 1j
    if t == Fraction(3, 4):
        return -1j
    ang = 2 * np.pi * float(t)
    return complex(np.cos(ang), np.sin(ang))
