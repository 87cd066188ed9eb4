"""Built-in fusion systems used for testing and for the self-contained examples."""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .ring import FusionRing
from .system import FusionSystem, build_system, exact_phase


def _cyclic_ring(n):
    N = np.zeros((n, n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            N[a, b, (a + b) % n] = 1
    return FusionRing(N, [(-a) % n for a in range(n)], [str(a) for a in range(n)])


def vec_omega_cyclic(n: int, k: int = 0) -> FusionSystem:
    """Pointed system ``Vec(Z/n)`` twisted by the 3-cocycle of class ``k``.

    ``F^{abc} = exp(2 pi i k a (b + c - [b + c]) / n**2)``, where ``[x]`` is ``x mod n``.
    The phases are kept as exact fractions so the pentagon is checked without rounding.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    k %= n
    ring = _cyclic_ring(n)
    values, phases = {}, {}
    for a in range(n):
        for b in range(n):
            for c in range(n):
                d = (a + b + c) % n
                turns = Fraction(k * a * (b + c - (b + c) % n), n * n) % 1
                phases[a, b, c, d] = turns
                values[a, b, c, d, (a + b) % n, 0, 0, (b + c) % n, 0, 0] = exact_phase(turns)
    return build_system(ring, values, name=f"vec(Z/{n},{k})", phases=phases)


def trivial() -> FusionSystem:
    """The rank-one system (only the unit)."""
    return vec_omega_cyclic(1, 0)


def fibonacci() -> FusionSystem:
    """Fibonacci system ``tau * tau = 1 + tau`` with the real unitary F-matrix."""
    N = np.zeros((2, 2, 2), dtype=np.int64)
    N[0, 0, 0] = N[0, 1, 1] = N[1, 0, 1] = N[1, 1, 0] = N[1, 1, 1] = 1
    ring = FusionRing(N, [0, 1], ["1", "tau"])
    phi = (1 + math.sqrt(5)) / 2
    a, b = 1 / phi, 1 / math.sqrt(phi)
    M = {(0, 0): a, (0, 1): b, (1, 0): b, (1, 1): -a}
    values = {(1, 1, 1, 1, e, 0, 0, f, 0, 0): v for (e, f), v in M.items()}
    return build_system(ring, values, name="fibonacci", default_one=True)


def ising() -> FusionSystem:
    """Ising system with labels ``1, sigma, psi``."""
    N = np.zeros((3, 3, 3), dtype=np.int64)
    prod = {(0, 0): [0], (0, 1): [1], (0, 2): [2], (1, 0): [1], (2, 0): [2],
            (1, 1): [0, 2], (1, 2): [1], (2, 1): [1], (2, 2): [0]}
    for (x, y), zs in prod.items():
        for z in zs:
            N[x, y, z] = 1
    ring = FusionRing(N, [0, 1, 2], ["1", "sigma", "psi"])
    s = 1 / math.sqrt(2)
    values = {
        (1, 1, 1, 1, 0, 0, 0, 0, 0, 0): s, (1, 1, 1, 1, 0, 0, 0, 2, 0, 0): s,
        (1, 1, 1, 1, 2, 0, 0, 0, 0, 0): s, (1, 1, 1, 1, 2, 0, 0, 2, 0, 0): -s,
        (2, 1, 2, 1, 1, 0, 0, 1, 0, 0): -1.0,
        (1, 2, 1, 2, 1, 0, 0, 1, 0, 0): -1.0,
    }
    return build_system(ring, values, name="ising", default_one=True)


def tambara_yamagami(n: int, q: int = 1, sign: int = 1) -> FusionSystem:
    """Tambara-Yamagami system ``TY(Z/n, chi, sign)`` with ``chi(a, b) = exp(2 pi i q a b / n)``.

    Labels are ``0..n-1`` (the group) and ``m`` (index ``n``) with ``m * m = sum_a a``.

    Parameters
    ----------
    n : int
    q : int
        Must be a unit mod ``n`` so that ``chi`` is non-degenerate.
    sign : {+1, -1}
    """
    if n < 1 or math.gcd(q, n) != 1:
        raise ValueError("chi must be non-degenerate: gcd(q, n) = 1")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    m = n
    r = n + 1
    N = np.zeros((r, r, r), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            N[a, b, (a + b) % n] = 1
        N[a, m, m] = N[m, a, m] = N[m, m, a] = 1
    ring = FusionRing(N, [(-a) % n for a in range(n)] + [m], [str(a) for a in range(n)] + ["m"])

    def chi(a, b):
        return exact_phase(Fraction(q * a * b, n))

    values = {}
    for a in range(n):
        for b in range(n):
            values[a, m, b, m, m, 0, 0, m, 0, 0] = chi(a, b)
            values[m, a, m, b, m, 0, 0, m, 0, 0] = chi(a, b)
            values[m, m, m, m, a, 0, 0, b, 0, 0] = sign / math.sqrt(n) * np.conj(chi(a, b))
    return build_system(ring, values, name=f"TY(Z/{n},{q},{'+' if sign > 0 else '-'})",
                        default_one=True)


BUILTINS = {
    "trivial": trivial,
    "fibonacci": fibonacci,
    "ising": ising,
}


def builtin_system(spec: str) -> FusionSystem:
    """Resolve a built-in by name.

    Accepted forms are ``trivial``, ``fibonacci``, ``ising``, ``vec:N:K`` and ``ty:N:Q:SIGN``
    (``SIGN`` is ``+1``/``-1``; ``Q`` and ``SIGN`` default to 1).
    """
    parts = spec.strip().lower().split(":")
    head, args = parts[0], parts[1:]
    try:
        if head in BUILTINS and not args:
            return BUILTINS[head]()
        if head == "vec" and 1 <= len(args) <= 2:
            return vec_omega_cyclic(*(int(a) for a in args))
        if head == "ty" and 1 <= len(args) <= 3:
            return tambara_yamagami(*(int(a) for a in args))
    except ValueError as exc:
        raise ValueError(f"bad built-in {spec!r}: {exc}") from None
    raise ValueError(f"unknown built-in {spec!r}; use trivial, fibonacci, ising, vec:N:K or ty:N:Q:SIGN")
