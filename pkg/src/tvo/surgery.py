"""Three-manifold invariants from modular data via chain and star surgery presentations.

All evaluators take a :class:`~tvo.modular.ModularData` with the vacuum at index 0 and use
``Z(T) v_i = t_i v_i``, ``Z(S) v_i = sum_j S_ji v_j``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

import numpy as np

from .errors import BadCongruence, BadInput, EmptyChain
from .modular import ModularData, fmt


# ----------------------------------------------------------------------------------
# presentations
# ----------------------------------------------------------------------------------

@dataclass(frozen=True)
class Chain:
    """Linear chain of unknots with framings ``a_1 .. a_n``."""
    coefficients: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(a) for a in self.coefficients))

    def describe(self):
        return {"kind": "chain", "coefficients": list(self.coefficients)}


@dataclass(frozen=True)
class Star:
    """Hub unknot with framing ``hub`` and ``r`` meridian legs with framings ``legs``."""
    hub: int
    legs: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "legs", tuple(int(p) for p in self.legs))
        if not self.legs:
            raise BadInput("a star needs at least one leg")

    def describe(self):
        return {"kind": "star", "hub": self.hub, "legs": list(self.legs)}


SurgeryPresentation = Union[Chain, Star]


@dataclass
class InvariantValue:
    value: complex
    presentation: SurgeryPresentation
    data_name: str
    convention: str = "as-is"
    manifold: str = ""

    def record(self) -> dict:
        return {
            "manifold": self.manifold,
            "presentation": self.presentation.describe(),
            "value": [float(self.value.real), float(self.value.imag)],
            "data": self.data_name,
            "convention": self.convention,
        }

    def to_json(self) -> str:
        """Canonical one-line record (17 significant digits)."""
        p = self.presentation.describe()
        pres = ", ".join(f'"{k}": {v if not isinstance(v, str) else chr(34) + v + chr(34)}'
                         for k, v in p.items())
        v = self.value
        return ('{"manifold": "%s", "presentation": {%s}, "value": [%s, %s], "data": "%s", '
                '"convention": "%s"}' % (self.manifold, pres, fmt(v.real), fmt(v.imag),
                                         self.data_name, self.convention))


# ----------------------------------------------------------------------------------
# continued fractions
# ----------------------------------------------------------------------------------

def continued_fraction(p: int, q: int):
    """Coefficients ``a_i >= 2`` with ``p/q = a_1 - 1/(a_2 - 1/(... - 1/a_n))``.

    Raises
    ------
    BadInput
        Unless ``1 <= q < p`` and ``gcd(p, q) = 1``.
    """
    p, q = int(p), int(q)
    if not (1 <= q < p) or math.gcd(p, q) != 1:
        raise BadInput(f"need gcd(p, q) = 1 and 1 <= q < p, got ({p}, {q})")
    out = []
    x = Fraction(p, q)
    while True:
        a = math.ceil(x)
        out.append(a)
        if a == x:
            break
        x = 1 / (a - x)
    if recompose(out) != Fraction(p, q):  # pragma: no cover - guarded by construction
        raise AssertionError("continued fraction does not recompose")
    return out


def recompose(coefficients) -> Fraction:
    x = Fraction(coefficients[-1])
    for a in reversed(coefficients[:-1]):
        x = a - 1 / x
    return x


# ----------------------------------------------------------------------------------
# evaluators
# ----------------------------------------------------------------------------------

def tpow(t, a: int):
    """``t**a`` for unit-modulus ``t``; negative powers use the conjugate."""
    t = np.asarray(t, dtype=complex)
    a = int(a)
    return t ** a if a >= 0 else np.conj(t) ** (-a)


def chain_invariant(md: ModularData, coefficients) -> complex:
    """``sum S_{i_1 0} t^{a_1} S_{i_1 i_2} ... t^{a_n} S_{i_n 0}`` by iterated matrix-vector products."""
    coefficients = [int(a) for a in coefficients]
    if not coefficients:
        raise EmptyChain("empty chain; use s3_invariant for the 3-sphere")
    S, t = md.S, md.t
    v = S[:, 0] * tpow(t, coefficients[0])
    for a in coefficients[1:]:
        v = (S.T @ v) * tpow(t, a)
    return complex(v @ S[:, 0])


def lens_invariant(md: ModularData, p: int, q: int) -> complex:
    """``Z(L(p, q))``.  ``L(1, 0)`` is the 3-sphere."""
    if (p, q) == (1, 0):
        return s3_invariant(md)
    return chain_invariant(md, continued_fraction(p, q))


def lens_closed_form_p1(md: ModularData, p: int) -> complex:
    """``Z(L(p,1)) = sum_i t_i^p S_{i0}^2``."""
    S0 = md.S[:, 0]
    return complex(np.sum(tpow(md.t, p) * S0 ** 2))


def lens_closed_form_p2(md: ModularData, p: int) -> complex:
    """``Z(L(p,2)) = sum_{ij} t_i^{(p+1)/2} t_j^2 S_{i0} S_{j0} S_{ij}`` for odd ``p``."""
    if p % 2 != 1:
        raise BadCongruence(f"L(p,2) needs odd p, got {p}")
    S, t = md.S, md.t
    u = tpow(t, (p + 1) // 2) * S[:, 0]
    w = tpow(t, 2) * S[:, 0]
    return complex(u @ S @ w)


def lens_closed_form_p3(md: ModularData, p: int) -> complex:
    """``Z(L(p,3))`` for ``p`` prime to 3.

    ``p = 2 (mod 3)``: ``sum_{ij} t_i^{(p+1)/3} t_j^3 S_{i0} S_{j0} S_{ij}``.

    ``p = 1 (mod 3)``: the chain ``[(p+2)/3, 2, 2]``, i.e.
    ``sum_{ijk} t_i^{(p+2)/3} t_j^2 t_k^2 S_{i0} S_{ij} S_{jk} S_{k0}``.
    """
    S, t = md.S, md.t
    S0 = S[:, 0]
    if p % 3 == 2:
        u = tpow(t, (p + 1) // 3) * S0
        w = tpow(t, 3) * S0
        return complex(u @ S @ w)
    if p % 3 == 1:
        u = tpow(t, (p + 2) // 3) * S0
        w = tpow(t, 2) * S0
        return complex(u @ S @ np.diag(tpow(t, 2)) @ S @ w)
    raise BadCongruence(f"L(p,3) needs p prime to 3, got {p}")


def lens_closed_form_p3_as_printed(md: ModularData, p: int) -> complex:
    """The ``p = 1 (mod 3)`` sum exactly as it is usually quoted,
    ``sum_{ijk} t_i^{(p+2)/3} t_j^2 t_k^2 S_{i0} S_{j0} S_{k0} S_{ij} S_{kj}``.

    Kept for comparison only; it differs from the chain ``[(p+2)/3, 2, 2]`` (see the notes
    in the README).
    """
    if p % 3 != 1:
        return lens_closed_form_p3(md, p)
    S, t = md.S, md.t
    S0 = S[:, 0]
    u = tpow(t, (p + 2) // 3) * S0
    w = tpow(t, 2) * S0
    leg_i = u @ S
    leg_k = w @ S
    return complex(np.sum(leg_i * leg_k * tpow(t, 2) * S0))


def star_invariant(md: ModularData, q: int, legs) -> complex:
    """Star link with hub framing ``q`` and leg framings ``legs``:
    ``sum_j t_j^q prod_legs (sum_i t_i^p S_{i0} S_{ij}) / S_{j0}^{r-2}``.
    """
    legs = [int(x) for x in legs]
    if not legs:
        raise BadInput("a star needs at least one leg")
    S, t = md.S, md.t
    S0 = S[:, 0]
    r = len(legs)
    prod = np.ones(md.rank, dtype=complex)
    for p in legs:
        prod = prod * ((tpow(t, p) * S0) @ S)
    return complex(np.sum(tpow(t, q) * prod / S0 ** (r - 2)))


def brieskorn_invariant(md: ModularData, p: int, q: int, r: int) -> complex:
    """Direct quadruple sum for ``Z(Sigma(p, q, r))``, kept independent of :func:`star_invariant`."""
    S, t = md.S, md.t
    S0 = S[:, 0]
    m = md.rank
    total = 0j
    tp, tq, tr = tpow(t, p), tpow(t, q), tpow(t, r)
    for l in range(m):
        inner_l = 0j
        for i in range(m):
            a = tp[i] * S0[i] * S[i, l]
            for j in range(m):
                b = a * tq[j] * S0[j] * S[j, l]
                for k in range(m):
                    inner_l += b * tr[k] * S0[k] * S[k, l]
        total += t[l] * inner_l / S0[l]
    return complex(total)


def j_star(md: ModularData, j: int, legs) -> complex:
    """Invariant of the 0-framed star link: ``prod_legs S_{i j} / S_{j0}^{r-1}``."""
    legs = list(legs)
    S = md.S
    val = complex(np.prod([S[i, j] for i in legs])) if legs else 1 + 0j
    return val / S[j, 0] ** (len(legs) - 1)


def star_from_j(md: ModularData, q: int, legs) -> complex:
    """Surgery formula assembled from :func:`j_star` (sum over hub and leg labels)."""
    import itertools

    S, t = md.S, md.t
    m = md.rank
    total = 0j
    for j in range(m):
        for labels in itertools.product(range(m), repeat=len(legs)):
            w = S[j, 0] * tpow(t, q)[j]
            for i, p in zip(labels, legs):
                w = w * S[i, 0] * tpow(t, p)[i]
            total += w * j_star(md, j, labels)
    return complex(total)


def s3_invariant(md: ModularData) -> complex:
    return chain_invariant(md, [1])


def s2xs1_invariant(md: ModularData) -> complex:
    return chain_invariant(md, [0])


def evaluate(md: ModularData, presentation: SurgeryPresentation, manifold="", convention="as-is"):
    if isinstance(presentation, Chain):
        v = chain_invariant(md, presentation.coefficients)
    else:
        v = star_invariant(md, presentation.hub, presentation.legs)
    return InvariantValue(v, presentation, md.name, convention, manifold)
