"""Lens tables and comparison of computed invariants against published value tables.

Orientation rule: a table is compared under one global convention, either the data as
loaded ("as-is") or its complex conjugate ("conjugated").  Both are tried and the one that
matches more rows wins; ties go to the smaller worst deviation, then to "as-is".  The
choice is never made row by row.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import surgery as sg
from .errors import BadInput
from .modular import ModularData, conjugate

CONVENTIONS = ("as-is", "conjugated")


def evaluate_row(md: ModularData, kind: str, args) -> complex:
    """Evaluate one table row kind on ``md``."""
    args = [int(a) for a in args]
    if kind == "lens":
        return sg.lens_invariant(md, *args)
    if kind == "lens_p1":
        return sg.lens_closed_form_p1(md, args[0])
    if kind == "lens_p2":
        return sg.lens_closed_form_p2(md, args[0])
    if kind == "lens_p3":
        return sg.lens_closed_form_p3(md, args[0])
    if kind == "brieskorn":
        return sg.brieskorn_invariant(md, *args)
    if kind == "star":
        return sg.star_invariant(md, args[0], args[1:])
    if kind == "chain":
        return sg.chain_invariant(md, args)
    if kind == "s3":
        return sg.s3_invariant(md)
    raise BadInput(f"unknown row kind {kind!r}")


@dataclass
class RowResult:
    manifold: str
    expected: complex
    computed: complex
    deviation: float
    known_discrepancy: str | None = None

    def ok(self, tol):
        return self.deviation < tol


@dataclass
class Comparison:
    table: str
    data: str
    convention: str
    tolerance: float
    rows: list = field(default_factory=list)

    @property
    def max_deviation(self) -> float:
        return max((r.deviation for r in self.rows), default=0.0)

    @property
    def matched(self) -> int:
        return sum(r.ok(self.tolerance) for r in self.rows)

    @property
    def unexpected_failures(self):
        return [r for r in self.rows if not r.ok(self.tolerance) and not r.known_discrepancy]

    @property
    def known_failures(self):
        return [r for r in self.rows if not r.ok(self.tolerance) and r.known_discrepancy]

    def format(self) -> str:
        lines = [f"compare {self.data} against {self.table}: convention {self.convention}, "
                 f"{self.matched}/{len(self.rows)} rows within {self.tolerance:.0e}, "
                 f"max deviation {self.max_deviation:.3e}"]
        for r in self.rows:
            flag = "ok  " if r.ok(self.tolerance) else ("KNOWN" if r.known_discrepancy else "FAIL")
            lines.append(f"  {flag} {r.manifold:<14} expected {_c(r.expected):<28} "
                         f"computed {_c(r.computed):<28} dev {r.deviation:.2e}")
            if r.known_discrepancy and not r.ok(self.tolerance):
                lines.append(f"       note: {r.known_discrepancy}")
        return "\n".join(lines)


def _c(z):
    return f"{z.real:+.10f}{z.imag:+.10f}i"


def compare_table(md: ModularData, table: dict, tol: float = 1e-8, convention: str | None = None
                  ) -> Comparison:
    """Compare ``md`` against a loaded value table (see :func:`tvo.fixtures.load_table`)."""
    options = [convention] if convention else list(CONVENTIONS)
    best = None
    for conv in options:
        data = conjugate(md) if conv == "conjugated" else md
        cmp = Comparison(table.get("name", "?"), md.name, conv, tol)
        for row in table["rows"]:
            v = evaluate_row(data, row["kind"], row["args"])
            cmp.rows.append(RowResult(row["manifold"], row["value"], v, abs(v - row["value"]),
                                      row.get("known_discrepancy")))
        key = (-cmp.matched, cmp.max_deviation)
        if best is None or key < best[0]:
            best = (key, cmp)
    return best[1]


# ----------------------------------------------------------------------------------
# lens tables
# ----------------------------------------------------------------------------------

def parse_range(text: str):
    """``"1..12"`` or ``"3,5,7"`` or ``"4"`` to a list of ints."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def lens_pairs(ps, qs="all"):
    """``(p, q)`` with ``gcd(p, q) = 1`` and ``1 <= q < p``; ``p = 1`` gives ``(1, 0)`` (the 3-sphere)."""
    pairs = []
    for p in ps:
        if p == 1:
            pairs.append((1, 0))
            continue
        cand = range(1, p) if qs == "all" else [q for q in qs if 1 <= q < p]
        pairs.extend((p, q) for q in cand if math.gcd(p, q) == 1)
    return pairs


def lens_table(md: ModularData, ps, qs="all"):
    rows = []
    for p, q in lens_pairs(ps, qs):
        v = sg.lens_invariant(md, p, q)
        pres = sg.Chain((1,)) if (p, q) == (1, 0) else sg.Chain(tuple(sg.continued_fraction(p, q)))
        rows.append({"p": p, "q": q, "manifold": f"L({p},{q})", "coefficients": list(pres.coefficients),
                     "value": v})
    return rows
