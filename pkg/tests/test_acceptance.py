"""Acceptance criteria 1-12, one PASS/FAIL/SKIP/REPORT line each.

Run under pytest (the lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.  Tolerances are pinned below.
"""
import math

import numpy as np
import pytest

from tvo.compare import compare_table, evaluate_row
from tvo.fixtures import MissingFixture, load_fixture, load_table
from tvo.fusion import validate_fusion_ring, validate_pentagon
from tvo.modular import ModularData, conjugate, equivalent, fusion_rules, validate_verlinde_axioms
from tvo.surgery import (brieskorn_invariant, chain_invariant, continued_fraction, lens_closed_form_p1,
                         lens_closed_form_p2, lens_closed_form_p3, lens_invariant)
from tvo.tube import (build_tube, center, modular_data_from_tube, structure_report, tube_dimension,
                      tube_inner_orthonormality_check)

from conftest import ACCEPTANCE_LINES, fib_modular, ising_modular, pipeline, system

TOL_PENTAGON = 1e-9
TOL_TUBE = 1e-9
TOL_AXIOMS = 1e-8
TOL_S00 = 1e-9
TOL_VERLINDE = 1e-6
TOL_ORTHO = 1e-8
TOL_ORACLE = 1e-9
TOL_SQUARE = 1e-8
TOL_PRESENT = 1e-9
TOL_UNKNOT = 1e-12
TOL_INVARIANCE = 1e-8
TOL_TABLE = 1e-8

CRIT1_SPECS = ([f"vec:{n}:{k}" for n in range(1, 6) for k in range(n)]
               + ["fibonacci", "ising", "ty:3:1:1", "ty:3:1:-1", "ty:3:2:1", "ty:3:2:-1"])
BUILTIN_SPECS = ["trivial", "fibonacci", "ising", "ty:3:1:1", "ty:3:1:-1"] + \
                [f"vec:{n}:{k}" for n in range(2, 6) for k in range(n)]


def record(n, status, text):
    line = f"[{status}] AC-{n:02d} {text}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def test_ac01_builtin_validation():
    worst, bad = 0.0, []
    for spec in CRIT1_SPECS:
        fs = system(spec)
        ring_ok = validate_fusion_ring(fs.ring).valid
        rep = validate_pentagon(fs)
        worst = max(worst, rep.residuals["pentagon"])
        if not (ring_ok and rep.valid and rep.residuals["pentagon"] < TOL_PENTAGON):
            bad.append(spec)
    ok = not bad
    record(1, "PASS" if ok else "FAIL",
           f"built-in validation: {len(CRIT1_SPECS) - len(bad)}/{len(CRIT1_SPECS)} systems, "
           f"max pentagon residual {worst:.1e} (tol {TOL_PENTAGON:.0e})")
    assert ok, bad


def test_ac02_tube_structure():
    worst_assoc = worst_star = 0.0
    dims_ok = True
    for spec in BUILTIN_SPECS:
        fs, t, _, _ = pipeline(spec)
        dims_ok &= t.dim == tube_dimension(fs)
        rep = structure_report(t)
        worst_assoc = max(worst_assoc, rep.residuals["associativity"])
        worst_star = max(worst_star, rep.residuals["star_antihomomorphism"], rep.residuals["star_involution"])
    fib_dim = pipeline("fibonacci")[1].dim
    pointed = all(pipeline(f"vec:{n}:0")[1].dim == n * n for n in range(2, 6))
    ok = dims_ok and fib_dim == 7 and pointed and worst_assoc < TOL_TUBE and worst_star < TOL_TUBE
    record(2, "PASS" if ok else "FAIL",
           f"tube structure: Fibonacci dim {fib_dim}, pointed n^2 {pointed}, associativity {worst_assoc:.1e}, "
           f"star {worst_star:.1e} (tol {TOL_TUBE:.0e})")
    assert ok


def test_ac03_modular_extraction():
    failures = []
    worst_s00 = worst_ver = 0.0
    for spec in BUILTIN_SPECS:
        fs, _, _, md = pipeline(spec)
        rep = validate_verlinde_axioms(md, TOL_AXIOMS)
        _, dev = fusion_rules(md, TOL_VERLINDE)
        worst_ver = max(worst_ver, dev)
        worst_s00 = max(worst_s00, abs(md.S[0, 0] - 1 / fs.lam))
        if not rep.valid:
            failures.append(spec)
    ranks = {s: pipeline(s)[2].rank for s in ("vec:2:0", "vec:3:0", "fibonacci")}
    ok = (not failures and worst_s00 < TOL_S00 and worst_ver < TOL_VERLINDE
          and ranks == {"vec:2:0": 4, "vec:3:0": 9, "fibonacci": 4})
    record(3, "PASS" if ok else "FAIL",
           f"modular extraction: {len(BUILTIN_SPECS) - len(failures)}/{len(BUILTIN_SPECS)} pass axioms, "
           f"|S00-1/lambda| {worst_s00:.1e}, Verlinde {worst_ver:.1e}, ranks {list(ranks.values())}")
    assert ok, failures


def test_ac04_orthonormality():
    worst = 0.0
    for spec in BUILTIN_SPECS:
        _, t, c, md = pipeline(spec)
        worst = max(worst, tube_inner_orthonormality_check(t, c, md).residuals["orthonormality"])
    ok = worst < TOL_ORTHO
    record(4, "PASS" if ok else "FAIL", f"scaled projections orthonormal: max deviation {worst:.1e} "
                                        f"(tol {TOL_ORTHO:.0e})")
    assert ok


def test_ac05_counting_oracle():
    worst, count = 0.0, 0
    for n in range(2, 6):
        md = pipeline(f"vec:{n}:0")[3]
        for p in range(2, 13):
            for q in range(1, p):
                if math.gcd(p, q) == 1:
                    worst = max(worst, abs(lens_invariant(md, p, q) - math.gcd(p, n) / n))
                    count += 1
        worst = max(worst, abs(brieskorn_invariant(md, 2, 3, 5) - 1 / n))
    ok = worst < TOL_ORACLE
    record(5, "PASS" if ok else "FAIL", f"counting oracle: {count} lens values and 4 Brieskorn values, "
                                        f"max deviation {worst:.1e} (tol {TOL_ORACLE:.0e})")
    assert ok


def test_ac06_tensor_square():
    worst, count = 0.0, 0
    for spec, single in (("fibonacci", fib_modular), ("ising", ising_modular)):
        md = pipeline(spec)[3]
        C = ModularData(*single())
        for p in range(2, 13):
            for q in (1, 2, 3):
                if q < p and math.gcd(p, q) == 1:
                    cf = continued_fraction(p, q)
                    worst = max(worst, abs(lens_invariant(md, p, q) - abs(chain_invariant(C, cf)) ** 2))
                    count += 1
    ok = worst < TOL_SQUARE
    record(6, "PASS" if ok else "FAIL", f"tensor-square factorization: {count} values, max deviation "
                                        f"{worst:.1e} (tol {TOL_SQUARE:.0e})")
    assert ok


def _pairs(count=100, seed=7):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        p, q = int(rng.integers(2, 51)), int(rng.choice([1, 2, 3]))
        if q < p and math.gcd(p, q) == 1:
            out.append((p, q))
    return out


def test_ac07_presentation_invariance():
    forms = {1: lens_closed_form_p1, 2: lens_closed_form_p2, 3: lens_closed_form_p3}
    pairs = _pairs()
    worst = worst_unknot = 0.0
    for spec in BUILTIN_SPECS:
        md = pipeline(spec)[3]
        for p, q in pairs:
            worst = max(worst, abs(lens_invariant(md, p, q) - forms[q](md, p)))
        s00 = md.S[0, 0]
        worst_unknot = max(worst_unknot, abs(chain_invariant(md, [1]) - s00), abs(chain_invariant(md, [-1]) - s00))
        worst_unknot = max(worst_unknot, abs(chain_invariant(md, [0]) - 1))
    ok = worst < TOL_PRESENT and worst_unknot < TOL_PRESENT
    ok0 = max(abs(chain_invariant(pipeline(s)[3], [0]) - 1) for s in BUILTIN_SPECS) < TOL_UNKNOT
    record(7, "PASS" if ok and ok0 else "FAIL",
           f"presentation invariance: {len(pairs)} seeded (p,q) x {len(BUILTIN_SPECS)} systems, chain vs closed "
           f"form {worst:.1e}, unknots {worst_unknot:.1e}")
    assert ok and ok0


def test_ac08_basis_and_seed_invariance():
    rng = np.random.default_rng(8)
    bad = []
    for spec in ["fibonacci", "ising", "ty:3:1:1", "ty:3:1:-1", "vec:3:1", "vec:4:2"]:
        md0 = pipeline(spec)[3]
        t2 = build_tube(system(spec).regauge(rng))
        if not equivalent(md0, modular_data_from_tube(t2, center(t2, seed=11)), TOL_INVARIANCE):
            bad.append(f"{spec}/retree")
        for seed in (1, 2, 3):
            if not equivalent(md0, pipeline(spec, seed)[3], TOL_INVARIANCE):
                bad.append(f"{spec}/seed{seed}")
    ok = not bad
    record(8, "PASS" if ok else "FAIL", f"basis and seed invariance: 6 systems, random retree + 3 reseeds, "
                                        f"{len(bad)} mismatches (tol {TOL_INVARIANCE:.0e})")
    assert ok, bad


def _fixture(n, name):
    try:
        return load_fixture(name)
    except MissingFixture as exc:
        record(n, "SKIP", f"fixture-gated: {exc}")
        pytest.skip(str(exc))


def test_ac09_haagerup():
    md = _fixture(9, "haagerup")
    cmp = compare_table(md, load_table("haagerup_table"), TOL_TABLE)
    star = evaluate_row(md if cmp.convention == "as-is" else conjugate(md), "star", [1, 2, 3, 5])
    star_ok = abs(star - (7 / 6 - 13 ** 0.5 / 26)) < TOL_TABLE
    ok = cmp.matched == len(cmp.rows) and star_ok
    record(9, "PASS" if ok else "FAIL", f"Haagerup: {cmp.matched}/{len(cmp.rows)} rows (lens, Sigma(2,3,5), S3), "
                                        f"convention {cmp.convention}, max deviation {cmp.max_deviation:.1e}")
    assert ok


def test_ac10_generalized_e6():
    tables = ["e6_z3", "e6_z4", "e6_z2z2", "e6_z5"]
    missing = []
    results = []
    for name in tables:
        try:
            md = load_fixture(name)
        except MissingFixture:
            missing.append(name)
            continue
        results.append(compare_table(md, load_table(f"{name}_table"), TOL_TABLE))
    if missing:
        record(10, "SKIP", f"generalized E6: fixtures not shipped for {', '.join(missing)}; "
                           f"value tables are present, modular data is not reproducible here")
        pytest.skip(f"fixture-gated: {missing}")
    ok = all(c.matched == len(c.rows) for c in results)
    record(10, "PASS" if ok else "FAIL", "generalized E6: " + ", ".join(
        f"{c.table} {c.matched}/{len(c.rows)}" for c in results))
    assert ok


@pytest.mark.xfail(strict=True, reason="one published E6 Brieskorn entry, Sigma(2,5,5), is not reproduced")
def test_ac11_e6_double():
    md = _fixture(11, "e6")
    cmp = compare_table(md, load_table("e6_table"), TOL_TABLE)
    lens = [r for r in cmp.rows if not r.manifold.startswith("Sigma")]
    bries = [r for r in cmp.rows if r.manifold.startswith("Sigma")]
    lens_ok = sum(r.ok(TOL_TABLE) for r in lens)
    bries_ok = sum(r.ok(TOL_TABLE) for r in bries)
    ok = lens_ok == len(lens) and bries_ok == len(bries)
    missed = [r.manifold for r in bries if not r.ok(TOL_TABLE)]
    record(11, "PASS" if ok else "FAIL",
           f"E6 double ({cmp.convention}): closed forms {lens_ok}/{len(lens)}, Brieskorn {bries_ok}/{len(bries)}"
           + (f"; not reproduced: {', '.join(missed)}" if missed else ""))
    assert ok


def test_ac12_d5_exploratory():
    tab = load_table("d5_table")
    candidates = ["ty:3:1:1", "ty:3:1:-1", "ty:3:2:1", "ty:3:2:-1", "vec:3:0", "vec:3:1", "vec:3:2"]
    extra = [f"vec:6:{k}" for k in range(6)]
    found = []
    lines = []
    for spec in candidates + extra:
        md = pipeline(spec)[3]
        cmp = compare_table(md, tab, TOL_TABLE)
        lines.append(f"{spec} {cmp.matched}/{len(cmp.rows)}")
        if cmp.matched == len(cmp.rows):
            found.append(f"{spec} ({cmp.convention})")
    named = [s for s in found if not s.startswith("vec:6")]
    record(12, "REPORT", "D5(1) row: listed candidates match " + (", ".join(named) if named else "none")
           + "; full match from " + (", ".join(found) if found else "none") + " [" + "; ".join(lines) + "]")


if __name__ == "__main__":
    import sys

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_ac")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except pytest.skip.Exception:
            pass
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
