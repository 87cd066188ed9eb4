import json
import math

import numpy as np
import pytest

from tvo.errors import AxiomFailure, NonIntegral, SchemaError
from tvo.fixtures import MissingFixture, available_fixtures, fixture_path, load_fixture
from tvo.modular import (ModularData, charge_conjugation, conjugate, dumps, equivalent, fusion_rules,
                         load, loads, save, validate_verlinde_axioms)

from conftest import ALL_SPECS, fib_modular, pipeline

TORIC_S = np.array([[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]]) / 2
TORIC_T = [1, 1, 1, -1]


def test_trivial_valid():
    md = ModularData([[1]], [1])
    rep = validate_verlinde_axioms(md)
    assert rep.valid
    assert any("(iv)" in n for n in rep.notes)


def test_toric_code_valid():
    md = ModularData(TORIC_S, TORIC_T)
    assert validate_verlinde_axioms(md).valid
    N, dev = fusion_rules(md)
    assert set(np.unique(N)) <= {0, 1} and dev < 1e-12


def test_toric_fusion_is_klein_group():
    N, _ = fusion_rules(ModularData(TORIC_S, TORIC_T))
    # every i * j is a single label and every label squares to the vacuum
    assert np.all(N.sum(axis=2) == 1)
    assert all(N[i, i, 0] == 1 for i in range(4))


def test_scaled_twist_reported():
    t = np.array(TORIC_T, dtype=complex)
    t[2] *= 1.01
    rep = validate_verlinde_axioms(ModularData(TORIC_S, t))
    assert "T-diag" in rep.tags()


def test_axiom_tags():
    S = TORIC_S.copy()
    S[0, 1] += 0.1
    assert "iia" in validate_verlinde_axioms(ModularData(S, TORIC_T)).tags()
    # a valid S with the vacuum column made complex
    S2 = TORIC_S.astype(complex) * np.array([1, 1j, 1, 1])[:, None] * np.array([1, 1j, 1, 1])[None, :]
    assert "iic1" in validate_verlinde_axioms(ModularData(S2, TORIC_T)).tags()
    # S unitary and symmetric but Verlinde numbers not integral
    th = 0.3
    R = np.array([[math.cos(th), math.sin(th)], [math.sin(th), -math.cos(th)]])
    assert "iic2" in validate_verlinde_axioms(ModularData(R, [1, 1])).tags()


def test_t0_and_ct_warnings():
    rep = validate_verlinde_axioms(ModularData(TORIC_S, [1j, 1, 1, -1]))
    assert rep.valid and "t0" in {t for t, _ in rep.warnings}


def test_rank_one_rules():
    N, _ = fusion_rules(ModularData([[1]], [1]))
    assert N.tolist() == [[[1]]]


def test_non_integral_raises():
    th = 0.3
    R = np.array([[math.cos(th), math.sin(th)], [math.sin(th), -math.cos(th)]])
    with pytest.raises(NonIntegral):
        fusion_rules(ModularData(R, [1, 1]))


def test_doubled_fibonacci_rules():
    md = pipeline("fibonacci")[3]
    N, dev = fusion_rules(md)
    assert dev < 1e-9
    assert np.all(N[0] == np.eye(4))
    # the label of dimension phi^2 squares to 1 + 2 labels of dimension phi + itself
    big = int(np.argmax(md.dims))
    assert sorted(N[big, big].tolist()) == [1, 1, 1, 1]


@pytest.mark.parametrize("spec", ALL_SPECS)
def test_rules_under_conjugation(spec):
    md = pipeline(spec)[3]
    N, _ = fusion_rules(md)
    Nc, _ = fusion_rules(conjugate(md))
    C = charge_conjugation(md)
    assert np.array_equal(Nc, N[np.ix_(C, C, C)])


def test_conjugate_involution_and_fixed_points():
    md = ModularData(TORIC_S, TORIC_T)
    assert conjugate(md) == md
    fibd = pipeline("fibonacci")[3]
    assert conjugate(conjugate(fibd)) == fibd
    assert validate_verlinde_axioms(conjugate(fibd)).valid
    assert equivalent(fibd, conjugate(fibd))


def test_twisted_double_is_chiral():
    md = pipeline("vec:3:1")[3]
    assert not equivalent(md, conjugate(md))


@pytest.mark.parametrize("spec", ["trivial", "fibonacci", "vec:3:1", "ty:3:1:-1"])
def test_save_load_roundtrip(spec, tmp_path):
    md = pipeline(spec)[3]
    p = tmp_path / "md.json"
    save(md, p)
    md2 = load(p)
    assert np.array_equal(md2.S, md.S) and np.array_equal(md2.t, md.t)
    save(md2, tmp_path / "again.json")
    assert (tmp_path / "again.json").read_bytes() == p.read_bytes()
    assert not getattr(md2, "warning", False)


def test_trivial_canonical_file():
    text = dumps(ModularData([[1]], [1], name="trivial"))
    obj = json.loads(text)
    assert obj["S"] == [[[1, 0]]] and obj["t"] == [[1, 0]] and obj["lambda"] == 1
    assert "\r" not in text and text.endswith("}\n")
    assert loads(text) == ModularData([[1]], [1], name="trivial")


def test_malformed_symmetric_check():
    S = TORIC_S.copy()
    S[0, 1] = 0.9
    text = dumps(ModularData(S, TORIC_T))
    with pytest.raises(AxiomFailure) as exc:
        loads(text, strict=True)
    assert "iia" in exc.value.axioms
    md = loads(text)
    assert md.warning and not md.report.valid


def test_schema_errors():
    with pytest.raises(SchemaError):
        loads("[")
    with pytest.raises(SchemaError):
        loads(json.dumps({"S": [[[1, 0]]]}))
    with pytest.raises(SchemaError):
        loads(json.dumps({"S": [[1]], "t": [[1, 0]]}))
    with pytest.raises(SchemaError):
        loads(json.dumps({"S": [[[1, 0]]], "t": [[1, 0]], "rank": 2}))
    with pytest.raises(SchemaError):
        load("/nonexistent/md.json")


def test_shipped_fixtures_valid():
    assert set(available_fixtures()) >= {"haagerup", "e6"}
    for name in ("haagerup", "e6"):
        md = load_fixture(name)
        assert md.report.valid, md.report.format()
        prov = md.provenance
        assert {"source", "transcriber", "date"} <= set(prov)


def test_haagerup_fixture_scale():
    md = load_fixture("haagerup")
    s00 = (13 - 3 * 13 ** 0.5) / 78
    assert md.rank == 12
    assert abs(md.S[0, 0] - s00) < 1e-12
    assert abs(md.lam - 1 / s00) < 1e-9


def test_missing_fixture():
    with pytest.raises(MissingFixture):
        fixture_path("e6_z5")


def test_tensor_square_dims():
    S, t = fib_modular()
    fib = ModularData(S, t)
    assert validate_verlinde_axioms(fib).valid
    assert fib.dims[1] == pytest.approx((1 + 5 ** 0.5) / 2)
