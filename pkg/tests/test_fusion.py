import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tvo.errors import InvalidSystem, MissingEntry, SchemaError, TypeMismatch
from tvo.fusion import (FusionRing, FusionSystem, builtin_system, dumps_system, fibonacci, ising,
                        loads_system, quantum_dims, tambara_yamagami, trivial, validate_fusion_ring,
                        validate_pentagon, validate_system, vec_omega_cyclic)
from tvo.fusion.calculus import (Adjoint, Basis, Cap, Compose, Cup, Identity, LeftTensor, Morphism,
                                 RightTensor, Scalar, check_duality, cup, cupbar, eval_expression,
                                 frobenius_hat, frobenius_tilde, fs_indicator, inner, vertex, word)
from tvo.fusion.system import FBlock

from conftest import ALL_SPECS, system

PHI = (1 + 5 ** 0.5) / 2


# ----------------------------------------------------------------------------- rings

def test_trivial_ring_valid():
    ring = FusionRing(np.ones((1, 1, 1), dtype=int), [0])
    assert validate_fusion_ring(ring).valid


def test_fibonacci_ring_valid():
    assert validate_fusion_ring(fibonacci().ring).valid


def test_rank_two_ring_with_multiplicity_two_is_consistent():
    # tau * tau = 1 + 2 tau: associativity is automatic at rank 2, and d = 1 + sqrt(2) > 0
    N = np.zeros((2, 2, 2), dtype=int)
    N[0, 0, 0] = N[0, 1, 1] = N[1, 0, 1] = 1
    N[1, 1, 0], N[1, 1, 1] = 1, 2
    ring = FusionRing(N, [0, 1])
    assert validate_fusion_ring(ring).valid
    assert quantum_dims(ring).d[1] == pytest.approx(1 + 2 ** 0.5)


def test_non_associative_ring_reported():
    # x*x = 1 + y, x*y = x, y*y = 1 + y  is not associative: (xx)y != x(xy)
    N = np.zeros((3, 3, 3), dtype=int)
    for j in range(3):
        N[0, j, j] = N[j, 0, j] = 1
    N[1, 1, 0] = N[1, 1, 2] = 1
    N[1, 2, 1] = N[2, 1, 1] = 1
    N[2, 2, 0] = N[2, 2, 2] = 1
    rep = validate_fusion_ring(FusionRing(N, [0, 1, 2]))
    assert not rep.valid
    assert "assoc" in rep.tags()


def test_duality_and_unit_violations_reported():
    N = np.zeros((2, 2, 2), dtype=int)
    N[0, 0, 0] = N[0, 1, 1] = N[1, 0, 1] = 1
    N[1, 1, 1] = 1  # x * x = x: no unit in x * xbar
    rep = validate_fusion_ring(FusionRing(N, [0, 1]))
    assert "dual" in rep.tags()
    N2 = N.copy()
    N2[0, 1, 1] = 0
    assert "unit" in validate_fusion_ring(FusionRing(N2, [0, 1])).tags()


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_dims_pointed(n):
    q = quantum_dims(vec_omega_cyclic(n).ring)
    assert np.allclose(q.d, 1) and q.lam == pytest.approx(n)


def test_dims_fibonacci_and_ising():
    q = quantum_dims(fibonacci().ring)
    assert q.d[1] == pytest.approx(PHI, abs=1e-12)
    assert q.lam == pytest.approx(1 + PHI ** 2, abs=1e-12)
    q = quantum_dims(ising().ring)
    assert q.d[1] == pytest.approx(2 ** 0.5, abs=1e-12)
    assert q.lam == pytest.approx(4, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(spec=st.sampled_from(["ising", "ty:3:1:1", "vec:4:1", "vec:5:2"]), data=st.data())
def test_dims_relabel_invariant(spec, data):
    fs = system(spec)
    perm = [0] + data.draw(st.permutations(list(range(1, fs.rank))))
    fs2 = fs.relabel(perm)
    d2 = quantum_dims(fs2.ring).d
    assert np.max(np.abs(d2[perm] - fs.d)) < 1e-9
    assert validate_system(fs2).valid


# ----------------------------------------------------------------------------- F-symbols

def test_pentagon_untwisted_z2_exact():
    rep = validate_pentagon(vec_omega_cyclic(2, 0))
    assert rep.valid and rep.residuals["pentagon"] == 0


def test_pentagon_twisted_exact():
    rep = validate_pentagon(vec_omega_cyclic(3, 1))
    assert rep.valid and rep.residuals["pentagon"] == 0


def test_vec_cases():
    assert vec_omega_cyclic(1, 0).rank == 1
    fs = vec_omega_cyclic(3, 0)
    assert all(np.all(b.matrix == 1) for b in fs.F.values())


def test_pentagon_fibonacci():
    rep = validate_pentagon(fibonacci())
    assert rep.valid and rep.residuals["pentagon"] < 1e-12


def test_pentagon_detects_sign_flip():
    fs = fibonacci()
    F = dict(fs.F)
    blk = F[1, 1, 1, 1]
    M = blk.matrix.copy()
    M[1, 1] = -M[1, 1]
    F[1, 1, 1, 1] = FBlock(blk.left, blk.right, M)
    bad = FusionSystem(fs.ring, F, name="fib-flipped")
    rep = validate_pentagon(bad)
    assert not rep.valid and rep.residuals["pentagon"] > 0.1


def test_missing_block_raises():
    fs = fibonacci()
    F = dict(fs.F)
    del F[1, 1, 1, 1]
    with pytest.raises(MissingEntry):
        validate_pentagon(FusionSystem(fs.ring, F))


@pytest.mark.parametrize("spec", ALL_SPECS)
def test_builtins_valid(spec):
    rep = validate_system(system(spec))
    assert rep.valid, rep.format()
    assert rep.residuals.get("pentagon", 0) < 1e-9


def test_builtin_shapes():
    assert fibonacci().rank == 2 and ising().rank == 3
    ty = tambara_yamagami(3, 1, 1)
    assert ty.rank == 4
    assert np.allclose(ty.d, [1, 1, 1, 3 ** 0.5]) and ty.lam == pytest.approx(6)
    assert trivial().rank == 1


def test_builtin_resolver():
    assert builtin_system("vec:4:3").name == "vec(Z/4,3)"
    assert builtin_system("ty:3").rank == 4
    with pytest.raises(ValueError):
        builtin_system("e8")
    with pytest.raises(ValueError):
        builtin_system("ty:3:3")  # degenerate bicharacter


def test_regauge_keeps_validity(rng):
    fs = ising().regauge(rng)
    assert validate_system(fs).valid


# ----------------------------------------------------------------------------- calculus

def test_identity_expression():
    fs = fibonacci()
    m = eval_expression(fs, Identity(word(1)))
    assert m.scalar() == 1


@pytest.mark.parametrize("n,k", [(2, 1), (3, 1), (4, 3), (5, 2)])
def test_zigzag_pointed(n, k):
    fs = vec_omega_cyclic(n, k)
    for x in range(n):
        expr = Compose(Adjoint(RightTensor(Cup(x, bar=True), word(x))), LeftTensor(word(x), Cup(x)))
        assert eval_expression(fs, expr).scalar() == pytest.approx(1.0, abs=1e-12)


def test_zigzag_fibonacci():
    fs = fibonacci()
    expr = Compose(RightTensor(Cap(1, bar=True), word(1)), LeftTensor(word(1), Cup(1)))
    assert eval_expression(fs, expr).scalar() == pytest.approx(2 / (1 + 5 ** 0.5), abs=1e-12)


@pytest.mark.parametrize("spec", ALL_SPECS)
def test_duality_all(spec):
    fs = system(spec)
    assert check_duality(fs) < 1e-12
    for x in range(fs.rank):
        assert (cup(fs, x).adj() @ cup(fs, x)).scalar() == pytest.approx(1)


def test_pair_gauge():
    fs = vec_omega_cyclic(3, 1)
    # Rbar_x = R_xbar for x != xbar
    assert cupbar(fs, 1).allclose(cup(fs, 2))


def test_type_mismatch():
    fs = fibonacci()
    with pytest.raises(TypeMismatch):
        eval_expression(fs, Compose(Basis(1, 1, 1), Basis(1, 1, 0)))
    with pytest.raises(TypeMismatch):
        vertex(fs, 1, 1, 1, mu=1)


def test_scalar_expression():
    fs = ising()
    m = eval_expression(fs, Scalar(2.0, Identity(word(2))))
    assert m.scalar() == 2


def _random_morphism(fs, src, tgt, rng):
    z = Morphism.zero(fs, src, tgt)
    v = rng.normal(size=z.dim) + 1j * rng.normal(size=z.dim)
    return Morphism.from_vector(fs, src, tgt, v)


labels_strategy = st.lists(st.integers(min_value=0, max_value=3), min_size=1, max_size=3)


@settings(max_examples=40, deadline=None)
@given(spec=st.sampled_from(["fibonacci", "ising", "ty:3:1:-1", "vec:3:1"]),
       a=labels_strategy, b=labels_strategy, u=labels_strategy, w=labels_strategy,
       seed=st.integers(0, 10 ** 6))
def test_bracketing_independence(spec, a, b, u, w, seed):
    """Tensoring on the left and on the right commute, and nested tensoring by a word
    equals tensoring letter by letter."""
    fs = system(spec)
    r = fs.rank
    a, b, u, w = ([x % r for x in lst] for lst in (a, b, u, w))
    rng = np.random.default_rng(seed)
    f = _random_morphism(fs, a, b, rng)
    lhs = f.rtensor(w).ltensor(u)
    rhs = f.ltensor(u).rtensor(w)
    assert lhs.allclose(rhs, 1e-9)
    nested = f.ltensor(u[-1:]).ltensor(u[:-1])
    assert nested.allclose(f.ltensor(u), 1e-9)
    # interchange law: (f x 1)(1 x g) = (1 x g)(f x 1)
    g = _random_morphism(fs, u, w, rng)
    left = f.rtensor(w) @ g.ltensor(a)
    right = g.ltensor(b) @ f.rtensor(u)
    assert left.allclose(right, 1e-9)


@settings(max_examples=30, deadline=None)
@given(spec=st.sampled_from(["fibonacci", "ising", "ty:3:1:1", "vec:4:1"]), data=st.data())
def test_reassociation_via_F(spec, data):
    """(V^{ab}_e x 1) V^{ec}_d expands in the right-comb basis with the F coefficients."""
    fs = system(spec)
    quads = [q for q in fs.F]
    a, b, c, d = data.draw(st.sampled_from(quads))
    blk = fs.F[a, b, c, d]
    (e, al, be) = data.draw(st.sampled_from(blk.left))
    lhs = vertex(fs, a, b, e, al).rtensor(word(c)) @ vertex(fs, e, c, d, be)
    rhs = Morphism.zero(fs, word(d), word(a, b, c))
    for (f, ga, de) in blk.right:
        rhs = rhs + blk[(e, al, be), (f, ga, de)] * (vertex(fs, b, c, f, ga).ltensor(word(a))
                                                      @ vertex(fs, a, f, d, de))
    assert lhs.allclose(rhs, 1e-9)


# ----------------------------------------------------------------------------- Frobenius

def _trivalent(fs):
    for a, b, c in itertools.product(range(fs.rank), repeat=3):
        for mu in range(fs.N[a, b, c]):
            yield a, b, c, mu


@pytest.mark.parametrize("spec", ["fibonacci", "ising", "ty:3:1:1", "ty:3:1:-1", "vec:3:1", "vec:4:2"])
def test_frobenius_isometries(spec):
    fs = system(spec)
    for a, b, c, mu in _trivalent(fs):
        A = vertex(fs, a, b, c, mu)
        for B in (frobenius_tilde(fs, A, a, b, c), frobenius_hat(fs, A, a, b, c)):
            assert abs(inner(B, B) - 1) < 1e-9


@settings(max_examples=30, deadline=None)
@given(spec=st.sampled_from(["ising", "ty:3:1:-1", "vec:3:1"]), data=st.data(),
       z=st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_frobenius_conjugate_linear_and_norm(spec, data, z):
    fs = system(spec)
    a, b, c, mu = data.draw(st.sampled_from(list(_trivalent(fs))))
    A = vertex(fs, a, b, c, mu)
    At = frobenius_tilde(fs, z * A, a, b, c)
    assert At.allclose(np.conj(z) * frobenius_tilde(fs, A, a, b, c), 1e-9)
    assert abs(inner(At, At) - abs(z) ** 2) < 1e-9


@pytest.mark.parametrize("spec", ["fibonacci", "ising", "ty:3:1:1", "ty:3:1:-1", "vec:3:1", "vec:4:2"])
def test_frobenius_s3_relations(spec):
    fs = system(spec)
    du = fs.dual
    for a, b, c, mu in _trivalent(fs):
        A = vertex(fs, a, b, c, mu)
        At = frobenius_tilde(fs, A, a, b, c)
        Ah = frobenius_hat(fs, A, a, b, c)
        # involutions, up to the Frobenius-Schur indicator of a pseudo-real label
        assert frobenius_tilde(fs, At, du(a), c, b).allclose(fs_indicator(fs, a) * A, 1e-9)
        assert frobenius_hat(fs, Ah, c, du(b), a).allclose(fs_indicator(fs, b) * A, 1e-9)
        # rotation of order three
        X, lab = A, (a, b, c)
        for _ in range(3):
            x, y, z = lab
            X, lab = frobenius_tilde(fs, X, x, y, z), (du(x), z, y)
            x, y, z = lab
            X, lab = frobenius_hat(fs, X, x, y, z), (z, du(y), x)
        assert lab == (a, b, c) and X.allclose(A, 1e-9)


def test_frobenius_unit_leg():
    fs = fibonacci()
    A = vertex(fs, 0, 1, 1)
    At = frobenius_tilde(fs, A, 0, 1, 1)
    assert At.src == (1,) and At.tgt == (1,)
    assert abs(inner(At, At) - 1) < 1e-12


def test_frobenius_pointed_single_vector():
    fs = vec_omega_cyclic(3, 1)
    A = vertex(fs, 1, 1, 2)
    At = frobenius_tilde(fs, A, 1, 1, 2)
    assert At.tgt == (2, 2) and At.src == (1,)
    v = At.vector()
    assert len(v) == 1 and abs(abs(v[0]) - 1) < 1e-12


def test_frobenius_type_check():
    fs = fibonacci()
    with pytest.raises(TypeMismatch):
        frobenius_tilde(fs, vertex(fs, 1, 1, 0), 1, 1, 1)


# ----------------------------------------------------------------------------- file format

@pytest.mark.parametrize("spec", ["trivial", "fibonacci", "ising", "ty:3:1:-1", "vec:3:1"])
def test_system_roundtrip(spec):
    fs = system(spec)
    fs2 = loads_system(dumps_system(fs))
    assert fs2.names == fs.names
    for q, blk in fs.F.items():
        assert np.allclose(blk.matrix, fs2.F[q].matrix, atol=0)
    assert validate_system(fs2).valid


def test_loader_rejects_invalid_ring():
    obj = json.loads(dumps_system(fibonacci()))
    obj["N"] = [row for row in obj["N"] if row[:3] != [1, 1, 0]]  # drop 1 in tau*tau
    with pytest.raises(InvalidSystem) as exc:
        loads_system(json.dumps(obj))
    assert "dual" in exc.value.report.tags()


def test_loader_schema_errors():
    with pytest.raises(SchemaError):
        loads_system("{not json")
    with pytest.raises(SchemaError):
        loads_system(json.dumps({"name": "x"}))
    obj = json.loads(dumps_system(fibonacci()))
    obj["F"][0] = obj["F"][0][:5]
    with pytest.raises(SchemaError):
        loads_system(json.dumps(obj))


def test_loader_checks_declared_dims():
    obj = json.loads(dumps_system(fibonacci()))
    obj["dims"] = [1.0, 1.5]
    with pytest.raises(InvalidSystem):
        loads_system(json.dumps(obj))


def test_loader_fills_canonical_blocks():
    # only the nontrivial Fibonacci block is needed
    fs = fibonacci()
    obj = json.loads(dumps_system(fs))
    obj["F"] = [row for row in obj["F"] if row[:4] == [1, 1, 1, 1]]
    del obj["dims"]
    fs2 = loads_system(json.dumps(obj))
    assert validate_system(fs2).valid
