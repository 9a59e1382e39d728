import random
from fractions import Fraction as F

import pytest

from malcev import unitriangular as ut
from malcev.errors import AlgebraMismatch
from malcev.freenil import psi_group
from malcev.liealg import (GroupElement, NilpotentLieAlgebra,
                           validate_structure_constants, vec, zero_vec)


def heisenberg():
    return NilpotentLieAlgebra(3, {(0, 1): (0, 0, 1)})


def test_validate_abelian():
    alg = NilpotentLieAlgebra.abelian(3)
    report = alg.validate()
    assert report["valid"] and report["class"] == 1


def test_validate_heisenberg_against_matrix_commutators():
    alg = heisenberg()
    report = alg.validate()
    assert report["valid"] and report["class"] == 2
    # oracle: the same constants arise from 3x3 matrix commutators
    tr0, pairs = ut.tr0_algebra(3)
    for (i, j), v in alg.brackets.items():
        A = ut.matrix_from_coords(3, tuple(int(i == t) for t in range(3)), pairs)
        B = ut.matrix_from_coords(3, tuple(int(j == t) for t in range(3)), pairs)
        assert ut.coords_from_matrix(3, ut.commutator(A, B), pairs) == v


def test_antisymmetry_violation():
    raw = {(0, 1): (0, 0, 1), (1, 0): (0, 0, 1)}
    report, _ = validate_structure_constants(3, raw)
    assert not report["valid"]
    assert ("antisymmetry", (0, 1)) in report["violations"]


def test_bracket_examples():
    ab = NilpotentLieAlgebra.abelian(2)
    assert ab.bracket((1, 0), (0, 1)) == zero_vec(2)
    alg, pairs = ut.tr0_algebra(3)
    e12 = vec((1, 0, 0))
    e23 = vec((0, 1, 0))
    assert alg.bracket(e12, e23) == vec((0, 0, 1))  # [e12, e23] = e13
    x = vec((2, F(1, 3), 5))
    assert alg.bracket(x, x) == zero_vec(3)


def test_matrix_log_exp_examples():
    ident = ut.identity(3)
    assert ut.matrix_log(ident) == ut.zero(3)
    assert ut.matrix_exp(ut.zero(3)) == ident
    single = ((F(1), F(7, 2), F(0)), (F(0), F(1), F(0)), (F(0), F(0), F(1)))
    logm = ut.matrix_log(single)
    assert logm[0][1] == F(7, 2) and logm[0][2] == 0
    # superdiagonal (1,1), corner 0: log corner is -1/2
    m = ((F(1), F(1), F(0)), (F(0), F(1), F(1)), (F(0), F(0), F(1)))
    assert ut.matrix_log(m)[0][2] == F(-1, 2)
    # exp(e12 + e23): corner 1/2
    n = ((F(0), F(1), F(0)), (F(0), F(0), F(1)), (F(0), F(0), F(0)))
    e = ut.matrix_exp(n)
    assert e[0][1] == 1 and e[1][2] == 1 and e[0][2] == F(1, 2)
    with pytest.raises(ValueError):
        ut.matrix_log(n)
    with pytest.raises(ValueError):
        ut.matrix_exp(single)


def test_exp_log_roundtrip_random():
    rng = random.Random(0)
    for _ in range(100):
        n = rng.randint(2, 4)
        U = [[F(int(i == j)) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                U[i][j] = F(rng.randint(-3, 3), rng.randint(1, 4))
        U = tuple(tuple(r) for r in U)
        assert ut.matrix_exp(ut.matrix_log(U)) == U


def test_bch_examples():
    ab = NilpotentLieAlgebra.abelian(2)
    assert ab.bch((1, 2), (3, 4)) == vec((4, 6))
    alg, pairs = ut.tr0_algebra(3)
    x = vec((1, 0, 0))
    y = vec((0, 1, 0))
    z = alg.bch(x, y)
    assert z == vec((1, 1, F(1, 2)))  # x + y + [x,y]/2
    X = ut.matrix_from_coords(3, x, pairs)
    Y = ut.matrix_from_coords(3, y, pairs)
    oracle = ut.matrix_log(ut.mat_mul(ut.matrix_exp(X), ut.matrix_exp(Y)))
    assert z == ut.coords_from_matrix(3, oracle, pairs)
    v = vec((2, F(1, 2), -1))
    assert alg.bch(v, tuple(-t for t in v)) == zero_vec(3)
    assert alg.bch(v, zero_vec(3)) == v


def test_lcs():
    ab = NilpotentLieAlgebra.abelian(2)
    assert len(ab.lcs()) == 2  # gamma_1, gamma_2 = 0
    alg = heisenberg()
    chain = alg.lcs()
    assert [len(g) for g in chain] == [3, 1, 0]
    assert chain[1][0] == vec((0, 0, 1))
    psi = psi_group(2, 3)
    assert [len(g) for g in psi.algebra.lcs()] == [5, 3, 2, 0]


def test_group_ops():
    alg = heisenberg()
    rng = random.Random(1)
    for _ in range(20):
        g = GroupElement.from_log(alg, [F(rng.randint(-4, 4), rng.randint(1, 3))
                                        for _ in range(3)])
        assert (g * g.inverse()).is_identity()
        for m in (2, 3, 5):
            assert (g.root(m) ** m).log == g.log
        a, b = rng.randint(-3, 3), rng.randint(-3, 3)
        assert ((g ** a) * (g ** b)).log == (g ** (a + b)).log


def test_group_associativity_random_triples():
    psi = psi_group(2, 3)
    alg = psi.algebra
    rng = random.Random(2)
    for _ in range(100):
        g, h, k = (GroupElement.from_log(
            alg, [F(rng.randint(-2, 2), rng.randint(1, 2)) for _ in range(5)])
            for _ in range(3))
        assert ((g * h) * k).log == (g * (h * k)).log


def test_algebra_mismatch():
    a = NilpotentLieAlgebra.abelian(2)
    b = NilpotentLieAlgebra.abelian(2)
    with pytest.raises(AlgebraMismatch):
        GroupElement.identity(a) * GroupElement.identity(b)


def test_compiled_bch_matches_generic():
    alg, _ = ut.tr0_algebra(3)
    comp = alg.bch_compiled()
    # on the closed lattice <e12, e23, e13/2> in its own basis the compiled
    # map is integral; compare through the basis change
    hull_basis = [vec((1, 0, 0)), vec((0, 1, 0)), vec((0, 0, F(1, 2)))]
    adapted, to_new, to_old = alg.change_basis(hull_basis)
    comp2 = adapted.bch_compiled()
    rng = random.Random(3)
    for _ in range(50):
        u = tuple(rng.randint(-3, 3) for _ in range(3))
        v = tuple(rng.randint(-3, 3) for _ in range(3))
        got = comp2.eval_int(u + v)
        expect = to_new(alg.bch(to_old(vec(u)), to_old(vec(v))))
        assert vec(got) == vec(expect)
