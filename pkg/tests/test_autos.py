import random
from fractions import Fraction as F

import pytest

from malcev import unitriangular as ut
from malcev.autos import (IAStarEquations, LieAutomorphism, aut_star_image,
                          csp_witness, enumerate_ia_star, ia_star_positions,
                          is_ia_star, is_lie_aut, make_ia_star,
                          matrix_from_adapted, mod_m_group,
                          stabilizes_lattice, strong_approx_check)
from malcev.hull import GenGroup, lattice_hull


def heis_hull():
    alg, _ = ut.tr0_algebra(3)
    return lattice_hull(GenGroup.from_elements(
        alg, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]))


def test_is_lie_aut():
    h = heis_hull()
    ident = tuple(tuple(F(int(i == j)) for j in range(3)) for i in range(3))
    ok, wit = is_lie_aut(h.algebra, ident)
    assert ok and wit is None
    # the (alpha, beta) family in the adapted basis is always an automorphism
    for a, b in ((1, 0), (2, -3), (0, 0)):
        aut = make_ia_star(h, {(2, 0): a, (2, 1): b})
        ok, _ = is_lie_aut(h.algebra, aut.matrix)
        assert ok
    # swapping b1 and b3 breaks the bracket at pair (0, 1)
    swap = ((F(0), F(0), F(1)), (F(0), F(1), F(0)), (F(1), F(0), F(0)))
    ok, wit = is_lie_aut(h.algebra, swap)
    assert not ok and wit == (0, 1)
    singular = ((F(1), F(0), F(0)), (F(1), F(0), F(0)), (F(0), F(0), F(1)))
    with pytest.raises(ValueError):
        is_lie_aut(h.algebra, singular)


def test_stabilizes_lattice():
    h = heis_hull()
    ident = make_ia_star(h, {})
    assert stabilizes_lattice(ident, h.lattice)
    a10 = make_ia_star(h, {(2, 0): 1})
    assert stabilizes_lattice(a10, h.lattice)
    # alpha = 1/2 in adapted coordinates leaves the lattice
    half_adapted = ((F(1), F(0), F(0)), (F(0), F(1), F(0)),
                    (F(1, 2), F(0), F(1)))
    half = LieAutomorphism(h.algebra, matrix_from_adapted(h, half_adapted))
    ok, _ = is_lie_aut(h.algebra, half.matrix)
    assert ok
    assert not stabilizes_lattice(half, h.lattice)


def test_is_ia_star():
    h = heis_hull()
    assert is_ia_star(make_ia_star(h, {}), h)
    for a in (-2, 1, 3):
        for b in (-1, 0, 2):
            assert is_ia_star(make_ia_star(h, {(2, 0): a, (2, 1): b}), h)
    # diag(-1, 1, -1) is an automorphism but acts as -1 on part of L/L'
    diag = ((F(-1), F(0), F(0)), (F(0), F(1), F(0)), (F(0), F(0), F(-1)))
    aut = LieAutomorphism(h.algebra, matrix_from_adapted(h, diag))
    ok, _ = is_lie_aut(h.algebra, aut.matrix)
    assert ok and stabilizes_lattice(aut, h.lattice)
    assert not is_ia_star(aut, h)


def test_aut_star_image():
    h = heis_hull()
    ident = make_ia_star(h, {(2, 0): 2, (2, 1): -1})
    assert aut_star_image(ident, h) == ((1, 0), (0, 1))
    # b1 <-> b2, b3 -> -b3 is an automorphism ([b2,b1] = -2 b3)
    perm = ((F(0), F(1), F(0)), (F(1), F(0), F(0)), (F(0), F(0), F(-1)))
    aut = LieAutomorphism(h.algebra, matrix_from_adapted(h, perm))
    ok, _ = is_lie_aut(h.algebra, aut.matrix)
    assert ok
    assert aut_star_image(aut, h) == ((0, 1), (1, 0))


def test_positions_and_enumeration():
    h = heis_hull()
    assert ia_star_positions(h) == [(2, 0), (2, 1)]
    lst = enumerate_ia_star(h, 3)
    assert len(lst) == 49
    assert {a.adapted_entries for a in lst} == {
        (x, y) for x in range(-3, 4) for y in range(-3, 4)}
    ab = lattice_hull(GenGroup.from_elements(
        __import__("malcev.liealg", fromlist=["NilpotentLieAlgebra"])
        .NilpotentLieAlgebra.abelian(2), [(1, 0), (0, 1)]))
    assert len(enumerate_ia_star(ab, 3)) == 1


def test_aut_star_multiplicative():
    h = heis_hull()
    rng = random.Random(0)
    perm = LieAutomorphism(h.algebra, matrix_from_adapted(
        h, ((F(0), F(1), F(0)), (F(1), F(0), F(0)), (F(0), F(0), F(-1)))))
    pool = [make_ia_star(h, {(2, 0): rng.randint(-2, 2),
                             (2, 1): rng.randint(-2, 2)})
            for _ in range(5)] + [perm]
    for a in pool:
        for b in pool:
            lhs = aut_star_image(a.compose(b), h)
            import malcev.linalg as lin
            rhs = lin.mat_mul(aut_star_image(a, h), aut_star_image(b, h))
            assert lhs == tuple(tuple(int(x) for x in row) for row in rhs)


def test_strong_approx_basics():
    h = heis_hull()
    r = strong_approx_check(h, 1)
    assert r["surjective"] and r["solution_count"] == 1
    r = strong_approx_check(h, 6)
    assert r["surjective"] and r["solution_count"] == 36
    # raw (unsaturated) equations on a class-3 hull have extra mod-2 points
    from malcev.freenil import psi_group
    psi = psi_group(2, 3)
    raw = IAStarEquations(psi.hull, saturate=False)
    r_raw = strong_approx_check(psi.hull, 2, eq=raw)
    assert not r_raw["surjective"] and r_raw["failure_witnesses"]
    sat = IAStarEquations(psi.hull)
    r_sat = strong_approx_check(psi.hull, 2, eq=sat)
    assert r_sat["surjective"] and r_sat["solution_count"] == 64


def test_lift_reduces_correctly():
    from malcev.freenil import psi_group
    psi = psi_group(2, 3)
    eq = IAStarEquations(psi.hull)
    for m in (2, 3, 4):
        for a in eq.solutions_mod(m):
            exact = eq.lift(a, m)
            assert exact is not None
            assert all((e - v) % m == 0 for e, v in zip(exact, a))
            assert eq.check_assignment(exact)


def test_csp_witness_examples():
    h = heis_hull()
    eq = IAStarEquations(h)
    full = [make_ia_star(h, {(2, 0): 1}), make_ia_star(h, {(2, 1): 1})]
    rep = csp_witness(h, full, eq=eq)
    assert rep["status"] == "certified" and rep["m"] == 1
    g1 = [make_ia_star(h, {(2, 0): 2}), make_ia_star(h, {(2, 1): 1})]
    rep = csp_witness(h, g1, eq=eq)
    assert rep["m"] == 2 and rep["index"] == 2
    evens = [make_ia_star(h, {(2, 0): 1, (2, 1): 1}),
             make_ia_star(h, {(2, 1): 2})]
    rep = csp_witness(h, evens, eq=eq)
    assert rep["m"] == 2 and rep["index"] == 2
    # caps produce "inconclusive", never refutation
    g7 = [make_ia_star(h, {(2, 0): 7}), make_ia_star(h, {(2, 1): 1})]
    rep = csp_witness(h, g7, index=7, level_cap=5, eq=eq)
    assert rep["status"] == "inconclusive"


def test_mod_m_group_is_a_group():
    h = heis_hull()
    U = mod_m_group(h, 4)
    assert len(U) == 16
    for A in list(U)[:6]:
        for B in list(U)[:6]:
            prod = tuple(tuple(sum(A[i][t] * B[t][j] for t in range(3)) % 4
                               for j in range(3)) for i in range(3))
            assert prod in U


def test_enumeration_dimension_cap():
    from malcev.errors import CapExceeded
    from malcev.freenil import psi_group
    psi = psi_group(2, 4)  # dim 8 > 6
    with pytest.raises(CapExceeded):
        enumerate_ia_star(psi.hull, 1)


def test_strong_approx_psi32():
    from malcev.freenil import psi_group
    psi = psi_group(3, 2)
    eq = IAStarEquations(psi.hull)
    for m in (2, 3):
        r = strong_approx_check(psi.hull, m, eq=eq)
        assert r["surjective"]
        assert r["solution_count"] == m ** 9  # nine free positions, class 2


def test_integral_solutions_reduce_into_mod_m_sets():
    from malcev.freenil import psi_group
    psi = psi_group(2, 3)
    eq = IAStarEquations(psi.hull)
    integral = eq.enumerate_integral(2)
    for m in (2, 3, 5):
        sols = set(eq.solutions_mod(m))
        for point in integral:
            assert tuple(v % m for v in point) in sols


def test_make_ia_star_rejects_shallow_positions():
    h = heis_hull()
    with pytest.raises(ValueError):
        make_ia_star(h, {(0, 2): 1})  # layer(row) <= layer(col)


def _random_unimodular(rng, k):
    """Product of random elementary integer matrices (det +-1)."""
    import malcev.linalg as lin
    M = [[int(i == j) for j in range(k)] for i in range(k)]
    for _ in range(3 * k):
        i, j = rng.randrange(k), rng.randrange(k)
        if i == j:
            continue
        q = rng.randint(-2, 2)
        for t in range(k):
            M[i][t] += q * M[j][t]
    assert abs(lin.det(M)) == 1
    return M


@pytest.mark.parametrize("builder,counts", [
    ("heis", {2: 4, 3: 9, 4: 16}),
    ("psi23", {2: 64, 3: 729}),
])
def test_mod_m_counts_are_coordinate_independent(builder, counts):
    """The mod-m point counts are invariants of the group, so they must not
    change under a unimodular change of the ambient coordinates."""
    from malcev.freenil import psi_group
    from malcev.hull import GenGroup, lattice_hull
    from malcev.liealg import NilpotentLieAlgebra
    import malcev.linalg as lin

    if builder == "heis":
        alg, _ = __import__("malcev.unitriangular",
                            fromlist=["tr0_algebra"]).tr0_algebra(3)
        gen_logs = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    else:
        psi = psi_group(2, 3)
        alg = psi.algebra
        gen_logs = psi.generator_logs()
    rng = random.Random(11)
    T = _random_unimodular(rng, alg.dim)
    twisted, to_new, _ = alg.change_basis(T)
    hull = lattice_hull(GenGroup.from_elements(
        twisted, [to_new(tuple(map(F, g))) for g in gen_logs]))
    eq = IAStarEquations(hull)
    for m, expected in counts.items():
        assert len(eq.solutions_mod(m)) == expected
        r = strong_approx_check(hull, m, eq=eq)
        assert r["surjective"]


def test_mod_m_counts_multiplicative_over_coprime_levels():
    from malcev.freenil import psi_group
    h = heis_hull()
    eq = IAStarEquations(h)
    assert len(eq.solutions_mod(6)) == \
        len(eq.solutions_mod(2)) * len(eq.solutions_mod(3))
    psi = psi_group(2, 3)
    eq23 = IAStarEquations(psi.hull)
    assert len(eq23.solutions_mod(6)) == \
        len(eq23.solutions_mod(2)) * len(eq23.solutions_mod(3))
