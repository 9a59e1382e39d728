"""Free nilpotent groups via Hall bases of the free nilpotent Lie algebra.

Structure constants come from expanding Hall trees in the degree-truncated
free associative algebra and solving the exact linear system per weight.
The Witt/Lyndon counting oracle is independent of the Hall construction and
is used by the tests to cross-check layer dimensions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import CapExceeded
from .hull import GenGroup, HullResult, lattice_hull
from .lattices import Lattice, hnf_lattice, intersect_subspace
from .liealg import GroupElement, NilpotentLieAlgebra, vec


def witt_dimension(n: int, w: int) -> int:
    """Dimension of the weight-w layer of the free Lie algebra on n letters."""
    total = 0
    for d in range(1, w + 1):
        if w % d:
            continue
        total += _mobius(d) * n ** (w // d)
    return total // w


def _mobius(n: int) -> int:
    if n == 1:
        return 1
    out = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    if n > 1:
        out = -out
    return out


def lyndon_count_bruteforce(n: int, w: int) -> int:
    """Independent counting oracle: Lyndon words of length w by enumeration."""
    count = 0
    for word in itertools.product(range(n), repeat=w):
        if all(word < word[i:] + word[:i] for i in range(1, w)):
            count += 1
    return count


def hall_basis(n: int, c: int, cap: int = 200):
    """The Hall set up to weight c, deterministically ordered.

    Trees are ints (generator leaves) or pairs (a, b) of indices into the
    returned list; a tree [u, v] is admitted when u > v in list order and,
    if u is itself a bracket (u1, u2), u2 <= v.  The list for class c is a
    prefix of the list for class c + 1.
    """
    if n < 1 or c < 1:
        raise ValueError("need n >= 1 and c >= 1")
    trees = list(range(n))
    weight = [1] * n
    for w in range(2, c + 1):
        start = len(trees)
        for v in range(len(trees)):
            if weight[v] >= w:
                continue
            for u in range(len(trees)):
                if weight[u] + weight[v] != w or u <= v:
                    continue
                t = trees[u]
                if isinstance(t, tuple) and t[1] > v:
                    continue
                trees.append((u, v))
                weight.append(w)
        if len(trees) == start and witt_dimension(n, w) > 0:
            raise AssertionError("Hall generation produced no trees of weight "
                                 f"{w}")
        if len(trees) > cap:
            raise CapExceeded(f"Hall basis dimension exceeds cap {cap}")
    return trees, weight


def _expand(trees, idx, cache):
    """Associative-word expansion (dict word -> int) of a Hall tree."""
    if idx in cache:
        return cache[idx]
    t = trees[idx]
    if isinstance(t, int):
        out = {(t,): 1}
    else:
        a = _expand(trees, t[0], cache)
        b = _expand(trees, t[1], cache)
        out = {}
        for w1, c1 in a.items():
            for w2, c2 in b.items():
                for w, s in ((w1 + w2, 1), (w2 + w1, -1)):
                    v = out.get(w, 0) + s * c1 * c2
                    if v:
                        out[w] = v
                    elif w in out:
                        del out[w]
    cache[idx] = out
    return out


def free_algebra(n: int, c: int, cap: int = 200) -> NilpotentLieAlgebra:
    """Free nilpotent Lie algebra of class c on n generators, Hall basis."""
    trees, weight = hall_basis(n, c, cap)
    k = len(trees)
    cache: dict = {}
    expansions = [_expand(trees, i, cache) for i in range(k)]

    # per weight: express a Lie element (as word dict) in Hall coordinates
    by_weight: dict = {}
    for i, w in enumerate(weight):
        by_weight.setdefault(w, []).append(i)
    solvers = {}
    for w, idxs in by_weight.items():
        words = sorted({wd for i in idxs for wd in expansions[i]})
        col = {wd: t for t, wd in enumerate(words)}
        rows = []
        for i in idxs:
            row = [Fraction(0)] * len(words)
            for wd, coeff in expansions[i].items():
                row[col[wd]] = Fraction(coeff)
            rows.append(tuple(row))
        solvers[w] = (idxs, col, rows)

    def to_hall(word_dict, w):
        idxs, col, rows = solvers[w]
        target = [Fraction(0)] * len(col)
        for wd, coeff in word_dict.items():
            target[col[wd]] = Fraction(coeff)
        coeffs = linalg.solve_coords(rows, tuple(target))
        if coeffs is None:
            raise AssertionError("bracket expansion escaped the Hall span")
        out = [Fraction(0)] * k
        for i, x in zip(idxs, coeffs):
            out[i] = x
        return tuple(out)

    table = {}
    for i in range(k):
        for j in range(i + 1, k):
            w = weight[i] + weight[j]
            if w > c:
                continue
            prod = {}
            for w1, c1 in expansions[i].items():
                for w2, c2 in expansions[j].items():
                    for wd, s in ((w1 + w2, 1), (w2 + w1, -1)):
                        v = prod.get(wd, 0) + s * c1 * c2
                        if v:
                            prod[wd] = v
                        elif wd in prod:
                            del prod[wd]
            if prod:
                table[(i, j)] = to_hall(prod, w)
    alg = NilpotentLieAlgebra(k, table, c)
    return alg


@dataclass
class FreeNilpotent:
    """The free nilpotent group Psi_{n,c} with its hull and Hall data."""

    n: int
    c: int
    algebra: NilpotentLieAlgebra
    trees: list
    weights: list
    hull: HullResult

    def generator_logs(self):
        return [tuple(Fraction(int(i == t)) for t in range(self.algebra.dim))
                for i in range(self.n)]

    def generators(self):
        return [GroupElement(self.algebra, g) for g in self.generator_logs()]

    def group(self) -> GenGroup:
        return GenGroup(self.algebra, tuple(self.generator_logs()))


def psi_group(n: int, c: int, cap: int = 200) -> FreeNilpotent:
    """Psi_{n,c} = <exp x_1, ..., exp x_n> with its lattice hull."""
    alg = free_algebra(n, c, cap)
    trees, weights = hall_basis(n, c, cap)
    gens = [tuple(Fraction(int(i == t)) for t in range(alg.dim)) for i in range(n)]
    hull = lattice_hull(GenGroup(alg, tuple(gens)))
    if hull.embedding is not None:
        raise AssertionError("free generators must span the free algebra")
    return FreeNilpotent(n, c, alg, trees, weights, hull)


def center(psi: FreeNilpotent):
    """(center subspace, hull center lattice, group center lattice).

    The center of the algebra is computed as the exact kernel of ad on the
    generators; for a free nilpotent algebra it equals the top layer, which
    is asserted.  The group center lattice is the integer span of the
    weight-c Hall vectors: the top-weight basic commutators of the group
    generators realize it exactly (top-layer BCH commutators have no
    correction terms), and this is the classical description of
    Z(Psi_{n,c}) = gamma_c(Psi_{n,c}).
    """
    alg = psi.algebra
    k = alg.dim
    conditions = []
    for j in range(psi.n):
        ej = tuple(Fraction(int(j == t)) for t in range(k))
        for l in range(k):
            row = []
            for i in range(k):
                ei = tuple(Fraction(int(i == t)) for t in range(k))
                row.append(alg.bracket(ei, ej)[l])
            conditions.append(row)
    den = linalg.lcm_list([x.denominator for row in conditions for x in row] or [1])
    cond_int = [[int(x * den) for x in row] for row in conditions]
    z_rows = [tuple(Fraction(x) for x in r)
              for r in linalg.right_kernel(cond_int, k)]
    top = [i for i, w in enumerate(psi.weights) if w == psi.c]
    top_span = [tuple(Fraction(int(i == t)) for t in range(k)) for i in top]
    assert len(z_rows) == len(top) and all(
        linalg.in_span(top_span, z) for z in z_rows), \
        "free nilpotent center must be the top layer"
    hull_center = intersect_subspace(psi.hull.lattice, z_rows)
    group_center = hnf_lattice(top_span, k)
    return tuple(z_rows), hull_center, group_center


# ---------------------------------------------------------------------------
# generator-image endomorphisms


def endo_matrix(psi: FreeNilpotent, image_logs):
    """Matrix of the algebra endomorphism sending x_i to the given logs.

    Free nilpotent: any generator assignment extends uniquely; deeper Hall
    basis vectors go to the corresponding brackets of the images.
    """
    alg = psi.algebra
    k = alg.dim
    images = [vec(v) for v in image_logs]
    if len(images) != psi.n:
        raise ValueError("need exactly one image per generator")
    cols = list(images)
    for idx in range(psi.n, k):
        a, b = psi.trees[idx]
        cols.append(alg.bracket(cols[a], cols[b]))
    return tuple(tuple(cols[j][i] for j in range(k)) for i in range(k))


def evaluate_word(psi: FreeNilpotent, word) -> GroupElement:
    """Product of generator powers; word is a list of (gen_index, exponent)."""
    out = GroupElement.identity(psi.algebra)
    gens = psi.generators()
    for idx, e in word:
        out = out * (gens[idx] ** e)
    return out


def word_endo_matrix(psi: FreeNilpotent, words):
    return endo_matrix(psi, [evaluate_word(psi, w).log for w in words])


def is_word_automorphism(psi: FreeNilpotent, words) -> bool:
    """Generator words define an automorphism iff the abelianized matrix is
    in GL_n(Z) (images generating mod the derived subgroup generate, and a
    f.g. nilpotent group is Hopfian)."""
    M = word_endo_matrix(psi, words)
    ab = [[M[i][j] for j in range(psi.n)] for i in range(psi.n)]
    if any(x.denominator != 1 for row in ab for x in row):
        return False
    return abs(linalg.det(ab)) == 1


def abelianized_matrix(psi: FreeNilpotent, words):
    M = word_endo_matrix(psi, words)
    return tuple(tuple(int(M[i][j]) for j in range(psi.n)) for i in range(psi.n))


def aut_restriction(psi_low: FreeNilpotent, psi_high: FreeNilpotent, words):
    """Lift an automorphism of Psi_{n,c} to Psi_{n,c+1} by reusing its words.

    Returns the endomorphism matrix at the higher class; checked to be an
    automorphism whose restriction to the lower class equals the input.
    """
    if psi_low.n != psi_high.n or psi_low.c + 1 != psi_high.c:
        raise ValueError("aut_restriction lifts Psi_{n,c} to Psi_{n,c+1}")
    if not is_word_automorphism(psi_low, words):
        raise ValueError("input words are not an automorphism at the lower class")
    if not is_word_automorphism(psi_high, words):
        raise AssertionError("lift failed to be an automorphism")
    M_high = word_endo_matrix(psi_high, words)
    M_low = word_endo_matrix(psi_low, words)
    k_low = psi_low.algebra.dim
    # Hall bases are prefix-compatible, so restriction is the leading block
    restriction = tuple(tuple(M_high[i][j] for j in range(k_low))
                        for i in range(k_low))
    if restriction != M_low:
        raise AssertionError("restriction of the lift differs from the input")
    return M_high


# ---------------------------------------------------------------------------
# the central-tuple isomorphism


@dataclass
class CentralTupleIso:
    """Bidirectional map between central n-tuples and generator-shift maps.

    Forward reads off u_i = x_i^{-1} alpha(x_i) and checks centrality;
    backward builds alpha from a tuple of central elements.  Composition
    satisfies (beta o alpha)(x_i) = x_i v_i u_i.
    """

    psi: FreeNilpotent
    center_rows: tuple
    group_center: Lattice

    def backward(self, tuple_logs):
        """Images of the generators for the map x_i -> x_i * u_i."""
        if len(tuple_logs) != self.psi.n:
            raise ValueError("need one central element per generator")
        gens = self.psi.generators()
        images = []
        for g, u in zip(gens, tuple_logs):
            u = vec(u)
            if not linalg.in_span(list(self.center_rows), u):
                raise ValueError("tuple entry is not central")
            if not self.group_center.member(u):
                raise ValueError("tuple entry is not in the group center")
            images.append(g * GroupElement(self.psi.algebra, u))
        return [im.log for im in images]

    def forward(self, image_logs):
        """Recover the central tuple from the images of the generators."""
        gens = self.psi.generators()
        out = []
        for g, im in zip(gens, image_logs):
            u = (g.inverse() * GroupElement(self.psi.algebra, vec(im))).log
            if not linalg.in_span(list(self.center_rows), u):
                raise ValueError("map is not a central shift of the generators")
            if not self.group_center.member(u):
                raise ValueError("central part leaves the group center")
            out.append(u)
        return out

    def compose(self, images_beta, images_alpha):
        """Images of beta o alpha (apply alpha first)."""
        B = endo_matrix(self.psi, images_beta)
        return [linalg.mat_apply(B, im) for im in images_alpha]

    def box_roundtrip(self, bound: int):
        """forward(backward(t)) == t for every tuple in the box [-b, b]^...

        Returns (tuples_checked, injective).  The inner loop uses the
        compiled BCH map with the generator argument substituted, which is
        the same exact evaluation specialized once per generator.
        """
        from .compiled import bch_symbolic, compile_polys
        psi = self.psi
        alg = psi.algebra
        k = alg.dim
        top = [i for i, w in enumerate(psi.weights) if w == psi.c]
        sym = bch_symbolic(alg)

        def specialize(const_first, polys):
            # substitute u = const_first; leave v symbolic (vars k..2k-1 -> 0..k-1)
            out = []
            for p in polys:
                q = {}
                for mono, coeff in p.items():
                    c = coeff
                    rest = []
                    for v in mono:
                        if v < k:
                            c *= const_first[v]
                        else:
                            rest.append(v - k)
                    if c:
                        m = tuple(sorted(rest))
                        q[m] = q.get(m, 0) + c
                out.append({m: c for m, c in q.items() if c})
            return compile_polys(out)

        gens = [tuple(Fraction(int(i == t)) for t in range(k))
                for i in range(psi.n)]
        mul_gen = [specialize(g, sym) for g in gens]
        mul_geninv = [specialize(tuple(-x for x in g), sym) for g in gens]

        import itertools
        width = range(-bound, bound + 1)
        seen = set()
        count = 0
        r = len(top)
        for flat in itertools.product(width, repeat=psi.n * r):
            images = []
            for i in range(psi.n):
                u = [0] * k
                for t, z in enumerate(top):
                    u[z] = flat[i * r + t]
                images.append(mul_gen[i].eval_int(tuple(u)))
            recovered = []
            for i in range(psi.n):
                rec = mul_geninv[i].eval_int(images[i])
                for pos, x in enumerate(rec):
                    if pos in top:
                        continue
                    if x != 0:
                        raise AssertionError("recovered shift is not central")
                recovered.extend(rec[z] for z in top)
            if tuple(recovered) != flat:
                raise AssertionError(f"roundtrip failed at {flat}")
            seen.add(tuple(im for image in images for im in image))
            count += 1
        return count, len(seen) == count


def central_tuple_iso(psi: FreeNilpotent) -> CentralTupleIso:
    z_rows, _, group_center = center(psi)
    return CentralTupleIso(psi, z_rows, group_center)


def psi_algebra_only(n: int, c: int, cap: int = 200) -> FreeNilpotent:
    """FreeNilpotent without the hull (enough for word/endomorphism work)."""
    alg = free_algebra(n, c, cap)
    trees, weights = hall_basis(n, c, cap)
    return FreeNilpotent(n, c, alg, trees, weights, None)
