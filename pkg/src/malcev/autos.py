"""Automorphisms of L, normalizers of the hull lattice, and IA* machinery.

In adapted coordinates the hull lattice is Z^k and an IA* element is I + N
with N supported on strictly-deeper-layer positions, subject to the
automorphism equations.  Those equations are compiled once per hull into
integer polynomials graded by depth: each stratum is affine-linear in its
own unknowns over the earlier ones, which gives exact mod-m solving and
Hensel-style integral lifting.

Mod-m solution sets are taken, by default, in the torsion-free (saturated)
integral model: each graded stratum's row space is saturated in Z^n before
reduction.  The raw equations can have Z-torsion (e.g. a row 2p - 6a = 0
whose mod-2^j solutions include points no characteristic-zero automorphism
reduces to); the saturated model is the one whose Z_p-points the congruence
arguments actually use.  ``saturate=False`` exposes the raw variety.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import linalg
from .compiled import poly_add, poly_scale, poly_sub, _sym_bracket
from .errors import CapExceeded
from .hull import HullResult
from .lattices import Lattice
from .liealg import NilpotentLieAlgebra, vec


@dataclass(frozen=True)
class LieAutomorphism:
    """A k x k rational matrix satisfying the automorphism equations."""

    algebra: NilpotentLieAlgebra
    matrix: tuple
    adapted_entries: tuple | None = None

    def apply(self, v):
        return linalg.mat_apply(self.matrix, vec(v))

    def compose(self, other: "LieAutomorphism") -> "LieAutomorphism":
        return LieAutomorphism(self.algebra,
                               linalg.mat_mul(self.matrix, other.matrix))

    def inverse(self) -> "LieAutomorphism":
        inv = linalg.mat_inv(self.matrix)
        if inv is None:
            raise ValueError("singular matrix")
        return LieAutomorphism(self.algebra, inv)


def is_lie_aut(alg: NilpotentLieAlgebra, matrix):
    """(ok, witness): do the defining equations hold on all basis pairs?

    Raises ValueError on a singular matrix.  On failure the witness is the
    offending basis pair.
    """
    M = tuple(tuple(Fraction(x) for x in row) for row in matrix)
    if linalg.det(M) == 0:
        raise ValueError("singular matrix is not an automorphism candidate")
    k = alg.dim
    cols = [tuple(M[r][c] for r in range(k)) for c in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            lhs = alg.bracket(cols[i], cols[j])
            rhs = linalg.mat_apply(M, alg.bracket_basis(i, j))
            if lhs != rhs:
                return False, (i, j)
    return True, None


def stabilizes_lattice(aut, lat: Lattice) -> bool:
    """True iff the matrix maps the lattice onto itself (both inclusions)."""
    M = aut.matrix if isinstance(aut, LieAutomorphism) else aut
    inv = linalg.mat_inv(M)
    if inv is None:
        return False
    return all(lat.member(linalg.mat_apply(M, b)) for b in lat.basis()) and \
        all(lat.member(linalg.mat_apply(inv, b)) for b in lat.basis())


def adapted_matrix(hull: HullResult, aut) -> tuple:
    """The matrix of the map w.r.t. the adapted basis (Fractions)."""
    M = aut.matrix if isinstance(aut, LieAutomorphism) else aut
    k = hull.algebra.dim
    cols = [hull.to_adapted(linalg.mat_apply(M, hull.basis[j])) for j in range(k)]
    return tuple(tuple(cols[j][i] for j in range(k)) for i in range(k))


def matrix_from_adapted(hull: HullResult, adapted) -> tuple:
    """Convert an adapted-coordinates matrix back to working coordinates."""
    k = hull.algebra.dim
    cols = []
    for j in range(k):
        e = tuple(Fraction(int(j == t)) for t in range(k))
        u = hull.to_adapted(e)
        v = linalg.mat_apply(adapted, u)
        cols.append(hull.to_working(v))
    return tuple(tuple(cols[j][i] for j in range(k)) for i in range(k))


def aut_star_image(aut: LieAutomorphism, hull: HullResult):
    """The induced d x d integer matrix on the abelianized lattice."""
    A = adapted_matrix(hull, aut)
    d = hull.d
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            x = A[i][j]
            if x.denominator != 1:
                raise ValueError("action does not preserve the abelianized lattice")
            row.append(int(x))
        out.append(tuple(row))
    det = linalg.det(out)
    if abs(det) != 1:
        raise ValueError("abelianized action is not invertible over Z")
    return tuple(out)


def is_ia_star(aut: LieAutomorphism, hull: HullResult) -> bool:
    """Automorphism + stabilizes the hull lattice + identity on L/L'.

    Unitriangularity w.r.t. the adapted ordering then follows (an
    automorphism trivial on L/L' is trivial on every lcs layer), but it is
    asserted too as a consistency check.
    """
    ok, _ = is_lie_aut(hull.algebra, aut.matrix)
    if not ok:
        return False
    if not stabilizes_lattice(aut, hull.lattice):
        return False
    A = adapted_matrix(hull, aut)
    d = hull.d
    for i in range(d):
        for j in range(d):
            if A[i][j] != int(i == j):
                return False
    k = hull.algebra.dim
    layers = hull.layers
    assert all(A[i][j] == int(i == j)
               for j in range(k) for i in range(k)
               if layers[i] <= layers[j]), "IA* element not layer-unitriangular"
    return True


def ia_star_positions(hull: HullResult):
    """Free matrix positions of IA*: (row, col) with layer(row) > layer(col),
    ordered by (depth, col, row)."""
    k = hull.algebra.dim
    layers = hull.layers
    pos = [(r, c) for c in range(k) for r in range(k) if layers[r] > layers[c]]
    pos.sort(key=lambda rc: (layers[rc[0]] - layers[rc[1]], rc[1], rc[0]))
    return pos


def make_ia_star(hull: HullResult, entries: dict) -> LieAutomorphism:
    """Build the IA* candidate with the given adapted entries (others zero)."""
    k = hull.algebra.dim
    layers = hull.layers
    A = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    for (r, c), value in entries.items():
        if layers[r] <= layers[c]:
            raise ValueError(f"position ({r},{c}) is not strictly deeper")
        A[r][c] = Fraction(value)
    working = matrix_from_adapted(hull, tuple(tuple(row) for row in A))
    ents = tuple(int(Fraction(entries.get(p, 0))) for p in ia_star_positions(hull))
    return LieAutomorphism(hull.algebra, working, adapted_entries=ents)


# ---------------------------------------------------------------------------
# compiled IA* equations


class _Stratum:
    __slots__ = ("depth", "vars", "rows", "snf")

    def __init__(self, depth, var_ids):
        self.depth = depth
        self.vars = var_ids          # global variable ids of this depth
        self.rows = []               # (lin_coeffs tuple, rem_terms tuple)
        self.snf = None              # (diag, U, V) of the lin matrix


class IAStarEquations:
    """The automorphism equations on the IA* positions, graded by depth.

    Variables are the free positions; each stratum gathers equations whose
    depth-w unknowns enter linearly and whose remainder is an integer
    polynomial in earlier variables (monomials as variable-id tuples).
    """

    def __init__(self, hull: HullResult, saturate: bool = True):
        self.hull = hull
        self.saturate = saturate
        adapted = hull.adapted_algebra
        k = adapted.dim
        layers = hull.layers
        self.positions = ia_star_positions(hull)
        self.var_of = {p: i for i, p in enumerate(self.positions)}
        self.depth_of_var = [layers[r] - layers[c] for (r, c) in self.positions]
        self.nvars = len(self.positions)
        depths = sorted(set(self.depth_of_var))
        self.strata = [
            _Stratum(w, [i for i in range(self.nvars) if self.depth_of_var[i] == w])
            for w in depths]
        stratum_of_depth = {s.depth: s for s in self.strata}

        # symbolic columns of A = I + N
        cols = []
        for c in range(k):
            col = []
            for r in range(k):
                if r == c:
                    col.append({(): Fraction(1)})
                elif (r, c) in self.var_of:
                    col.append({(self.var_of[(r, c)],): Fraction(1)})
                else:
                    col.append({})
            cols.append(col)

        for i in range(k):
            for j in range(i + 1, k):
                lhs = _sym_bracket(adapted, cols[i], cols[j])
                w_vec = adapted.bracket_basis(i, j)
                for r in range(k):
                    rhs = {}
                    for c in range(k):
                        if w_vec[c]:
                            rhs = poly_add(rhs, poly_scale(w_vec[c], cols[c][r]))
                    p = poly_sub(lhs[r], rhs)
                    if not p:
                        continue
                    depth = layers[r] - layers[i] - layers[j]
                    assert depth >= 1, "non-vacuous equation above the grading"
                    den = linalg.lcm_list([c.denominator for c in p.values()])
                    ip = {m: int(c * den) for m, c in p.items()}
                    lin = [0] * len(stratum_of_depth[depth].vars)
                    rem = {}
                    local = {v: t for t, v in enumerate(stratum_of_depth[depth].vars)}
                    for mono, coeff in ip.items():
                        mono_depth = sum(self.depth_of_var[v] for v in mono)
                        assert mono_depth <= depth, "grading violation"
                        if mono_depth == depth and len(mono) == 1 and \
                                self.depth_of_var[mono[0]] == depth:
                            lin[local[mono[0]]] += coeff
                        else:
                            assert all(self.depth_of_var[v] < depth for v in mono)
                            rem[mono] = rem.get(mono, 0) + coeff
                    stratum_of_depth[depth].rows.append(
                        (tuple(lin), tuple(sorted(rem.items()))))

        for s in self.strata:
            if saturate and s.rows:
                s.rows = self._saturate_stratum(s)
            C = [list(lin) for lin, _ in s.rows]
            s.snf = linalg.snf_with_transforms(C, len(s.vars)) if s.rows \
                else ([], [], [tuple(int(i == j) for j in range(len(s.vars)))
                              for i in range(len(s.vars))])

    def _saturate_stratum(self, s):
        monos = sorted({m for _, rem in s.rows for m, _ in rem})
        mono_col = {m: i for i, m in enumerate(monos)}
        width = len(s.vars) + len(monos)
        mat = []
        for lin, rem in s.rows:
            row = list(lin) + [0] * len(monos)
            for m, c in rem:
                row[len(s.vars) + mono_col[m]] = c
            mat.append(row)
        sat = linalg.saturate_rows(mat, width)
        out = []
        for row in sat:
            lin = tuple(row[:len(s.vars)])
            rem = tuple((m, row[len(s.vars) + i]) for i, m in enumerate(monos)
                        if row[len(s.vars) + i])
            out.append((lin, rem))
        return out

    # -- evaluation helpers -------------------------------------------------

    def _rem_value(self, rem, values):
        total = 0
        for mono, coeff in rem:
            v = coeff
            for var in mono:
                v *= values[var]
            total += v
        return total

    def check_assignment(self, values) -> bool:
        """Exact check of every (saturated) equation on integer values."""
        for s in self.strata:
            for lin, rem in s.rows:
                t = self._rem_value(rem, values)
                t += sum(c * values[v] for c, v in zip(lin, s.vars))
                if t:
                    return False
        return True

    # -- mod-m solving --------------------------------------------------------

    def solutions_mod(self, m: int, cap: int | None = None):
        """All solutions mod m, as tuples over the variables (values in [0, m))."""
        if m < 1:
            raise ValueError("modulus must be >= 1")
        out = []
        values = [0] * self.nvars

        def rec(idx):
            if idx == len(self.strata):
                out.append(tuple(values))
                if cap is not None and len(out) > cap:
                    raise CapExceeded(f"more than {cap} mod-{m} points")
                return
            s = self.strata[idx]
            u = len(s.vars)
            if not s.rows:
                for combo in itertools.product(range(m), repeat=u):
                    for v, val in zip(s.vars, combo):
                        values[v] = val
                    rec(idx + 1)
                return
            b = [(-self._rem_value(rem, values)) for _, rem in s.rows]
            diag, U, V = s.snf
            c = [sum(U[i][j] * b[j] for j in range(len(b))) for i in range(len(b))]
            rank = len(diag)
            if any(c[i] % m for i in range(rank, len(c))):
                return
            options = []
            ok = True
            for i in range(u):
                if i < rank:
                    d = diag[i]
                    g = gcd(d, m)
                    if c[i] % g:
                        ok = False
                        break
                    mg = m // g
                    if mg == 1:
                        y0 = 0
                    else:
                        y0 = ((c[i] // g) * pow(d // g, -1, mg)) % mg
                    options.append([(y0 + t * mg) % m for t in range(g)])
                else:
                    options.append(list(range(m)))
            if not ok:
                return
            for y in itertools.product(*options):
                for t in range(u):
                    values[s.vars[t]] = sum(V[t][j] * y[j] for j in range(u)) % m
                rec(idx + 1)

        rec(0)
        return out

    def lift(self, assignment, m: int):
        """An exact integer solution congruent to the mod-m point, or None.

        Straight-line Hensel: each stratum is solved exactly over Z with the
        congruence constraint; free coordinates of the correction are zero.
        """
        exact = [None] * self.nvars
        for s in self.strata:
            u = len(s.vars)
            xbar = [assignment[v] % m for v in s.vars]
            if not s.rows:
                for v, val in zip(s.vars, xbar):
                    exact[v] = val
                continue
            resid = []
            for lin, rem in s.rows:
                t = self._rem_value(rem, exact) + \
                    sum(c * x for c, x in zip(lin, xbar))
                if t % m:
                    return None
                resid.append(-(t // m))
            diag, U, V = s.snf
            c = [sum(U[i][j] * resid[j] for j in range(len(resid)))
                 for i in range(len(resid))]
            rank = len(diag)
            if any(c[i] for i in range(rank, len(c))):
                return None
            w = [0] * u
            feasible = True
            for i in range(rank):
                if c[i] % diag[i]:
                    feasible = False
                    break
                w[i] = c[i] // diag[i]
            if not feasible:
                return None
            z = [sum(V[t][j] * w[j] for j in range(u)) for t in range(u)]
            for t, v in enumerate(s.vars):
                exact[v] = xbar[t] + m * z[t]
        return tuple(exact)

    def enumerate_integral(self, bound: int, cap: int = 10 ** 6):
        """All exact integer solutions with every variable in [-bound, bound]."""
        out = []
        values = [0] * self.nvars
        counter = [0]

        def rec(idx):
            if idx == len(self.strata):
                out.append(tuple(values))
                return
            s = self.strata[idx]
            width = 2 * bound + 1
            counter[0] += width ** len(s.vars)
            if counter[0] > cap:
                raise CapExceeded("integral enumeration box exceeds cap")
            for combo in itertools.product(range(-bound, bound + 1),
                                           repeat=len(s.vars)):
                ok = True
                for lin, rem in s.rows:
                    t = self._rem_value(rem, values) + \
                        sum(c * x for c, x in zip(lin, combo))
                    if t:
                        ok = False
                        break
                if ok:
                    for v, val in zip(s.vars, combo):
                        values[v] = val
                    rec(idx + 1)

        rec(0)
        return out

    def random_point(self, rng: random.Random, spread: int = 3,
                     multiple: int = 1):
        """A random exact integer solution (free coordinates randomized)."""
        exact = [None] * self.nvars
        for s in self.strata:
            u = len(s.vars)
            diag, U, V = s.snf
            rank = len(diag)
            if not s.rows:
                for v in s.vars:
                    exact[v] = multiple * rng.randint(-spread, spread)
                continue
            b = [-self._rem_value(rem, exact) for _, rem in s.rows]
            c = [sum(U[i][j] * b[j] for j in range(len(b))) for i in range(len(b))]
            if any(c[i] for i in range(rank, len(c))):
                return None
            w = [0] * u
            for i in range(rank):
                if c[i] % diag[i]:
                    return None
                w[i] = c[i] // diag[i]
            for i in range(rank, u):
                w[i] = multiple * rng.randint(-spread, spread)
            for t, v in enumerate(s.vars):
                exact[v] = sum(V[t][j] * w[j] for j in range(u))
        return tuple(exact)

    # -- matrices ------------------------------------------------------------

    def adapted_matrix(self, values, mod: int | None = None):
        k = self.hull.algebra.dim
        A = [[int(i == j) for j in range(k)] for i in range(k)]
        for (r, c), v in zip(self.positions, values):
            A[r][c] = v
        if mod:
            A = [[x % mod for x in row] for row in A]
        return tuple(tuple(row) for row in A)

    def automorphism(self, values) -> LieAutomorphism:
        entries = {p: v for p, v in zip(self.positions, values)}
        return make_ia_star(self.hull, entries)


def enumerate_ia_star(hull: HullResult, bound: int, cap: int = 10 ** 6,
                      eq: IAStarEquations | None = None):
    """All IA* elements with adapted entries in [-bound, bound], validated.

    The list is deterministically ordered by the entry tuple and every
    element is double-checked with is_ia_star.
    """
    if hull.algebra.dim > 6:
        raise CapExceeded("IA* enumeration is capped at dimension 6")
    if bound < 0:
        raise ValueError("entry bound must be >= 0")
    eq = eq or IAStarEquations(hull)
    sols = sorted(eq.enumerate_integral(bound, cap))
    out = []
    for values in sols:
        aut = eq.automorphism(values)
        if not is_ia_star(aut, hull):
            raise AssertionError("equation solution failed is_ia_star validation")
        out.append(aut)
    return out


def _unitriangular_inverse_mod(A, m, layers):
    """Inverse of I+N mod m via the finite Neumann series sum (-N)^i."""
    k = len(A)
    N = [[(A[i][j] - int(i == j)) % m for j in range(k)] for i in range(k)]
    inv = [[int(i == j) for j in range(k)] for i in range(k)]
    term = [[int(i == j) for j in range(k)] for i in range(k)]
    sign = -1
    for _ in range(max(layers)):
        term = [[sum(term[i][t] * N[t][j] for t in range(k)) % m
                 for j in range(k)] for i in range(k)]
        if not any(any(row) for row in term):
            break
        for i in range(k):
            for j in range(k):
                inv[i][j] = (inv[i][j] + sign * term[i][j]) % m
        sign = -sign
    return tuple(tuple(row) for row in inv)


def strong_approx_check(hull: HullResult, m: int,
                        eq: IAStarEquations | None = None,
                        point_cap: int = 500_000, witness_cap: int = 5):
    """Is reduction IA*(Z) -> mod-m points surjective?  Constructive check.

    Every mod-m point is given an explicit integral lift; failures (points
    with no straight-line lift) are reported as witnesses and make the
    result inconclusive rather than a refutation.
    """
    eq = eq or IAStarEquations(hull)
    sols = eq.solutions_mod(m, cap=point_cap)
    failures = []
    lifted = 0
    for a in sols:
        exact = eq.lift(a, m)
        if exact is None:
            failures.append(a)
            if len(failures) >= witness_cap:
                break
            continue
        if any((e - v) % m for e, v in zip(exact, a)):
            raise AssertionError("lift does not reduce to its point")
        lifted += 1
    return {
        "m": m,
        "solution_count": len(sols),
        "lifted": lifted,
        "surjective": not failures,
        "failure_witnesses": failures,
    }


def _matrix_mul_mod(A, B, m):
    k = len(A)
    return tuple(tuple(sum(A[i][t] * B[t][j] for t in range(k)) % m
                       for j in range(k)) for i in range(k))


def mod_m_group(hull: HullResult, m: int, eq: IAStarEquations | None = None,
                point_cap: int = 200_000):
    """The finite group of mod-m points, as a set of adapted matrices."""
    eq = eq or IAStarEquations(hull)
    sols = eq.solutions_mod(m, cap=point_cap)
    return {eq.adapted_matrix(v, mod=m) for v in sols}


def subgroup_closure_mod(hull: HullResult, gens, m: int):
    """Closure of the reduced generators inside the mod-m matrix group."""
    layers = hull.layers
    start = []
    for g in gens:
        A = adapted_matrix(hull, g)
        Ai = tuple(tuple(int(x) % m for x in row) for row in A)
        start.append(Ai)
        start.append(_unitriangular_inverse_mod(Ai, m, layers))
    k = hull.algebra.dim
    ident = tuple(tuple(int(i == j) % m for j in range(k)) for i in range(k))
    closed = {ident}
    frontier = [ident]
    while frontier:
        x = frontier.pop()
        for g in start:
            y = _matrix_mul_mod(x, g, m)
            if y not in closed:
                closed.add(y)
                frontier.append(y)
    return closed


def ia_star_abelian_index(hull: HullResult, gens,
                          eq: IAStarEquations | None = None) -> int:
    """[IA* : <gens>] when IA* is free abelian on its positions.

    That holds when the equations are empty and there is a single depth
    (then products simply add adapted entries).  Raises otherwise.
    """
    eq = eq or IAStarEquations(hull)
    if any(s.rows for s in eq.strata) or len(eq.strata) > 1:
        raise ValueError("IA* is not visibly free abelian; supply the index")
    vecs = []
    for g in gens:
        A = adapted_matrix(hull, g)
        vecs.append([int(A[r][c]) for (r, c) in eq.positions])
    H = linalg.hnf(vecs)
    if len(H) < eq.nvars:
        raise ValueError("generators do not span a finite-index subgroup")
    d = linalg.det(H)
    return abs(int(d))


def csp_witness(hull: HullResult, gens, index: int | None = None,
                level_cap: int = 16, eq: IAStarEquations | None = None,
                point_cap: int = 200_000, samples: int = 100, seed: int = 0):
    """Smallest m <= cap certifying that <gens> contains the level-m kernel.

    The certificate is index equality: if the image of the subgroup in the
    mod-m point group has index equal to [IA* : <gens>], then the reduction
    kernel is contained in the subgroup.  Returns a report dict; if no level
    works within the cap the result is inconclusive (never a refutation).
    """
    eq = eq or IAStarEquations(hull)
    for g in gens:
        if not is_ia_star(g, hull):
            raise ValueError("subgroup generators must pass is_ia_star")
    if index is None:
        index = ia_star_abelian_index(hull, gens, eq)
    rng = random.Random(seed)
    for m in range(1, level_cap + 1):
        universe = mod_m_group(hull, m, eq, point_cap)
        image = subgroup_closure_mod(hull, gens, m)
        if len(universe) % len(image):
            continue
        if len(universe) // len(image) != index:
            continue
        kernel_checked = 0
        for _ in range(samples):
            point = eq.random_point(rng, spread=3, multiple=m)
            if point is None:
                continue
            reduced = eq.adapted_matrix(point, mod=m)
            ident = eq.adapted_matrix((0,) * eq.nvars, mod=m)
            if reduced != ident:
                continue
            if reduced not in image:
                raise AssertionError("kernel element escapes the image")
            kernel_checked += 1
        return {"m": m, "index": index, "universe": len(universe),
                "image": len(image), "kernel_samples": kernel_checked,
                "status": "certified"}
    return {"m": None, "index": index, "status": "inconclusive",
            "level_cap": level_cap}
