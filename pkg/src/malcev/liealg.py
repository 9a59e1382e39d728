"""Nilpotent Lie algebras over Q given by explicit structure constants.

Elements are plain tuples of Fractions in the algebra basis.  The group side
(exponential coordinates of the first kind) lives in :class:`GroupElement`,
whose multiplication is the BCH formula; powers and roots are scalar
multiplications of the log vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import bch, linalg
from .errors import AlgebraMismatch, DimensionMismatch


def vec(values):
    return tuple(Fraction(x) for x in values)


def zero_vec(k):
    return (Fraction(0),) * k


def add_vec(a, b):
    return tuple(x + y for x, y in zip(a, b))


def scale_vec(q, a):
    q = Fraction(q)
    return tuple(q * x for x in a)


class NilpotentLieAlgebra:
    """Structure-constant Lie algebra; brackets stored sparsely for i < j."""

    def __init__(self, dim: int, brackets: dict, nilpotency_class: int | None = None):
        self.dim = dim
        table = {}
        for (i, j), value in brackets.items():
            if not (0 <= i < j < dim):
                raise ValueError(f"bracket key ({i},{j}) not in canonical i<j range")
            v = vec(value)
            if len(v) != dim:
                raise DimensionMismatch("bracket value has wrong length")
            if any(v):
                table[(i, j)] = v
        self.brackets = table
        self._lcs = None
        self._compiled_bch = None
        computed = len(self.lcs()) - 1  # raises if not nilpotent
        if nilpotency_class is None:
            nilpotency_class = computed
        elif nilpotency_class != computed:
            raise ValueError(f"declared class {nilpotency_class} but the lower"
                             f" central series vanishes at step {computed}")
        self.nilpotency_class = nilpotency_class

    @staticmethod
    def abelian(n: int) -> "NilpotentLieAlgebra":
        return NilpotentLieAlgebra(n, {}, 1)

    # -- bracket -----------------------------------------------------------

    def bracket_basis(self, i: int, j: int):
        if i == j:
            return zero_vec(self.dim)
        if i < j:
            return self.brackets.get((i, j), zero_vec(self.dim))
        v = self.brackets.get((j, i))
        return scale_vec(-1, v) if v is not None else zero_vec(self.dim)

    def bracket(self, x, y):
        if len(x) != self.dim or len(y) != self.dim:
            raise DimensionMismatch("bracket operand has wrong length")
        out = [Fraction(0)] * self.dim
        for (i, j), v in self.brackets.items():
            c = x[i] * y[j] - x[j] * y[i]
            if c:
                for l, w in enumerate(v):
                    if w:
                        out[l] += c * w
        return tuple(out)

    # -- lower central series ----------------------------------------------

    def lcs(self):
        """Bases of gamma_1 >= gamma_2 >= ... >= gamma_{c+1} = 0.

        The last entry is always the empty basis.
        """
        if self._lcs is None:
            chain = [linalg.mat_identity(self.dim, Fraction(1))]
            while chain[-1]:
                prev = chain[-1]
                gens = []
                for u in prev:
                    for b in range(self.dim):
                        e = tuple(Fraction(int(b == t)) for t in range(self.dim))
                        w = self.bracket(u, e)
                        if any(w):
                            gens.append(w)
                nxt = linalg.span_basis(gens)
                if len(nxt) == len(prev):
                    raise ValueError("structure constants are not nilpotent")
                chain.append(nxt)
            self._lcs = chain
        return self._lcs

    def derived_subspace(self):
        """Basis of L' = gamma_2."""
        return self.lcs()[1] if len(self.lcs()) > 1 else ()

    # -- validation ----------------------------------------------------------

    def validate(self):
        """Check antisymmetry (by construction), Jacobi, and the class.

        Returns a report dict with a list of violations (empty if valid) and
        the computed nilpotency class.
        """
        violations = []
        k = self.dim
        basis = [tuple(Fraction(int(i == t)) for t in range(k)) for i in range(k)]
        for i in range(k):
            for j in range(i + 1, k):
                for l in range(j + 1, k):
                    s = add_vec(
                        add_vec(self.bracket(basis[i], self.bracket(basis[j], basis[l])),
                                self.bracket(basis[j], self.bracket(basis[l], basis[i]))),
                        self.bracket(basis[l], self.bracket(basis[i], basis[j])))
                    if any(s):
                        violations.append(("jacobi", (i, j, l)))
        computed_class = len(self.lcs()) - 1
        if computed_class != self.nilpotency_class:
            violations.append(("class mismatch",
                               (self.nilpotency_class, computed_class)))
        return {"valid": not violations, "violations": violations,
                "class": computed_class}

    # -- BCH -----------------------------------------------------------------

    def bch(self, x, y):
        """z with exp(x)exp(y) = exp(z); exact, finite in a nilpotent algebra."""
        if len(x) != self.dim or len(y) != self.dim:
            raise DimensionMismatch("bch operand has wrong length")
        out = bch.bch_apply(self.bracket, x, y, self.nilpotency_class,
                            add_vec, scale_vec)
        return out if out is not None else zero_vec(self.dim)

    def bch_compiled(self):
        """Compiled integer-monomial form of bch in this basis (cached)."""
        if self._compiled_bch is None:
            from .compiled import compile_bch
            self._compiled_bch = compile_bch(self)
        return self._compiled_bch

    # -- basis changes ---------------------------------------------------------

    def change_basis(self, new_basis_rows):
        """Structure constants w.r.t. a new basis given in current coords.

        Returns (algebra, to_new, to_old) where the converters map coordinate
        vectors between the two bases.
        """
        k = self.dim
        B = [vec(r) for r in new_basis_rows]
        if len(B) != k:
            raise DimensionMismatch("new basis must have full size")
        Binv_cols = linalg.mat_inv([[B[i][j] for i in range(k)] for j in range(k)])
        if Binv_cols is None:
            raise ValueError("new basis is singular")

        def to_old(u):
            return tuple(sum(u[i] * B[i][j] for i in range(k)) for j in range(k))

        def to_new(v):
            # solve sum u_i B_i = v via the precomputed inverse of B^T
            return linalg.mat_apply(Binv_cols, v)

        table = {}
        for i in range(k):
            for j in range(i + 1, k):
                w = to_new(self.bracket(B[i], B[j]))
                if any(w):
                    table[(i, j)] = w
        alg = NilpotentLieAlgebra(k, table, self.nilpotency_class)
        return alg, to_new, to_old

    def restrict(self, span_rows):
        """Subalgebra on the given (bracket-closed) span.

        Returns (subalgebra, embed) with embed mapping subalgebra coordinate
        vectors back into the ambient coordinates.
        """
        S = linalg.span_basis(span_rows)
        r = len(S)
        table = {}
        for i in range(r):
            for j in range(i + 1, r):
                w = self.bracket(S[i], S[j])
                c = linalg.solve_coords(S, w)
                if c is None:
                    raise ValueError("span is not closed under the bracket")
                if any(c):
                    table[(i, j)] = c
        sub = NilpotentLieAlgebra(r, table)

        def embed(u):
            return tuple(sum(Fraction(u[i]) * S[i][j] for i in range(r))
                         for j in range(self.dim))

        return sub, embed

    def __repr__(self):
        return (f"NilpotentLieAlgebra(dim={self.dim}, "
                f"class={self.nilpotency_class}, "
                f"brackets={len(self.brackets)})")


def validate_structure_constants(dim: int, raw_brackets: dict):
    """Validate a possibly redundant bracket table (both (i,j) and (j,i)).

    Returns (report, canonical_table).  Antisymmetry violations are reported
    with their witness pair, as are inconsistent duplicate entries.
    """
    violations = []
    canonical = {}
    for (i, j), value in raw_brackets.items():
        if i == j:
            if any(Fraction(x) for x in value):
                violations.append(("antisymmetry", (i, j)))
            continue
        a, b = (i, j) if i < j else (j, i)
        v = vec(value)
        if (i, j) != (a, b):
            v = scale_vec(-1, v)
        if (a, b) in canonical:
            if canonical[(a, b)] != v:
                violations.append(("antisymmetry", (a, b)))
            continue
        canonical[(a, b)] = v
    report = {"valid": not violations, "violations": violations}
    return report, canonical


@dataclass(frozen=True)
class GroupElement:
    """Element of exp(L) in exponential coordinates of the first kind."""

    algebra: NilpotentLieAlgebra
    log: tuple

    @staticmethod
    def from_log(algebra, coords) -> "GroupElement":
        return GroupElement(algebra, vec(coords))

    @staticmethod
    def identity(algebra) -> "GroupElement":
        return GroupElement(algebra, zero_vec(algebra.dim))

    def _check(self, other):
        if self.algebra is not other.algebra:
            raise AlgebraMismatch("elements of different algebras")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(self.algebra, self.algebra.bch(self.log, other.log))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.algebra, scale_vec(-1, self.log))

    def __pow__(self, q) -> "GroupElement":
        """g**q for any rational q; roots are exact (q = 1/m)."""
        return GroupElement(self.algebra, scale_vec(Fraction(q), self.log))

    def root(self, m: int) -> "GroupElement":
        if m < 1:
            raise ValueError("root index must be >= 1")
        return self ** Fraction(1, m)

    def is_identity(self) -> bool:
        return not any(self.log)
