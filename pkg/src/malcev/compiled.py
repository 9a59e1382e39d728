"""Compilation of BCH and automorphism equations to integer monomials.

The hot paths (finite quotient Cayley products, mod-m solution enumeration,
large tuple boxes) evaluate polynomial maps millions of times; doing that
with Fraction vectors is too slow.  Here the polynomials are expanded once
symbolically, denominators are cleared, and evaluation runs on plain ints.
"""

from __future__ import annotations

from fractions import Fraction

from . import bch, linalg

# A polynomial is a dict: monomial -> Fraction, where a monomial is a sorted
# tuple of variable indices (with repetition); () is the constant monomial.


def poly_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + c
        if v:
            out[m] = v
        elif m in out:
            del out[m]
    return out


def poly_scale(q, a: dict) -> dict:
    q = Fraction(q)
    if not q:
        return {}
    return {m: q * c for m, c in a.items()}


def poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(sorted(m1 + m2))
            v = out.get(m, 0) + c1 * c2
            if v:
                out[m] = v
            elif m in out:
                del out[m]
    return out


def poly_sub(a: dict, b: dict) -> dict:
    return poly_add(a, poly_scale(-1, b))


def _sym_bracket(alg, x, y):
    """Bracket of two symbolic (poly-coefficient) vectors."""
    out = [dict() for _ in range(alg.dim)]
    for (i, j), w in alg.brackets.items():
        c = poly_sub(poly_mul(x[i], y[j]), poly_mul(x[j], y[i]))
        if not c:
            continue
        for l, coeff in enumerate(w):
            if coeff:
                out[l] = poly_add(out[l], poly_scale(coeff, c))
    return out


def _sym_add(x, y):
    return [poly_add(a, b) for a, b in zip(x, y)]


def _sym_scale(q, x):
    return [poly_scale(q, a) for a in x]


class CompiledPolyMap:
    """A tuple of integer-cleared polynomials evaluated on int arguments."""

    def __init__(self, coords):
        # coords: list of (den, ((num, mono), ...)) per output coordinate
        self.coords = coords

    def eval_int(self, args):
        out = []
        for den, terms in self.coords:
            s = 0
            for num, mono in terms:
                v = num
                for idx in mono:
                    v *= args[idx]
                s += v
            if den != 1:
                q, r = divmod(s, den)
                if r:
                    raise ArithmeticError("compiled map value is not integral here")
                s = q
            out.append(s)
        return tuple(out)


def compile_polys(polys) -> CompiledPolyMap:
    coords = []
    for p in polys:
        den = linalg.lcm_list([c.denominator for c in p.values()] or [1])
        terms = tuple((int(c * den), m) for m, c in sorted(p.items()))
        coords.append((den, terms))
    return CompiledPolyMap(coords)


def bch_symbolic(alg):
    """BCH(u, v) as polynomials in variables u_0..u_{k-1}, v_0..v_{k-1}."""
    k = alg.dim
    u = [{(i,): Fraction(1)} for i in range(k)]
    v = [{(k + i,): Fraction(1)} for i in range(k)]
    out = bch.bch_apply(lambda a, b: _sym_bracket(alg, a, b), u, v,
                        alg.nilpotency_class, _sym_add, _sym_scale)
    return out if out is not None else [dict() for _ in range(k)]


def compile_bch(alg) -> CompiledPolyMap:
    """bch as an int-evaluable map; args are the 2k concatenated coords.

    Integrality of the cleared division is guaranteed only on inputs from a
    BCH-closed lattice expressed in a basis of that lattice (the use case).
    """
    return compile_polys(bch_symbolic(alg))
