"""JSON interchange formats (bit-exact round trips).

Rationals travel as "num/den" strings (plain "n" accepted on input);
bracket indices in algebra documents are 1-based, matching the usual
mathematical labeling; everything internal is 0-based.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .finite import FiniteGroup
from .hull import GenGroup
from .lattices import Lattice
from .liealg import NilpotentLieAlgebra, validate_structure_constants


class FormatError(ValueError):
    """Malformed interchange document; carries a location string."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


def format_rat(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 \
        else str(x.numerator)


def parse_rat(s, where: str = "rational") -> Fraction:
    try:
        if isinstance(s, str):
            if "/" in s:
                num, den = s.split("/")
                return Fraction(int(num), int(den))
            return Fraction(int(s))
        if isinstance(s, int):
            return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise FormatError(where, f"bad rational {s!r}: {e}") from None
    raise FormatError(where, f"bad rational {s!r}")


# -- lattice -----------------------------------------------------------------

def lattice_to_doc(lat: Lattice) -> dict:
    return {"dim": lat.dim, "den": lat.den,
            "rows": [list(r) for r in lat.rows]}


def lattice_from_doc(doc, where: str = "lattice") -> Lattice:
    try:
        dim = int(doc["dim"])
        den = int(doc["den"])
        rows = [[int(x) for x in row] for row in doc["rows"]]
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(where, str(e)) from None
    if den < 1:
        raise FormatError(where, "denominator must be positive")
    for row in rows:
        if len(row) != dim:
            raise FormatError(where, "row length differs from dim")
    return Lattice.from_den_rows(dim, den, rows)


# -- algebra -----------------------------------------------------------------

def algebra_to_doc(alg: NilpotentLieAlgebra) -> dict:
    brackets = []
    for (i, j), v in sorted(alg.brackets.items()):
        brackets.append([i + 1, j + 1, [format_rat(x) for x in v]])
    return {"dim": alg.dim, "class": alg.nilpotency_class, "brackets": brackets}


def algebra_from_doc(doc, where: str = "algebra") -> NilpotentLieAlgebra:
    try:
        dim = int(doc["dim"])
        cls = int(doc["class"])
        entries = doc["brackets"]
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(where, str(e)) from None
    raw = {}
    for idx, item in enumerate(entries):
        loc = f"{where}.brackets[{idx}]"
        try:
            i, j, value = item
            i, j = int(i) - 1, int(j) - 1
        except (TypeError, ValueError) as e:
            raise FormatError(loc, str(e)) from None
        if not (0 <= i < dim and 0 <= j < dim):
            raise FormatError(loc, "index out of range")
        if len(value) != dim:
            raise FormatError(loc, "bracket vector has wrong length")
        raw[(i, j)] = tuple(parse_rat(x, loc) for x in value)
    report, canonical = validate_structure_constants(dim, raw)
    if not report["valid"]:
        raise FormatError(where, f"inconsistent brackets: {report['violations']}")
    try:
        alg = NilpotentLieAlgebra(dim, canonical, cls)
    except ValueError as e:
        raise FormatError(where, str(e)) from None
    return alg


# -- generated group ----------------------------------------------------------

def group_to_doc(group: GenGroup) -> dict:
    return {"algebra": algebra_to_doc(group.algebra),
            "generators": [[format_rat(x) for x in g] for g in group.gen_logs],
            "filtered": bool(group.filtered)}


def group_from_doc(doc, where: str = "group") -> GenGroup:
    alg = algebra_from_doc(doc.get("algebra", {}), where + ".algebra")
    gens = doc.get("generators")
    if not gens:
        raise FormatError(where, "nonempty generators required")
    logs = []
    for idx, g in enumerate(gens):
        if len(g) != alg.dim:
            raise FormatError(f"{where}.generators[{idx}]", "wrong length")
        logs.append(tuple(parse_rat(x, f"{where}.generators[{idx}]") for x in g))
    return GenGroup(alg, tuple(logs), bool(doc.get("filtered", False)))


# -- automorphism ---------------------------------------------------------------

def automorphism_to_doc(matrix) -> dict:
    return {"k": len(matrix),
            "matrix": [[format_rat(x) for x in row] for row in matrix]}


def automorphism_from_doc(doc, where: str = "automorphism"):
    try:
        k = int(doc["k"])
        rows = doc["matrix"]
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(where, str(e)) from None
    if len(rows) != k or any(len(r) != k for r in rows):
        raise FormatError(where, "matrix must be k x k")
    return tuple(tuple(parse_rat(x, where) for x in row) for row in rows)


# -- finite group -----------------------------------------------------------------

def finite_group_to_doc(group: FiniteGroup) -> dict:
    return {"order": group.order, "cayley": [list(r) for r in group.cayley]}


def finite_group_from_doc(doc, where: str = "finite group") -> FiniteGroup:
    try:
        order = int(doc["order"])
        table = [[int(x) for x in row] for row in doc["cayley"]]
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(where, str(e)) from None
    if len(table) != order or any(len(r) != order for r in table):
        raise FormatError(where, "cayley table must be order x order")
    if any(x < 0 or x >= order for row in table for x in row):
        raise FormatError(where, "cayley entries out of range")
    try:
        return FiniteGroup(table)
    except ValueError as e:
        raise FormatError(where, str(e)) from None


# -- fiber groups ------------------------------------------------------------------

def fiber_to_doc(u) -> dict:
    return {
        "hull_group": group_to_doc(GenGroup(u.hull.algebra,
                                            tuple(u.hull.basis), True)),
        "level": u.side.level,
        "pi1": list(u.side.to_q),
        "p2": finite_group_to_doc(u.p2),
        "pi2": list(u.pi2),
        "q": finite_group_to_doc(u.side.q),
    }


def fiber_from_doc(doc, where: str = "fiber"):
    from .fiber import FiberGroup, HullSide
    from .hull import lattice_hull
    group = group_from_doc(doc.get("hull_group", {}), where + ".hull_group")
    hull = lattice_hull(group)
    try:
        level = int(doc["level"])
        pi1 = [int(x) for x in doc["pi1"]]
        pi2 = [int(x) for x in doc["pi2"]]
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(where, str(e)) from None
    q = finite_group_from_doc(doc.get("q", {}), where + ".q")
    p2 = finite_group_from_doc(doc.get("p2", {}), where + ".p2")
    try:
        side = HullSide(hull, level, pi1, q)
        return FiberGroup(side, p2, pi2)
    except ValueError as e:
        raise FormatError(where, str(e)) from None


def dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load(text: str, where: str = "document"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{where}:{e.lineno}:{e.colno}", e.msg) from None
