"""Literal, unoptimised readings of the definitions, used as test oracles."""
from itertools import product as cartesian

from prelab.relcore import Relation


def reflexive_relations(n):
    """Every relation containing the diagonal, as sets of pairs."""
    off = [(x, y) for x, y in cartesian(range(n), repeat=2) if x != y]
    diag = {(x, x) for x in range(n)}
    for k in range(1 << len(off)):
        yield frozenset(diag | {p for i, p in enumerate(off) if k >> i & 1})


def pairs(r: Relation) -> frozenset:
    return frozenset((x, y) for x in range(r.n) for y in range(r.n) if r.rows[x] >> y & 1)


def up_family(n, basis) -> set:
    base = [pairs(b) for b in basis]
    return {u for u in reflexive_relations(n) if any(b <= u for b in base)}


def comp(a, b):
    return frozenset((x, y) for x, z in a for w, y in b if z == w)


def inv(a):
    return frozenset((y, x) for x, y in a)


def axioms(n, family) -> dict:
    fam = set(family)
    diag = frozenset((x, x) for x in range(n))
    comps = {comp(v, w) for v in fam for w in fam}
    squares = {comp(v, v) for v in fam}
    meet = frozenset.intersection(*fam) if fam else None
    return {
        "U1": all(diag <= u for u in fam),
        "U2": all(inv(u) in fam for u in fam),
        "U3": all(any(c <= u for c in comps) for u in fam),
        "U5": meet == diag,
        "U6": all(u & v in fam for u in fam for v in fam),
        "U2'": all(any(v <= u and v == inv(v) for v in fam) for u in fam),
        "U3'": all(any(s <= u for s in squares) for u in fam),
    }


def induced_opens(n, family) -> set:
    out = set()
    for g in range(1 << n):
        pts = [x for x in range(n) if g >> x & 1]
        if all(any(all(g >> y & 1 for (a, y) in u if a == x) for u in family) for x in pts):
            out.add(g)
    return out


def near(n, family, a, b) -> bool:
    """``A`` near ``B`` iff every entourage links a point of ``A`` to a point of ``B``."""
    return all(any((x, y) in u for x in range(n) if a >> x & 1 for y in range(n) if b >> y & 1)
               for u in family)


def closure_from_near(n, near_fn, a) -> int:
    return sum(1 << x for x in range(n) if near_fn(1 << x, a))
