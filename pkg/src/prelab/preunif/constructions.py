"""Generation theorems, continuity, coreflection, products and boundedness."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from prelab.pretop import (
    PointMap, PreTopology, is_open_in_product, projections, separation_profile,
)
from prelab.preunif.core import (
    LabelledSearch, PreUniformity, check_axioms, induced_pretopology,
    labelled_preuniformities, sup,
)
from prelab.preunif.covers import cover_of, entourage_is_open, refines, Generated
from prelab.pseudometric import Pseudometric, separation_failure
from prelab.relcore import (
    CarrierMismatch, Relation, SizeLike, _size, bits, compose, diagonal, full,
    full_relation, inverse, is_subset, mask,
)


class PreBaseError(ValueError):
    def __init__(self, axiom: str, witness):
        super().__init__(f"{axiom} fails")
        self.axiom = axiom
        self.witness = witness


class SeparationError(ValueError):
    def __init__(self, pair):
        super().__init__(f"no pseudometric separates points {pair[0]} and {pair[1]}")
        self.pair = pair


class NotT0(ValueError):
    pass


# -- generation -------------------------------------------------------------

def prebase_violation(n: int, family: Sequence[Relation]):
    """First failing condition among containment of the diagonal and (BU1)-(BU3)."""
    d = diagonal(n)
    for v in family:
        if not d <= v:
            return "diagonal", v
    for v in family:
        if not any(inverse(u) <= v for u in family):
            return "BU1", v
    for v in family:
        comps = [(u, w, compose(u, w)) for u in family for w in family]
        if not any(c <= v for _, _, c in comps):
            return "BU2", {"entourage": v, "compositions": comps}
    meet = full_relation(n)
    for v in family:
        meet = meet & v
    if meet != d:
        return "BU3", meet
    return None


def generate_from_prebase(carrier: SizeLike, prebase: Iterable[Relation],
                          tau: Optional[PreTopology] = None) -> Generated:
    n = _size(carrier)
    prebase = list(prebase)
    if not prebase:
        raise ValueError("empty prebase")
    bad = prebase_violation(n, prebase)
    if bad is not None:
        raise PreBaseError(*bad)
    mu = PreUniformity(n, tuple(prebase))
    if tau is None:
        return Generated(mu)
    hyp = all(entourage_is_open(tau, v) for v in prebase) and all(
        any(is_subset(v.rows[x], g) for v in prebase)
        for x in range(n) for g in tau.neighbourhoods(x))
    return Generated(mu, hyp, induced_pretopology(mu) == tau)


def ball_depth(rho: Pseudometric) -> int:
    """Largest ``i`` for which ``{rho < 2^-i}`` can still shrink."""
    pos = rho.positive_values()
    if not pos:
        return 1
    return max(1, math.ceil(-math.log2(min(pos))) + 1)


def dyadic_balls(rho: Pseudometric) -> list[Relation]:
    return [rho.ball(Fraction(1, 2 ** i)) for i in range(1, ball_depth(rho) + 1)]


def generate_from_pseudometrics(family: Iterable[Pseudometric],
                                tau: Optional[PreTopology] = None) -> Generated:
    family = list(family)
    if not family:
        raise ValueError("empty pseudometric family")
    n = family[0].n
    if any(p.n != n for p in family):
        raise CarrierMismatch("pseudometrics on different carriers")
    pair = separation_failure(family, n)
    if pair is not None:
        raise SeparationError(pair)
    mu = PreUniformity(n, tuple(b for p in family for b in dyadic_balls(p)))
    if tau is None:
        return Generated(mu)
    hyp = True
    for x in range(n):
        for a in tau.closed_sets():
            if a == 0 or a >> x & 1:
                continue
            if not any(min(p.d[x][y] for y in bits(a)) > 0 for p in family):
                hyp = False
    hyp = hyp and all(_fibres_open(p, tau) for p in family)
    return Generated(mu, hyp, induced_pretopology(mu) == tau)


def _fibres_open(rho: Pseudometric, tau: PreTopology) -> bool:
    return all(is_open_in_product(tau, tau, f) for f in rho.fibres().values())


# -- uniform continuity -----------------------------------------------------

def map_relation(f: PointMap, m: Relation) -> Relation:
    """``(f x f)(M)``."""
    return Relation.from_pairs(f.target, ((f(x), f(y)) for x, y in m.pairs()))


def pull_relation(f: PointMap, v: Relation) -> Relation:
    """``(f x f)^-1(V)``."""
    return Relation(f.source, tuple(mask(y for y in range(f.source) if (f(x), f(y)) in v)
                                    for x in range(f.source)))


def _check_map(f: PointMap, mu: PreUniformity, nu: PreUniformity):
    if f.source != mu.n or f.target != nu.n:
        raise CarrierMismatch("map does not match the given carriers")


def is_preuniformly_continuous(f: PointMap, mu: PreUniformity, nu: PreUniformity) -> bool:
    _check_map(f, mu, nu)
    return all(any(map_relation(f, m) <= F for m in mu.basis) for F in nu.basis)


def equivalence_closure(v: Relation) -> Relation:
    r = v | inverse(v) | diagonal(v.n)
    while True:
        nxt = compose(r, r)
        if nxt == r:
            return r
        r = nxt


def continuity_forms(f: PointMap, mu: PreUniformity, nu: PreUniformity) -> dict:
    """The four formulations of pre-uniform continuity, each decided on bases.

    ``pseudometric`` quantifies over the pseudometrics on the target that are
    pre-uniform for ``nu``; on a finite carrier such a ``rho`` vanishes on some
    basis member ``V`` and therefore on its equivalence closure, and the 0/1
    metric of that closure is the least forgiving choice.
    """
    _check_map(f, mu, nu)
    entourage = is_preuniformly_continuous(f, mu, nu)
    prebase = all(any(u <= pull_relation(f, v) for u in mu.basis) for v in nu.basis)
    cover = all(
        any(refines(cover_of(m), {f.preimage(a) for a in cover_of(v)}) for m in mu.basis)
        for v in nu.basis)
    pseudo = all(
        any(map_relation(f, m) <= equivalence_closure(v) for m in mu.basis)
        for v in nu.basis)
    return {"entourage": entourage, "prebase": prebase, "cover": cover, "pseudometric": pseudo}


# -- coreflection -----------------------------------------------------------

def intersection_closure(rels: Iterable[Relation]) -> set[Relation]:
    fam = set(rels)
    frontier = set(fam)
    while frontier:
        new = {a & b for a in frontier for b in fam} - fam
        fam |= new
        frontier = new
    return fam


def coreflection(mu: PreUniformity) -> PreUniformity:
    mu.require_valid()
    return PreUniformity(mu.n, tuple(intersection_closure(mu.basis)))


# -- products ---------------------------------------------------------------

def lift(v: Relation, coord: int, n1: int, n2: int) -> Relation:
    """Cylinder over one coordinate of ``X1 x X2`` (point ``(x, y)`` at ``x*n2 + y``)."""
    rows = []
    for p in range(n1 * n2):
        x, y = divmod(p, n2)
        if coord == 1:
            rows.append(mask(a * n2 + b for a in bits(v.rows[x]) for b in range(n2)))
        else:
            rows.append(mask(a * n2 + b for a in range(n1) for b in bits(v.rows[y])))
    return Relation(n1 * n2, tuple(rows))


def cylinder_product(mu1: PreUniformity, mu2: PreUniformity) -> PreUniformity:
    n1, n2 = mu1.n, mu2.n
    return PreUniformity(n1 * n2, tuple([lift(u, 1, n1, n2) for u in mu1.basis]
                                        + [lift(v, 2, n1, n2) for v in mu2.basis]))


def box_product(mu1: PreUniformity, mu2: PreUniformity) -> PreUniformity:
    """Pre-base of finite-intersection form ``lift(U,1) & lift(V,2)``."""
    n1, n2 = mu1.n, mu2.n
    return PreUniformity(n1 * n2, tuple(lift(u, 1, n1, n2) & lift(v, 2, n1, n2)
                                        for u in mu1.basis for v in mu2.basis))


@dataclass(frozen=True)
class ProductResult:
    mu: PreUniformity
    coreflection: Optional[PreUniformity]
    projections_continuous: bool
    coreflection_matches: Optional[bool]


def product(mu1: PreUniformity, mu2: PreUniformity, with_coreflection: bool = True) -> ProductResult:
    mu = cylinder_product(mu1, mu2)
    p1, p2 = projections(mu1.n, mu2.n)
    proj = is_preuniformly_continuous(p1, mu, mu1) and is_preuniformly_continuous(p2, mu, mu2)
    if not with_coreflection:
        return ProductResult(mu, None, proj, None)
    star = coreflection(mu)
    target = box_product(coreflection(mu1), coreflection(mu2))
    return ProductResult(mu, star, proj, star == target)


# -- boundedness ------------------------------------------------------------

def min_dense_set(v: Relation) -> int:
    """A smallest ``A`` with ``V[x] & A`` nonempty for every ``x``."""
    n = v.n
    for k in range(1, n + 1):
        for combo in combinations(range(n), k):
            a = mask(combo)
            if all(v.rows[x] & a for x in range(n)):
                return a
    return full(n)


@dataclass(frozen=True)
class Boundedness:
    totally_bounded: bool
    dense_sets: dict = field(default_factory=dict)


def totally_bounded(mu: PreUniformity) -> Boundedness:
    mu.require_valid()
    return Boundedness(True, {b: min_dense_set(b) for b in mu.basis})


def square_cover(mu: PreUniformity, v: Relation) -> Optional[frozenset]:
    """A smallest cover by sets ``A`` with ``A x A <= V``, or None."""
    mu.require_valid()
    n = v.n
    sym = v & inverse(v)
    cliques = [a for a in range(1, 1 << n)
               if all(is_subset(a, sym.rows[x]) for x in bits(a))]
    maximal = [a for a in cliques if not any(a != b and is_subset(a, b) for b in cliques)]
    for k in range(1, len(maximal) + 1):
        for combo in combinations(maximal, k):
            u = 0
            for a in combo:
                u |= a
            if u == full(n):
                return frozenset(combo)
    return None


# -- universal pre-uniformity -----------------------------------------------

@dataclass(frozen=True)
class UniversalResult:
    mu: Optional[PreUniformity]
    complete: bool
    compatible_count: int
    bound: int
    sup_compatible: Optional[bool]


def universal_preuniformity(tau: PreTopology, basis_size_bound: int) -> UniversalResult:
    if not separation_profile(tau).T0:
        raise NotT0("not T0 - no compatible pre-uniformity exists")
    status = LabelledSearch()
    compatible = [m for m in labelled_preuniformities(tau.n, basis_size_bound, status=status)
                  if induced_pretopology(m) == tau]
    if not compatible:
        return UniversalResult(None, not status.truncated, 0, basis_size_bound, None)
    top = sup(compatible)
    ok = check_axioms(top.n, top.basis).is_preuniformity and induced_pretopology(top) == tau
    return UniversalResult(top, not status.truncated, len(compatible), basis_size_bound, ok)
