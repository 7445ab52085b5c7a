"""Pre-proximities: nearness relations on pairs of subsets of a finite carrier.

A pre-proximity is stored as the set of its near pairs ``(A, B)`` of subset
bitmasks; everything else is far.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product as cartesian
from typing import Callable, Iterable, Iterator, Optional, Sequence

from prelab.pretop import PreTopology, closure, interior, is_pretopology, separation_profile
from prelab.preunif import PreUniformity, contains
from prelab.relcore import (
    CarrierMismatch, Relation, SizeLike, _size, all_subsets, bits, full, full_relation,
    is_subset, mask, permute_mask, rectangle,
)

PP_AXIOMS = ("PP1", "PP2", "PP3", "PP4", "PP5")


class NotAPreProximity(ValueError):
    def __init__(self, report: "PPReport"):
        failed = [a for a in PP_AXIOMS if not report.verdicts[a]]
        super().__init__(f"not a pre-proximity: {', '.join(failed)} fails")
        self.report = report


def _supersets(n: int, b: int) -> Iterator[int]:
    rest = full(n) & ~b
    sub = rest
    while True:
        yield b | sub
        if sub == 0:
            return
        sub = (sub - 1) & rest


def up_closure(n: int, pairs: Iterable[tuple[int, int]]) -> frozenset:
    """Smallest symmetric family containing ``pairs`` and closed under enlarging either side."""
    out = set()
    for a, b in pairs:
        for a2 in _supersets(n, a):
            for b2 in _supersets(n, b):
                out.add((a2, b2))
                out.add((b2, a2))
    return frozenset(out)


@dataclass(frozen=True)
class PreProximity:
    n: int
    near: frozenset

    @classmethod
    def from_predicate(cls, n: SizeLike, fn: Callable[[int, int], bool]) -> "PreProximity":
        n = _size(n)
        return cls(n, frozenset((a, b) for a in all_subsets(n) for b in all_subsets(n) if fn(a, b)))

    @classmethod
    def from_far(cls, n: int, far: Iterable[tuple[int, int]]) -> "PreProximity":
        far = set(far)
        return cls.from_predicate(n, lambda a, b: (a, b) not in far)

    @classmethod
    def discrete(cls, n: SizeLike) -> "PreProximity":
        return cls.from_predicate(n, lambda a, b: a & b != 0)

    def is_near(self, a: int, b: int) -> bool:
        return (a, b) in self.near

    def is_far(self, a: int, b: int) -> bool:
        return (a, b) not in self.near

    def far_pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a in all_subsets(self.n) for b in all_subsets(self.n)
                if (a, b) not in self.near]

    def ll(self, a: int, b: int) -> bool:
        """``a << b``: ``b`` is a neighbourhood of ``a``."""
        return self.is_far(a, full(self.n) & ~b)

    def key(self) -> tuple:
        return tuple(sorted(self.near))

    def permuted(self, perm) -> "PreProximity":
        return PreProximity(self.n, frozenset((permute_mask(a, perm), permute_mask(b, perm))
                                              for a, b in self.near))

    def __le__(self, other: "PreProximity") -> bool:
        """Inclusion of near pairs; the smaller relation is the finer one."""
        return self.near <= other.near

    @cached_property
    def report(self) -> "PPReport":
        return check_pp_axioms(self)

    @property
    def is_valid(self) -> bool:
        return self.report.is_preproximity

    def require_valid(self):
        if not self.is_valid:
            raise NotAPreProximity(self.report)
        return self


@dataclass(frozen=True)
class PPReport:
    verdicts: dict
    witnesses: dict = field(default_factory=dict)

    @property
    def is_preproximity(self) -> bool:
        return all(self.verdicts[a] for a in PP_AXIOMS)

    @property
    def is_proximity(self) -> bool:
        return self.is_preproximity and self.verdicts["PP6"]

    def classification(self) -> dict:
        return {"preproximity": self.is_preproximity, "proximity": self.is_proximity}


def _first(it):
    return next(iter(it), None)


def check_pp_axioms(delta: PreProximity) -> PPReport:
    n, near = delta.n, delta.near
    subs = list(all_subsets(n))
    top = full(n)
    v: dict = {}
    w: dict = {}

    def record(name, witness):
        v[name] = witness is None
        if witness is not None:
            w[name] = witness

    record("PP1", _first((a, b) for a, b in near if (b, a) not in near))
    record("PP2", _first((a, b, b | 1 << y) for a, b in near for y in range(n)
                         if (a, b | 1 << y) not in near))
    record("PP3", _first((x, y) for x in range(n) for y in range(n)
                         if ((1 << x, 1 << y) in near) != (x == y)))
    record("PP4", (0, top) if (0, top) in near else None)
    record("PP5", _first((a, b) for a in subs for b in subs if (a, b) not in near
                         and not any((a, c) not in near and (b, top & ~c) not in near
                                     for c in subs)))
    record("PP6", _first((a, b, c) for a in subs for b in subs for c in subs
                         if ((a, b | c) in near) != ((a, b) in near or (a, c) in near)))
    record("meet_implies_near", _first((a, b) for a in subs for b in subs
                                       if a & b and (a, b) not in near))
    record("empty_far", _first(a for a in subs if (0, a) in near))
    record("monotone", _first((a, b, a | 1 << x) for a, b in near for x in range(n)
                              if (a | 1 << x, b) not in near))
    return PPReport(v, w)


# -- closure and the induced pre-topology -----------------------------------

def closure_map(delta: PreProximity) -> tuple[int, ...]:
    """``c(A) = {x : {x} near A}`` indexed by the mask of ``A``."""
    n = delta.n
    return tuple(mask(x for x in range(n) if delta.is_near(1 << x, a)) for a in all_subsets(n))


def closure_conditions(delta: PreProximity) -> dict:
    """The closure-operator conditions (a)-(d) and far-from-closure, each with a witness or None."""
    n = delta.n
    c = closure_map(delta)
    subs = list(all_subsets(n))
    out = {
        "empty": None if c[0] == 0 else 0,
        "extensive": _first(a for a in subs if not is_subset(a, c[a])),
        "idempotent": _first(a for a in subs if c[c[a]] != c[a]),
        "monotone": _first((a, b) for a in subs for b in subs if is_subset(a, b)
                           and not is_subset(c[a], c[b])),
        "far_from_closure": _first((b, a) for a in subs for b in subs
                                   if delta.is_far(b, a) and delta.is_near(b, c[a])),
    }
    return out


class ClosureError(ValueError):
    pass


def closure_operator(delta: PreProximity) -> PreTopology:
    """The pre-topology of sets whose complement is fixed by the closure map."""
    delta.require_valid()
    bad = {k: v for k, v in closure_conditions(delta).items() if v is not None}
    if bad:
        raise ClosureError(f"closure conditions fail: {bad}")
    n = delta.n
    c = closure_map(delta)
    top = full(n)
    opens = frozenset(u for u in all_subsets(n) if c[top & ~u] == top & ~u)
    if not is_pretopology(n, opens):
        raise ClosureError("fixed complements are not union-closed")
    return PreTopology(n, opens)


def _topology_total(delta: PreProximity) -> Optional[PreTopology]:
    n = delta.n
    c = closure_map(delta)
    top = full(n)
    opens = frozenset(u for u in all_subsets(n) if c[top & ~u] == top & ~u)
    return PreTopology(n, opens) if is_pretopology(n, opens) else None


def far_neighbourhood(delta: PreProximity, x: int, a: int) -> Optional[int]:
    """An open ``U`` containing ``x`` with ``U`` far from ``a``, if any."""
    tau = closure_operator(delta)
    return _first(u for u in tau.neighbourhoods(x) if delta.is_far(u, a))


# -- from pre-uniformities --------------------------------------------------

def _image_table(v: Relation) -> list[int]:
    img = [0] * (1 << v.n)
    for a in range(1, 1 << v.n):
        low = a & -a
        img[a] = img[a ^ low] | v.rows[low.bit_length() - 1]
    return img


def delta_of_family(n: int, basis: Sequence[Relation]) -> PreProximity:
    """Near iff every listed relation meets ``A x B``; defined for any family."""
    # V meets A x B iff the image V[A] meets B
    tables = [_image_table(v) for v in basis]
    return PreProximity.from_predicate(n, lambda a, b: all(t[a] & b for t in tables))


def delta_from_preuniformity(mu: PreUniformity) -> PreProximity:
    mu.require_valid()
    return delta_of_family(mu.n, mu.basis)


def pp_equivalent(mu: PreUniformity, nu: PreUniformity) -> bool:
    return delta_from_preuniformity(mu) == delta_from_preuniformity(nu)


def t_set(n: int, a: int, b: int) -> Relation:
    """``X x X`` minus ``A x B``."""
    return full_relation(n) - rectangle(n, a, b)


@dataclass(frozen=True)
class MuDelta:
    mu: PreUniformity
    valid: bool
    compatible: bool
    totally_bounded: bool
    coarsest: Optional[bool] = None


def mu_delta(delta: PreProximity, compatible: Iterable[PreUniformity] = ()) -> MuDelta:
    """Pre-uniformity generated by the complements of far rectangles.

    ``coarsest`` checks containment in each supplied pre-uniformity; it is
    None when none are given.
    """
    delta.require_valid()
    n = delta.n
    mu = PreUniformity(n, tuple(t_set(n, a, b) for a, b in delta.far_pairs()))
    valid = mu.is_valid
    ok = valid and delta_from_preuniformity(mu) == delta
    others = list(compatible)
    coarsest = all(contains(m, mu) for m in others) if others else None
    return MuDelta(mu, valid, ok, True, coarsest)


@dataclass(frozen=True)
class Reflection:
    mu_w: PreUniformity
    equal: bool


def totally_bounded_reflection(mu: PreUniformity) -> Reflection:
    mw = mu_delta(delta_from_preuniformity(mu)).mu
    return Reflection(mw, mw == mu)


# -- the neighbourhood relation ---------------------------------------------

@dataclass(frozen=True)
class NbhdRelation:
    n: int
    pairs: frozenset

    def __call__(self, a: int, b: int) -> bool:
        return (a, b) in self.pairs


def nbhd_relation(delta: PreProximity) -> NbhdRelation:
    n = delta.n
    return NbhdRelation(n, frozenset((a, b) for a in all_subsets(n) for b in all_subsets(n)
                                     if delta.ll(a, b)))


def _delta_of_ll(ll: NbhdRelation) -> PreProximity:
    top = full(ll.n)
    return PreProximity.from_predicate(ll.n, lambda a, b: not ll(a, top & ~b))


def psi_check(ll: NbhdRelation) -> dict:
    """(PSI1)-(PSI6) with a witness or None each.

    The last two refer to the pre-topology of the pre-proximity read off
    ``ll``; when that family is not a pre-topology both are reported failed.
    """
    n = ll.n
    top = full(n)
    subs = list(all_subsets(n))
    pairs = sorted(ll.pairs)
    out = {
        "PSI1": _first((a, b) for a, b in pairs if not ll(top & ~b, top & ~a)),
        "PSI2": _first((a, b) for a, b in pairs if not is_subset(a, b)),
        "PSI3": _first((a, b, c, d) for b, c in pairs for a in subs if is_subset(a, b)
                       for d in subs if is_subset(c, d) and not ll(a, d)),
        "PSI4": None if ll(0, 0) and ll(top, top) else (0, top),
    }
    tau = _topology_total(_delta_of_ll(ll))
    if tau is None:
        out["PSI5"] = out["PSI6"] = "no pre-topology"
        return out
    out["PSI5"] = _first((a, b) for a, b in pairs if not any(
        ll(a, u) and ll(closure(tau, u), b) for u in tau.opens))
    out["PSI6"] = _first((x, g) for x in range(n) for g in subs
                         if interior(tau, g) >> x & 1 and not ll(1 << x, g))
    return out


class PSIError(ValueError):
    def __init__(self, axiom, witness):
        super().__init__(f"{axiom} fails")
        self.axiom = axiom
        self.witness = witness


def delta_from_ll(ll: NbhdRelation) -> PreProximity:
    for k, wit in psi_check(ll).items():
        if k != "PSI6" and wit is not None:
            raise PSIError(k, wit)
    return _delta_of_ll(ll)


# -- sup, finest compatible, covers -----------------------------------------

def _minimal_covers(a: int) -> list[frozenset]:
    """Irredundant covers of ``a`` by nonempty subsets of ``a``."""
    if a == 0:
        return [frozenset()]
    blocks = [s for s in range(1, a + 1) if s & a == s]
    out = []
    for k in range(1, len(blocks) + 1):
        for combo in combinations(blocks, k):
            u = 0
            for s in combo:
                u |= s
            if u != a:
                continue
            if all(_union(combo, skip=i) != a for i in range(len(combo))):
                out.append(frozenset(combo))
    return out


def _union(blocks, skip=-1) -> int:
    u = 0
    for i, s in enumerate(blocks):
        if i != skip:
            u |= s
    return u


def sup_preproximities(family: Iterable[PreProximity]) -> PreProximity:
    """Near iff every pair of finite covers of ``A`` and ``B`` has a pair of
    blocks near under every member.

    A cover that contains an irredundant one inherits its near pair, so only
    irredundant covers by subsets are scanned.
    """
    family = list(family)
    if not family:
        raise ValueError("sup of an empty family")
    n = family[0].n
    if any(d.n != n for d in family):
        raise CarrierMismatch("pre-proximities on different carriers")
    covers = {a: _minimal_covers(a) for a in all_subsets(n)}

    def near(a, b):
        return all(any(all(d.is_near(p, q) for d in family) for p in ca for q in cb)
                   for ca in covers[a] for cb in covers[b])
    return PreProximity.from_predicate(n, near)


class NotNormalHausdorff(ValueError):
    def __init__(self, axiom, witness):
        super().__init__(f"not normal Hausdorff: {axiom} fails")
        self.axiom = axiom
        self.witness = witness


def finest_compatible(tau: PreTopology) -> PreProximity:
    """Near iff the closures meet; defined for normal Hausdorff pre-topologies."""
    prof = separation_profile(tau)
    for name in ("T2", "normal"):
        if not getattr(prof, name):
            raise NotNormalHausdorff(name, prof.witnesses.get(name))
    cl = [closure(tau, a) for a in all_subsets(tau.n)]
    return PreProximity.from_predicate(tau.n, lambda a, b: cl[a] & cl[b] != 0)


def is_compatible(delta: PreProximity, tau: PreTopology) -> bool:
    return delta.is_valid and closure_operator(delta) == tau


def is_delta_preuniform_cover(cover: Sequence[int], delta: PreProximity) -> bool:
    """Is there a cover ``B_1..B_k`` of the carrier with ``B_i << A_i`` for each ``i``?

    ``B << A`` is inherited by subsets of ``B``, so each ``B_i`` can be taken
    maximal and the search runs over those.
    """
    n = delta.n
    cover = list(cover)
    if _union(cover) != full(n):
        raise ValueError("family does not cover the carrier")
    options = []
    for a in cover:
        inside = [b for b in all_subsets(n) if delta.ll(b, a)]
        options.append([b for b in inside if not any(b != c and is_subset(b, c) for c in inside)])
    return any(_union(choice) == full(n) for choice in cartesian(*options))


def uniform_cover_choices(delta: PreProximity) -> list[frozenset]:
    """Every family made of one ``delta``-neighbourhood of each point.

    A set family is ``delta``-pre-uniform (blocks may be listed repeatedly)
    iff every point has a block that is its ``delta``-neighbourhood, so these
    families are the smallest ones, and every ``delta``-pre-uniform family
    contains one of them.
    """
    n = delta.n
    nb = []
    for x in range(n):
        opts = [g for g in all_subsets(n) if delta.ll(1 << x, g)]
        nb.append([g for g in opts if not any(h != g and is_subset(h, g) for h in opts)])
    return sorted({frozenset(c) for c in cartesian(*nb)}, key=lambda s: sorted(s))


def far_pair_criterion(delta: PreProximity, a: int, b: int) -> bool:
    """Does every ``delta``-pre-uniform cover have a block meeting both ``A`` and ``B``?"""
    return all(any(g & a and g & b for g in fam) for fam in uniform_cover_choices(delta))


# -- subspaces --------------------------------------------------------------

def _compress(m: int, points: Sequence[int]) -> int:
    return mask(i for i, p in enumerate(points) if m >> p & 1)


def _expand(m: int, points: Sequence[int]) -> int:
    return mask(points[i] for i in bits(m))


def subspace(delta: PreProximity, e: int) -> PreProximity:
    """The restriction to subsets of ``E``, on ``|E|`` points in increasing order."""
    if e == 0:
        raise ValueError("empty subspace")
    pts = list(bits(e))
    return PreProximity.from_predicate(len(pts), lambda a, b: delta.is_near(_expand(a, pts),
                                                                            _expand(b, pts)))


def relative_topology(tau: PreTopology, e: int) -> PreTopology:
    pts = list(bits(e))
    return PreTopology(len(pts), frozenset(_compress(u & e, pts) for u in tau.opens))


def restrict_preuniformity(mu: PreUniformity, e: int) -> PreUniformity:
    pts = list(bits(e))
    return PreUniformity(len(pts), tuple(
        Relation(len(pts), tuple(_compress(v.rows[p], pts) for p in pts)) for v in mu.basis))


# -- enumeration ------------------------------------------------------------

def _free_pairs(n: int) -> list[tuple[int, int]]:
    """Unordered disjoint pairs of nonempty sets, not both singletons, smallest first."""
    out = []
    for a in range(1, 1 << n):
        for b in range(a + 1, 1 << n):
            if a & b or (bin(a).count("1") == 1 and bin(b).count("1") == 1):
                continue
            out.append((a, b))
    out.sort(key=lambda p: (bin(p[0]).count("1") + bin(p[1]).count("1"), p))
    return out


def labelled_preproximities(n: int) -> Iterator[PreProximity]:
    """Every pre-proximity on ``n`` labelled points.

    The far disjoint pairs form a down-set, so pairs are decided in order of
    size and a pair may be far only when its one-point-smaller pairs are;
    (PP5) is checked at the leaves.
    """
    free = _free_pairs(n)
    index = {p: i for i, p in enumerate(free)}

    def children(p):
        a, b = p
        out = []
        for side, other, swap in ((a, b, False), (b, a, True)):
            for x in bits(side):
                s = side & ~(1 << x)
                if s == 0:
                    continue
                q = (other, s) if swap else (s, other)
                q = (min(q), max(q))
                if q in index:
                    out.append(index[q])
        return out

    kids = [children(p) for p in free]

    def rec(i, far):
        if i == len(free):
            farset = set()
            for j, f in enumerate(far):
                if f:
                    a, b = free[j]
                    farset |= {(a, b), (b, a)}
            d = PreProximity.from_predicate(
                n, lambda a, b: a != 0 and b != 0 and (a & b or (
                    not (bin(a).count("1") == 1 and bin(b).count("1") == 1)
                    and (a, b) not in farset)))
            if check_pp_axioms(d).verdicts["PP5"]:
                yield d
            return
        yield from rec(i + 1, far + [False])
        if all(far[k] for k in kids[i]):
            yield from rec(i + 1, far + [True])

    yield from rec(0, [])
