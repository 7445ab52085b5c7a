"""Pre-uniformities stored as the antichain of their minimal entourages.

Every upward-closed family of relations on a finite carrier is determined by
its minimal members, so each axiom on the up-closure is decided on the basis:

* (U1) every member contains the diagonal iff every minimal member does.
* (U2) ``V in mu => V^-1 in mu`` iff each minimal ``B`` has a minimal ``C``
  with ``C^-1 <= B`` (that is (BU1) on the basis).
* (U3) a member ``U`` has ``V, W in mu`` with ``V o W <= U`` iff some minimal
  ``V, W`` do, because composition is monotone; so (U3) is (BU2) on the basis.
* (U5) the intersection of the up-closure is the intersection of the basis.
* (U6) ``U & V in mu`` for all members iff it holds for minimal pairs.
* (U2') a symmetric member below ``B`` exists iff ``C | C^-1 <= B`` for a
  minimal ``C``, since ``C | C^-1`` is the least symmetric set above ``C``.
* (U3') likewise: some minimal ``C`` has ``C o C <= B``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional

from prelab.pretop import PreTopology, interior, is_open_in_product, separation_profile
from prelab.relcore import (
    CarrierMismatch, Relation, SizeLike, _size, all_subsets, bits, compose, diagonal,
    full, full_relation, inverse, is_subset, minimal_elements, preorders,
    reflexive_relations,
)

AXIOMS = ("U1", "U2", "U3", "U4", "U5", "U6", "U2'", "U3'")


class NotAPreUniformity(ValueError):
    def __init__(self, report: "AxiomReport", what: str = "not a pre-uniformity"):
        failed = ", ".join(a for a in ("U1", "U2", "U3", "U4", "U5") if not report.verdicts[a])
        super().__init__(f"{what}: {failed} fails")
        self.report = report


@dataclass(frozen=True)
class PreUniformity:
    n: int
    basis: tuple[Relation, ...]

    def __post_init__(self):
        basis = list(self.basis)
        if not basis:
            raise ValueError("empty basis")
        for b in basis:
            if b.n != self.n:
                raise CarrierMismatch("basis relation on a different carrier")
        object.__setattr__(self, "basis", tuple(minimal_elements(basis)))

    @classmethod
    def discrete(cls, n: SizeLike) -> "PreUniformity":
        n = _size(n)
        return cls(n, (diagonal(n),))

    @classmethod
    def indiscrete(cls, n: SizeLike) -> "PreUniformity":
        n = _size(n)
        return cls(n, (full_relation(n),))

    def key(self) -> tuple[int, ...]:
        return tuple(b.code for b in self.basis)

    def permuted(self, perm) -> "PreUniformity":
        return PreUniformity(self.n, tuple(b.permuted(perm) for b in self.basis))

    def __contains__(self, v: Relation) -> bool:
        return member(self, v)

    def members(self) -> Iterator[Relation]:
        """Every member of the up-closure that contains the diagonal."""
        for r in reflexive_relations(self.n):
            if any(b <= r for b in self.basis):
                yield r

    @cached_property
    def report(self) -> "AxiomReport":
        return check_axioms(self.n, self.basis)

    @property
    def is_valid(self) -> bool:
        return self.report.is_preuniformity

    def require_valid(self):
        if not self.is_valid:
            raise NotAPreUniformity(self.report)
        return self


@dataclass(frozen=True)
class AxiomReport:
    verdicts: dict
    witnesses: dict = field(default_factory=dict)

    @property
    def is_preuniformity(self) -> bool:
        return all(self.verdicts[a] for a in ("U1", "U2", "U3", "U4", "U5"))

    @property
    def symmetric(self) -> bool:
        return self.is_preuniformity and self.verdicts["U2'"]

    @property
    def strong(self) -> bool:
        return self.is_preuniformity and self.verdicts["U3'"]

    @property
    def almost(self) -> bool:
        return self.symmetric and self.strong

    @property
    def uniform(self) -> bool:
        return self.almost and self.verdicts["U6"]

    def classification(self) -> dict:
        return {
            "preuniformity": self.is_preuniformity,
            "symmetric": self.symmetric,
            "strong": self.strong,
            "almost_uniform": self.almost,
            "uniform": self.uniform,
        }

    def label(self) -> str:
        for name in ("uniform", "almost_uniform", "strong", "symmetric", "preuniformity"):
            if self.classification()[name]:
                return name
        return "invalid"


def check_axioms(carrier: SizeLike, basis: Iterable[Relation]) -> AxiomReport:
    n = _size(carrier)
    basis = list(basis)
    if not basis:
        raise ValueError("empty basis")
    mins = minimal_elements(basis)
    d = diagonal(n)
    v: dict = {}
    w: dict = {}

    bad = [b for b in mins if not d <= b]
    v["U1"] = not bad
    if bad:
        w["U1"] = bad[0]

    bad = [b for b in mins if not any(inverse(c) <= b for c in mins)]
    v["U2"] = not bad
    if bad:
        w["U2"] = bad[0]

    v["U3"] = True
    comps = [(p, q, compose(p, q)) for p in mins for q in mins]
    for b in mins:
        if not any(c <= b for _, _, c in comps):
            v["U3"] = False
            w["U3"] = {"entourage": b, "compositions": comps}
            break

    v["U4"] = True  # the family is represented by its up-closure

    meet = full_relation(n)
    for b in mins:
        meet = meet & b
    v["U5"] = meet == d
    if meet != d:
        w["U5"] = meet

    v["U6"] = True
    for i, a in enumerate(mins):
        for b in mins[i + 1:]:
            if not any(c <= (a & b) for c in mins):
                v["U6"] = False
                w["U6"] = (a, b)
                break
        if not v["U6"]:
            break

    bad = [b for b in mins if not any(c <= b and inverse(c) <= b for c in mins)]
    v["U2'"] = not bad
    if bad:
        w["U2'"] = bad[0]

    bad = [b for b in mins if not any(compose(c, c) <= b for c in mins)]
    v["U3'"] = not bad
    if bad:
        w["U3'"] = bad[0]

    return AxiomReport(v, w)


def member(mu: PreUniformity, v: Relation) -> bool:
    if v.n != mu.n:
        raise CarrierMismatch("relation on a different carrier")
    return any(b <= v for b in mu.basis)


def induced_pretopology(mu: PreUniformity) -> PreTopology:
    """``{G : every x in G has a member U with U[x] <= G}``; total for any family."""
    opens = set()
    for g in all_subsets(mu.n):
        if all(any(is_subset(b.rows[x], g) for b in mu.basis) for x in bits(g)):
            opens.add(g)
    return PreTopology(mu.n, frozenset(opens))


def neighborhood_prebase(mu: PreUniformity, x: int) -> list[int]:
    mu.require_valid()
    tau = induced_pretopology(mu)
    return [interior(tau, b.rows[x]) for b in mu.basis]


def is_neighborhood_prebase(tau: PreTopology, x: int, family: Iterable[int]) -> bool:
    family = list(family)
    if any(not tau.is_open(u) or not u >> x & 1 for u in family):
        return False
    return all(any(is_subset(u, g) for u in family) for g in tau.neighbourhoods(x))


@dataclass(frozen=True)
class EntouragePrebases:
    closed_basis: tuple[Relation, ...]
    open_basis: tuple[Relation, ...]
    closed_is_prebase: bool
    open_is_prebase: bool


def entourage_prebases(mu: PreUniformity) -> EntouragePrebases:
    """Closed and open entourages in the product of ``tau(mu)`` with itself.

    A member below a minimal member ``b`` contains some minimal member, which
    must be ``b`` itself, so either family is a pre-base exactly when every
    minimal member belongs to it.
    """
    mu.require_valid()
    tau = induced_pretopology(mu)
    top = full(mu.n * mu.n)
    closed = tuple(b for b in mu.basis if is_open_in_product(tau, tau, top & ~b.code))
    opened = tuple(b for b in mu.basis if is_open_in_product(tau, tau, b.code))
    k = len(mu.basis)
    return EntouragePrebases(closed, opened, len(closed) == k, len(opened) == k)


def t0_criterion(mu: PreUniformity) -> tuple[bool, bool]:
    meet = full_relation(mu.n)
    for b in mu.basis:
        meet = meet & b
    return separation_profile(induced_pretopology(mu)).T0, meet == diagonal(mu.n)


def weight(mu: PreUniformity) -> int:
    mu.require_valid()
    return len(mu.basis)


def contains(big: PreUniformity, small: PreUniformity) -> bool:
    """``small <= big`` as families of entourages."""
    if big.n != small.n:
        raise CarrierMismatch("pre-uniformities on different carriers")
    return all(member(big, b) for b in small.basis)


def compare(mu1: PreUniformity, mu2: PreUniformity) -> str:
    a = contains(mu1, mu2)
    b = contains(mu2, mu1)
    if a and b:
        return "equal"
    if a:
        return "finer"
    if b:
        return "coarser"
    return "incomparable"


def sup(family: Iterable[PreUniformity]) -> PreUniformity:
    family = list(family)
    if not family:
        raise ValueError("sup of an empty family")
    n = family[0].n
    if any(m.n != n for m in family):
        raise CarrierMismatch("pre-uniformities on different carriers")
    return PreUniformity(n, tuple(b for m in family for b in m.basis))


@dataclass(frozen=True)
class PreUniformityPair:
    first: PreUniformity
    second: PreUniformity

    def __post_init__(self):
        if self.first.n != self.second.n:
            raise CarrierMismatch("pre-uniformities on different carriers")

    @property
    def n(self) -> int:
        return self.first.n

    def key(self) -> tuple:
        return (self.first.key(), self.second.key())

    def permuted(self, perm) -> "PreUniformityPair":
        return PreUniformityPair(self.first.permuted(perm), self.second.permuted(perm))


# -- labelled enumeration ---------------------------------------------------

def _inverse_orbits(n: int) -> list[tuple[Relation, ...]]:
    out, seen = [], set()
    for p in preorders(n):
        if p in seen:
            continue
        q = inverse(p)
        seen |= {p, q}
        out.append((p,) if p == q else (p, q))
    return out


@dataclass
class LabelledSearch:
    """Outcome flags for :func:`labelled_preuniformities` (filled while iterating)."""
    truncated: bool = False


def labelled_preuniformities(n: int, max_basis: Optional[int] = None,
                             require_u5: bool = True,
                             status: Optional[LabelledSearch] = None) -> Iterator[PreUniformity]:
    """Every up-closed family on ``n`` labelled points satisfying (U1)-(U4)
    (and (U5) when ``require_u5``) whose basis has at most ``max_basis`` members.

    (U3) forces each minimal member ``B`` to satisfy ``B o B <= B``: any
    ``V o W <= B`` has ``V <= B`` and ``W <= B``, and minimality then gives
    ``V = W = B``.  So the bases are exactly the inverse-closed antichains of
    preorders, which is what the search walks.
    """
    orbits = _inverse_orbits(n)
    d = diagonal(n)
    cap = max_basis if max_basis is not None else len(orbits) * 2

    def rec(i, chosen, meet):
        if chosen and (not require_u5 or meet == d):
            yield PreUniformity(n, tuple(chosen))
        for j in range(i, len(orbits)):
            orb = orbits[j]
            if any(a <= b or b <= a for a in orb for b in chosen):
                continue
            if len(chosen) + len(orb) > cap:
                if status is not None:
                    status.truncated = True
                continue
            m = meet
            for a in orb:
                m = m & a
            yield from rec(j + 1, chosen + list(orb), m)

    yield from rec(0, [], full_relation(n))
