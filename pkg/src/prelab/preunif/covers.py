"""Covers, stars and cover-generated pre-uniformities.

A cover is a ``frozenset`` of subset bitmasks whose union is the carrier.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from prelab.pretop import PreTopology, is_open_in_product
from prelab.preunif.core import PreUniformity, induced_pretopology
from prelab.relcore import Relation, bits, full, is_subset

Cover = frozenset


class NotACover(ValueError):
    pass


class CoverAxiomError(ValueError):
    def __init__(self, report: "UCReport"):
        failed = [k for k, ok in report.verdicts.items() if not ok]
        super().__init__(f"cover family fails {', '.join(failed)}")
        self.report = report


def is_cover(n: int, blocks: Iterable[int]) -> bool:
    u = 0
    for b in blocks:
        u |= b
    return u == full(n)


def _require_cover(n: int, c):
    if not is_cover(n, c):
        raise NotACover("family does not cover the carrier")


def cover_of(v: Relation) -> Cover:
    return frozenset(v.rows)


def star(a: int, cover: Iterable[int]) -> int:
    out = 0
    for b in cover:
        if b & a:
            out |= b
    return out


def refines(fine: Iterable[int], coarse: Iterable[int]) -> bool:
    coarse = list(coarse)
    return all(any(is_subset(b, a) for a in coarse) for b in fine)


def is_star_refinement(fine: Iterable[int], coarse: Iterable[int], n: Optional[int] = None) -> bool:
    """``fine`` star-refines ``coarse`` iff ``{st(B, fine) : B in fine}`` refines ``coarse``."""
    fine, coarse = list(fine), list(coarse)
    if n is not None:
        _require_cover(n, fine)
        _require_cover(n, coarse)
    return refines((star(b, fine) for b in fine), coarse)


def square_union(cover: Iterable[int], n: int) -> Relation:
    """``mu(A) = union of A x A`` over the blocks of a cover."""
    rows = [0] * n
    for a in cover:
        for x in bits(a):
            rows[x] |= a
    return Relation(n, tuple(rows))


@dataclass(frozen=True)
class UCReport:
    verdicts: dict
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())


def uc_check(n: int, covers: Iterable[Iterable[int]]) -> UCReport:
    """(UC1)-(UC3) for the family of covers refined by some generator.

    (UC1) holds by construction since membership means having a refinement
    among the generators.  For (UC2) generators suffice: a star refinement of
    a generator star-refines every coarsening of it, and a generator refining
    a star-refining member is itself star-refining.
    """
    covers = [frozenset(c) for c in covers]
    if not covers:
        raise ValueError("empty cover family")
    for c in covers:
        _require_cover(n, c)
    v = {"UC1": True, "UC2": True, "UC3": True}
    w = {}
    for a in covers:
        if not any(is_star_refinement(b, a) for b in covers):
            v["UC2"] = False
            w["UC2"] = a
            break
    for x in range(n):
        for y in range(x + 1, n):
            pair = (1 << x) | (1 << y)
            if not any(all(not is_subset(pair, blk) for blk in c) for c in covers):
                v["UC3"] = False
                w.setdefault("UC3", (x, y))
    return UCReport(v, w)


@dataclass(frozen=True)
class Generated:
    """A generated pre-uniformity, plus the compatibility clause when a target
    pre-topology was supplied: ``hypothesis`` is the clause's premise and
    ``induces_target`` the measured outcome ``tau(mu) == target``."""
    mu: PreUniformity
    hypothesis: Optional[bool] = None
    induces_target: Optional[bool] = None


def generate_from_covers(n: int, covers: Iterable[Iterable[int]],
                         tau: Optional[PreTopology] = None) -> Generated:
    covers = [frozenset(c) for c in covers]
    report = uc_check(n, covers)
    if not report.ok:
        raise CoverAxiomError(report)
    mu = PreUniformity(n, tuple(square_union(c, n) for c in covers))
    if tau is None:
        return Generated(mu)
    open_covers = all(tau.is_open(b) for c in covers for b in c)
    nbhd = all(any(is_subset(star(1 << x, c), g) for c in covers)
               for x in range(n) for g in tau.neighbourhoods(x))
    return Generated(mu, open_covers and nbhd, induced_pretopology(mu) == tau)


def entourage_is_open(tau: PreTopology, v: Relation) -> bool:
    return is_open_in_product(tau, tau, v.code)

