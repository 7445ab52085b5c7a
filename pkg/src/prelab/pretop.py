"""Pre-topologies on finite carriers.

A pre-topology is a family of subsets of ``X`` that covers ``X`` and is closed
under arbitrary unions.  There is no intersection axiom, so most of the
usual shortcuts (minimal neighbourhoods, closure via a single smallest open
set) are unavailable and everything below works from the definitions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from prelab.relcore import (
    CarrierMismatch, SizeLike, _size, all_subsets, bits, full, is_subset, mask,
    permute_mask,
)


class NotAPreTopology(ValueError):
    pass


def union_closure(generators: Iterable[int]) -> frozenset[int]:
    """All unions of subfamilies of ``generators`` (the empty union included)."""
    fam = {0}
    for g in sorted(set(generators)):
        if g in fam:
            continue
        fam |= {s | g for s in fam}
    return frozenset(fam)


def is_pretopology(n: SizeLike, family: Iterable[int]) -> bool:
    n = _size(n)
    fam = set(family)
    top = full(n)
    if any(m & ~top for m in fam):
        return False
    # A finite family is closed under arbitrary unions iff it holds the
    # empty union and is closed under binary unions.
    if 0 not in fam or top not in fam:
        return False
    items = sorted(fam)
    return all(a | b in fam for i, a in enumerate(items) for b in items[i + 1:])


@dataclass(frozen=True)
class PreTopology:
    n: int
    opens: frozenset[int]

    @classmethod
    def from_opens(cls, n: SizeLike, opens: Iterable[int]) -> "PreTopology":
        n = _size(n)
        opens = frozenset(opens)
        if not is_pretopology(n, opens):
            raise NotAPreTopology("family is not union-closed or does not cover the carrier")
        return cls(n, opens)

    @classmethod
    def discrete(cls, n: SizeLike) -> "PreTopology":
        n = _size(n)
        return cls(n, frozenset(all_subsets(n)))

    @classmethod
    def indiscrete(cls, n: SizeLike) -> "PreTopology":
        n = _size(n)
        return cls(n, frozenset({0, full(n)}))

    @property
    def top(self) -> int:
        return full(self.n)

    def is_open(self, m: int) -> bool:
        return m in self.opens

    def is_closed(self, m: int) -> bool:
        return (self.top & ~m) in self.opens

    def closed_sets(self) -> list[int]:
        return sorted(self.top & ~u for u in self.opens)

    def sorted_opens(self) -> list[int]:
        return sorted(self.opens)

    def neighbourhoods(self, x: int) -> list[int]:
        return [u for u in self.sorted_opens() if u >> x & 1]

    def closure(self, m: int) -> int:
        return closure(self, m)

    def interior(self, m: int) -> int:
        return interior(self, m)

    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.opens))

    def permuted(self, perm: Sequence[int]) -> "PreTopology":
        return PreTopology(self.n, frozenset(permute_mask(u, perm) for u in self.opens))

    def __le__(self, other: "PreTopology") -> bool:
        """Coarser-or-equal: every open of ``self`` is open in ``other``."""
        return self.opens <= other.opens


def generate(carrier: SizeLike, prebase: Iterable[int]) -> PreTopology:
    n = _size(carrier)
    prebase = list(prebase)
    covered = 0
    for b in prebase:
        covered |= b
    if covered != full(n):
        raise NotAPreTopology("prebase does not cover carrier")
    return PreTopology(n, union_closure(prebase))


def closure(tau: PreTopology, m: int) -> int:
    out = tau.top
    for c in tau.closed_sets():
        if is_subset(m, c):
            out &= c
    return out


def interior(tau: PreTopology, m: int) -> int:
    out = 0
    for u in tau.opens:
        if is_subset(u, m):
            out |= u
    return out


@dataclass(frozen=True)
class PointMap:
    source: int
    target: int
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.source:
            raise ValueError("point map must be total on the source carrier")
        if any(not 0 <= v < self.target for v in self.values):
            raise ValueError("point map value out of range")

    @classmethod
    def identity(cls, n: int) -> "PointMap":
        return cls(n, n, tuple(range(n)))

    @classmethod
    def constant(cls, source: int, target: int, value: int) -> "PointMap":
        return cls(source, target, (value,) * source)

    def __call__(self, x: int) -> int:
        return self.values[x]

    def preimage(self, m: int) -> int:
        return mask(x for x, v in enumerate(self.values) if m >> v & 1)

    def image(self, m: int) -> int:
        return mask(self.values[x] for x in bits(m))

    def then(self, other: "PointMap") -> "PointMap":
        """``other ∘ self``."""
        if self.target != other.source:
            raise CarrierMismatch("maps do not compose")
        return PointMap(self.source, other.target, tuple(other.values[v] for v in self.values))


def is_precontinuous(h: PointMap, tau_src: PreTopology, tau_dst: PreTopology) -> bool:
    if h.source != tau_src.n or h.target != tau_dst.n:
        raise CarrierMismatch("map does not match the given carriers")
    return all(tau_src.is_open(h.preimage(w)) for w in tau_dst.opens)


# -- separation axioms ------------------------------------------------------

@dataclass(frozen=True)
class SeparationProfile:
    T0: bool
    T1: bool
    T2: bool
    regular: bool
    completely_regular: bool
    normal: bool
    witnesses: dict = field(default_factory=dict, compare=False)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("T0", "T1", "T2", "regular", "completely_regular", "normal")}


def _t0(tau: PreTopology) -> Optional[tuple]:
    for x in range(tau.n):
        for y in range(x + 1, tau.n):
            pair = (1 << x) | (1 << y)
            if not any(bin(u & pair).count("1") == 1 for u in tau.opens):
                return (x, y)
    return None


def _t1(tau: PreTopology) -> Optional[tuple]:
    for x in range(tau.n):
        for y in range(tau.n):
            if x != y and not any(u >> x & 1 and not u >> y & 1 for u in tau.opens):
                return (x, y)
    return None


def _t2(tau: PreTopology) -> Optional[tuple]:
    for x in range(tau.n):
        nx = tau.neighbourhoods(x)
        for y in range(x + 1, tau.n):
            if not any(u & v == 0 for u in nx for v in tau.neighbourhoods(y)):
                return (x, y)
    return None


def _regular(tau: PreTopology) -> Optional[tuple]:
    for c in tau.closed_sets():
        outer = [o for o in tau.sorted_opens() if is_subset(c, o)]
        for z in range(tau.n):
            if c >> z & 1:
                continue
            if not any(v & o == 0 for v in tau.neighbourhoods(z) for o in outer):
                return (z, c)
    return None


def _completely_regular(tau: PreTopology) -> Optional[tuple]:
    # On a finite carrier a map to the unit interval is pre-continuous iff each
    # fibre is open, so a separating map exists iff some open A with open
    # complement contains z and misses C.
    clopen = [a for a in tau.sorted_opens() if tau.is_closed(a)]
    for c in tau.closed_sets():
        for z in range(tau.n):
            if c >> z & 1:
                continue
            if not any(a >> z & 1 and a & c == 0 for a in clopen):
                return (z, c)
    return None


def _normal(tau: PreTopology) -> Optional[tuple]:
    closed = tau.closed_sets()
    opens = tau.sorted_opens()
    for i, e in enumerate(closed):
        for f in closed[i:]:
            if e & f:
                continue
            ue = [u for u in opens if is_subset(e, u)]
            uf = [v for v in opens if is_subset(f, v)]
            if not any(u & v == 0 for u in ue for v in uf):
                return (e, f)
    return None


def separation_profile(tau: PreTopology) -> SeparationProfile:
    w = {}
    for name, fn in (("T0", _t0), ("T1", _t1), ("T2", _t2),
                     ("regular", _regular), ("completely_regular", _completely_regular),
                     ("normal", _normal)):
        hit = fn(tau)
        if hit is not None:
            w[name] = hit
    t1 = "T1" not in w
    return SeparationProfile(
        T0="T0" not in w,
        T1=t1,
        T2="T2" not in w,
        regular=t1 and "regular" not in w,
        completely_regular=t1 and "completely_regular" not in w,
        normal="normal" not in w,
        witnesses=w,
    )


# -- products ---------------------------------------------------------------

def box(n2: int, u: int, v: int) -> int:
    """The subset ``u x v`` of the product carrier, point ``(x, y)`` at ``x*n2 + y``."""
    out = 0
    for x in bits(u):
        out |= v << (x * n2)
    return out


def product_pretopology(tau1: PreTopology, tau2: PreTopology) -> PreTopology:
    boxes = {box(tau2.n, u, v) for u in tau1.opens for v in tau2.opens}
    return PreTopology(tau1.n * tau2.n, union_closure(boxes))


@lru_cache(maxsize=4096)
def _product_tables(tau1: PreTopology, tau2: PreTopology):
    """Interior table of ``tau2`` and the minimal neighbourhoods in ``tau1``.

    Smaller neighbourhoods give a larger common row set, so only minimal
    ones need to be tried.
    """
    inner = tuple(interior(tau2, m) for m in all_subsets(tau2.n))
    mins = []
    for x in range(tau1.n):
        nb = tau1.neighbourhoods(x)
        mins.append(tuple(u for u in nb if not any(v != u and is_subset(v, u) for v in nb)))
    return inner, tuple(mins)


def is_open_in_product(tau1: PreTopology, tau2: PreTopology, s: int) -> bool:
    """Open-box test without materialising the product family."""
    n2 = tau2.n
    row = full(n2)
    rows = [(s >> (x * n2)) & row for x in range(tau1.n)]
    inner, mins = _product_tables(tau1, tau2)
    for x in range(tau1.n):
        if not rows[x]:
            continue
        need = rows[x]
        for u in mins[x]:
            common = row
            for a in bits(u):
                common &= rows[a]
            need &= ~inner[common]
            if not need:
                break
        if need:
            return False
    return True


def projections(n1: int, n2: int) -> tuple[PointMap, PointMap]:
    p1 = PointMap(n1 * n2, n1, tuple(i // n2 for i in range(n1 * n2)))
    p2 = PointMap(n1 * n2, n2, tuple(i % n2 for i in range(n1 * n2)))
    return p1, p2


def labelled_pretopologies(n: int) -> list[PreTopology]:
    """Every pre-topology on ``n`` labelled points, sorted by their open-set keys.

    Proper subsets are decided in increasing order; a set that is skipped can
    never be added later, so any union landing on a skipped set prunes.
    """
    top = full(n)
    out = []

    def rec(u, fam):
        if u == top:
            out.append(PreTopology(n, frozenset(fam)))
            return
        # skipping u is only allowed when no two chosen sets unite to u
        if not any((a | b) == u for a in fam for b in fam):
            rec(u + 1, fam)
        rec(u + 1, fam | {u})

    rec(1, {0, top})
    return sorted((t for t in out if is_pretopology(n, t.opens)), key=PreTopology.key)
