"""Finite pre-topological groups and the cover pipeline that uniformizes them."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Iterator, Optional, Sequence

from prelab.pretop import (
    PointMap, PreTopology, is_open_in_product, is_precontinuous, separation_profile,
)
from prelab.preunif import PreUniformity, UCReport, generate_from_covers, uc_check
from prelab.relcore import bits, is_subset, mask, permute_mask


class NotAGroup(ValueError):
    pass


@dataclass(frozen=True)
class GroupTable:
    n: int
    mul: tuple[tuple[int, ...], ...]
    e: int = 0
    name: str = ""

    def __post_init__(self):
        n, m = self.n, self.mul
        if len(m) != n or any(len(r) != n or any(not 0 <= v < n for v in r) for r in m):
            raise NotAGroup("table must be n x n with entries in range")
        if any(m[self.e][x] != x or m[x][self.e] != x for x in range(n)):
            raise NotAGroup("identity law fails")
        for x in range(n):
            if not any(m[x][y] == self.e for y in range(n)):
                raise NotAGroup(f"{x} has no inverse")
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    if m[m[x][y]][z] != m[x][m[y][z]]:
                        raise NotAGroup(f"associativity fails at ({x},{y},{z})")

    @property
    def inv(self) -> tuple[int, ...]:
        return tuple(next(y for y in range(self.n) if self.mul[x][y] == self.e)
                     for x in range(self.n))

    def times(self, a: int, b: int) -> int:
        """Product set ``A.B``."""
        return mask(self.mul[x][y] for x in bits(a) for y in bits(b))

    def translate(self, x: int, a: int) -> int:
        """Left translate ``xA``."""
        return mask(self.mul[x][y] for y in bits(a))

    def inverse_set(self, a: int) -> int:
        return mask(self.inv[x] for x in bits(a))

    def multiplication(self) -> PointMap:
        n = self.n
        return PointMap(n * n, n, tuple(self.mul[i // n][i % n] for i in range(n * n)))

    def inversion(self) -> PointMap:
        return PointMap(self.n, self.n, self.inv)


def cyclic(n: int) -> GroupTable:
    return GroupTable(n, tuple(tuple((i + j) % n for j in range(n)) for i in range(n)), 0, f"Z{n}")


def klein() -> GroupTable:
    return GroupTable(4, tuple(tuple(i ^ j for j in range(4)) for i in range(4)), 0, "Z2xZ2")


def symmetric3() -> GroupTable:
    perms = sorted(permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    mul = tuple(tuple(idx[tuple(p[q[k]] for k in range(3))] for q in perms) for p in perms)
    return GroupTable(6, mul, idx[(0, 1, 2)], "S3")


def small_groups(max_order: int = 4) -> list[GroupTable]:
    """One group per isomorphism type, up to order 4 (plus S3 at order 6)."""
    out = [cyclic(k) for k in range(1, min(max_order, 4) + 1)]
    if max_order >= 4:
        out.append(klein())
    if max_order >= 6:
        out += [cyclic(5), cyclic(6), symmetric3()]
    return out


def is_pretopological_group(g: GroupTable, tau: PreTopology) -> bool:
    if tau.n != g.n:
        raise ValueError("pre-topology and group on different carriers")
    mult = g.multiplication()
    return (all(is_open_in_product(tau, tau, mult.preimage(w)) for w in tau.opens)
            and is_precontinuous(g.inversion(), tau, tau))


def translations_are_homeomorphisms(g: GroupTable, tau: PreTopology) -> bool:
    for x in range(g.n):
        f = PointMap(g.n, g.n, tuple(g.mul[x][y] for y in range(g.n)))
        back = PointMap(g.n, g.n, tuple(g.mul[g.inv[x]][y] for y in range(g.n)))
        if not (is_precontinuous(f, tau, tau) and is_precontinuous(back, tau, tau)):
            return False
    return True


@dataclass(frozen=True)
class StrongReport:
    pretopological: bool
    prebase: bool
    symmetric: bool
    squares: bool

    @property
    def strong(self) -> bool:
        return self.pretopological and self.prebase and self.symmetric and self.squares


def strong_report(g: GroupTable, tau: PreTopology, base: Iterable[int]) -> StrongReport:
    base = list(base)
    if not base:
        raise ValueError("empty pre-base at the identity")
    for u in base:
        if not tau.is_open(u):
            raise ValueError(f"pre-base member {u} is not open")
        if not u >> g.e & 1:
            raise ValueError(f"pre-base member {u} misses the identity")
    prebase = all(any(is_subset(u, w) for u in base) for w in tau.neighbourhoods(g.e))
    symmetric = all(g.inverse_set(u) == u for u in base)
    squares = all(any(is_subset(g.times(v, v), u) for v in base) for u in base)
    return StrongReport(is_pretopological_group(g, tau), prebase, symmetric, squares)


def is_strongly_pretopological_group(g: GroupTable, tau: PreTopology, base: Iterable[int]) -> bool:
    return strong_report(g, tau, base).strong


def candidate_bases(g: GroupTable, tau: PreTopology) -> Iterator[tuple[int, ...]]:
    """Every nonempty family of open sets containing the identity."""
    nb = tau.neighbourhoods(g.e)
    for k in range(1, len(nb) + 1):
        yield from combinations(nb, k)


class PipelineError(ValueError):
    def __init__(self, stage: str, detail):
        super().__init__(f"stage {stage} failed: {detail}")
        self.stage = stage
        self.detail = detail


@dataclass(frozen=True)
class GroupPipeline:
    covers: tuple[frozenset, ...]
    uc: UCReport
    mu: Optional[PreUniformity]
    induces_tau: bool
    completely_regular: bool


def translate_covers(g: GroupTable, base: Sequence[int]) -> tuple[frozenset, ...]:
    return tuple(frozenset(g.translate(x, u) for x in range(g.n)) for u in base)


def group_pipeline(g: GroupTable, tau: PreTopology, base: Sequence[int]) -> GroupPipeline:
    """Run every stage and record the outcomes without stopping at a failure."""
    covers = translate_covers(g, base)
    uc = uc_check(g.n, covers)
    mu, induces = None, False
    if uc.ok:
        gen = generate_from_covers(g.n, covers, tau)
        mu, induces = gen.mu, bool(gen.induces_target)
    return GroupPipeline(covers, uc, mu, induces, separation_profile(tau).completely_regular)


def group_preuniformity(g: GroupTable, tau: PreTopology, base: Sequence[int]) -> GroupPipeline:
    """Translate covers, cover axioms, generated pre-uniformity, complete regularity."""
    rep = strong_report(g, tau, base)
    if not rep.strong:
        raise PipelineError("strong", rep)
    out = group_pipeline(g, tau, base)
    if not out.uc.ok:
        raise PipelineError("covers", out.uc)
    if not out.induces_tau:
        raise PipelineError("generate", "generated pre-uniformity does not induce the pre-topology")
    if not out.mu.report.strong:
        raise PipelineError("generate", "generated pre-uniformity is not strong")
    if not out.completely_regular:
        raise PipelineError("complete_regularity", separation_profile(tau).witnesses)
    return out


@dataclass(frozen=True)
class GroupStructure:
    """A group with a pre-topology and a candidate pre-base at the identity."""
    group: GroupTable
    tau: PreTopology
    base: tuple[int, ...]

    def key(self) -> tuple:
        return (self.group.mul, self.tau.key(), tuple(sorted(self.base)))

    def permuted(self, perm) -> "GroupStructure":
        """Relabel by ``perm``; only meaningful when ``perm`` is a group automorphism."""
        return GroupStructure(self.group, self.tau.permuted(perm),
                              tuple(sorted(permute_mask(u, perm) for u in self.base)))


def automorphisms(g: GroupTable) -> list[tuple[int, ...]]:
    return [p for p in permutations(range(g.n))
            if all(p[g.mul[x][y]] == g.mul[p[x]][p[y]] for x in range(g.n) for y in range(g.n))]
