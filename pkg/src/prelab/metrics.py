"""Pre-uniform pseudometrics, entourage chains and separating functions."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from prelab.pretop import PreTopology, is_open_in_product
from prelab.preunif import (
    Generated, NotAPreUniformity, PreUniformity, generate_from_pseudometrics,
    induced_pretopology, member,
)
from prelab.pseudometric import NotAPseudometric, Pseudometric
from prelab.relcore import (
    CarrierMismatch, Relation, bits, compose, diagonal, full, full_relation, inverse,
)


class ChainError(ValueError):
    def __init__(self, index: int, reason: str):
        super().__init__(f"chain invariant fails at index {index}: {reason}")
        self.index = index
        self.reason = reason


class NotStrong(ValueError):
    pass


def probe_radii(rho: Pseudometric) -> list[Fraction]:
    """One radius inside every gap of the value set, plus one above the maximum.

    ``{rho < eps}`` only changes when ``eps`` crosses a value, so these radii
    stand in for every ``eps > 0``.
    """
    vals = rho.values()
    out = [(a + b) / 2 for a, b in zip(vals, vals[1:])]
    out.append(vals[-1] + 1)
    return out


def is_preuniform_pseudometric(rho: Pseudometric, mu: PreUniformity) -> bool:
    if rho.n != mu.n:
        raise CarrierMismatch("pseudometric and pre-uniformity on different carriers")
    return all(any(b <= rho.ball(eps) for b in mu.basis) for eps in probe_radii(rho))


# -- chains -----------------------------------------------------------------

@dataclass(frozen=True)
class EntourageChain:
    """``V_0, ..., V_k``; the last member repeats forever."""
    n: int
    members: tuple[Relation, ...]

    def __getitem__(self, i: int) -> Relation:
        return self.members[min(i, len(self.members) - 1)]

    @property
    def length(self) -> int:
        return len(self.members)


def chain_violation(chain: EntourageChain) -> Optional[tuple[int, str]]:
    v = chain.members
    if not v:
        return 0, "empty chain"
    if any(m.n != chain.n for m in v):
        return 0, "members on different carriers"
    if v[0] != full_relation(chain.n):
        return 0, "V_0 is not X x X"
    d = diagonal(chain.n)
    for i, m in enumerate(v[1:], 1):
        if not d <= m:
            return i, "misses the diagonal"
        if not m.is_symmetric():
            return i, "not symmetric"
        if not compose(compose(m, m), m) <= v[i - 1]:
            return i, "V_i o V_i o V_i is not inside V_(i-1)"
    last = v[-1]
    if not compose(compose(last, last), last) <= last:
        return len(v) - 1, "last member is not transitive, so its repetition breaks the chain"
    return None


def check_chain(chain: EntourageChain) -> EntourageChain:
    bad = chain_violation(chain)
    if bad is not None:
        raise ChainError(*bad)
    return chain


def _weights(chain: EntourageChain) -> list[list[Fraction]]:
    n, v = chain.n, chain.members
    k = len(v) - 1
    w = [[Fraction(0)] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            if (x, y) in v[k]:
                continue
            top = max(i for i in range(k + 1) if (x, y) in v[i])
            w[x][y] = Fraction(1, 2 ** top)
    return w


def chain_pseudometric(chain: EntourageChain) -> Pseudometric:
    """Shortest-path pseudometric over the weights ``2^-max{i : (x,y) in V_i}``."""
    check_chain(chain)
    d = _weights(chain)
    n = chain.n
    for z in range(n):
        for x in range(n):
            for y in range(n):
                if d[x][z] + d[z][y] < d[x][y]:
                    d[x][y] = d[x][z] + d[z][y]
    return Pseudometric(n, tuple(tuple(r) for r in d))


def sandwich_depth(chain: EntourageChain, rho: Pseudometric) -> int:
    """Indices past this one repeat the last member and see only ``rho == 0``."""
    pos = rho.positive_values()
    extra = 0
    if pos:
        while Fraction(1, 2 ** extra) >= min(pos):
            extra += 1
    return chain.length + extra


def sandwich_failure(chain: EntourageChain, rho: Pseudometric) -> Optional[tuple[int, str]]:
    """First index where ``{rho < 2^-i} <= V_i <= {rho <= 2^-i}`` fails."""
    for i in range(1, sandwich_depth(chain, rho) + 1):
        r = Fraction(1, 2 ** i)
        if not rho.ball(r) <= chain[i]:
            return i, "lower"
        if not chain[i] <= rho.closed_ball(r):
            return i, "upper"
    return None


# -- unit balls and separating functions ------------------------------------

@dataclass(frozen=True)
class UnitBall:
    rho: Pseudometric
    chain: EntourageChain
    inside: bool
    preuniform: bool


def _strong(mu: PreUniformity):
    if not mu.is_valid:
        raise NotAPreUniformity(mu.report)
    if not mu.report.strong:
        raise NotStrong("pre-uniformity is not strong")


def unit_ball_pseudometric(mu: PreUniformity, v: Relation) -> UnitBall:
    """A pseudometric with ``{rho < 1} <= V``.

    ``W_1`` is a basis member with ``W_1 o W_1 <= V`` and each later ``W`` has
    its cube inside the previous one; the chain uses ``W & W^-1``, which is
    symmetric but need not belong to ``mu``.  ``preuniform`` reports whether
    the result is pre-uniform for ``mu``, which the construction does not force.
    """
    _strong(mu)
    if not member(mu, v):
        raise ValueError("relation is not an entourage of the pre-uniformity")
    w = next(c for c in mu.basis if compose(c, c) <= v)
    ws = [w]
    while not compose(w, w) <= w:
        w = next(c for c in mu.basis if compose(compose(c, c), c) <= w)
        ws.append(w)
    chain = check_chain(EntourageChain(mu.n, (full_relation(mu.n),) + tuple(c & inverse(c) for c in ws)))
    rho = chain_pseudometric(chain).scaled(2)
    return UnitBall(rho, chain, rho.ball(1) <= v, is_preuniform_pseudometric(rho, mu))


@dataclass(frozen=True)
class SeparatingFunction:
    values: tuple[Fraction, ...]
    method: str
    entourage: Relation


def fibres_open(tau: PreTopology, values: Sequence) -> bool:
    return all(tau.is_open(sum(1 << y for y, w in enumerate(values) if w == v))
               for v in set(values))


def separating_function(mu: PreUniformity, x: int, f: int) -> SeparatingFunction:
    """``g(x) = 0``, ``g = 1`` on the closed set ``f`` and every fibre of ``g`` open.

    First tries ``min(1, rho(x, .))`` for the unit-ball pseudometric of a
    basis member whose section at ``x`` misses ``f``; if its fibres are not
    open, falls back to the indicator of the complement of that section, which
    works because every basis section is both open and closed.
    """
    _strong(mu)
    tau = induced_pretopology(mu)
    if f >> x & 1:
        raise ValueError("point lies in the closed set")
    if not tau.is_closed(f):
        raise ValueError("set is not closed")
    one = Fraction(1)
    candidates = [b for b in mu.basis if b.rows[x] & f == 0]
    for b in candidates:
        rho = unit_ball_pseudometric(mu, b).rho
        vals = tuple(min(one, rho(x, y)) for y in range(mu.n))
        if fibres_open(tau, vals):
            return SeparatingFunction(vals, "pseudometric", b)
    b = candidates[0]
    vals = tuple(Fraction(0) if b.rows[x] >> y & 1 else one for y in range(mu.n))
    return SeparatingFunction(vals, "section", b)


def separation_holds(mu: PreUniformity, x: int, f: int, g: SeparatingFunction) -> bool:
    tau = induced_pretopology(mu)
    return (g.values[x] == 0 and all(g.values[y] == 1 for y in bits(f))
            and fibres_open(tau, g.values))


# -- continuity and induced structures --------------------------------------

def pseudometric_precontinuity(rho: Pseudometric, mu: PreUniformity) -> bool:
    """Preimage under ``rho`` of every open interval is open in the product.

    On a finite value set the preimages of open intervals are exactly the
    unions of fibres over runs of consecutive values.
    """
    if not is_preuniform_pseudometric(rho, mu):
        raise ValueError("pseudometric is not pre-uniform for the pre-uniformity")
    tau = induced_pretopology(mu)
    fib = rho.fibres()
    vals = sorted(fib)
    for i in range(len(vals)):
        s = 0
        for j in range(i, len(vals)):
            s |= fib[vals[j]]
            if not is_open_in_product(tau, tau, s):
                return False
    return True


def induced_from_pseudometric(rho: Pseudometric) -> PreUniformity:
    return generate_from_pseudometrics([rho]).mu


def open_partitions(tau: PreTopology) -> Iterator[list[int]]:
    """Partitions of the carrier whose blocks are all open."""
    n = tau.n

    def rec(rest):
        if rest == 0:
            yield []
            return
        low = rest & -rest
        sub = rest
        while sub:
            if sub & low and tau.is_open(sub):
                for tail in rec(rest & ~sub):
                    yield [sub] + tail
            sub = (sub - 1) & rest
    yield from rec(full(n))


def block_function(n: int, blocks: Sequence[int]) -> tuple[Fraction, ...]:
    vals = [Fraction(0)] * n
    for i, b in enumerate(blocks):
        for y in bits(b):
            vals[y] = Fraction(i)
    return tuple(vals)


def continuous_function_pseudometrics(tau: PreTopology) -> list[Pseudometric]:
    """``rho_f`` for one pre-continuous ``f`` per partition into open fibres.

    Any two maps with the same fibres give the same small balls, and the
    larger balls contain those, so one representative per partition generates
    the same pre-uniformity as all bounded pre-continuous maps.
    """
    return [Pseudometric.from_function(block_function(tau.n, p)) for p in open_partitions(tau)]


def function_preuniformity(tau: PreTopology) -> Generated:
    return generate_from_pseudometrics(continuous_function_pseudometrics(tau), tau)


__all__ = [
    "ChainError", "EntourageChain", "NotAPseudometric", "NotStrong", "Pseudometric",
    "SeparatingFunction", "UnitBall", "chain_pseudometric", "chain_violation", "check_chain",
    "continuous_function_pseudometrics", "fibres_open", "function_preuniformity",
    "induced_from_pseudometric", "is_preuniform_pseudometric", "open_partitions",
    "pseudometric_precontinuity", "sandwich_failure", "separating_function",
    "separation_holds", "probe_radii", "unit_ball_pseudometric",
]
