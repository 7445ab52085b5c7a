"""Points, subsets and binary relations over a finite carrier.

Points are integer indices ``0..n-1``.  Subsets are plain ``int`` bitmasks
(bit ``x`` set iff ``x`` is a member).  A :class:`Relation` stores one
bitmask row per point, so ``rows[x]`` is the section ``A[x]`` and
composition is a boolean matrix product done row by row.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Iterator, Sequence, Union


class CarrierMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Carrier:
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.labels) < 1:
            raise ValueError("carrier must have at least one point")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"duplicate labels in carrier: {self.labels}")

    @classmethod
    def of_size(cls, n: int) -> "Carrier":
        return cls(tuple(str(i) for i in range(n)))

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown point label {label!r}") from None

    def subset(self, labels: Iterable[str]) -> int:
        return mask(self.index(lab) for lab in labels)

    def names(self, m: int) -> list[str]:
        return [self.labels[i] for i in bits(m)]


SizeLike = Union[int, Carrier]


def _size(c: SizeLike) -> int:
    return c.size if isinstance(c, Carrier) else int(c)


# -- subsets as bitmasks ----------------------------------------------------

def mask(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def bits(m: int) -> Iterator[int]:
    i = 0
    while m:
        if m & 1:
            yield i
        m >>= 1
        i += 1


def full(n: SizeLike) -> int:
    return (1 << _size(n)) - 1


def all_subsets(n: SizeLike) -> range:
    return range(1 << _size(n))


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def permute_mask(m: int, perm: Sequence[int]) -> int:
    out = 0
    for i in bits(m):
        out |= 1 << perm[i]
    return out


def check_point(n: int, x: int):
    if not 0 <= x < n:
        raise IndexError(f"point {x} out of range for carrier of size {n}")


# -- relations --------------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise ValueError("relation must have one row per point")
        top = full(self.n)
        if any(r & ~top for r in self.rows):
            raise ValueError("relation row has bits outside the carrier")

    @classmethod
    def from_pairs(cls, n: SizeLike, pairs: Iterable[tuple[int, int]]) -> "Relation":
        n = _size(n)
        rows = [0] * n
        for x, y in pairs:
            check_point(n, x)
            check_point(n, y)
            rows[x] |= 1 << y
        return cls(n, tuple(rows))

    @classmethod
    def from_code(cls, n: int, code: int) -> "Relation":
        row_mask = full(n)
        return cls(n, tuple((code >> (x * n)) & row_mask for x in range(n)))

    @property
    def code(self) -> int:
        """Bit ``x*n + y`` is set iff ``(x, y)`` is in the relation."""
        c = 0
        for x, r in enumerate(self.rows):
            c |= r << (x * self.n)
        return c

    def pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x, r in enumerate(self.rows) for y in bits(r)]

    def __contains__(self, pair) -> bool:
        x, y = pair
        return bool(self.rows[x] >> y & 1)

    def __len__(self):
        return sum(bin(r).count("1") for r in self.rows)

    def _same(self, other: "Relation"):
        if self.n != other.n:
            raise CarrierMismatch(f"carrier sizes differ: {self.n} vs {other.n}")

    def __le__(self, other: "Relation") -> bool:  # type: ignore[override]
        self._same(other)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def __lt__(self, other: "Relation") -> bool:  # type: ignore[override]
        return self <= other and self != other

    def __ge__(self, other: "Relation") -> bool:  # type: ignore[override]
        return other <= self

    def __gt__(self, other: "Relation") -> bool:  # type: ignore[override]
        return other < self

    def __and__(self, other: "Relation") -> "Relation":
        self._same(other)
        return Relation(self.n, tuple(a & b for a, b in zip(self.rows, other.rows)))

    def __or__(self, other: "Relation") -> "Relation":
        self._same(other)
        return Relation(self.n, tuple(a | b for a, b in zip(self.rows, other.rows)))

    def __sub__(self, other: "Relation") -> "Relation":
        self._same(other)
        return Relation(self.n, tuple(a & ~b for a, b in zip(self.rows, other.rows)))

    def __matmul__(self, other: "Relation") -> "Relation":
        return compose(self, other)

    def complement(self) -> "Relation":
        top = full(self.n)
        return Relation(self.n, tuple(top & ~r for r in self.rows))

    def inverse(self) -> "Relation":
        return inverse(self)

    def section(self, x: int) -> int:
        return section(self, x)

    def image(self, m: int) -> int:
        """Union of the sections ``A[x]`` over ``x`` in the subset ``m``."""
        out = 0
        for x in bits(m):
            out |= self.rows[x]
        return out

    def meets(self, a: int, b: int) -> bool:
        """True iff the relation meets the rectangle ``a x b``."""
        return any(self.rows[x] & b for x in bits(a))

    def is_reflexive(self) -> bool:
        return all(r >> x & 1 for x, r in enumerate(self.rows))

    def is_transitive(self) -> bool:
        return compose(self, self) <= self

    def is_symmetric(self) -> bool:
        return is_symmetric(self)

    def permuted(self, perm: Sequence[int]) -> "Relation":
        """Relabel points: ``(x, y)`` becomes ``(perm[x], perm[y])``."""
        rows = [0] * self.n
        for x, r in enumerate(self.rows):
            rows[perm[x]] = permute_mask(r, perm)
        return Relation(self.n, tuple(rows))


def diagonal(carrier: SizeLike) -> Relation:
    n = _size(carrier)
    return Relation(n, tuple(1 << x for x in range(n)))


def full_relation(carrier: SizeLike) -> Relation:
    n = _size(carrier)
    return Relation(n, (full(n),) * n)


def rectangle(n: SizeLike, a: int, b: int) -> Relation:
    """The relation ``a x b``."""
    n = _size(n)
    return Relation(n, tuple(b if a >> x & 1 else 0 for x in range(n)))


def inverse(a: Relation) -> Relation:
    rows = [0] * a.n
    for x, r in enumerate(a.rows):
        for y in bits(r):
            rows[y] |= 1 << x
    return Relation(a.n, tuple(rows))


def compose(a: Relation, b: Relation) -> Relation:
    # (x, y) in a∘b iff some z has (x, z) in a and (z, y) in b
    a._same(b)
    return Relation(a.n, tuple(b.image(r) for r in a.rows))


def section(a: Relation, x: int) -> int:
    check_point(a.n, x)
    return a.rows[x]


def is_symmetric(a: Relation) -> bool:
    return a == inverse(a)


def reflexive_relations(n: int) -> Iterator[Relation]:
    """Every relation containing the diagonal, in increasing code order."""
    off = [(x, y) for x in range(n) for y in range(n) if x != y]
    d = diagonal(n).code
    for k in range(1 << len(off)):
        c = d
        for i, (x, y) in enumerate(off):
            if k >> i & 1:
                c |= 1 << (x * n + y)
        yield Relation.from_code(n, c)


def preorders(n: int) -> list[Relation]:
    return [r for r in reflexive_relations(n) if r.is_transitive()]


def minimal_elements(rels: Iterable[Relation]) -> list[Relation]:
    """Inclusion-minimal members, deduplicated and sorted by code."""
    uniq = sorted(set(rels), key=lambda r: (len(r), r.code))
    out: list[Relation] = []
    for r in uniq:
        if not any(m <= r for m in out):
            out.append(r)
    return sorted(out, key=lambda r: r.code)


def all_permutations(n: int) -> list[tuple[int, ...]]:
    return list(permutations(range(n)))
