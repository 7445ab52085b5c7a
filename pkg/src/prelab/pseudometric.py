"""Pseudometrics with exact rational distances."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from prelab.relcore import Relation, SizeLike, _size, mask


class NotAPseudometric(ValueError):
    pass


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True)
class Pseudometric:
    n: int
    d: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        d = tuple(tuple(_frac(v) for v in row) for row in self.d)
        object.__setattr__(self, "d", d)
        if len(d) != self.n or any(len(row) != self.n for row in d):
            raise NotAPseudometric("distance matrix must be n x n")
        bad = self.violation()
        if bad is not None:
            raise NotAPseudometric(bad)

    def violation(self):
        d, n = self.d, self.n
        for x in range(n):
            if d[x][x] != 0:
                return f"d({x},{x}) = {d[x][x]} is not 0"
            for y in range(n):
                if d[x][y] < 0:
                    return f"d({x},{y}) is negative"
                if d[x][y] != d[y][x]:
                    return f"d({x},{y}) != d({y},{x})"
                for z in range(n):
                    if d[x][y] > d[x][z] + d[z][y]:
                        return f"triangle inequality fails at ({x},{z},{y})"
        return None

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Pseudometric":
        return cls(len(rows), tuple(tuple(_frac(v) for v in r) for r in rows))

    @classmethod
    def discrete(cls, n: SizeLike) -> "Pseudometric":
        n = _size(n)
        return cls(n, tuple(tuple(Fraction(int(x != y)) for y in range(n)) for x in range(n)))

    @classmethod
    def zero(cls, n: SizeLike) -> "Pseudometric":
        n = _size(n)
        return cls(n, tuple((Fraction(0),) * n for _ in range(n)))

    @classmethod
    def from_function(cls, values: Sequence) -> "Pseudometric":
        """``|f(x) - f(y)|`` for a real-valued (rational) point function ``f``."""
        vals = [_frac(v) for v in values]
        return cls(len(vals), tuple(tuple(abs(a - b) for b in vals) for a in vals))

    def __call__(self, x: int, y: int) -> Fraction:
        return self.d[x][y]

    def values(self) -> list[Fraction]:
        return sorted({v for row in self.d for v in row})

    def positive_values(self) -> list[Fraction]:
        return [v for v in self.values() if v > 0]

    def ball(self, eps) -> Relation:
        """``{(x, y) : d(x, y) < eps}``."""
        eps = _frac(eps)
        return Relation(self.n, tuple(mask(y for y in range(self.n) if self.d[x][y] < eps)
                                      for x in range(self.n)))

    def closed_ball(self, eps) -> Relation:
        eps = _frac(eps)
        return Relation(self.n, tuple(mask(y for y in range(self.n) if self.d[x][y] <= eps)
                                      for x in range(self.n)))

    def scaled(self, k) -> "Pseudometric":
        k = _frac(k)
        return Pseudometric(self.n, tuple(tuple(k * v for v in row) for row in self.d))

    def pulled_back(self, values: Sequence[int]) -> "Pseudometric":
        """``sigma(x, y) = d(f(x), f(y))`` for a point map given by its values."""
        return Pseudometric(len(values), tuple(tuple(self.d[a][b] for b in values) for a in values))

    def fibres(self) -> dict[Fraction, int]:
        """Fibres of ``d`` as subsets of the product carrier (pair ``(x,y)`` at ``x*n+y``)."""
        out: dict[Fraction, int] = {}
        for x in range(self.n):
            for y in range(self.n):
                out[self.d[x][y]] = out.get(self.d[x][y], 0) | 1 << (x * self.n + y)
        return out


def separation_failure(family: Iterable[Pseudometric], n: int):
    """First pair of distinct points at distance 0 under every member, else None."""
    family = list(family)
    for x in range(n):
        for y in range(x + 1, n):
            if not any(p.d[x][y] > 0 for p in family):
                return (x, y)
    return None
