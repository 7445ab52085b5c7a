import random
from itertools import product as cartesian

from hypothesis import settings, strategies as st

from prelab.relcore import Relation, compose

settings.register_profile("lab", max_examples=60, deadline=None)
settings.load_profile("lab")


def pair_set(r: Relation) -> set:
    return {(x, y) for x in range(r.n) for y in range(r.n) if r.rows[x] >> y & 1}


def from_pair_set(n: int, pairs) -> Relation:
    return Relation.from_pairs(n, pairs)


@st.composite
def relations(draw, n=None, reflexive=False):
    n = n if n is not None else draw(st.integers(1, 4))
    rows = []
    for x in range(n):
        row = draw(st.integers(0, (1 << n) - 1))
        if reflexive:
            row |= 1 << x
        rows.append(row)
    return Relation(n, tuple(rows))


@st.composite
def relation_pairs(draw, count=2, reflexive=False):
    n = draw(st.integers(1, 4))
    return tuple(draw(relations(n, reflexive)) for _ in range(count))


def random_equivalence(n: int, rng: random.Random) -> Relation:
    labels = [rng.randrange(n) for _ in range(n)]
    return Relation.from_pairs(n, [(x, y) for x, y in cartesian(range(n), repeat=2)
                                   if labels[x] == labels[y]])


def random_chain_members(n: int, rng: random.Random, length: int) -> tuple:
    """Full relation first, then symmetric supersets of cubes, ending in an equivalence."""
    members = [random_equivalence(n, rng)]
    for _ in range(length - 1):
        nxt = members[0]
        cube = compose(compose(nxt, nxt), nxt)
        extra = set()
        for x, y in cartesian(range(n), repeat=2):
            if rng.random() < 0.3:
                extra |= {(x, y), (y, x)}
        members.insert(0, from_pair_set(n, pair_set(cube) | extra))
    full = Relation(n, tuple([(1 << n) - 1] * n))
    return (full, *members)
