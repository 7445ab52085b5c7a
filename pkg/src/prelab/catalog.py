"""Named small structures used as fixtures, CLI samples and search anchors."""
from __future__ import annotations

from prelab.preprox import PreProximity
from prelab.pretop import PreTopology
from prelab.preunif import PreUniformity
from prelab.relcore import Carrier, Relation, diagonal, inverse

ABC = Carrier(("a", "b", "c"))


def cyclic_entourage() -> Relation:
    """The diagonal of ``{a,b,c}`` plus ``(a,b), (b,c), (c,a)``."""
    return Relation.from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (2, 0)])


def three_point_family() -> PreUniformity:
    """Up-closure of the cyclic entourage and its inverse on ``{a,b,c}``.

    Its induced family is a non-discrete pre-topology, but every composition
    of the two generators is all of ``X x X``, so the composition axiom fails.
    """
    u = cyclic_entourage()
    return PreUniformity(3, (u, inverse(u)))


def three_point_topology() -> PreTopology:
    return PreTopology(3, frozenset({0, 0b011, 0b101, 0b110, 0b111}))


def two_point_strong() -> PreUniformity:
    """Strong but not symmetric: ``up{diag + (0,1), diag + (1,0)}``."""
    v = diagonal(2) | Relation.from_pairs(2, [(0, 1)])
    return PreUniformity(2, (v, inverse(v)))


def nonempty_nearness(n: int) -> PreProximity:
    """``A`` near ``B`` iff both are nonempty.  Distinct points come out near,
    so this is not a pre-proximity once there are two points."""
    return PreProximity.from_predicate(n, lambda a, b: a != 0 and b != 0)
