from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from prelab.catalog import ABC, three_point_topology
from prelab.pretop import (
    NotAPreTopology, PointMap, PreTopology, box, closure, generate, interior,
    is_open_in_product, is_precontinuous, is_pretopology, labelled_pretopologies,
    product_pretopology, projections, separation_profile,
)
from prelab.relcore import CarrierMismatch, full

PRETOPS = {n: labelled_pretopologies(n) for n in range(1, 4)}


def brute_pretopologies(n):
    """Every family of subsets that contains the empty set and the carrier and is union closed."""
    subsets = range(1 << n)
    out = set()
    for code in range(1 << (1 << n)):
        fam = {s for s in subsets if code >> s & 1}
        if 0 in fam and full(n) in fam and all(a | b in fam for a in fam for b in fam):
            out.add(frozenset(fam))
    return out


def brute_closure(tau, m):
    closed = [tau.top & ~u for u in tau.opens]
    out = tau.top
    for c in closed:
        if m & ~c == 0:
            out &= c
    return out


def brute_t2(tau):
    n = tau.n
    return all(any(u >> x & 1 and v >> y & 1 and u & v == 0 for u in tau.opens for v in tau.opens)
               for x in range(n) for y in range(n) if x != y)


def test_three_set_prebase():
    tau = generate(ABC, [ABC.subset("ab"), ABC.subset("bc"), ABC.subset("ac")])
    assert tau.opens == {0, ABC.subset("ab"), ABC.subset("bc"), ABC.subset("ac"), 0b111}


def test_singleton_and_trivial_prebases():
    assert generate(3, [1, 2, 4]) == PreTopology.discrete(3)
    assert generate(3, [0b111]).opens == {0, 0b111}


def test_uncovering_prebase_is_rejected():
    with pytest.raises(NotAPreTopology, match="does not cover"):
        generate(3, [0b011])


def test_is_pretopology_examples():
    assert is_pretopology(2, [0, 0b01, 0b11])
    assert not is_pretopology(2, [0b01, 0b10])
    assert is_pretopology(3, range(8))


def test_closure_and_interior_in_three_point_topology():
    tau = three_point_topology()
    a, ab = ABC.subset("a"), ABC.subset("ab")
    assert closure(tau, 0) == 0 and closure(tau, 0b111) == 0b111
    assert closure(tau, a) == a
    assert closure(tau, ab) == 0b111
    assert interior(tau, ab) == ab
    assert interior(tau, a) == 0
    assert interior(tau, 0b111) == 0b111


def test_precontinuity_examples():
    tau = PreTopology.from_opens(2, [0, 0b01, 0b11])
    swap = PointMap(2, 2, (1, 0))
    assert not is_precontinuous(swap, tau, tau)
    for n, fams in PRETOPS.items():
        for t in fams[:20]:
            assert is_precontinuous(PointMap.identity(n), t, t)
            assert is_precontinuous(PointMap.constant(n, 2, 1), t, tau)
    with pytest.raises(CarrierMismatch):
        is_precontinuous(swap, PreTopology.discrete(3), tau)


def test_separation_examples():
    prof = separation_profile(three_point_topology())
    assert (prof.T0, prof.T1, prof.T2, prof.regular, prof.completely_regular) == \
        (True, True, False, False, False)
    assert all(separation_profile(PreTopology.discrete(3)).as_dict().values())
    ind = separation_profile(PreTopology.indiscrete(2))
    assert not any((ind.T0, ind.T1, ind.T2, ind.regular, ind.completely_regular))


def test_labelled_counts_match_brute_force():
    for n in range(1, 4):
        assert {t.opens for t in PRETOPS[n]} == brute_pretopologies(n)
    assert [len(PRETOPS[n]) for n in range(1, 4)] == [1, 4, 45]


def test_labelled_count_four_points():
    assert len(labelled_pretopologies(4)) == 2271


def test_closure_interior_duality_exhaustive():
    for n in range(1, 5):
        fams = PRETOPS.get(n) or labelled_pretopologies(n)
        for tau in fams:
            top = tau.top
            for m in range(1 << n):
                c = closure(tau, m)
                assert c == brute_closure(tau, m)
                assert interior(tau, m) == top & ~closure(tau, top & ~m)
                # extensive, idempotent, fixes the empty set
                assert m & ~c == 0 and closure(tau, c) == c
                assert tau.is_open(m) == (interior(tau, m) == m)
            assert closure(tau, 0) == 0


def test_closure_monotone():
    for tau in PRETOPS[3]:
        for a in range(8):
            for b in range(8):
                if a & ~b == 0:
                    assert closure(tau, a) & ~closure(tau, b) == 0


def test_closed_sets_closed_under_intersection():
    for tau in PRETOPS[3]:
        closed = set(tau.closed_sets())
        assert all(a & b in closed for a in closed for b in closed)


def test_hausdorff_against_brute_force():
    for n in range(1, 4):
        for tau in PRETOPS[n]:
            prof = separation_profile(tau)
            assert prof.T2 == brute_t2(tau)
            if prof.completely_regular:
                assert prof.regular
            if prof.regular:
                assert prof.T1


def test_products():
    d2 = PreTopology.discrete(2)
    assert product_pretopology(d2, d2) == PreTopology.discrete(4)
    ind = PreTopology.indiscrete(2)
    tau = PreTopology.from_opens(2, [0, 1, 3])
    prod = product_pretopology(ind, tau)
    assert prod.opens == {0} | {box(2, 0b11, v) for v in tau.opens}


def test_projections_precontinuous():
    for t1 in PRETOPS[2] + PRETOPS[3][::5]:
        for t2 in PRETOPS[2]:
            prod = product_pretopology(t1, t2)
            p1, p2 = projections(t1.n, t2.n)
            assert is_precontinuous(p1, prod, t1)
            assert is_precontinuous(p2, prod, t2)
            for s in range(1 << prod.n):
                assert is_open_in_product(t1, t2, s) == prod.is_open(s)


@given(st.sampled_from(PRETOPS[3]), st.sampled_from(PRETOPS[3]), st.sampled_from(PRETOPS[3]),
       st.tuples(*[st.integers(0, 2)] * 3), st.tuples(*[st.integers(0, 2)] * 3))
def test_precontinuity_composes(t1, t2, t3, hv, gv):
    h, g = PointMap(3, 3, hv), PointMap(3, 3, gv)
    if is_precontinuous(h, t1, t2) and is_precontinuous(g, t2, t3):
        assert is_precontinuous(h.then(g), t1, t3)


def test_prebase_unions_match_subfamily_enumeration():
    pre = [0b011, 0b110, 0b100]
    unions = set()
    for k in range(len(pre) + 1):
        for sub in combinations(pre, k):
            u = 0
            for s in sub:
                u |= s
            unions.add(u)
    assert generate(3, pre).opens == unions
