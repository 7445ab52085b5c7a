from itertools import product as cartesian

import pytest

from prelab.groups import (
    GroupTable, NotAGroup, PipelineError, candidate_bases, cyclic, group_pipeline,
    group_preuniformity, is_pretopological_group, is_strongly_pretopological_group, klein,
    small_groups, strong_report, symmetric3, translations_are_homeomorphisms,
)
from prelab.pretop import (
    PointMap, PreTopology, generate, is_precontinuous, labelled_pretopologies,
    product_pretopology, separation_profile,
)
from prelab.preunif import PreUniformity, induced_pretopology

Z4_COSETS = generate(4, [0b0101, 0b1010])


def literal_pretopological(g, tau):
    prod = product_pretopology(tau, tau)
    mul = PointMap(g.n * g.n, g.n, tuple(g.mul[a][b] for a, b in cartesian(range(g.n), repeat=2)))
    inv = PointMap(g.n, g.n, tuple(g.inv[x] for x in range(g.n)))
    return is_precontinuous(mul, prod, tau) and is_precontinuous(inv, tau, tau)


def test_group_tables_are_checked():
    with pytest.raises(NotAGroup):
        GroupTable(2, ((0, 1), (1, 1)))
    assert [g.n for g in small_groups(4)] == [1, 2, 3, 4, 4]
    s3 = symmetric3()
    assert all(s3.mul[x][s3.inv[x]] == s3.e for x in range(6))


def test_pretopological_group_examples():
    for g in small_groups(4) + [symmetric3()]:
        assert is_pretopological_group(g, PreTopology.discrete(g.n))
    assert is_pretopological_group(cyclic(4), Z4_COSETS)
    assert not is_pretopological_group(cyclic(2), PreTopology.from_opens(2, [0, 1, 3]))


def test_pretopological_group_matches_product_oracle():
    for g in small_groups(4):
        for tau in labelled_pretopologies(g.n):
            assert is_pretopological_group(g, tau) == literal_pretopological(g, tau)


def test_strong_examples():
    d4 = PreTopology.discrete(4)
    assert is_strongly_pretopological_group(cyclic(4), d4, [0b0001])
    assert is_strongly_pretopological_group(cyclic(4), Z4_COSETS, [0b0101])
    assert not is_strongly_pretopological_group(cyclic(3), PreTopology.discrete(3), [0b011])
    assert not strong_report(cyclic(3), PreTopology.discrete(3), [0b011]).symmetric
    with pytest.raises(ValueError, match="identity"):
        strong_report(cyclic(4), d4, [0b0010])
    with pytest.raises(ValueError, match="not open"):
        strong_report(cyclic(4), Z4_COSETS, [0b0011])


def test_pipeline_discrete_examples():
    out = group_preuniformity(cyclic(2), PreTopology.discrete(2), [0b01])
    assert out.mu == PreUniformity.discrete(2) and out.completely_regular
    s3 = symmetric3()
    out = group_preuniformity(s3, PreTopology.discrete(6), [1 << s3.e])
    assert out.completely_regular and out.induces_tau


def test_coset_pipeline_stops_at_point_separation():
    """The coset topology cannot tell 0 from 2, so the translated covers fail UC3."""
    out = group_pipeline(cyclic(4), Z4_COSETS, [0b0101])
    assert not out.uc.verdicts["UC3"]
    assert out.uc.witnesses["UC3"] == (0, 2)
    assert out.covers == (frozenset({0b0101, 0b1010}),)
    assert not separation_profile(Z4_COSETS).T0
    assert not out.completely_regular
    with pytest.raises(PipelineError) as err:
        group_preuniformity(cyclic(4), Z4_COSETS, [0b0101])
    assert err.value.stage == "covers"


def test_translations_are_homeomorphisms():
    for g in small_groups(4):
        for tau in labelled_pretopologies(g.n):
            if is_pretopological_group(g, tau):
                assert translations_are_homeomorphisms(g, tau)


def test_t0_strong_groups_complete_the_pipeline():
    seen = 0
    for g in small_groups(4):
        for tau in labelled_pretopologies(g.n):
            if not separation_profile(tau).T0:
                continue
            for base in candidate_bases(g, tau):
                if is_strongly_pretopological_group(g, tau, base):
                    out = group_preuniformity(g, tau, base)
                    assert out.mu.report.strong and induced_pretopology(out.mu) == tau
                    seen += 1
    assert seen > 0


def test_klein_group_is_abelian_of_exponent_two():
    k = klein()
    assert all(k.mul[x][x] == k.e for x in range(4))
