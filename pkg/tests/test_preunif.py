import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import relations
from oracles import axioms, induced_opens, pairs, up_family
from prelab.catalog import ABC, cyclic_entourage, three_point_family, two_point_strong
from prelab.pretop import PointMap, PreTopology, interior, is_open_in_product, is_precontinuous
from prelab.preunif import (
    CoverAxiomError, NotAPreUniformity, PreBaseError, PreUniformity, SeparationError,
    check_axioms, compare, contains, coreflection, cover_of, entourage_prebases,
    generate_from_covers, generate_from_prebase, generate_from_pseudometrics,
    induced_pretopology, is_neighborhood_prebase, is_preuniformly_continuous,
    is_star_refinement, labelled_preuniformities, member, neighborhood_prebase, product,
    square_cover, square_union, star, sup, t0_criterion, totally_bounded, uc_check,
    universal_preuniformity, weight,
)
from prelab.preunif.constructions import continuity_forms, intersection_closure
from prelab.pseudometric import Pseudometric
from prelab.relcore import Relation, compose, diagonal, full_relation, inverse

VALID = {n: list(labelled_preuniformities(n)) for n in (1, 2, 3)}
PREFAMILIES = {n: list(labelled_preuniformities(n, require_u5=False)) for n in (1, 2, 3)}
AXES = ("U1", "U2", "U3", "U5", "U6", "U2'", "U3'")


def test_labelled_counts():
    assert [len(VALID[n]) for n in (1, 2, 3)] == [1, 2, 200]


def test_valid_enumeration_matches_literal_axioms_n2():
    found = set()
    from oracles import reflexive_relations
    rels = list(reflexive_relations(2))
    for k in range(1, 1 << len(rels)):
        basis = [Relation.from_pairs(2, r) for i, r in enumerate(rels) if k >> i & 1]
        fam = up_family(2, basis)
        ax = axioms(2, fam)
        if all(ax[a] for a in ("U1", "U2", "U3", "U5")):
            found.add(frozenset(fam))
    assert found == {frozenset(up_family(2, m.basis)) for m in VALID[2]}


def test_discrete_passes_everything():
    rep = check_axioms(3, [diagonal(3)])
    assert all(rep.verdicts.values())
    assert rep.label() == "uniform"


def test_three_point_family_fails_composition():
    mu = three_point_family()
    rep = mu.report
    assert rep.verdicts["U1"] and rep.verdicts["U2"] and rep.verdicts["U5"]
    assert not rep.verdicts["U3"]
    comps = rep.witnesses["U3"]["compositions"]
    assert len(comps) == 4 and all(c == full_relation(3) for _, _, c in comps)


def test_two_point_strong_classification():
    rep = two_point_strong().report
    assert rep.is_preuniformity and rep.strong and not rep.symmetric


@given(st.lists(relations(3, reflexive=True), min_size=1, max_size=3))
def test_axioms_match_literal_up_closure(basis):
    rep = check_axioms(3, basis)
    lit = axioms(3, up_family(3, basis))
    for a in AXES:
        assert rep.verdicts[a] == lit[a], a


def test_membership():
    mu = three_point_family()
    assert member(mu, full_relation(3))
    assert not member(mu, diagonal(3))
    assert member(PreUniformity.discrete(3), diagonal(3))


def test_induced_pretopology_examples():
    tau = induced_pretopology(three_point_family())
    assert tau.opens == {0, ABC.subset("ab"), ABC.subset("ac"), ABC.subset("bc"), 0b111}
    assert tau != PreTopology.discrete(3)
    assert induced_pretopology(PreUniformity.discrete(3)) == PreTopology.discrete(3)
    assert induced_pretopology(PreUniformity.indiscrete(3)).opens == {0, 0b111}


def test_induced_pretopology_matches_literal():
    for n in (2, 3):
        for mu in PREFAMILIES[n]:
            assert induced_pretopology(mu).opens == induced_opens(n, up_family(n, mu.basis))


def test_neighbourhood_prebase():
    assert neighborhood_prebase(PreUniformity.discrete(3), 1) == [0b010] * 1
    mu = two_point_strong()
    assert sorted(neighborhood_prebase(mu, 0)) == [0b01, 0b11]
    for n in (1, 2, 3):
        for mu in VALID[n]:
            tau = induced_pretopology(mu)
            for x in range(n):
                nb = neighborhood_prebase(mu, x)
                assert nb == [interior(tau, b.rows[x]) for b in mu.basis]
                assert is_neighborhood_prebase(tau, x, nb)
    with pytest.raises(NotAPreUniformity):
        neighborhood_prebase(three_point_family(), 0)


def member_scan_prebases(mu):
    """Verdicts from every member of the up-closure, not just the minimal ones."""
    tau = induced_pretopology(mu)
    top = (1 << mu.n * mu.n) - 1
    members = [Relation.from_pairs(mu.n, p) for p in up_family(mu.n, mu.basis)]
    closed = [m for m in members if is_open_in_product(tau, tau, top & ~m.code)]
    opened = [m for m in members if is_open_in_product(tau, tau, m.code)]
    return (all(any(c <= b for c in closed) for b in members),
            all(any(o <= b for o in opened) for b in members))


def test_entourage_prebases():
    e = entourage_prebases(PreUniformity.discrete(2))
    assert e.closed_is_prebase and e.open_is_prebase
    for n in (2, 3):
        for mu in VALID[n]:
            e = entourage_prebases(mu)
            assert e.closed_is_prebase and e.open_is_prebase
            assert member_scan_prebases(mu) == (True, True)
    with pytest.raises(NotAPreUniformity, match="not a pre-uniformity"):
        entourage_prebases(three_point_family())


def test_entourage_prebase_verdicts_on_families_without_point_separation():
    for mu in PREFAMILIES[3]:
        if mu.report.is_preuniformity or not mu.report.verdicts["U3"]:
            continue
        # the minimal-member shortcut needs only the up-closure, not separation
        fake = PreUniformity(mu.n, mu.basis)
        tau = induced_pretopology(fake)
        top = (1 << 9) - 1
        quick = all(is_open_in_product(tau, tau, top & ~b.code) for b in fake.basis)
        assert quick == member_scan_prebases(fake)[0]


def test_t0_criterion():
    assert t0_criterion(PreUniformity.indiscrete(2)) == (False, False)
    assert t0_criterion(PreUniformity.discrete(3)) == (True, True)
    for n in (1, 2, 3):
        for mu in PREFAMILIES[n]:
            a, b = t0_criterion(mu)
            assert a == b


def test_weight():
    assert weight(PreUniformity.discrete(3)) == 1
    mu = two_point_strong()
    assert weight(mu) == 2
    assert weight(sup([mu, mu])) == 2


def test_compare_and_monotone_topology():
    d = PreUniformity.discrete(3)
    mus = VALID[3][::7]
    for mu in mus:
        assert compare(d, mu) in ("finer", "equal")
        assert compare(mu, mu) == "equal"
    for a in mus:
        for b in mus:
            if contains(a, b):
                assert induced_pretopology(b) <= induced_pretopology(a)
                assert up_family(3, b.basis) <= up_family(3, a.basis)


def test_sup_properties():
    mus = VALID[3][::11]
    d = PreUniformity.discrete(3)
    for a in mus:
        assert sup([a]) == a
        assert sup([d, a]) == d
        for b in mus:
            s = sup([a, b])
            assert s == sup([b, a]) and s.is_valid
            fam = up_family(3, a.basis) | up_family(3, b.basis)
            assert up_family(3, s.basis) == fam
            for c in mus:
                assert sup([sup([a, b]), c]) == sup([a, sup([b, c])])
                if contains(c, a) and contains(c, b):
                    assert contains(c, s)
    with pytest.raises(ValueError):
        sup([])


def test_generate_from_prebase():
    assert generate_from_prebase(2, [diagonal(2)]).mu == PreUniformity.discrete(2)
    with pytest.raises(PreBaseError, match="BU2") as err:
        generate_from_prebase(ABC, [cyclic_entourage(), inverse(cyclic_entourage())])
    assert err.value.witness["entourage"] == cyclic_entourage()
    mu = generate_from_prebase(2, two_point_strong().basis).mu
    assert mu.report.strong


def test_covers_and_stars():
    assert cover_of(diagonal(3)) == {1, 2, 4}
    assert star(0b010, [1, 2, 4]) == 0b010
    assert star(0b001, [0b011, 0b110]) == 0b011
    for a in ([0b011, 0b110], [0b111], [1, 2, 4]):
        assert square_union(a, 3).is_symmetric()


def test_uc_generation():
    assert generate_from_covers(3, [[1, 2, 4]]).mu == PreUniformity.discrete(3)
    rep = uc_check(2, [[0b11]])
    assert not rep.verdicts["UC3"]
    with pytest.raises(CoverAxiomError):
        generate_from_covers(2, [[0b11]])


def test_star_refinement_for_cube_inside():
    rng = random.Random(5)
    strong = [m for n in (2, 3) for m in VALID[n] if m.report.strong]
    for _ in range(200):
        mu = rng.choice(strong)
        for v in mu.basis:
            for w in mu.members():
                if w.is_symmetric() and compose(compose(w, w), w) <= v:
                    assert is_star_refinement(cover_of(w), cover_of(v), mu.n)


def test_generated_from_covers_is_strong():
    for n in (2, 3):
        for mu in VALID[n]:
            if mu.report.strong and mu.report.symmetric:
                covers = [cover_of(b) for b in mu.members() if b.is_symmetric()]
                try:
                    gen = generate_from_covers(n, covers)
                except CoverAxiomError:
                    continue
                assert gen.mu.report.strong


def test_generate_from_pseudometrics():
    assert generate_from_pseudometrics([Pseudometric.discrete(3)]).mu == PreUniformity.discrete(3)
    with pytest.raises(SeparationError) as err:
        generate_from_pseudometrics([Pseudometric.zero(2)])
    assert err.value.pair == (0, 1)


@st.composite
def pseudometrics(draw):
    n = draw(st.integers(2, 6))
    pts = [draw(st.integers(0, 12)) for _ in range(n)]
    scale = draw(st.sampled_from([1, 2, 3, 8]))
    return Pseudometric.from_function([Fraction(p, scale) for p in pts])


@given(pseudometrics())
def test_ball_composition(rho):
    for i in range(6):
        small = rho.ball(Fraction(1, 2 ** (i + 1)))
        assert compose(small, small) <= rho.ball(Fraction(1, 2 ** i))


@given(pseudometrics())
def test_single_pseudometric_generates_uniform(rho):
    if all(rho(x, y) > 0 for x in range(rho.n) for y in range(rho.n) if x != y):
        mu = generate_from_pseudometrics([rho]).mu
        assert mu.report.uniform and mu.report.strong


def test_uniform_continuity():
    for n in (2, 3):
        for mu in VALID[n][::3]:
            assert is_preuniformly_continuous(PointMap.identity(n), mu, mu)
    d1 = PreUniformity.discrete(1)
    assert is_preuniformly_continuous(PointMap.constant(3, 1, 0), VALID[3][0], d1)


def test_uniform_continuity_forms_agree_and_imply_precontinuity():
    maps = [PointMap(2, 2, v) for v in ((0, 1), (1, 0), (0, 0), (1, 1))]
    for mu in VALID[2]:
        for nu in VALID[2]:
            for f in maps:
                forms = continuity_forms(f, mu, nu)
                assert len(set(forms.values())) == 1
                if forms["entourage"]:
                    assert is_precontinuous(f, induced_pretopology(mu), induced_pretopology(nu))
    rng = random.Random(3)
    for _ in range(300):
        mu, nu = rng.choice(VALID[3]), rng.choice(VALID[3])
        f = PointMap(3, 3, tuple(rng.randrange(3) for _ in range(3)))
        if is_preuniformly_continuous(f, mu, nu):
            assert is_precontinuous(f, induced_pretopology(mu), induced_pretopology(nu))


def test_coreflection():
    d = PreUniformity.discrete(2)
    assert coreflection(d) == d
    assert coreflection(two_point_strong()) == d
    for n in (2, 3):
        for mu in VALID[n]:
            star_mu = coreflection(mu)
            assert contains(star_mu, mu)
            assert star_mu.report.verdicts["U6"]
            fam = up_family(n, mu.basis)
            closed = {frozenset.intersection(a, b) for a in fam for b in fam}
            assert up_family(n, star_mu.basis) >= closed
            if mu.report.strong:
                assert set(star_mu.basis) <= intersection_closure(mu.basis)


def test_products():
    d = PreUniformity.discrete(2)
    res = product(d, d)
    assert res.coreflection == PreUniformity.discrete(4)
    for a in VALID[2]:
        for b in VALID[2]:
            res = product(a, b)
            assert res.projections_continuous
            assert res.coreflection_matches


def test_total_boundedness_and_square_covers():
    d = PreUniformity.discrete(3)
    tb = totally_bounded(d)
    assert tb.totally_bounded
    assert list(tb.dense_sets.values()) == [0b111]
    assert square_cover(d, diagonal(3)) == frozenset({1, 2, 4})
    for n in (1, 2, 3):
        for mu in VALID[n]:
            assert totally_bounded(mu).totally_bounded
            if mu.report.strong:
                for v in mu.basis:
                    cover = square_cover(mu, v)
                    assert cover is not None
                    assert square_union(cover, n) <= v


def test_universal():
    res = universal_preuniformity(PreTopology.discrete(2), 4)
    assert res.mu == PreUniformity.discrete(2) and res.complete
    assert res.compatible_count == 2 and res.sup_compatible
    with pytest.raises(ValueError, match="not T0"):
        universal_preuniformity(PreTopology.indiscrete(2), 4)


def test_finest_is_unique_sup_of_compatibles_n2():
    for mu in VALID[2]:
        tau = induced_pretopology(mu)
        res = universal_preuniformity(tau, 4)
        compat = [m for m in VALID[2] if induced_pretopology(m) == tau]
        assert res.mu == sup(compat)
        assert induced_pretopology(res.mu) == tau


def test_compact_hausdorff_continuity_n2():
    """Discrete coreflection topology makes pre-continuity imply uniform continuity,
    except for the two-point strong family, whose failure is recorded."""
    maps = [PointMap(2, 2, v) for v in ((0, 1), (1, 0), (0, 0), (1, 1))]
    failures = []
    for mu in VALID[2]:
        for nu in VALID[2]:
            for f in maps:
                pre = is_precontinuous(f, induced_pretopology(mu), induced_pretopology(nu))
                if pre and not is_preuniformly_continuous(f, mu, nu):
                    failures.append((mu, nu, f.values))
    assert failures
    assert all(mu == two_point_strong() and nu == PreUniformity.discrete(2)
               for mu, nu, _ in failures)


@given(st.sampled_from(VALID[3]))
def test_valid_structures_are_regular(mu):
    from prelab.pretop import separation_profile
    prof = separation_profile(induced_pretopology(mu))
    assert prof.T0 and prof.T1 and prof.T2 and prof.regular


def test_pairs_oracle_roundtrip():
    u = cyclic_entourage()
    assert Relation.from_pairs(3, pairs(u)) == u
