"""Named boolean checks over each searchable structure kind.

Theorem-shaped atoms are written as implications over the class they are
claimed for, so they are vacuously true outside it and a hit on their
negation is a counterexample.
"""
from __future__ import annotations

from functools import cached_property, lru_cache
from typing import Callable

from prelab.groups import (
    GroupStructure, group_pipeline, strong_report, translations_are_homeomorphisms,
)
from prelab.metrics import (
    function_preuniformity, separating_function, separation_holds, unit_ball_pseudometric,
)
from prelab.preprox import (
    PreProximity, _topology_total, closure_conditions, closure_map, closure_operator,
    delta_from_ll, delta_from_preuniformity, far_neighbourhood, far_pair_criterion,
    finest_compatible, mu_delta, nbhd_relation, psi_check, relative_topology, subspace,
    sup_preproximities, totally_bounded_reflection,
)
from prelab.pretop import PointMap, PreTopology, interior, is_precontinuous, separation_profile
from prelab.preunif import (
    PreUniformity, PreUniformityPair, contains, coreflection, entourage_prebases,
    induced_pretopology, is_neighborhood_prebase, is_preuniformly_continuous,
    labelled_preuniformities, neighborhood_prebase, square_cover, sup, t0_criterion,
)
from prelab.relcore import all_subsets, diagonal, full, full_relation

SEPARATION = ("T0", "T1", "T2", "regular", "completely_regular", "normal")


def _meet(mu: PreUniformity):
    m = full_relation(mu.n)
    for b in mu.basis:
        m = m & b
    return m


@lru_cache(maxsize=None)
def valid_preuniformities(n: int) -> tuple[PreUniformity, ...]:
    return tuple(labelled_preuniformities(n))


@lru_cache(maxsize=8192)
def _delta_of(mu: PreUniformity) -> PreProximity:
    return delta_from_preuniformity(mu)


@lru_cache(maxsize=8192)
def _mu_w(mu: PreUniformity) -> PreUniformity:
    return totally_bounded_reflection(mu).mu_w


@lru_cache(maxsize=1024)
def _sup_delta(deltas: tuple) -> PreProximity:
    return sup_preproximities(deltas)


# -- pre-uniformities -------------------------------------------------------

class UniformityView:
    def __init__(self, mu: PreUniformity):
        self.mu = mu

    @cached_property
    def report(self):
        return self.mu.report

    @cached_property
    def valid(self) -> bool:
        return self.report.is_preuniformity

    @cached_property
    def strong(self) -> bool:
        return self.report.strong

    @cached_property
    def tau(self) -> PreTopology:
        return induced_pretopology(self.mu)

    @cached_property
    def profile(self):
        return separation_profile(self.tau)

    @cached_property
    def delta(self) -> PreProximity:
        return _delta_of(self.mu)


def _u_regular(v):
    return not v.valid or (v.profile.T2 and v.profile.regular)


def _u_t0(v):
    a, b = t0_criterion(v.mu)
    return a == b


def _u_prebases(v):
    if not v.valid:
        return True
    e = entourage_prebases(v.mu)
    return e.closed_is_prebase and e.open_is_prebase


def _u_nbhd(v):
    return not v.valid or all(is_neighborhood_prebase(v.tau, x, neighborhood_prebase(v.mu, x))
                              for x in range(v.mu.n))


def _u_unit_ball(v):
    return not v.strong or all(unit_ball_pseudometric(v.mu, b).inside for b in v.mu.basis)


def _u_separating(v):
    if not v.strong:
        return True
    for f in v.tau.closed_sets():
        for x in range(v.mu.n):
            if not f >> x & 1 and not separation_holds(v.mu, x, f, separating_function(v.mu, x, f)):
                return False
    return True


def _u_delta(v):
    if not v.valid:
        return True
    return v.delta.is_valid and closure_operator(v.delta) == v.tau


def _u_mu_delta(v):
    if not v.valid:
        return True
    r = mu_delta(v.delta, [v.mu])
    return r.valid and r.compatible and r.totally_bounded and bool(r.coarsest)


def _u_coreflection(v):
    if not v.valid:
        return True
    star = coreflection(v.mu)
    d = diagonal(v.mu.n)
    same = (_meet(v.mu) == d) == (_meet(star) == d)
    regular = not v.profile.T0 or separation_profile(induced_pretopology(star)).completely_regular
    return same and regular


def _u_square(v):
    return not v.strong or all(square_cover(v.mu, b) is not None for b in v.mu.basis)


def _u_round_trip(v):
    if not v.strong:
        return True
    g = function_preuniformity(v.tau)
    return bool(g.induces_target) and g.mu.report.strong


def _u_tb(v):
    return v.valid and totally_bounded_reflection(v.mu).equal


def _u_axiom(name):
    return lambda v: v.report.verdicts[name]


def _u_class(name):
    return lambda v: v.report.classification()[name]


def _sep(name):
    return lambda v: getattr(v.profile, name)


PREUNIFORMITY_ATOMS: dict[str, Callable] = {
    **{k: _u_class(k) for k in ("preuniformity", "symmetric", "strong", "almost_uniform",
                                "uniform")},
    **{k: _u_axiom(k) for k in ("U1", "U2", "U3", "U4", "U5", "U6")},
    "U2_prime": _u_axiom("U2'"),
    "U3_prime": _u_axiom("U3'"),
    **{k: _sep(k) for k in SEPARATION},
    "discrete": lambda v: v.tau == PreTopology.discrete(v.mu.n),
    "tb_reflection_equal": _u_tb,
    "regular_topology": _u_regular,
    "t0_iff_diagonal_meet": _u_t0,
    "entourage_prebases": _u_prebases,
    "neighbourhood_prebase": _u_nbhd,
    "completely_regular_topology": lambda v: not v.strong or v.profile.completely_regular,
    "unit_ball_certificate": _u_unit_ball,
    "separating_functions": _u_separating,
    "delta_mu_compatible": _u_delta,
    "mu_delta_coarsest": _u_mu_delta,
    "coreflection_separation": _u_coreflection,
    "square_cover_exists": _u_square,
    "function_round_trip": _u_round_trip,
}


# -- pairs of pre-uniformities ----------------------------------------------

class PairView:
    def __init__(self, pair: PreUniformityPair):
        self.pair = pair
        self.first = UniformityView(pair.first)
        self.second = UniformityView(pair.second)


def _p_monotone(p):
    if not contains(p.pair.second, p.pair.first):
        return True
    return p.first.tau <= p.second.tau and p.second.delta <= p.first.delta


def _p_sup_delta(p):
    return _sup_delta((p.first.delta, p.second.delta)) == \
        _delta_of(sup([p.pair.first, p.pair.second]))


def _p_compact(p):
    n = p.pair.n
    ident = PointMap.identity(n)
    star = separation_profile(induced_pretopology(coreflection(p.pair.first)))
    if not (star.T2 and is_precontinuous(ident, p.first.tau, p.second.tau)):
        return True
    return is_preuniformly_continuous(ident, p.pair.first, p.pair.second)


PAIR_ATOMS: dict[str, Callable] = {
    "pp_equivalent": lambda p: p.first.delta == p.second.delta,
    "mu_w_equal": lambda p: _mu_w(p.pair.first) == _mu_w(p.pair.second),
    "same_topology": lambda p: p.first.tau == p.second.tau,
    "first_finer": lambda p: contains(p.pair.first, p.pair.second),
    "equal": lambda p: p.pair.first == p.pair.second,
    "monotone_induced": _p_monotone,
    "sup_delta_matches": _p_sup_delta,
    "compact_hausdorff_continuity": _p_compact,
}


# -- pre-topologies ---------------------------------------------------------

class TopologyView:
    def __init__(self, tau: PreTopology):
        self.tau = tau

    @cached_property
    def profile(self):
        return separation_profile(self.tau)


def _t_round_trip(v):
    if not v.profile.completely_regular:
        return True
    g = function_preuniformity(v.tau)
    return bool(g.induces_target) and g.mu.report.strong


def _t_duality(v):
    top = full(v.tau.n)
    return all(interior(v.tau, b) == top & ~v.tau.closure(top & ~b) for b in all_subsets(v.tau.n))


def _t_finest(v):
    if not (v.profile.T2 and v.profile.normal):
        return True
    d = finest_compatible(v.tau)
    return d.is_valid and closure_operator(d) == v.tau


def _t_compatible_exists(v):
    return any(induced_pretopology(m) == v.tau for m in valid_preuniformities(v.tau.n))


TOPOLOGY_ATOMS: dict[str, Callable] = {
    **{k: (lambda name: lambda v: getattr(v.profile, name))(k) for k in SEPARATION},
    "discrete": lambda v: v.tau == PreTopology.discrete(v.tau.n),
    "indiscrete": lambda v: v.tau == PreTopology.indiscrete(v.tau.n),
    "topology": lambda v: all((a & b) in v.tau.opens for a in v.tau.opens for b in v.tau.opens),
    "function_round_trip": _t_round_trip,
    "closure_duality": _t_duality,
    "finest_compatible_ok": _t_finest,
    "compatible_exists": _t_compatible_exists,
}


# -- pre-proximities --------------------------------------------------------

class ProximityView:
    def __init__(self, delta: PreProximity):
        self.delta = delta

    @cached_property
    def tau(self) -> PreTopology:
        return closure_operator(self.delta)

    @cached_property
    def pairs(self):
        n = self.delta.n
        return [(a, b) for a in all_subsets(n) for b in all_subsets(n)]

    @cached_property
    def mu(self):
        return mu_delta(self.delta)


def _d_far_nbhd(v):
    c = closure_map(v.delta)
    n = v.delta.n
    return all(far_neighbourhood(v.delta, x, a) is not None
               for a in all_subsets(n) for x in range(n) if not c[a] >> x & 1)


def _d_round_trip(v):
    ll = nbhd_relation(v.delta)
    return all(w is None for w in psi_check(ll).values()) and delta_from_ll(ll) == v.delta


def _d_closure_symmetry(v):
    c = closure_map(v.delta)
    return all(v.delta.is_near(c[a], c[b]) == v.delta.is_near(a, b) for a, b in v.pairs)


def _d_subspace(v):
    n = v.delta.n
    for e in range(1, 1 << n):
        sub = subspace(v.delta, e)
        if not sub.is_valid or _topology_total(sub) != relative_topology(v.tau, e):
            return False
    return True


def _d_unique(v):
    return all(m == v.mu.mu for m in valid_preuniformities(v.delta.n)
               if delta_from_preuniformity(m) == v.delta)


def _d_mu_delta(v):
    return v.mu.valid and v.mu.compatible


PROXIMITY_ATOMS: dict[str, Callable] = {
    "preproximity": lambda v: v.delta.is_valid,
    "proximity": lambda v: v.delta.report.is_proximity,
    "discrete": lambda v: v.delta == PreProximity.discrete(v.delta.n),
    **{k: (lambda name: lambda v: getattr(separation_profile(v.tau), name))(k)
       for k in SEPARATION},
    "closure_conditions": lambda v: all(w is None for w in closure_conditions(v.delta).values()),
    "far_neighbourhood": _d_far_nbhd,
    "nbhd_round_trip": _d_round_trip,
    "far_pair_sound": lambda v: all(v.delta.is_near(a, b) for a, b in v.pairs
                                    if far_pair_criterion(v.delta, a, b)),
    "far_pair_complete": lambda v: all(far_pair_criterion(v.delta, a, b) for a, b in v.pairs
                                       if v.delta.is_near(a, b)),
    "closure_symmetry": _d_closure_symmetry,
    "subspace_identity": _d_subspace,
    "mu_delta_compatible": _d_mu_delta,
    "sup_idempotent": lambda v: sup_preproximities([v.delta]) == v.delta,
    "mu_delta_unique": _d_unique,
}


# -- pre-topological groups -------------------------------------------------

class GroupView:
    def __init__(self, s: GroupStructure):
        self.s = s

    @cached_property
    def report(self):
        return strong_report(self.s.group, self.s.tau, self.s.base)

    @cached_property
    def profile(self):
        return separation_profile(self.s.tau)

    @cached_property
    def pipeline(self):
        return group_pipeline(self.s.group, self.s.tau, self.s.base)


def _g_pipeline(v):
    if not v.report.strong:
        return True
    p = v.pipeline
    return (p.uc.ok and p.induces_tau and p.mu.report.strong and p.completely_regular)


GROUP_ATOMS: dict[str, Callable] = {
    "pretopological_group": lambda v: v.report.pretopological,
    "strongly_pretopological": lambda v: v.report.strong,
    "symmetric_base": lambda v: v.report.symmetric,
    "square_base": lambda v: v.report.squares,
    "prebase": lambda v: v.report.prebase,
    **{k: (lambda name: lambda v: getattr(v.profile, name))(k) for k in SEPARATION},
    "uc_ok": lambda v: v.pipeline.uc.ok,
    "induces_tau": lambda v: v.pipeline.induces_tau,
    "group_pipeline_ok": _g_pipeline,
    "translations_homeomorphic": lambda v: (not v.report.pretopological
                                            or translations_are_homeomorphisms(v.s.group, v.s.tau)),
}


REGISTRY: dict[str, tuple[Callable, dict]] = {
    "preuniformity": (UniformityView, PREUNIFORMITY_ATOMS),
    "prefamily": (UniformityView, PREUNIFORMITY_ATOMS),
    "preuniformity-pair": (PairView, PAIR_ATOMS),
    "pretopology": (TopologyView, TOPOLOGY_ATOMS),
    "preproximity": (ProximityView, PROXIMITY_ATOMS),
    "pretopgroup": (GroupView, GROUP_ATOMS),
}


def atom_names(kind: str) -> list[str]:
    return sorted(REGISTRY[kind][1])
