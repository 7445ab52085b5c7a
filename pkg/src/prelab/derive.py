"""Named constructions shared by the command line and certificate replay."""
from __future__ import annotations

from typing import Any, Callable

from prelab.io import SCHEMA, FormatError, dump, load
from prelab.metrics import EntourageChain, chain_pseudometric, sandwich_failure
from prelab.preprox import PreProximity, closure_operator, delta_from_preuniformity, mu_delta
from prelab.pretop import PointMap, PreTopology, is_pretopology, separation_profile
from prelab.preunif import (
    PreUniformity, PreUniformityPair, contains, coreflection, induced_pretopology,
    is_preuniformly_continuous, product, sup, universal_preuniformity,
)
from prelab.relcore import Carrier


class StageError(ValueError):
    def __init__(self, stage: str, detail: str):
        super().__init__(f"{stage}: {detail}")
        self.stage = stage


def product_carrier(c1: Carrier, c2: Carrier) -> Carrier:
    return Carrier(tuple(f"({a},{b})" for a in c1.labels for b in c2.labels))


def _expect(obj, cls, construction):
    if not isinstance(obj, cls):
        raise StageError("input", f"{construction} needs a {cls.__name__}, got {type(obj).__name__}")


def _tau(obj, c, args):
    if isinstance(obj, PreUniformity):
        return induced_pretopology(obj), c
    _expect(obj, PreProximity, "tau")
    return closure_operator(obj), c


def _delta(obj, c, args):
    _expect(obj, PreUniformity, "delta")
    return delta_from_preuniformity(obj), c


def _mu_delta(obj, c, args):
    _expect(obj, PreProximity, "mu_delta")
    res = mu_delta(obj)
    if not res.valid:
        raise StageError("mu_delta", "generated family is not a pre-uniformity")
    return res.mu, c


def _coreflection(obj, c, args):
    _expect(obj, PreUniformity, "coreflection")
    return coreflection(obj), c


def _chain(obj, c, args):
    _expect(obj, EntourageChain, "chain-pseudometric")
    return chain_pseudometric(obj), c


def _product(obj, c, args):
    _expect(obj, PreUniformityPair, "product")
    return product(obj.first, obj.second, with_coreflection=False).mu, product_carrier(c, c)


def _sup(obj, c, args):
    _expect(obj, PreUniformityPair, "sup")
    return sup([obj.first, obj.second]), c


def _universal(obj, c, args):
    _expect(obj, PreTopology, "universal")
    res = universal_preuniformity(obj, int(args.get("bound", 4)))
    if res.mu is None:
        raise StageError("universal", "no compatible pre-uniformity within the bound")
    return res.mu, c


def _profile(obj, c, args):
    tau = obj if isinstance(obj, PreTopology) else _tau(obj, c, args)[0]
    return tau, c


CONSTRUCTIONS: dict[str, Callable] = {
    "tau": _tau,
    "delta": _delta,
    "mu_delta": _mu_delta,
    "coreflection": _coreflection,
    "chain-pseudometric": _chain,
    "product": _product,
    "sup": _sup,
    "universal": _universal,
    "separation-profile": _profile,
}


def derive(name: str, obj, carrier: Carrier, args: dict | None = None) -> tuple[Any, Carrier]:
    if name not in CONSTRUCTIONS:
        raise StageError("input", f"unknown construction {name!r}")
    try:
        return CONSTRUCTIONS[name](obj, carrier, args or {})
    except StageError:
        raise
    except ValueError as e:
        raise StageError(name, str(e)) from None


def derive_document(name: str, doc: dict, args: dict | None = None) -> dict:
    obj, c = load(doc)
    out, oc = derive(name, obj, c, args)
    return dump(out, oc)


def profile_expression(tau: PreTopology) -> str:
    prof = separation_profile(tau).as_dict()
    return " & ".join(k if v else f"!{k}" for k, v in prof.items())


# -- certificates -----------------------------------------------------------

def _checks(name: str, src, out) -> dict:
    if name == "tau":
        return {"pretopology": is_pretopology(out.n, out.opens)}
    if name == "delta":
        return {"preproximity": out.is_valid,
                "topology_agrees": closure_operator(out) == induced_pretopology(src)}
    if name == "mu_delta":
        r = mu_delta(src)
        return {"preuniformity": r.valid, "compatible": r.compatible,
                "totally_bounded": r.totally_bounded}
    if name == "coreflection":
        return {"U6": out.report.verdicts["U6"], "contains_source": contains(out, src)}
    if name == "chain-pseudometric":
        return {"sandwich": sandwich_failure(src, out) is None}
    if name == "product":
        return {"projections_continuous": product(src.first, src.second, False).projections_continuous}
    if name == "sup":
        return {"upper_bound": contains(out, src.first) and contains(out, src.second),
                "preuniformity": out.is_valid}
    if name == "universal":
        ident = PointMap.identity(out.n)
        return {"compatible": induced_pretopology(out) == src,
                "self_continuous": is_preuniformly_continuous(ident, out, out)}
    if name == "separation-profile":
        return dict(separation_profile(out).as_dict())
    return {}


def derivation_certificate(name: str, source_doc: dict, args: dict | None = None) -> dict:
    """Derived structure with the construction's own checks, replayable from the source."""
    args = dict(args or {})
    src, c = load(source_doc)
    out, oc = derive(name, src, c, args)
    return {"schema": SCHEMA, "kind": "certificate", "structure": dump(out, oc),
            "derivation": {"construction": name, "source": source_doc, "args": args},
            "trace": _checks(name, src, out)}


def replay_derivation(cert: dict) -> bool:
    d = cert["derivation"]
    if not isinstance(d, dict) or not {"construction", "source"} <= set(d):
        raise FormatError("derivation needs 'construction' and 'source'")
    if "structure" not in cert or "trace" not in cert:
        raise FormatError("certificate is missing its structure or trace")
    try:
        fresh = derivation_certificate(d["construction"], d["source"], d.get("args"))
    except StageError:
        return False
    return fresh["structure"] == cert["structure"] and fresh["trace"] == cert["trace"]
