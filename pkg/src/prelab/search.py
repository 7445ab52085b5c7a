"""Canonical enumeration of small structures and a property-driven hunter.

Structures of each size are listed once per isomorphism class, as the
relabelling with the least key, sorted by that key.  ``hunt`` walks sizes in
increasing order and returns the first structure whose property holds, or an
exhaustion record with the exact bounds searched.  Work splits into shards
by contiguous index ranges of each size; merging shard results reproduces the
unsharded output byte for byte.
"""
from __future__ import annotations

import hashlib
import json
import os
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Optional

from prelab.derive import replay_derivation
from prelab.groups import (
    GroupStructure, automorphisms, candidate_bases, is_pretopological_group, small_groups,
)
from prelab.io import SCHEMA, FormatError, dump, load
from prelab.preprox import labelled_preproximities
from prelab.pretop import labelled_pretopologies
from prelab.preunif import LabelledSearch, PreUniformityPair, labelled_preuniformities
from prelab.properties import REGISTRY
from prelab.relcore import all_permutations

KINDS = tuple(REGISTRY)
ALIASES = {"preuniformity-basis": "preuniformity"}
CEILINGS = {"pretopology": 4, "preuniformity": 4, "prefamily": 4, "preproximity": 3,
            "pretopgroup": 4, "preuniformity-pair": 3}
HARD_CEILING = 5
DEFAULT_LARGE_BASIS = 3


class SpecError(ValueError):
    pass


class UnknownProperty(SpecError):
    pass


class CeilingExceeded(SpecError):
    pass


# -- property expressions ---------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<atom>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[()!&|¬∧∨]))")
_WORDS = {"not": "!", "and": "&", "or": "|"}
_SYMBOLS = {"¬": "!", "∧": "&", "∨": "|"}


def _tokens(text: str) -> list[tuple[str, str]]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SpecError(f"unexpected character {text[pos:].strip()[:1]!r} in property")
        pos = m.end()
        if m.group("atom"):
            word = m.group("atom")
            out.append(("op", _WORDS[word]) if word in _WORDS else ("atom", word))
        else:
            op = m.group("op")
            out.append(("op", _SYMBOLS.get(op, op)))
    return out


def parse_property(text: str):
    """Expression tree of tuples; ``!`` binds tighter than ``&``, which binds tighter than ``|``."""
    toks = _tokens(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take(op):
        nonlocal pos
        if peek() == ("op", op):
            pos += 1
            return True
        return False

    def unary():
        nonlocal pos
        if take("!"):
            return ("not", unary())
        if take("("):
            e = disjunction()
            if not take(")"):
                raise SpecError("unbalanced parentheses in property")
            return e
        kind, val = peek()
        if kind != "atom":
            raise SpecError(f"expected a property name, got {val!r}")
        pos += 1
        return ("atom", val)

    def conjunction():
        parts = [unary()]
        while take("&"):
            parts.append(unary())
        return parts[0] if len(parts) == 1 else ("and", tuple(parts))

    def disjunction():
        parts = [conjunction()]
        while take("|"):
            parts.append(conjunction())
        return parts[0] if len(parts) == 1 else ("or", tuple(parts))

    if not toks:
        raise SpecError("empty property")
    tree = disjunction()
    if pos != len(toks):
        raise SpecError(f"trailing input in property at {peek()[1]!r}")
    return tree


def atoms_of(tree) -> list[str]:
    out: list[str] = []

    def walk(t):
        if t[0] == "atom":
            if t[1] not in out:
                out.append(t[1])
        elif t[0] == "not":
            walk(t[1])
        else:
            for s in t[1]:
                walk(s)
    walk(tree)
    return out


def evaluate(tree, value) -> bool:
    """``value(name)`` supplies atom verdicts; evaluation short-circuits."""
    tag = tree[0]
    if tag == "atom":
        return value(tree[1])
    if tag == "not":
        return not evaluate(tree[1], value)
    if tag == "and":
        return all(evaluate(t, value) for t in tree[1])
    return any(evaluate(t, value) for t in tree[1])


class Evaluation:
    """Lazily evaluated atoms of one structure, memoised."""

    def __init__(self, kind: str, obj):
        view_cls, self.atoms = REGISTRY[kind]
        self.view = view_cls(obj)
        self.values: dict[str, bool] = {}

    def __call__(self, name: str) -> bool:
        if name not in self.values:
            self.values[name] = bool(self.atoms[name](self.view))
        return self.values[name]


# -- specs ------------------------------------------------------------------

@dataclass(frozen=True)
class SearchSpec:
    kind: str
    n_max: int
    prop: str
    basis_max: Optional[int] = None
    n_min: int = 1

    def __post_init__(self):
        kind = ALIASES.get(self.kind, self.kind)
        object.__setattr__(self, "kind", kind)
        if kind not in REGISTRY:
            raise SpecError(f"unknown structure kind {self.kind!r}")
        for name in ("n_max", "n_min"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise SpecError(f"{name} must be an integer >= 1")
        if self.basis_max is not None and (not isinstance(self.basis_max, int) or self.basis_max < 1):
            raise SpecError("basis_max must be an integer >= 1")
        if self.n_min > self.n_max:
            raise SpecError("n_min exceeds n_max")
        unknown = [a for a in atoms_of(self.tree) if a not in REGISTRY[kind][1]]
        if unknown:
            raise UnknownProperty(f"no checker named {unknown[0]!r} for {kind}")
        ceiling = ceiling_for(kind)
        if self.n_max > ceiling:
            raise CeilingExceeded(f"n={self.n_max} exceeds the {kind} ceiling {ceiling}")

    @property
    def tree(self):
        return parse_property(self.prop)

    def to_doc(self) -> dict:
        return {"kind": "search-spec", "schema": SCHEMA, "structure": self.kind,
                "n_min": self.n_min, "n_max": self.n_max, "basis_max": self.basis_max,
                "property": self.prop}

    @classmethod
    def from_doc(cls, doc) -> "SearchSpec":
        if not isinstance(doc, dict) or doc.get("kind") != "search-spec":
            raise SpecError("not a search-spec document")
        for f in ("structure", "n_max", "property"):
            if f not in doc:
                raise SpecError(f"search spec is missing {f!r}")
        if not isinstance(doc["property"], str):
            raise SpecError("property must be a string")
        return cls(doc["structure"], doc["n_max"], doc["property"],
                   doc.get("basis_max"), doc.get("n_min", 1))


def ceiling_for(kind: str) -> int:
    env = os.environ.get("PRETOP_CEILING")
    if env:
        try:
            return min(int(env), HARD_CEILING)
        except ValueError:
            raise SpecError("PRETOP_CEILING must be an integer") from None
    return CEILINGS[kind]


def effective_basis_max(spec: SearchSpec, n: int) -> Optional[int]:
    if spec.kind not in ("preuniformity", "prefamily", "preuniformity-pair"):
        return None
    if spec.basis_max is not None:
        return spec.basis_max
    return DEFAULT_LARGE_BASIS if n >= 4 else None


# -- canonical forms --------------------------------------------------------

def _perms(kind: str, obj):
    if kind == "pretopgroup":
        return automorphisms(obj.group)
    return all_permutations(obj.n)


def canonical_form(kind: str, obj):
    """The relabelling with the least key, and that key."""
    best = None
    for p in _perms(kind, obj):
        q = obj.permuted(p)
        k = q.key()
        if best is None or k < best[0]:
            best = (k, q)
    return best[1], best[0]


def _plain(x):
    if isinstance(x, (tuple, list, frozenset)):
        return [_plain(v) for v in x]
    return x


def canonical_id(kind: str, key) -> str:
    text = json.dumps([kind, _plain(key)], separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _labelled(kind: str, n: int, basis_max: Optional[int]):
    status = LabelledSearch()
    if kind == "pretopology":
        return labelled_pretopologies(n), status
    if kind in ("preuniformity", "prefamily"):
        fams = list(labelled_preuniformities(n, basis_max, require_u5=kind == "preuniformity",
                                             status=status))
        return fams, status
    if kind == "preproximity":
        return list(labelled_preproximities(n)), status
    raise ValueError(kind)


def _dedupe(kind, items):
    reps = {}
    for obj in items:
        rep, key = canonical_form(kind, obj)
        reps.setdefault(key, rep)
    return [reps[k] for k in sorted(reps)]


def _pairs(n: int, basis_max: Optional[int], status: LabelledSearch):
    mus = list(labelled_preuniformities(n, basis_max, status=status))
    firsts = _dedupe("preuniformity", mus)
    perms = all_permutations(n)
    reps = {}
    for mu in firsts:
        stab = [p for p in perms if mu.permuted(p) == mu]
        for nu in mus:
            second = min((nu.permuted(p) for p in stab), key=lambda r: r.key())
            pair = PreUniformityPair(mu, second)
            reps.setdefault(pair.key(), pair)
    return [reps[k] for k in sorted(reps)]


def _groups(n: int):
    out = []
    for g in small_groups(n):
        if g.n != n:
            continue
        for tau in labelled_pretopologies(n):
            if not is_pretopological_group(g, tau):
                continue
            for base in candidate_bases(g, tau):
                out.append(GroupStructure(g, tau, tuple(sorted(base))))
    return out


@lru_cache(maxsize=None)
def _enumerate(kind: str, n: int, basis_max: Optional[int]) -> tuple[tuple, bool]:
    if kind == "preuniformity-pair":
        status = LabelledSearch()
        return tuple(_pairs(n, basis_max, status)), not status.truncated
    if kind == "pretopgroup":
        return tuple(_dedupe(kind, _groups(n))), True
    items, status = _labelled(kind, n, basis_max)
    return tuple(_dedupe(kind, items)), not status.truncated


def enumerate_structures(kind: str, n: int, basis_max: Optional[int] = None,
                         check_ceiling: bool = True) -> tuple:
    """Canonical representatives of size ``n``, in key order."""
    kind = ALIASES.get(kind, kind)
    if kind not in REGISTRY:
        raise SpecError(f"unknown structure kind {kind!r}")
    if check_ceiling and n > ceiling_for(kind):
        raise CeilingExceeded(f"n={n} exceeds the {kind} ceiling {ceiling_for(kind)}")
    return _enumerate(kind, n, basis_max)[0]


def enumeration_complete(kind: str, n: int, basis_max: Optional[int] = None) -> bool:
    kind = ALIASES.get(kind, kind)
    return _enumerate(kind, n, basis_max)[1]


# -- certificates -----------------------------------------------------------

def make_certificate(spec: SearchSpec, obj, position: Optional[tuple[int, int]] = None) -> dict:
    rep, key = canonical_form(spec.kind, obj)
    ev = Evaluation(spec.kind, rep)
    tree = spec.tree
    trace = {a: ev(a) for a in atoms_of(tree)}
    doc: dict[str, Any] = {
        "schema": SCHEMA, "kind": "certificate", "structure_kind": spec.kind,
        "structure": dump(rep), "property": spec.prop, "trace": trace,
        "holds": evaluate(tree, ev), "canonical_id": canonical_id(spec.kind, key),
    }
    if position is not None:
        doc["position"] = {"n": position[0], "index": position[1]}
    return doc


def _load_structure(kind: str, doc):
    obj, _ = load(doc)
    expected = {"prefamily": "preuniformity"}.get(kind, kind)
    if dump(obj)["kind"] != expected:
        raise FormatError(f"certificate structure is not a {expected}")
    return obj


def verify_certificate(cert) -> bool:
    """Re-evaluate a certificate from its own content.

    Malformed documents raise FormatError; a well-formed certificate whose
    recorded verdicts do not replay gives False.
    """
    if not isinstance(cert, dict) or cert.get("kind") != "certificate":
        raise FormatError("not a certificate document")
    if cert.get("schema") != SCHEMA:
        raise FormatError(f"unsupported certificate schema {cert.get('schema')!r}")
    if "derivation" in cert:
        return replay_derivation(cert)
    for f in ("structure_kind", "structure", "property", "trace", "holds", "canonical_id"):
        if f not in cert:
            raise FormatError(f"certificate is missing {f!r}")
    kind = cert["structure_kind"]
    if kind not in REGISTRY:
        raise FormatError(f"unknown structure kind {kind!r}")
    trace = cert["trace"]
    if not isinstance(trace, dict) or not all(isinstance(v, bool) for v in trace.values()):
        raise FormatError("trace must map property names to booleans")
    try:
        tree = parse_property(cert["property"])
    except SpecError as e:
        raise FormatError(str(e)) from None
    atoms = atoms_of(tree)
    if set(atoms) - set(REGISTRY[kind][1]):
        raise FormatError("certificate names an unknown property")
    obj = _load_structure(kind, cert["structure"])
    rep, key = canonical_form(kind, obj)
    if rep.key() != obj.key() or canonical_id(kind, key) != cert["canonical_id"]:
        return False
    ev = Evaluation(kind, obj)
    if set(trace) != set(atoms) or any(ev(a) != trace[a] for a in atoms):
        return False
    return evaluate(tree, ev) == cert["holds"]


# -- hunting ----------------------------------------------------------------

def _bounds(spec: SearchSpec) -> dict:
    return {"n_min": spec.n_min, "n_max": spec.n_max,
            "basis_max": {str(n): effective_basis_max(spec, n)
                          for n in range(spec.n_min, spec.n_max + 1)}}


def exhausted_doc(spec: SearchSpec, counts: dict, complete: bool) -> dict:
    return {"schema": SCHEMA, "kind": "exhausted", "structure_kind": spec.kind,
            "property": spec.prop, "bounds": _bounds(spec),
            "counts": {str(n): counts[n] for n in sorted(counts)}, "complete": complete}


def _slice(total: int, shard: tuple[int, int]) -> range:
    k, m = shard
    return range((k - 1) * total // m, k * total // m)


def _check_shard(shard):
    k, m = shard
    if not (isinstance(k, int) and isinstance(m, int) and 1 <= k <= m):
        raise SpecError(f"bad shard {k}/{m}")


def _run(spec: SearchSpec, shard: tuple[int, int]):
    tree = spec.tree
    counts, complete = {}, True
    for n in range(spec.n_min, spec.n_max + 1):
        bm = effective_basis_max(spec, n)
        items = enumerate_structures(spec.kind, n, bm)
        complete = complete and enumeration_complete(spec.kind, n, bm)
        counts[n] = 0
        for i in _slice(len(items), shard):
            counts[n] += 1
            if evaluate(tree, Evaluation(spec.kind, items[i])):
                return make_certificate(spec, items[i], (n, i)), counts, complete
    return None, counts, complete


def hunt(spec: SearchSpec, shard: tuple[int, int] = (1, 1)) -> dict:
    """First certificate in canonical order, or an exhaustion record.

    With ``shard=(k, m)`` only the k-th of m contiguous slices of each size
    is searched and a shard record is returned for :func:`merge_results`.
    """
    _check_shard(shard)
    hit, counts, complete = _run(spec, shard)
    if shard == (1, 1):
        return hit if hit is not None else exhausted_doc(spec, counts, complete)
    return {"schema": SCHEMA, "kind": "shard", "shard": list(shard), "spec": spec.to_doc(),
            "hit": hit, "counts": {str(n): c for n, c in counts.items()}, "complete": complete}


def merge_results(docs) -> dict:
    """Combine the shard records of one spec into the unsharded result."""
    docs = list(docs)
    if not docs:
        raise SpecError("nothing to merge")
    for d in docs:
        if not isinstance(d, dict) or d.get("kind") != "shard":
            raise SpecError("merge expects shard records")
    spec = SearchSpec.from_doc(docs[0]["spec"])
    m = docs[0]["shard"][1]
    if any(d["spec"] != docs[0]["spec"] for d in docs):
        raise SpecError("shard records come from different specs")
    if sorted(d["shard"][0] for d in docs) != list(range(1, m + 1)) or \
            any(d["shard"][1] != m for d in docs):
        raise SpecError(f"need exactly shards 1..{m} of {m}")
    hits = [d["hit"] for d in docs if d["hit"] is not None]
    if hits:
        return min(hits, key=lambda h: (h["position"]["n"], h["position"]["index"]))
    counts: dict[int, int] = {}
    for d in docs:
        for n, c in d["counts"].items():
            counts[int(n)] = counts.get(int(n), 0) + c
    return exhausted_doc(spec, counts, all(d["complete"] for d in docs))
