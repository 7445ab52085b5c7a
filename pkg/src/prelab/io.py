"""JSON interchange format.

Every document is an object with a ``kind`` tag.  Structures carry a
``carrier`` list of point labels; subsets are label lists, relations are
lists of ``[x, y]`` label pairs and rationals are ``"p/q"`` strings.
"""
from __future__ import annotations

import json
import warnings
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from prelab.groups import GroupStructure, GroupTable, NotAGroup
from prelab.metrics import EntourageChain
from prelab.preprox import PreProximity, up_closure
from prelab.pretop import PreTopology
from prelab.preunif import PreUniformity, PreUniformityPair
from prelab.pseudometric import NotAPseudometric, Pseudometric
from prelab.relcore import Carrier, Relation, bits, mask

SCHEMA = 1

STRUCTURE_KINDS = ("pretopology", "preuniformity", "preproximity", "pseudometric", "chain",
                   "group", "pretopgroup", "preuniformity-pair")


class FormatError(ValueError):
    pass


class StructureError(ValueError):
    """The document is well formed but the structure breaks its own axioms."""

    def __init__(self, axiom: str, detail: str):
        super().__init__(f"{axiom} fails: {detail}")
        self.axiom = axiom
        self.detail = detail


class ClosureWarning(UserWarning):
    pass


def default_carrier(n: int) -> Carrier:
    if n <= 26:
        return Carrier(tuple(chr(ord("a") + i) for i in range(n)))
    return Carrier.of_size(n)


# -- literals ---------------------------------------------------------------

def subset_literal(c: Carrier, m: int) -> list[str]:
    return c.names(m)


def relation_literal(c: Carrier, r: Relation) -> list[list[str]]:
    return [[c.labels[x], c.labels[y]] for x, y in sorted(r.pairs())]


def rational_literal(v: Fraction) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def _subset(c: Carrier, lit) -> int:
    if not isinstance(lit, list) or not all(isinstance(s, str) for s in lit):
        raise FormatError(f"subset literal must be a list of labels: {lit!r}")
    try:
        return c.subset(lit)
    except KeyError as e:
        raise FormatError(str(e)) from None


def _relation(c: Carrier, lit) -> Relation:
    if not isinstance(lit, list):
        raise FormatError(f"relation literal must be a list of pairs: {lit!r}")
    pairs = []
    for p in lit:
        if not (isinstance(p, list) and len(p) == 2 and all(isinstance(s, str) for s in p)):
            raise FormatError(f"bad pair in relation literal: {p!r}")
        try:
            pairs.append((c.index(p[0]), c.index(p[1])))
        except KeyError as e:
            raise FormatError(str(e)) from None
    return Relation.from_pairs(c.size, pairs)


def _rational(lit) -> Fraction:
    if isinstance(lit, int) and not isinstance(lit, bool):
        return Fraction(lit)
    if not isinstance(lit, str):
        raise FormatError(f"rational must be a 'p/q' string: {lit!r}")
    try:
        return Fraction(lit)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"bad rational {lit!r}") from None


def _carrier(doc) -> Carrier:
    labels = doc.get("carrier")
    if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
        raise FormatError("'carrier' must be a list of labels")
    try:
        return Carrier(tuple(labels))
    except ValueError as e:
        raise FormatError(str(e)) from None


def _field(doc, name):
    if name not in doc:
        raise FormatError(f"missing field {name!r}")
    return doc[name]


# -- structures -------------------------------------------------------------

def kind_of(obj) -> str:
    for cls, name in ((PreTopology, "pretopology"), (PreUniformity, "preuniformity"),
                      (PreProximity, "preproximity"), (Pseudometric, "pseudometric"),
                      (EntourageChain, "chain"), (GroupTable, "group"),
                      (GroupStructure, "pretopgroup"), (PreUniformityPair, "preuniformity-pair")):
        if isinstance(obj, cls):
            return name
    raise TypeError(f"no interchange kind for {type(obj).__name__}")


def _size_of(obj) -> int:
    if isinstance(obj, GroupStructure):
        return obj.group.n
    return obj.n


def dump(obj, carrier: Optional[Carrier] = None) -> dict:
    """Canonical document for a structure."""
    c = carrier or default_carrier(_size_of(obj))
    if c.size != _size_of(obj):
        raise ValueError("carrier size does not match the structure")
    kind = kind_of(obj)
    doc: dict[str, Any] = {"kind": kind, "carrier": list(c.labels)}
    if kind == "pretopology":
        doc["opens"] = [c.names(u) for u in sorted(obj.opens)]
    elif kind == "preuniformity":
        doc["basis"] = [relation_literal(c, b) for b in obj.basis]
    elif kind == "preuniformity-pair":
        doc["first"] = [relation_literal(c, b) for b in obj.first.basis]
        doc["second"] = [relation_literal(c, b) for b in obj.second.basis]
    elif kind == "preproximity":
        doc["near"] = [[c.names(a), c.names(b)] for a, b in sorted(obj.near)]
    elif kind == "pseudometric":
        doc["d"] = [[rational_literal(v) for v in row] for row in obj.d]
    elif kind == "chain":
        doc["members"] = [relation_literal(c, m) for m in obj.members]
    elif kind == "group":
        doc.update(_group_fields(c, obj))
    elif kind == "pretopgroup":
        doc.update(_group_fields(c, obj.group))
        doc["opens"] = [c.names(u) for u in sorted(obj.tau.opens)]
        doc["base"] = [c.names(u) for u in sorted(obj.base)]
    return doc


def _group_fields(c: Carrier, g: GroupTable) -> dict:
    return {"table": [[c.labels[v] for v in row] for row in g.mul],
            "identity": c.labels[g.e], "name": g.name}


def _group(c: Carrier, doc) -> GroupTable:
    table = _field(doc, "table")
    if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
        raise FormatError("'table' must be a list of rows")
    try:
        mul = tuple(tuple(c.index(v) for v in row) for row in table)
        e = c.index(_field(doc, "identity"))
    except (KeyError, TypeError) as ex:
        raise FormatError(str(ex)) from None
    try:
        return GroupTable(c.size, mul, e, doc.get("name", ""))
    except NotAGroup as ex:
        raise StructureError("group", str(ex)) from None


def _opens(c: Carrier, doc) -> PreTopology:
    lits = _field(doc, "opens")
    if not isinstance(lits, list):
        raise FormatError("'opens' must be a list of subsets")
    return PreTopology(c.size, frozenset(_subset(c, u) for u in lits))


def _basis(c: Carrier, lits) -> PreUniformity:
    if not isinstance(lits, list) or not lits:
        raise FormatError("basis must be a nonempty list of relations")
    return PreUniformity(c.size, tuple(_relation(c, r) for r in lits))


def load(doc) -> tuple[Any, Carrier]:
    """Structure and carrier from a document; raises FormatError on bad input."""
    if not isinstance(doc, dict):
        raise FormatError("document must be a JSON object")
    kind = doc.get("kind")
    if kind not in STRUCTURE_KINDS:
        raise FormatError(f"unknown or missing structure kind {kind!r}")
    c = _carrier(doc)
    if kind == "pretopology":
        return _opens(c, doc), c
    if kind == "preuniformity":
        return _basis(c, _field(doc, "basis")), c
    if kind == "preuniformity-pair":
        return PreUniformityPair(_basis(c, _field(doc, "first")), _basis(c, _field(doc, "second"))), c
    if kind == "preproximity":
        lits = _field(doc, "near")
        if not isinstance(lits, list):
            raise FormatError("'near' must be a list of subset pairs")
        pairs = set()
        for p in lits:
            if not (isinstance(p, list) and len(p) == 2):
                raise FormatError(f"bad near pair {p!r}")
            pairs.add((_subset(c, p[0]), _subset(c, p[1])))
        closed = up_closure(c.size, pairs)
        if closed != pairs:
            warnings.warn(f"closing near pairs added {len(closed - pairs)} pairs", ClosureWarning)
        return PreProximity(c.size, closed), c
    if kind == "pseudometric":
        rows = _field(doc, "d")
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise FormatError("'d' must be a matrix")
        try:
            return Pseudometric(c.size, tuple(tuple(_rational(v) for v in r) for r in rows)), c
        except NotAPseudometric as e:
            raise StructureError("pseudometric", str(e)) from None
    if kind == "chain":
        lits = _field(doc, "members")
        if not isinstance(lits, list):
            raise FormatError("'members' must be a list of relations")
        return EntourageChain(c.size, tuple(_relation(c, r) for r in lits)), c
    if kind == "group":
        return _group(c, doc), c
    g = _group(c, doc)
    base = _field(doc, "base")
    if not isinstance(base, list):
        raise FormatError("'base' must be a list of subsets")
    return GroupStructure(g, _opens(c, doc), tuple(sorted(_subset(c, u) for u in base))), c


# -- files ------------------------------------------------------------------

def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def read_document(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None


def write_document(path, doc):
    Path(path).write_text(dumps(doc), encoding="utf-8")


def points(c: Carrier, m: int) -> list[str]:
    return [c.labels[i] for i in bits(m)]


def subset_from_labels(c: Carrier, labels: Sequence[str]) -> int:
    return mask(c.index(s) for s in labels)
