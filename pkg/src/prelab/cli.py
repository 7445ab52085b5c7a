"""Command line front end.

Exit codes:
  0  the check passed (or a search/derivation finished)
  1  unreadable input, malformed document or bad search spec
  2  the structure fails an axiom, a construction stage fails, or a
     certificate does not replay
"""
from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path
from typing import Optional

from prelab.derive import CONSTRUCTIONS, StageError, derivation_certificate
from prelab.groups import strong_report
from prelab.io import (
    ClosureWarning, FormatError, StructureError, dumps, load, read_document,
    relation_literal, write_document,
)
from prelab.metrics import chain_violation
from prelab.preprox import PP_AXIOMS, check_pp_axioms
from prelab.pretop import PreTopology, is_pretopology, separation_profile
from prelab.preunif import AXIOMS, PreUniformity, check_axioms
from prelab.relcore import Carrier, Relation, bits
from prelab.search import SearchSpec, SpecError, hunt, merge_results, verify_certificate

OK, BAD_INPUT, FAILED = 0, 1, 2


class Output:
    def __init__(self, fmt: str, out: Optional[str]):
        self.fmt = fmt
        self.out = out

    def emit(self, doc: dict, text: str):
        body = dumps(doc) if self.fmt == "json" else text.rstrip("\n") + "\n"
        if self.out:
            Path(self.out).write_text(body, encoding="utf-8")
        else:
            sys.stdout.write(body)


def _fail(msg: str) -> int:
    print(f"prelab: {msg}", file=sys.stderr)
    return BAD_INPUT


# -- witnesses and text -----------------------------------------------------

def _plain(c: Carrier, w):
    if isinstance(w, Relation):
        return relation_literal(c, w)
    if isinstance(w, dict):
        return {str(k): _plain(c, v) for k, v in w.items()}
    if isinstance(w, (list, tuple, frozenset, set)):
        return [_plain(c, v) for v in w]
    return w


def _witness_text(c: Carrier, w) -> str:
    if isinstance(w, Relation):
        return _rel_text(c, w)
    if isinstance(w, (list, tuple)):
        return "(" + ", ".join(_witness_text(c, v) for v in w) + ")"
    return str(w)


def _set_text(c: Carrier, m: int) -> str:
    return "{" + ",".join(c.labels[i] for i in bits(m)) + "}"


def _rel_text(c: Carrier, r: Relation) -> str:
    return "{" + ", ".join(f"({c.labels[x]},{c.labels[y]})" for x, y in sorted(r.pairs())) + "}"


# -- verify -----------------------------------------------------------------

def _verify_preuniformity(mu: PreUniformity, c: Carrier) -> tuple[bool, dict, dict, list[str]]:
    rep = check_axioms(mu.n, mu.basis)
    lines = []
    for a in AXIOMS:
        if not rep.verdicts[a]:
            w = rep.witnesses.get(a)
            if a == "U3":
                comps = w["compositions"]
                full = all(len(x[2]) == mu.n * mu.n for x in comps)
                extra = "every composition of basis members is X x X" if full else \
                    f"no composition lies inside {_rel_text(c, w['entourage'])}"
                lines.append(f"U3 fails (BU2): {extra}")
            else:
                lines.append(f"{a} fails: {_witness_text(c, w)}")
    verdicts = dict(rep.verdicts)
    verdicts.update(rep.classification())
    witnesses = {a: _plain(c, w) for a, w in rep.witnesses.items()}
    return rep.is_preuniformity, verdicts, witnesses, lines


def _verify_pretopology(tau: PreTopology, c: Carrier):
    ok = is_pretopology(tau.n, tau.opens)
    lines, witnesses = [], {}
    if not ok:
        if 0 not in tau.opens or tau.top not in tau.opens:
            witnesses["union"] = "empty set or carrier missing"
        else:
            pair = next((a, b) for a in tau.opens for b in tau.opens if a | b not in tau.opens)
            witnesses["union"] = [c.names(pair[0]), c.names(pair[1])]
        lines.append(f"union closure fails: {witnesses['union']}")
    verdicts = {"pretopology": ok}
    if ok:
        prof = separation_profile(tau)
        verdicts.update(prof.as_dict())
    return ok, verdicts, witnesses, lines


def _verify_preproximity(delta, c: Carrier):
    rep = check_pp_axioms(delta)
    lines = [f"{a} fails: {_plain(c, rep.witnesses.get(a))}" for a in PP_AXIOMS
             if not rep.verdicts[a]]
    verdicts = dict(rep.verdicts)
    verdicts.update(rep.classification())
    return rep.is_preproximity, verdicts, {k: _plain(c, v) for k, v in rep.witnesses.items()}, lines


def _verify_chain(chain, c: Carrier):
    bad = chain_violation(chain)
    if bad is None:
        return True, {"chain": True}, {}, []
    i, reason = bad
    return False, {"chain": False}, {"chain": [i, reason]}, [f"chain fails at member {i}: {reason}"]


def _verify_group(s, c: Carrier):
    try:
        rep = strong_report(s.group, s.tau, s.base)
    except ValueError as e:
        return False, {"base": False}, {"base": str(e)}, [f"base fails: {e}"]
    verdicts = {"pretopological_group": rep.pretopological, "prebase": rep.prebase,
                "symmetric": rep.symmetric, "squares": rep.squares, "strong": rep.strong}
    lines = [] if rep.pretopological else ["pretopological group fails: multiplication or "
                                           "inversion is not pre-continuous"]
    return rep.pretopological, verdicts, {}, lines


def verify_document(doc) -> tuple[int, dict, str]:
    """Exit code, machine report and human report for one document."""
    kind = doc.get("kind") if isinstance(doc, dict) else None
    if kind == "certificate":
        ok = verify_certificate(doc)
        rep = {"kind": "report", "structure_kind": "certificate", "ok": ok}
        return (OK if ok else FAILED), rep, "certificate replays" if ok else "certificate does NOT replay"
    if kind == "search-spec":
        SearchSpec.from_doc(doc)
        return OK, {"kind": "report", "structure_kind": "search-spec", "ok": True}, "search spec ok"
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", ClosureWarning)
            obj, c = load(doc)
    except StructureError as e:
        rep = {"kind": "report", "structure_kind": kind, "ok": False,
               "verdicts": {e.axiom: False}, "witnesses": {e.axiom: e.detail}}
        return FAILED, rep, f"{kind}: {e}"
    notes = [str(w.message) for w in caught]
    handlers = {"preuniformity": _verify_preuniformity, "pretopology": _verify_pretopology,
                "preproximity": _verify_preproximity, "chain": _verify_chain,
                "pretopgroup": _verify_group}
    if kind in handlers:
        ok, verdicts, witnesses, lines = handlers[kind](obj, c)
    elif kind == "preuniformity-pair":
        ok, verdicts, witnesses, lines = True, {}, {}, []
        for side in ("first", "second"):
            s_ok, _, s_w, s_lines = _verify_preuniformity(getattr(obj, side), c)
            ok = ok and s_ok
            verdicts[side] = s_ok
            if s_w:
                witnesses[side] = s_w
            lines += [f"{side}: {x}" for x in s_lines]
    else:
        ok, verdicts, witnesses, lines = True, {kind: True}, {}, []
    rep = {"kind": "report", "structure_kind": kind, "ok": ok, "verdicts": verdicts,
           "witnesses": witnesses}
    if notes:
        rep["notes"] = notes
    head = f"{kind}: {'all axioms pass' if ok else 'axiom failure'}"
    text = "\n".join([head] + [f"  {x}" for x in lines + notes])
    return (OK if ok else FAILED), rep, text


def cmd_verify(args) -> int:
    try:
        doc = read_document(args.file)
        if args.kind and isinstance(doc, dict) and doc.get("kind") != args.kind:
            return _fail(f"{args.file}: expected kind {args.kind!r}, found {doc.get('kind')!r}")
        code, rep, text = verify_document(doc)
    except (FormatError, SpecError) as e:
        return _fail(str(e))
    Output(args.format, args.out).emit(rep, text)
    return code


# -- derive -----------------------------------------------------------------

def cmd_derive(args) -> int:
    extra = {"bound": args.bound} if args.bound is not None else {}
    try:
        doc = read_document(args.file)
        cert = derivation_certificate(args.construction, doc, extra)
    except StageError as e:
        if e.stage == "input":
            return _fail(str(e))
        print(f"prelab: stage {e}", file=sys.stderr)
        return FAILED
    except (FormatError, StructureError) as e:
        return _fail(str(e))
    out = cert["structure"]
    if args.construction == "separation-profile":
        c = load(out)[1]
        out = {"kind": "separation-profile", "carrier": list(c.labels), "profile": cert["trace"]}
    text = "\n".join(f"{k}: {v}" for k, v in cert["trace"].items())
    Output(args.format, args.out).emit(out, f"{dumps(out) if args.format == 'text' else ''}{text}")
    cert_path = args.certificate or (args.out and str(Path(args.out).with_suffix(".cert.json")))
    if cert_path:
        write_document(cert_path, cert)
    return OK


# -- search -----------------------------------------------------------------

def _parse_shard(text: str) -> tuple[int, int]:
    try:
        k, m = (int(p) for p in text.split("/"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"shard must look like k/m, got {text!r}") from None
    if not 1 <= k <= m:
        raise argparse.ArgumentTypeError(f"shard {text} out of range")
    return k, m


def _result_text(doc: dict) -> str:
    if doc["kind"] == "certificate":
        return explain_text(doc)
    if doc["kind"] == "shard":
        k, m = doc["shard"]
        hit = "hit" if doc["hit"] else "no hit"
        return f"shard {k}/{m}: {hit}; counts {doc['counts']}"
    return (f"exhausted: no {doc['structure_kind']} with {doc['property']!r} for "
            f"n in {doc['bounds']['n_min']}..{doc['bounds']['n_max']}; counts {doc['counts']}; "
            f"complete {doc['complete']}")


def cmd_search(args) -> int:
    try:
        if args.merge:
            result = merge_results(read_document(p) for p in args.merge)
        else:
            if not args.spec:
                return _fail("search needs a spec file or --merge")
            sdoc = read_document(args.spec)
            if args.bound is not None and isinstance(sdoc, dict):
                sdoc = dict(sdoc, n_max=args.bound)
            result = hunt(SearchSpec.from_doc(sdoc), args.shard)
    except (FormatError, SpecError, KeyError, TypeError) as e:
        return _fail(str(e))
    Output(args.format, args.out).emit(result, _result_text(result))
    return OK


# -- explain ----------------------------------------------------------------

def _structure_text(doc: dict) -> list[str]:
    obj, c = load(doc)
    kind = doc["kind"]
    if kind == "preuniformity":
        return ["basis:"] + [f"  {_rel_text(c, b)}" for b in obj.basis]
    if kind == "preuniformity-pair":
        return (["first basis:"] + [f"  {_rel_text(c, b)}" for b in obj.first.basis]
                + ["second basis:"] + [f"  {_rel_text(c, b)}" for b in obj.second.basis])
    if kind == "pretopology":
        return ["opens: " + ", ".join(_set_text(c, u) for u in obj.sorted_opens())]
    if kind == "preproximity":
        far = [(a, b) for a, b in obj.far_pairs() if a and b and a < b]
        return ["far pairs: " + (", ".join(f"{_set_text(c, a)}|{_set_text(c, b)}" for a, b in far)
                                 or "none")]
    if kind == "pretopgroup":
        return [f"group: {obj.group.name or 'table'} of order {obj.group.n}",
                "opens: " + ", ".join(_set_text(c, u) for u in obj.tau.sorted_opens()),
                "base at identity: " + ", ".join(_set_text(c, u) for u in obj.base)]
    return [dumps(doc).rstrip()]


def explain_text(cert: dict) -> str:
    lines = []
    if "derivation" in cert:
        lines.append(f"derived by {cert['derivation']['construction']}")
    else:
        pos = cert.get("position")
        where = f" at n={pos['n']}, index {pos['index']}" if pos else ""
        lines.append(f"{cert['structure_kind']} {cert['canonical_id']}{where}")
        lines.append(f"property: {cert['property']} -> {cert['holds']}")
    lines += [f"  {k}: {v}" for k, v in cert["trace"].items()]
    lines += _structure_text(cert["structure"])
    return "\n".join(lines)


def cmd_explain(args) -> int:
    try:
        doc = read_document(args.file)
        if not isinstance(doc, dict) or doc.get("kind") not in ("certificate", "exhausted", "shard"):
            return _fail(f"{args.file}: not a certificate or search record")
        if doc["kind"] != "certificate":
            Output(args.format, args.out).emit(doc, _result_text(doc))
            return OK
        ok = verify_certificate(doc)
        text = explain_text(doc) + f"\nreplay: {'ok' if ok else 'MISMATCH'}"
    except (FormatError, KeyError, TypeError) as e:
        return _fail(f"malformed certificate: {e}")
    Output(args.format, args.out).emit(dict(doc, replay=ok), text)
    return OK if ok else FAILED


# -- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="prelab", description="Finite pre-structure laboratory.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the result here instead of stdout")
        sp.add_argument("--format", choices=("json", "text"), default="json")

    v = sub.add_parser("verify", help="check a structure, spec or certificate")
    v.add_argument("file")
    v.add_argument("--kind", help="require this document kind")
    common(v)
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("derive", help="apply a named construction")
    d.add_argument("file")
    d.add_argument("construction", choices=sorted(CONSTRUCTIONS))
    d.add_argument("--bound", type=int, help="basis size bound for 'universal'")
    d.add_argument("--certificate", help="where to write the derivation certificate")
    common(d)
    d.set_defaults(func=cmd_derive)

    s = sub.add_parser("search", help="hunt for a structure with a property")
    s.add_argument("spec", nargs="?")
    s.add_argument("--shard", type=_parse_shard, default=(1, 1), metavar="K/M")
    s.add_argument("--merge", nargs="+", metavar="SHARD", help="merge shard records")
    s.add_argument("--bound", type=int, help="override the spec's largest carrier size")
    common(s)
    s.set_defaults(func=cmd_search)

    e = sub.add_parser("explain", help="pretty-print and replay a certificate")
    e.add_argument("file")
    common(e)
    e.set_defaults(func=cmd_explain, format="text")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
