import json
import random
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import random_chain_members
from prelab.catalog import ABC, three_point_family
from prelab.groups import GroupStructure, cyclic
from prelab.io import (
    ClosureWarning, FormatError, StructureError, dump, dumps, load, rational_literal,
    read_document, write_document,
)
from prelab.metrics import EntourageChain
from prelab.pretop import PreTopology, labelled_pretopologies
from prelab.preprox import PreProximity, labelled_preproximities
from prelab.preunif import PreUniformity, PreUniformityPair, labelled_preuniformities
from prelab.pseudometric import Pseudometric

TAUS = labelled_pretopologies(3)
MUS = list(labelled_preuniformities(3))
DELTAS = list(labelled_preproximities(3))


def roundtrip(obj, carrier=None):
    doc = dump(obj, carrier)
    text = dumps(doc)
    back, c = load(json.loads(text))
    assert back == obj
    assert dumps(dump(back, c)) == text
    return doc


@given(st.sampled_from(TAUS))
def test_pretopology_roundtrip(tau):
    roundtrip(tau, ABC)


@given(st.sampled_from(MUS))
def test_preuniformity_roundtrip(mu):
    roundtrip(mu)


@given(st.sampled_from(MUS), st.sampled_from(MUS))
def test_pair_roundtrip(a, b):
    roundtrip(PreUniformityPair(a, b))


@given(st.sampled_from(DELTAS))
def test_preproximity_roundtrip(d):
    roundtrip(d)


@given(st.lists(st.fractions(min_value=0, max_value=5, max_denominator=9), min_size=1, max_size=5))
def test_pseudometric_roundtrip(vals):
    doc = roundtrip(Pseudometric.from_function(vals))
    assert all(isinstance(v, str) for row in doc["d"] for v in row)


@given(st.integers(0, 10 ** 6))
def test_chain_roundtrip(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    roundtrip(EntourageChain(n, random_chain_members(n, rng, 3)))


def test_group_structure_roundtrip():
    taus = PreTopology.discrete(3)
    roundtrip(GroupStructure(cyclic(3), taus, (0b001,)))
    roundtrip(cyclic(4))


def test_three_point_family_literal():
    doc = dump(three_point_family(), ABC)
    assert doc["kind"] == "preuniformity" and doc["carrier"] == ["a", "b", "c"]
    assert ["a", "b"] in doc["basis"][0] and ["b", "a"] not in doc["basis"][0]


def test_rationals_are_strings():
    assert rational_literal(Fraction(1, 2)) == "1/2"
    assert rational_literal(Fraction(3)) == "3/1"
    bad = {"kind": "pseudometric", "carrier": ["a", "b"], "d": [["0", 0.5], ["1/2", "0"]]}
    with pytest.raises(FormatError):
        load(bad)


@pytest.mark.parametrize("doc", [
    [],
    {"kind": "nonsense"},
    {"kind": "pretopology", "carrier": "abc", "opens": []},
    {"kind": "pretopology", "carrier": ["a", "a"], "opens": []},
    {"kind": "preuniformity", "carrier": ["a", "b"], "basis": []},
    {"kind": "preuniformity", "carrier": ["a", "b"], "basis": [[["a", "z"]]]},
    {"kind": "preproximity", "carrier": ["a"], "near": [["a"]]},
    {"kind": "pretopology", "carrier": ["a"]},
])
def test_malformed_documents(doc):
    with pytest.raises(FormatError):
        load(doc)


def test_axiom_failures_are_not_format_errors():
    bad_metric = {"kind": "pseudometric", "carrier": ["a", "b"], "d": [["0", "1"], ["2", "0"]]}
    with pytest.raises(StructureError, match="pseudometric fails"):
        load(bad_metric)
    bad_group = {"kind": "group", "carrier": ["e", "x"], "table": [["e", "x"], ["x", "x"]], "identity": "e"}
    with pytest.raises(StructureError, match="group fails"):
        load(bad_group)


def test_near_pairs_are_closed_with_a_warning():
    doc = {"kind": "preproximity", "carrier": ["a", "b"],
           "near": [[["a"], ["a"]], [["b"], ["b"]]]}
    with pytest.warns(ClosureWarning):
        d, _ = load(doc)
    assert d == PreProximity.discrete(2)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        load(dump(PreProximity.discrete(2)))


def test_files(tmp_path):
    p = tmp_path / "mu.json"
    write_document(p, dump(PreUniformity.discrete(2)))
    assert load(read_document(p))[0] == PreUniformity.discrete(2)
    (tmp_path / "broken.json").write_text("{")
    with pytest.raises(FormatError, match="invalid JSON"):
        read_document(tmp_path / "broken.json")
    with pytest.raises(FormatError, match="cannot read"):
        read_document(tmp_path / "missing.json")
