import json

import pytest

from pseudocone import fixtures as fx
from pseudocone.errors import SchemaError, UnknownFixture
from pseudocone.pseudocone import enumerate_pc
from pseudocone.serialize import FIXTURES, dumps, emit_fixture, loads, parse, pseudofunctor_from_doc, \
    pseudofunctor_to_doc, render


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_text_round_trips(name):
    text = emit_fixture(name)
    assert render(parse(text)) == text
    assert text.endswith("\n")
    assert json.loads(text)["name"] == name


def test_unknown_fixture():
    with pytest.raises(UnknownFixture):
        emit_fixture("no-such-thing")


@pytest.mark.parametrize("make", [fx.swap_strict, fx.chaos2_bz2, fx.pow2_over_arrow])
def test_pseudofunctor_survives_a_round_trip(make):
    p = make()
    q = pseudofunctor_from_doc(pseudofunctor_to_doc(p))
    assert len(enumerate_pc(q).objects) == len(enumerate_pc(p).objects)
    assert pseudofunctor_to_doc(q) == pseudofunctor_to_doc(p)


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


@pytest.mark.parametrize("text", ["not json", "[]", '{"name": 3}', '{"name": "x", "surprise": 1}',
                                  '{"name": "x", "monoidal": "join"}'])
def test_malformed_documents_are_rejected(text):
    with pytest.raises(SchemaError):
        parse(text)


def _doc(name):
    return loads(emit_fixture(name))


def test_dangling_morphism_is_rejected():
    doc = _doc("chaos2-bz2")
    doc["pseudofunctor"]["compositors"][0]["first"] = "nowhere"
    with pytest.raises(SchemaError):
        parse(dumps(doc))


def test_tower_must_end_at_the_group():
    doc = _doc("tower-1-2-4-4")
    doc["tower"] = [1, 2, 2]
    with pytest.raises(SchemaError):
        parse(dumps(doc))
    doc["tower"] = [1, 3, 4]
    with pytest.raises(SchemaError):
        parse(dumps(doc))


def test_equivalence_needs_its_parameters():
    doc = _doc("quotient-z4-z2")
    del doc["equivalence"]["normal"]
    with pytest.raises(SchemaError):
        parse(dumps(doc))


def test_instance_builds_its_model():
    inst = parse(emit_fixture("z2-regular-equivariant"))
    model = inst.model()
    assert model.group.order() == 2
    assert sorted(model.space.carrier) == ["0", "1"]
