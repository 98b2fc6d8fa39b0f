import json
from fractions import Fraction as F
from random import Random

import pytest

from osx import schema
from osx.completion_points import equals
from osx.fixtures import family, random_point
from osx.marked_graph import theta


def test_rational_formatting():
    assert schema.format_rational(F(3, 2)) == "3/2"
    assert schema.format_rational(F(4, 2)) == "2"
    assert schema.rational("6/4") == F(3, 2)
    assert schema.rational(2) == 2


@pytest.mark.parametrize("bad", ["x", "1/0", 1.5, None, True])
def test_rational_rejects(bad):
    with pytest.raises(schema.SchemaError):
        schema.rational(bad)


@pytest.mark.parametrize("name", sorted(family()))
def test_family_round_trip(name):
    x = family()[name]
    text = schema.dumps(x)
    y = schema.loads(text)
    assert equals(x, y)
    assert schema.dumps(y) == text


@pytest.mark.parametrize("seed", range(10))
def test_random_round_trip(seed):
    x = random_point(Random(seed), 3, aut_len=5)
    y = schema.loads(schema.dumps(x))
    assert y.images == x.images and y.lengths == x.lengths
    assert y.inverse.words == x.inverse.words


def test_file_round_trip(tmp_path):
    x = theta([F(1, 2), F(1, 4), F(1, 4)])
    schema.dump(x, tmp_path / "t.json")
    assert equals(schema.load(tmp_path / "t.json"), x)


def _base():
    return json.loads(schema.dumps(theta([1, 1, 1])))


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("rank"),
    lambda d: d.update(rank=0),
    lambda d: d.update(rank="2"),
    lambda d: d.update(vertices=["u", "u"]),
    lambda d: d["edges"][0].update(to="nowhere"),
    lambda d: d["edges"][1].update(id="e1"),
    lambda d: d["edges"][0].update(length=0.5),
    lambda d: d["marking"].pop("b"),
    lambda d: d["marking"].update(a="e1,-e9"),
    lambda d: d.update(base_vertex="z"),
    lambda d: d["inverse_marking"].update(tree=["e1", "e2"]),
    lambda d: d["inverse_marking"].update(tree=["e9"]),
    lambda d: d["inverse_marking"]["words"].update(e2="c"),
])
def test_malformed_inputs(mutate):
    d = _base()
    mutate(d)
    with pytest.raises(schema.SchemaError):
        schema.from_dict(d)


def test_invalid_json_and_missing_file(tmp_path):
    with pytest.raises(schema.SchemaError):
        schema.loads("{")
    with pytest.raises(schema.SchemaError):
        schema.load(tmp_path / "absent.json")


def test_inverse_marking_is_optional():
    d = _base()
    del d["inverse_marking"]
    assert equals(schema.from_dict(d), theta([1, 1, 1]))
