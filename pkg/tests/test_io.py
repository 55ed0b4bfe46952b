import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from boltzdiv.errors import ProblemSyntaxError, ValidationError
from boltzdiv.io import (
    ProblemIOError,
    bundled_fixture,
    dump_problem,
    load_problem,
    parse_problem,
    problem_to_dict,
)
from boltzdiv.model import make_problem


def test_reference_hetero_fixture(reference_hetero):
    p = load_problem(bundled_fixture("reference_hetero.json"))
    assert p == reference_hetero
    assert p.layout.flavors == ("vanilla", "chocolate", "strawberry", "broccoli")


def test_reference_homog_fixture(reference_homog, reference_homog_file):
    assert reference_homog_file == reference_homog


def test_minimal_text():
    p = parse_problem('{"players":[{"id":"a","contribution":1,"need":1}]}')
    assert p.n == 1 and p.cake_size == 100.0 and not p.is_heterogeneous


def errors_for(doc):
    with pytest.raises(ValidationError) as info:
        parse_problem(json.dumps(doc))
    return {v.path: v.code for v in info.value.violations}


def reference_doc():
    return json.loads(bundled_fixture("reference_hetero.json").read_text())


def test_row_sum_error_names_player_path():
    doc = reference_doc()
    doc["preferences"][0] = [0.5, 0.25, 0.25, 0.25]
    assert errors_for(doc) == {"players[0].preferences": "RowSumViolation"}


def test_unknown_keys_are_named():
    doc = reference_doc()
    doc["colour"] = "red"
    doc["players"][2]["talent"] = 3
    doc["flavors"][1]["sweetness"] = 1
    assert errors_for(doc) == {
        "colour": "UnknownKey",
        "players[2].talent": "UnknownKey",
        "flavors[1].sweetness": "UnknownKey",
    }


def test_type_and_missing_field_errors():
    doc = {"players": [{"id": "a", "contribution": "lots", "need": 1}, {"id": 7, "need": 2}]}
    assert errors_for(doc) == {
        "players[0].contribution": "InvalidType",
        "players[1].id": "InvalidType",
        "players[1].contribution": "MissingField",
    }


def test_flavors_need_preferences():
    doc = reference_doc()
    del doc["preferences"]
    assert errors_for(doc) == {"preferences": "MissingField"}


def test_domain_errors_carry_paths():
    doc = {"players": [{"id": "a", "contribution": -1, "need": 0}]}
    assert errors_for(doc) == {
        "players[0].contribution": "NegativeContribution",
        "players[0].need": "NonPositiveNeed",
    }


def test_schema_and_domain_errors_reported_together():
    doc = {"players": [{"id": "a", "contribution": 1, "need": 0, "extra": 1}]}
    assert errors_for(doc) == {
        "players[0].extra": "UnknownKey",
        "players[0].need": "NonPositiveNeed",
    }


def test_syntax_error_position():
    with pytest.raises(ProblemSyntaxError) as info:
        parse_problem('{\n  "players": [\n    {"id": "a",, }\n  ]\n}')
    assert (info.value.line, info.value.column) == (3, 16)


def test_missing_file(tmp_path):
    with pytest.raises(ProblemIOError):
        load_problem(tmp_path / "nope.json")


def test_round_trip_reference(reference_hetero):
    assert parse_problem(dump_problem(reference_hetero)) == reference_hetero


@st.composite
def problems(draw):
    n = draw(st.integers(1, 5))
    e = draw(st.lists(st.floats(0, 1e3), min_size=n, max_size=n))
    d = draw(st.lists(st.floats(1e-3, 1e3), min_size=n, max_size=n))
    s = draw(st.lists(st.floats(0.1, 10), min_size=n, max_size=n))
    cake = draw(st.floats(1, 1e3))
    if not draw(st.booleans()):
        return make_problem(e, d, amplitudes=s, cake_size=cake)
    m = draw(st.integers(1, 4))
    # one-hot rows keep the row sums exact; every flavor gets a claimant
    owner = [j % m for j in range(max(n, m))]
    if n < m:
        return make_problem(e, d, amplitudes=s, cake_size=cake)
    weights = [[1.0 if owner[j] == i else 0.0 for i in range(m)] for j in range(n)]
    sizes = [cake / m] * m
    sizes[-1] = cake - sum(sizes[:-1])
    return make_problem(e, d, amplitudes=s, cake_size=cake, weights=weights, flavor_sizes=sizes)


@given(problems())
def test_round_trip_property(p):
    again = parse_problem(dump_problem(p))
    assert again == p
    assert problem_to_dict(again) == problem_to_dict(p)
