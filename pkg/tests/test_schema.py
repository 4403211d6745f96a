import json
from pathlib import Path

import pytest

from conepf.schema import SchemaError, validate_document

DEMOS = Path(__file__).resolve().parents[1] / "demos"


@pytest.mark.parametrize("doc", [
    {"type": "linear", "matrix": [[1, "1/2"], [0, 1.5]]},
    {"type": "min_linear", "matrices": [[[1, 0], [0, 1]], [[2, 0], [0, 2]]]},
    {"type": "builtin", "name": "mahadevan_counterexample"},
    {"type": "scaled", "factor": "3/2", "map": {"type": "linear", "matrix": [[1]]}},
    {"type": "compose", "maps": [{"type": "linear", "matrix": [[1]]}, {"type": "linear", "matrix": [[2]]}]},
    {"type": "pwl", "regions": [{"matrix": [[1, 0], [0, 1]], "weak": [[1, -1]]},
                                {"matrix": [[1, 0], [0, 1]], "strict": [[-1, 1]]}]},
    {"map": {"type": "linear", "matrix": [[1, 0], [0, 1]]}, "cone": {"orthant": 2},
     "growth": {"u": [1, 1], "v": [1, 1], "w": [0, 0], "M": 1, "p": 1}},
    {"map": {"type": "linear", "matrix": [[1, 0], [0, 1]]}, "cone": {"facets": [[2, -1], [-1, 2]]}},
])
def test_valid_documents(doc):
    validate_document(doc)


@pytest.mark.parametrize("doc, pointer", [
    ({"type": "linear", "matrix": [[1, 2], [3]]}, "/matrix/1"),
    ({"map": {"type": "linear", "matrix": [[1, 2], [3]]}}, "/map/matrix/1"),
    ({"type": "linear", "matrix": [[1, "x"], [0, 1]]}, "/matrix/0/1"),
    ({"type": "min_linear", "matrices": [[[1]], [[1, 0], [0, 1]]]}, "/matrices/1"),
    ({"map": {"type": "linear", "matrix": [[1]]}, "growth": {"u": [1], "v": [1], "w": [0], "M": 1, "p": 0}},
     "/growth/p"),
])
def test_invalid_documents_report_pointer(doc, pointer):
    with pytest.raises(SchemaError) as info:
        validate_document(doc)
    assert info.value.pointer == pointer


def test_unknown_type_rejected():
    with pytest.raises(SchemaError):
        validate_document({"type": "quadratic", "matrix": [[1]]})


@pytest.mark.parametrize("name", ["min_linear_demo.json", "counterexample.json"])
def test_demo_documents_validate(name):
    validate_document(json.loads((DEMOS / name).read_text()))
