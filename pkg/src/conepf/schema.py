"""JSON schema for map descriptions and run documents.

A run document is either a bare map description or an object with a
``map`` and optional ``cone``, ``expected_failures`` and ``growth`` data.
Numbers may be JSON numbers or rational strings ``"p/q"``.
"""

from __future__ import annotations

import jsonschema

NUMBER = {
    "oneOf": [
        {"type": "number"},
        {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"},
    ]
}
VECTOR = {"type": "array", "items": {"$ref": "#/$defs/number"}, "minItems": 1}
MATRIX = {"type": "array", "items": {"$ref": "#/$defs/vector"}, "minItems": 1}

MAP_SCHEMA = {
    "type": "object",
    "required": ["type"],
    "oneOf": [
        {"properties": {"type": {"const": "linear"}, "matrix": {"$ref": "#/$defs/matrix"}},
         "required": ["matrix"]},
        {"properties": {
            "type": {"const": "pwl"},
            "on_space": {"type": "boolean"},
            "regions": {"type": "array", "minItems": 1, "items": {
                "type": "object", "required": ["matrix"], "additionalProperties": False,
                "properties": {
                    "matrix": {"$ref": "#/$defs/matrix"},
                    "strict": {"type": "array", "items": {"$ref": "#/$defs/vector"}},
                    "weak": {"type": "array", "items": {"$ref": "#/$defs/vector"}},
                },
            }},
        }, "required": ["regions"]},
        {"properties": {"type": {"enum": ["min_linear", "max_linear"]},
                        "matrices": {"type": "array", "minItems": 1, "items": {"$ref": "#/$defs/matrix"}}},
         "required": ["matrices"]},
        {"properties": {"type": {"const": "compose"},
                        "maps": {"type": "array", "minItems": 1, "items": {"$ref": "#/$defs/map"}}},
         "required": ["maps"]},
        {"properties": {"type": {"const": "scaled"}, "factor": {"$ref": "#/$defs/number"},
                        "map": {"$ref": "#/$defs/map"}},
         "required": ["factor", "map"]},
        {"properties": {"type": {"const": "builtin"}, "name": {"type": "string"}},
         "required": ["name"]},
    ],
}

CONE_SCHEMA = {
    "type": "object",
    "oneOf": [
        {"properties": {"orthant": {"type": "integer", "minimum": 1}}, "required": ["orthant"],
         "additionalProperties": False},
        {"properties": {"dim": {"type": "integer", "minimum": 1}, "facets": {"$ref": "#/$defs/matrix"}},
         "required": ["facets"], "additionalProperties": False},
    ],
}

DEFS = {"number": NUMBER, "vector": VECTOR, "matrix": MATRIX, "map": MAP_SCHEMA, "cone": CONE_SCHEMA}

DOCUMENT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$defs": DEFS,
    "oneOf": [
        {"$ref": "#/$defs/map"},
        {
            "type": "object",
            "required": ["map"],
            "additionalProperties": False,
            "properties": {
                "map": {"$ref": "#/$defs/map"},
                "cone": {"$ref": "#/$defs/cone"},
                "name": {"type": "string"},
                "expected_failures": {"type": "array", "items": {"type": "string"}},
                "growth": {
                    "type": "object", "additionalProperties": False,
                    "properties": {
                        "u": {"$ref": "#/$defs/vector"}, "v": {"$ref": "#/$defs/vector"},
                        "w": {"$ref": "#/$defs/vector"}, "M": {"$ref": "#/$defs/number"},
                        "p": {"type": "integer", "minimum": 1}, "eps": {"$ref": "#/$defs/number"},
                        "k_max": {"type": "integer", "minimum": 1},
                    },
                    "required": ["u", "v", "w", "M", "p"],
                },
            },
        },
    ],
}


class SchemaError(ValueError):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"
        self.message = message


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def _deepest(error: jsonschema.ValidationError) -> jsonschema.ValidationError:
    # oneOf failures bury the useful message; follow the longest path
    best = error
    for sub in error.context or ():
        cand = _deepest(sub)
        if len(cand.absolute_path) > len(best.absolute_path):
            best = cand
    return best


def _check_shapes(node, path: list) -> None:
    """Square matrices and consistent vector lengths (not expressible in the schema)."""
    if isinstance(node, dict):
        if "matrix" in node and isinstance(node["matrix"], list):
            _square(node["matrix"], path + ["matrix"])
        if "matrices" in node and isinstance(node["matrices"], list):
            n = None
            for k, m in enumerate(node["matrices"]):
                _square(m, path + ["matrices", k])
                if n is not None and len(m) != n:
                    raise SchemaError(_pointer(path + ["matrices", k]), "matrices must share a dimension")
                n = len(m)
        for key, val in node.items():
            if key not in ("matrix", "matrices"):
                _check_shapes(val, path + [key])
    elif isinstance(node, list):
        for k, val in enumerate(node):
            _check_shapes(val, path + [k])


def _square(m, path) -> None:
    n = len(m)
    for i, row in enumerate(m):
        if len(row) != n:
            raise SchemaError(_pointer(path + [i]), f"row has length {len(row)}, expected {n}")


def validate_document(doc) -> None:
    """Raise SchemaError with the JSON pointer of the offending element."""
    validator = jsonschema.Draft202012Validator(DOCUMENT_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = _deepest(errors[0])
        raise SchemaError(_pointer(err.absolute_path), err.message)
    _check_shapes(doc, [])
