"""Map specification documents and ``builtin:`` identifiers.

A document is JSON::

    {"n": 2,
     "h": {"kind": "polynomial", "coefficients": {"1,0": [[1, 0], [0, 0]], "0,1": [[0, 0], [1, 0]]}},
     "g": {"kind": "polynomial", "coefficients": {"2,0": [[0.1, 0], [0, 0]]}}}

Multi-index keys are comma-separated integers and complex numbers are
``[re, im]`` pairs.  A part may instead be
``{"kind": "closed_form", "family": <extremal family>, "part": "h"|"g", "params": {...}}``,
and a whole document may be ``{"builtin": "upper_thm2", "params": {...}}``.
"""

from __future__ import annotations

import json
from pathlib import Path
from urllib.parse import parse_qsl

import numpy as np

from . import mapping
from .errors import BadSpec, PluriharmError
from .extremal import FAMILIES, ExtremalSpec, build_extremal
from .mapping import MapModel, PolynomialModel

BUILTINS = ("identity",) + FAMILIES


def _complex(pair) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
        raise BadSpec(f"complex numbers are written [re, im], got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def _multi_index(key: str, n: int) -> tuple[int, ...]:
    try:
        beta = tuple(int(p) for p in str(key).split(","))
    except ValueError as exc:
        raise BadSpec(f"bad multi-index key {key!r}") from exc
    if len(beta) != n:
        raise BadSpec(f"multi-index {key!r} has {len(beta)} entries, expected {n}")
    return beta


def _extremal_spec(params: dict, family: str) -> ExtremalSpec:
    allowed = {"alpha", "k", "t", "sign"}
    unknown = set(params) - allowed
    if unknown:
        raise BadSpec(f"unknown parameters {sorted(unknown)} for family {family}")
    kw = {key: float(v) for key, v in params.items() if key != "sign"}
    if "sign" in params:
        kw["sign"] = int(float(params["sign"]))
    return ExtremalSpec(family, **kw)


def _part(doc: dict, n: int, which: str):
    if not isinstance(doc, dict):
        raise BadSpec(f"part {which!r} must be an object")
    kind = doc.get("kind", "polynomial")
    if kind == "polynomial":
        coeffs = doc.get("coefficients", {})
        if not isinstance(coeffs, dict):
            raise BadSpec("coefficients must be an object keyed by multi-index")
        parsed = {}
        for key, vec in coeffs.items():
            if not isinstance(vec, list) or len(vec) != n:
                raise BadSpec(f"coefficient {key!r} must be a list of {n} complex numbers")
            parsed[_multi_index(key, n)] = np.array([_complex(c) for c in vec])
        return PolynomialModel(n, parsed)
    if kind == "closed_form":
        if n != 1:
            raise BadSpec("closed-form families are one-dimensional")
        spec = _extremal_spec(doc.get("params", {}), doc.get("family", ""))
        part = doc.get("part", which)
        model = build_extremal(spec)
        if part not in ("h", "g"):
            raise BadSpec(f"part must be 'h' or 'g', got {part!r}")
        return model.h if part == "h" else model.g
    raise BadSpec(f"unknown part kind {kind!r}")


def map_from_document(doc: dict) -> MapModel:
    if not isinstance(doc, dict):
        raise BadSpec("map specification must be a JSON object")
    try:
        if "builtin" in doc:
            return builtin_map(doc["builtin"], doc.get("params", {}))
        n = doc.get("n")
        if not isinstance(n, int) or n < 1:
            raise BadSpec(f"'n' must be a positive integer, got {n!r}")
        h = _part(doc.get("h", {}), n, "h")
        g = _part(doc.get("g", {"kind": "polynomial", "coefficients": {}}), n, "g")
        return MapModel(h, g, {"source": "document"})
    except BadSpec:
        raise
    except (PluriharmError, ValueError, TypeError, KeyError) as exc:
        raise BadSpec(str(exc)) from exc


def builtin_map(name: str, params: dict) -> MapModel:
    if name == "identity":
        n = int(float(params.get("n", 1)))
        if n < 1 or set(params) - {"n"}:
            raise BadSpec(f"identity takes only n >= 1, got {params}")
        return mapping.identity_map(n)
    if name in FAMILIES:
        return build_extremal(_extremal_spec(params, name))
    raise BadSpec(f"unknown builtin {name!r}; choose from {BUILTINS}")


def parse_builtin(ident: str) -> MapModel:
    """``builtin:upper_thm2?alpha=2&k=0.5&t=0`` -> map."""
    body = ident[len("builtin:"):]
    name, _, query = body.partition("?")
    try:
        return builtin_map(name, dict(parse_qsl(query, strict_parsing=bool(query))))
    except BadSpec:
        raise
    except (PluriharmError, ValueError) as exc:
        raise BadSpec(str(exc)) from exc


def load_map(source: str) -> MapModel:
    """Load a map from a ``builtin:`` identifier or a JSON file path."""
    if source.startswith("builtin:"):
        return parse_builtin(source)
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise BadSpec(f"cannot read map file {source}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadSpec(f"map file {source} is not valid JSON: {exc}") from exc
    return map_from_document(doc)


def polynomial_document(f: MapModel) -> dict:
    """Serialize a map whose parts are polynomial models."""
    if not (isinstance(f.h, PolynomialModel) and isinstance(f.g, PolynomialModel)):
        raise BadSpec("only polynomial maps serialize to a coefficient document")
    return {"n": f.n, "h": f.h.describe(), "g": f.g.describe()}
