"""Versioned JSON archives of decompositions, with re-verification on load."""

from __future__ import annotations

import hashlib
import json
import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

import jsonschema

from . import __version__
from .charts import chart_digest
from .errors import DRCError, InputError, InvariantError, SchemaError
from .graphs import StableGraph, Weighting
from .local import local_report
from .strata import (DecoratedStratum, Decomposition, EnumerationBounds, classify_case,
                     enumerate_strata, interior_stratum, make_stratum)
from .twists import Twist

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

_RATIONAL = {"type": "string", "pattern": r"^-?\d+/[1-9]\d*$"}
_INT_MAP = {"type": "object", "additionalProperties": {"type": "integer"}}

ARCHIVE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["drc_schema", "tool", "input", "input_hash", "case", "strata"],
    "properties": {
        "drc_schema": {"const": SCHEMA_VERSION},
        "tool": {"type": "object", "required": ["name", "version"],
                 "properties": {"name": {"type": "string"}, "version": {"type": "string"}}},
        "input": {
            "type": "object", "required": ["g", "n", "m", "k"],
            "properties": {"g": {"type": "integer", "minimum": 0},
                           "n": {"type": "integer", "minimum": 1},
                           "m": {"type": "array", "items": {"type": "integer"}},
                           "k": {"type": "integer", "minimum": 1}},
        },
        "input_hash": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "case": {"type": "string"},
        "strata": {"type": "array", "items": {
            "type": "object",
            "required": ["key", "interior", "formal_term", "graph", "twist", "weight",
                         "fp_coefficient", "aut_order", "vertex_labels", "drl_local", "chart"],
            "properties": {
                "key": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
                "interior": {"type": "boolean"},
                "formal_term": {"type": "boolean"},
                "graph": {"type": "object",
                          "required": ["vertices", "half_edges", "pairing", "legs"]},
                "twist": {"type": "object", "required": ["half_edge_values"],
                          "properties": {"half_edge_values": _INT_MAP}},
                "weight": _RATIONAL,
                "fp_coefficient": _RATIONAL,
                "aut_order": {"type": "integer", "minimum": 1},
                "vertex_labels": {"type": "array"},
                "drl_local": {
                    "type": "object",
                    "required": ["fibre_count", "local_ring", "length", "multiplicity", "tangent"],
                    "properties": {"fibre_count": {"type": "integer", "minimum": 1},
                                   "length": {"type": "integer", "minimum": 1},
                                   "multiplicity": _RATIONAL},
                },
                "chart": {"type": "object"},
            },
        }},
    },
}


class SchemaVersionError(InputError):
    pass


def to_jsonable(obj):
    """Fractions become lowest-terms ``"num/den"`` strings, recursively."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def parse_rational(text: str) -> Fraction:
    num, den = text.split("/")
    return Fraction(int(num), int(den))


def dumps(doc) -> bytes:
    return (json.dumps(to_jsonable(doc), sort_keys=True, indent=2) + "\n").encode()


def input_hash(g: int, m, k: int) -> str:
    blob = json.dumps({"g": g, "m": list(m), "k": k}, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def stratum_record(s: DecoratedStratum) -> dict:
    return {
        "key": s.key_hex,
        "interior": s.interior,
        "formal_term": s.formal_term,
        "graph": s.graph.to_json(),
        "twist": s.twist.to_json(),
        "edge_values": {f"e{j}": v for j, v in enumerate(s.edge_values)},
        "weight": s.weight,
        "fp_coefficient": s.fp_coefficient,
        "aut_order": s.aut_order,
        "vertex_labels": [dict(lab.to_json(), label=str(lab)) for lab in s.vertex_labels],
        "drl_local": local_report(s),
        "chart": chart_digest(s.graph, s.twist),
    }


@dataclass
class DecompositionArchive:
    doc: dict  # JSON-ready: rationals already encoded as strings

    def serialize(self) -> bytes:
        return dumps(self.doc)

    @property
    def strata(self) -> list:
        return self.doc["strata"]


def build_archive(decomp: Decomposition) -> DecompositionArchive:
    doc = {
        "drc_schema": SCHEMA_VERSION,
        "tool": {"name": "drc", "version": __version__},
        "input": {"g": decomp.g, "n": decomp.n, "m": list(decomp.m), "k": decomp.k},
        "input_hash": input_hash(decomp.g, decomp.m, decomp.k),
        "case": decomp.case.value,
        "strata": [stratum_record(s) for s in decomp.strata],
    }
    return DecompositionArchive(to_jsonable(doc))


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else ""


def parse_archive(data: bytes) -> DecompositionArchive:
    """Parse, schema-check and re-verify every stored number."""
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("archive must be a JSON object")
    version = doc.get("drc_schema")
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(f"unsupported drc_schema {version!r}; "
                                 f"this tool reads version {SCHEMA_VERSION}")
    validator = jsonschema.Draft202012Validator(ARCHIVE_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise SchemaError(err.message, _pointer(err.absolute_path))
    _reverify(doc)
    return DecompositionArchive(doc)


def _reverify(doc: dict) -> None:
    inp = doc["input"]
    g, m, k = inp["g"], tuple(inp["m"]), inp["k"]
    if len(m) != inp["n"]:
        raise SchemaError("m has the wrong length", "/input/m")
    case = classify_case(g, m, k)
    if case.value != doc["case"]:
        raise InvariantError(f"stored case {doc['case']} != {case.value}")
    if doc["input_hash"] != input_hash(g, m, k):
        raise InvariantError("input_hash does not match input")
    weighting = Weighting(m, k)
    keys = set()
    for i, rec in enumerate(doc["strata"]):
        where = f"/strata/{i}"
        try:
            graph = StableGraph.from_json(rec["graph"])
            twist = Twist.from_json(rec["twist"], k)
        except InputError as exc:
            raise SchemaError(str(exc), where) from None
        if rec["interior"]:
            s = interior_stratum(g, weighting)
            if s.graph != graph or s.twist != twist:
                raise InvariantError(f"{where}: interior term is not the one-vertex graph")
        else:
            s = make_stratum(graph, weighting, twist)
        fresh = to_jsonable(stratum_record(s))
        for field in sorted(fresh):
            if fresh[field] != rec.get(field):
                raise InvariantError(f"{where}/{field}: stored value {rec.get(field)!r} "
                                     f"does not re-verify (expected {fresh[field]!r})")
        if rec["key"] in keys:
            raise InvariantError(f"{where}: duplicate stratum key")
        keys.add(rec["key"])


def run_enumerate(g: int, m, k: int, bounds: EnumerationBounds = EnumerationBounds(),
                  cache_dir: Optional[str] = None, **kwargs) -> DecompositionArchive:
    """Enumerate and archive, consulting ``cache_dir`` (or ``DRC_CACHE_DIR``)."""
    cache_dir = cache_dir or os.environ.get("DRC_CACHE_DIR")
    path = None
    if cache_dir:
        path = Path(cache_dir) / f"drc-{__version__}-{input_hash(g, m, k)}.json"
        if path.exists():
            try:
                archive = parse_archive(path.read_bytes())
                log.info("cache hit %s", path)
                return archive
            except DRCError as exc:
                log.warning("discarding cache entry %s: %s", path, exc)
    archive = build_archive(enumerate_strata(g, m, k, bounds, **kwargs))
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(archive.serialize())
    return archive
