"""JSON file format for quality-model modules (``<name>.qm.json``).

One module per file::

    {"formatVersion": "1",
     "module": {"id": "root", "requires": [],
                "entities": [...], "factors": [...], "impacts": [...],
                "measures": [...], "instruments": [...], "evaluations": [...]}}

Serialization is canonical: sorted keys, two-space indentation, LF line
endings and a trailing newline.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Union

import jsonschema

from .model import (
    Diagnostic,
    Entity,
    EvalChild,
    Evaluation,
    Factor,
    Impact,
    Instrument,
    Measure,
    ModuleDef,
    UtilityFunction,
)

FORMAT_VERSION = "1"
SUFFIX = ".qm.json"

_ID = {"type": "string", "minLength": 1}
_IDS = {"type": "array", "items": _ID}
_TEXT = {"type": "string"}
_NUM = {"type": "number"}


def _obj(required, **props):
    return {"type": "object", "required": list(required), "properties": props, "additionalProperties": False}


SCHEMA = _obj(
    ["formatVersion", "module"],
    formatVersion={"type": "string"},
    module=_obj(
        ["id", "requires"],
        id=_ID,
        requires=_IDS,
        entities={"type": "array", "items": _obj(
            ["id", "name"], id=_ID, name=_TEXT, description=_TEXT, isA=_IDS, partOf=_IDS)},
        factors={"type": "array", "items": _obj(
            ["id", "name", "kind", "entity"], id=_ID, name=_TEXT,
            kind={"enum": ["QualityAspect", "ProductFactor"]},
            entity=_ID, refines=_IDS, description=_TEXT)},
        impacts={"type": "array", "items": _obj(
            ["source", "target", "polarity"], source=_ID, target=_ID,
            polarity={"enum": ["positive", "negative"]}, justification=_TEXT)},
        measures={"type": "array", "items": _obj(
            ["id", "name", "type"], id=_ID, name=_TEXT,
            type={"enum": ["base-count", "base-size", "derived-ratio"]},
            normalizedBy=_ID, numerator=_ID, factors=_IDS, description=_TEXT)},
        instruments={"type": "array", "items": _obj(
            ["id", "measure", "kind"], id=_ID, measure=_ID,
            kind={"enum": ["manual", "tool"]}, toolName=_TEXT, ruleId=_TEXT)},
        evaluations={"type": "array", "items": _obj(
            ["factor", "children"], factor=_ID,
            children={"type": "array", "items": _obj(
                ["ref", "refKind"], ref=_ID, refKind={"enum": ["measure", "factor"]}, weight=_NUM,
                utility=_obj(["direction", "min", "max"],
                             direction={"enum": ["increasing", "decreasing"]}, min=_NUM, max=_NUM))})},
    ),
)

_VALIDATOR = jsonschema.Draft7Validator(SCHEMA)


class ModelFormatError(ValueError):
    """A module file could not be parsed; ``diagnostic`` says why and where."""

    def __init__(self, code: str, message: str, source: str = "<input>"):
        self.diagnostic = Diagnostic("error", code, source, message)
        super().__init__(f"{source}: [{code}] {message}")


def _reject_constant(name):
    raise ValueError(f"non-finite number {name} is not allowed")


def _finite_float(literal):
    value = float(literal)
    if value != value or value in (float("inf"), float("-inf")):
        raise ValueError(f"number {literal[:40]} is out of range")
    return value


def parse_module(data: Union[bytes, str], source: str = "<input>") -> ModuleDef:
    """Parse one module file. Raises :class:`ModelFormatError`."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ModelFormatError("syntax", f"not valid UTF-8: {exc}", source) from None
    else:
        text = data
    try:
        doc = json.loads(text, parse_constant=_reject_constant, parse_float=_finite_float,
                         parse_int=_finite_float)
    except json.JSONDecodeError as exc:
        raise ModelFormatError("syntax", f"line {exc.lineno} column {exc.colno}: {exc.msg}", source) from None
    except (ValueError, RecursionError) as exc:
        raise ModelFormatError("syntax", str(exc), source) from None

    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = "/".join(str(p) for p in err.absolute_path) or "<document>"
        raise ModelFormatError("schema", f"{where}: {err.message}", source)
    if doc["formatVersion"] != FORMAT_VERSION:
        raise ModelFormatError(
            "version", f"unsupported formatVersion {doc['formatVersion']!r}, expected {FORMAT_VERSION!r}", source)
    return _module_from_dict(doc["module"])


def _module_from_dict(d: dict) -> ModuleDef:
    return ModuleDef(
        id=d["id"],
        requires=d["requires"],
        entities=[Entity(e["id"], e["name"], e.get("description", ""), e.get("isA", ()), e.get("partOf", ()))
                  for e in d.get("entities", ())],
        factors=[Factor(f["id"], f["name"], f["kind"], f["entity"], f.get("refines", ()), f.get("description", ""))
                 for f in d.get("factors", ())],
        impacts=[Impact(i["source"], i["target"], i["polarity"], i.get("justification", ""))
                 for i in d.get("impacts", ())],
        measures=[Measure(m["id"], m["name"], m["type"], m.get("normalizedBy"), m.get("numerator"),
                          m.get("factors", ()), m.get("description", ""))
                  for m in d.get("measures", ())],
        instruments=[Instrument(i["id"], i["measure"], i["kind"], i.get("toolName"), i.get("ruleId"))
                     for i in d.get("instruments", ())],
        evaluations=[Evaluation(ev["factor"], [_child_from_dict(c) for c in ev["children"]])
                     for ev in d.get("evaluations", ())],
    )


def _child_from_dict(c: dict) -> EvalChild:
    u = c.get("utility")
    uf = UtilityFunction(u["direction"], u["min"], u["max"]) if u is not None else None
    return EvalChild(c["ref"], c["refKind"], c.get("weight"), uf)


def module_to_dict(m: ModuleDef) -> dict:
    def opt(d, key, value):
        if value is not None:
            d[key] = value
        return d

    def child(c: EvalChild):
        d = {"ref": c.ref, "refKind": c.ref_kind.value}
        opt(d, "weight", c.weight)
        if c.utility is not None:
            d["utility"] = {"direction": c.utility.direction.value, "min": c.utility.min, "max": c.utility.max}
        return d

    return {
        "id": m.id,
        "requires": list(m.requires),
        "entities": [{"id": e.id, "name": e.name, "description": e.description,
                      "isA": list(e.is_a), "partOf": list(e.part_of)} for e in m.entities],
        "factors": [{"id": f.id, "name": f.name, "kind": f.kind.value, "entity": f.entity,
                     "refines": list(f.refines), "description": f.description} for f in m.factors],
        "impacts": [{"source": i.source, "target": i.target, "polarity": i.polarity.value,
                     "justification": i.justification} for i in m.impacts],
        "measures": [opt(opt({"id": ms.id, "name": ms.name, "type": ms.type.value,
                              "factors": list(ms.factors), "description": ms.description},
                             "normalizedBy", ms.normalized_by), "numerator", ms.numerator)
                     for ms in m.measures],
        "instruments": [opt(opt({"id": i.id, "measure": i.measure, "kind": i.kind.value},
                                "toolName", i.tool_name), "ruleId", i.rule_id)
                        for i in m.instruments],
        "evaluations": [{"factor": ev.factor, "children": [child(c) for c in ev.children]}
                        for ev in m.evaluations],
    }


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def serialize_module(m: ModuleDef) -> str:
    return canonical_json({"formatVersion": FORMAT_VERSION, "module": module_to_dict(m)})


def load_module(path: Union[str, Path]) -> ModuleDef:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise ModelFormatError("io", str(exc), str(path)) from None
    return parse_module(data, source=str(path))


def load_modules(paths: Iterable[Union[str, Path]]) -> list[ModuleDef]:
    """Load module files, expanding directories to their ``*.qm.json`` files."""
    files: list[Path] = []
    for p in map(Path, paths):
        if p.is_dir():
            files.extend(sorted(p.glob("*" + SUFFIX)))
        else:
            files.append(p)
    return [load_module(f) for f in files]


def save_module(m: ModuleDef, directory: Union[str, Path]) -> Path:
    path = Path(directory) / f"{m.id}{SUFFIX}"
    path.write_bytes(serialize_module(m).encode("utf-8"))
    return path
