"""Assessment: measurement, normalization, scoring, aggregation, grading.

Utilities are carried as intervals so that incomplete measurement data
widens the result instead of failing: a missing leaf contributes [0, 1]
and weighted sums propagate both bounds.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from .model import (
    Direction,
    FactorKind,
    Polarity,
    QualityModel,
    RefKind,
    UtilityFunction,
)

logger = logging.getLogger(__name__)

LOW_CONFIDENCE_WIDTH = 0.1
_EPS = 1e-9


class InvariantError(AssertionError):
    """An internal consistency check failed."""


@dataclass(frozen=True)
class MeasurementBundle:
    system_name: str
    system_version: str
    values: Mapping[str, float]
    provenance: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for key, v in self.values.items():
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ValueError(f"measurement for {key} must be a finite number, got {v!r}")

    @classmethod
    def empty(cls, name="", version=""):
        return cls(name, version, {}, {})

    def merged(self, manual: Mapping[str, float]) -> "MeasurementBundle":
        """Overlay manual results; manual values win and conflicts are logged."""
        values = dict(self.values)
        prov = dict(self.provenance)
        for key, v in manual.items():
            if key in values and values[key] != v:
                logger.warning("manual value for %s overrides tool value %s -> %s", key, values[key], v)
            values[key] = v
            prov[key] = "manual"
        return MeasurementBundle(self.system_name, self.system_version, values, prov)


@dataclass(frozen=True)
class MeasureValue:
    measure_id: str
    value: Optional[float]

    @property
    def missing(self) -> bool:
        return self.value is None


@dataclass(frozen=True)
class UtilityInterval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (-_EPS <= self.lo <= self.hi + _EPS and self.hi <= 1.0 + _EPS):
            raise InvariantError(f"invalid utility interval [{self.lo}, {self.hi}]")
        # absorb rounding noise from weighted sums
        object.__setattr__(self, "lo", min(max(self.lo, 0.0), 1.0))
        object.__setattr__(self, "hi", min(max(self.hi, self.lo), 1.0))

    @classmethod
    def point(cls, u: float) -> "UtilityInterval":
        return cls(u, u)

    @classmethod
    def unknown(cls) -> "UtilityInterval":
        return cls(0.0, 1.0)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return (self.lo + self.hi) / 2

    def complement(self) -> "UtilityInterval":
        return UtilityInterval(1.0 - self.hi, 1.0 - self.lo)

    def contains(self, u: float, tol: float = 1e-12) -> bool:
        return self.lo - tol <= u <= self.hi + tol


@dataclass(frozen=True)
class Grade:
    continuous: float
    discrete: int
    width: float = 0.0


@dataclass(frozen=True)
class MeasureContribution:
    measure_id: str
    value: Optional[float]
    weight: float
    utility: UtilityInterval
    function: UtilityFunction


@dataclass(frozen=True)
class ChildLink:
    factor_id: str
    weight: float
    polarity: Polarity
    utility: UtilityInterval  # after polarity is applied


@dataclass(frozen=True)
class FactorNode:
    factor_id: str
    name: str
    kind: FactorKind
    utility: UtilityInterval
    grade: Grade
    best_grade: Grade
    worst_grade: Grade
    children: tuple[ChildLink, ...]
    measures: tuple[MeasureContribution, ...]

    @property
    def low_confidence(self) -> bool:
        return self.utility.width > LOW_CONFIDENCE_WIDTH


@dataclass(frozen=True)
class AssessmentResult:
    system_name: str
    system_version: str
    model_modules: tuple[str, ...]
    roots: tuple[str, ...]
    nodes: Mapping[str, FactorNode]

    def node(self, factor_id: str) -> FactorNode:
        return self.nodes[factor_id]


def evaluate_measure(model: QualityModel, bundle: MeasurementBundle, measure_id: str) -> MeasureValue:
    """Value of a measure for one system, or missing.

    Base measures sum the values of all their instruments and are missing if
    any instrument value is absent. Derived ratios divide the numerator by
    the normalization measure and are missing unless both are present and
    the normalizer is positive.
    """
    ms = model.measure(measure_id)
    if ms.is_derived:
        num = evaluate_measure(model, bundle, ms.numerator)
        den = evaluate_measure(model, bundle, ms.normalized_by)
        if num.missing or den.missing or den.value <= 0:
            return MeasureValue(measure_id, None)
        return MeasureValue(measure_id, num.value / den.value)
    instruments = model.instruments_of[measure_id]
    if not instruments or any(i not in bundle.values for i in instruments):
        return MeasureValue(measure_id, None)
    return MeasureValue(measure_id, math.fsum(bundle.values[i] for i in instruments))


def utility(x: float, f: UtilityFunction) -> float:
    """Score a measure value in [0, 1] with a linear two-threshold function."""
    if not math.isfinite(x):
        raise ValueError(f"cannot score non-finite value {x!r}")
    if not f.min < f.max:
        raise ValueError(f"utility function needs min < max, got min={f.min}, max={f.max}")
    if f.direction is Direction.DECREASING:
        u = (f.max - x) / (f.max - f.min)
    else:
        u = (x - f.min) / (f.max - f.min)
    return min(1.0, max(0.0, u))


def interpret(u: UtilityInterval) -> Grade:
    """School grade for a utility interval: 1 is best, 6 is worst.

    The continuous grade is 6 - 5 * midpoint; the discrete grade is its
    floor clamped to 1..6.
    """
    continuous = 6.0 - 5.0 * u.midpoint
    # rounding guards 2.9999999999999996 -> 3
    discrete = min(6, max(1, math.floor(round(continuous, 9))))
    return Grade(continuous, discrete, u.width)


class _Assessor:
    """Memoized bottom-up evaluation for one (model, bundle) pair."""

    def __init__(self, model: QualityModel, bundle: MeasurementBundle):
        self.model = model
        self.bundle = bundle
        self.measure_values: dict[str, MeasureValue] = {}
        self.nodes: dict[str, FactorNode] = {}
        self._active: set[str] = set()

    def measure(self, measure_id: str) -> MeasureValue:
        if measure_id not in self.measure_values:
            self.measure_values[measure_id] = evaluate_measure(self.model, self.bundle, measure_id)
        return self.measure_values[measure_id]

    def factor(self, factor_id: str) -> FactorNode:
        if factor_id in self.nodes:
            return self.nodes[factor_id]
        f = self.model.factor(factor_id)
        ev = self.model.evaluations.get(factor_id)
        if ev is None:
            raise KeyError(f"factor {factor_id} has no evaluation")
        if factor_id in self._active:
            raise InvariantError(f"evaluation cycle through {factor_id}")
        self._active.add(factor_id)

        lo = hi = 0.0
        links, contributions = [], []
        weights = ev.effective_weights()
        for child, w in zip(ev.children, weights):
            if child.ref_kind is RefKind.MEASURE:
                mv = self.measure(child.ref)
                if mv.missing:
                    iv = UtilityInterval.unknown()
                else:
                    iv = UtilityInterval.point(utility(mv.value, child.utility))
                contributions.append(MeasureContribution(child.ref, mv.value, w, iv, child.utility))
            else:
                sub = self.factor(child.ref).utility
                polarity = self.model.polarity(factor_id, child.ref) if f.is_aspect else Polarity.POSITIVE
                iv = sub.complement() if polarity is Polarity.NEGATIVE else sub
                links.append(ChildLink(child.ref, w, polarity, iv))
            lo += w * iv.lo
            hi += w * iv.hi

        result = UtilityInterval(lo, hi) if ev.children else UtilityInterval.unknown()
        self._active.discard(factor_id)
        node = FactorNode(
            factor_id=factor_id,
            name=f.name,
            kind=f.kind,
            utility=result,
            grade=interpret(result),
            best_grade=interpret(UtilityInterval.point(result.hi)),
            worst_grade=interpret(UtilityInterval.point(result.lo)),
            children=tuple(sorted(links, key=lambda c: (-c.weight, c.factor_id))),
            measures=tuple(sorted(contributions, key=lambda c: (-c.weight, c.measure_id))),
        )
        self.nodes[factor_id] = node
        return node


def assess_factor(model: QualityModel, bundle: MeasurementBundle, factor_id: str) -> UtilityInterval:
    """Utility interval of one factor (weighted sum over its evaluation)."""
    return _Assessor(model, bundle).factor(factor_id).utility


def assess(model: QualityModel, bundle: MeasurementBundle) -> AssessmentResult:
    """Assess every evaluated factor of the model against one bundle.

    Roots are evaluated factors that no evaluation lists as a child.
    """
    assessor = _Assessor(model, bundle)
    for fid in model.evaluations:
        assessor.factor(fid)
    referenced = {c.ref for ev in model.evaluations.values() for c in ev.children if c.ref_kind is RefKind.FACTOR}
    roots = tuple(sorted(fid for fid in model.evaluations if fid not in referenced))
    if set(assessor.nodes) != set(model.evaluations):
        raise InvariantError("assessment did not cover every evaluated factor")
    return AssessmentResult(
        system_name=bundle.system_name,
        system_version=bundle.system_version,
        model_modules=model.module_ids,
        roots=roots,
        nodes=dict(sorted(assessor.nodes.items())),
    )


def read_bundle(path) -> MeasurementBundle:
    """Read ``{"system": {"name", "version"}, "values": {instrumentId: number}}``."""
    path = Path(path)
    doc = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(doc, dict) or set(doc) - {"system", "values"} or "values" not in doc:
        raise ValueError(f"{path}: expected an object with 'system' and 'values'")
    system = doc.get("system") or {}
    values = doc["values"]
    if not isinstance(values, dict):
        raise ValueError(f"{path}: 'values' must be an object")
    return MeasurementBundle(
        str(system.get("name", path.stem)),
        str(system.get("version", "")),
        dict(values),
        {k: "tool" for k in values},
    )


def read_manual_csv(path) -> dict[str, float]:
    """Read ``instrumentId,value`` rows."""
    out: dict[str, float] = {}
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["instrumentId", "value"]:
            raise ValueError(f"{path}: header must be 'instrumentId,value'")
        for lineno, row in enumerate(reader, start=2):
            try:
                value = float(row["value"])
            except (TypeError, ValueError):
                raise ValueError(f"{path}:{lineno}: {row['value']!r} is not a number") from None
            if not math.isfinite(value):
                raise ValueError(f"{path}:{lineno}: value must be finite")
            out[row["instrumentId"].strip()] = value
    return out
