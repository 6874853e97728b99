"""Meta-model types, module resolution, structural validation and tracing.

A quality model is split into modules. Each module declares entities,
factors (quality aspects and product factors), impacts, measures,
instruments and evaluations. :func:`resolve` merges modules into an
immutable :class:`QualityModel`; :func:`validate` reports every structural
violation as a :class:`Diagnostic`.

Identifiers are dot-qualified, ``<module>.<localName>``, so the owning
module of any element can be read off its id.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence

# thresholds of the jump function produced by calibration for sparse measures
JUMP_MIN = 0.0
JUMP_MAX = 1e-8

WEIGHT_TOLERANCE = 1e-6


class FactorKind(str, enum.Enum):
    QUALITY_ASPECT = "QualityAspect"
    PRODUCT_FACTOR = "ProductFactor"


class Polarity(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class MeasureType(str, enum.Enum):
    BASE_COUNT = "base-count"
    BASE_SIZE = "base-size"
    DERIVED_RATIO = "derived-ratio"


class InstrumentKind(str, enum.Enum):
    MANUAL = "manual"
    TOOL = "tool"


class Direction(str, enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"


class RefKind(str, enum.Enum):
    MEASURE = "measure"
    FACTOR = "factor"


def _sorted_tuple(items: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(items))


def module_of(identifier: str) -> str:
    """Return the module part of a qualified identifier."""
    return identifier.split(".", 1)[0]


@dataclass(frozen=True)
class Entity:
    id: str
    name: str
    description: str = ""
    is_a: tuple[str, ...] = ()
    part_of: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "is_a", _sorted_tuple(self.is_a))
        object.__setattr__(self, "part_of", _sorted_tuple(self.part_of))

    @property
    def module(self) -> str:
        return module_of(self.id)


@dataclass(frozen=True)
class Factor:
    id: str
    name: str
    kind: FactorKind
    entity: str
    refines: tuple[str, ...] = ()
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "kind", FactorKind(self.kind))
        object.__setattr__(self, "refines", _sorted_tuple(self.refines))

    @property
    def module(self) -> str:
        return module_of(self.id)

    @property
    def is_aspect(self) -> bool:
        return self.kind is FactorKind.QUALITY_ASPECT


@dataclass(frozen=True)
class Impact:
    source: str
    target: str
    polarity: Polarity
    justification: str = ""

    def __post_init__(self):
        object.__setattr__(self, "polarity", Polarity(self.polarity))


@dataclass(frozen=True)
class Measure:
    id: str
    name: str
    type: MeasureType
    normalized_by: Optional[str] = None
    numerator: Optional[str] = None
    factors: tuple[str, ...] = ()
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "type", MeasureType(self.type))
        object.__setattr__(self, "factors", _sorted_tuple(self.factors))

    @property
    def module(self) -> str:
        return module_of(self.id)

    @property
    def is_derived(self) -> bool:
        return self.type is MeasureType.DERIVED_RATIO


@dataclass(frozen=True)
class Instrument:
    id: str
    measure: str
    kind: InstrumentKind
    tool_name: Optional[str] = None
    rule_id: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", InstrumentKind(self.kind))

    @property
    def module(self) -> str:
        return module_of(self.id)


@dataclass(frozen=True)
class UtilityFunction:
    """Piecewise-linear preference over a measure value.

    ``min`` and ``max`` are the thresholds where utility saturates. For a
    decreasing function values at or below ``min`` score 1 and values at or
    above ``max`` score 0; an increasing function is the mirror image.
    """

    direction: Direction
    min: float
    max: float

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))
        object.__setattr__(self, "min", float(self.min))
        object.__setattr__(self, "max", float(self.max))

    @property
    def is_jump(self) -> bool:
        return self.min == JUMP_MIN and self.max == JUMP_MAX


@dataclass(frozen=True)
class EvalChild:
    ref: str
    ref_kind: RefKind
    weight: Optional[float] = None
    utility: Optional[UtilityFunction] = None

    def __post_init__(self):
        object.__setattr__(self, "ref_kind", RefKind(self.ref_kind))
        if self.weight is not None:
            object.__setattr__(self, "weight", float(self.weight))


@dataclass(frozen=True)
class Evaluation:
    factor: str
    children: tuple[EvalChild, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))

    def effective_weights(self) -> tuple[float, ...]:
        """Weights used for aggregation.

        Explicit weights are rescaled to sum to exactly 1 (files carry them
        with a 1e-6 tolerance). Without any explicit weight every child gets
        the same share.
        """
        n = len(self.children)
        if n == 0:
            return ()
        weights = [c.weight for c in self.children]
        if all(w is None for w in weights):
            return tuple(1.0 / n for _ in weights)
        if any(w is None for w in weights):
            raise ValueError(f"evaluation of {self.factor} mixes weighted and unweighted children")
        total = math.fsum(weights)
        return tuple(w / total for w in weights)


@dataclass(frozen=True)
class ModuleDef:
    id: str
    requires: tuple[str, ...] = ()
    entities: tuple[Entity, ...] = ()
    factors: tuple[Factor, ...] = ()
    impacts: tuple[Impact, ...] = ()
    measures: tuple[Measure, ...] = ()
    instruments: tuple[Instrument, ...] = ()
    evaluations: tuple[Evaluation, ...] = ()

    def __post_init__(self):
        # canonical element order so that equality ignores declaration order
        object.__setattr__(self, "requires", _sorted_tuple(self.requires))
        by_id = lambda e: e.id
        object.__setattr__(self, "entities", tuple(sorted(self.entities, key=by_id)))
        object.__setattr__(self, "factors", tuple(sorted(self.factors, key=by_id)))
        object.__setattr__(self, "measures", tuple(sorted(self.measures, key=by_id)))
        object.__setattr__(self, "instruments", tuple(sorted(self.instruments, key=by_id)))
        object.__setattr__(
            self, "impacts", tuple(sorted(self.impacts, key=lambda i: (i.source, i.target, i.polarity.value)))
        )
        object.__setattr__(self, "evaluations", tuple(sorted(self.evaluations, key=lambda e: e.factor)))


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    element: str
    message: str

    def __str__(self):
        return f"{self.severity}: [{self.code}] {self.element}: {self.message}"


class ModelError(Exception):
    """Raised when modules cannot be resolved into a model."""

    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


def _error(code, element, message):
    return Diagnostic("error", code, element, message)


def _warning(code, element, message):
    return Diagnostic("warning", code, element, message)


@dataclass(frozen=True)
class QualityModel:
    """Resolved model. Immutable; safe to share between assessments."""

    modules: tuple[ModuleDef, ...]
    entities: Mapping[str, Entity]
    factors: Mapping[str, Factor]
    measures: Mapping[str, Measure]
    instruments: Mapping[str, Instrument]
    evaluations: Mapping[str, Evaluation]
    impacts: tuple[Impact, ...]
    # derived indexes
    sub_factors: Mapping[str, tuple[str, ...]] = field(repr=False, default_factory=dict)
    impacts_on: Mapping[str, tuple[Impact, ...]] = field(repr=False, default_factory=dict)
    measures_of: Mapping[str, tuple[str, ...]] = field(repr=False, default_factory=dict)
    instruments_of: Mapping[str, tuple[str, ...]] = field(repr=False, default_factory=dict)
    closure: Mapping[str, frozenset] = field(repr=False, default_factory=dict)

    @property
    def module_ids(self) -> tuple[str, ...]:
        return tuple(m.id for m in self.modules)

    def factor(self, factor_id: str) -> Factor:
        try:
            return self.factors[factor_id]
        except KeyError:
            raise KeyError(f"unknown factor: {factor_id}") from None

    def measure(self, measure_id: str) -> Measure:
        try:
            return self.measures[measure_id]
        except KeyError:
            raise KeyError(f"unknown measure: {measure_id}") from None

    def polarity(self, aspect_id: str, factor_id: str) -> Polarity:
        """Polarity of the edge aspect <- factor (positive for sub-aspects)."""
        for imp in self.impacts_on.get(aspect_id, ()):
            if imp.source == factor_id:
                return imp.polarity
        return Polarity.POSITIVE


def _topological_modules(modules: Sequence[ModuleDef]) -> tuple[list[ModuleDef], list[Diagnostic]]:
    by_id = {m.id: m for m in modules}
    diags = []
    for m in modules:
        for r in m.requires:
            if r not in by_id:
                diags.append(_error("unknown-module", m.id, f"requires unknown module '{r}'"))
    order: list[ModuleDef] = []
    state: dict[str, int] = {}  # 1 visiting, 2 done

    def visit(mid, stack):
        st = state.get(mid)
        if st == 2:
            return
        if st == 1:
            cycle = stack[stack.index(mid):] + [mid]
            diags.append(_error("requires-cycle", mid, "requires cycle: " + " -> ".join(cycle)))
            return
        state[mid] = 1
        for r in by_id[mid].requires:
            if r in by_id:
                visit(r, stack + [mid])
        state[mid] = 2
        order.append(by_id[mid])

    for mid in sorted(by_id):
        visit(mid, [])
    return order, diags


def _requires_closure(modules: Sequence[ModuleDef]) -> dict[str, frozenset]:
    by_id = {m.id: m for m in modules}
    closure: dict[str, frozenset] = {}
    for m in modules:
        seen = {m.id}
        stack = list(m.requires)
        while stack:
            r = stack.pop()
            if r in seen or r not in by_id:
                continue
            seen.add(r)
            stack.extend(by_id[r].requires)
        closure[m.id] = frozenset(seen)
    return closure


def _module_references(m: ModuleDef):
    """Yield (declaring element, referenced id, expected element type)."""
    for e in m.entities:
        for r in e.is_a + e.part_of:
            yield e.id, r, "entity"
    for f in m.factors:
        yield f.id, f.entity, "entity"
        for r in f.refines:
            yield f.id, r, "factor"
    for imp in m.impacts:
        label = f"impact {imp.source}->{imp.target}"
        yield label, imp.source, "factor"
        yield label, imp.target, "factor"
    for ms in m.measures:
        for r in ms.factors:
            yield ms.id, r, "factor"
        if ms.normalized_by is not None:
            yield ms.id, ms.normalized_by, "measure"
        if ms.numerator is not None:
            yield ms.id, ms.numerator, "measure"
    for ins in m.instruments:
        yield ins.id, ins.measure, "measure"
    for ev in m.evaluations:
        label = f"evaluation {ev.factor}"
        yield label, ev.factor, "factor"
        for c in ev.children:
            yield label, c.ref, c.ref_kind.value


def resolve(modules: Sequence[ModuleDef]) -> QualityModel:
    """Merge modules into a resolved :class:`QualityModel`.

    Raises :class:`ModelError` carrying every resolution diagnostic
    (duplicate ids, dangling references, requires cycles, references to a
    module that is not (transitively) required).
    """
    if not modules:
        raise ModelError([_error("root-module", "", "no modules given")])
    diags: list[Diagnostic] = []

    seen_modules = set()
    for m in modules:
        if m.id in seen_modules:
            diags.append(_error("duplicate-id", m.id, "module declared twice"))
        seen_modules.add(m.id)
    if diags:
        raise ModelError(diags)

    roots = [m.id for m in modules if not m.requires]
    if len(roots) != 1:
        diags.append(_error("root-module", ",".join(sorted(roots)),
                            f"expected exactly one module without requires, found {len(roots)}"))

    order, topo_diags = _topological_modules(modules)
    diags.extend(topo_diags)
    closure = _requires_closure(modules)

    tables: dict[str, dict] = {"entity": {}, "factor": {}, "measure": {}, "instrument": {}}
    kind_of: dict[str, str] = {}
    evaluations: dict[str, Evaluation] = {}
    impacts: list[Impact] = []
    for m in order:
        for kind, elements in (("entity", m.entities), ("factor", m.factors),
                               ("measure", m.measures), ("instrument", m.instruments)):
            for el in elements:
                if module_of(el.id) != m.id or "." not in el.id:
                    diags.append(_error("bad-id", el.id, f"identifier must be qualified as '{m.id}.<name>'"))
                if el.id in kind_of:
                    diags.append(_error("duplicate-id", el.id, "identifier declared more than once"))
                    continue
                kind_of[el.id] = kind
                tables[kind][el.id] = el
        for ev in m.evaluations:
            if ev.factor in evaluations:
                diags.append(_error("duplicate-evaluation", ev.factor, "factor has more than one evaluation"))
                continue
            evaluations[ev.factor] = ev
        impacts.extend(m.impacts)

    for m in order:
        for owner, ref, expected in _module_references(m):
            actual = kind_of.get(ref)
            if actual is None:
                diags.append(_error("dangling-reference", owner, f"reference to unknown {expected} '{ref}'"))
            elif actual != expected:
                diags.append(_error("dangling-reference", owner, f"'{ref}' is a {actual}, expected a {expected}"))
            elif module_of(ref) not in closure.get(m.id, ()):
                diags.append(_error("missing-requires", owner,
                                    f"references '{ref}' but module '{m.id}' does not require '{module_of(ref)}'"))
    if diags:
        raise ModelError(diags)

    factors = tables["factor"]
    sub: dict[str, list[str]] = {fid: [] for fid in factors}
    for f in factors.values():
        for parent in f.refines:
            sub[parent].append(f.id)
    impacts_on: dict[str, list[Impact]] = {}
    for imp in impacts:
        impacts_on.setdefault(imp.target, []).append(imp)
    measures_of: dict[str, list[str]] = {fid: [] for fid in factors}
    for ms in tables["measure"].values():
        for fid in ms.factors:
            measures_of[fid].append(ms.id)
    instruments_of: dict[str, list[str]] = {mid: [] for mid in tables["measure"]}
    for ins in tables["instrument"].values():
        instruments_of[ins.measure].append(ins.id)

    def frozen(d):
        return MappingProxyType({k: tuple(sorted(v, key=lambda x: getattr(x, "source", x))) for k, v in sorted(d.items())})

    def proxy(d):
        return MappingProxyType(dict(sorted(d.items())))

    return QualityModel(
        modules=tuple(order),
        entities=proxy(tables["entity"]),
        factors=proxy(factors),
        measures=proxy(tables["measure"]),
        instruments=proxy(tables["instrument"]),
        evaluations=proxy(evaluations),
        impacts=tuple(sorted(impacts, key=lambda i: (i.source, i.target, i.polarity.value))),
        sub_factors=frozen(sub),
        impacts_on=frozen(impacts_on),
        measures_of=frozen(measures_of),
        instruments_of=frozen(instruments_of),
        closure=MappingProxyType(closure),
    )


def _find_cycles(nodes: Iterable[str], edges: Mapping[str, Sequence[str]]) -> list[list[str]]:
    """Return one representative cycle per strongly connected cycle found by DFS."""
    state: dict[str, int] = {}
    cycles = []

    def visit(n, stack):
        state[n] = 1
        stack.append(n)
        for m in edges.get(n, ()):
            st = state.get(m)
            if st == 1:
                cycles.append(stack[stack.index(m):] + [m])
            elif st is None:
                visit(m, stack)
        stack.pop()
        state[n] = 2

    for n in sorted(nodes):
        if n not in state:
            visit(n, [])
    return cycles


def validate(model: QualityModel) -> list[Diagnostic]:
    """Check a resolved model against the meta-model rules.

    Never raises; violations come back as diagnostics sorted by
    (severity, code, element).
    """
    diags: list[Diagnostic] = []
    F = model.factors

    # entities
    for name, attr in (("is-a", "is_a"), ("part-of", "part_of")):
        edges = {e.id: getattr(e, attr) for e in model.entities.values()}
        for cyc in _find_cycles(model.entities, edges):
            diags.append(_error("entity-cycle", cyc[0], f"{name} cycle: " + " -> ".join(cyc)))

    # factors
    for f in F.values():
        for parent in f.refines:
            if F[parent].kind is not f.kind:
                diags.append(_error("refinement-kind", f.id,
                                    f"{f.kind.value} refines {F[parent].kind.value} '{parent}'"))
        if f.is_aspect and model.entities[f.entity].part_of:
            diags.append(_error("aspect-entity", f.id,
                                f"quality aspect must describe the whole product, '{f.entity}' is part of another entity"))
    same_kind_edges = {f.id: [p for p in f.refines if F[p].kind is f.kind] for f in F.values()}
    for cyc in _find_cycles(F, same_kind_edges):
        diags.append(_error("refinement-cycle", cyc[0], "refinement cycle: " + " -> ".join(cyc)))

    # impacts
    seen_impacts = set()
    for imp in model.impacts:
        label = f"{imp.source}->{imp.target}"
        if F[imp.source].kind is not FactorKind.PRODUCT_FACTOR or F[imp.target].kind is not FactorKind.QUALITY_ASPECT:
            diags.append(_error("impact-direction", label,
                                "impacts must go from a product factor to a quality aspect"))
        if (imp.source, imp.target) in seen_impacts:
            diags.append(_error("duplicate-impact", label, "more than one impact between the same factors"))
        seen_impacts.add((imp.source, imp.target))

    # measures
    M = model.measures
    for ms in M.values():
        if ms.is_derived:
            if ms.normalized_by is None or ms.numerator is None:
                diags.append(_error("normalization", ms.id, "derived-ratio needs both numerator and normalizedBy"))
            else:
                if M[ms.normalized_by].type is not MeasureType.BASE_SIZE:
                    diags.append(_error("normalization", ms.id, f"normalizedBy '{ms.normalized_by}' is not a base-size measure"))
                if M[ms.numerator].is_derived:
                    diags.append(_error("normalization", ms.id, f"numerator '{ms.numerator}' is not a base measure"))
        elif ms.normalized_by is not None or ms.numerator is not None:
            diags.append(_error("normalization", ms.id, "only derived-ratio measures take numerator/normalizedBy"))
        for fid in ms.factors:
            if F[fid].kind is not FactorKind.PRODUCT_FACTOR:
                diags.append(_error("measure-on-aspect", ms.id, f"measures may only quantify product factors, not '{fid}'"))

    # instruments
    for ins in model.instruments.values():
        has_tool = ins.tool_name is not None and ins.rule_id is not None
        has_any = ins.tool_name is not None or ins.rule_id is not None
        if ins.kind is InstrumentKind.TOOL and not has_tool:
            diags.append(_error("instrument-fields", ins.id, "tool instruments need toolName and ruleId"))
        if ins.kind is InstrumentKind.MANUAL and has_any:
            diags.append(_error("instrument-fields", ins.id, "manual instruments take no toolName/ruleId"))

    # evaluations
    for ev in model.evaluations.values():
        diags.extend(_check_evaluation(model, ev))

    diags.extend(_unreferenced(model))
    return sorted(diags, key=lambda d: (d.severity, d.code, d.element, d.message))


def _check_evaluation(model: QualityModel, ev: Evaluation) -> list[Diagnostic]:
    out = []
    owner = model.factors[ev.factor]
    el = f"evaluation {ev.factor}"
    refs = [c.ref for c in ev.children]
    if len(set(refs)) != len(refs):
        out.append(_error("duplicate-child", el, "a child is listed more than once"))

    weights = [c.weight for c in ev.children]
    explicit = [w for w in weights if w is not None]
    if explicit and len(explicit) != len(weights):
        out.append(_error("weight-partial", el, "either all children carry weights or none"))
    elif explicit:
        if any(not (0.0 < w <= 1.0) for w in explicit):
            out.append(_error("weight-range", el, "weights must lie in (0, 1]"))
        total = math.fsum(explicit)
        if abs(total - 1.0) > WEIGHT_TOLERANCE:
            out.append(_error("weight-sum", el, f"weights sum to {total:.6g}, expected 1"))

    for c in ev.children:
        if c.ref_kind is RefKind.MEASURE:
            if owner.is_aspect:
                out.append(_error("measure-on-aspect", el, f"quality aspects cannot evaluate measure '{c.ref}'"))
            elif ev.factor not in model.measures[c.ref].factors:
                out.append(_error("measure-not-associated", el, f"measure '{c.ref}' is not associated with {ev.factor}"))
            uf = c.utility
            if uf is None:
                out.append(_error("utility-missing", el, f"measure child '{c.ref}' has no utility function"))
                continue
            if uf.min == uf.max:
                out.append(_error("utility-degenerate", el, f"utility for '{c.ref}' has min = max = {uf.min:g}"))
            elif uf.min > uf.max:
                out.append(_error("utility-order", el, f"utility for '{c.ref}' has min > max"))
            elif uf.is_jump and uf.direction is Direction.INCREASING:
                out.append(_error("jump-increasing", el, f"jump thresholds on '{c.ref}' require a decreasing function"))
        else:
            if c.utility is not None:
                out.append(_error("utility-unexpected", el, f"factor child '{c.ref}' cannot carry a utility function"))
            child = model.factors[c.ref]
            is_sub = ev.factor in child.refines and child.kind is owner.kind
            impacts = owner.is_aspect and any(i.source == c.ref for i in model.impacts_on.get(ev.factor, ()))
            if not (is_sub or impacts):
                out.append(_error("eval-child-unrelated", el,
                                  f"'{c.ref}' neither refines {ev.factor} nor impacts it"))
            if c.ref not in model.evaluations:
                out.append(_error("missing-evaluation", el, f"child factor '{c.ref}' has no evaluation"))

    if owner.kind is FactorKind.PRODUCT_FACTOR and not model.measures_of[ev.factor] and not model.sub_factors[ev.factor]:
        out.append(_warning("pf-unmeasured", ev.factor, "evaluated product factor has no measures and no sub-factors"))
    return out


def _unreferenced(model: QualityModel) -> list[Diagnostic]:
    touched: set[str] = set()
    for e in model.entities.values():
        if e.is_a or e.part_of:
            touched.add(e.id)
            touched.update(e.is_a, e.part_of)
    for f in model.factors.values():
        touched.add(f.entity)
        if f.refines:
            touched.add(f.id)
            touched.update(f.refines)
    for imp in model.impacts:
        touched.update((imp.source, imp.target))
    for ms in model.measures.values():
        linked = list(ms.factors) + [r for r in (ms.normalized_by, ms.numerator) if r]
        if linked:
            touched.add(ms.id)
            touched.update(linked)
    for ins in model.instruments.values():
        touched.update((ins.id, ins.measure))
    for ev in model.evaluations.values():
        touched.add(ev.factor)
        touched.update(c.ref for c in ev.children)

    out = []
    for table in (model.entities, model.factors, model.measures):
        for eid in table:
            if eid not in touched:
                out.append(_warning("unreferenced", eid, "element is not referenced by any other element"))
    return out


def trace(model: QualityModel, aspect: str) -> list[tuple[str, str, str]]:
    """Trace a quality aspect down to (product factor, measure, instrument).

    Follows sub-aspects, impacting product factors and their sub-factors,
    the measures associated with each product factor, and for derived
    measures the base measures they are computed from. Sorted by id.
    """
    top = model.factor(aspect)
    if not top.is_aspect:
        raise ValueError(f"{aspect} is not a quality aspect")

    aspects, stack = set(), [aspect]
    while stack:
        a = stack.pop()
        if a in aspects:
            continue
        aspects.add(a)
        stack.extend(s for s in model.sub_factors[a] if model.factors[s].is_aspect)

    products, stack = set(), [imp.source for a in aspects for imp in model.impacts_on.get(a, ())]
    while stack:
        p = stack.pop()
        if p in products:
            continue
        products.add(p)
        stack.extend(s for s in model.sub_factors[p] if not model.factors[s].is_aspect)

    out = set()
    for pf in products:
        pending = list(model.measures_of[pf])
        seen = set()
        while pending:
            mid = pending.pop()
            if mid in seen:
                continue
            seen.add(mid)
            ms = model.measures[mid]
            pending.extend(r for r in (ms.numerator, ms.normalized_by) if r)
            for ins in model.instruments_of[mid]:
                out.add((pf, mid, ins))
    return sorted(out)


def check(modules: Sequence[ModuleDef]) -> tuple[Optional[QualityModel], list[Diagnostic]]:
    """Resolve and validate in one step; the model is None if resolution failed."""
    try:
        model = resolve(modules)
    except ModelError as exc:
        return None, exc.diagnostics
    return model, validate(model)


def has_errors(diags: Iterable[Diagnostic]) -> bool:
    return any(d.severity == "error" for d in diags)
