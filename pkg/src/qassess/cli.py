"""Command-line entry point.

Exit codes: 0 success, 1 validation errors, 2 I/O or parse failure,
3 internal invariant breach. Diagnostics go to stderr, data to stdout or
files.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import calibration, report, stats, weighting
from .assessment import (
    InvariantError,
    assess,
    read_bundle,
    read_manual_csv,
)
from .model import Direction, Evaluation, ModuleDef, QualityModel, check, has_errors
from .modelformat import ModelFormatError, canonical_json, load_modules, save_module

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("qassess")


class _Invalid(Exception):
    """Validation failed; diagnostics were already printed."""


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load(paths) -> tuple[list[ModuleDef], QualityModel]:
    modules = load_modules(paths)
    model, diags = check(modules)
    for d in diags:
        _err(str(d))
    if model is None or has_errors(diags):
        raise _Invalid()
    return modules, model


def _cmd_validate(args) -> int:
    modules = load_modules(args.models)
    model, diags = check(modules)
    for d in diags:
        _err(str(d))
    n_err = sum(d.severity == "error" for d in diags)
    print(f"{len(modules)} module(s), {n_err} error(s), {len(diags) - n_err} warning(s)")
    return EXIT_INVALID if n_err else EXIT_OK


def _rewrite_children(modules: Sequence[ModuleDef], update) -> list[ModuleDef]:
    """Apply ``update(evaluation) -> evaluation`` to every evaluation."""
    return [dataclasses.replace(m, evaluations=tuple(update(ev) for ev in m.evaluations)) for m in modules]


def _cmd_calibrate(args) -> int:
    modules, model = _load(args.models)
    try:
        samples = calibration.read_baseline_csv(args.baseline)
    except calibration.CalibrationError as exc:
        _err(f"error: {exc}")
        return EXIT_INVALID
    results = {}
    for s in samples:
        if s.measure_id not in model.measures:
            _err(f"error: baseline column '{s.measure_id}' is not a measure of the model")
            return EXIT_INVALID
        if model.measures[s.measure_id].is_derived and any(v < 0 for v in s.values):
            _err(f"error: ratio measure '{s.measure_id}' has negative baseline values")
            return EXIT_INVALID
        try:
            results[s.measure_id] = calibration.calibrate(s, args.iqr_basis)
        except calibration.CalibrationError as exc:
            _err(f"error: {exc}")
            return EXIT_INVALID

    failed = False

    def update(ev: Evaluation) -> Evaluation:
        nonlocal failed
        children = []
        for c in ev.children:
            cal = results.get(c.ref) if c.utility is not None else None
            if cal is not None:
                if cal.is_jump and c.utility.direction is Direction.INCREASING:
                    _err(f"error: [jump-increasing] {ev.factor}: {c.ref} calibrates to a jump "
                         "function but its utility is increasing")
                    failed = True
                c = dataclasses.replace(c, utility=dataclasses.replace(c.utility, min=cal.min, max=cal.max))
            children.append(c)
        return dataclasses.replace(ev, children=tuple(children))

    revised = _rewrite_children(modules, update)
    if failed:
        return EXIT_INVALID
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for m in revised:
        save_module(m, out)
    doc = calibration.calibration_report(results, args.iqr_basis)
    (out / "calibration-report.json").write_bytes(canonical_json(doc).encode("utf-8"))
    for row in doc["measures"]:
        print(f"{row['measureId']}\tmin={row['min']:.6g}\tmax={row['max']:.6g}\tq1={row['q1']:.6g}"
              f"\tq3={row['q3']:.6g}\tiqr={row['iqr']:.6g}\tnNonzero={row['nNonzero']}")
    return EXIT_OK


def _cmd_weigh(args) -> int:
    modules, model = _load(args.models)
    groups = weighting.read_ranking_csv(args.ranking)
    weights = {}
    for parent, ranking in sorted(groups.items()):
        ev = model.evaluations.get(parent)
        if ev is None:
            _err(f"error: ranking for '{parent}', which has no evaluation")
            return EXIT_INVALID
        if {c for c, _ in ranking} != {c.ref for c in ev.children}:
            _err(f"error: ranking for '{parent}' must rank exactly its evaluation children")
            return EXIT_INVALID
        try:
            weights[parent] = weighting.weights_from_ranking(ranking)
        except ValueError as exc:
            _err(f"error: {parent}: {exc}")
            return EXIT_INVALID

    def update(ev: Evaluation) -> Evaluation:
        w = weights.get(ev.factor)
        if w is None:
            return ev
        return dataclasses.replace(ev, children=tuple(dataclasses.replace(c, weight=w[c.ref]) for c in ev.children))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for m in _rewrite_children(modules, update):
        save_module(m, out)
    for parent, w in sorted(weights.items()):
        for child, value in sorted(w.items(), key=lambda kv: (-kv[1], kv[0])):
            print(f"{parent}\t{child}\t{value:.6f}")
    return EXIT_OK


def _cmd_assess(args) -> int:
    _, model = _load(args.models)
    manual = read_manual_csv(args.manual) if args.manual else None
    bundles = [read_bundle(p) for p in args.bundle]
    out = Path(args.out)
    for path, bundle in zip(args.bundle, bundles):
        if manual:
            bundle = bundle.merged(manual)
        known = set(model.instruments)
        for key in sorted(set(bundle.values) - known):
            log.warning("bundle value for unknown instrument %s ignored", key)
        result = assess(model, bundle)
        target = out if len(bundles) == 1 else out / Path(path).name.split(".")[0]
        target.mkdir(parents=True, exist_ok=True)
        (target / "report.json").write_bytes(report.to_json(result, args.timestamp).encode("utf-8"))
        (target / "report.html").write_bytes(report.to_html(result, args.timestamp).encode("utf-8"))
        for root in result.roots:
            n = result.nodes[root]
            print(f"{bundle.system_name} {bundle.system_version}\t{root}\tgrade {n.grade.discrete} "
                  f"({n.grade.continuous:.2f})\tutility [{n.utility.lo:.4f}, {n.utility.hi:.4f}]")
    return EXIT_OK


def _root_grade(doc: dict, factor: Optional[str], source: str) -> float:
    fid = factor
    if fid is None:
        if len(doc["roots"]) != 1:
            raise ValueError(f"{source}: report has {len(doc['roots'])} roots; pick one with --factor")
        fid = doc["roots"][0]
    if fid not in doc["factors"]:
        raise ValueError(f"{source}: factor {fid} not in report")
    return doc["factors"][fid]["grade"]["raw"]


def _cmd_compare(args) -> int:
    rows = []
    for d in args.reports:
        path = Path(d) / "report.json" if Path(d).is_dir() else Path(d)
        doc = json.loads(path.read_text(encoding="utf-8"))
        rows.append((doc["metadata"]["system"], doc["metadata"]["version"], _root_grade(doc, args.factor, str(path))))
    print("system\tversion\tgrade\tchangeVsPrevious%")
    prev = None
    for system, version, grade in rows:
        change = "" if prev is None else f"{stats.improvement_percent(prev, grade):.2f}"
        print(f"{system}\t{version}\t{grade:.2f}\t{change}")
        prev = grade
    versions = [v for _, v, _ in rows]
    if args.since and args.since not in versions:
        raise ValueError(f"--since {args.since}: no report with that version")
    start = versions.index(args.since) if args.since else 0
    first, last = rows[start], rows[-1]
    trend = "strictly decreasing" if stats.strictly_decreasing([g for *_, g in rows[start:]]) else "not monotone"
    print(f"improvement {first[1]} -> {last[1]}: {stats.improvement_percent(first[2], last[2]):.2f}% "
          f"(grades {trend} from {first[1]})")
    return EXIT_OK


def _cmd_rank_correlate(args) -> int:
    a, b = stats.read_correlation_csv(args.csv, args.direction)
    res = stats.spearman(a, b)
    print(f"r={res.r:.4f}\tp={res.p_one_sided:.4g}\tn={res.n}\tmethod={res.method}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qassess", description="Operationalised quality-model assessment.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="print model diagnostics")
    v.add_argument("models", nargs="+", help="module files or directories")
    v.set_defaults(func=_cmd_validate)

    c = sub.add_parser("calibrate", help="derive utility thresholds from baseline systems")
    c.add_argument("models", nargs="+")
    c.add_argument("--baseline", required=True, help="CSV: system,<measureId>,...")
    c.add_argument("--out", required=True, help="directory for the revised model and report")
    c.add_argument("--iqr-basis", choices=["nonzero", "all"], default="nonzero")
    c.set_defaults(func=_cmd_calibrate)

    w = sub.add_parser("weigh", help="inject rank-order centroid weights")
    w.add_argument("models", nargs="+")
    w.add_argument("--ranking", required=True, help="CSV: parentId,childId,rank")
    w.add_argument("--out", default="weighted", help="directory for the revised model")
    w.set_defaults(func=_cmd_weigh)

    a = sub.add_parser("assess", help="assess measurement bundles and write reports")
    a.add_argument("models", nargs="+")
    a.add_argument("--bundle", required=True, action="append", help="bundle JSON (repeatable)")
    a.add_argument("--manual", help="CSV: instrumentId,value (overrides bundle values)")
    a.add_argument("--out", required=True)
    a.add_argument("--timestamp", help="fixed report timestamp (default: now, UTC)")
    a.set_defaults(func=_cmd_assess)

    cmp_ = sub.add_parser("compare", help="grade table and improvement across reports")
    cmp_.add_argument("--reports", nargs="+", required=True, help="report directories in version order")
    cmp_.add_argument("--factor", help="factor to compare (default: the single root)")
    cmp_.add_argument("--since", help="version from which the improvement is measured")
    cmp_.set_defaults(func=_cmd_compare)

    r = sub.add_parser("rank-correlate", help="Spearman r and one-sided p")
    r.add_argument("csv", help="CSV: item,scoreA,scoreB or item,rankA,rankB")
    r.add_argument("--direction", choices=["ascending", "descending"], default="ascending",
                   help="score order that counts as best-first (default: smaller is better)")
    r.set_defaults(func=_cmd_rank_correlate)
    return p


_INPUT_ARGS = ("models", "baseline", "ranking", "bundle", "manual", "reports", "csv")


def _missing_inputs(args) -> list[str]:
    missing = []
    for name in _INPUT_ARGS:
        value = getattr(args, name, None)
        if value is None:
            continue
        for p in value if isinstance(value, list) else [value]:
            if not Path(p).exists():
                missing.append(p)
    return missing


def run(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s", stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_IO
    missing = _missing_inputs(args)
    if missing:
        for p in missing:
            _err(f"error: no such file or directory: {p}")
        return EXIT_IO
    try:
        return args.func(args)
    except _Invalid:
        return EXIT_INVALID
    except ModelFormatError as exc:
        _err(str(exc.diagnostic))
        return EXIT_IO
    except (InvariantError, AssertionError) as exc:
        _err(f"internal error: {exc}")
        return EXIT_INTERNAL
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        _err(f"error: {exc}")
        return EXIT_IO


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
