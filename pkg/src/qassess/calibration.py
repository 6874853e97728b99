"""Threshold calibration for utility functions from baseline systems.

Given one normalized value per baseline system, thresholds are the
smallest and largest non-outlier values, with outliers fenced at
1.5 IQR beyond the quartiles of the nonzero values. Measures that are
nonzero for fewer than five systems get a jump function at zero instead.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

from .model import JUMP_MAX, JUMP_MIN

MIN_SYSTEMS = 10
MIN_NONZERO = 5
FENCE = 1.5


class CalibrationError(ValueError):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(f"[{code}] {message}")


@dataclass(frozen=True)
class CalibrationSample:
    measure_id: str
    values: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if len(values) < MIN_SYSTEMS:
            raise CalibrationError("too-few-systems",
                                   f"{self.measure_id}: {len(values)} baseline systems, need at least {MIN_SYSTEMS}")
        if not all(math.isfinite(v) for v in values):
            raise CalibrationError("non-finite", f"{self.measure_id}: baseline values must be finite")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class DescriptiveStats:
    q1: float
    q3: float
    iqr: float
    n_nonzero: int
    min_value: float
    max_value: float
    n: int


class Calibration(NamedTuple):
    min: float
    max: float
    stats: DescriptiveStats

    @property
    def is_jump(self) -> bool:
        return self.min == JUMP_MIN and self.max == JUMP_MAX


def quartile(values: Sequence[float], p: float) -> float:
    """Percentile ``p`` by linear interpolation at position (n - 1) * p."""
    if not values:
        raise ValueError("quartile of an empty sequence")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    xs = sorted(values)
    pos = (len(xs) - 1) * p
    lo = math.floor(pos)
    hi = min(lo + 1, len(xs) - 1)
    frac = pos - lo
    return xs[lo] + frac * (xs[hi] - xs[lo])


def calibrate(sample: CalibrationSample, iqr_basis: str = "nonzero") -> Calibration:
    """Derive (min, max) thresholds plus review statistics for one measure.

    ``iqr_basis`` selects the value set the inter-quartile range is taken
    over: ``"nonzero"`` (default, same set as the quartiles) or ``"all"``.
    """
    values = sample.values
    nonzero = [v for v in values if v != 0]
    n_positive = sum(1 for v in values if v > 0)

    if nonzero:
        q1, q3 = quartile(nonzero, 0.25), quartile(nonzero, 0.75)
    else:
        q1 = q3 = 0.0
    if iqr_basis == "nonzero":
        iqr = q3 - q1
    elif iqr_basis == "all":
        iqr = quartile(values, 0.75) - quartile(values, 0.25)
    else:
        raise ValueError(f"iqr_basis must be 'nonzero' or 'all', got {iqr_basis!r}")
    stats = DescriptiveStats(q1, q3, iqr, n_positive, min(values), max(values), len(values))

    if n_positive < MIN_NONZERO:
        return Calibration(JUMP_MIN, JUMP_MAX, stats)

    upper = q3 + FENCE * iqr
    lower = q1 - FENCE * iqr
    hi = max(v for v in values if v <= upper)
    lo = min(v for v in values if v >= lower)
    if lo == hi:
        raise CalibrationError("degenerate-thresholds", f"{sample.measure_id}: min = max = {lo:g}")
    return Calibration(lo, hi, stats)


def read_baseline_csv(path) -> list[CalibrationSample]:
    """Read ``system,<measureId>,...`` rows; empty cells are skipped."""
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0].strip() != "system" or len(header) < 2:
            raise ValueError(f"{path}: header must be 'system,<measureId>,...'")
        columns: dict[str, list[float]] = {h.strip(): [] for h in header[1:]}
        names = [h.strip() for h in header[1:]]
        for lineno, row in enumerate(reader, start=2):
            if not row or not any(cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise ValueError(f"{path}:{lineno}: expected {len(header)} columns, got {len(row)}")
            for name, cell in zip(names, row[1:]):
                cell = cell.strip()
                if cell:
                    try:
                        columns[name].append(float(cell))
                    except ValueError:
                        raise ValueError(f"{path}:{lineno}: {cell!r} is not a number") from None
    return [CalibrationSample(name, tuple(vals)) for name, vals in columns.items()]


def calibration_report(results: dict[str, Calibration], iqr_basis: str = "nonzero") -> dict:
    """Reviewer-facing summary, one entry per measure."""
    return {
        "iqrBasis": iqr_basis,
        "measures": [
            {
                "measureId": mid,
                "min": c.min,
                "max": c.max,
                "jump": c.is_jump,
                "q1": c.stats.q1,
                "q3": c.stats.q3,
                "iqr": c.stats.iqr,
                "nNonzero": c.stats.n_nonzero,
                "n": c.stats.n,
                "minValue": c.stats.min_value,
                "maxValue": c.stats.max_value,
            }
            for mid, c in sorted(results.items())
        ],
    }
