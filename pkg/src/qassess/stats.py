"""Consistency statistics: tie-aware Spearman correlation and improvement."""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy import stats as sps

EXACT_MAX_N = 8


@dataclass(frozen=True)
class RankVector:
    labels: tuple[str, ...]
    ranks: tuple[float, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.ranks):
            raise ValueError("labels and ranks differ in length")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate labels")

    def __len__(self):
        return len(self.ranks)


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    p_one_sided: float
    n: int
    method: str  # "exact-permutation" | "t-approximation"


def average_ranks(scores: Sequence[float], direction: str = "ascending",
                  labels: Optional[Sequence[str]] = None) -> RankVector:
    """Rank scores so that the best gets 1; ties share the mean position.

    ``ascending`` treats the smallest score as best (grades, ranks);
    ``descending`` the largest (utilities).
    """
    if len(scores) == 0:
        raise ValueError("no scores to rank")
    xs = [float(s) for s in scores]
    if not all(math.isfinite(x) for x in xs):
        raise ValueError("scores must be finite")
    if direction == "descending":
        xs = [-x for x in xs]
    elif direction != "ascending":
        raise ValueError(f"direction must be 'ascending' or 'descending', got {direction!r}")
    if labels is None:
        labels = [str(i) for i in range(len(xs))]

    order = sorted(range(len(xs)), key=lambda i: xs[i])
    ranks = [0.0] * len(xs)
    start = 0
    while start < len(order):
        end = start
        while end + 1 < len(order) and xs[order[end + 1]] == xs[order[start]]:
            end += 1
        mean_pos = (start + end) / 2 + 1
        for k in range(start, end + 1):
            ranks[order[k]] = mean_pos
        start = end + 1
    return RankVector(tuple(labels), tuple(ranks))


def _pearson(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Pearson r of x against each row of y."""
    xc = x - x.mean()
    yc = y - y.mean(axis=-1, keepdims=True)
    return (yc @ xc) / np.sqrt((xc @ xc) * (yc * yc).sum(axis=-1))


def spearman(a: RankVector, b: RankVector) -> CorrelationResult:
    """Spearman r (Pearson on ranks) with a one-sided p for r > 0.

    The p-value is exact over all n! relabellings for n <= 8 and uses the
    t approximation with n - 2 degrees of freedom above that.
    """
    if len(a) != len(b):
        raise ValueError(f"rank vectors differ in length ({len(a)} vs {len(b)})")
    if set(a.labels) != set(b.labels):
        raise ValueError("rank vectors cover different items")
    pos = {lab: i for i, lab in enumerate(b.labels)}
    x = np.array(a.ranks, dtype=float)
    y = np.array([b.ranks[pos[lab]] for lab in a.labels], dtype=float)
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise ValueError("correlation undefined: a rank vector has zero variance")
    n = len(x)
    r = float(np.clip(_pearson(x, y[None, :])[0], -1.0, 1.0))

    if n <= EXACT_MAX_N:
        perms = np.array(list(itertools.permutations(y)), dtype=float)
        rs = _pearson(x, perms)
        p = float(np.count_nonzero(rs >= r - 1e-12)) / len(perms)
        method = "exact-permutation"
    else:
        if r >= 1.0:
            p = 0.0
        else:
            t = r * math.sqrt((n - 2) / (1.0 - r * r))
            p = float(sps.t.sf(t, n - 2))
        method = "t-approximation"
    return CorrelationResult(r, p, n, method)


def improvement_percent(old_grade: float, new_grade: float) -> float:
    """Relative grade improvement in percent; positive when the grade drops."""
    if not (math.isfinite(old_grade) and math.isfinite(new_grade)):
        raise ValueError("grades must be finite")
    if old_grade <= 0:
        raise ValueError("old grade must be positive")
    return 100.0 * (old_grade - new_grade) / old_grade


def strictly_decreasing(series: Sequence[float]) -> bool:
    return all(b < a for a, b in zip(series, series[1:]))


def read_correlation_csv(path, direction: str = "ascending") -> tuple[RankVector, RankVector]:
    """Read ``item,scoreA,scoreB`` (or ``item,rankA,rankB``) and rank both columns.

    Rank columns pass through :func:`average_ranks` too, which turns tied
    competition ranks (1, 2, 2, 4) into average ranks (1, 2.5, 2.5, 4).
    """
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise ValueError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if header not in (["item", "scoreA", "scoreB"], ["item", "rankA", "rankB"]):
        raise ValueError(f"{path}: header must be 'item,scoreA,scoreB' or 'item,rankA,rankB'")
    labels, xa, xb = [], [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise ValueError(f"{path}:{lineno}: expected 3 columns")
        try:
            xa.append(float(row[1]))
            xb.append(float(row[2]))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: non-numeric value") from None
        labels.append(row[0].strip())
    if header[1] == "rankA":
        direction = "ascending"
    return average_ranks(xa, direction, labels), average_ranks(xb, direction, labels)
