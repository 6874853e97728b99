"""Rank-Order Centroid weights from importance rankings."""

from __future__ import annotations

import csv
import math
from collections import Counter, defaultdict
from pathlib import Path
from typing import Sequence

Ranking = Sequence[tuple[str, int]]


def roc_weights(n: int) -> list[float]:
    """ROC weights for ranks 1..n: w_k = (1/n) * sum_{i=k..n} 1/i."""
    if n < 1:
        raise ValueError("need at least one element to weigh")
    weights = []
    tail = 0.0
    for i in range(n, 0, -1):
        tail += 1.0 / i
        weights.append(tail / n)
    return weights[::-1]


def check_ranking(ranking: Ranking) -> None:
    """Raise ValueError unless ranks follow competition ranking (1, 2, 2, 4, ...)."""
    if not ranking:
        raise ValueError("empty ranking")
    ids = [item for item, _ in ranking]
    if len(set(ids)) != len(ids):
        raise ValueError("ranking lists an element twice")
    counts = Counter(rank for _, rank in ranking)
    below = 0
    for rank in sorted(counts):
        if isinstance(rank, bool) or not isinstance(rank, int) or rank != below + 1:
            raise ValueError(f"malformed ranks {sorted(r for _, r in ranking)}: expected competition ranking")
        below += counts[rank]


def weights_from_ranking(ranking: Ranking) -> dict[str, float]:
    """Map each element to its ROC weight; tied elements share the mean of their positions."""
    check_ranking(ranking)
    roc = roc_weights(len(ranking))
    counts = Counter(rank for _, rank in ranking)
    # rank r with k ties spans positions r..r+k-1
    share = {r: math.fsum(roc[r - 1:r - 1 + k]) / k for r, k in counts.items()}
    return {item: share[rank] for item, rank in ranking}


def read_ranking_csv(path) -> dict[str, list[tuple[str, int]]]:
    """Read ``parentId,childId,rank`` rows, grouped by parent."""
    groups: dict[str, list[tuple[str, int]]] = defaultdict(list)
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["parentId", "childId", "rank"]:
            raise ValueError(f"{path}: header must be 'parentId,childId,rank'")
        for lineno, row in enumerate(reader, start=2):
            try:
                rank = int(row["rank"])
            except (TypeError, ValueError):
                raise ValueError(f"{path}:{lineno}: rank {row['rank']!r} is not an integer") from None
            groups[row["parentId"].strip()].append((row["childId"].strip(), rank))
    return dict(groups)
