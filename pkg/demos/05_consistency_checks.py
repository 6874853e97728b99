"""
Checking model results against expert opinion
=============================================

Spearman's r compares the model's ranking of systems with an expert ranking.
For small n the one-sided p-value is exact (all n! pairings).
"""

from qassess.stats import average_ranks, improvement_percent, spearman, strictly_decreasing

systems = ["A", "B", "C", "D", "E"]
model_grades = [1.87, 3.14, 3.36, 4.02, 5.47]
discrete = [int(g) for g in model_grades]  # 1, 3, 3, 4, 5: B and C tie
expert = average_ranks([1, 3, 2, 4, 5], labels=systems)
model = average_ranks(discrete, labels=systems)
print("model ranks:", model.ranks)
res = spearman(model, expert)
print(f"r={res.r:.3f}  p={res.p_one_sided:.4f}  ({res.method})")

# grades as an ordered quality signal across releases
releases = [("1.9.0", 4.15), ("2.0.0", 3.34), ("2.0.1", 3.63), ("2.0.2", 3.42), ("2.1.0", 3.27), ("2.2.1", 3.17)]
for (v0, g0), (v1, g1) in zip(releases, releases[1:]):
    print(f"{v0} -> {v1}: {improvement_percent(g0, g1):+.2f}%")
print("2.0.1 -> 2.2.1:", f"{improvement_percent(3.63, 3.17):.2f}%",
      "decreasing" if strictly_decreasing([g for _, g in releases[2:]]) else "not monotone")

# larger samples fall back to the t approximation
a = [float(i) for i in range(12)]
b = [0, 2, 1, 3, 5, 4, 6, 9, 7, 8, 11, 10]
print(spearman(average_ranks(a), average_ranks(b)))
