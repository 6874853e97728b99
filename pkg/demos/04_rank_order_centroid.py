"""
Weights from importance rankings
================================

Experts rather rank than weigh. Rank-Order Centroid turns a ranking into
weights; tied elements share the mean weight of the positions they occupy.
"""

from qassess.weighting import roc_weights, weights_from_ranking

for n in (1, 2, 3, 4, 6):
    print(n, [round(w, 4) for w in roc_weights(n)])

print(weights_from_ranking([("Maintainability", 1), ("FunctionalSuitability", 2), ("Reliability", 3)]))
print(weights_from_ranking([("Maintainability", 1), ("FunctionalSuitability", 2), ("Reliability", 2)]))

try:
    weights_from_ranking([("a", 1), ("b", 3)])
except ValueError as exc:
    print("rejected:", exc)
