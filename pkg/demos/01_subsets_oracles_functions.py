"""Tour of the core currency: bitmask subsets, counted value oracles, and the
exact function zoo.

Run:
    python demos/01_subsets_oracles_functions.py
"""

import json

from approxsub import (
    AdditiveFunction,
    BudgetAdditiveFunction,
    CoverageFunction,
    GroundSet,
    Subset,
    as_oracle,
    curvature,
    instance_from_dict,
    instance_to_dict,
    marginal,
    query,
    subset_encode,
)

print("=" * 70)
print("Subsets are canonical bitmasks over a dense ground set")
print("=" * 70)

ground = GroundSet(8)
s = subset_encode([5, 0, 3, 5], ground)  # duplicates collapse, order ignored
t = subset_encode([3, 4], ground)
print(f"s = {s.elements()}  (size {s.size}, mask {s.mask:#010b})")
print(f"t = {t.elements()}")
print(f"s | t = {s.union(t).elements()},  s & t = {s.intersection(t).elements()}")
print(f"complement of s = {s.complement().elements()}")

print()
print("=" * 70)
print("Value oracles count every query")
print("=" * 70)

f = AdditiveFunction([1, 2, 3, 4, 5, 6, 7, 8])
oracle = as_oracle(f)
print(f"f(s) = {query(oracle, s)}   (queries so far: {oracle.query_count})")
print(f"f(s) = {query(oracle, s)}   (same set, same value, queries: {oracle.query_count})")
print(f"f(empty) = {query(oracle, Subset.empty(8))}  -- normalized")

print()
print("=" * 70)
print("The exact zoo: additive, budget-additive, coverage, concave")
print("=" * 70)

budgeted = BudgetAdditiveFunction([1, 1, 1, 1], budget=2.5)
big = subset_encode([0, 1, 2], 4)
print(f"budget-additive caps at the budget: value = {budgeted.value(big)}")

cover = CoverageFunction(3, [[0, 1], [1, 2]])
both = subset_encode([0, 1], 2)
print(f"coverage of both sets = {cover.value(both)} (the whole universe)")
print(f"marginal of adding the second set to the first = "
      f"{marginal(cover, subset_encode([0], 2), 1)}")

print()
print("Curvature: how much the last marginal can shrink relative to the first")
print(f"  additive  -> c = {curvature(AdditiveFunction([3, 1, 4]))}")
print(f"  coverage ([0,1],[1,2]) -> c = {curvature(cover)}")
print(f"  identical covers -> c = {curvature(CoverageFunction(2, [[0, 1]] * 3))}")

print()
print("=" * 70)
print("Instances serialize to tagged JSON and round-trip losslessly")
print("=" * 70)

doc = instance_to_dict(cover)
print(json.dumps(doc))
back = instance_from_dict(doc)
assert all(back.value(Subset(2, m)) == cover.value(Subset(2, m)) for m in range(4))
print("round trip ok")
