"""Maximization algorithms over counted value oracles, their worst-case ratio
formulas, and a brute-force reference solver.

All solvers are deterministic: ties in every argmax break toward the smallest
element id, and brute force breaks toward the smallest canonical mask.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .matroids import Matroid
from .sets import Subset, ValueOracle, as_oracle


@dataclass
class SolveResult:
    """Outcome of one solver run.

    ``trace`` lists (element added, oracle query count right after that
    selection) for incremental solvers; brute force leaves it empty.
    """

    chosen: Subset
    value: object
    trace: list[tuple[int, int]] = field(default_factory=list)
    queries_used: int = 0


@dataclass
class BoundReport:
    """Worst-case approximation ratio from a closed-form guarantee."""

    kind: str
    ratio: float
    k: int | None = None
    epsilon: float | None = None
    c: float | None = None


def greedy_cardinality(F: ValueOracle, n: int, k: int) -> SolveResult:
    """Plain greedy under a cardinality budget: k rounds, each adding the
    element maximizing the queried value of the augmented set.

    Exactly k elements are selected (monotone oracles never lose by filling
    the budget); queries_used = sum over rounds of the remaining pool size.
    """
    if n != F.n:
        raise ValueError(f"ground set mismatch: oracle n={F.n}, n={n}")
    if k > n:
        raise ValueError(f"budget k={k} exceeds n={n}")
    start = F.query_count
    chosen = Subset.empty(n)
    trace: list[tuple[int, int]] = []
    best_value = 0
    for _ in range(k):
        best = None
        best_val = None
        for a in range(n):
            if chosen.contains(a):
                continue
            v = F.query(chosen.add(a))
            if best_val is None or v > best_val:
                best, best_val = a, v
        chosen = chosen.add(best)
        best_value = best_val
        trace.append((best, F.query_count - start))
    return SolveResult(chosen, best_value, trace, F.query_count - start)


def greedy_matroid(F: ValueOracle, matroid: Matroid) -> SolveResult:
    """Matroid greedy: repeatedly query the augmented value of every element
    still in the pool, take the argmax, keep it only if independence is
    preserved, and drop it from the pool either way.  Returns a basis."""
    n = F.n
    if matroid.n != n:
        raise ValueError(f"ground set mismatch: oracle n={n}, matroid n={matroid.n}")
    start = F.query_count
    chosen = Subset.empty(n)
    pool = list(range(n))
    trace: list[tuple[int, int]] = []
    current = 0
    while pool:
        best_i = 0
        best_val = None
        for i, x in enumerate(pool):
            v = F.query(chosen.add(x))
            if best_val is None or v > best_val:
                best_i, best_val = i, v
        x = pool.pop(best_i)
        candidate = chosen.add(x)
        if matroid.is_independent(candidate):
            chosen = candidate
            current = best_val
            trace.append((x, F.query_count - start))
    return SolveResult(chosen, current, trace, F.query_count - start)


def curvature_topk(F: ValueOracle, n: int, k: int) -> SolveResult:
    """Additive-surrogate solver: query the n singletons, keep the k largest
    (ties toward smaller ids), and issue one final query for the chosen set.

    Queries exactly n + 1 times.
    """
    if n != F.n:
        raise ValueError(f"ground set mismatch: oracle n={F.n}, n={n}")
    if k > n:
        raise ValueError(f"budget k={k} exceeds n={n}")
    start = F.query_count
    singles = [F.query(Subset._raw(n, 1 << a, 1)) for a in range(n)]
    order = sorted(range(n), key=lambda a: (_neg(singles[a]), a))
    chosen = Subset.from_elements(order[:k], n)
    val = F.query(chosen)
    trace = [(a, F.query_count - start) for a in sorted(order[:k])]
    return SolveResult(chosen, val, trace, F.query_count - start)


class _neg:
    # Sort helper that works for Fraction/float/int mixtures without
    # converting exact values to floats.
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return self.v > other.v

    def __eq__(self, other):
        return self.v == other.v


def brute_force(F, n: int, constraint) -> SolveResult:
    """Exact maximizer by full enumeration; the reference oracle for every
    ratio claim.

    ``constraint`` is either an integer budget k or a matroid.  Ties break
    toward the smallest mask.  Guarded at n <= 24.
    """
    if n > 24:
        raise ValueError(f"brute force guarded at n <= 24, got {n}")
    oracle = as_oracle(F)
    if oracle.n != n:
        raise ValueError(f"ground set mismatch: oracle n={oracle.n}, n={n}")
    if isinstance(constraint, Matroid):
        feasible = constraint.is_independent
    else:
        k = int(constraint)

        def feasible(s: Subset) -> bool:
            return s.size <= k

    start = oracle.query_count
    best = None
    best_val = None
    for mask in range(1 << n):
        s = Subset._raw(n, mask, mask.bit_count())
        if not feasible(s):
            continue
        v = oracle.query(s)
        if best_val is None or v > best_val:
            best, best_val = s, v
    return SolveResult(best, best_val, [], oracle.query_count - start)


def greedy_bound(k: int, epsilon: float) -> BoundReport:
    """Worst-case ratio of greedy under a cardinality budget at error level
    epsilon: 1/(1 + 4 k e/(1-e)^2) * (1 - ((1-e)/(1+e))^(2k) (1 - 1/k)^k)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 0 <= epsilon < 1:
        raise ValueError(f"epsilon must be in [0, 1), got {epsilon}")
    r = (1 - epsilon) / (1 + epsilon)
    ratio = (
        1.0
        / (1.0 + 4.0 * k * epsilon / (1.0 - epsilon) ** 2)
        * (1.0 - r ** (2 * k) * (1.0 - 1.0 / k) ** k)
    )
    return BoundReport(kind="greedy-cardinality", ratio=ratio, k=k, epsilon=epsilon)


def matroid_bound(k: int, epsilon: float) -> BoundReport:
    """Worst-case ratio of matroid greedy at error level epsilon, measured
    against the representative's optimum over independent sets:
    (1/2) ((1-e)/(1+e)) / (1 + k e/(1-e))."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 0 <= epsilon < 1:
        raise ValueError(f"epsilon must be in [0, 1), got {epsilon}")
    ratio = 0.5 * (1 - epsilon) / (1 + epsilon) / (1.0 + k * epsilon / (1.0 - epsilon))
    return BoundReport(kind="greedy-matroid", ratio=ratio, k=k, epsilon=epsilon)


def curvature_bound(c: float, epsilon: float) -> BoundReport:
    """Worst-case ratio of the singleton-surrogate solver for a representative
    with curvature c: (1 - c) ((1-e)/(1+e))^2."""
    if not 0 <= c <= 1:
        raise ValueError(f"curvature must be in [0, 1], got {c}")
    if not 0 <= epsilon < 1:
        raise ValueError(f"epsilon must be in [0, 1), got {epsilon}")
    ratio = (1.0 - c) * ((1.0 - epsilon) / (1.0 + epsilon)) ** 2
    return BoundReport(kind="curvature", ratio=ratio, c=c, epsilon=epsilon)


def expected_greedy_queries(n: int, k: int) -> int:
    """Query count of greedy_cardinality: sum_{i=0}^{k-1} (n - i)."""
    return k * n - (k * (k - 1)) // 2


def additive_surrogate(F, n: int):
    """Tabulated singleton values F({e}); the additive surrogate evaluates a
    set as the sum of these."""
    oracle = as_oracle(F)
    return [oracle.value(Subset._raw(n, 1 << a, 1)) for a in range(n)]
