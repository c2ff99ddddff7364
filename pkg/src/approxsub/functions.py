"""Exact set-function zoo: additive, budget-additive, coverage,
concave-of-cardinality, and sums thereof, plus exact curvature.

Values stay in whatever number type the construction uses (int, Fraction,
float), so integral and rational instances evaluate exactly.
"""

from __future__ import annotations

from fractions import Fraction

from .sets import Subset, iter_bits


class FunctionInstance:
    """Base for exact evaluable set functions over {0..n-1}."""

    kind = "abstract"
    n: int

    def value(self, s: Subset):
        raise NotImplementedError

    def _check_ground(self, s: Subset):
        if s.n != self.n:
            raise ValueError(f"ground set mismatch: instance n={self.n}, subset n={s.n}")


class AdditiveFunction(FunctionInstance):
    """value(S) = sum of per-element weights over S."""

    kind = "additive"

    def __init__(self, weights):
        self.weights = list(weights)
        self.n = len(self.weights)
        if self.n < 1:
            raise ValueError("need at least one element")

    def value(self, s: Subset):
        self._check_ground(s)
        w = self.weights
        total = 0
        for e in iter_bits(s.mask):
            total += w[e]
        return total


class BudgetAdditiveFunction(FunctionInstance):
    """value(S) = min(sum of weights over S, budget)."""

    kind = "budget_additive"

    def __init__(self, weights, budget):
        self.weights = list(weights)
        self.n = len(self.weights)
        if self.n < 1:
            raise ValueError("need at least one element")
        if budget < 0:
            raise ValueError(f"budget must be nonnegative, got {budget}")
        self.budget = budget

    def value(self, s: Subset):
        self._check_ground(s)
        w = self.weights
        total = 0
        for e in iter_bits(s.mask):
            total += w[e]
        return min(total, self.budget)


class CoverageFunction(FunctionInstance):
    """value(S) = size of the union of the universe sets covered by S.

    The universe is a dense integer range; per-element covers are stored as
    bitmasks so evaluation is OR + popcount.
    """

    kind = "coverage"

    def __init__(self, universe_size: int, covers):
        if universe_size < 0:
            raise ValueError("universe size must be nonnegative")
        self.universe_size = universe_size
        self.covers = []
        for c in covers:
            if isinstance(c, int):
                mask = c
            else:
                mask = 0
                for u in c:
                    if not 0 <= u < universe_size:
                        raise ValueError(f"universe element {u} out of range")
                    mask |= 1 << u
            if mask < 0 or (universe_size < mask.bit_length()):
                raise ValueError("cover extends past the universe")
            self.covers.append(mask)
        self.n = len(self.covers)
        if self.n < 1:
            raise ValueError("need at least one element")

    def value(self, s: Subset) -> int:
        self._check_ground(s)
        covered = 0
        for e in iter_bits(s.mask):
            covered |= self.covers[e]
        return covered.bit_count()


class ConcaveCardinalityFunction(FunctionInstance):
    """value(S) = G(|S|) for a tabulated nondecreasing concave G on {0..n}.

    The table is validated at construction: entries nondecreasing and the
    forward differences nonincreasing (discrete concavity).
    """

    kind = "concave_cardinality"

    def __init__(self, table):
        self.table = list(table)
        if len(self.table) < 2:
            raise ValueError("table needs entries for sizes 0..n with n >= 1")
        self.n = len(self.table) - 1
        for i in range(self.n):
            if self.table[i + 1] < self.table[i]:
                raise ValueError(f"table decreases between sizes {i} and {i + 1}")
        for i in range(self.n - 1):
            d0 = self.table[i + 1] - self.table[i]
            d1 = self.table[i + 2] - self.table[i + 1]
            if d1 > d0:
                raise ValueError(f"table is not concave at size {i + 1}")

    def value(self, s: Subset):
        self._check_ground(s)
        return self.table[s.size]


class SumFunction(FunctionInstance):
    """Pointwise sum of function instances over a common ground set."""

    kind = "sum"

    def __init__(self, terms):
        self.terms = list(terms)
        if not self.terms:
            raise ValueError("sum needs at least one term")
        self.n = self.terms[0].n
        for t in self.terms:
            if t.n != self.n:
                raise ValueError("sum terms disagree on ground set size")

    def value(self, s: Subset):
        self._check_ground(s)
        total = 0
        for t in self.terms:
            total += t.value(s)
        return total


def evaluate_instance(inst: FunctionInstance, s: Subset):
    """Evaluate an instance at a subset (exact per the instance's formula)."""
    return inst.value(s)


def marginal(inst: FunctionInstance, s: Subset, a: int):
    """Marginal value of adding element ``a`` to ``s``; requires a not in s."""
    if s.contains(a):
        raise ValueError(f"element {a} already in the set")
    return inst.value(s.add(a)) - inst.value(s)


def curvature(inst: FunctionInstance):
    """Exact curvature: 1 - min over elements of (last marginal / singleton value).

    Computed from 2n + 1 evaluations; raises if some singleton has value 0,
    in which case the ratio is undefined.
    """
    n = inst.n
    full = Subset.full(n)
    f_full = inst.value(full)
    worst = None
    for a in range(n):
        single = inst.value(Subset._raw(n, 1 << a, 1))
        if single == 0:
            raise ValueError(f"singleton {{{a}}} has value 0; curvature undefined")
        last = f_full - inst.value(full.remove(a))
        ratio = Fraction(last, single) if _is_rational(last) and _is_rational(single) \
            else last / single
        if worst is None or ratio < worst:
            worst = ratio
    return 1 - worst


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


# ---------------------------------------------------------------------------
# Serialization: JSON-compatible dicts with a "kind" tag.  Integer weights
# round-trip losslessly; Fractions are encoded as {"num": p, "den": q}.
# ---------------------------------------------------------------------------

def _num_to_obj(x):
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    if isinstance(x, (int, float)):
        return x
    raise TypeError(f"cannot serialize value of type {type(x).__name__}")


def _num_from_obj(o):
    if isinstance(o, dict):
        return Fraction(o["num"], o["den"])
    return o


def instance_to_dict(inst: FunctionInstance) -> dict:
    if isinstance(inst, AdditiveFunction):
        return {"kind": inst.kind, "weights": [_num_to_obj(w) for w in inst.weights]}
    if isinstance(inst, BudgetAdditiveFunction):
        return {
            "kind": inst.kind,
            "weights": [_num_to_obj(w) for w in inst.weights],
            "budget": _num_to_obj(inst.budget),
        }
    if isinstance(inst, CoverageFunction):
        return {
            "kind": inst.kind,
            "universe_size": inst.universe_size,
            "covers": [sorted(iter_bits(c)) for c in inst.covers],
        }
    if isinstance(inst, ConcaveCardinalityFunction):
        return {"kind": inst.kind, "table": [_num_to_obj(v) for v in inst.table]}
    if isinstance(inst, SumFunction):
        return {"kind": inst.kind, "terms": [instance_to_dict(t) for t in inst.terms]}
    raise TypeError(f"cannot serialize instance of kind {inst.kind!r}")


def instance_from_dict(d: dict) -> FunctionInstance:
    kind = d.get("kind")
    if kind == "additive":
        return AdditiveFunction([_num_from_obj(w) for w in d["weights"]])
    if kind == "budget_additive":
        return BudgetAdditiveFunction(
            [_num_from_obj(w) for w in d["weights"]], _num_from_obj(d["budget"])
        )
    if kind == "coverage":
        return CoverageFunction(d["universe_size"], d["covers"])
    if kind == "concave_cardinality":
        return ConcaveCardinalityFunction([_num_from_obj(v) for v in d["table"]])
    if kind == "sum":
        return SumFunction([instance_from_dict(t) for t in d["terms"]])
    raise ValueError(f"unknown instance kind {kind!r}")
