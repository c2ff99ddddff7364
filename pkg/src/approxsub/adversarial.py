"""Adversarial instance generators.

Three families:

* a monotone hard pair (planted function and its cardinality-only decoy)
  whose maxima are separated by a provable gap while the two functions agree
  on most query paths;
* a coverage-realizable variant of the same pair;
* a greedy trap built from an additive function with a deflation override on
  a thin family of sets.

All constructions evaluate exactly (int/Fraction arithmetic).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .functions import (
    AdditiveFunction,
    BudgetAdditiveFunction,
    ConcaveCardinalityFunction,
    FunctionInstance,
    SumFunction,
)
from .sets import Subset


@dataclass(frozen=True)
class HardPairParams:
    """Parameters of a planted hard pair.

    Requires alpha <= k <= h <= n/2 and epsilon in (0, 1); the first chain is
    what makes the gap inequality between the pair's maxima valid, the second
    is what the concentration argument needs.
    """

    n: int
    h: int
    alpha: int
    k: int
    epsilon: float
    beta: float | None = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be at least 2, got {self.n}")
        if not 1 <= self.alpha <= self.k:
            raise ValueError(f"need 1 <= alpha <= k, got alpha={self.alpha}, k={self.k}")
        if not self.k <= self.h:
            raise ValueError(f"need k <= h, got k={self.k}, h={self.h}")
        if 2 * self.h > self.n:
            raise ValueError(f"need h <= n/2, got h={self.h}, n={self.n}")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")

    @property
    def cap(self) -> Fraction:
        """Budget alpha * (1 - h/n) shared by both pair constructions."""
        return Fraction(self.alpha * (self.n - self.h), self.n)


def _ceil_power(n: int, exponent: float) -> int:
    """ceil(n ** exponent), snapping float dust at near-integers."""
    v = n ** exponent
    r = round(v)
    if abs(v - r) < 1e-9 * max(1.0, abs(r)):
        return int(r)
    return math.ceil(v)


def power_law_params(n: int, beta: float) -> HardPairParams:
    """Standard hard-regime scaling: h = k = ceil(n^(1-beta/2)),
    alpha = ceil(n^(1-beta)), epsilon = n^(beta-1/2).

    Requires 0 < beta < 1/2 and n large enough (roughly n >= 2^(2/beta))
    for the rounded values to satisfy the pair invariants.
    """
    if not 0 < beta < 0.5:
        raise ValueError(f"beta must be in (0, 1/2), got {beta}")
    h = _ceil_power(n, 1 - beta / 2)
    alpha = _ceil_power(n, 1 - beta)
    epsilon = n ** (beta - 0.5)
    if not epsilon < 1:
        raise ValueError(f"epsilon = {epsilon} must be < 1; increase n")
    if alpha > h:
        raise ValueError(f"rounded parameters violate alpha <= k: alpha={alpha}, k={h}")
    if 2 * h > n:
        raise ValueError(
            f"rounded parameters violate h <= n/2: h={h}, n={n} "
            f"(need roughly n >= 2^(2/beta) = {2 ** (2 / beta):.3g})"
        )
    return HardPairParams(n=n, h=h, alpha=alpha, k=h, epsilon=epsilon, beta=beta)


@dataclass(frozen=True)
class HiddenSet:
    """A planted subset together with the seed that drew it."""

    subset: Subset
    seed: int

    @property
    def h(self) -> int:
        return self.subset.size


def draw_hidden_set(n: int, h: int, seed: int) -> HiddenSet:
    """Uniform size-h subset of {0..n-1} via a seeded partial Fisher-Yates
    shuffle (first h positions of the permutation)."""
    if not 0 < h <= n:
        raise ValueError(f"need 0 < h <= n, got h={h}, n={n}")
    rng = np.random.default_rng(seed)
    arr = np.arange(n)
    for i in range(h):
        j = int(rng.integers(i, n))
        arr[i], arr[j] = arr[j], arr[i]
    mask = 0
    for e in arr[:h]:
        mask |= 1 << int(e)
    return HiddenSet(Subset._raw(n, mask, h), seed)


@dataclass(frozen=True)
class MonotoneHardPair:
    """Planted function fh(S) = |S inter H| + min(|S minus H|, cap) and its
    cardinality-only decoy g(S) = min(|S|, |S| h/n + cap).

    fh is a sum of an additive function (indicator of H) and a budget-additive
    function (indicator of the complement, budget = cap); g is concave of
    cardinality.  Both are monotone submodular; they coincide on all sets with
    |S| <= alpha and |S minus H| <= cap.
    """

    fh: SumFunction
    g: ConcaveCardinalityFunction
    params: HardPairParams
    hidden: HiddenSet


def build_monotone_pair(params: HardPairParams, hidden: HiddenSet) -> MonotoneHardPair:
    if hidden.subset.n != params.n:
        raise ValueError("hidden set drawn over a different ground set")
    if hidden.h != params.h:
        raise ValueError(f"hidden set size {hidden.h} != h = {params.h}")
    n, h = params.n, params.h
    cap = params.cap
    member = [1 if hidden.subset.contains(e) else 0 for e in range(n)]
    on_hidden = AdditiveFunction(member)
    off_hidden = BudgetAdditiveFunction([1 - m for m in member], cap)
    fh = SumFunction([on_hidden, off_hidden])
    table = [min(i, Fraction(i * h, n) + cap) for i in range(n + 1)]
    g = ConcaveCardinalityFunction(table)
    return MonotoneHardPair(fh=fh, g=g, params=params, hidden=hidden)


def gap_bound(params: HardPairParams) -> Fraction:
    """Ratio alpha/k + h/n separating the decoy's constrained maximum from the
    planted function's.  Exact rational; may exceed 1 (vacuously valid)."""
    return Fraction(params.alpha, params.k) + Fraction(params.h, params.n)


class _CoverageFormPlanted(FunctionInstance):
    """Closed form |S inter H| + alpha for nonempty S, 0 at the empty set."""

    kind = "coverage_pair_planted"

    def __init__(self, hidden: Subset, alpha: int):
        self.n = hidden.n
        self._hidden = hidden
        self._alpha = alpha

    def value(self, s: Subset) -> int:
        self._check_ground(s)
        if s.size == 0:
            return 0
        return s.intersection_size(self._hidden) + self._alpha


class _CoverageFormDecoy(FunctionInstance):
    """Closed form |S| h/n + alpha for nonempty S, 0 at the empty set."""

    kind = "coverage_pair_decoy"

    def __init__(self, n: int, h: int, alpha: int):
        self.n = n
        self._h = h
        self._alpha = alpha

    def value(self, s: Subset):
        self._check_ground(s)
        if s.size == 0:
            return 0
        return Fraction(s.size * self._h, self.n) + self._alpha


@dataclass(frozen=True)
class CoverageHardPair:
    """Coverage-realizable hard pair in closed form, optionally backed by
    explicit coverage functions.

    The explicit realizations are scaled by n so all universe cardinalities
    are integers: ``fh_cov.value(S) == n * fh.value(S)`` and likewise for the
    decoy.  Every ground element covers the same shared block of n*alpha
    universe elements, which produces the +alpha offset on nonempty sets.
    """

    fh: _CoverageFormPlanted
    g: _CoverageFormDecoy
    params: HardPairParams
    hidden: HiddenSet
    fh_cov: object | None = None
    g_cov: object | None = None
    scale: int | None = None


def build_coverage_pair(
    params: HardPairParams, hidden: HiddenSet, realize_explicitly: bool = False
) -> CoverageHardPair:
    if hidden.subset.n != params.n:
        raise ValueError("hidden set drawn over a different ground set")
    if hidden.h != params.h:
        raise ValueError(f"hidden set size {hidden.h} != h = {params.h}")
    n, h, alpha = params.n, params.h, params.alpha
    fh = _CoverageFormPlanted(hidden.subset, alpha)
    g = _CoverageFormDecoy(n, h, alpha)
    fh_cov = g_cov = scale = None
    if realize_explicitly:
        if n > 20:
            raise ValueError(f"explicit realization supported only for n <= 20, got {n}")
        from .functions import CoverageFunction

        scale = n
        shared = (1 << (n * alpha)) - 1
        # Planted: members of the hidden set add n private universe elements.
        covers_fh = []
        offset = n * alpha
        for e in range(n):
            mask = shared
            if hidden.subset.contains(e):
                mask |= ((1 << n) - 1) << offset
                offset += n
            covers_fh.append(mask)
        fh_universe = n * alpha + n * h
        fh_cov = CoverageFunction(fh_universe, covers_fh)
        # Decoy: every element adds h private universe elements.
        covers_g = []
        offset = n * alpha
        for e in range(n):
            covers_g.append(shared | (((1 << h) - 1) << offset))
            offset += h
        g_cov = CoverageFunction(n * alpha + n * h, covers_g)
    return CoverageHardPair(
        fh=fh, g=g, params=params, hidden=hidden,
        fh_cov=fh_cov, g_cov=g_cov, scale=scale,
    )


class SandwichFunction(FunctionInstance):
    """Adversarial oracle: returns the decoy g(S) whenever g(S) lies within
    the multiplicative (1 +- eps) band around the planted fh(S), and fh(S)
    otherwise.  By construction the result is always within the band around
    fh, so fh is a representative.

    eps is taken at its exact binary-float value and all band comparisons are
    exact rational arithmetic whenever fh and g evaluate to rationals.
    """

    kind = "sandwich"

    def __init__(self, fh, g, epsilon: float):
        if not 0 < epsilon < 1:
            raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
        if fh.n != g.n:
            raise ValueError("pair functions disagree on ground set size")
        self.n = fh.n
        self.fh = fh
        self.g = g
        self.epsilon = float(epsilon)
        self._lo = 1 - Fraction(self.epsilon)
        self._hi = 1 + Fraction(self.epsilon)

    def in_band(self, s: Subset) -> bool:
        fv = self.fh.value(s)
        gv = self.g.value(s)
        return self._lo * fv <= gv <= self._hi * fv

    def value(self, s: Subset):
        fv = self.fh.value(s)
        gv = self.g.value(s)
        if self._lo * fv <= gv <= self._hi * fv:
            return gv
        return fv


def build_sandwich(pair, epsilon: float | None = None) -> SandwichFunction:
    """Sandwich oracle for a hard pair; eps defaults to the pair's parameter."""
    if epsilon is None:
        epsilon = pair.params.epsilon
    return SandwichFunction(pair.fh, pair.g, epsilon)


class GreedyTrapInstance(FunctionInstance):
    """Additive function with a deflation override on a thin set family.

    The ground set splits into blocks A (1/(2 eps) elements of value 2),
    B (n/2 - 1/(4 eps) elements of value 1/n) and C (same count, value 1).
    F(S) = 1/eps exactly when S = A + one element of C, otherwise F = f.
    The override keeps F within the (1 +- eps) band around f, so the additive
    f is a representative; values are exact rationals throughout.
    """

    kind = "greedy_trap"

    def __init__(self, n, k, beta, epsilon: Fraction, a_size, bc_size):
        self.n = n
        self.k = k
        self.beta = beta
        self.epsilon = epsilon
        self.a_elements = list(range(a_size))
        self.b_elements = list(range(a_size, a_size + bc_size))
        self.c_elements = list(range(a_size + bc_size, n))
        weights = [2] * a_size + [Fraction(1, n)] * bc_size + [1] * bc_size
        self.f = AdditiveFunction(weights)
        self._a_mask = (1 << a_size) - 1
        self._c_mask = ((1 << bc_size) - 1) << (a_size + bc_size)
        self.override_value = 1 / epsilon

    def is_override(self, s: Subset) -> bool:
        extra = s.mask & ~self._a_mask
        return (
            s.mask & self._a_mask == self._a_mask
            and extra.bit_count() == 1
            and extra & self._c_mask == extra
        )

    def value(self, s: Subset):
        self._check_ground(s)
        if self.is_override(s):
            return self.override_value
        return self.f.value(s)

    def override_sets(self):
        """All sets on which F differs from the additive representative."""
        n = self.n
        base = self._a_mask
        size = len(self.a_elements) + 1
        for c in self.c_elements:
            yield Subset._raw(n, base | (1 << c), size)

    def claimed_greedy_value(self) -> Fraction:
        """Predicted greedy outcome 1/eps + (k - k^(1-beta)/2)/n under the
        intended trap dynamics (all of A, remaining budget spent on B).
        Exact when k^(1-beta) is; see the measured value for what the
        implemented override actually yields."""
        drift = Fraction(_exact_or_float_pow(self.k, 1 - self.beta))
        return self.override_value + (self.k - drift / 2) * Fraction(1, self.n)


def _exact_or_float_pow(base: int, exponent: float):
    v = base ** exponent
    r = round(v)
    if abs(v - r) < 1e-9 * max(1.0, abs(r)):
        return int(r)
    return v


def build_greedy_trap(k: int, beta: float, n: int) -> GreedyTrapInstance:
    """Trap instance at error level eps = k^(beta-1); requires eps < 1/2,
    integral block sizes, and enough non-A elements to fill the budget."""
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if k < 1 or n < 2:
        raise ValueError(f"need k >= 1 and n >= 2, got k={k}, n={n}")
    eps_pow = _exact_or_float_pow(k, 1 - beta)
    epsilon = Fraction(1, eps_pow) if isinstance(eps_pow, int) else Fraction(1 / eps_pow)
    if not epsilon < Fraction(1, 2):
        raise ValueError(f"trap needs eps < 1/2, got eps = {float(epsilon)}")
    a_exact = 1 / (2 * epsilon)
    bc_exact = Fraction(n, 2) - 1 / (4 * epsilon)
    a_size = round(a_exact)
    bc_size = round(bc_exact)
    if a_size < 1 or bc_size < 1:
        raise ValueError(f"block sizes must be positive, got |A|={a_size}, |B|=|C|={bc_size}")
    if a_size + 2 * bc_size != n:
        raise ValueError(
            f"rounded blocks do not tile the ground set: {a_size} + 2*{bc_size} != {n}"
        )
    if bc_size < k:
        raise ValueError(f"need n/2 - 1/(4 eps) >= k, got {bc_size} < {k}")
    return GreedyTrapInstance(n, k, beta, epsilon, a_size, bc_size)
