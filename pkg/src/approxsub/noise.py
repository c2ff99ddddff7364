"""Noise wrappers around exact functions.

Two models:

* consistent noise: a persistent multiplicative perturbation, the same value
  on every re-query of a set.  Implemented statelessly with a keyed 64-bit
  mixing hash over the subset's canonical blocks, so no per-set table is
  stored and identity holds across runs and processes.
* inconsistent noise: every query is a fresh unbiased draw; a sampling
  estimator averages m draws per set (computed once and cached) to present
  a consistent oracle again.
"""

from __future__ import annotations

import math
import threading

import numpy as np

from .sets import Subset, ValueOracle

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """SplitMix64 finalizer: a full-avalanche 64-bit mixer."""
    z = (z + _GOLDEN) & _M64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _M64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _M64
    z ^= z >> 31
    return z


def subset_unit(seed: int, s: Subset) -> float:
    """Deterministic uniform-in-[0,1) value keyed by (seed, canonical subset key).

    The mixer is folded over the subset's 64-bit blocks and the final state is
    mapped to [0,1) by 53-bit mantissa division.
    """
    state = _mix64(seed & _M64)
    for block in s.key():
        state = _mix64(state ^ block)
    return (state >> 11) * 2.0 ** -53


class ConsistentNoiseOracle(ValueOracle):
    """F(S) = xi_S * f(S) with xi_S uniform in [1-eps, 1+eps], persistent per set.

    xi_S is a pure function of (seed, canonical key of S): re-querying any set
    returns the identical value, and two oracles built with the same
    (f, eps, seed) agree everywhere.
    """

    def __init__(self, base, epsilon: float, seed: int):
        if not 0 <= epsilon < 1:
            raise ValueError(f"epsilon must be in [0, 1), got {epsilon}")
        super().__init__(base.n)
        self.base = base
        self.epsilon = float(epsilon)
        self.seed = seed

    def xi(self, s: Subset) -> float:
        u = subset_unit(self.seed, s)
        return 1.0 + self.epsilon * (2.0 * u - 1.0)

    def value(self, s: Subset):
        v = self.base.value(s)
        if self.epsilon == 0.0:
            return v
        return self.xi(s) * v


def consistent_noise(f, epsilon: float, seed: int) -> ConsistentNoiseOracle:
    """Wrap an exact function in persistent multiplicative noise."""
    return ConsistentNoiseOracle(f, epsilon, seed)


class InconsistentNoiseOracle:
    """Unbiased noisy oracle: each query is a fresh draw with mean f(S).

    Families:

    * ``uniform-relative``: F(S) = f(S) * U[1-width, 1+width]
    * ``additive-bounded``: F(S) = f(S) + U[-width, +width]

    Not a consistent oracle; use :class:`SamplingEstimator` to feed solvers.
    """

    FAMILIES = ("uniform-relative", "additive-bounded")

    def __init__(self, base, family: str, width: float, seed: int):
        if family not in self.FAMILIES:
            raise ValueError(f"unknown noise family {family!r}")
        if width < 0:
            raise ValueError("width must be nonnegative")
        self.base = base
        self.n = base.n
        self.family = family
        self.width = float(width)
        self.seed = seed
        self._rng = np.random.default_rng(seed)
        self._queries = 0
        self._lock = threading.Lock()

    @property
    def query_count(self) -> int:
        return self._queries

    def sample(self, s: Subset) -> float:
        return float(self.sample_batch(s, 1)[0])

    def sample_batch(self, s: Subset, m: int) -> np.ndarray:
        """m independent draws for the same set; counts m queries."""
        if m < 1:
            raise ValueError("need at least one sample")
        v = float(self.base.value(s))
        with self._lock:
            self._queries += m
            u = self._rng.random(m)
        shift = self.width * (2.0 * u - 1.0)
        if self.family == "uniform-relative":
            return v * (1.0 + shift)
        return v + shift


def required_samples(B, b, n, epsilon: float, confidence_constant: float = 3.0) -> int:
    """Samples per set so the averaged oracle is within (1 +- eps) of f w.h.p.

    m = ceil(confidence_constant * B * ln(n) / (b * eps^2)), clamped to >= 1.
    The multiplicative constant is configuration: the underlying guarantee
    fixes only the scaling, not the constant.
    """
    if b <= 0:
        raise ValueError(
            "lower value bound b must be positive; for ranges reaching zero use "
            "additive-error estimation instead"
        )
    if B < b:
        raise ValueError(f"need b <= B, got b={b}, B={B}")
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    if n < 1:
        raise ValueError("n must be at least 1")
    m = math.ceil(confidence_constant * B * math.log(n) / (b * epsilon * epsilon))
    return max(1, m)


class SamplingEstimator(ValueOracle):
    """Consistent face over an inconsistent source: mean of m draws per set,
    computed once and cached under the subset's canonical key."""

    def __init__(self, source: InconsistentNoiseOracle, m: int):
        if m < 1:
            raise ValueError("need at least one sample per set")
        super().__init__(source.n)
        self.source = source
        self.m = m
        self._cache: dict[tuple[int, ...], float] = {}
        self._cache_lock = threading.Lock()

    def value(self, s: Subset) -> float:
        key = s.key()
        with self._cache_lock:
            cached = self._cache.get(key)
            if cached is not None:
                return cached
            # Compute inside the lock: concurrent first calls for the same
            # set must observe one canonical value.
            est = float(np.mean(self.source.sample_batch(s, self.m)))
            self._cache[key] = est
            return est

    def cached_sets(self) -> list[tuple[int, ...]]:
        with self._cache_lock:
            return list(self._cache.keys())


def estimate(est: SamplingEstimator, s: Subset) -> float:
    """First call draws and caches m samples; later calls return the cache."""
    return est.value(s)


def noise_from_dict(base, cfg: dict):
    """Build a noise wrapper from a config block.

    Consistent: {"kind": "consistent", "epsilon": e, "seed": s}
    Inconsistent source: {"kind": "inconsistent", "family": ..., "width": w, "seed": s}
    Sampled estimator: inconsistent block plus either "m" or
    {"B": ..., "b": ..., "epsilon": ..., "confidence_constant": ...}.
    """
    kind = cfg.get("kind")
    if kind == "consistent":
        return consistent_noise(base, cfg["epsilon"], cfg.get("seed", 0))
    if kind == "inconsistent":
        source = InconsistentNoiseOracle(
            base, cfg.get("family", "uniform-relative"), cfg["width"], cfg.get("seed", 0)
        )
        if "m" in cfg:
            return SamplingEstimator(source, cfg["m"])
        if "B" in cfg:
            m = required_samples(
                cfg["B"], cfg["b"], base.n, cfg["epsilon"],
                cfg.get("confidence_constant", 3.0),
            )
            return SamplingEstimator(source, m)
        return source
    raise ValueError(f"unknown noise kind {kind!r}")
