"""Minimal covering codes, greedy upper-bound witnesses, random codes and covering fractions.

Exact minima produced here are finite-n computations; they are new data rather
than reproductions of any published table.
"""
from __future__ import annotations

import itertools
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, floor

import numpy as np

from . import rng
from .bounds import entropy, phi
from .errors import BudgetExceeded
from .radius import DEFAULT_BUDGET, _Engine, indices_cover
from .words import Code, Word, ball_size

SEARCH_BUDGET = 5 * 10**6
ALPHA_BUDGET = 10**6


@dataclass(frozen=True)
class SearchResult:
    n: int
    t: int
    r: int
    q: int
    M_min: int
    witness: Code
    nodes_explored: int

    @property
    def k(self) -> float:
        return math.log(self.M_min, self.q)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "q": self.q,
            "t": self.t,
            "r": self.r,
            "m_min": self.M_min,
            "k": self.k,
            "witness": [str(w) for w in self.witness],
            "nodes": self.nodes_explored,
            "note": "exact finite-n minimum computed by exhaustive search (new data)",
        }


@dataclass(frozen=True)
class RandomModel:
    """Each of the q^n words joins the code independently with probability p."""

    n: int
    q: int
    p: float
    seed: int = 0
    rho: float | None = None
    eps: float | None = None
    in_guarantee_range: bool = field(default=True, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"inclusion probability {self.p} outside [0, 1]")

    @classmethod
    def from_rate(cls, n: int, q: int, rho: float, eps: float, seed: int = 0) -> "RandomModel":
        """p = q^(-n (H_{q^2}(rho) - eps)); flags eps outside (0, phi(rho))."""
        hi = 1.0 - 1.0 / (q * q)
        if not 0.0 < rho < hi:
            raise ValueError(f"rho={rho} outside (0, {hi})")
        ok = 0.0 < eps < phi(rho, q)
        if not ok:
            warnings.warn(
                f"eps={eps} outside (0, {phi(rho, q):.6g}); the random-coding guarantee does not apply",
                stacklevel=2,
            )
        p = min(1.0, float(q) ** (-n * (entropy(q * q, rho) - eps)))
        return cls(n, q, p, seed, rho, eps, ok)


@dataclass(frozen=True)
class AlphaEstimate:
    n: int
    q: int
    rho: float
    M: int
    trials: int
    hits: int

    @property
    def estimate(self) -> float:
        return self.hits / self.trials

    @property
    def ci95(self) -> float:
        e = self.estimate
        return 1.96 * math.sqrt(e * (1.0 - e) / self.trials)

    @property
    def sigma(self) -> float:
        e = self.estimate
        return math.sqrt(e * (1.0 - e) / self.trials)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "q": self.q,
            "rho": self.rho,
            "m": self.M,
            "trials": self.trials,
            "hits": self.hits,
            "estimate": self.estimate,
            "ci95": self.ci95,
        }


def radius_from_rho(rho: float, n: int) -> int:
    return floor(rho * n)


def sphere_lower_bound(n: int, t: int, r: int, q: int) -> int:
    """Smallest M with M^t * V^(t)_{r,n,q} >= q^(tn)."""
    V = ball_size(t, r, n, q)
    need = q ** (t * n)
    # integer t-th root of ceil(need / V), rounded up
    target = -(-need // V)
    M = max(1, round(target ** (1.0 / t)))
    while M**t < target:
        M += 1
    while M > 1 and (M - 1) ** t >= target:
        M -= 1
    return M


def greedy_cover(n: int, t: int, r: int, q: int, seed: int = 0) -> Code:
    """Add the word covering the most uncovered targets until R_t <= r."""
    if not 0 <= r <= n:
        raise ValueError(f"radius {r} outside [0, {n}]")
    size = q**n
    order = rng.stream(seed, 0).permutation(size)
    chosen: list[int] = []
    uncovered = np.arange(size**t, dtype=np.int64)
    while uncovered.size:
        best_gain, best_w, best_left = -1, None, None
        for w in order:
            w = int(w)
            if w in chosen:
                continue
            engine = _Engine(n, q, t, np.array(chosen + [w]), budget=math.inf)
            d = engine.min_dist_at(uncovered)
            gain = int(np.count_nonzero(d <= r))
            if gain > best_gain:
                best_gain, best_w, best_left = gain, w, uncovered[d > r]
        chosen.append(best_w)
        uncovered = best_left
    return Code.from_indices(chosen, n, q)


def _search_estimate(size: int, lo: int, hi: int) -> int:
    # codes containing the anchor, for every size tried
    return sum(comb(size - 1, M - 1) for M in range(lo, hi + 1))


def min_code_size(
    n: int,
    t: int,
    r: int,
    q: int,
    anchor: Word | None = None,
    budget: int = SEARCH_BUDGET,
    seed: int = 0,
) -> SearchResult:
    """Exact k_t: smallest code with R_t <= r, by exhaustive search.

    The search fixes one codeword (``anchor``, default the zero word), which is
    harmless because translating a covering code keeps it covering.  Sizes are
    tried upward from the sphere-covering bound; each size enumerates the
    remaining words in lexicographic combination order.  The greedy code gives
    the stopping size: a translate of it contains the anchor, so the search at
    that size always succeeds and every witness contains the anchor.
    """
    if not 0 <= r <= n:
        raise ValueError(f"radius {r} outside [0, {n}]")
    size = q**n
    lo = sphere_lower_bound(n, t, r, q)
    greedy = greedy_cover(n, t, r, q, seed)
    hi = greedy.M
    estimate = _search_estimate(size, lo, hi)
    if estimate > budget:
        raise BudgetExceeded(f"exhaustive search for k_{t}({n},{r},{q}) over sizes {lo}..{hi}", estimate)
    a = 0 if anchor is None else anchor.index()
    rest = [w for w in range(size) if w != a]
    nodes = 0
    for M in range(lo, hi + 1):
        for tail in itertools.combinations(rest, M - 1):
            nodes += 1
            idx = np.array((a,) + tail, dtype=np.int64)
            if indices_cover(n, q, t, r, idx, budget=math.inf):
                return SearchResult(n, t, r, q, M, Code.from_indices(idx, n, q), nodes)
    raise AssertionError("greedy code size was not reached by the exhaustive search")


def random_code(model: RandomModel, trial: int = 0) -> Code:
    """Bernoulli(p) code; word i is kept iff the i-th uniform of stream (seed, trial) is < p."""
    keep = _bernoulli_mask(model, trial)
    return Code.from_indices(np.flatnonzero(keep), model.n, model.q)


def _bernoulli_mask(model: RandomModel, trial: int) -> np.ndarray:
    u = rng.stream(model.seed, trial).random(model.q**model.n)
    return u < model.p


def _alpha_trial(n: int, q: int, r: int, M: int, seed: int, trial: int) -> bool:
    subset = rng.partial_shuffle(rng.stream(seed, trial), q**n, M)
    return indices_cover(n, q, 2, r, subset, budget=DEFAULT_BUDGET)


def sample_alpha(n: int, rho: float, M: int, q: int, trials: int, seed: int = 0, threads: int = 1) -> AlphaEstimate:
    """Monte Carlo estimate of the fraction of (n, M)_q codes with R_2 <= floor(rho n)."""
    size = q**n
    if M > size:
        raise ValueError(f"M={M} exceeds q^n={size}")
    if trials < 1:
        raise ValueError("need at least one trial")
    r = radius_from_rho(rho, n)
    run = lambda i: _alpha_trial(n, q, r, M, seed, i)  # noqa: E731
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hits = sum(pool.map(run, range(trials)))
    else:
        hits = sum(run(i) for i in range(trials))
    return AlphaEstimate(n, q, rho, M, trials, int(hits))


def alpha_exact(n: int, rho: float, M: int, q: int, budget: int = ALPHA_BUDGET) -> Fraction:
    """Exact fraction of (n, M)_q codes with R_2 <= floor(rho n), by enumeration."""
    size = q**n
    if not 0 <= M <= size:
        raise ValueError(f"M={M} outside [0, {size}]")
    total = comb(size, M)
    if total > budget:
        raise BudgetExceeded(f"alpha_exact over C({size}, {M}) codes", total)
    r = radius_from_rho(rho, n)
    good = sum(
        1 for combo in itertools.combinations(range(size), M)
        if indices_cover(n, q, 2, r, np.array(combo, dtype=np.int64))
    )
    return Fraction(good, total)


def rate_code_size(n: int, rho: float, eps: float, q: int) -> int:
    """floor(q^(n (1 - H_{q^2}(rho) + eps + 1/n)))."""
    return floor(float(q) ** (n * (1.0 - entropy(q * q, rho) + eps) + 1.0))
