"""Second-order football pool: a match and a rematch of n games, each with q outcomes.

A ticket set wins if some ordered pair of tickets (the same ticket may be used
twice) predicts the match and the rematch correctly in all but at most r
games, where a game counts as missed when either prediction is wrong.  The
smallest winning-for-sure ticket set is a minimal code with R_2 <= r.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded
from .radius import is_covering
from .search import SEARCH_BUDGET, greedy_cover, min_code_size, sphere_lower_bound
from .words import Code, MatrixWord, Word, popcount, support_masks


@dataclass(frozen=True)
class PoolInstance:
    n: int
    q: int
    r: int
    tickets: Code
    outcomes_match: Word
    outcomes_rematch: Word

    def __post_init__(self):
        if not 0 <= self.r <= self.n:
            raise ValueError(f"r={self.r} outside [0, {self.n}]")
        for w in (self.outcomes_match, self.outcomes_rematch):
            if w.n != self.n or w.q != self.q:
                raise ValueError(f"outcome {w} does not match n={self.n}, q={self.q}")
        if self.tickets.n != self.n or self.tickets.q != self.q:
            raise ValueError("ticket set does not match n, q")


@dataclass(frozen=True)
class PoolVerdict:
    win: bool
    witness: tuple[Word, Word] | None
    missed: int | None
    empty_tickets: bool = False


def pool_verify(instance: PoolInstance) -> PoolVerdict:
    tickets = instance.tickets
    if tickets.M == 0:
        return PoolVerdict(False, None, None, empty_tickets=True)
    n, q = instance.n, instance.q
    idx = tickets.indices()
    m1 = support_masks(n, q, np.array([instance.outcomes_match.index()]), idx)[0]
    m2 = support_masks(n, q, np.array([instance.outcomes_rematch.index()]), idx)[0]
    missed = popcount(m1[:, None] | m2[None, :])
    i, j = np.unravel_index(int(np.argmin(missed)), missed.shape)
    best = int(missed[i, j])
    if best <= instance.r:
        return PoolVerdict(True, (tickets.words[i], tickets.words[j]), best)
    return PoolVerdict(False, None, best)


@dataclass(frozen=True)
class PoolSolution:
    n: int
    q: int
    r: int
    tickets: Code | None
    exact: bool
    lower: int
    upper: int
    upper_tickets: Code | None = None


def pool_solve(n: int, q: int, r: int, budget: int = SEARCH_BUDGET, seed: int = 0) -> PoolSolution:
    """Minimal ticket set; when the search is over budget, only the [lower, upper] bracket."""
    lower = sphere_lower_bound(n, 2, r, q)
    try:
        result = min_code_size(n, 2, r, q, budget=budget, seed=seed)
    except BudgetExceeded:
        greedy = greedy_cover(n, 2, r, q, seed)
        return PoolSolution(n, q, r, None, False, lower, greedy.M, greedy)
    check = is_covering(result.witness, 2, r)
    if not check.covered:
        raise AssertionError(f"search witness misses outcome pair {check.witness}")
    return PoolSolution(n, q, r, result.witness, True, result.M_min, result.M_min, result.witness)


def outcome_matrix(match: Word, rematch: Word) -> MatrixWord:
    return MatrixWord((match, rematch))
