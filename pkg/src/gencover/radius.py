"""Exact t-th covering radius of a code, with early-exit covering tests and deep holes.

A target is a t x n matrix, identified by its index in the lexicographic
enumeration of all q^(tn) matrices (row-major flattening, so target index =
sum of row indices in base q^n).  For target rows u_1..u_t and candidate rows
c_1..c_t from the code,

    d^(t) = popcount(mask(u_1 - c_1) | ... | mask(u_t - c_t)),

so every radius query reduces to OR/popcount over a (q^n, M) table of
difference-support masks.  Targets are scanned in contiguous lexicographic
chunks; chunks are independent and merged by index, so results do not depend
on chunk size or thread count.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple

import numpy as np

from .errors import BudgetExceeded
from .words import Code, MatrixWord, Word, enumerate_matrices, popcount, support_masks, t_distance

DEFAULT_BUDGET = 2 * 10**9
# max number of (target, codeword tuple) cells materialized per chunk
_CHUNK_CELLS = 1 << 21


@dataclass(frozen=True)
class RadiusReport:
    radius: int
    deep_hole: MatrixWord
    scanned: int


class CoverCheck(NamedTuple):
    covered: bool
    witness: MatrixWord | None
    distance: int | None


def _require_nonempty(code: Code) -> None:
    if code.M == 0:
        raise ValueError("covering radius of an empty code is undefined")


def _matrix_from_index(idx: int, t: int, n: int, q: int) -> MatrixWord:
    size = q**n
    rows = []
    for _ in range(t):
        idx, r = divmod(idx, size)
        rows.append(Word.from_index(r, n, q))
    return MatrixWord(tuple(reversed(rows)))


@lru_cache(maxsize=16)
def full_masks(n: int, q: int) -> np.ndarray:
    """(q^n, q^n) table of difference-support masks between all word pairs."""
    size = q**n
    table = support_masks(n, q, np.arange(size), np.arange(size))
    table.setflags(write=False)
    return table


class _Engine:
    """Min-distance from each target matrix to C^t, over index chunks."""

    def __init__(self, n: int, q: int, t: int, indices: np.ndarray, budget: float = DEFAULT_BUDGET):
        if len(indices) == 0:
            raise ValueError("covering radius of an empty code is undefined")
        if t < 1:
            raise ValueError("t must be >= 1")
        self.n, self.q, self.t = n, q, t
        self.size = q**n
        self.total = self.size**t
        self.M = len(indices)
        cost = float(self.total) * float(self.M) ** t
        if cost > budget:
            raise BudgetExceeded(f"t={t} radius scan of an (n={n}, M={self.M})_{q} code", cost)
        if self.size <= 4096:
            self.masks = full_masks(n, q)[:, np.asarray(indices, dtype=np.int64)]
        else:
            self.masks = support_masks(n, q, np.arange(self.size), indices)
        self.chunk = max(1, _CHUNK_CELLS // (self.M**t))

    @classmethod
    def for_code(cls, code: Code, t: int, budget: float = DEFAULT_BUDGET) -> "_Engine":
        _require_nonempty(code)
        return cls(code.n, code.q, t, code.indices(), budget)

    def chunks(self) -> Iterator[tuple[int, int]]:
        for start in range(0, self.total, self.chunk):
            yield start, min(start + self.chunk, self.total)

    def min_dist(self, start: int, stop: int) -> np.ndarray:
        """Distances from targets start..stop-1 to the code's t-th power."""
        return self.min_dist_at(np.arange(start, stop, dtype=np.int64))

    def min_dist_at(self, idx: np.ndarray) -> np.ndarray:
        t, M = self.t, self.M
        acc = None
        for k in range(t):
            row = (idx // self.size ** (t - 1 - k)) % self.size
            m = self.masks[row]  # (chunk, M)
            shape = [len(idx)] + [1] * t
            shape[1 + k] = M
            m = m.reshape(shape)
            acc = m if acc is None else acc | m
        d = popcount(acc).reshape(len(idx), -1)
        return d.min(axis=1)


def _scan(engine: _Engine, threads: int):
    chunks = list(engine.chunks())
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            yield from zip(chunks, pool.map(lambda c: engine.min_dist(*c), chunks))
    else:
        for c in chunks:
            yield c, engine.min_dist(*c)


def t_covering_radius(code: Code, t: int, threads: int = 1, budget: float = DEFAULT_BUDGET) -> RadiusReport:
    """R_t(code): max over all t x n targets of the distance to C^t (rows may repeat)."""
    engine = _Engine.for_code(code, t, budget)
    best, where = -1, 0
    for (start, _), d in _scan(engine, threads):
        i = int(np.argmax(d))
        if d[i] > best:
            best, where = int(d[i]), start + i
    return RadiusReport(best, _matrix_from_index(where, t, code.n, code.q), engine.total)


def covering_radius(code: Code, threads: int = 1) -> RadiusReport:
    return t_covering_radius(code, 1, threads=threads)


def is_covering(code: Code, t: int, r: int, threads: int = 1, budget: float = DEFAULT_BUDGET) -> CoverCheck:
    """Whether R_t(code) <= r; otherwise the lexicographically first uncovered target."""
    if not 0 <= r <= code.n:
        raise ValueError(f"radius {r} outside [0, {code.n}]")
    engine = _Engine.for_code(code, t, budget)
    chunks = list(engine.chunks())
    step = max(1, threads)
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for b in range(0, len(chunks), step):
            batch = chunks[b:b + step]
            if pool is not None:
                results = list(pool.map(lambda c: engine.min_dist(*c), batch))
            else:
                results = [engine.min_dist(*c) for c in batch]
            for (start, _), d in zip(batch, results):
                bad = np.flatnonzero(d > r)
                if bad.size:
                    i = int(bad[0])
                    return CoverCheck(False, _matrix_from_index(start + i, t, code.n, code.q), int(d[i]))
    finally:
        if pool is not None:
            pool.shutdown()
    return CoverCheck(True, None, None)


def deep_holes(code: Code, t: int, threads: int = 1, budget: float = DEFAULT_BUDGET) -> list[MatrixWord]:
    """Every target attaining R_t(code), in lexicographic order."""
    engine = _Engine.for_code(code, t, budget)
    parts = []
    for (start, _), d in _scan(engine, threads):
        parts.append((start, d))
    radius = max(int(d.max()) for _, d in parts)
    holes = []
    for start, d in parts:
        for i in np.flatnonzero(d == radius):
            holes.append(_matrix_from_index(start + int(i), t, code.n, code.q))
    return holes


def distance_to_power(code: Code, target: MatrixWord) -> int:
    """min over c in C^t of d^(t)(c, target)."""
    _require_nonempty(code)
    masks = support_masks(code.n, code.q, np.array([r.index() for r in target.rows]), code.indices())
    best = code.n
    for combo in itertools.product(range(code.M), repeat=target.t):
        acc = 0
        for k, j in enumerate(combo):
            acc |= int(masks[k, j])
        best = min(best, acc.bit_count())
    return best


def naive_t_covering_radius(code: Code, t: int) -> RadiusReport:
    """Digit-level reference: enumerate every target and every element of C^t."""
    _require_nonempty(code)
    power = [MatrixWord(rows) for rows in itertools.product(code.words, repeat=t)]
    best, hole, scanned = -1, None, 0
    for target in enumerate_matrices(t, code.n, code.q):
        scanned += 1
        d = min(t_distance(c, target) for c in power)
        if d > best:
            best, hole = d, target
    return RadiusReport(best, hole, scanned)


def indices_cover(n: int, q: int, t: int, r: int, indices, budget: float = DEFAULT_BUDGET) -> bool:
    """is_covering on a bare index array, without building Word objects."""
    if len(indices) == 0:
        return False
    engine = _Engine(n, q, t, indices, budget)
    for start, stop in engine.chunks():
        if engine.min_dist(start, stop).max() > r:
            return False
    return True


def digit_reference_radius(code: Code, t: int) -> int:
    """R_t by direct digit comparison over all (target, C^t element) pairs; no bitmasks."""
    _require_nonempty(code)
    targets = np.array([m.flat() for m in enumerate_matrices(t, code.n, code.q)], dtype=np.int8)
    power = np.array([tuple(d for w in rows for d in w.digits)
                      for rows in itertools.product(code.words, repeat=t)], dtype=np.int8)
    shape = (t, code.n)
    tg = targets.reshape((-1, 1) + shape)
    pw = power.reshape((1, -1) + shape)
    column_differs = (tg != pw).any(axis=2)
    return int(column_differs.sum(axis=2).min(axis=1).max())
