"""Finite-n versions of the random-coding argument for second-order covering.

For a 2 x n target v, the family of *covering pairs* is every unordered pair
{u1, u2} of distinct words such that [u1; u2] or [u2; u1] lies within
2-distance r of v.  Under the Bernoulli(p) code model, the target stays
uncovered by distinct-row pairs iff no covering pair has both words in the
code; ``janson_certificate`` turns the family into a rigorous upper bound on
that probability.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb, floor
from typing import Iterator

import numpy as np

from . import rng
from .bounds import inverse_binomial_moment
from .errors import BudgetExceeded
from .radius import full_masks
from .search import RandomModel, _bernoulli_mask
from .words import MatrixWord, Word, ball_size, hamming_distance, popcount, t_distance

FAMILY_BUDGET = 1 << 32


@dataclass(frozen=True)
class CoverPair:
    u1: Word
    u2: Word

    def __post_init__(self):
        if self.u1 == self.u2:
            raise ValueError("a covering pair needs two distinct words")
        if self.u2 < self.u1:
            a, b = self.u2, self.u1
            object.__setattr__(self, "u1", a)
            object.__setattr__(self, "u2", b)

    def w(self, v: MatrixWord) -> int:
        """Smallest Hamming distance between a pair word and a target row."""
        return min(hamming_distance(u, x) for u in (self.u1, self.u2) for x in v.rows)


def _check_target(u: Word, v: MatrixWord) -> None:
    if v.t != 2:
        raise ValueError(f"targets must have 2 rows, got {v.t}")
    if u.n != v.n or u.q != v.q:
        raise ValueError("shape mismatch between pair and target")


def covers(u1: Word, u2: Word, v: MatrixWord, r: int) -> bool:
    _check_target(u1, v)
    _check_target(u2, v)
    if u1 == u2:
        return False
    return min(t_distance(MatrixWord((u1, u2)), v), t_distance(MatrixWord((u2, u1)), v)) <= r


def _row_masks(v: MatrixWord) -> tuple[np.ndarray, np.ndarray]:
    """Support masks of (w - v1) and (w - v2) for every word w."""
    table = full_masks(v.n, v.q)
    return table[:, v.rows[0].index()], table[:, v.rows[1].index()]


def _pair_distance_table(v: MatrixWord) -> np.ndarray:
    """D[a, b] = min(d2([a; b], v), d2([b; a], v)) over word indices."""
    m1, m2 = _row_masks(v)
    fwd = popcount(m1[:, None] | m2[None, :])
    return np.minimum(fwd, fwd.T)


def family_indices(v: MatrixWord, r: int, budget: int = FAMILY_BUDGET) -> np.ndarray:
    """(K, 2) array of index pairs a < b forming the covering family, lexicographic."""
    size = v.q**v.n
    if float(size) ** 2 > budget:
        raise BudgetExceeded("covering-pair family enumeration", float(size) ** 2)
    D = _pair_distance_table(v)
    a, b = np.nonzero(np.triu(D <= r, k=1))
    return np.stack([a, b], axis=1).astype(np.int64)


def enumerate_family(v: MatrixWord, r: int, budget: int = FAMILY_BUDGET) -> list[CoverPair]:
    n, q = v.n, v.q
    return [CoverPair(Word.from_index(int(a), n, q), Word.from_index(int(b), n, q))
            for a, b in family_indices(v, r, budget)]


def _partners(v: MatrixWord, r: int) -> np.ndarray:
    """P[a, w] = {a, w} covers v (distinct words only)."""
    D = _pair_distance_table(v)
    P = D <= r
    np.fill_diagonal(P, False)
    return P


def n_A_exact(v: MatrixWord, pair: CoverPair, r: int) -> int:
    """Number of third words w that form a covering pair with u1 or with u2."""
    if not covers(pair.u1, pair.u2, v, r):
        raise ValueError(f"pair {{{pair.u1}, {pair.u2}}} does not cover {v}")
    P = _partners(v, r)
    a, b = pair.u1.index(), pair.u2.index()
    hit = P[a] | P[b]
    hit[[a, b]] = False
    return int(np.count_nonzero(hit))


def s_size(m: int, r: int, n: int, q: int) -> int:
    """q^m * V^(1)_{r-m, n-m, q}, or 0 when m > r."""
    if m < 0 or not 0 <= r <= n:
        raise ValueError("need m >= 0 and 0 <= r <= n")
    if m > r:
        return 0
    return q**m * ball_size(1, r - m, n - m, q)


def s_set(v: MatrixWord, pair: CoverPair, i: int, j: int, r: int) -> set[Word]:
    """Words w (not in the pair) with [w; u_j] within distance r of [v_i; v_(3-i)]."""
    u = (pair.u1, pair.u2)[j - 1]
    vi, vo = v.rows[i - 1], v.rows[2 - i]
    target = MatrixWord((vi, vo))
    out = set()
    for idx in range(v.q**v.n):
        w = Word.from_index(idx, v.n, v.q)
        if w in (pair.u1, pair.u2):
            continue
        if t_distance(MatrixWord((w, u)), target) <= r:
            out.add(w)
    return out


@dataclass(frozen=True)
class PairRecord:
    w: int
    n_A: int
    contribution: float


@dataclass(frozen=True)
class JansonCertificate:
    target: MatrixWord
    r: int
    p: float
    family_size: int
    bound: float
    records: tuple[PairRecord, ...] = field(repr=False, default=())
    empty_family: bool = False

    def w_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for rec in self.records:
            hist[rec.w] = hist.get(rec.w, 0) + 1
        return dict(sorted(hist.items()))

    def to_json(self, histogram: bool = True) -> dict:
        out = {
            "schema": 1,
            "target": [str(row) for row in self.target.rows],
            "r": self.r,
            "p": self.p,
            "family_size": self.family_size,
            "bound": self.bound,
            "empty_family": self.empty_family,
        }
        if histogram:
            out["w_histogram"] = {str(k): c for k, c in self.w_histogram().items()}
        return out


def janson_certificate(v: MatrixWord, r: int, p: float, budget: int = FAMILY_BUDGET) -> JansonCertificate:
    """Upper bound on P[no covering pair of v lies in a Bernoulli(p) code].

    bound = exp(-sum over pairs of p^2 * E_low), where E_low is the lower
    half (1/2 of the inverse binomial moment at n_A) of the conditional
    expectation of 1/X_A.  Using the lower half keeps the bound valid.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    pairs = family_indices(v, r, budget)
    if len(pairs) == 0:
        return JansonCertificate(v, r, p, 0, 1.0, (), True)
    P = _partners(v, r)
    m1, m2 = _row_masks(v)
    weights = np.minimum(popcount(m1), popcount(m2))
    records = []
    total = 0.0
    for a, b in pairs:
        hit = P[a] | P[b]
        hit[[a, b]] = False
        nA = int(np.count_nonzero(hit))
        term = p * p * 0.5 * inverse_binomial_moment(nA, p)
        total += term
        records.append(PairRecord(int(min(weights[a], weights[b])), nA, term))
    return JansonCertificate(v, r, p, len(pairs), math.exp(-total), tuple(records))


def uncovered_mask(v: MatrixWord, r: int, included: np.ndarray) -> np.ndarray:
    """For each row of an inclusion matrix (trials x q^n): no covering pair fully included."""
    pairs = family_indices(v, r)
    if len(pairs) == 0:
        return np.ones(included.shape[0], dtype=bool)
    both = included[:, pairs[:, 0]] & included[:, pairs[:, 1]]
    return ~both.any(axis=1)


def estimate_uncovered(v: MatrixWord, r: int, p: float, trials: int, seed: int = 0) -> float:
    """Fraction of Bernoulli(p) codes (trial k uses stream (seed, k)) leaving v uncovered."""
    model = RandomModel(v.n, v.q, p, seed)
    pairs = family_indices(v, r)
    if len(pairs) == 0:
        return 1.0
    misses = 0
    block = 4096
    for start in range(0, trials, block):
        stop = min(trials, start + block)
        inc = np.stack([_bernoulli_mask(model, k) for k in range(start, stop)])
        both = inc[:, pairs[:, 0]] & inc[:, pairs[:, 1]]
        misses += int(np.count_nonzero(~both.any(axis=1)))
    return misses / trials


# ---------------------------------------------------------------------------
# four-zone construction of covering pairs with controlled w


@dataclass(frozen=True)
class Lemma3Instance:
    v1: Word
    v2: Word
    d: int
    delta: Fraction
    rho: Fraction
    mu: Fraction
    Z_NU: tuple[int, ...]
    Z_NC: tuple[int, ...]
    Z_ZC: tuple[int, ...]
    Z_ZU: tuple[int, ...]
    u1_counts: tuple[int, int, int, int]
    count: int

    @property
    def sizes(self) -> tuple[int, int, int, int]:
        return len(self.Z_NU), len(self.Z_NC), len(self.Z_ZC), len(self.Z_ZU)


class UnsupportedInstance(ValueError):
    pass


def _frac_floor(x: Fraction) -> int:
    return floor(x)


def _pow0(base: int, e: int) -> int:
    # 0^0 = 1 convention
    return 1 if e == 0 else base**e


def _zone_plan(n: int, q: int, d: int, rho: Fraction):
    mu = Fraction(q) * rho / (q + 1)
    delta = Fraction(d, n)
    mn = _frac_floor(mu * n)
    l_nc = _frac_floor(delta * mn)
    l_zc = ceil((1 - delta) * mn)
    l_nu = d - l_nc
    l_zu = (n - d) - l_zc
    if min(l_nc, l_zc, l_nu, l_zu) < 0:
        raise UnsupportedInstance(f"negative zone size for n={n}, d={d}, rho={rho}")
    share = Fraction(q - 2, q - 1)
    frac_u = (rho - mu) / (1 - mu)
    frac_c = Fraction(q - 1, q)
    u2_nz = _frac_floor(share * l_nc)
    a = _frac_floor(frac_u * l_nu)
    b = _frac_floor(frac_c * l_nc)
    c = _frac_floor(frac_c * l_zc)
    e = _frac_floor(frac_u * l_zu)
    a_dis = _frac_floor(share * a)
    b_dis = _frac_floor(share * b)
    return mu, delta, (l_nu, l_nc, l_zc, l_zu), u2_nz, (a, b, c, e), (a_dis, b_dis)


def _others(q: int, exclude: set[int]) -> list[int]:
    return [x for x in range(q) if x not in exclude]


def _place(zone, k, k_dis, ref, q, base):
    """Choices for k nonzero entries in `zone`, exactly k_dis of which differ from ref.

    ``base`` is the digit used outside the chosen positions (0 here).  When
    ``ref`` is None the reference row is zero in this zone and every nonzero
    value counts.
    """
    for pos in itertools.combinations(zone, k):
        if ref is None:
            for vals in itertools.product(range(1, q), repeat=k):
                yield dict(zip(pos, vals))
            continue
        for dis in itertools.combinations(pos, k_dis):
            dis_set = set(dis)
            options = [
                _others(q, {0, ref[i]}) if i in dis_set else [ref[i]]
                for i in pos
            ]
            for vals in itertools.product(*options):
                yield dict(zip(pos, vals))


def _count_place(size, k, k_dis, q, ref_zero):
    if ref_zero:
        return comb(size, k) * _pow0(q - 1, k)
    return comb(size, k) * comb(k, k_dis) * _pow0(q - 2, k_dis)


def zone_instance(v: MatrixWord, rho: float | Fraction) -> Lemma3Instance:
    """Zone bookkeeping for the construction, in original coordinates."""
    inst, _ = _zone_setup(v, rho)
    return inst


def _zone_setup(v: MatrixWord, rho):
    if v.t != 2:
        raise ValueError("targets must have 2 rows")
    n, q = v.n, v.q
    rho = Fraction(rho)
    if not 0 < rho < 1 - Fraction(1, q * q):
        raise UnsupportedInstance(f"rho={rho} outside (0, 1 - 1/q^2)")
    v1, v2 = v.rows
    diff = v2 - v1
    # coordinates where the rows differ go first, relative order preserved
    perm = [i for i in range(n) if diff.digits[i]] + [i for i in range(n) if not diff.digits[i]]
    d = sum(1 for x in diff.digits if x)
    mu, delta, (l_nu, l_nc, l_zc, l_zu), u2_nz, (a, b, c, e), (a_dis, b_dis) = _zone_plan(n, q, d, rho)
    ref = [diff.digits[p] for p in perm]  # normalized v2: nonzero on [0, d)
    # u2: changed coordinates of the nonzero part are chosen first, so zones
    # depend on the choice; the instance reports the first (lexicographic) choice
    count_u2 = (comb(d, l_nc) * comb(l_nc, u2_nz) * _pow0(q - 2, u2_nz)
                * comb(n - d, l_zc) * _pow0(q - 1, l_zc))
    count_u1 = (_count_place(l_nu, a, a_dis, q, False) * _count_place(l_nc, b, b_dis, q, False)
                * _count_place(l_zc, c, 0, q, True) * _count_place(l_zu, e, 0, q, True))
    zones_norm = (tuple(range(l_nc, d)), tuple(range(l_nc)),
                  tuple(range(d, d + l_zc)), tuple(range(d + l_zc, n)))
    to_orig = lambda zone: tuple(sorted(perm[i] for i in zone))  # noqa: E731
    inst = Lemma3Instance(
        v1, v2, d, delta, rho, mu,
        *(to_orig(z) for z in zones_norm),
        u1_counts=(a, b, c, e),
        count=count_u2 * count_u1,
    )
    plan = dict(n=n, q=q, d=d, perm=perm, ref=ref, l_nc=l_nc, l_zc=l_zc, u2_nz=u2_nz,
                counts=(a, b, c, e), dis=(a_dis, b_dis), shift=v1)
    return inst, plan


def _u2_choices(plan) -> Iterator[tuple[list[int], tuple, tuple]]:
    n, q, d, ref = plan["n"], plan["q"], plan["d"], plan["ref"]
    for nc in itertools.combinations(range(d), plan["l_nc"]):
        nu = tuple(i for i in range(d) if i not in set(nc))
        for nonzero in itertools.combinations(nc, plan["u2_nz"]):
            nz = set(nonzero)
            options = [_others(q, {0, ref[i]}) if i in nz else [0] for i in nc]
            for nc_vals in itertools.product(*options):
                for zc in itertools.combinations(range(d, n), plan["l_zc"]):
                    zu = tuple(i for i in range(d, n) if i not in set(zc))
                    for zc_vals in itertools.product(range(1, q), repeat=len(zc)):
                        u2 = ref[:d] + [0] * (n - d)
                        for i, x in zip(nc, nc_vals):
                            u2[i] = x
                        for i, x in zip(zc, zc_vals):
                            u2[i] = x
                        yield u2, (nu, nc, zc, zu)


def _u1_choices(plan, zones) -> Iterator[list[int]]:
    n, q, ref = plan["n"], plan["q"], plan["ref"]
    a, b, c, e = plan["counts"]
    a_dis, b_dis = plan["dis"]
    nu, nc, zc, zu = zones
    for pa in _place(nu, a, a_dis, ref, q, 0):
        for pb in _place(nc, b, b_dis, ref, q, 0):
            for pc in _place(zc, c, 0, None, q, 0):
                for pe in _place(zu, e, 0, None, q, 0):
                    u1 = [0] * n
                    for part in (pa, pb, pc, pe):
                        for i, x in part.items():
                            u1[i] = x
                    yield u1


def _denormalize(digits: list[int], plan) -> Word:
    n, q, perm = plan["n"], plan["q"], plan["perm"]
    out = [0] * n
    for k, p in enumerate(perm):
        out[p] = digits[k]
    return Word(tuple(out), q) + plan["shift"]


def lemma3_family(v: MatrixWord, rho: float | Fraction, cap: int | None = 100_000,
                  seed: int = 0) -> tuple[Lemma3Instance, Iterator[CoverPair]]:
    """Covering pairs built zone by zone, each with w close to mu*n.

    Returns the zone diagnostics and a stream of distinct pairs.  When the
    number of construction choices exceeds ``cap``, the stream instead yields
    ``cap`` choices drawn at random (seeded) from the u2 and u1 choice lists,
    taken independently per zone.  ``instance.count`` is always the exact
    number of construction choices.
    """
    inst, plan = _zone_setup(v, rho)
    if inst.count == 0:
        raise UnsupportedInstance("construction has no choices for this instance")

    def exhaustive():
        seen = set()
        for u2n, zones in _u2_choices(plan):
            u2 = _denormalize(u2n, plan)
            for u1n in _u1_choices(plan, zones):
                u1 = _denormalize(u1n, plan)
                if u1 == u2:
                    continue
                pair = CoverPair(u1, u2)
                if pair not in seen:
                    seen.add(pair)
                    yield pair

    def sampled():
        gen = rng.stream(seed, 0)
        seen = set()
        for _ in range(cap):
            u2n, zones = _random_u2(plan, gen)
            u1n = _random_u1(plan, zones, gen)
            u1, u2 = _denormalize(u1n, plan), _denormalize(u2n, plan)
            if u1 == u2:
                continue
            pair = CoverPair(u1, u2)
            if pair not in seen:
                seen.add(pair)
                yield pair

    if cap is None or inst.count <= cap:
        return inst, exhaustive()
    return inst, sampled()


def _pick(gen, pool, k):
    pool = list(pool)
    idx = rng.partial_shuffle(gen, len(pool), k)
    return tuple(sorted(pool[int(i)] for i in idx))


def _random_u2(plan, gen):
    n, q, d, ref = plan["n"], plan["q"], plan["d"], plan["ref"]
    nc = _pick(gen, range(d), plan["l_nc"])
    nu = tuple(i for i in range(d) if i not in set(nc))
    nz = set(_pick(gen, nc, plan["u2_nz"]))
    zc = _pick(gen, range(d, n), plan["l_zc"])
    zu = tuple(i for i in range(d, n) if i not in set(zc))
    u2 = ref[:d] + [0] * (n - d)
    for i in nc:
        opts = _others(q, {0, ref[i]}) if i in nz else [0]
        u2[i] = opts[int(gen.integers(len(opts)))]
    for i in zc:
        u2[i] = int(gen.integers(1, q))
    return u2, (nu, nc, zc, zu)


def _random_u1(plan, zones, gen):
    n, q, ref = plan["n"], plan["q"], plan["ref"]
    a, b, c, e = plan["counts"]
    a_dis, b_dis = plan["dis"]
    nu, nc, zc, zu = zones
    u1 = [0] * n
    for zone, k, k_dis in ((nu, a, a_dis), (nc, b, b_dis)):
        pos = _pick(gen, zone, k)
        dis = set(_pick(gen, pos, k_dis))
        for i in pos:
            if i in dis:
                opts = _others(q, {0, ref[i]})
                u1[i] = opts[int(gen.integers(len(opts)))]
            else:
                u1[i] = ref[i]
    for zone, k in ((zc, c), (zu, e)):
        for i in _pick(gen, zone, k):
            u1[i] = int(gen.integers(1, q))
    return u1
