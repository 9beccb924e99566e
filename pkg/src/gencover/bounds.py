"""Closed-form rate functions for second-order covering codes and their checks.

All values are doubles.  ``x log x`` at 0 is taken as 0 by an explicit branch.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from math import comb, floor, log

from .words import ball_size


@dataclass(frozen=True)
class EntropySpec:
    base: int
    x: float

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("entropy base must be >= 2")
        if not 0.0 <= self.x <= 1.0:
            raise ValueError(f"entropy argument {self.x} outside [0, 1]")

    def value(self) -> float:
        return entropy(self.base, self.x)


@dataclass(frozen=True)
class BoundPoint:
    rho: float
    lower: float
    kappa2: float
    upper_trivial: float | None = None
    upper_better: float | None = None


def _xlogx(x: float) -> float:
    return 0.0 if x == 0.0 else x * log(x)


def entropy(q: int, x: float) -> float:
    """q-ary entropy H_q(x)."""
    if q < 2:
        raise ValueError("entropy base must be >= 2")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"entropy argument {x} outside [0, 1]")
    nats = x * log(q - 1) - _xlogx(x) - _xlogx(1.0 - x)
    return nats / log(q)


def kappa1(rho: float, q: int) -> float:
    """Optimal first-order covering rate."""
    if rho >= 1.0 - 1.0 / q:
        return 0.0
    return 1.0 - entropy(q, rho)


def kappa2(rho: float, q: int) -> float:
    """Optimal second-order covering rate, 1 - H_{q^2}(rho) below 1 - 1/q^2."""
    Q = q * q
    if rho >= 1.0 - 1.0 / Q:
        return 0.0
    return 1.0 - entropy(Q, rho)


def lower_ball_covering(rho: float, q: int) -> float:
    """Ball-covering lower bound on the second-order rate."""
    Q = q * q
    if rho >= 1.0 - 1.0 / Q:
        return 0.0
    return 1.0 - entropy(Q, rho)


def upper_trivial(rho: float) -> float:
    """Binary upper bound 1 - H_2(rho/2)."""
    return 1.0 - entropy(2, rho / 2.0)


def s_func(rho: float) -> float:
    if not 0.0 <= rho < 0.75:
        raise ValueError("s(rho) is only defined on [0, 3/4)")
    return (1.0 + 8.0 * rho - math.sqrt(1.0 + 16.0 * rho - 16.0 * rho * rho)) / 10.0


def f_func(rho: float) -> float:
    s = s_func(rho)
    inner = (rho - s) / (1.0 - s)
    # s <= rho keeps inner in [0, 1]; clamp rounding noise at the ends
    inner = min(max(inner, 0.0), 1.0)
    return entropy(2, s) + 2.0 * s + 2.0 * (1.0 - s) * entropy(2, inner)


def upper_better(rho: float) -> float:
    """Binary upper bound 1 - (4 H_4(rho) - f(rho)), zero from rho = 3/4 on."""
    if rho >= 0.75:
        return 0.0
    return 1.0 - (4.0 * entropy(4, rho) - f_func(rho))


def f_mu(mu: float, rho: float, q: int) -> float:
    """Exponent of the n_A upper estimate for pairs with w_A = mu*n."""
    if mu > rho:
        raise ValueError(f"mu={mu} exceeds rho={rho}")
    if mu < 0.0:
        raise ValueError("mu must be non-negative")
    if mu <= 1.0 - q * (1.0 - rho):
        return 1.0
    return mu + (1.0 - mu) * entropy(q, (rho - mu) / (1.0 - mu))


def entropy_identity_residual(rho: float, q: int) -> float:
    """|H_q(mu) + mu + (1-mu) H_q((rho-mu)/(1-mu)) - 2 H_{q^2}(rho)| at mu = q rho/(q+1)."""
    mu = q * rho / (q + 1)
    lhs = entropy(q, mu) + mu + (1.0 - mu) * entropy(q, (rho - mu) / (1.0 - mu))
    return abs(lhs - 2.0 * entropy(q * q, rho))


def phi(rho: float, q: int) -> float:
    """H_q(q rho/(q+1)) - H_{q^2}(rho); its positive range bounds the admissible epsilon."""
    if not 0.0 <= rho <= 1.0 - 1.0 / (q * q):
        raise ValueError(f"rho={rho} outside [0, 1 - 1/q^2]")
    return entropy(q, q * rho / (q + 1)) - entropy(q * q, rho)


def inverse_binomial_moment(m: int, p: float) -> float:
    """E[1/(Y+1)] for Y ~ Bin(m, p)."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    # 1 - (1-p)^(m+1) without cancellation for small p
    num = -math.expm1((m + 1) * math.log1p(-p)) if p < 1.0 else 1.0
    return num / (p * (m + 1))


def binomial_tail_bound(n: int, p: float, a: float) -> float:
    """Upper bound on P[X >= np + a] for X ~ Bin(n, p)."""
    mean = n * p
    if mean == 0:
        raise ValueError("n*p must be positive")
    if a <= 0:
        raise ValueError("a must be positive")
    return math.exp(-(a * a) / (2.0 * mean) * (1.0 - a / (3.0 * mean)))


def binomial_tail_bound_gamma(n: int, p: float, gamma: float) -> float:
    """Same bound with a = gamma * n * p: P[X >= (1+gamma) np]."""
    return binomial_tail_bound(n, p, gamma * n * p)


def log_ball_size(t: int, r: int, n: int, q: int) -> float:
    """Natural log of the exact ball size (math.log is exact-int aware)."""
    return log(ball_size(t, r, n, q))


def ball_entropy_check(t: int, n: int, q: int, rho: float, rel_tol: float = 0.0) -> bool:
    """Exact V^(t)_{floor(rho n), n, q} <= q^(t n H_{q^t}(rho)), compared in the log domain."""
    Q = q**t
    if not 0.0 <= rho <= 1.0 - 1.0 / Q:
        raise ValueError(f"rho={rho} outside [0, 1 - 1/q^t]")
    r = floor(rho * n)
    lhs = log_ball_size(t, r, n, q)
    rhs = t * n * entropy(Q, rho) * log(q)
    return lhs <= rhs + rel_tol * max(1.0, rhs)


def ball_entropy_gap(t: int, n: int, q: int, rho: float) -> float:
    """log_q(V)/(tn) - H_{q^t}(rho); tends to 0 with n (reported, not asserted)."""
    Q = q**t
    r = floor(rho * n)
    return log_ball_size(t, r, n, q) / (t * n * log(q)) - entropy(Q, rho)


def grid(points: int, lo: float = 0.0, hi: float = 1.0) -> list[float]:
    if points < 2:
        raise ValueError("need at least 2 grid points")
    pts = [lo + (hi - lo) * i / (points - 1) for i in range(points - 1)]
    pts.append(hi)
    return pts


def emit_rate_curves(q: int, grid_points: int) -> list[BoundPoint]:
    rows = []
    for rho in grid(grid_points):
        lo = lower_ball_covering(rho, q)
        k2 = kappa2(rho, q)
        if q == 2:
            rows.append(BoundPoint(rho, lo, k2, upper_trivial(rho), upper_better(rho)))
        else:
            rows.append(BoundPoint(rho, lo, k2))
    return rows


CSV_HEADER = ("rho", "lower", "kappa2", "upper_trivial", "upper_better")


def curves_to_csv(points: list[BoundPoint]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    fmt = lambda x: "" if x is None else f"{x:.12g}"  # noqa: E731
    for p in points:
        writer.writerow([fmt(p.rho), fmt(p.lower), fmt(p.kappa2), fmt(p.upper_trivial), fmt(p.upper_better)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# grid suites shared by the CLI `bounds check` and the acceptance tests


def identity_suite(points: int = 1000, qs=(2, 3, 4, 5)) -> float:
    """Largest entropy-identity residual over an interior rho grid."""
    worst = 0.0
    for q in qs:
        hi = 1.0 - 1.0 / (q * q)
        for i in range(1, points + 1):
            rho = hi * i / (points + 1)
            worst = max(worst, entropy_identity_residual(rho, q))
    return worst


def phi_suite(points: int = 1000, qs=(2, 3, 4, 5)) -> tuple[float, float]:
    """(min phi over the open interval grid, max |phi| at the two endpoints)."""
    min_interior, max_end = math.inf, 0.0
    for q in qs:
        hi = 1.0 - 1.0 / (q * q)
        for i in range(1, points + 1):
            min_interior = min(min_interior, phi(hi * i / (points + 1), q))
        max_end = max(max_end, abs(phi(0.0, q)), abs(phi(hi, q)))
    return min_interior, max_end


def ball_entropy_suite(ts=(1, 2), qs=(2, 3), ns=range(5, 31), points: int = 20) -> list[tuple[int, int, int, float]]:
    """All (t, q, n, rho) where the exact ball size exceeds q^(tnH); empty means pass."""
    violations = []
    for t in ts:
        for q in qs:
            hi = 1.0 - 1.0 / q**t
            for n in ns:
                for rho in grid(points, 0.0, hi):
                    if not ball_entropy_check(t, n, q, rho):
                        violations.append((t, q, n, rho))
    return violations


def binomial_pmf(n: int, k: int, p: float) -> float:
    return comb(n, k) * p**k * (1.0 - p) ** (n - k)
