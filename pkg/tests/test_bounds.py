import csv
import io
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from gencover import bounds
from gencover.bounds import (
    ball_entropy_check, binomial_tail_bound, binomial_tail_bound_gamma, curves_to_csv, emit_rate_curves,
    entropy, entropy_identity_residual, f_func, f_mu, grid, inverse_binomial_moment, kappa1, kappa2,
    lower_ball_covering, phi, s_func, upper_better, upper_trivial,
)

mp.mp.dps = 40


def H_mp(q, x):
    x = mp.mpf(x)
    if x == 0:
        return mp.mpf(0)
    if x == 1:
        return mp.log(q - 1, q)
    return x * mp.log(q - 1, q) - x * mp.log(x, q) - (1 - x) * mp.log(1 - x, q)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 9])
def test_entropy_matches_mpmath(q):
    for x in np.linspace(0, 1, 41):
        assert entropy(q, float(x)) == pytest.approx(float(H_mp(q, x)), abs=1e-14)


def test_entropy_examples():
    assert entropy(2, 0.5) == pytest.approx(1.0)
    assert entropy(4, 0.75) == pytest.approx(1.0)
    assert entropy(3, 0.0) == 0.0
    with pytest.raises(ValueError):
        entropy(2, 1.5)
    with pytest.raises(ValueError):
        bounds.EntropySpec(1, 0.5)


def test_rate_examples():
    assert kappa1(0.1, 2) == pytest.approx(float(1 - H_mp(2, 0.1)), abs=1e-12)
    assert kappa1(0.1, 2) == pytest.approx(0.531004, abs=1e-6)
    assert upper_trivial(0.5) == pytest.approx(0.188722, abs=1e-6)
    assert kappa2(0.0, 2) == 1.0
    assert kappa2(0.75, 2) == 0.0
    assert upper_better(0.75) == 0.0
    assert upper_better(0.0) == pytest.approx(1.0, abs=1e-15)


def test_f_mu_against_mpmath():
    mu, rho = mp.mpf("0.3"), mp.mpf("0.5")
    ref = mu + (1 - mu) * H_mp(2, (rho - mu) / (1 - mu))
    assert f_mu(0.3, 0.5, 2) == pytest.approx(float(ref), abs=1e-12)
    assert f_mu(0.3, 0.5, 2) == pytest.approx(0.9041844, abs=1e-7)
    assert f_mu(0.4, 0.4, 2) == pytest.approx(0.4)
    assert f_mu(0.0, 0.0, 2) == 0.0
    assert f_mu(0.5, 0.8, 2) == 1.0
    with pytest.raises(ValueError):
        f_mu(0.6, 0.5, 2)


def test_s_and_f_against_mpmath():
    for rho in np.linspace(0, 0.74, 38):
        r = mp.mpf(float(rho))
        s = (1 + 8 * r - mp.sqrt(1 + 16 * r - 16 * r * r)) / 10
        assert s_func(float(rho)) == pytest.approx(float(s), abs=1e-14)
        assert 0.0 <= s_func(float(rho)) <= rho + 1e-15
        f = H_mp(2, s) + 2 * s + 2 * (1 - s) * H_mp(2, (r - s) / (1 - s))
        assert f_func(float(rho)) == pytest.approx(float(f), abs=1e-12)
    with pytest.raises(ValueError):
        s_func(0.75)


@given(st.integers(2, 6), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_entropy_concave(q, a, b, lam):
    mid = lam * a + (1 - lam) * b
    assert entropy(q, mid) >= lam * entropy(q, a) + (1 - lam) * entropy(q, b) - 1e-12


@given(st.integers(2, 5), st.floats(0, 1))
def test_kappa2_is_kappa1_over_q_squared(q, rho):
    assert kappa2(rho, q) == pytest.approx(kappa1(rho, q * q), abs=1e-15)
    assert lower_ball_covering(rho, q) == kappa2(rho, q)


CROSSOVER = 0.14501908646062695  # root of upper_better - upper_trivial, found with mpmath


def test_bound_ordering_binary():
    for rho in grid(1001, 0.0, 0.7499):
        assert kappa2(rho, 2) <= upper_better(rho) + 1e-12
        if rho >= CROSSOVER:
            assert upper_better(rho) <= upper_trivial(rho) + 1e-12


def test_better_bound_is_weaker_near_zero():
    # s(rho) ~ 4 rho^2, so the "better" bound decays only linearly while
    # 1 - H_2(rho/2) has a rho log(1/rho) term
    for rho in (0.001, 0.05, 0.1, 0.14):
        assert upper_better(rho) > upper_trivial(rho)
    assert upper_better(0.5) < upper_trivial(0.5)
    assert kappa2(0.5, 2) < upper_better(0.5)


def test_entropy_identity_pointwise():
    for q in (2, 3, 7):
        for rho in np.linspace(0.01, 1 - 1 / q**2 - 0.01, 50):
            assert entropy_identity_residual(float(rho), q) < 1e-12


def test_phi_endpoints_and_sign():
    for q in (2, 3, 4, 5):
        assert abs(phi(0.0, q)) < 1e-12
        assert abs(phi(1 - 1 / q**2, q)) < 1e-12
        assert phi(0.3, q) > 0
    with pytest.raises(ValueError):
        phi(0.9, 2)


def test_inverse_binomial_moment_direct_sum():
    for m in range(21):
        for p in (1e-6, 0.01, 0.25, 0.5, 0.9, 1.0):
            direct = sum(math.comb(m, k) * p**k * (1 - p) ** (m - k) / (k + 1) for k in range(m + 1))
            assert inverse_binomial_moment(m, p) == pytest.approx(direct, abs=1e-12)
    assert inverse_binomial_moment(0, 0.3) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        inverse_binomial_moment(3, 0.0)


def test_inverse_binomial_moment_decreasing():
    for p in (0.1, 0.5):
        vals = [inverse_binomial_moment(m, p) for m in range(30)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
    vals = [inverse_binomial_moment(10, p) for p in np.linspace(0.05, 1, 20)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_binomial_tail_bound_dominates_monte_carlo():
    n, p, a = 100, 0.5, 10
    bound = binomial_tail_bound(n, p, a)
    rng = np.random.default_rng(0)
    freq = (rng.binomial(n, p, 200_000) >= n * p + a).mean()
    exact = sum(math.comb(n, k) for k in range(60, 101)) / 2**100
    assert freq == pytest.approx(exact, abs=0.003)
    assert exact <= bound
    assert binomial_tail_bound_gamma(n, p, 0.2) == bound
    with pytest.raises(ValueError):
        binomial_tail_bound(10, 0.0, 1)


def test_binomial_tail_bound_exact_sweep():
    for n in (20, 50):
        for p in (0.1, 0.5):
            for a in (1, 3, 5):
                exact = sum(bounds.binomial_pmf(n, k, p) for k in range(n + 1) if k >= n * p + a)
                assert exact <= binomial_tail_bound(n, p, a) + 1e-15


def test_ball_entropy_examples():
    assert ball_entropy_check(2, 10, 2, 0.5)
    assert ball_entropy_check(1, 7, 3, 0.0)
    assert bounds.ball_entropy_gap(2, 30, 2, 0.5) <= 0
    with pytest.raises(ValueError):
        ball_entropy_check(1, 5, 2, 0.9)


def test_grid_endpoints():
    g = grid(5, 0.0, 0.75)
    assert g[0] == 0.0 and g[-1] == 0.75 and len(g) == 5


def test_curves_csv_schema():
    text = curves_to_csv(emit_rate_curves(2, 11))
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == list(bounds.CSV_HEADER)
    assert len(rows) == 12
    assert "\r" not in text
    assert [float(x) for x in rows[1]] == [0, 1, 1, 1, 1]
    q3 = list(csv.reader(io.StringIO(curves_to_csv(emit_rate_curves(3, 5)))))
    assert all(r[3] == "" and r[4] == "" for r in q3[1:])
