import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import optimize, special

from betakw.dist import Sample, loglik, sample
from betakw.errors import ConvergenceError, InputError
from betakw.fit import GRAD_RTOL, fit_beta, fit_kw, moment_start, solve_beta_scores


def brute_force_mle(model, x, lo=0.01, hi=20.0, size=200):
    """Log-spaced grid over (lo, hi]^2 then Nelder-Mead from the best cell."""
    lx, l1x, n = np.log(x), np.log1p(-x), x.size

    def ll(p, q):
        if p <= 0 or q <= 0:
            return -np.inf
        if model == "beta":
            return -n * special.betaln(p, q) + (p - 1) * lx.sum() + (q - 1) * l1x.sum()
        return (n * math.log(p * q) + (p - 1) * lx.sum()
                + (q - 1) * np.log1p(-np.exp(p * lx)).sum())

    g = np.geomspace(lo, hi, size)
    vals = np.array([[ll(p, q) for q in g] for p in g])
    i, j = np.unravel_index(np.nanargmax(vals), vals.shape)
    res = optimize.minimize(lambda v: -ll(*np.exp(v)), np.log([g[i], g[j]]),
                            method="Nelder-Mead",
                            options={"xatol": 1e-11, "fatol": 1e-13, "maxiter": 20000})
    return np.exp(res.x)


def beta_gradient(x, a, b):
    dab = special.digamma(a + b)
    return (np.sum(np.log(x)) - x.size * (special.digamma(a) - dab),
            np.sum(np.log1p(-x)) - x.size * (special.digamma(b) - dab))


def kw_gradient(x, al, be):
    lx = np.log(x)
    xa = np.exp(al * lx)
    om = -np.expm1(al * lx)
    ga = x.size / al + lx.sum() - (be - 1) * np.sum(xa * lx / om)
    gb = x.size / be + np.sum(np.log1p(-xa))
    return ga, gb


def test_beta_fixture_matches_brute_force(beta_fixture):
    res = fit_beta(Sample(beta_fixture))
    ref = brute_force_mle("beta", beta_fixture)
    assert res.converged
    assert np.allclose(res.params.as_tuple(), ref, atol=1e-4)


def test_kw_fixture_matches_brute_force(kw_fixture):
    res = fit_kw(Sample(kw_fixture))
    ref = brute_force_mle("kumaraswamy", kw_fixture)
    assert res.converged
    assert np.allclose(res.params.as_tuple(), ref, atol=1e-4)


@pytest.mark.parametrize("fixture", ["beta_fixture", "kw_fixture"])
def test_cross_family_fixtures(fixture, request):
    x = request.getfixturevalue(fixture)
    assert np.allclose(fit_beta(Sample(x)).params.as_tuple(),
                       brute_force_mle("beta", x), atol=1e-4)
    assert np.allclose(fit_kw(Sample(x)).params.as_tuple(),
                       brute_force_mle("kumaraswamy", x), atol=1e-4)


def test_beta_consistency():
    x = sample("beta", (2, 3), 100_000, np.random.default_rng(8))
    a, b = fit_beta(x).params.as_tuple()
    assert abs(a - 2) < 0.05 and abs(b - 3) < 0.05


def test_kw_consistency():
    x = sample("kumaraswamy", (2, 2.5), 100_000, np.random.default_rng(9))
    al, be = fit_kw(x).params.as_tuple()
    assert abs(al - 2) < 0.05 and abs(be - 2.5) < 0.05


def test_beta_ascent_from_moment_start():
    x = sample("beta", (0.6, 1.7), 1000, np.random.default_rng(10))
    res = fit_beta(x)
    start = moment_start(x.values)
    assert res.loglik_at_max >= loglik("beta", start, x)


params = st.tuples(st.floats(0.15, 8.0), st.floats(0.15, 8.0))


@given(params, st.integers(20, 400), st.integers(0, 2 ** 32 - 1))
def test_beta_score_at_solution(p, n, seed):
    x = sample("beta", p, n, np.random.default_rng(seed))
    res = fit_beta(x)
    g = beta_gradient(x.values, *res.params.as_tuple())
    assert math.hypot(*g) <= GRAD_RTOL * (1 + abs(res.loglik_at_max)) * 10
    assert res.grad_norm <= GRAD_RTOL * (1 + abs(res.loglik_at_max))


@given(params, st.integers(20, 400), st.integers(0, 2 ** 32 - 1))
def test_kw_score_and_profile_identity(p, n, seed):
    x = sample("kumaraswamy", p, n, np.random.default_rng(seed))
    res = fit_kw(x)
    al, be = res.params.as_tuple()
    s0 = np.sum(np.log1p(-np.exp(al * np.log(x.values))))
    assert be * s0 == pytest.approx(-n, rel=1e-9)
    g = kw_gradient(x.values, al, be)
    assert math.hypot(*g) <= GRAD_RTOL * (1 + abs(res.loglik_at_max)) * 10


@given(params, st.integers(20, 200), st.integers(0, 2 ** 32 - 1))
def test_beta_reflection(p, n, seed):
    x = sample("beta", p, n, np.random.default_rng(seed)).values
    # quantise to a dyadic grid so that 1 - x is exact
    q = 2.0 ** -40
    x = np.clip(np.round(x / q) * q, q, 1 - q)
    if np.var(x) < 1e-12:
        return
    fwd = fit_beta(Sample(x)).params.as_tuple()
    rev = fit_beta(Sample(1.0 - x)).params.as_tuple()
    assert rev[0] == pytest.approx(fwd[1], rel=1e-6)
    assert rev[1] == pytest.approx(fwd[0], rel=1e-6)


def test_monotone_ascent_of_solver():
    # each accepted iterate must not lower the objective
    t1, t2 = -2.3, -0.4
    objs = []
    for it in range(1, 12):
        try:
            a, b, obj, *_ = solve_beta_scores(t1, t2, (50.0, 0.01), max_iter=it)
            objs.append(obj)
            break
        except ConvergenceError as exc:
            a, b = exc.best.as_tuple()
            objs.append((a - 1) * t1 + (b - 1) * t2 - special.betaln(a, b))
    assert all(b >= a - 1e-12 for a, b in zip(objs, objs[1:]))


@pytest.mark.parametrize("fitter", [fit_beta, fit_kw])
def test_degenerate_samples_refused(fitter):
    with pytest.raises(InputError):
        fitter(Sample([0.3]))
    with pytest.raises(InputError):
        fitter(Sample([0.4] * 10))


def test_non_convergence_reports_best():
    with pytest.raises(ConvergenceError) as info:
        solve_beta_scores(-2.3, -0.4, (50.0, 0.01), max_iter=1)
    assert info.value.best is not None
