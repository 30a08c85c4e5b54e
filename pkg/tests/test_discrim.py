import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from betakw.discrim import (Rule, asymptotic_moments, min_sample_size, pcs, pcs_from_moments,
                            required_n, select, t_statistic)
from betakw.dist import Model, Sample, log_density, sample
from betakw.errors import DomainError, InfeasibleError
from betakw.pseudo import pseudo_true
from betakw.quadrature import expect_pair

off_one = st.floats(0.2, 5.0).filter(lambda v: abs(v - 1.0) > 0.05)


def lr_moments_oracle(null, params):
    """Mean and variance of log f_B - log f_K under the null, via scipy's beta density."""
    tgt = pseudo_true(null, params).target_params.as_tuple()
    bp, kp = (params, tgt) if null == "beta" else (tgt, params)
    fb = stats.beta(*bp).logpdf
    return expect_pair(lambda x: float(fb(x) - log_density("kumaraswamy", kp, x)),
                       null, params)


# ------------------------------------------------------------------- moments

@pytest.mark.parametrize("null,params", [("beta", (0.5, 2.5)), ("beta", (2.0, 0.6)),
                                         ("kumaraswamy", (0.5, 2.5)),
                                         ("kumaraswamy", (3.0, 2.0))])
def test_moments_match_independent_quadrature(null, params):
    mom = asymptotic_moments(null, params)
    am, av = lr_moments_oracle(null, params)
    assert mom.am == pytest.approx(am, abs=1e-9)
    assert mom.av == pytest.approx(av, abs=1e-9)


@pytest.mark.parametrize("null,params", [("beta", (0.5, 2.5)), ("kumaraswamy", (0.5, 2.5)),
                                         ("beta", (3.0, 4.0))])
def test_series_moments_agree_with_quadrature(null, params):
    mom = asymptotic_moments(null, params)
    assert mom.series_gap <= 1e-6


def test_beta_moments_printed_example():
    mom = asymptotic_moments("beta", (0.5, 2.5))
    assert mom.am == pytest.approx(0.000644, abs=5e-6)
    assert mom.av == pytest.approx(0.002422, abs=5e-6)


def test_kw_moments_printed_example():
    mom = asymptotic_moments("kumaraswamy", (0.5, 2.5))
    assert mom.am == pytest.approx(-0.001315, abs=5e-6)
    assert mom.av == pytest.approx(0.071849, abs=5e-5)


def test_intersection_moments_vanish():
    mom = asymptotic_moments("beta", (1, 7))
    assert (mom.am, mom.av) == (0.0, 0.0)


GRID25 = [(a, b) for a in (0.2, 0.5, 1.5, 2.5, 6.0) for b in (0.3, 0.7, 2.0, 3.5, 8.0)]


@pytest.mark.parametrize("p,q", GRID25)
def test_kl_sign(p, q):
    assert asymptotic_moments("beta", (p, q)).am >= -1e-10
    assert asymptotic_moments("kumaraswamy", (p, q)).am <= 1e-10


# ----------------------------------------------------------------------- PCS

def test_pcs_formula_against_scipy():
    want = stats.norm.cdf(math.sqrt(500) * 0.000644 / math.sqrt(0.002422))
    assert pcs_from_moments(Model.BETA, 0.000644, 0.002422, 500) == pytest.approx(want,
                                                                               abs=1e-12)
    assert pcs_from_moments(Model.KUMARASWAMY, -0.001, 0.004, 90) == pytest.approx(
        stats.norm.cdf(math.sqrt(90) * 0.001 / math.sqrt(0.004)), abs=1e-12)


def test_pcs_printed_arithmetic_example():
    assert pcs_from_moments(Model.BETA, 0.000644, 0.002422, 500) == pytest.approx(0.720,
                                                                               abs=5e-4)


def test_pcs_on_intersection():
    assert pcs("beta", (1, 3), 50) == 0.5
    assert pcs("kumaraswamy", (2, 1), 7) == 0.5


@given(st.sampled_from(["beta", "kumaraswamy"]), off_one, off_one, st.integers(1, 10_000))
def test_pcs_range_and_growth(null, p, q, n):
    lo, hi = pcs(null, (p, q), n), pcs(null, (p, q), n + 1)
    assert 0.5 <= lo < 1.0
    assert hi > lo or hi == lo == 1.0 or lo > 1 - 1e-12


def test_pcs_domain():
    with pytest.raises(DomainError):
        pcs("beta", (0.5, 2), 0)


# --------------------------------------------------------------------- T_n

def test_t_statistic_is_loglik_difference(beta_fixture):
    rep = t_statistic(Sample(beta_fixture))
    assert rep.t_stat == rep.fit_beta.loglik_at_max - rep.fit_kw.loglik_at_max


def test_expanded_form_on_100_samples():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        m = rng.choice(["beta", "kumaraswamy"])
        p = tuple(rng.uniform(0.3, 5, 2))
        rep = t_statistic(sample(m, p, int(rng.integers(20, 300)), rng))
        assert rep.expanded_residual < 1e-8


def test_uniform_sample_gives_small_t():
    rep = t_statistic(Sample(np.random.default_rng(5).uniform(size=1000)))
    assert abs(rep.t_stat) < 0.1


def _tn_draws(reps=1000, n=1000, seed=31):
    rng = np.random.default_rng(seed)
    return np.array([t_statistic(sample("beta", (0.2, 2.5), n, rng)).t_stat
                     for _ in range(reps)])


@pytest.fixture(scope="module")
def tn_draws():
    return _tn_draws()


def test_tn_mean_matches_am(tn_draws):
    mom = asymptotic_moments("beta", (0.2, 2.5))
    m = tn_draws / 1000
    se = m.std(ddof=1) / math.sqrt(m.size)
    assert abs(m.mean() - mom.am) <= 3 * se


def test_tn_variance_matches_av(tn_draws):
    mom = asymptotic_moments("beta", (0.2, 2.5))
    v = np.var(tn_draws / math.sqrt(1000), ddof=1)
    assert abs(v - mom.av) <= 0.10 * mom.av


def test_tn_mean_matches_printed_am(tn_draws):
    m = tn_draws / 1000
    se = m.std(ddof=1) / math.sqrt(m.size)
    assert abs(m.mean() - 0.003827) <= 3 * se


# -------------------------------------------------------------------- select

def test_select_regression_beta_null():
    rep = select(sample("beta", (0.2, 2.5), 500, np.random.default_rng(99)))
    assert rep.decision is Model.BETA
    assert rep.pcs_beta == pytest.approx(0.86199539, abs=1e-6)
    assert rep.pcs_kw == pytest.approx(0.85703080, abs=1e-6)
    assert rep.t_stat > 0
    assert rep.decision is (Model.BETA if rep.pcs_beta > rep.pcs_kw else Model.KUMARASWAMY)


def test_rules_agree_in_consistent_case():
    x = sample("beta", (0.2, 2.5), 500, np.random.default_rng(99))
    assert select(x, "akaike_sign").decision is select(x, Rule.MAX_PCS).decision


def test_uniform_sample_flagged():
    rep = select(Sample(np.random.default_rng(1).uniform(size=200)))
    assert rep.indistinguishable
    assert rep.pcs_beta == pytest.approx(0.5, abs=0.01)
    assert rep.pcs_kw == pytest.approx(0.5, abs=0.01)
    assert any("indistinguishable" in w for w in rep.warnings)


@pytest.mark.slow
def test_equivalent_inequality_on_random_pairs():
    rng = np.random.default_rng(77)
    for _ in range(1000):
        bp = tuple(rng.uniform(0.2, 5, 2))
        kp = tuple(rng.uniform(0.2, 5, 2))
        n = int(rng.integers(10, 2000))
        mb, mk = asymptotic_moments("beta", bp), asymptotic_moments("kumaraswamy", kp)
        pb = pcs_from_moments(Model.BETA, mb.am, mb.av, n)
        pk = pcs_from_moments(Model.KUMARASWAMY, mk.am, mk.av, n)
        if abs(pb - pk) < 1e-12:
            continue
        ineq = mk.am * math.sqrt(mb.av) > -mb.am * math.sqrt(mk.av)
        assert ineq == (pb > pk)


# --------------------------------------------------------------- sample size

def test_required_n_convention():
    assert required_n(1.0, 1.0, 3.0) == 4
    assert required_n(1.0, 1.0, 3.5) == 4
    assert required_n(0.0, 1.0, 3.0) == 1


def test_sample_size_convention_value():
    plan = min_sample_size("beta", (0.2, 3), 0.6)
    raw = plan.z_p ** 2 * asymptotic_moments("beta", (0.2, 3)).av / \
        asymptotic_moments("beta", (0.2, 3)).am ** 2
    assert plan.n_required == math.floor(raw) + 1 == 15
    assert abs(plan.n_required - 14) <= 2


def test_sample_size_printed_example():
    assert min_sample_size("beta", (0.2, 3), 0.6).n_required == 14


def test_sample_size_printed_example_high_p():
    assert min_sample_size("beta", (0.5, 3), 0.8).n_required == 859


def test_sample_size_near_half():
    assert min_sample_size("beta", (0.2, 3), 0.5 + 1e-12).n_required == 1


def test_sample_size_infeasible():
    with pytest.raises(InfeasibleError):
        min_sample_size("beta", (1, 3), 0.8)
    with pytest.raises(DomainError):
        min_sample_size("beta", (0.2, 3), 0.5)


def test_sample_size_round_trip():
    rng = np.random.default_rng(12)
    for _ in range(50):
        null = rng.choice(["beta", "kumaraswamy"])
        params = tuple(rng.uniform(0.2, 5, 2))
        p = float(rng.uniform(0.55, 0.95))
        plan = min_sample_size(null, params, p)
        assert plan.n_required >= 1
        assert pcs(null, params, plan.n_required) >= p
        if plan.n_required > 1:
            assert pcs(null, params, plan.n_required - 1) < p + 1e-12


def test_sample_size_monotone_in_p():
    ns = [min_sample_size("kumaraswamy", (0.5, 2.5), p).n_required
          for p in (0.55, 0.6, 0.7, 0.8, 0.9, 0.99)]
    assert ns == sorted(ns)
