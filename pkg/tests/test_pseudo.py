import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import optimize

from betakw.dist import BetaParams, KwParams, sample
from betakw.fit import fit_beta, fit_kw
from betakw.pseudo import (kkt_residual, lambda_value, pseudo_beta_of_kw, pseudo_kw_of_beta,
                           pseudo_true)

shape = st.floats(0.2, 6.0)


def brute_force_target(source, params, start):
    """Nelder-Mead on the quadrature value of Lambda (independent of the series)."""
    def neg(v):
        p, q = np.exp(v)
        tgt = KwParams(p, q) if source == "beta" else BetaParams(p, q)
        return -lambda_value(pseudo_true(source, params).source_model, params, tgt,
                             "quadrature")
    res = optimize.minimize(neg, np.log(start), method="Nelder-Mead",
                            options={"xatol": 1e-9, "fatol": 1e-14, "maxiter": 4000})
    return np.exp(res.x)


@pytest.mark.parametrize("a,b", [(0.5, 2.5), (2.0, 2.5), (0.2, 3.0), (5.0, 0.7)])
def test_kw_of_beta_matches_quadrature_maximiser(a, b):
    pair = pseudo_kw_of_beta(BetaParams(a, b))
    ref = brute_force_target("beta", BetaParams(a, b), pair.target_params.as_tuple())
    assert np.allclose(pair.target_params.as_tuple(), ref, rtol=1e-5)


@pytest.mark.parametrize("al,be", [(0.5, 2.5), (2.0, 2.5), (0.2, 2.0), (3.0, 0.6)])
def test_beta_of_kw_matches_quadrature_maximiser(al, be):
    pair = pseudo_beta_of_kw(KwParams(al, be))
    ref = brute_force_target("kumaraswamy", KwParams(al, be), pair.target_params.as_tuple())
    assert np.allclose(pair.target_params.as_tuple(), ref, rtol=1e-5)


@given(shape)
def test_fixed_points(s):
    for src in ("beta", "kumaraswamy"):
        for params in ((1.0, s), (s, 1.0)):
            pair = pseudo_true(src, params)
            assert np.allclose(pair.target_params.as_tuple(), params, atol=1e-8)
            assert pair.method == "fixed_point"


@given(shape, shape)
def test_kkt_and_positivity(p, q):
    for src in ("beta", "kumaraswamy"):
        pair = pseudo_true(src, (p, q))
        assert pair.kkt_residual <= 1e-9
        assert kkt_residual(pair) <= 1e-8
        assert min(pair.target_params.as_tuple()) > 0


@pytest.mark.parametrize("src,params", [("beta", (0.5, 2.5)), ("beta", (3.0, 0.8)),
                                        ("kumaraswamy", (0.5, 2.5)),
                                        ("kumaraswamy", (2.0, 4.0))])
def test_optimality_certificate(src, params):
    pair = pseudo_true(src, params)
    tgt = np.array(pair.target_params.as_tuple())
    cls = type(pair.target_params)
    best = lambda_value(pair.source_model, pair.source_params, pair.target_params,
                        "quadrature")
    rng = np.random.default_rng(17)
    for _ in range(100):
        d = rng.normal(size=2)
        d *= rng.uniform(0, 0.1) / np.linalg.norm(d)
        other = cls(*(tgt + d))
        val = lambda_value(pair.source_model, pair.source_params, other, "quadrature")
        assert best >= val - 1e-12


def test_series_and_quadrature_lambda_agree():
    pair = pseudo_true("beta", (0.7, 2.0))
    s = lambda_value(pair.source_model, pair.source_params, pair.target_params, "series")
    q = lambda_value(pair.source_model, pair.source_params, pair.target_params, "quadrature")
    assert s == pytest.approx(q, abs=1e-9)


@pytest.mark.parametrize("src,params", [("beta", (0.5, 2.5)), ("kumaraswamy", (0.5, 2.5))])
def test_almost_sure_limit(src, params):
    x = sample(src, params, 1_000_000, np.random.default_rng(23))
    fitted = (fit_kw(x) if src == "beta" else fit_beta(x)).params.as_tuple()
    target = pseudo_true(src, params).target_params.as_tuple()
    assert np.allclose(fitted, target, atol=0.02)


def test_target_model_property():
    assert pseudo_true("beta", (0.5, 2.0)).target_model.value == "kumaraswamy"
