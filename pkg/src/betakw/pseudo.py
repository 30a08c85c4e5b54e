"""Pseudo-true parameters: the limit of the wrong family's MLE.

For a beta source ``(a, b)`` the Kumaraswamy pseudo-true pair maximises
``Lambda_B(alpha, beta) = E_B[log f_K(X; alpha, beta)]``.  The inner
maximisation in ``beta`` is explicit, ``beta(alpha) = B(a, b) / F(a, b, alpha)``,
leaving a scalar root in ``alpha``.

For a Kumaraswamy source the beta pseudo-true pair solves the beta score
equations with the population means of ``log X`` and ``log(1 - X)`` in place
of the sample means, so the MLE solver is reused unchanged.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

from scipy import optimize

from ._backend import kernels as _k
from .dist import BetaParams, KwParams, Model, _check_params
from .errors import ConvergenceError, EvaluationError
from .fit import BOX_HI, BOX_LO, solve_beta_scores
from .quadrature import _log_pdf_scalar, expect, log1m_pow_scalar
from .specfun import SeriesKind, eval_series

FIXED_POINT_TOL = 1e-10
CERTIFY_TOL = 1e-6
_SERIES_TOL = 1e-13
_FD_STEP = 1e-5


@dataclass(frozen=True)
class PseudoTruePair:
    source_model: Model
    source_params: BetaParams | KwParams
    target_params: BetaParams | KwParams
    lambda_at_max: float
    kkt_residual: float
    method: str = "series"

    @property
    def target_model(self) -> Model:
        return self.source_model.other


# ---------------------------------------------------------------- series pieces

def _series(kind: SeriesKind, x, y, z):
    try:
        return eval_series(kind, x, y, z, tol=_SERIES_TOL).value
    except EvaluationError:
        return _series_by_quadrature(kind, x, y, z)


def _series_by_quadrature(kind, x, y, z):
    # F and G as beta expectations (times B(x, y))
    if kind is SeriesKind.F:
        h = lambda t, tc: -log1m_pow_scalar(t, tc, z)
    elif kind is SeriesKind.G:
        def h(t, tc):
            lt = math.log(t) if tc >= 0.5 else math.log1p(-tc)
            return math.exp(z * lt - log1m_pow_scalar(t, tc, z)) * lt
    else:
        raise ValueError(kind)
    return expect(h, Model.BETA, BetaParams(x, y), complement=True) * math.exp(_k.lbeta(x, y))


def beta_log_moments(params: BetaParams) -> tuple[float, float]:
    """E log X and E log(1 - X) under a beta law."""
    dab = _k.digamma(params.a + params.b)
    return _k.digamma(params.a) - dab, _k.digamma(params.b) - dab


def kw_log_moments(params: KwParams) -> tuple[float, float]:
    """E log X and E log(1 - X) under a Kumaraswamy law.

    ``X**alpha`` is Beta(1, beta), which gives ``E log X`` in closed form and
    ``E log(1 - X) = -beta F(1, beta, 1/alpha)``.
    """
    al, be = params.alpha, params.beta
    t1 = -_k.digamma_diff(1.0, be) / al
    t2 = -be * _series(SeriesKind.F, 1.0, be, 1.0 / al)
    return t1, t2


def lambda_beta_source(src: BetaParams, tgt: KwParams, method: str = "series") -> float:
    """E_B[log f_K(X; alpha, beta)] for X ~ Beta(a, b)."""
    if method == "quadrature":
        return expect(lambda x, xc: _log_pdf_scalar(Model.KUMARASWAMY, tgt, x, xc),
                      Model.BETA, src, complement=True)
    t1, _ = beta_log_moments(src)
    f = _series(SeriesKind.F, src.a, src.b, tgt.alpha)
    return (math.log(tgt.alpha * tgt.beta) + (tgt.alpha - 1.0) * t1
            - (tgt.beta - 1.0) * f * math.exp(-_k.lbeta(src.a, src.b)))


def lambda_kw_source(src: KwParams, tgt: BetaParams, method: str = "series") -> float:
    """E_K[log f_B(X; a, b)] for X ~ Kw(alpha, beta)."""
    if method == "quadrature":
        return expect(lambda x, xc: _log_pdf_scalar(Model.BETA, tgt, x, xc),
                      Model.KUMARASWAMY, src, complement=True)
    t1, t2 = kw_log_moments(src)
    return (tgt.a - 1.0) * t1 + (tgt.b - 1.0) * t2 - _k.lbeta(tgt.a, tgt.b)


def lambda_value(source_model, src, tgt, method: str = "series") -> float:
    if source_model is Model.BETA:
        return lambda_beta_source(src, tgt, method)
    return lambda_kw_source(src, tgt, method)


# ---------------------------------------------------------- quadrature fallback

def _golden(f, lo, hi, tol=1e-7):
    """Maximise a unimodal f on [lo, hi]."""
    res = optimize.minimize_scalar(lambda t: -f(t), bounds=(lo, hi),
                                   method="bounded", options={"xatol": tol})
    return float(res.x)


def _quadrature_maximize(lam, start, rounds=3):
    """Maximise lam(p, q) from quadrature values alone.

    Coordinate-wise golden section in log-parameters, then Newton steps on
    central-difference gradients and Hessian.
    """
    p, q = start
    for _ in range(rounds):
        p = math.exp(_golden(lambda s: lam(math.exp(s), q),
                             math.log(p) - 1.0, math.log(p) + 1.0))
        q = math.exp(_golden(lambda s: lam(p, math.exp(s)),
                             math.log(q) - 1.0, math.log(q) + 1.0))
    h = _FD_STEP
    for _ in range(10):
        grad, hess = _fd_derivatives(lam, p, q, h)
        det = hess[0][0] * hess[1][1] - hess[0][1] ** 2
        if not (hess[0][0] < 0.0 and det > 0.0):
            break
        dp = (hess[1][1] * grad[0] - hess[0][1] * grad[1]) / det
        dq = (hess[0][0] * grad[1] - hess[0][1] * grad[0]) / det
        if not (p - dp > 0.0 and q - dq > 0.0):
            break
        p, q = p - dp, q - dq
        if math.hypot(dp, dq) < 1e-9 * (1.0 + math.hypot(p, q)):
            break
    grad, _ = _fd_derivatives(lam, p, q, h)
    return p, q, math.hypot(*grad)


def _fd_derivatives(lam, p, q, h):
    f0 = lam(p, q)
    fpp, fpm = lam(p + h, q), lam(p - h, q)
    fqp, fqm = lam(p, q + h), lam(p, q - h)
    fxy = (lam(p + h, q + h) - lam(p + h, q - h) - lam(p - h, q + h)
           + lam(p - h, q - h)) / (4.0 * h * h)
    grad = ((fpp - fpm) / (2.0 * h), (fqp - fqm) / (2.0 * h))
    hess = (((fpp - 2.0 * f0 + fpm) / (h * h), fxy),
            (fxy, (fqp - 2.0 * f0 + fqm) / (h * h)))
    return grad, hess


# ------------------------------------------------------------------ beta source

def _profile_beta(src: BetaParams, alpha: float) -> tuple[float, float, float]:
    """(phi(alpha), beta(alpha), F) along the exact beta-profile."""
    lb = _k.lbeta(src.a, src.b)
    f = _series(SeriesKind.F, src.a, src.b, alpha)
    g = _series(SeriesKind.G, src.a, src.b, alpha)
    beta = math.exp(lb) / f
    t1, _ = beta_log_moments(src)
    phi = 1.0 / alpha + t1 - (beta - 1.0) * g * math.exp(-lb)
    return phi, beta, f


def _bracket_log(fun, start, lo=BOX_LO, hi=BOX_HI):
    """Expand [start/2, 2 start] geometrically until fun changes sign."""
    left, right = max(start / 2.0, lo), min(start * 2.0, hi)
    f_left, f_right = fun(left), fun(right)
    while f_left < 0.0 and left > lo:
        left, f_left = max(left / 4.0, lo), fun(max(left / 4.0, lo))
    while f_right > 0.0 and right < hi:
        right, f_right = min(right * 4.0, hi), fun(min(right * 4.0, hi))
    if not (f_left >= 0.0 >= f_right):
        raise ConvergenceError(
            f"pseudo-true root not bracketed in ({lo:g}, {hi:g})")
    return left, right


@functools.lru_cache(maxsize=4096)
def _kw_of_beta(a: float, b: float) -> PseudoTruePair:
    src = BetaParams(a, b)
    if abs(a - 1.0) < FIXED_POINT_TOL or abs(b - 1.0) < FIXED_POINT_TOL:
        # Beta(1, b) = Kw(1, b) and Beta(a, 1) = Kw(a, 1)
        tgt = KwParams(a, b)
        return PseudoTruePair(Model.BETA, src, tgt,
                              lambda_beta_source(src, tgt), 0.0, "fixed_point")
    phi = lambda al: _profile_beta(src, al)[0]
    lo, hi = _bracket_log(phi, a)
    alpha = optimize.brentq(phi, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
    res, beta, f = _profile_beta(src, alpha)
    tgt = KwParams(alpha, beta)
    d_beta = 1.0 / beta - f * math.exp(-_k.lbeta(a, b))
    kkt = math.hypot(res, d_beta)
    lam = lambda_beta_source(src, tgt)
    lam_q = lambda_beta_source(src, tgt, "quadrature")
    if abs(lam - lam_q) <= CERTIFY_TOL:
        return PseudoTruePair(Model.BETA, src, tgt, lam, kkt, "series")
    lamq = lambda p, q: lambda_beta_source(src, KwParams(p, q), "quadrature")
    p, q, g = _quadrature_maximize(lamq, (alpha, beta))
    tgt = KwParams(p, q)
    return PseudoTruePair(Model.BETA, src, tgt, lamq(p, q), g, "quadrature")


def pseudo_kw_of_beta(params) -> PseudoTruePair:
    """Kumaraswamy pseudo-true parameters for a beta source."""
    params = _check_params(Model.BETA, params)
    return _kw_of_beta(params.a, params.b)


# ----------------------------------------------------------- Kumaraswamy source

def beta_hessian(a: float, b: float):
    """Hessian of (a-1) t1 + (b-1) t2 - log B(a, b); independent of t1, t2."""
    tab = _k.trigamma(a + b)
    return ((tab - _k.trigamma(a), tab), (tab, tab - _k.trigamma(b)))


@functools.lru_cache(maxsize=4096)
def _beta_of_kw(alpha: float, beta: float) -> PseudoTruePair:
    src = KwParams(alpha, beta)
    if abs(alpha - 1.0) < FIXED_POINT_TOL or abs(beta - 1.0) < FIXED_POINT_TOL:
        tgt = BetaParams(alpha, beta)
        return PseudoTruePair(Model.KUMARASWAMY, src, tgt,
                              lambda_kw_source(src, tgt), 0.0, "fixed_point")
    t1, t2 = kw_log_moments(src)
    a, b, lam, _, gnorm = solve_beta_scores(t1, t2, (alpha, beta))
    (h11, h12), (_, h22) = beta_hessian(a, b)
    if not (h11 < 0.0 and h11 * h22 - h12 * h12 > 0.0):
        raise ConvergenceError("beta pseudo-true stationary point is not a maximum",
                               best=BetaParams(a, b))
    tgt = BetaParams(a, b)
    lam_q = lambda_kw_source(src, tgt, "quadrature")
    if abs(lam - lam_q) <= CERTIFY_TOL:
        return PseudoTruePair(Model.KUMARASWAMY, src, tgt, lam, gnorm, "series")
    lamq = lambda p, q: lambda_kw_source(src, BetaParams(p, q), "quadrature")
    p, q, g = _quadrature_maximize(lamq, (a, b))
    tgt = BetaParams(p, q)
    return PseudoTruePair(Model.KUMARASWAMY, src, tgt, lamq(p, q), g, "quadrature")


def pseudo_beta_of_kw(params) -> PseudoTruePair:
    """Beta pseudo-true parameters for a Kumaraswamy source."""
    params = _check_params(Model.KUMARASWAMY, params)
    return _beta_of_kw(params.alpha, params.beta)


def pseudo_true(source_model, params) -> PseudoTruePair:
    if Model(source_model) is Model.BETA:
        return pseudo_kw_of_beta(params)
    return pseudo_beta_of_kw(params)


def kkt_residual(pair: PseudoTruePair) -> float:
    """Norm of the gradient of Lambda at the target parameters (series form)."""
    src, tgt = pair.source_params, pair.target_params
    if pair.source_model is Model.BETA:
        phi, _, f = _profile_beta(src, tgt.alpha)
        # phi is d/d alpha only along the profile; recompute the free gradient
        lb = _k.lbeta(src.a, src.b)
        g = _series(SeriesKind.G, src.a, src.b, tgt.alpha)
        t1, _ = beta_log_moments(src)
        d_alpha = 1.0 / tgt.alpha + t1 - (tgt.beta - 1.0) * g * math.exp(-lb)
        d_beta = 1.0 / tgt.beta - f * math.exp(-lb)
        return math.hypot(d_alpha, d_beta)
    t1, t2 = kw_log_moments(src)
    dab = _k.digamma(tgt.a + tgt.b)
    return math.hypot(t1 - _k.digamma(tgt.a) + dab, t2 - _k.digamma(tgt.b) + dab)


__all__ = ["PseudoTruePair", "pseudo_kw_of_beta", "pseudo_beta_of_kw",
           "pseudo_true", "kkt_residual", "lambda_value", "lambda_beta_source",
           "lambda_kw_source", "beta_log_moments", "kw_log_moments"]
