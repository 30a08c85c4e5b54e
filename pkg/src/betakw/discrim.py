"""The Cox statistic, its asymptotic moments, PCS and sample-size planning.

Throughout, ``lr(x) = log f_B(x; a, b) - log f_K(x; alpha, beta)`` with one
pair of parameters true and the other pseudo-true.  AM is ``E[lr]`` and AV is
``Var[lr]`` under the null law, both computed by quadrature.  A closed-form
route through the F, M, V, W series is evaluated alongside as a check.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._backend import kernels as _k
from .dist import BetaParams, KwParams, Model, Sample, _check_params, as_model
from .distances import hellinger_quadrature, ks_distance
from .errors import DomainError, EvaluationError, InfeasibleError
from .fit import FitResult, fit_beta, fit_kw
from .pseudo import PseudoTruePair, pseudo_true
from .quadrature import expect, log1m_pow_scalar
from .specfun import (SeriesKind, eval_series, std_normal_cdf,
                      std_normal_quantile)

log = logging.getLogger(__name__)

SERIES_MISMATCH_TOL = 1e-6
INDISTINGUISHABLE = 0.01
PI2_6 = math.pi ** 2 / 6.0


class Rule(str, Enum):
    MAX_PCS = "max_pcs"
    AKAIKE_SIGN = "akaike_sign"


@dataclass(frozen=True)
class AsymptoticMoments:
    null_model: Model
    am: float
    av: float
    pseudo: PseudoTruePair
    series_am: float = math.nan
    series_av: float = math.nan
    series_gap: float = math.nan

    def __post_init__(self):
        if self.av < 0.0:
            object.__setattr__(self, "av", 0.0)


@dataclass(frozen=True)
class SelectionReport:
    n: int
    t_stat: float
    fit_beta: FitResult
    fit_kw: FitResult
    pcs_beta: float = math.nan
    pcs_kw: float = math.nan
    decision: Model | None = None
    decision_rule: Rule | None = None
    simulated_pcs: tuple[float, float] | None = None
    expanded_residual: float = 0.0
    indistinguishable: bool = False
    equivalent_inequality: bool | None = None
    warnings: tuple[str, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class SampleSizePlan:
    null_model: Model
    params: BetaParams | KwParams
    p: float
    z_p: float
    n_required: int
    hellinger: float
    ks: float


# ------------------------------------------------------------------- moments

def _split(null_model: Model, params, pair: PseudoTruePair):
    """Beta params, Kw params and the null model in lr's parametrisation."""
    if null_model is Model.BETA:
        return params, pair.target_params
    return pair.target_params, params


def _lr_parts(bp: BetaParams, kp: KwParams):
    """Constant and a function of (x, xc) with lr = c0 + rest(x, xc).

    Coefficients vanish exactly on the intersection sets, so AM and AV are
    exact zeros there.
    """
    c0 = -_k.lbeta(bp.a, bp.b) - math.log(kp.alpha * kp.beta)
    ca, cb, ck = bp.a - kp.alpha, bp.b - 1.0, kp.beta - 1.0
    al = kp.alpha

    def rest(x, xc):
        lx = math.log(x) if xc >= 0.5 else math.log1p(-xc)
        lxc = math.log(xc) if x >= 0.5 else math.log1p(-x)
        out = 0.0
        if ca != 0.0:
            out += ca * lx
        if cb != 0.0:
            out += cb * lxc
        if ck != 0.0:
            out -= ck * log1m_pow_scalar(x, xc, al)
        return out

    return c0, rest


def _quadrature_moments(null_model, params, bp, kp):
    c0, rest = _lr_parts(bp, kp)
    m = expect(rest, null_model, params, complement=True)
    v = expect(lambda x, xc: (rest(x, xc) - m) ** 2, null_model, params,
               complement=True)
    return c0 + m, v


def _series_value(kind, x, y, z):
    return eval_series(kind, x, y, z, tol=1e-12).value


def _w_quadrature(x, y, z):
    """W(x, y, z) through E_B[log^2(1 - X^z)] = Gamma(x+y)/Gamma(x) W."""
    e = expect(lambda t, tc: log1m_pow_scalar(t, tc, z) ** 2, Model.BETA,
               BetaParams(x, y), complement=True)
    return e * math.exp(_k.lbeta(x, y)) / math.gamma(y)


def _w(x, y, z):
    try:
        return _series_value(SeriesKind.W, x, y, z)
    except EvaluationError:
        return _w_quadrature(x, y, z)


def _series_moments_beta(bp: BetaParams, kp: KwParams):
    a, b, at, bt = bp.a, bp.b, kp.alpha, kp.beta
    lb = _k.lbeta(a, b)
    big_b = math.exp(lb)
    dab = _k.digamma(a + b)
    t1, t2 = _k.digamma(a) - dab, _k.digamma(b) - dab
    f = _series_value(SeriesKind.F, a, b, at)
    mm = _series_value(SeriesKind.M, a, b, at)
    vv = _series_value(SeriesKind.V, a, b, at)
    w = _w(a, b, at)
    am = (-math.log(at) - math.log(bt) - lb - (at - a) * t1 + (b - 1.0) * t2
          + (bt - 1.0) * f / big_b)
    tab = _k.trigamma(a + b)
    var_lx = _k.trigamma(a) - tab
    var_l1x = _k.trigamma(b) - tab
    # Gamma(a+b)/Gamma(a) = Gamma(b)/B(a, b)
    var_l1xa = math.exp(math.lgamma(b) - lb) * w - (f / big_b) ** 2
    cov_lx_l1xa = (t1 * f - mm) / big_b
    cov_l1x_l1xa = (t2 * f - vv) / big_b
    cov_lx_l1x = -tab
    av = ((at - a) ** 2 * var_lx + (bt - 1.0) ** 2 * var_l1xa
          + (b - 1.0) ** 2 * var_l1x + 2.0 * (bt - 1.0) * (at - a) * cov_lx_l1xa
          - 2.0 * (b - 1.0) * (at - a) * cov_lx_l1x
          - 2.0 * (bt - 1.0) * (b - 1.0) * cov_l1x_l1xa)
    return am, av


def _series_moments_kw(kp: KwParams, bp: BetaParams):
    al, be, at, bt = kp.alpha, kp.beta, bp.a, bp.b
    z = 1.0 / al
    f = _series_value(SeriesKind.F, 1.0, be, z)
    mm = _series_value(SeriesKind.M, 1.0, be, z)
    vv = _series_value(SeriesKind.V, 1.0, be, z)
    w = _w(1.0, be, z)
    d = -_k.digamma_diff(1.0, be)  # psi(1) - psi(beta + 1)
    am = (-math.log(al) - math.log(be) - (al - at) / al * d
          - _k.lbeta(at, bt) + (be - 1.0) / be - be * (bt - 1.0) * f)
    var_lx = (PI2_6 - _k.trigamma(be + 1.0)) / al ** 2
    var_l1xa = 1.0 / be ** 2
    var_l1x = math.exp(math.lgamma(be + 1.0)) * w - (be * f) ** 2
    cov_lx_l1x = be / al * (d * f - mm)
    cov_l1x_l1xa = -f - be * vv
    cov_lx_l1xa = -_k.trigamma(be + 1.0) / al
    av = ((al - at) ** 2 * var_lx + (be - 1.0) ** 2 * var_l1xa
          + (bt - 1.0) ** 2 * var_l1x + 2.0 * (al - at) * (be - 1.0) * cov_lx_l1xa
          - 2.0 * (al - at) * (bt - 1.0) * cov_lx_l1x
          - 2.0 * (bt - 1.0) * (be - 1.0) * cov_l1x_l1xa)
    return am, av


def series_moments(null_model, params, pair: PseudoTruePair | None = None):
    """AM and AV from the closed-form combinations of the series."""
    null_model = as_model(null_model)
    params = _check_params(null_model, params)
    pair = pair or pseudo_true(null_model, params)
    if null_model is Model.BETA:
        return _series_moments_beta(params, pair.target_params)
    return _series_moments_kw(params, pair.target_params)


def asymptotic_moments(null_model, params) -> AsymptoticMoments:
    """Per-observation mean and variance of lr under the null law."""
    null_model = as_model(null_model)
    params = _check_params(null_model, params)
    return _moments_cached(null_model, params)


_CACHE: dict = {}


def _moments_cached(null_model: Model, params) -> AsymptoticMoments:
    key = (null_model, params)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    pair = pseudo_true(null_model, params)
    if pair.method == "fixed_point":
        res = AsymptoticMoments(null_model, 0.0, 0.0, pair, 0.0, 0.0, 0.0)
    else:
        bp, kp = _split(null_model, params, pair)
        am, av = _quadrature_moments(null_model, params, bp, kp)
        try:
            s_am, s_av = series_moments(null_model, params, pair)
            gap = max(abs(s_am - am), abs(s_av - av))
        except (EvaluationError, ArithmeticError, ValueError):
            s_am = s_av = gap = math.nan
        if gap > SERIES_MISMATCH_TOL:
            log.warning("series and quadrature moments differ by %.3g at %s %s",
                        gap, null_model.value, params)
        res = AsymptoticMoments(null_model, am, max(av, 0.0), pair, s_am, s_av, gap)
    if len(_CACHE) > 4096:
        _CACHE.clear()
    _CACHE[key] = res
    return res


# ----------------------------------------------------------------------- PCS

def pcs_from_moments(null_model: Model, am: float, av: float, n: int) -> float:
    if am == 0.0 and av == 0.0:
        return 0.5
    sign = 1.0 if null_model is Model.BETA else -1.0
    if av <= 0.0:
        return 1.0 if sign * am > 0.0 else (0.5 if am == 0.0 else 0.0)
    return std_normal_cdf(sign * math.sqrt(n) * am / math.sqrt(av))


def pcs(null_model, params, n: int) -> float:
    """Asymptotic probability of correct selection with ``n`` observations.

    ``Phi(sqrt(n) AM / sqrt(AV))`` under a beta null and
    ``Phi(-sqrt(n) AM / sqrt(AV))`` under a Kumaraswamy null.
    """
    if not (isinstance(n, int) or float(n).is_integer()) or n < 1:
        raise DomainError("n must be a positive integer")
    mom = asymptotic_moments(null_model, params)
    return pcs_from_moments(mom.null_model, mom.am, mom.av, int(n))


# --------------------------------------------------------------------- T_n

def _expanded_t(x, fb: FitResult, fk: FitResult) -> float:
    n = x.size
    a, b = fb.params.a, fb.params.b
    al, be = fk.params.alpha, fk.params.beta
    dab = _k.digamma(a + b)
    s0, _, _ = _k.kw_profile_sums(np.log(x), al)
    return (n * (1.0 - _k.lbeta(a, b) - math.log(al * be))
            + n * (a - al) * (_k.digamma(a) - dab)
            + n * (b - 1.0) * (_k.digamma(b) - dab) + s0)


def t_statistic(sample: Sample) -> SelectionReport:
    """Fit both families and form T_n = l_B(a^, b^) - l_K(alpha^, beta^)."""
    if not isinstance(sample, Sample):
        sample = Sample(sample)
    fb = fit_beta(sample)
    fk = fit_kw(sample)
    t = fb.loglik_at_max - fk.loglik_at_max
    alt = _expanded_t(sample.values, fb, fk)
    resid = abs(alt - t) / max(abs(t), 1e-300)
    return SelectionReport(sample.n, t, fb, fk, expanded_residual=resid)


def select(sample: Sample, rule="max_pcs") -> SelectionReport:
    """Fit both families, compute plug-in PCS values and decide."""
    rule = Rule(rule)
    base = t_statistic(sample)
    n = base.n
    mb = asymptotic_moments(Model.BETA, base.fit_beta.params)
    mk = asymptotic_moments(Model.KUMARASWAMY, base.fit_kw.params)
    pb = pcs_from_moments(Model.BETA, mb.am, mb.av, n)
    pk = pcs_from_moments(Model.KUMARASWAMY, mk.am, mk.av, n)
    by_pcs = Model.BETA if pb > pk else Model.KUMARASWAMY
    # equivalent form of PCS_B > PCS_K under the sign convention of pcs():
    # AM_K sqrt(AV_B) > -AM_B sqrt(AV_K) picks beta
    ineq = mk.am * math.sqrt(mb.av) > -mb.am * math.sqrt(mk.av)
    warnings = []
    if (Model.BETA if ineq else Model.KUMARASWAMY) is not by_pcs and pb != pk:
        warnings.append("equivalent-inequality decision differs from the PCS "
                        "comparison (rounding at a tie)")
    if rule is Rule.MAX_PCS:
        decision = by_pcs
    else:
        decision = Model.BETA if base.t_stat > 0.0 else Model.KUMARASWAMY
    flat = abs(pb - pk) < INDISTINGUISHABLE
    if flat:
        warnings.append("families indistinguishable: |PCS_B - PCS_K| < 0.01")
    return SelectionReport(n, base.t_stat, base.fit_beta, base.fit_kw, pb, pk,
                           decision, rule, None, base.expanded_residual, flat,
                           ineq, tuple(warnings))


# --------------------------------------------------------------- sample size

def required_n(z: float, am: float, av: float) -> int:
    """Smallest integer strictly greater than z^2 AV / AM^2 (at least 1)."""
    if am == 0.0:
        raise InfeasibleError("families indistinguishable at these parameters")
    val = z * z * av / (am * am)
    return max(1, math.floor(val) + 1)


def min_sample_size(null_model, params, p: float) -> SampleSizePlan:
    if not 0.5 < p < 1.0:
        raise DomainError("protection level p must lie in (0.5, 1)")
    null_model = as_model(null_model)
    params = _check_params(null_model, params)
    mom = asymptotic_moments(null_model, params)
    if mom.am == 0.0:
        raise InfeasibleError("families indistinguishable at these parameters")
    z = std_normal_quantile(p)
    n = required_n(z, mom.am, mom.av)
    bp, kp = _split(null_model, params, mom.pseudo)
    ks, _ = ks_distance(bp, kp)
    return SampleSizePlan(null_model, params, p, z, n,
                          hellinger_quadrature(bp, kp), ks)


__all__ = ["AsymptoticMoments", "SelectionReport", "SampleSizePlan", "Rule",
           "asymptotic_moments", "series_moments", "pcs", "pcs_from_moments",
           "t_statistic", "select", "min_sample_size", "required_n"]
