"""Adaptive quadrature on (0, 1) with algebraic endpoint singularities.

Expectations under either law are defined by this module; the closed-form
series elsewhere in the package are checked against it.

Every integrand is evaluated as ``g(x, xc)`` where ``xc = 1 - x`` is carried
separately, so quantities like ``log(1 - x)`` stay accurate when ``x`` is
within a few ulps of 1.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable

from scipy import integrate

from ._backend import kernels as _k
from .dist import BetaParams, KwParams, Model, as_model, _check_params
from .errors import AccuracyError, DomainError

SPLIT_EPS = 1e-6
# interior breakpoints of the half-panel [eps, 1/2]
_BREAKS = (1e-5, 1e-4, 1e-3, 1e-2, 0.1)


class EndpointHandling(str, enum.Enum):
    SPLIT = "split_near_endpoints"
    QUANTILE = "quantile_substitution"


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000
    endpoint_handling: EndpointHandling = EndpointHandling.SPLIT

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be positive")
        object.__setattr__(self, "endpoint_handling",
                           EndpointHandling(self.endpoint_handling))


DEFAULT_SPEC = QuadratureSpec()


def _quad(f, lo, hi, spec, points=None):
    if points is not None and len(points) >= spec.max_subdivisions:
        # QUADPACK needs more subintervals than break points
        points = None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(f, lo, hi, epsabs=0.25 * spec.abs_tol,
                                  epsrel=0.25 * spec.rel_tol,
                                  limit=spec.max_subdivisions, points=points)
    return val, err


def _power(exponent: float) -> float:
    # x = eps * u**m turns x**e dx into a constant multiple of du
    return 1.0 / (1.0 + exponent) if exponent < 0.0 else 1.0


def integrate_unit(g: Callable[[float, float], float], left_exp: float = 0.0,
                   right_exp: float = 0.0,
                   spec: QuadratureSpec = DEFAULT_SPEC) -> tuple[float, float]:
    """Integrate ``g(x, 1-x)`` over (0, 1).

    ``left_exp`` and ``right_exp`` are the algebraic exponents of the
    integrand at 0 and 1 (``x**left_exp``, ``(1-x)**right_exp``); both must
    exceed -1.  Returns ``(value, error_estimate)``.
    """
    if not (left_exp > -1.0 and right_exp > -1.0):
        raise DomainError("endpoint exponents must exceed -1")
    eps = SPLIT_EPS
    ml, mr = _power(left_exp), _power(right_exp)

    def left_end(u):
        if u <= 0.0:
            return 0.0
        x = eps * u ** ml
        return g(x, 1.0 - x) * eps * ml * u ** (ml - 1.0)

    def left_mid(x):
        return g(x, 1.0 - x)

    def right_mid(xc):
        return g(1.0 - xc, xc)

    def right_end(v):
        if v <= 0.0:
            return 0.0
        xc = eps * v ** mr
        return g(1.0 - xc, xc) * eps * mr * v ** (mr - 1.0)

    total = 0.0
    err = 0.0
    for f, lo, hi, pts in ((left_end, 0.0, 1.0, None),
                           (left_mid, eps, 0.5, _BREAKS),
                           (right_mid, eps, 0.5, _BREAKS),
                           (right_end, 0.0, 1.0, None)):
        v, e = _quad(f, lo, hi, spec, pts)
        total += v
        err += e
    return total, err


def _log_pdf_scalar(model: Model, params, x: float, xc: float) -> float:
    if model is Model.BETA:
        return ((params.a - 1.0) * math.log(x) + (params.b - 1.0) * math.log(xc)
                - _k.lbeta(params.a, params.b))
    al, be = params.alpha, params.beta
    return (math.log(al * be) + (al - 1.0) * math.log(x)
            + (be - 1.0) * log1m_pow_scalar(x, xc, al))


def log1m_pow_scalar(x: float, xc: float, power: float) -> float:
    """log(1 - x**power) from x and xc = 1 - x."""
    if xc < 0.5:
        return math.log(-math.expm1(power * math.log1p(-xc)))
    return math.log1p(-x ** power)


def endpoint_exponents(model: Model, params) -> tuple[float, float]:
    if model is Model.BETA:
        return params.a - 1.0, params.b - 1.0
    return params.alpha - 1.0, params.beta - 1.0


def _quantile_pair(model: Model, params, u: float, upper: bool):
    """(x, 1 - x) at probability u (or 1 - u when ``upper``)."""
    if model is Model.BETA:
        if upper:
            xc = _k.beta_ppf(params.b, params.a, u)
            return 1.0 - xc, xc
        x = _k.beta_ppf(params.a, params.b, u)
        return x, 1.0 - x
    al, be = params.alpha, params.beta
    if upper:
        s = math.log1p(-u ** (1.0 / be))
        return math.exp(s / al), -math.expm1(s / al)
    x = math.exp(math.log(-math.expm1(math.log1p(-u) / be)) / al)
    return x, 1.0 - x


def _evaluate(h, complement):
    if complement:
        return h
    return lambda x, xc: h(x)


def expect(h: Callable, model, params, spec: QuadratureSpec = DEFAULT_SPEC,
           complement: bool = False, return_error: bool = False):
    """E[h(X)] for X following ``model`` with ``params``.

    ``h`` is called as ``h(x)``, or as ``h(x, 1 - x)`` when ``complement``
    is true.  Raises :class:`AccuracyError` when the error estimate exceeds
    ``max(abs_tol, rel_tol * |value|)``.
    """
    model = as_model(model)
    params = _check_params(model, params)
    hh = _evaluate(h, complement)
    if spec.endpoint_handling is EndpointHandling.SPLIT:
        def g(x, xc):
            if x <= 0.0 or xc <= 0.0:
                return 0.0
            return hh(x, xc) * math.exp(_log_pdf_scalar(model, params, x, xc))
        le, re = endpoint_exponents(model, params)
        value, err = integrate_unit(g, le, re, spec)
    else:
        def lower(u):
            if u <= 0.0:
                return 0.0
            x, xc = _quantile_pair(model, params, u, False)
            return hh(x, xc) if x > 0.0 else 0.0

        def upper(w):
            if w <= 0.0:
                return 0.0
            x, xc = _quantile_pair(model, params, w, True)
            return hh(x, xc) if xc > 0.0 else 0.0

        v1, e1 = _quad(lower, 0.0, 0.5, spec)
        v2, e2 = _quad(upper, 0.0, 0.5, spec)
        value, err = v1 + v2, e1 + e2
    if not (math.isfinite(value) and err <= max(spec.abs_tol, spec.rel_tol * abs(value))):
        raise AccuracyError(
            f"quadrature error estimate {err:.3g} exceeds tolerance", value, err)
    return (value, err) if return_error else value


def expect_pair(h, model, params, spec: QuadratureSpec = DEFAULT_SPEC,
                complement: bool = False):
    """Mean and variance of h(X); the variance is a centred second moment."""
    mean = expect(h, model, params, spec, complement)
    hh = _evaluate(h, complement)
    var = expect(lambda x, xc: (hh(x, xc) - mean) ** 2, model, params, spec,
                 complement=True)
    return mean, var


__all__ = [
    "EndpointHandling", "QuadratureSpec", "DEFAULT_SPEC", "expect",
    "expect_pair", "integrate_unit", "log1m_pow_scalar", "endpoint_exponents",
    "BetaParams", "KwParams",
]
