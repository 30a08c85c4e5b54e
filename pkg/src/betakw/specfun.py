"""Special functions and the F, G, M, V, W series.

The polygamma, log-beta and incomplete-beta routines live in the kernel
backend; this module adds argument validation and the series evaluator.

The series below all have terms decaying like a power of ``k`` (roughly
``k**-(y+1)``), so plain partial sums converge far too slowly when ``y`` is
small.  :func:`eval_series` sums the head exactly and replaces the tail by
its Euler-Maclaurin expansion, using the analytic continuation of the term
to real ``k``::

    sum_{k>K} t(k) = int_K^inf t(s) ds - t(K)/2 - t'(K)/12 + t'''(K)/720 - ...

The integral is computed after the change of variables ``s = K v**(-m)``
with ``m = 1/(p-1)``, which makes a ``s**-p`` tail flat in ``v``.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from statistics import NormalDist

from scipy import integrate

from ._backend import kernels as _k
from .errors import DomainError, EvaluationError

EULER_GAMMA = 0.57721566490153286061

_STD_NORMAL = NormalDist()
_TERM_REL_ERR = 2e-14


def _check_positive(name, *values):
    for v in values:
        if not (v > 0.0 and math.isfinite(v)):
            raise DomainError(f"{name} requires finite positive arguments, got {v!r}")


def digamma(x: float) -> float:
    _check_positive("digamma", x)
    return _k.digamma(float(x))


def trigamma(x: float) -> float:
    _check_positive("trigamma", x)
    return _k.trigamma(float(x))


def log_beta(a: float, b: float) -> float:
    """Logarithm of the complete beta function B(a, b)."""
    _check_positive("log_beta", a, b)
    return _k.lbeta(float(a), float(b))


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    _check_positive("reg_inc_beta", a, b)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"reg_inc_beta requires 0 <= x <= 1, got {x!r}")
    return _k.betainc(float(a), float(b), float(x))


def std_normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def std_normal_quantile(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise DomainError(f"normal quantile requires 0 < p < 1, got {p!r}")
    return _STD_NORMAL.inv_cdf(p)


class SeriesKind(enum.Enum):
    """The five series; values are the kernel kind codes."""

    F = 0  # sum k^-1 B(x+kz, y)
    G = 1  # sum {psi(x+kz) - psi(x+y+kz)} B(x+kz, y)
    M = 2  # sum k^-1 {psi(x+kz) - psi(x+y+kz)} B(x+kz, y)
    V = 3  # sum k^-1 {psi(y) - psi(x+y+kz)} B(x+kz, y)
    W = 4  # sum_{k>=0} (-1)^k {[psi(1)-psi(s+1)]^2 + psi'(1) - psi'(s+1)} / (Gamma(y-k) k! (x+k)),  s = (x+k)/z


# kind code of the Hellinger binomial series, used by ``distances``
HELLINGER_KIND = 5


@dataclass(frozen=True)
class SeriesEval:
    value: float
    terms_used: int
    tail_bound: float
    converged: bool


def _decay_exponent(kind: int, y: float, w: float) -> float:
    if kind == SeriesKind.M.value:
        return y + 2.0
    if kind == HELLINGER_KIND:
        return w + 1.0 + 0.5 * (y + 1.0)
    return y + 1.0


def _head_length(kind: int, y: float, w: float) -> float:
    # terms before this index may alternate; the smooth form is valid past it
    if kind == SeriesKind.W.value:
        return y + 1.0
    if kind == HELLINGER_KIND:
        return w + 2.0
    return 0.0


def _tail_integral(kind, x, y, z, w, big_k, p, abs_tol):
    m = 1.0 / (p - 1.0)
    log_scale = math.log(big_k * m)

    def integrand(v):
        if v <= 0.0:
            return 0.0
        lv = math.log(v)
        ls = math.log(big_k) - m * lv
        if ls > 690.0:
            return 0.0
        sign, lt = _k.series_log_term(kind, x, y, z, w, math.exp(ls), True)
        if sign == 0.0:
            return 0.0
        return sign * math.exp(lt + log_scale - (m + 1.0) * lv)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(integrand, 0.0, 1.0, epsabs=abs_tol,
                                  epsrel=1e-13, limit=400)
    return val, err


def _em_tail(kind, x, y, z, w, big_k, p, abs_tol):
    """Euler-Maclaurin estimate of sum_{k > K} t(k) and an error bound."""
    def t(s):
        return _k.series_term(kind, x, y, z, w, s, True)

    h = big_k / 64.0
    f0 = t(float(big_k))
    fp1, fm1 = t(big_k + h), t(big_k - h)
    fp2, fm2 = t(big_k + 2 * h), t(big_k - 2 * h)
    fp4, fm4 = t(big_k + 4 * h), t(big_k - 4 * h)
    d1 = (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h)
    d1_coarse = (8.0 * (fp2 - fm2) - (fp4 - fm4)) / (24.0 * h)
    d3 = (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * h ** 3)
    integral, qerr = _tail_integral(kind, x, y, z, w, big_k, p, abs_tol)
    tail = integral - 0.5 * f0 - d1 / 12.0 + d3 / 720.0
    # the five-point error scales as h^4, so coarse-fine differs by ~15x it
    d1_err = abs(d1 - d1_coarse) / 15.0
    return tail, abs(d3) / 720.0 + d1_err / 12.0 + qerr


def _em_series(kind: int, x: float, y: float, z: float, w: float,
               k_first: int, tol: float, max_terms: int) -> SeriesEval:
    p = _decay_exponent(kind, y, w)
    big_k = max(64, int(math.ceil(_head_length(kind, y, w))) + 8)
    try:
        total, abssum = _k.series_partial(kind, x, y, z, w, k_first, big_k + 1)
    except ArithmeticError as exc:
        raise EvaluationError(
            f"series {kind} produced non-finite terms at ({x}, {y}, {z}); "
            "use the quadrature route") from exc
    while True:
        tail, bound = _em_tail(kind, x, y, z, w, big_k, p,
                               abs_tol=0.01 * tol * max(abs(total), 1e-300))
        value = total + tail
        if not math.isfinite(value):
            raise EvaluationError(
                f"series {kind} is not finite at ({x}, {y}, {z}); "
                "use the quadrature route")
        # each term carries a few 1e-15 of relative error; when the terms
        # cancel, that noise can swamp the sum
        if abssum * _TERM_REL_ERR > tol * abs(value):
            raise EvaluationError(
                f"series {kind} loses precision to cancellation at "
                f"({x}, {y}, {z}); use the quadrature route")
        if bound <= tol * min(1.0, abs(value)):
            return SeriesEval(value, big_k + 1 - k_first, bound, True)
        if big_k >= max_terms:
            return SeriesEval(value, big_k + 1 - k_first, bound, False)
        new_k = min(2 * big_k, max_terms)
        try:
            more, mx = _k.series_partial(kind, x, y, z, w, big_k + 1, new_k + 1)
        except ArithmeticError as exc:
            raise EvaluationError(
                f"series {kind} produced non-finite terms; use the quadrature route"
            ) from exc
        total += more
        abssum += mx
        big_k = new_k


def eval_series(kind: SeriesKind, x: float, y: float, z: float,
                tol: float = 1e-10, max_terms: int = 10**6) -> SeriesEval:
    """Evaluate one of the F, G, M, V, W series at (x, y, z)."""
    _check_positive(f"series {kind.name}", x, y, z)
    if not tol > 0.0:
        raise DomainError("tol must be positive")
    k_first = 0 if kind is SeriesKind.W else 1
    return _em_series(kind.value, float(x), float(y), float(z), 0.0,
                      k_first, tol, max_terms)


def series_F(x, y, z, tol=1e-12):
    return eval_series(SeriesKind.F, x, y, z, tol).value


def series_G(x, y, z, tol=1e-12):
    return eval_series(SeriesKind.G, x, y, z, tol).value


def series_M(x, y, z, tol=1e-12):
    return eval_series(SeriesKind.M, x, y, z, tol).value


def series_V(x, y, z, tol=1e-12):
    return eval_series(SeriesKind.V, x, y, z, tol).value


def series_W(x, y, z, tol=1e-12):
    return eval_series(SeriesKind.W, x, y, z, tol).value
