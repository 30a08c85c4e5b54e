"""Maximum-likelihood fits of the beta and Kumaraswamy families."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels as _k
from .dist import BetaParams, KwParams, Model, Sample, as_model, loglik
from .errors import ConvergenceError, InputError

BOX_LO = 1e-6
BOX_HI = 1e6
MAX_ITER = 500
GRAD_RTOL = 1e-9
_MIN_VARIANCE = 1e-14


@dataclass(frozen=True)
class FitResult:
    params: BetaParams | KwParams
    loglik_at_max: float
    iterations: int
    converged: bool
    grad_norm: float


def _check_sample(sample: Sample) -> np.ndarray:
    if not isinstance(sample, Sample):
        sample = Sample(sample)
    x = sample.values
    if x.size < 2:
        raise InputError("fitting needs at least two observations")
    if float(np.var(x)) < _MIN_VARIANCE:
        raise InputError("sample is degenerate (variance below 1e-14); "
                         "the likelihood has no finite maximiser")
    return x


def _in_box(*vals) -> bool:
    return all(BOX_LO < v < BOX_HI for v in vals)


def _beta_objective(a, b, t1, t2):
    return (a - 1.0) * t1 + (b - 1.0) * t2 - _k.lbeta(a, b)


def solve_beta_scores(t1: float, t2: float, start: tuple[float, float],
                      scale: float = 1.0, max_iter: int = MAX_ITER):
    """Maximise ``(a-1) t1 + (b-1) t2 - log B(a, b)`` over a, b > 0.

    This is the beta log-likelihood per observation when ``t1``, ``t2`` are
    the means of ``log x`` and ``log(1-x)``; the stationarity conditions are
    ``psi(a) - psi(a+b) = t1`` and ``psi(b) - psi(a+b) = t2``.  The objective
    is strictly concave, so damped Newton with the trigamma Hessian and
    step halving converges from any interior start.

    ``scale`` multiplies objective and gradient before the convergence test
    (the sample size for a fit).  Returns ``(a, b, objective, iterations,
    grad_norm)``, all unscaled except ``grad_norm``.
    """
    a, b = float(start[0]), float(start[1])
    if not _in_box(a, b):
        a, b = 1.0, 1.0
    obj = _beta_objective(a, b, t1, t2)
    prev = math.inf
    for it in range(1, max_iter + 1):
        dab = _k.digamma(a + b)
        g1 = t1 - _k.digamma(a) + dab
        g2 = t2 - _k.digamma(b) + dab
        gnorm = scale * math.hypot(g1, g2)
        tab = _k.trigamma(a + b)
        h11 = _k.trigamma(a) - tab
        h22 = _k.trigamma(b) - tab
        det = h11 * h22 - tab * tab
        # Newton step for the negated (convex) objective
        da = (h22 * g1 + tab * g2) / det
        db = (tab * g1 + h11 * g2) / det
        tol = GRAD_RTOL * (1.0 + scale * abs(obj))
        # iterate to rounding level: stop once the step is below double
        # resolution or the gradient has stopped shrinking
        resolved = abs(da) <= 4e-16 * a and abs(db) <= 4e-16 * b
        if gnorm == 0.0 or resolved or (gnorm > 0.5 * prev and gnorm <= tol):
            if gnorm > tol:
                raise ConvergenceError(
                    f"beta score solver stalled with gradient {gnorm:.3g}",
                    best=BetaParams(a, b))
            return a, b, obj, it - 1, gnorm
        prev = gnorm
        step = 1.0
        while True:
            na, nb = a + step * da, b + step * db
            if _in_box(na, nb):
                nobj = _beta_objective(na, nb, t1, t2)
                # rounding noise in log B must not block a true Newton step
                if nobj >= obj - 4e-15 * (1.0 + abs(obj)):
                    break
            step *= 0.5
            if step < 1e-12:
                if gnorm <= tol:
                    return a, b, obj, it - 1, gnorm
                raise ConvergenceError(
                    f"beta score solver stalled at a={a:.6g}, b={b:.6g}",
                    best=BetaParams(a, b))
        a, b, obj = na, nb, nobj
        if not _in_box(2.0 * a, 2.0 * b) or not _in_box(0.5 * a, 0.5 * b):
            raise ConvergenceError(
                f"beta estimate left the box ({BOX_LO:g}, {BOX_HI:g}): "
                f"a={a:.6g}, b={b:.6g}", best=BetaParams(a, b))
    raise ConvergenceError(
        f"beta score solver did not converge in {max_iter} iterations",
        best=BetaParams(a, b))


def moment_start(x: np.ndarray) -> tuple[float, float]:
    m = float(np.mean(x))
    v = float(np.var(x))
    common = m * (1.0 - m) / v - 1.0
    if not common > 0.0:
        return 1.0, 1.0
    a, b = m * common, (1.0 - m) * common
    lo, hi = 10 * BOX_LO, 0.1 * BOX_HI
    return min(max(a, lo), hi), min(max(b, lo), hi)


def fit_beta(sample: Sample) -> FitResult:
    """Beta MLE by damped Newton on the digamma score equations."""
    x = _check_sample(sample)
    n = x.size
    t1 = float(np.mean(np.log(x)))
    t2 = float(np.mean(np.log1p(-x)))
    a, b, obj, iters, gnorm = solve_beta_scores(t1, t2, moment_start(x), scale=n)
    params = BetaParams(a, b)
    ll = loglik("beta", params, Sample(x))
    return FitResult(params, ll, iters, True, gnorm)


def _kw_profile(logx: np.ndarray, total_log: float, alpha: float):
    """Profile score g(alpha), its derivative, beta-hat and S0."""
    n = logx.size
    top = float(np.max(logx))
    if alpha * top < -345.0:
        # every x**alpha < 1e-150: log(1 - u) = -u exactly in doubles, and
        # the ratios S1/S0, S2/S0 are weighted means of log x, log^2 x
        wts = np.exp(alpha * (logx - top))
        r1 = -float(np.dot(wts, logx)) / float(np.sum(wts))
        r2 = -float(np.dot(wts, logx * logx)) / float(np.sum(wts))
        return n / alpha + n * r1 + total_log, -n / alpha ** 2 + n * (r2 + r1 * r1), math.inf, 0.0
    s0, s1, s2 = _k.kw_profile_sums(logx, alpha)
    g = n / alpha + n * s1 / s0 + total_log + s1
    dg = -n / alpha ** 2 + n * (s2 * s0 + s1 * s1) / (s0 * s0) + s2
    return g, dg, -n / s0, s0


def fit_kw(sample: Sample) -> FitResult:
    """Kumaraswamy MLE with beta profiled out exactly.

    ``beta_hat(alpha) = -n / sum log(1 - x**alpha)``; the remaining score in
    ``alpha`` is decreasing from ``+inf`` at 0 to ``n log max(x) + sum log x``
    (negative) at infinity, so a bracket always exists.
    """
    x = _check_sample(sample)
    n = x.size
    logx = np.log(x)
    total_log = float(np.sum(logx))
    lo, hi = BOX_LO, BOX_HI
    g_lo = _kw_profile(logx, total_log, lo)[0]
    g_hi = _kw_profile(logx, total_log, hi)[0]
    if not (g_lo > 0.0 > g_hi):
        raise ConvergenceError(
            f"Kumaraswamy profile score not bracketed in ({lo:g}, {hi:g})")
    alpha = 1.0
    # three geometric bisection sweeps starting from alpha = 1
    for _ in range(3):
        g = _kw_profile(logx, total_log, alpha)[0]
        if g > 0.0:
            lo = alpha
        else:
            hi = alpha
        alpha = math.sqrt(lo * hi)
    iters = 3
    scale_ll = 1.0 + abs(n * math.log(n))
    gnorm = math.inf
    for iters in range(4, MAX_ITER + 1):
        g, dg, beta, s0 = _kw_profile(logx, total_log, alpha)
        ll = n * math.log(alpha * beta) + (alpha - 1.0) * total_log + (beta - 1.0) * s0
        scale_ll = 1.0 + abs(ll)
        gnorm = abs(g)
        if gnorm <= 0.01 * GRAD_RTOL * scale_ll:
            break
        if g > 0.0:
            lo = alpha
        else:
            hi = alpha
        new = alpha - g / dg if dg < 0.0 else math.nan
        if not (lo < new < hi):
            new = math.sqrt(lo * hi)
        if abs(new - alpha) <= 4e-16 * alpha:
            break
        alpha = new
    else:
        raise ConvergenceError(
            f"Kumaraswamy fit did not converge in {MAX_ITER} iterations",
            best=KwParams(alpha, -n / _k.kw_profile_sums(logx, alpha)[0]))
    if gnorm > GRAD_RTOL * scale_ll:
        raise ConvergenceError(
            f"Kumaraswamy fit stalled with score {gnorm:.3g}",
            best=KwParams(alpha, beta))
    if not _in_box(2.0 * alpha, 2.0 * beta) or not _in_box(0.5 * alpha, 0.5 * beta):
        raise ConvergenceError(
            f"Kumaraswamy estimate at the box edge: alpha={alpha:.6g}, beta={beta:.6g}",
            best=KwParams(alpha, beta))
    params = KwParams(alpha, beta)
    return FitResult(params, loglik("kumaraswamy", params, Sample(x)), iters, True, gnorm)


def fit(model, sample: Sample) -> FitResult:
    return fit_beta(sample) if as_model(model) is Model.BETA else fit_kw(sample)


__all__ = ["FitResult", "fit_beta", "fit_kw", "fit", "solve_beta_scores",
           "moment_start"]
