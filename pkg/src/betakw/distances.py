"""Hellinger and Kolmogorov-Smirnov distances between a beta and a Kumaraswamy law.

``hellinger`` returns the squared Hellinger distance
``H = 1/2 * int (sqrt f - sqrt g)^2 = 1 - int sqrt(f g)``, which lies in [0, 1].
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ._backend import kernels as _k
from .dist import BetaParams, KwParams, Model, _check_params
from .errors import EvaluationError
from .pseudo import pseudo_true
from .quadrature import DEFAULT_SPEC, QuadratureSpec, _log_pdf_scalar, integrate_unit
from .specfun import HELLINGER_KIND, _em_series

KS_GRID = 100_000
_KS_EDGE = np.geomspace(1e-12, 1e-5, 200)
_SERIES_TOL = 1e-12
_SERIES_PROBE = 10_000


@dataclass(frozen=True)
class DistanceReport:
    hellinger: float
    ks: float
    ks_argmax: float
    hellinger_method: str
    series_quadrature_gap: float


def hellinger_quadrature(bp: BetaParams, kp: KwParams,
                         spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    bp = _check_params(Model.BETA, bp)
    kp = _check_params(Model.KUMARASWAMY, kp)

    def g(x, xc):
        if x <= 0.0 or xc <= 0.0:
            return 0.0
        u = math.exp(0.5 * _log_pdf_scalar(Model.BETA, bp, x, xc))
        v = math.exp(0.5 * _log_pdf_scalar(Model.KUMARASWAMY, kp, x, xc))
        return 0.5 * (u - v) ** 2

    left = min(bp.a, kp.alpha) - 1.0
    right = min(bp.b, kp.beta) - 1.0
    value, _ = integrate_unit(g, left, right, spec)
    return min(max(value, 0.0), 1.0)


def hellinger_series(bp: BetaParams, kp: KwParams) -> float | None:
    """Binomial-series value of H, or None when the series is unusable.

    Expanding ``(1 - x**alpha)**((beta-1)/2)`` inside ``sqrt(f_B f_K)`` gives
    ``1 - sqrt(alpha beta / B(a, b)) * sum_k (-1)^k C(c, k)
    B((a + (2k+1) alpha)/2, (b+1)/2)`` with ``c = (beta-1)/2``.
    """
    bp = _check_params(Model.BETA, bp)
    kp = _check_params(Model.KUMARASWAMY, kp)
    a, b, al, be = bp.a, bp.b, kp.alpha, kp.beta
    c = 0.5 * (be - 1.0)
    if c < 0.0:
        # all terms share one sign; refuse unless they have visibly decayed
        t_small = abs(_k.series_term(HELLINGER_KIND, a, b, al, c, 10.0, False))
        t_far = abs(_k.series_term(HELLINGER_KIND, a, b, al, c, float(_SERIES_PROBE), False))
        if not t_far < 1e-3 * t_small:
            return None
    try:
        res = _em_series(HELLINGER_KIND, a, b, al, c, 0, _SERIES_TOL, 10**6)
    except EvaluationError:
        return None
    if not res.converged:
        return None
    scale = math.exp(0.5 * (math.log(al * be) - _k.lbeta(a, b)))
    return 1.0 - scale * res.value


def hellinger(bp: BetaParams, kp: KwParams) -> float:
    """Squared Hellinger distance (quadrature value)."""
    return hellinger_quadrature(bp, kp)


def _cdf_gap(bp: BetaParams, kp: KwParams, x):
    x = np.asarray(x, dtype=float)
    fb = _k.betainc_array(bp.a, bp.b, x)
    with np.errstate(divide="ignore"):
        fk = -np.expm1(kp.beta * np.log1p(-np.power(x, kp.alpha)))
    return np.abs(fb - fk)


def _cdf_gap_scalar(bp, kp, x):
    fb = _k.betainc(bp.a, bp.b, x)
    fk = -math.expm1(kp.beta * math.log1p(-x ** kp.alpha))
    return abs(fb - fk)


def ks_distance(bp: BetaParams, kp: KwParams) -> tuple[float, float]:
    """sup_x |I_x(a, b) - (1 - (1 - x^alpha)^beta)| and its location.

    A uniform grid of 10^5 interior points (plus geometric points near both
    ends) locates the peak, then golden-section search refines it inside the
    neighbouring grid cells.
    """
    bp = _check_params(Model.BETA, bp)
    kp = _check_params(Model.KUMARASWAMY, kp)
    grid = np.concatenate([_KS_EDGE, np.linspace(0.0, 1.0, KS_GRID + 2)[1:-1],
                           1.0 - _KS_EDGE[::-1]])
    gaps = _cdf_gap(bp, kp, grid)
    i = int(np.argmax(gaps))
    best_x, best = float(grid[i]), float(gaps[i])
    if best == 0.0:
        return 0.0, best_x
    lo = float(grid[max(i - 1, 0)])
    hi = float(grid[min(i + 1, grid.size - 1)])
    res = optimize.minimize_scalar(lambda t: -_cdf_gap_scalar(bp, kp, t),
                                   bracket=None, bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-12 * max(1.0, hi)})
    if -res.fun > best:
        best_x, best = float(res.x), float(-res.fun)
    return min(best, 1.0), best_x


def distance_report(bp: BetaParams, kp: KwParams) -> DistanceReport:
    bp = _check_params(Model.BETA, bp)
    kp = _check_params(Model.KUMARASWAMY, kp)
    h = hellinger_quadrature(bp, kp)
    hs = hellinger_series(bp, kp)
    ks, arg = ks_distance(bp, kp)
    if hs is None:
        return DistanceReport(h, ks, arg, "quadrature", math.nan)
    return DistanceReport(h, ks, arg, "quadrature", abs(hs - h))


def distance_curve(null_model, fixed: float, grid) -> list[dict]:
    """Distances between each law on a grid and its pseudo-true counterpart.

    Under a beta null ``grid`` holds values of ``a`` with ``b = fixed``; under
    a Kumaraswamy null it holds ``alpha`` with ``beta = fixed``.
    """
    model = Model(null_model)
    rows = []
    for v in grid:
        src = (BetaParams(v, fixed) if model is Model.BETA else KwParams(v, fixed))
        pair = pseudo_true(model, src)
        if model is Model.BETA:
            bp, kp = src, pair.target_params
        else:
            bp, kp = pair.target_params, src
        ks, arg = ks_distance(bp, kp)
        rows.append({"shape": float(v), "hellinger": hellinger_quadrature(bp, kp),
                     "ks": ks, "ks_argmax": arg})
    return rows


__all__ = ["DistanceReport", "hellinger", "hellinger_quadrature",
           "hellinger_series", "ks_distance", "distance_report", "distance_curve"]
