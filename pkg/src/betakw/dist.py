"""Beta and Kumaraswamy laws on (0, 1)."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from ._backend import kernels as _k
from .errors import DomainError, InputError

SAMPLE_EPS = 1e-300


class Model(str, enum.Enum):
    BETA = "beta"
    KUMARASWAMY = "kumaraswamy"

    @property
    def other(self) -> "Model":
        return Model.KUMARASWAMY if self is Model.BETA else Model.BETA


def as_model(model) -> Model:
    if isinstance(model, Model):
        return model
    name = str(model).lower()
    if name in ("kw", "kumaraswamy", "k"):
        return Model.KUMARASWAMY
    if name in ("beta", "b"):
        return Model.BETA
    raise DomainError(f"unknown model {model!r}")


def _check_shape(name, v):
    if not (isinstance(v, (int, float, np.floating, np.integer))
            and math.isfinite(v) and v > 0):
        raise DomainError(f"{name} must be a finite positive number, got {v!r}")


@dataclass(frozen=True)
class BetaParams:
    """Shapes (a, b) of a beta law."""

    a: float
    b: float

    def __post_init__(self):
        _check_shape("a", self.a)
        _check_shape("b", self.b)
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))

    model = Model.BETA

    def as_tuple(self):
        return (self.a, self.b)


@dataclass(frozen=True)
class KwParams:
    """Shapes (alpha, beta) of a Kumaraswamy law."""

    alpha: float
    beta: float

    def __post_init__(self):
        _check_shape("alpha", self.alpha)
        _check_shape("beta", self.beta)
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))

    model = Model.KUMARASWAMY

    def as_tuple(self):
        return (self.alpha, self.beta)


Params = Union[BetaParams, KwParams]


def make_params(model, first: float, second: float) -> Params:
    if as_model(model) is Model.BETA:
        return BetaParams(first, second)
    return KwParams(first, second)


def _check_params(model: Model, params) -> Params:
    want = BetaParams if model is Model.BETA else KwParams
    if not isinstance(params, want):
        if isinstance(params, (tuple, list)) and len(params) == 2:
            return want(*params)
        raise DomainError(f"{model.value} model needs {want.__name__}, got {params!r}")
    return params


@dataclass(frozen=True)
class Sample:
    """An i.i.d. sample with every value strictly inside (0, 1)."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        if v.size < 1:
            raise InputError("a sample needs at least one value")
        bad = ~(np.isfinite(v) & (v > 0.0) & (v < 1.0))
        if bad.any():
            idx = np.flatnonzero(bad)[:10].tolist()
            raise InputError(f"sample values must lie in (0, 1); offending indices {idx}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"Sample(n={self.n})"


def log1m_pow(x, xc, power):
    """log(1 - x**power) given x and its complement xc = 1 - x."""
    x = np.asarray(x, dtype=float)
    xc = np.asarray(xc, dtype=float)
    near_one = xc < 0.5
    with np.errstate(divide="ignore", invalid="ignore"):
        hi = np.log(-np.expm1(power * np.log1p(-np.where(near_one, xc, 0.0))))
        lo = np.log1p(-np.power(np.where(near_one, 0.5, x), power))
    out = np.where(near_one, hi, lo)
    return out if out.ndim else float(out)


def _log_density_xc(model: Model, params, x, xc):
    x = np.asarray(x, dtype=float)
    xc = np.asarray(xc, dtype=float)
    if model is Model.BETA:
        a, b = params.a, params.b
        with np.errstate(divide="ignore"):
            out = (a - 1.0) * np.log(x) + (b - 1.0) * np.log(xc) - _k.lbeta(a, b)
    else:
        al, be = params.alpha, params.beta
        with np.errstate(divide="ignore"):
            out = (math.log(al * be) + (al - 1.0) * np.log(x)
                   + (be - 1.0) * log1m_pow(x, xc, al))
    return out if np.ndim(out) else float(out)


def _check_open(x):
    arr = np.asarray(x, dtype=float)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise DomainError("x must lie strictly inside (0, 1)")
    return arr


def log_density(model, params, x):
    model = as_model(model)
    params = _check_params(model, params)
    arr = _check_open(x)
    return _log_density_xc(model, params, arr, 1.0 - arr)


def density(model, params, x):
    out = np.exp(log_density(model, params, x))
    return out if np.ndim(out) else float(out)


def cdf(model, params, x):
    model = as_model(model)
    params = _check_params(model, params)
    arr = np.asarray(x, dtype=float)
    if not np.all((arr >= 0.0) & (arr <= 1.0)):
        raise DomainError("cdf argument must lie in [0, 1]")
    if model is Model.BETA:
        if arr.ndim == 0:
            return _k.betainc(params.a, params.b, float(arr))
        return _k.betainc_array(params.a, params.b, arr)
    with np.errstate(divide="ignore"):
        out = -np.expm1(params.beta * np.log1p(-np.power(arr, params.alpha)))
    return out if out.ndim else float(out)


def quantile(model, params, p):
    model = as_model(model)
    params = _check_params(model, params)
    arr = np.asarray(p, dtype=float)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise DomainError("quantile requires 0 < p < 1")
    if model is Model.BETA:
        if arr.ndim == 0:
            return _k.beta_ppf(params.a, params.b, float(arr))
        out = _k.beta_ppf_array(params.a, params.b, arr)
    else:
        out = _k.kw_ppf_array(params.alpha, params.beta, arr)
        if arr.ndim == 0:
            return float(out)
    if not np.all(np.isfinite(out)):
        from .errors import AccuracyError
        raise AccuracyError("quantile iteration did not converge")
    return out


def _draw(model: Model, params, us):
    if model is Model.BETA:
        return _k.beta_ppf_array(params.a, params.b, us)
    return _k.kw_ppf_array(params.alpha, params.beta, us)


def sample(model, params, n: int, rng: np.random.Generator) -> Sample:
    """Draw ``n`` values by inverse-cdf transformation of ``rng`` uniforms.

    Draws that round to 0 or 1 (or fall below 1e-300) are rejected and
    replaced from further uniforms of the same stream.
    """
    model = as_model(model)
    params = _check_params(model, params)
    if n < 1:
        raise DomainError("n must be at least 1")
    out = _draw(model, params, rng.random(n))
    ok = (out > SAMPLE_EPS) & (out < 1.0)
    while not ok.all():
        kept = out[ok]
        extra = _draw(model, params, rng.random(n - kept.size))
        out = np.concatenate([kept, extra])
        ok = (out > SAMPLE_EPS) & (out < 1.0)
    return Sample(out)


def loglik(model, params, sample: Sample) -> float:
    model = as_model(model)
    params = _check_params(model, params)
    x = sample.values
    if model is Model.BETA:
        return float(-x.size * _k.lbeta(params.a, params.b)
                     + (params.a - 1.0) * np.sum(np.log(x))
                     + (params.b - 1.0) * np.sum(np.log1p(-x)))
    s0, _, _ = _k.kw_profile_sums(np.log(x), params.alpha)
    return float(x.size * math.log(params.alpha * params.beta)
                 + (params.alpha - 1.0) * np.sum(np.log(x))
                 + (params.beta - 1.0) * s0)
