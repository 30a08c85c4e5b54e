"""Pure-Python implementations of the numerical kernels.

This module is the fallback for :mod:`betakw._ckernels` and must expose the
same names with the same semantics.  Scalar routines use :mod:`math`; array
routines loop in Python and are correspondingly slow.
"""
import math

import numpy as np

BACKEND = "python"

EULER = 0.57721566490153286061
LOG_2PI = 1.8378770664093454836
PI2_6 = math.pi * math.pi / 6.0

_ROOT_HI = 1.4616321449683622
_ROOT_LO = 9.549995429965697e-17
# Taylor coefficients of digamma about its positive root.
_ROOT_TAYLOR = (
    0.9676722454476212, -0.4427631689835921, 0.258499760955651,
    -0.16394270544240652, 0.10782405069126237, -0.07219956125645471,
    0.04880428816414311, -0.03316112647484736, 0.022597648232218104,
    -0.01542476590494896, 0.010538791616612175, -0.007204534386356869,
    0.004926781395729853, -0.003369801655439328, 0.002305126326734928,
    -0.0015769367714301972, 0.0010788252019162967, -0.0007380709389960052,
    0.000504953265834602, -0.0003454680251063077, 0.00023635601564027053,
    -0.00016170622091974803, 0.0001106337276874741, -7.569179582195066e-05,
    5.178575795222081e-05,
)
# B_{2j} / (2j), j = 1..7
_PSI_ASY = (
    1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0,
    -691.0 / 32760.0, 1.0 / 12.0,
)
# B_{2j}, j = 1..8
_TRI_ASY = (
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0,
)

KIND_F, KIND_G, KIND_M, KIND_V, KIND_W, KIND_H = range(6)

_TINY = 1e-300
_CF_EPS = 2.5e-16
_CF_MAXIT = 20000


def _psi_asymptotic(x):
    z = 1.0 / (x * x)
    poly = 0.0
    for c in reversed(_PSI_ASY):
        poly = poly * z + c
    return math.log(x) - 0.5 / x - z * poly


def digamma(x):
    if not x > 0.0:
        raise ValueError("digamma requires x > 0")
    if x < 1.0:
        return digamma(x + 1.0) - 1.0 / x
    d = (x - _ROOT_HI) - _ROOT_LO
    if abs(d) < 0.25:
        acc = 0.0
        for c in reversed(_ROOT_TAYLOR):
            acc = (acc + c) * d
        return acc
    shift = 0.0
    while x < 10.0:
        shift += 1.0 / x
        x += 1.0
    return _psi_asymptotic(x) - shift


def trigamma(x):
    if not x > 0.0:
        raise ValueError("trigamma requires x > 0")
    shift = 0.0
    while x < 10.0:
        shift += 1.0 / (x * x)
        x += 1.0
    z = 1.0 / (x * x)
    poly = 0.0
    for c in reversed(_TRI_ASY):
        poly = poly * z + c
    return shift + 1.0 / x + 0.5 * z + poly * z / x


def digamma_diff(u, y):
    """psi(u + y) - psi(u) without cancellation for large u."""
    shift = 0.0
    while u < 10.0:
        shift += y / (u * (u + y))
        u += 1.0
    r = y / u
    l1 = math.log1p(r)
    acc = l1 + 0.5 * r / (u + y)
    uj = 1.0
    z = 1.0 / (u * u)
    for j, c in enumerate(_PSI_ASY, start=1):
        uj *= z
        acc -= c * uj * math.expm1(-2.0 * j * l1)
    return acc + shift


def _lgammacor(x):
    # Stirling remainder, valid for x >= 10
    z = 1.0 / (x * x)
    return (1.0 / 12.0 + z * (-1.0 / 360.0 + z * (1.0 / 1260.0 + z * (
        -1.0 / 1680.0 + z * (1.0 / 1188.0 + z * (-691.0 / 360360.0
                                                 + z / 156.0)))))) / x


def lbeta(a, b):
    p = min(a, b)
    q = max(a, b)
    if not p > 0.0:
        raise ValueError("lbeta requires positive arguments")
    if p >= 10.0:
        corr = _lgammacor(p) + _lgammacor(q) - _lgammacor(p + q)
        return (-0.5 * math.log(q) + 0.5 * LOG_2PI + corr
                + (p - 0.5) * math.log(p / (p + q))
                + q * math.log1p(-p / (p + q)))
    if q >= 10.0:
        corr = _lgammacor(q) - _lgammacor(p + q)
        return (math.lgamma(p) + corr + p - p * math.log(p + q)
                + (q - 0.5) * math.log1p(-p / (p + q)))
    return math.lgamma(p) + math.lgamma(q) - math.lgamma(p + q)


def _betacf(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAXIT + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def _log_front(a, b, x):
    return a * math.log(x) + b * math.log1p(-x) - lbeta(a, b) - math.log(a)


def betainc(a, b, x):
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    if x * (a + b + 2.0) > a + 1.0:
        y = 1.0 - x
        return 1.0 - math.exp(_log_front(b, a, y)) * _betacf(b, a, y)
    return math.exp(_log_front(a, b, x)) * _betacf(a, b, x)


def log_betainc(a, b, x):
    """log I_x(a, b), accurate in the lower tail."""
    if x * (a + b + 2.0) > a + 1.0:
        y = 1.0 - x
        return math.log1p(-math.exp(_log_front(b, a, y)) * _betacf(b, a, y))
    return _log_front(a, b, x) + math.log(_betacf(a, b, x))


def _beta_ppf_lower(a, b, p):
    lp = math.log(p)
    lb = lbeta(a, b)
    lo, hi = -745.0, 0.0
    t = (lp + math.log(a) + lb) / a
    mean_t = math.log(a / (a + b))
    if not t < mean_t:
        t = mean_t
    for _ in range(300):
        x = math.exp(t)
        if x >= 1.0:
            hi = t
            t = 0.5 * (lo + hi)
            continue
        li = log_betainc(a, b, x)
        r = li - lp
        if r == 0.0:
            return x
        if r > 0.0:
            hi = t
        else:
            lo = t
        logf = (a - 1.0) * t + (b - 1.0) * math.log1p(-x) - lb
        slope = math.exp(logf + t - li)
        if slope > 0.0 and math.isfinite(slope):
            tn = t - r / slope
            if abs(tn - t) <= 1e-15 * max(1.0, abs(t)):
                return math.exp(tn)
            if not lo < tn < hi:
                tn = 0.5 * (lo + hi)
        else:
            tn = 0.5 * (lo + hi)
        if hi - lo <= 1e-15 * max(1.0, abs(t)):
            return math.exp(tn)
        t = tn
    raise ArithmeticError("beta quantile did not converge")


def beta_ppf(a, b, p):
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    if p > 0.5:
        return 1.0 - _beta_ppf_lower(b, a, 1.0 - p)
    return _beta_ppf_lower(a, b, p)


def kw_ppf(alpha, beta, p):
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    t = math.log1p(-p) / beta
    # log(1 - e^t): log1p form when e^t is small, expm1 form otherwise
    lw = math.log1p(-math.exp(t)) if t < -0.6931471805599453 else math.log(-math.expm1(t))
    return math.exp(lw / alpha)


def betainc_array(a, b, xs):
    xs = np.asarray(xs, dtype=float)
    return np.array([betainc(a, b, x) for x in xs.ravel()]).reshape(xs.shape)


def beta_ppf_array(a, b, us):
    us = np.asarray(us, dtype=float)
    return np.array([beta_ppf(a, b, u) for u in us.ravel()]).reshape(us.shape)


def kw_ppf_array(alpha, beta, us):
    us = np.asarray(us, dtype=float)
    with np.errstate(divide="ignore"):
        t = np.log1p(-us) / beta
        small = t < -0.6931471805599453
        lw = np.where(small, np.log1p(-np.exp(np.minimum(t, 0.0))),
                      np.log(-np.expm1(np.where(small, -1.0, t))))
    return np.exp(lw / alpha)


def kw_profile_sums(logx, alpha):
    """Return (sum log(1-x^a), sum x^a log x/(1-x^a), sum x^a log^2 x/(1-x^a)^2)."""
    logx = np.asarray(logx, dtype=float)
    xa = np.exp(alpha * logx)
    om = -np.expm1(alpha * logx)
    # log(om) keeps precision when x^a is close to 1
    s0 = float(np.sum(np.where(xa > 0.5, np.log(om), np.log1p(-np.minimum(xa, 0.5)))))
    r = xa * logx / om
    s1 = float(np.sum(r))
    s2 = float(np.sum(r * logx / om))
    return s0, s1, s2


def _inv_gamma_signed(y, k):
    """(-1)^k / (Gamma(y - k) k!) for integer k >= 0, as (sign, log|.|)."""
    if y - k > 0.0:
        sign = -1.0 if k % 2 else 1.0
        return sign, -math.lgamma(y - k) - math.lgamma(k + 1.0)
    return _inv_gamma_smooth(y, float(k))


def _sinpi(y):
    n = round(y)
    s = math.sin(math.pi * (y - n))
    return -s if n % 2 else s


def _inv_gamma_smooth(y, k):
    # reflection form, valid for k + 1 - y > 0
    s = _sinpi(y)
    if s == 0.0:
        return 0.0, -math.inf
    sign = 1.0 if s > 0.0 else -1.0
    # Gamma(k+1-y)/Gamma(k+1) = B(k+1-y, y)/Gamma(y); lgamma differences
    # cancel catastrophically once k is large
    return sign, (math.log(abs(s)) - math.log(math.pi)
                  + lbeta(k + 1.0 - y, y) - math.lgamma(y))


def _w_bracket(x, z, k):
    s = (x + k) / z
    d = digamma_diff(1.0, s)
    return d * d + PI2_6 - trigamma(s + 1.0)


def series_log_term(kind, x, y, z, w, k, smooth):
    """(sign, log|term|) of the k-th term of a series.

    With ``smooth`` true the analytic continuation in real ``k`` is used
    (only meaningful past the alternating head of the W/H kinds).
    """
    if kind <= KIND_V:
        u = x + k * z
        lb = lbeta(u, y)
        if kind == KIND_F:
            return 1.0, lb - math.log(k)
        if kind == KIND_V:
            dv = digamma_diff(y, x + k * z)
            return -1.0, math.log(dv) + lb - math.log(k)
        dd = digamma_diff(u, y)
        if dd == 0.0:
            return 0.0, -math.inf
        lt = math.log(dd) + lb
        if kind == KIND_M:
            lt -= math.log(k)
        return -1.0, lt
    if kind == KIND_W:
        if smooth:
            sign, lc = _inv_gamma_smooth(y, k)
        else:
            sign, lc = _inv_gamma_signed(y, int(k))
        br = _w_bracket(x, z, k)
        if sign == 0.0 or br == 0.0:
            return 0.0, -math.inf
        return sign, lc + math.log(br) - math.log(x + k)
    # KIND_H: (-1)^k C(w, k) B((x + (2k+1) z)/2, (y+1)/2)
    if smooth:
        sign, lc = _inv_gamma_smooth(w + 1.0, k)
    else:
        sign, lc = _inv_gamma_signed(w + 1.0, int(k))
    if sign == 0.0:
        return 0.0, -math.inf
    return sign, (lc + math.lgamma(w + 1.0)
                  + lbeta(0.5 * (x + (2.0 * k + 1.0) * z), 0.5 * (y + 1.0)))


def series_term(kind, x, y, z, w, k, smooth):
    sign, lt = series_log_term(kind, x, y, z, w, k, smooth)
    if sign == 0.0:
        return 0.0
    return sign * math.exp(lt)


def series_partial(kind, x, y, z, w, k0, k1):
    """Neumaier-compensated sum of integer terms k0 <= k < k1.

    Returns (sum, sum of |term|).
    """
    s = 0.0
    c = 0.0
    mx = 0.0
    for k in range(k0, k1):
        t = series_term(kind, x, y, z, w, float(k), False)
        if not math.isfinite(t):
            raise ArithmeticError("non-finite series term")
        at = abs(t)
        mx += at
        u = s + t
        if abs(s) >= at:
            c += (s - u) + t
        else:
            c += (t - u) + s
        s = u
    return s + c, mx
