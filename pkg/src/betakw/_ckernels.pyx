# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels.

Mirrors :mod:`betakw._pykernels` name for name; the two are selected between
at import time by :mod:`betakw._backend`.
"""
import numpy as np

from libc.math cimport (
    log, log1p, exp, expm1, lgamma, sin, fabs, round as cround, isfinite,
    INFINITY, M_PI,
)

BACKEND = "cython"

KIND_F = 0
KIND_G = 1
KIND_M = 2
KIND_V = 3
KIND_W = 4
KIND_H = 5

cdef double LOG_2PI = 1.8378770664093454836
cdef double PI2_6 = M_PI * M_PI / 6.0
cdef double ROOT_HI = 1.4616321449683622
cdef double ROOT_LO = 9.549995429965697e-17
cdef double TINY = 1e-300
cdef double CF_EPS = 2.5e-16
cdef int CF_MAXIT = 20000

cdef double[25] ROOT_TAYLOR
ROOT_TAYLOR[:] = [
    0.9676722454476212, -0.4427631689835921, 0.258499760955651,
    -0.16394270544240652, 0.10782405069126237, -0.07219956125645471,
    0.04880428816414311, -0.03316112647484736, 0.022597648232218104,
    -0.01542476590494896, 0.010538791616612175, -0.007204534386356869,
    0.004926781395729853, -0.003369801655439328, 0.002305126326734928,
    -0.0015769367714301972, 0.0010788252019162967, -0.0007380709389960052,
    0.000504953265834602, -0.0003454680251063077, 0.00023635601564027053,
    -0.00016170622091974803, 0.0001106337276874741, -7.569179582195066e-05,
    5.178575795222081e-05,
]
cdef double[7] PSI_ASY
PSI_ASY[:] = [
    1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0,
    -691.0 / 32760.0, 1.0 / 12.0,
]
cdef double[8] TRI_ASY
TRI_ASY[:] = [
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0,
]


cdef inline double _psi_asymptotic(double x) noexcept nogil:
    cdef double z = 1.0 / (x * x)
    cdef double poly = 0.0
    cdef int i
    for i in range(6, -1, -1):
        poly = poly * z + PSI_ASY[i]
    return log(x) - 0.5 / x - z * poly


cdef double c_digamma(double x) noexcept nogil:
    cdef double d, acc, shift
    cdef int i
    if x < 1.0:
        return c_digamma(x + 1.0) - 1.0 / x
    d = (x - ROOT_HI) - ROOT_LO
    if fabs(d) < 0.25:
        acc = 0.0
        for i in range(24, -1, -1):
            acc = (acc + ROOT_TAYLOR[i]) * d
        return acc
    shift = 0.0
    while x < 10.0:
        shift += 1.0 / x
        x += 1.0
    return _psi_asymptotic(x) - shift


cdef double c_trigamma(double x) noexcept nogil:
    cdef double shift = 0.0
    cdef double z, poly
    cdef int i
    while x < 10.0:
        shift += 1.0 / (x * x)
        x += 1.0
    z = 1.0 / (x * x)
    poly = 0.0
    for i in range(7, -1, -1):
        poly = poly * z + TRI_ASY[i]
    return shift + 1.0 / x + 0.5 * z + poly * z / x


cdef double c_digamma_diff(double u, double y) noexcept nogil:
    cdef double shift = 0.0
    cdef double r, l1, acc, uj, z
    cdef int j
    while u < 10.0:
        shift += y / (u * (u + y))
        u += 1.0
    r = y / u
    l1 = log1p(r)
    acc = l1 + 0.5 * r / (u + y)
    uj = 1.0
    z = 1.0 / (u * u)
    for j in range(7):
        uj *= z
        acc -= PSI_ASY[j] * uj * expm1(-2.0 * (j + 1) * l1)
    return acc + shift


cdef inline double _lgammacor(double x) noexcept nogil:
    cdef double z = 1.0 / (x * x)
    return (1.0 / 12.0 + z * (-1.0 / 360.0 + z * (1.0 / 1260.0 + z * (
        -1.0 / 1680.0 + z * (1.0 / 1188.0 + z * (-691.0 / 360360.0
                                                 + z / 156.0)))))) / x


cdef double c_lbeta(double a, double b) noexcept nogil:
    cdef double p = a if a < b else b
    cdef double q = b if a < b else a
    cdef double corr
    if p >= 10.0:
        corr = _lgammacor(p) + _lgammacor(q) - _lgammacor(p + q)
        return (-0.5 * log(q) + 0.5 * LOG_2PI + corr
                + (p - 0.5) * log(p / (p + q)) + q * log1p(-p / (p + q)))
    if q >= 10.0:
        corr = _lgammacor(q) - _lgammacor(p + q)
        return (lgamma(p) + corr + p - p * log(p + q)
                + (q - 0.5) * log1p(-p / (p + q)))
    return lgamma(p) + lgamma(q) - lgamma(p + q)


cdef double _betacf(double a, double b, double x) noexcept nogil:
    # returns NaN on non-convergence
    cdef double qab = a + b
    cdef double qap = a + 1.0
    cdef double qam = a - 1.0
    cdef double c = 1.0
    cdef double d = 1.0 - qab * x / qap
    cdef double h, aa, delta
    cdef int m, m2
    if fabs(d) < TINY:
        d = TINY
    d = 1.0 / d
    h = d
    for m in range(1, CF_MAXIT + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if fabs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if fabs(c) < TINY:
            c = TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if fabs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if fabs(c) < TINY:
            c = TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < CF_EPS:
            return h
    return 0.0 / 0.0


cdef inline double _log_front(double a, double b, double x) noexcept nogil:
    return a * log(x) + b * log1p(-x) - c_lbeta(a, b) - log(a)


cdef double c_betainc(double a, double b, double x) noexcept nogil:
    cdef double y
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    if x * (a + b + 2.0) > a + 1.0:
        y = 1.0 - x
        return 1.0 - exp(_log_front(b, a, y)) * _betacf(b, a, y)
    return exp(_log_front(a, b, x)) * _betacf(a, b, x)


cdef double c_log_betainc(double a, double b, double x) noexcept nogil:
    cdef double y
    if x * (a + b + 2.0) > a + 1.0:
        y = 1.0 - x
        return log1p(-exp(_log_front(b, a, y)) * _betacf(b, a, y))
    return _log_front(a, b, x) + log(_betacf(a, b, x))


cdef double _beta_ppf_lower(double a, double b, double p) noexcept nogil:
    cdef double lp = log(p)
    cdef double lb = c_lbeta(a, b)
    cdef double lo = -745.0
    cdef double hi = 0.0
    cdef double t = (lp + log(a) + lb) / a
    cdef double mean_t = log(a / (a + b))
    cdef double x, li, r, logf, slope, tn
    cdef int it
    if not t < mean_t:
        t = mean_t
    for it in range(300):
        x = exp(t)
        if x >= 1.0:
            hi = t
            t = 0.5 * (lo + hi)
            continue
        li = c_log_betainc(a, b, x)
        r = li - lp
        if r == 0.0:
            return x
        if r > 0.0:
            hi = t
        else:
            lo = t
        logf = (a - 1.0) * t + (b - 1.0) * log1p(-x) - lb
        slope = exp(logf + t - li)
        if slope > 0.0 and isfinite(slope):
            tn = t - r / slope
            if fabs(tn - t) <= 1e-15 * (fabs(t) if fabs(t) > 1.0 else 1.0):
                return exp(tn)
            if not (lo < tn < hi):
                tn = 0.5 * (lo + hi)
        else:
            tn = 0.5 * (lo + hi)
        if hi - lo <= 1e-15 * (fabs(t) if fabs(t) > 1.0 else 1.0):
            return exp(tn)
        t = tn
    return 0.0 / 0.0


cdef double c_beta_ppf(double a, double b, double p) noexcept nogil:
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    if p > 0.5:
        return 1.0 - _beta_ppf_lower(b, a, 1.0 - p)
    return _beta_ppf_lower(a, b, p)


cdef inline double c_kw_ppf(double alpha, double beta, double p) noexcept nogil:
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    cdef double t = log1p(-p) / beta
    if t < -0.6931471805599453:
        return exp(log1p(-exp(t)) / alpha)
    return exp(log(-expm1(t)) / alpha)


cdef inline double _sinpi(double y) noexcept nogil:
    cdef double n = cround(y)
    cdef double s = sin(M_PI * (y - n))
    cdef long ni = <long>n
    return -s if ni % 2 else s


cdef inline double _inv_gamma_smooth(double y, double k, double* lc) noexcept nogil:
    cdef double s = _sinpi(y)
    if s == 0.0:
        lc[0] = -INFINITY
        return 0.0
    # ratio via lbeta: lgamma differences cancel once k is large
    lc[0] = log(fabs(s)) - log(M_PI) + c_lbeta(k + 1.0 - y, y) - lgamma(y)
    return 1.0 if s > 0.0 else -1.0


cdef inline double _inv_gamma_signed(double y, long k, double* lc) noexcept nogil:
    if y - k > 0.0:
        lc[0] = -lgamma(y - k) - lgamma(k + 1.0)
        return -1.0 if k % 2 else 1.0
    return _inv_gamma_smooth(y, <double>k, lc)


cdef double _w_bracket(double x, double z, double k) noexcept nogil:
    cdef double s = (x + k) / z
    cdef double d = c_digamma_diff(1.0, s)
    return d * d + PI2_6 - c_trigamma(s + 1.0)


cdef double c_series_log_term(int kind, double x, double y, double z, double w,
                              double k, bint smooth, double* lt) noexcept nogil:
    cdef double u, lb, dd, dv, br, sign, lc
    if kind <= 3:
        u = x + k * z
        lb = c_lbeta(u, y)
        if kind == 0:
            lt[0] = lb - log(k)
            return 1.0
        if kind == 3:
            dv = c_digamma_diff(y, u)
            lt[0] = log(dv) + lb - log(k)
            return -1.0
        dd = c_digamma_diff(u, y)
        if dd == 0.0:
            lt[0] = -INFINITY
            return 0.0
        lt[0] = log(dd) + lb
        if kind == 2:
            lt[0] -= log(k)
        return -1.0
    if kind == 4:
        if smooth:
            sign = _inv_gamma_smooth(y, k, &lc)
        else:
            sign = _inv_gamma_signed(y, <long>k, &lc)
        br = _w_bracket(x, z, k)
        if sign == 0.0 or br == 0.0:
            lt[0] = -INFINITY
            return 0.0
        lt[0] = lc + log(br) - log(x + k)
        return sign
    if smooth:
        sign = _inv_gamma_smooth(w + 1.0, k, &lc)
    else:
        sign = _inv_gamma_signed(w + 1.0, <long>k, &lc)
    if sign == 0.0:
        lt[0] = -INFINITY
        return 0.0
    lt[0] = (lc + lgamma(w + 1.0)
             + c_lbeta(0.5 * (x + (2.0 * k + 1.0) * z), 0.5 * (y + 1.0)))
    return sign


cdef inline double c_series_term(int kind, double x, double y, double z,
                                 double w, double k, bint smooth) noexcept nogil:
    cdef double lt
    cdef double sign = c_series_log_term(kind, x, y, z, w, k, smooth, &lt)
    if sign == 0.0:
        return 0.0
    return sign * exp(lt)


# ---------------------------------------------------------------- wrappers

def digamma(double x):
    if not x > 0.0:
        raise ValueError("digamma requires x > 0")
    return c_digamma(x)


def trigamma(double x):
    if not x > 0.0:
        raise ValueError("trigamma requires x > 0")
    return c_trigamma(x)


def digamma_diff(double u, double y):
    """psi(u + y) - psi(u) without cancellation for large u."""
    return c_digamma_diff(u, y)


def lbeta(double a, double b):
    if not (a > 0.0 and b > 0.0):
        raise ValueError("lbeta requires positive arguments")
    return c_lbeta(a, b)


def betainc(double a, double b, double x):
    cdef double r = c_betainc(a, b, x)
    if r != r:
        raise ArithmeticError("incomplete beta continued fraction did not converge")
    return r


def log_betainc(double a, double b, double x):
    """log I_x(a, b), accurate in the lower tail."""
    return c_log_betainc(a, b, x)


def beta_ppf(double a, double b, double p):
    cdef double r = c_beta_ppf(a, b, p)
    if r != r:
        raise ArithmeticError("beta quantile did not converge")
    return r


def kw_ppf(double alpha, double beta, double p):
    return c_kw_ppf(alpha, beta, p)


def betainc_array(double a, double b, xs):
    cdef double[::1] xv = np.ascontiguousarray(xs, dtype=np.float64).ravel()
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(xv.shape[0]):
            ov[i] = c_betainc(a, b, xv[i])
    return out.reshape(np.shape(xs))


def beta_ppf_array(double a, double b, us):
    cdef double[::1] uv = np.ascontiguousarray(us, dtype=np.float64).ravel()
    out = np.empty(uv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(uv.shape[0]):
            ov[i] = c_beta_ppf(a, b, uv[i])
    return out.reshape(np.shape(us))


def kw_ppf_array(double alpha, double beta, us):
    cdef double[::1] uv = np.ascontiguousarray(us, dtype=np.float64).ravel()
    out = np.empty(uv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(uv.shape[0]):
            ov[i] = c_kw_ppf(alpha, beta, uv[i])
    return out.reshape(np.shape(us))


def kw_profile_sums(logx, double alpha):
    """Return (sum log(1-x^a), sum x^a log x/(1-x^a), sum x^a log^2 x/(1-x^a)^2)."""
    cdef double[::1] lv = np.ascontiguousarray(logx, dtype=np.float64).ravel()
    cdef double s0 = 0.0, s1 = 0.0, s2 = 0.0
    cdef double xa, om, r
    cdef Py_ssize_t i
    with nogil:
        for i in range(lv.shape[0]):
            xa = exp(alpha * lv[i])
            om = -expm1(alpha * lv[i])
            s0 += log(om) if xa > 0.5 else log1p(-xa)
            r = xa * lv[i] / om
            s1 += r
            s2 += r * lv[i] / om
    return s0, s1, s2


def series_log_term(int kind, double x, double y, double z, double w,
                    double k, bint smooth):
    """(sign, log|term|) of the k-th term of a series."""
    cdef double lt
    cdef double sign = c_series_log_term(kind, x, y, z, w, k, smooth, &lt)
    return sign, lt


def series_term(int kind, double x, double y, double z, double w,
                double k, bint smooth):
    return c_series_term(kind, x, y, z, w, k, smooth)


def series_partial(int kind, double x, double y, double z, double w,
                   long k0, long k1):
    """Neumaier-compensated sum of integer terms k0 <= k < k1.

    Returns (sum, sum of |term|).
    """
    cdef double s = 0.0, c = 0.0, mx = 0.0
    cdef double t, at, u
    cdef long k
    cdef bint bad = False
    with nogil:
        for k in range(k0, k1):
            t = c_series_term(kind, x, y, z, w, <double>k, False)
            if not isfinite(t):
                bad = True
                break
            at = fabs(t)
            mx += at
            u = s + t
            if fabs(s) >= at:
                c += (s - u) + t
            else:
                c += (t - u) + s
            s = u
    if bad:
        raise ArithmeticError("non-finite series term")
    return s + c, mx
