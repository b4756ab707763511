# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Cython build of the scalar kernels in ``edgeworth._kernels_py``.

Same algorithms, same branch points; only the dispatch overhead changes.
"""

from libc.math cimport (cos, erfc, exp, fabs, hypot, isinf, lgamma, log,
                        pi as M_PI, pow as cpow, sin, sqrt, tgamma,
                        INFINITY)

BACKEND = "cython"

cdef double _SQRT2 = sqrt(2.0)
cdef double _INV_SQRT_2PI = 1.0 / sqrt(2.0 * M_PI)
cdef double _EULER_GAMMA = 0.57721566490153286060651209008240243
cdef double _TINY = 1.0e-300
cdef int _MAX_ITER = 400


cdef double _upper_cf(double a, double x):
    cdef double b = x + 1.0 - a
    cdef double c = 1.0 / _TINY
    cdef double d = 1.0 / b
    cdef double h = d
    cdef double an, delta, logpre
    cdef int i
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if fabs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if fabs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < 1e-16:
            break
    logpre = -x + a * log(x)
    if logpre < -745.0:
        return 0.0
    return exp(logpre) * h


cdef double _lower_series(double a, double x):
    cdef double ap = a
    cdef double delta = 1.0 / a
    cdef double s = delta
    cdef double logpre
    cdef int i
    for i in range(_MAX_ITER):
        ap += 1.0
        delta *= x / ap
        s += delta
        if fabs(delta) < fabs(s) * 1e-17:
            break
    logpre = -x + a * log(x)
    if logpre < -745.0:
        return 0.0
    return s * exp(logpre)


cdef double _e1_series(double x):
    cdef double s = -_EULER_GAMMA - log(x)
    cdef double term = 1.0
    cdef double contrib
    cdef int k
    for k in range(1, _MAX_ITER):
        term *= -x / k
        contrib = -term / k
        s += contrib
        if fabs(contrib) < fabs(s) * 1e-17:
            break
    return s


cdef double _gamma_upper_c(double a, double x):
    if x == 0.0:
        return tgamma(a)
    if x >= a + 1.0:
        return _upper_cf(a, x)
    if a == 0.0:
        return _e1_series(x)
    return tgamma(a) - _lower_series(a, x)


cdef double _gamma_lower_c(double a, double x):
    cdef double y, u, s, total
    cdef long k
    if x == 0.0:
        return 0.0
    if x > 0.0:
        if x < a + 1.0:
            return _lower_series(a, x)
        return tgamma(a) - _upper_cf(a, x)
    y = -x
    if y > 745.0:
        return -INFINITY
    u = cpow(y, a) * exp(-y)
    s = 0.0
    k = 0
    while k < 100000:
        s += u / (a + k)
        u *= y / (k + 1.0)
        if u < (fabs(s) + _TINY) * 1e-18 and k > <long>y:
            break
        k += 1
    if y < 700.0:
        total = s * exp(y)
    else:
        total = s * exp(350.0) * exp(y - 350.0)
    if isinf(total):
        return -INFINITY
    return -total


def gamma_upper_raw(double a, double x):
    return _gamma_upper_c(a, x)


def gamma_lower_raw(double a, double x):
    return _gamma_lower_c(a, x)


def norm_cdf(double x):
    return 0.5 * erfc(-x / _SQRT2)


def norm_pdf(double x):
    return exp(-0.5 * x * x) * _INV_SQRT_2PI


cdef double _cot_minus_pole_c(double t):
    cdef double z = M_PI * t
    cdef double z2
    if fabs(t) < 0.01:
        z2 = z * z
        return -z * (1.0 / 3.0 + z2 * (1.0 / 45.0 + z2 * (2.0 / 945.0 + z2 / 4725.0)))
    return cos(z) / sin(z) - 1.0 / z


def cot_minus_pole(double t):
    return _cot_minus_pole_c(t)


def psi_re_im(double t):
    cdef double at = fabs(t)
    cdef double sgn, re, im
    if at > 1.0:
        return 0.0, 0.0
    sgn = 1.0 if t > 0.0 else (-1.0 if t < 0.0 else 0.0)
    if at == 1.0:
        return 0.0, sgn * 0.5 / M_PI
    if t == 0.0:
        return 0.5, 0.0
    re = 0.5 * (1.0 - at)
    im = 0.5 * ((1.0 - at) * (cos(M_PI * t) / sin(M_PI * t)) + sgn / M_PI)
    return re, im


def psi_minus_pole_re_im(double t):
    cdef double c = _cot_minus_pole_c(t)
    return 0.5 * (1.0 - t), 0.5 * (1.0 - t) * c


cdef double _psi_abs_c(double t):
    cdef double at = fabs(t)
    cdef double re, im
    if at > 1.0:
        return 0.0
    if at == 1.0:
        return 0.5 / M_PI
    if t == 0.0:
        return 0.5
    re = 0.5 * (1.0 - at)
    im = 0.5 * ((1.0 - at) * (cos(M_PI * t) / sin(M_PI * t))
                + (1.0 if t > 0.0 else -1.0) / M_PI)
    return hypot(re, im)


def psi_abs(double t):
    return _psi_abs_c(t)


cdef double _two_psi_minus_pole_abs_c(double t):
    if t == 0.0:
        return 1.0
    return (1.0 - t) * hypot(1.0, _cot_minus_pole_c(t))


def two_psi_minus_pole_abs(double t):
    return _two_psi_minus_pole_abs_c(t)


def charfn_envelope(double u, double xi, double theta1, double chi1):
    cdef double au = fabs(u)
    if au < theta1 / xi:
        return exp(-0.5 * au * au + chi1 * xi * au * au * au)
    if au <= 2.0 * M_PI / xi:
        return exp((cos(xi * au) - 1.0) / (xi * xi))
    return 1.0


def norm_cdf_array(double[:] xs, double[:] out):
    cdef Py_ssize_t i
    for i in range(xs.shape[0]):
        out[i] = 0.5 * erfc(-xs[i] / _SQRT2)


def norm_pdf_array(double[:] xs, double[:] out):
    cdef Py_ssize_t i
    for i in range(xs.shape[0]):
        out[i] = exp(-0.5 * xs[i] * xs[i]) * _INV_SQRT_2PI


def psi_abs_array(double[:] ts, double[:] out):
    cdef Py_ssize_t i
    for i in range(ts.shape[0]):
        out[i] = _psi_abs_c(ts[i])


def two_psi_minus_pole_abs_array(double[:] ts, double[:] out):
    cdef Py_ssize_t i
    for i in range(ts.shape[0]):
        out[i] = _two_psi_minus_pole_abs_c(ts[i])
