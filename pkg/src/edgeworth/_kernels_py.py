"""Pure-Python scalar kernels: incomplete gamma, normal CDF, smoothing kernel.

Reference implementation of the hot numerical core.  ``edgeworth._kernels``
is a Cython build of the same algorithms; ``edgeworth.specfun`` picks
whichever is importable.  Keep the two in sync branch for branch.
"""

import math

BACKEND = "python"

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_EULER_GAMMA = 0.57721566490153286060651209008240243
_TINY = 1.0e-300
_MAX_ITER = 400


def _upper_cf(a, x):
    """Continued fraction for the non-normalized upper gamma, x >= a+1."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    # prefactor e^{-x} x^a; underflow clamps to exact 0 by design
    logpre = -x + a * math.log(x)
    if logpre < -745.0:
        return 0.0
    return math.exp(logpre) * h


def _lower_series(a, x):
    """Power series for the non-normalized lower gamma, 0 < x < a+1."""
    ap = a
    delta = 1.0 / a
    s = delta
    for _ in range(_MAX_ITER):
        ap += 1.0
        delta *= x / ap
        s += delta
        if abs(delta) < abs(s) * 1e-17:
            break
    logpre = -x + a * math.log(x)
    if logpre < -745.0:
        return 0.0
    return s * math.exp(logpre)


def _e1_series(x):
    """Exponential integral E1(x) for 0 < x < 1."""
    s = -_EULER_GAMMA - math.log(x)
    term = 1.0
    for k in range(1, _MAX_ITER):
        term *= -x / k
        contrib = -term / k
        s += contrib
        if abs(contrib) < abs(s) * 1e-17:
            break
    return s


def gamma_upper_raw(a, x):
    """Upper incomplete gamma on a >= 0, x > 0 (x >= 0 when a > 0)."""
    if x == 0.0:
        return math.gamma(a)
    if x >= a + 1.0:
        return _upper_cf(a, x)
    if a == 0.0:
        return _e1_series(x)
    return math.gamma(a) - _lower_series(a, x)


def gamma_lower_raw(a, x):
    """Extended lower incomplete gamma on a > 0, any real x (signed)."""
    if x == 0.0:
        return 0.0
    if x > 0.0:
        if x < a + 1.0:
            return _lower_series(a, x)
        return math.gamma(a) - _upper_cf(a, x)
    # x < 0: -(integral of v^{a-1} e^{v} on [0, |x|]), grows like e^{|x|}
    y = -x
    if y > 745.0:
        return -math.inf
    u = math.pow(y, a) * math.exp(-y)  # u_k = y^{a+k} e^{-y} / k!, damped
    s = 0.0
    k = 0
    while k < 100000:
        s += u / (a + k)
        u *= y / (k + 1.0)
        if u < (abs(s) + _TINY) * 1e-18 and k > y:
            break
        k += 1
    total = s * math.exp(y) if y < 700.0 else s * math.exp(350.0) * math.exp(y - 350.0)
    if math.isinf(total):
        return -math.inf
    return -total


def norm_cdf(x):
    return 0.5 * math.erfc(-x / _SQRT2)


def norm_pdf(x):
    return math.exp(-0.5 * x * x) * _INV_SQRT_2PI


def cot_minus_pole(t):
    """cot(pi t) - 1/(pi t), cancellation-free near t = 0."""
    z = math.pi * t
    if abs(t) < 0.01:
        z2 = z * z
        return -z * (1.0 / 3.0 + z2 * (1.0 / 45.0 + z2 * (2.0 / 945.0 + z2 / 4725.0)))
    return math.cos(z) / math.sin(z) - 1.0 / z


def psi_re_im(t):
    """Prawitz kernel value as (re, im); 0 outside [-1, 1].

    At |t| = 1 the vanishing 1-|t| factor is taken to kill the cotangent
    term, and at t = 0 the simple-pole part is dropped (callers that need
    the pole-free combination use psi_minus_pole_re_im).
    """
    at = abs(t)
    if at > 1.0:
        return 0.0, 0.0
    sgn = 1.0 if t > 0.0 else (-1.0 if t < 0.0 else 0.0)
    if at == 1.0:
        return 0.0, sgn * 0.5 / math.pi
    if t == 0.0:
        return 0.5, 0.0
    re = 0.5 * (1.0 - at)
    im = 0.5 * ((1.0 - at) * (math.cos(math.pi * t) / math.sin(math.pi * t))
                + sgn / math.pi)
    return re, im


def psi_minus_pole_re_im(t):
    """Psi(t) - i/(2 pi t) for t in (0, 1], free of the 1/t cancellation.

    Algebraically equal to (1-t)(1 + i*(cot(pi t) - 1/(pi t)))/2.
    """
    c = cot_minus_pole(t)
    return 0.5 * (1.0 - t), 0.5 * (1.0 - t) * c


def psi_abs(t):
    re, im = psi_re_im(t)
    return math.hypot(re, im)


def two_psi_minus_pole_abs(t):
    """|2 Psi(t) - i/(pi t)| = (1-t) sqrt(1 + (cot(pi t) - 1/(pi t))^2)."""
    if t == 0.0:
        return 1.0
    return (1.0 - t) * math.hypot(1.0, cot_minus_pole(t))


def charfn_envelope(u, xi, theta1, chi1):
    """Three-branch envelope on |f_{S_n}(u)| driven by xi = K3tilde/sqrt(n)."""
    au = abs(u)
    if au < theta1 / xi:
        return math.exp(-0.5 * au * au + chi1 * xi * au * au * au)
    if au <= 2.0 * math.pi / xi:
        return math.exp((math.cos(xi * au) - 1.0) / (xi * xi))
    return 1.0


def norm_cdf_array(xs, out):
    for i in range(len(xs)):
        out[i] = 0.5 * math.erfc(-xs[i] / _SQRT2)


def norm_pdf_array(xs, out):
    for i in range(len(xs)):
        out[i] = math.exp(-0.5 * xs[i] * xs[i]) * _INV_SQRT_2PI


def psi_abs_array(ts, out):
    for i in range(len(ts)):
        out[i] = psi_abs(ts[i])


def two_psi_minus_pole_abs_array(ts, out):
    for i in range(len(ts)):
        out[i] = two_psi_minus_pole_abs(ts[i])
