"""Special functions underlying every bound.

Upper incomplete gamma (continued fraction / series split at x = a+1),
the extended lower incomplete gamma (signed for negative arguments),
and the standard normal CDF/PDF/quantile.

The scalar work is delegated to a compiled core (``edgeworth._kernels``)
when available, with a pure-Python twin as fallback.  Set
``EDGEWORTH_PURE_PYTHON=1`` before import to force the fallback.
"""

from __future__ import annotations

import math
import os
from typing import NamedTuple

import numpy as np

from .errors import DomainError

if os.environ.get("EDGEWORTH_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND: str = _impl.BACKEND

SQRT_2PI = math.sqrt(2.0 * math.pi)


def backend() -> str:
    """Name of the active kernel implementation: 'cython' or 'python'."""
    return BACKEND


def gamma_fn(a: float) -> float:
    """Complete gamma function, a > 0."""
    if a <= 0.0:
        raise DomainError(f"gamma_fn requires a > 0, got a={a}")
    return math.gamma(a)


def gamma_upper(a: float, x: float) -> float:
    """Upper incomplete gamma: integral of u^(a-1) e^(-u) over [x, inf).

    Requires a >= 0, and x > 0 when a = 0 (the integral diverges at 0).
    Underflow for huge x returns exactly 0.0, never NaN.
    """
    if a < 0.0:
        raise DomainError(f"gamma_upper requires a >= 0, got a={a}")
    if a == 0.0 and x <= 0.0:
        raise DomainError("gamma_upper(0, x) requires x > 0")
    if x < 0.0:
        raise DomainError(f"gamma_upper requires x >= 0, got x={x}")
    if math.isinf(x):
        return 0.0
    return _impl.gamma_upper_raw(a, x)


def gamma_lower_ext(a: float, x: float) -> float:
    """Extended lower incomplete gamma: signed integral of |u|^(a-1) e^(-u).

    Integration runs from 0 to x; for x < 0 the result is negative.
    Requires a > 0.  Magnitude overflow for very negative x clamps to
    -inf (the +/-inf sentinel policy; callers treat it as an
    uninformative bound, never silent wraparound).
    """
    if a <= 0.0:
        raise DomainError(f"gamma_lower_ext requires a > 0, got a={a}")
    if math.isinf(x):
        return math.gamma(a) if x > 0.0 else -math.inf
    return _impl.gamma_lower_raw(a, x)


class NormalValues(NamedTuple):
    cdf: float
    pdf: float


def std_normal(x: float) -> NormalValues:
    """Standard normal CDF and PDF at x."""
    return NormalValues(_impl.norm_cdf(x), _impl.norm_pdf(x))


def norm_cdf(x: float) -> float:
    return _impl.norm_cdf(x)


def norm_pdf(x: float) -> float:
    return _impl.norm_pdf(x)


def std_normal_quantile(p: float) -> float:
    """Inverse of the standard normal CDF on (0, 1).

    Rational initial guess polished by Newton steps on our own CDF, so the
    result is consistent with norm_cdf to ~1e-15.
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"std_normal_quantile requires 0 < p < 1, got {p}")
    x = _quantile_guess(p)
    for _ in range(4):
        err = _impl.norm_cdf(x) - p
        d = _impl.norm_pdf(x)
        if d <= 0.0:
            break
        step = err / d
        x -= step
        if abs(step) < 1e-14 * max(1.0, abs(x)):
            break
    return x


def _quantile_guess(p: float) -> float:
    # Acklam-style rational approximation, ~1e-9 accurate; Newton finishes.
    a = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
         1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
    b = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
         6.680131188771972e+01, -1.328068155288572e+01)
    c = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
         -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
    d = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
         3.754408661907416e+00)
    plow, phigh = 0.02425, 1.0 - 0.02425
    if p < plow:
        q = math.sqrt(-2.0 * math.log(p))
        return ((((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
                / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0))
    if p > phigh:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        return -((((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
                 / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0))
    q = p - 0.5
    r = q * q
    return ((((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q
            / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0))


def norm_cdf_array(xs: np.ndarray) -> np.ndarray:
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    out = np.empty_like(xs)
    _impl.norm_cdf_array(xs, out)
    return out


def norm_pdf_array(xs: np.ndarray) -> np.ndarray:
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    out = np.empty_like(xs)
    _impl.norm_pdf_array(xs, out)
    return out
