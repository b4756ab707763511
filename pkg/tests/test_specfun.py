import math

import numpy as np
import pytest

from edgeworth import specfun
from edgeworth.errors import DomainError
from edgeworth.kernel import golden_max
from edgeworth.specfun import (gamma_fn, gamma_lower_ext, gamma_upper,
                               norm_cdf, norm_cdf_array, std_normal,
                               std_normal_quantile)

from oracles import gamma_lower_ext_quad, gamma_upper_quad


def test_gamma_upper_closed_forms():
    assert gamma_upper(1.0, 2.0) == pytest.approx(math.exp(-2.0), rel=1e-13)
    # a = 1/2 near the origin: the complete gamma limit sqrt(pi)
    assert gamma_upper(0.5, 1e-30) == pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_gamma_upper_vs_quadrature_oracle():
    # frozen from the defining-integral oracle (tol 1e-14)
    assert gamma_upper(1.5, 4.0) == pytest.approx(0.040776812467804694, rel=1e-12)
    rng = np.random.default_rng(11)
    for _ in range(25):
        a = float(rng.uniform(0.05, 6.0))
        x = float(rng.uniform(0.01, 30.0))
        assert gamma_upper(a, x) == pytest.approx(gamma_upper_quad(a, x), rel=1e-11)


def test_gamma_upper_domain_and_underflow():
    with pytest.raises(DomainError):
        gamma_upper(-0.5, 1.0)
    with pytest.raises(DomainError):
        gamma_upper(0.0, 0.0)
    with pytest.raises(DomainError):
        gamma_upper(1.0, -1.0)
    assert gamma_upper(1.5, 1e6) == 0.0  # underflow is exact zero, not NaN
    assert gamma_upper(2.0, math.inf) == 0.0


def test_gamma_lower_ext_closed_forms():
    assert gamma_lower_ext(1.5, 0.0) == 0.0
    assert gamma_lower_ext(2.0, 1.0) == pytest.approx(1.0 - 2.0 / math.e, rel=1e-13)
    # frozen from the [x, 0] quadrature oracle
    assert gamma_lower_ext(1.5, -0.8) == pytest.approx(-0.78755047626957129, rel=1e-12)


def test_gamma_lower_ext_sign_and_monotone():
    with pytest.raises(DomainError):
        gamma_lower_ext(0.0, 1.0)
    rng = np.random.default_rng(5)
    for _ in range(50):
        a = float(rng.uniform(0.2, 5.0))
        x = float(rng.uniform(-20.0, -1e-3))
        v = gamma_lower_ext(a, x)
        assert v < 0.0
        # tanh-sinh oracle accuracy is limited by the |u|^(a-1) endpoint
        # singularity for a < 1; the implementation itself is ~1e-15
        assert v == pytest.approx(gamma_lower_ext_quad(a, x), rel=5e-9)
    xs = np.linspace(-3.0, 5.0, 41)
    vals = [gamma_lower_ext(1.7, float(x)) for x in xs]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_gamma_lower_ext_overflow_sentinel():
    assert gamma_lower_ext(1.5, -800.0) == -math.inf
    assert gamma_lower_ext(2.0, -745.5) == -math.inf


def test_gamma_identity_and_recurrence():
    rng = np.random.default_rng(42)
    for _ in range(2000):
        a = float(rng.uniform(0.05, 8.0))
        x = float(rng.uniform(1e-6, 40.0))
        total = gamma_lower_ext(a, x) + gamma_upper(a, x)
        assert total == pytest.approx(gamma_fn(a), rel=1e-10)
        lhs = gamma_upper(a + 1.0, x)
        rhs = a * gamma_upper(a, x) + x ** a * math.exp(-x)
        assert lhs == pytest.approx(rhs, rel=1e-10)


def test_std_normal_basics():
    cdf, pdf = std_normal(0.0)
    assert cdf == 0.5
    assert pdf == pytest.approx(0.3989422804014327, rel=1e-15)
    assert std_normal(1.6449).cdf == pytest.approx(0.95, abs=1e-4)
    rng = np.random.default_rng(3)
    xs = rng.uniform(-8, 8, 200)
    for x in xs:
        # both tails share one erfc evaluation path
        assert norm_cdf(float(-x)) == 0.5 * math.erfc(x / math.sqrt(2.0))
    vals = norm_cdf_array(np.sort(xs))
    assert np.all(np.diff(vals) >= 0.0)


def test_std_normal_symmetry_identity():
    rng = np.random.default_rng(9)
    for x in rng.uniform(0.0, 10.0, 300):
        assert abs(norm_cdf(-x) - (1.0 - norm_cdf(x))) <= 1e-15


def test_quantile_against_bisection_oracle():
    assert std_normal_quantile(0.5) == pytest.approx(0.0, abs=1e-15)
    # frozen from 120-step bisection on the mpmath CDF
    assert std_normal_quantile(0.95) == pytest.approx(1.6448536269514727, rel=1e-12)
    assert std_normal_quantile(0.99) == pytest.approx(2.3263478740408411, rel=1e-12)
    rng = np.random.default_rng(12)
    for p in rng.uniform(1e-6, 1.0 - 1e-6, 100):
        assert norm_cdf(std_normal_quantile(float(p))) == pytest.approx(p, abs=1e-12)
    for bad in (0.0, 1.0, -0.2, 1.3):
        with pytest.raises(DomainError):
            std_normal_quantile(bad)


def test_skew_correction_minimum_location():
    # (1 - x^2) phi(x) attains its minima at +-sqrt(3) ~ +-1.73
    xmin, _ = golden_max(lambda x: -(1.0 - x * x) * std_normal(x).pdf,
                         1.0, 3.0, tol=1e-12)
    assert xmin == pytest.approx(math.sqrt(3.0), abs=1e-6)
    assert xmin == pytest.approx(1.73, abs=0.01)


def test_backend_parity():
    try:
        from edgeworth import _kernels, _kernels_py
    except ImportError:
        pytest.skip("compiled backend not built")
    rng = np.random.default_rng(8)
    for _ in range(300):
        a = float(rng.uniform(0.05, 6.0))
        x = float(rng.uniform(1e-6, 60.0))
        assert _kernels.gamma_upper_raw(a, x) == pytest.approx(
            _kernels_py.gamma_upper_raw(a, x), rel=1e-13, abs=1e-300)
        assert _kernels.gamma_lower_raw(a, -x / 10.0) == pytest.approx(
            _kernels_py.gamma_lower_raw(a, -x / 10.0), rel=1e-13)
        t = float(rng.uniform(1e-6, 1.0))
        assert _kernels.psi_abs(t) == pytest.approx(
            _kernels_py.psi_abs(t), rel=1e-13)
        u = float(rng.uniform(-6.0, 6.0))
        assert _kernels.norm_cdf(u) == _kernels_py.norm_cdf(u)


def test_active_backend_reported():
    assert specfun.backend() in ("cython", "python")
