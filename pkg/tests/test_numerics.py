import math

import numpy as np
import pytest
from scipy import stats
from scipy.integrate import quad

from ghype.errors import NumericsDomainError, QuadratureError
from ghype.models.configs import QuadratureConfig
from ghype.numerics import (
    chi2_sf,
    integrate_unit_interval,
    ks_p_value,
    ks_test,
    log_binomial,
    reg_inc_beta,
    sample_skewness,
    scaled_beta_cdf,
    scaled_beta_pdf,
)

pytestmark = pytest.mark.unit


class TestSpecialFunctions:
    def test_log_binomial_small_values(self):
        assert log_binomial(5, 2) == pytest.approx(math.log(10))
        assert log_binomial(7, 0) == 0.0
        assert log_binomial(7, 7) == pytest.approx(0.0, abs=1e-12)

    def test_log_binomial_is_vectorized(self):
        out = log_binomial(np.array([4.0, 6.0]), np.array([2.0, 3.0]))
        np.testing.assert_allclose(out, np.log([6.0, 20.0]))

    def test_log_binomial_real_arguments(self):
        # C(2.5, 1) = Gamma(3.5) / (Gamma(2) Gamma(2.5)) = 2.5
        assert log_binomial(2.5, 1.0) == pytest.approx(math.log(2.5))

    @pytest.mark.parametrize("n, k", [(3, 4), (-1, 0), (3, -1)])
    def test_log_binomial_domain(self, n, k):
        with pytest.raises(NumericsDomainError):
            log_binomial(n, k)

    def test_reg_inc_beta(self):
        assert reg_inc_beta(0.3, 1.0, 1.0) == pytest.approx(0.3)
        assert reg_inc_beta(0.5, 4.0, 4.0) == pytest.approx(0.5)
        assert reg_inc_beta(0.0, 2.0, 3.0) == 0.0
        assert reg_inc_beta(1.0, 2.0, 3.0) == 1.0

    def test_reg_inc_beta_domain(self):
        with pytest.raises(NumericsDomainError):
            reg_inc_beta(1.5, 1.0, 1.0)
        with pytest.raises(NumericsDomainError):
            reg_inc_beta(0.5, 0.0, 1.0)

    def test_chi2_sf(self):
        assert chi2_sf(0.0, 3) == 1.0
        assert chi2_sf(2.0, 2) == pytest.approx(math.exp(-1.0))
        with pytest.raises(NumericsDomainError):
            chi2_sf(-1.0, 2)
        with pytest.raises(NumericsDomainError):
            chi2_sf(1.0, 0)


class TestQuadrature:
    def test_polynomial_on_unit_interval(self):
        # binomial expansion of (1 - z^2)^5 integrated over (0, 1)
        exact = 1 - 5 / 3 + 2 - 10 / 7 + 5 / 9 - 1 / 11
        assert integrate_unit_interval(lambda z: (1 - z * z) ** 5) == pytest.approx(exact, rel=1e-10)

    def test_interior_break_point(self):
        value = integrate_unit_interval(lambda z: math.exp(-((z - 0.5) ** 2) / 1e-4), points=[0.5])
        assert value == pytest.approx(math.sqrt(math.pi * 1e-4), rel=1e-8)

    def test_exhausted_subdivisions(self):
        cfg = QuadratureConfig(max_subdivisions=1)
        with pytest.raises(QuadratureError):
            integrate_unit_interval(lambda z: math.sin(400 * z) ** 2 / (z + 1e-3), cfg)


class TestKolmogorovSmirnov:
    def test_single_sample_statistic(self):
        report = ks_test([0.5], lambda x: x)
        assert report.statistic == pytest.approx(0.5)
        assert report.n == 1

    def test_uniform_samples_against_uniform(self):
        samples = np.random.default_rng(3).random(2000)
        report = ks_test(samples, lambda x: np.clip(x, 0.0, 1.0))
        assert report.p_value > 1e-3
        assert report.statistic == pytest.approx(stats.kstest(samples, "uniform").statistic)

    def test_shifted_samples_are_rejected(self):
        samples = np.random.default_rng(4).random(2000) * 0.8 + 0.2
        assert ks_test(samples, lambda x: np.clip(x, 0.0, 1.0)).p_value < 1e-6

    def test_scalar_only_cdf(self):
        report = ks_test([0.1, 0.4, 0.8], lambda x: min(max(float(x), 0.0), 1.0))
        assert 0.0 <= report.p_value <= 1.0

    def test_empty(self):
        with pytest.raises(NumericsDomainError):
            ks_test([], lambda x: x)


class TestSkewness:
    def test_symmetric_values(self):
        assert sample_skewness([1.0, 2.0, 3.0]) == pytest.approx(0.0)

    def test_matches_scipy(self):
        values = [1, 1, 2, 3, 9, 4]
        assert sample_skewness(values) == pytest.approx(stats.skew(values))
        assert sample_skewness(values, adjusted=True) == pytest.approx(stats.skew(values, bias=False))

    def test_degenerate(self):
        with pytest.raises(NumericsDomainError):
            sample_skewness([2.0, 2.0, 2.0])
        with pytest.raises(NumericsDomainError):
            sample_skewness([1.0, 2.0])


class TestScaledBeta:
    def test_uniform_case(self):
        assert scaled_beta_cdf(2.5, 1.0, 1.0, 10.0) == pytest.approx(0.25)
        assert scaled_beta_pdf(2.5, 1.0, 1.0, 10.0) == pytest.approx(0.1)


def chi2_tail_by_quadrature(x: float, nu: int) -> float:
    log_norm = (nu / 2) * math.log(2.0) + math.lgamma(nu / 2)

    def density(t: float) -> float:
        return math.exp((nu / 2 - 1) * math.log(t) - t / 2 - log_norm)

    value, _ = quad(density, x, np.inf, epsabs=1e-15, epsrel=1e-11, limit=200)
    return value


class TestIdentities:
    @pytest.mark.parametrize("a, b", [(0.5, 0.5), (1.0, 3.0), (2.5, 7.0), (40.0, 2.0), (300.0, 150.0)])
    @pytest.mark.parametrize("x", [0.0, 1e-6, 0.2, 0.5, 0.77, 0.999, 1.0])
    def test_incomplete_beta_reflection(self, x, a, b):
        assert reg_inc_beta(x, a, b) + reg_inc_beta(1.0 - x, b, a) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("nu", range(1, 11))
    def test_chi2_sf_matches_integrated_density(self, nu):
        for x in (0.3, 1.0, 2.5, 5.0, 10.0, 20.0, 35.0, 50.0):
            assert chi2_sf(x, nu) == pytest.approx(chi2_tail_by_quadrature(x, nu), rel=1e-7, abs=1e-14)

    @pytest.mark.parametrize("degree", range(21))
    def test_quadrature_exact_on_polynomials(self, degree):
        coefficients = np.random.default_rng(degree).normal(size=degree + 1)
        exact = sum(c / (k + 1) for k, c in enumerate(coefficients))
        value = integrate_unit_interval(lambda z: float(np.polynomial.polynomial.polyval(z, coefficients)))
        assert value == pytest.approx(exact, rel=1e-10, abs=1e-12)

    @pytest.mark.parametrize(
        "forward, inverse",
        [(lambda x: x**3, np.cbrt), (np.exp, np.log), (lambda x: 5.0 * x - 2.0, lambda y: (y + 2.0) / 5.0)],
    )
    def test_ks_invariant_under_increasing_transform(self, forward, inverse):
        samples = np.random.default_rng(8).beta(2.0, 3.0, size=400)

        def cdf(x):
            return stats.beta.cdf(x, 2.0, 3.0)

        plain = ks_test(samples, cdf)
        mapped = ks_test(forward(samples), lambda y: cdf(inverse(y)))
        assert mapped.statistic == pytest.approx(plain.statistic, abs=1e-9)
        assert mapped.p_value == pytest.approx(plain.p_value, abs=1e-8)


class TestQuadratureFailures:
    def test_divergent_integrand(self):
        with pytest.raises(QuadratureError):
            integrate_unit_interval(lambda z: 1.0 / z)


class TestKolmogorovPValue:
    def test_matches_ks_test(self):
        samples = np.random.default_rng(6).random(300)
        report = ks_test(samples, lambda x: np.clip(x, 0.0, 1.0))
        assert ks_p_value(report.statistic, 300) == report.p_value

    def test_smaller_size_gives_larger_p(self):
        assert ks_p_value(0.02, 950.0) > ks_p_value(0.02, 20_000)

    def test_size_must_be_positive(self):
        with pytest.raises(NumericsDomainError):
            ks_p_value(0.1, 0)
