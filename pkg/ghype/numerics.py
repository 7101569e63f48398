"""Special functions, quadrature and test-statistic kernels shared by the toolkit.

Everything here is a thin, domain-checked layer over scipy so the rest of the
code can work in log space without repeating argument validation.
"""
import logging
from collections.abc import Callable, Sequence
from typing import Optional

import numpy as np
from scipy import stats
from scipy.integrate import quad
from scipy.special import betainc, chdtrc, gammaln, kolmogorov

from ghype.errors import NumericsDomainError, QuadratureError
from ghype.models.configs import QuadratureConfig
from ghype.models.reports import KSReport

logger = logging.getLogger(__name__)

# Error-estimate headroom over the requested tolerance for results QUADPACK flags
FLAGGED_ERROR_SLACK = 1e4


def log_binomial(n, k):
    """log C(n, k) generalized to real arguments through log-gamma.

    Accepts scalars or arrays; returns a float for scalar input.
    """
    n_arr = np.asarray(n, dtype=float)
    k_arr = np.asarray(k, dtype=float)
    if np.any(n_arr < 0) or np.any(k_arr < 0) or np.any(k_arr > n_arr):
        raise NumericsDomainError(f"log_binomial requires 0 <= k <= n (n={n}, k={k})")

    out = gammaln(n_arr + 1.0) - gammaln(k_arr + 1.0) - gammaln(n_arr - k_arr + 1.0)
    return float(out) if out.ndim == 0 else out


def reg_inc_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta I_x(a, b)"""
    if not 0.0 <= x <= 1.0:
        raise NumericsDomainError(f"x must lie in [0, 1], got {x}")
    if a <= 0 or b <= 0:
        raise NumericsDomainError(f"shape parameters must be positive, got a={a}, b={b}")
    return float(betainc(a, b, x))


def chi2_sf(x: float, nu: int) -> float:
    """Survival function Pr(chi2(nu) >= x)"""
    if x < 0:
        raise NumericsDomainError(f"chi2_sf requires x >= 0, got {x}")
    if nu < 1:
        raise NumericsDomainError(f"chi2_sf requires nu >= 1, got {nu}")
    return float(chdtrc(nu, x))


def integrate_unit_interval(
    integrand: Callable[[float], float],
    cfg: Optional[QuadratureConfig] = None,
    points: Optional[Sequence[float]] = None,
) -> float:
    """Adaptive Gauss-Kronrod integral of `integrand` over (0, 1).

    `points` are interior break points (e.g. a known peak) handed to QUADPACK.
    """
    cfg = cfg or QuadratureConfig()
    result = quad(
        integrand,
        0.0,
        1.0,
        epsabs=cfg.absolute_tolerance,
        epsrel=cfg.relative_tolerance,
        limit=cfg.max_subdivisions,
        points=points,
        full_output=1,
    )
    value, abserr, info = result[0], result[1], result[2]

    if len(result) > 3:
        if info.get("last", 0) >= cfg.max_subdivisions:
            raise QuadratureError(
                f"no convergence after {cfg.max_subdivisions} subdivisions "
                f"(estimate {value:.6g}, error {abserr:.3g})"
            )
        # any other flag: keep the value only while its error estimate stays near the request
        allowed = FLAGGED_ERROR_SLACK * max(cfg.absolute_tolerance, cfg.relative_tolerance * abs(value))
        if not np.isfinite(value) or not abserr <= allowed:
            raise QuadratureError(f"{result[3]} (estimate {value:.6g}, error {abserr:.3g} > {allowed:.3g})")
        logger.warning(f"Quadrature warning (error estimate {abserr:.3g}): {result[3]}")

    return float(value)


def ks_test(samples: Sequence[float], cdf: Callable) -> KSReport:
    """One-sample two-sided Kolmogorov-Smirnov test with the asymptotic p-value"""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise NumericsDomainError("ks_test needs at least one sample")

    try:
        f = np.asarray(cdf(x), dtype=float)
        if f.shape != x.shape:
            raise ValueError("cdf is not vectorized")
    except (TypeError, ValueError):
        f = np.array([float(cdf(v)) for v in x])

    ranks = np.arange(1, n + 1, dtype=float)
    d_plus = np.max(ranks / n - f)
    d_minus = np.max(f - (ranks - 1.0) / n)
    statistic = float(np.clip(max(d_plus, d_minus), 0.0, 1.0))

    return KSReport(statistic=statistic, p_value=ks_p_value(statistic, n), n=n)


def ks_p_value(statistic: float, n: float) -> float:
    """Asymptotic two-sided KS p-value of `statistic` at (possibly effective) sample size n"""
    if n <= 0:
        raise NumericsDomainError(f"KS sample size must be positive, got {n}")
    return float(np.clip(kolmogorov(np.sqrt(n) * statistic), 0.0, 1.0))


def sample_skewness(values: Sequence[float], adjusted: bool = False) -> float:
    """Fisher-Pearson skewness g1, or the adjusted G1 when `adjusted` is set"""
    arr = np.asarray(values, dtype=float)
    if arr.size < 3:
        raise NumericsDomainError(f"skewness needs at least 3 values, got {arr.size}")
    if np.ptp(arr) == 0:
        raise NumericsDomainError("skewness is undefined for a constant sequence")
    return float(stats.skew(arr, bias=not adjusted))


def scaled_beta_cdf(x, alpha: float, beta: float, upper: float):
    """CDF of a Beta(alpha, beta) stretched onto [0, upper]"""
    return stats.beta.cdf(np.asarray(x, dtype=float) / upper, alpha, beta)


def scaled_beta_pdf(x, alpha: float, beta: float, upper: float):
    return stats.beta.pdf(np.asarray(x, dtype=float) / upper, alpha, beta) / upper


def chi2_cdf(x, nu: int):
    return stats.chi2.cdf(np.asarray(x, dtype=float), nu)


def chi2_pdf(x, nu: int):
    return stats.chi2.pdf(np.asarray(x, dtype=float), nu)
