"""Likelihood-ratio statistic and the Beta / chi-square reference distributions for it"""
import logging
import math
from collections.abc import Sequence
from typing import Optional

import numpy as np

from ghype.config import DofRule
from ghype.errors import DegenerateNullError, InfeasibleMomentsError, NumericsDomainError
from ghype.likelihood import expected_counts, log_likelihood
from ghype.models.configs import QuadratureConfig
from ghype.models.model_spec import ModelSpec
from ghype.models.reports import KSReport, NullDistribution
from ghype.numerics import chi2_cdf, chi2_sf, ks_test, reg_inc_beta, scaled_beta_cdf
from network.multigraph import MultiGraph

logger = logging.getLogger(__name__)

# Headroom applied when an observed sample exceeds the analytic bound M
M_CLAMP_FACTOR = 1.05
MIN_VALIDATION_SAMPLES = 30


def lr_statistic(
    model0: ModelSpec,
    model_a: ModelSpec,
    g: MultiGraph,
    cfg: Optional[QuadratureConfig] = None,
) -> tuple[float, float]:
    """(lambda, D) with lambda = L0 / sup(L0, La) and D = -2 log lambda"""
    ll_null = log_likelihood(model0, g, cfg)
    ll_alt = log_likelihood(model_a, g, cfg)
    log_lambda = ll_null - max(ll_null, ll_alt)
    return math.exp(log_lambda), -2.0 * log_lambda + 0.0


def estimate_M(null_model: ModelSpec, alt_kind: str, g: MultiGraph, cfg: Optional[QuadratureConfig] = None) -> float:
    """Upper bound of D from the multinomial approximation: 2 m log(1 / p_min).

    The bound holds for every alternative up to the full model, so `alt_kind`
    does not tighten it.
    """
    m = g.m
    expected = expected_counts(null_model, m, cfg)
    probabilities = expected[null_model.eligible()] / m
    p_min = float(probabilities.min()) if probabilities.size else 0.0
    if p_min <= 0:
        raise DegenerateNullError(f"null model assigns zero probability to a dyad (alt={alt_kind})")

    M = 2.0 * m * math.log(1.0 / p_min)
    if M <= 0:
        raise DegenerateNullError(f"upper bound M is {M:.3g}; the null model has a single dyad")
    return M


def clamp_M(M: float, samples: Sequence[float]) -> tuple[float, bool]:
    """Raise M above the largest sample when the analytic bound is violated"""
    largest = max(samples, default=0.0)
    if largest <= M:
        return M, False
    clamped = M_CLAMP_FACTOR * largest
    logger.warning(f"Null sample {largest:.6g} exceeds bound M={M:.6g}; using M={clamped:.6g}")
    return clamped, True


def fit_beta_null(samples: Sequence[float], M: float) -> tuple[float, float]:
    """Moment-matched (alpha, beta) of a Beta scaled onto [0, M]"""
    values = np.asarray(samples, dtype=float)
    if values.size < 2:
        raise InfeasibleMomentsError(f"need at least two samples, got {values.size}")
    return beta_from_moments(float(values.mean()), float(values.var(ddof=1)), M)


def beta_from_moments(mu: float, var: float, M: float) -> tuple[float, float]:
    if var <= 0:
        raise DegenerateNullError("null samples have zero variance")
    if not 0 < mu < M:
        raise InfeasibleMomentsError(f"sample mean {mu:.6g} outside (0, M={M:.6g})")
    if var >= mu * (M - mu):
        raise InfeasibleMomentsError(
            f"sample variance {var:.6g} >= mu (M - mu) = {mu * (M - mu):.6g}; M is too small"
        )

    alpha = mu * (mu * (M - mu) - var) / (M * var)
    beta = (M - mu) * alpha / mu
    return alpha, beta


def p_value_beta(D: float, nd: NullDistribution) -> float:
    """Pr(D' >= D) under the fitted scaled Beta"""
    if D < 0:
        raise NumericsDomainError(f"D must be nonnegative, got {D}")
    if D >= nd.M:
        return 0.0
    # 1 - I_x(a, b) = I_{1-x}(b, a)
    return reg_inc_beta(1.0 - D / nd.M, nd.beta, nd.alpha)


def p_value_chi2(D: float, nu: int) -> float:
    return chi2_sf(D, nu)


def nu_for(null_model: ModelSpec, alt_model: ModelSpec, dof_rule: DofRule = "difference") -> int:
    """Degrees of freedom of the chi-square comparator"""
    if dof_rule == "saturated" and alt_model.kind == "full":
        nu = int(alt_model.dyad_mask().sum()) - 1
    else:
        nu = alt_model.free_parameters - null_model.free_parameters
    if nu < 1:
        logger.warning(f"Comparator dof {nu} for {null_model.kind} vs {alt_model.kind}; using 1")
        nu = 1
    return nu


def validate_null(nd: NullDistribution) -> tuple[KSReport, KSReport]:
    """KS of the null samples against the fitted Beta and against chi2(nu)"""
    if len(nd.samples) < MIN_VALIDATION_SAMPLES:
        raise NumericsDomainError(f"need at least {MIN_VALIDATION_SAMPLES} samples, got {len(nd.samples)}")
    beta_fit = ks_test(nd.samples, lambda x: scaled_beta_cdf(x, nd.alpha, nd.beta, nd.M))
    chi2_fit = ks_test(nd.samples, lambda x: chi2_cdf(x, nd.nu))
    return beta_fit, chi2_fit
