"""Log-likelihood of an observed multigraph under a gHypEG and the model's expected counts.

With uniform propensities the model is a multivariate hypergeometric and the
likelihood is a ratio of binomials. Otherwise the multivariate Wallenius
density needs a one-dimensional integral, evaluated here after substituting
z = exp(-w S / omega_ref), which moves the integrand's sharp peak to the interior.
"""
import logging
import math
from typing import Literal, Optional

import numpy as np
from scipy.optimize import brentq

from ghype.errors import BracketingError, CapacityError, GraphFormatError
from ghype.models.configs import QuadratureConfig
from ghype.models.model_spec import ModelSpec
from ghype.numerics import integrate_unit_interval, log_binomial
from network.multigraph import MultiGraph

logger = logging.getLogger(__name__)

LikelihoodMethod = Literal["auto", "central", "wallenius"]

# Absolute slack when comparing integer counts against real-valued capacities
CAPACITY_TOLERANCE = 1e-9
MAX_BRACKET_STEPS = 200


def _observed(model: ModelSpec, g: MultiGraph) -> np.ndarray:
    if g.n != model.n or g.directed != model.directed or g.selfloops != model.selfloops:
        raise GraphFormatError(
            f"graph (n={g.n}, directed={g.directed}, selfloops={g.selfloops}) does not match "
            f"model (n={model.n}, directed={model.directed}, selfloops={model.selfloops})"
        )
    a = g.adjacency.astype(float)
    over = a > model.xi + CAPACITY_TOLERANCE
    if over.any():
        i, j = np.argwhere(over)[0]
        raise CapacityError(
            f"{int(over.sum())} dyads exceed their capacity, e.g. ({g.labels[i]}, {g.labels[j]}): "
            f"{int(a[i, j])} > {model.xi[i, j]:.6g}"
        )
    return np.minimum(a, model.xi)


def log_wallenius_integral(
    omega: np.ndarray,
    counts: np.ndarray,
    remaining: float,
    cfg: Optional[QuadratureConfig] = None,
) -> float:
    """log of the integral over (0, 1) of prod_i (1 - z^(omega_i / remaining))^counts_i.

    `omega` and `counts` cover the dyads with a positive count; `remaining` is
    S = sum over all dyads of omega * (Xi - A).
    """
    if remaining <= 0:
        return 0.0
    if counts.size == 0:
        return 0.0

    omega_ref = float(omega.max())
    w_omega = omega / omega_ref
    s = remaining / omega_ref
    m = float(counts.sum())

    def slope(w: float) -> float:
        return float(np.sum(counts * w_omega / np.expm1(w * w_omega))) - s

    def phi(w: float) -> float:
        return -w * s + float(np.sum(counts * np.log(-np.expm1(-w * w_omega))))

    hi = 2.0 * m / s
    lo = hi / 2.0
    for _ in range(MAX_BRACKET_STEPS):
        if slope(lo) > 0:
            break
        lo /= 2.0
    else:
        raise BracketingError(f"could not bracket the integrand peak below w={hi:.6g}")
    w_peak = brentq(slope, lo, hi, xtol=1e-300, rtol=1e-14)
    phi_peak = phi(w_peak)

    def integrand(u: float) -> float:
        if u <= 0.0 or u >= 1.0:
            return 0.0
        w = w_peak * u / (1.0 - u)
        return math.exp(phi(w) - phi_peak) / (1.0 - u) ** 2

    scaled = integrate_unit_interval(integrand, cfg, points=[0.5])
    return math.log(s) + math.log(w_peak) + phi_peak + math.log(scaled)


def log_likelihood(
    model: ModelSpec,
    g: MultiGraph,
    cfg: Optional[QuadratureConfig] = None,
    method: LikelihoodMethod = "auto",
) -> float:
    """log Pr(g | model).

    `method="auto"` takes the closed hypergeometric form when Omega is uniform.
    """
    a = _observed(model, g)
    mask = model.dyad_mask()
    xi = model.xi[mask]
    counts = a[mask]
    log_comb = float(np.sum(log_binomial(xi, counts)))

    if method == "auto":
        method = "central" if model.has_uniform_omega() else "wallenius"

    if method == "central":
        return log_comb - log_binomial(model.xi_total, float(counts.sum()))

    omega = model.omega[mask]
    active = counts > 0
    remaining = float(np.sum(omega * (xi - counts)))
    return log_comb + log_wallenius_integral(omega[active], counts[active], remaining, cfg)


def expected_counts(model: ModelSpec, m: int, cfg: Optional[QuadratureConfig] = None) -> np.ndarray:
    """Expected adjacency of the model with m edges.

    Solves sum Xi (1 - exp(-c Omega)) = m for c and returns Xi (1 - exp(-c Omega)).
    """
    eligible = model.eligible()
    expected = np.zeros_like(model.xi)
    total = model.xi_total
    if m < 0:
        raise CapacityError(f"edge count must be nonnegative, got {m}")
    if m == 0:
        return expected
    if m > total * (1.0 + 1e-12) + CAPACITY_TOLERANCE:
        raise CapacityError(f"m={m} exceeds the total capacity {total:.6g}")
    if m >= total:
        return np.array(model.xi, dtype=float)

    xi = model.xi[eligible]
    omega = model.omega[eligible]

    def excess(c: float) -> float:
        return float(np.sum(xi * -np.expm1(-c * omega))) - m

    hi = 1.0
    for _ in range(MAX_BRACKET_STEPS):
        if excess(hi) > 0:
            break
        hi *= 2.0
    else:
        raise BracketingError(f"expected-count root not bracketed for m={m}")
    c = brentq(excess, 0.0, hi, rtol=1e-14)
    expected[eligible] = xi * -np.expm1(-c * omega)
    logger.debug(f"Expected counts solved with c={c:.6g}")
    return expected
