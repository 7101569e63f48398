"""The four reproducible case studies: two synthetic calibrations and two tests on the karate club"""
import logging
from typing import Literal, Optional

import numpy as np

from ghype.config import DofRule
from ghype.errors import UsageError
from ghype.fitting import fit_configuration, fit_regular, regular_model
from ghype.lrtest.null_distribution import null_distribution
from ghype.lrtest.pipeline import gof_test, lr_test
from ghype.lrtest.statistics import lr_statistic, p_value_beta, validate_null
from ghype.models.configs import QuadratureConfig, SampleBatchConfig
from ghype.models.model_spec import ModelSpec
from ghype.models.reports import CaseStudySummary, TestReport
from ghype.numerics import sample_skewness
from ghype.sampler import derive_seed, geometric_configuration_model, sample_batch
from network.edgelist import load_zkc
from network.multigraph import MultiGraph

logger = logging.getLogger(__name__)

CaseStudyName = Literal["regular-synthetic", "config-synthetic", "zkc-selection", "zkc-gof"]

SYNTHETIC_N = 100
SYNTHETIC_M = 400
REGULAR_SYNTHETIC_NOTE = (
    "the published setup pairs an undirected graph (n=100) with m=400 directed edges; "
    "simulated as directed with self-loops so that Xi = (m/n)^2 = 16"
)

PUBLISHED = {
    "regular-synthetic": {"p_beta_median_lambda": 0.44, "reps": 1000},
    "config-synthetic": {"p_beta_max_lambda": "< 1e-20", "reps": 1000},
    "zkc-selection": {
        "D": 300.338,
        "p_beta": "< 1e-20",
        "ks_beta_p": 0.4211,
        "ks_chi2_p": 1.45e-05,
        "degree_skewness": 1.456,
    },
    "zkc-gof": {
        "p_beta": 1.69e-30,
        "p_chi2": 0.005,
        "ks_beta_p": 0.169,
        "ks_chi2_p": "< 2.2e-16",
    },
}


def _deviances(graphs: list[MultiGraph], cfg: Optional[QuadratureConfig]) -> np.ndarray:
    return np.array([lr_statistic(fit_regular(h), fit_configuration(h), h, cfg)[1] for h in graphs])


def regular_synthetic_model() -> ModelSpec:
    return regular_model(SYNTHETIC_N, SYNTHETIC_M, directed=True, selfloops=True)


def regular_synthetic(reps: int, s: int, seed: int, cfg=None, workers: int = 1) -> CaseStudySummary:
    """Graphs from a regular model: the test should not reject.

    The fitted regular null only depends on n and m, so one null distribution
    serves every repetition; the reported p-value is that of the median D.
    """
    model = regular_synthetic_model()
    batch = SampleBatchConfig(count=reps, master_seed=derive_seed(seed, 0), worker_hint=workers)
    graphs = sample_batch(model, SYNTHETIC_M, batch)
    deviances = _deviances(graphs, cfg)
    nd = null_distribution(
        graphs[0], "regular", "configuration", s=s, seed=derive_seed(seed, 1), cfg=cfg, workers=workers
    )
    p_values = np.array([p_value_beta(float(d), nd) for d in deviances])
    median_D = float(np.median(deviances))

    return CaseStudySummary(
        case_study="regular-synthetic",
        seed=seed,
        reps=reps,
        s=s,
        observed={
            "p_beta_median_lambda": p_value_beta(median_D, nd),
            "median_D": median_D,
            "fraction_rejected_at_0.05": float(np.mean(p_values < 0.05)),
            "alpha": nd.alpha,
            "beta": nd.beta,
            "M": nd.M,
            "xi": float(model.xi[0, 0]),
            "convention": "directed, self-loops",
            "note": REGULAR_SYNTHETIC_NOTE,
        },
        published=PUBLISHED["regular-synthetic"],
    )


def config_synthetic(reps: int, s: int, seed: int, cfg=None, workers: int = 1) -> CaseStudySummary:
    """Graphs from a configuration model with geometric degrees: the test should reject.

    The generating model is drawn once; only edges are resampled per repetition.
    The least extreme graph (largest lambda) gets its own null distribution.
    """
    model, m = geometric_configuration_model(SYNTHETIC_N, SYNTHETIC_M, seed)
    batch = SampleBatchConfig(count=reps, master_seed=derive_seed(seed, 0), worker_hint=workers)
    graphs = sample_batch(model, m, batch)
    deviances = _deviances(graphs, cfg)
    index = int(np.argmin(deviances))
    D = float(deviances[index])
    nd = null_distribution(
        graphs[index], "regular", "configuration", s=s, seed=derive_seed(seed, 1), cfg=cfg, workers=workers
    )
    return CaseStudySummary(
        case_study="config-synthetic",
        seed=seed,
        reps=reps,
        s=s,
        observed={
            "m": m,
            "p_beta_max_lambda": p_value_beta(D, nd),
            "min_D": D,
            "median_D": float(np.median(deviances)),
        },
        published=PUBLISHED["config-synthetic"],
    )


def _zkc_observed(report: TestReport) -> dict:
    beta_fit, chi2_fit = validate_null(report.null_distribution)
    return {
        "D": report.D,
        "p_beta": report.p_beta,
        "p_chi2": report.p_chi2,
        "nu": report.nu,
        "alpha": report.alpha,
        "beta": report.beta,
        "M": report.M,
        "ks_beta_p": beta_fit.p_value,
        "ks_chi2_p": chi2_fit.p_value,
    }


def zkc_selection(s: int, seed: int, cfg=None, workers: int = 1) -> CaseStudySummary:
    g = load_zkc()
    report = lr_test(g, "regular", "configuration", s=s, seed=seed, cfg=cfg, workers=workers)
    observed = _zkc_observed(report)
    observed["degree_skewness"] = sample_skewness(g.degrees()[0])
    return CaseStudySummary(
        case_study="zkc-selection", seed=seed, reps=1, s=s, observed=observed, published=PUBLISHED["zkc-selection"]
    )


def zkc_gof(s: int, seed: int, cfg=None, workers: int = 1, dof_rule: DofRule = "saturated") -> CaseStudySummary:
    """Goodness of fit of the configuration model; chi2 uses the saturated dof by default"""
    report = gof_test(load_zkc(), "configuration", s=s, seed=seed, cfg=cfg, workers=workers, dof_rule=dof_rule)
    observed = _zkc_observed(report)
    observed["dof_rule"] = dof_rule
    return CaseStudySummary(
        case_study="zkc-gof", seed=seed, reps=1, s=s, observed=observed, published=PUBLISHED["zkc-gof"]
    )


def run_case_study(
    name: str,
    seed: int,
    reps: int = 200,
    s: int = 1000,
    cfg: Optional[QuadratureConfig] = None,
    workers: int = 1,
) -> CaseStudySummary:
    logger.info(f"Running case study {name} (seed={seed}, reps={reps}, s={s})")
    match name:
        case "regular-synthetic":
            return regular_synthetic(reps, s, seed, cfg, workers)
        case "config-synthetic":
            return config_synthetic(reps, s, seed, cfg, workers)
        case "zkc-selection":
            return zkc_selection(s, seed, cfg, workers)
        case "zkc-gof":
            return zkc_gof(s, seed, cfg, workers)
    raise UsageError(f"unknown case study {name!r}")
