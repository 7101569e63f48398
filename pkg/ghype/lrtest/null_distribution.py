import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from ghype.config import DofRule
from ghype.errors import DegenerateNullError, GhypError, NumericsDomainError
from ghype.fitting import fit_model
from ghype.lrtest.statistics import clamp_M, estimate_M, fit_beta_null, lr_statistic, nu_for
from ghype.models.configs import QuadratureConfig, SampleBatchConfig
from ghype.models.model_spec import ModelKind, ModelSpec
from ghype.models.reports import NullDistribution
from ghype.sampler import sample_batch
from network.multigraph import MultiGraph, Partition

logger = logging.getLogger(__name__)

MIN_SAMPLES = 30
MAX_DROP_FRACTION = 0.01


def replicate_deviances(
    replicates: list[MultiGraph],
    null_kind: ModelKind,
    alt_kind: ModelKind,
    partition: Optional[Partition] = None,
    cfg: Optional[QuadratureConfig] = None,
    workers: int = 1,
) -> tuple[list[float], int]:
    """Refit both kinds on every replicate and return (D values in replicate order, dropped count)"""

    def deviance(indexed: tuple[int, MultiGraph]) -> Optional[float]:
        index, h = indexed
        try:
            null_h = fit_model(null_kind, h, partition)
            alt_h = fit_model(alt_kind, h, partition)
            return lr_statistic(null_h, alt_h, h, cfg)[1]
        except GhypError as e:
            logger.warning(f"Dropping replicate {index}: {e}")
            return None

    if workers == 1:
        results = [deviance(item) for item in enumerate(replicates)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(deviance, enumerate(replicates)))

    kept = [d for d in results if d is not None]
    return kept, len(results) - len(kept)


def null_distribution(
    g: MultiGraph,
    null_kind: ModelKind,
    alt_kind: ModelKind,
    s: int,
    seed: int,
    partition: Optional[Partition] = None,
    cfg: Optional[QuadratureConfig] = None,
    workers: int = 1,
    null_model: Optional[ModelSpec] = None,
    nu: Optional[int] = None,
    dof_rule: DofRule = "difference",
) -> NullDistribution:
    """Monte Carlo distribution of D under the null fitted to `g`, with its Beta fit.

    `null_model` and `nu` may be passed when the caller has already fitted them on `g`.
    """
    if s < MIN_SAMPLES:
        raise NumericsDomainError(f"null distribution needs s >= {MIN_SAMPLES}, got {s}")

    if null_model is None:
        null_model = fit_model(null_kind, g, partition)
    if nu is None:
        nu = nu_for(null_model, fit_model(alt_kind, g, partition), dof_rule)

    batch = SampleBatchConfig(count=s, master_seed=seed, worker_hint=workers)
    replicates = sample_batch(null_model, g.m, batch)
    samples, dropped = replicate_deviances(replicates, null_kind, alt_kind, partition, cfg, workers)
    if dropped > MAX_DROP_FRACTION * s:
        raise DegenerateNullError(f"{dropped} of {s} replicates could not be refitted")
    if dropped:
        logger.warning(f"Dropped {dropped} of {s} replicates")

    M, clamped = clamp_M(estimate_M(null_model, alt_kind, g, cfg), samples)
    alpha, beta = fit_beta_null(samples, M)
    logger.info(f"Null distribution {null_kind} vs {alt_kind}: M={M:.6g}, alpha={alpha:.6g}, beta={beta:.6g}")

    return NullDistribution(
        samples=samples,
        M=M,
        alpha=alpha,
        beta=beta,
        nu=nu,
        s=s,
        seed=seed,
        dropped_replicates=dropped,
        m_clamped=clamped,
    )
