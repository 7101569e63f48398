"""How well a Beta fitted on s null samples describes a large reference set of null samples"""
import logging
from collections.abc import Sequence
from typing import Optional

import numpy as np

from ghype.errors import DegenerateNullError, NumericsDomainError
from ghype.fitting import fit_model
from ghype.lrtest.null_distribution import MAX_DROP_FRACTION, replicate_deviances
from ghype.lrtest.statistics import clamp_M, estimate_M, fit_beta_null
from ghype.models.configs import QuadratureConfig, SampleBatchConfig
from ghype.models.model_spec import ModelKind, ModelSpec
from ghype.models.reports import SweepRow
from ghype.numerics import ks_p_value, ks_test, scaled_beta_cdf
from ghype.sampler import derive_seed, sample_batch
from network.multigraph import MultiGraph, Partition

logger = logging.getLogger(__name__)

DEFAULT_REFERENCE_SIZE = 20_000


def simulate_deviances(
    null_model: ModelSpec,
    m: int,
    null_kind: ModelKind,
    alt_kind: ModelKind,
    count: int,
    seed: int,
    partition: Optional[Partition] = None,
    cfg: Optional[QuadratureConfig] = None,
    workers: int = 1,
) -> np.ndarray:
    """D values of `count` graphs drawn from `null_model`, refitting both kinds on each"""
    batch = SampleBatchConfig(count=count, master_seed=seed, worker_hint=workers)
    samples, dropped = replicate_deviances(
        sample_batch(null_model, m, batch), null_kind, alt_kind, partition, cfg, workers
    )
    if dropped > MAX_DROP_FRACTION * count:
        raise DegenerateNullError(f"{dropped} of {count} replicates could not be refitted")
    return np.asarray(samples, dtype=float)


def effective_size(s: int, reference_size: int) -> float:
    """Two-sample KS size of a curve estimated from s samples against an ECDF of reference_size"""
    return s * reference_size / (s + reference_size)


def _subsets(samples: np.ndarray, s: int) -> np.ndarray:
    """Split a batch into complete subsets of s samples; a remainder left by dropped replicates is discarded"""
    count = samples.size // s
    if count == 0:
        raise DegenerateNullError(f"fewer than {s} usable samples for a fit")
    return samples[: count * s].reshape(count, s)


def ks_sweep(
    g: MultiGraph,
    null_kind: ModelKind,
    alt_kind: ModelKind,
    sizes: Sequence[int],
    reps: int,
    seed: int,
    reference_size: int = DEFAULT_REFERENCE_SIZE,
    partition: Optional[Partition] = None,
    cfg: Optional[QuadratureConfig] = None,
    workers: int = 1,
) -> list[SweepRow]:
    """For each s: fit a Beta on s fresh null samples `reps` times and KS-test the reference set against it.

    Every repetition gets its own batch of fit samples, disjoint from the other
    repetitions and from the reference set. Each row carries the p-value of the
    median KS statistic twice: at the resolution of the reference set, and at the
    effective two-sample size of an s-sample fit against the reference.
    """
    if not sizes:
        raise NumericsDomainError("sweep needs at least one sample size")
    if min(sizes) < 2 or reps < 1:
        raise NumericsDomainError(f"invalid sweep: sizes={list(sizes)}, reps={reps}")

    null_model = fit_model(null_kind, g, partition)
    logger.info(f"KS sweep: reference {reference_size}, sizes {list(sizes)}, reps {reps}")

    reference = simulate_deviances(
        null_model, g.m, null_kind, alt_kind, reference_size, derive_seed(seed, 0), partition, cfg, workers
    )
    fit_batches = [
        _subsets(
            simulate_deviances(
                null_model, g.m, null_kind, alt_kind, reps * s, derive_seed(seed, k + 1), partition, cfg, workers
            ),
            s,
        )
        for k, s in enumerate(sizes)
    ]
    M, _ = clamp_M(
        estimate_M(null_model, alt_kind, g, cfg),
        np.concatenate([reference] + [batch.ravel() for batch in fit_batches]).tolist(),
    )

    rows = []
    for s, batch in zip(sizes, fit_batches):
        statistics, p_values = [], []
        for subset in batch:
            alpha, beta = fit_beta_null(subset, M)
            report = ks_test(reference, lambda x: scaled_beta_cdf(x, alpha, beta, M))
            statistics.append(report.statistic)
            p_values.append(report.p_value)

        median_statistic = float(np.median(statistics))
        q25, q75 = np.quantile(p_values, [0.25, 0.75])
        rows.append(
            SweepRow(
                s=s,
                reps=len(batch),
                median_statistic=median_statistic,
                median_p=ks_p_value(median_statistic, reference.size),
                median_p_effective=ks_p_value(median_statistic, effective_size(s, reference.size)),
                q25_p=q25,
                q75_p=q75,
                iqr_p=q75 - q25,
            )
        )
        logger.info(f"s={s}: median KS statistic={median_statistic:.4g}, p={rows[-1].median_p:.4g}")
    return rows
