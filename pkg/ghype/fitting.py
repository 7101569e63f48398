"""Maximum-likelihood fits of the gHypEG hypothesis families.

regular ⊂ configuration ⊂ block ⊂ full; custom models wrap user-supplied matrices.
"""
import logging
from typing import Optional

import numpy as np

from ghype.errors import EmptyGraphError, NestingError, PartitionError
from ghype.models.model_spec import OMEGA_FLOOR, ModelKind, ModelSpec
from network.multigraph import MultiGraph, Partition, dyad_mask

logger = logging.getLogger(__name__)

# Position in the nesting chain; only fittable kinds appear here
NESTING_ORDER: dict[str, int] = {"regular": 0, "configuration": 1, "block": 2, "full": 3}


def _require_edges(g: MultiGraph) -> None:
    if g.m <= 0:
        raise EmptyGraphError("cannot fit a model to a graph without edges")


def configuration_xi(out_degrees, in_degrees, directed: bool, selfloops: bool) -> np.ndarray:
    """Xi_ij = k_i^out * k_j^in on the dyads of the given convention.

    Undirected self-loop cells get k_i^2 / 2.
    """
    out_deg = np.asarray(out_degrees, dtype=float)
    in_deg = np.asarray(in_degrees, dtype=float)
    xi = np.outer(out_deg, in_deg)
    if not directed and selfloops:
        np.fill_diagonal(xi, out_deg**2 / 2.0)
    return np.where(dyad_mask(out_deg.size, directed, selfloops), xi, 0.0)


def configuration_dof(n: int, directed: bool) -> int:
    return 2 * n - 1 if directed else n


def block_dof(B: int, directed: bool) -> int:
    return B * B - 1 if directed else B * (B + 1) // 2 - 1


def propensities_from_fill(counts: np.ndarray, capacity: np.ndarray) -> np.ndarray:
    """Invert the Wallenius mean: omega ∝ -log(1 - counts / capacity).

    Saturated cells are clipped to counts / (capacity + 0.5); empty cells get the
    relative floor. The result is scaled to a maximum of 1.
    """
    counts = np.asarray(counts, dtype=float)
    capacity = np.asarray(capacity, dtype=float)
    fill = np.where(counts >= capacity, counts / (capacity + 0.5), counts / capacity)
    omega = -np.log1p(-fill)

    positive = omega > 0
    if not positive.any():
        return np.ones_like(omega)
    omega = omega / omega[positive].max()
    return np.where(positive, omega, OMEGA_FLOOR)


def _spec(g: MultiGraph, kind: ModelKind, xi, omega, free_parameters: int, partition=None) -> ModelSpec:
    return ModelSpec(
        kind=kind,
        xi=xi,
        omega=omega,
        directed=g.directed,
        selfloops=g.selfloops,
        labels=g.labels,
        free_parameters=free_parameters,
        partition=partition,
    )


def regular_model(n: int, m: int, directed: bool, selfloops: bool, labels: tuple[str, ...] = ()) -> ModelSpec:
    """One-parameter model: Xi = m^2 / cell_count on every dyad"""
    if m <= 0:
        raise EmptyGraphError("the regular model needs m >= 1")
    mask = dyad_mask(n, directed, selfloops)
    xi = np.where(mask, m**2 / int(mask.sum()), 0.0)
    return ModelSpec(
        kind="regular",
        xi=xi,
        omega=np.ones_like(xi),
        directed=directed,
        selfloops=selfloops,
        labels=labels or tuple(str(i) for i in range(n)),
        free_parameters=1,
    )


def fit_regular(g: MultiGraph) -> ModelSpec:
    _require_edges(g)
    return regular_model(g.n, g.m, g.directed, g.selfloops, g.labels)


def fit_configuration(g: MultiGraph) -> ModelSpec:
    """Soft configuration model preserving the degree sequences in expectation"""
    _require_edges(g)
    k_out, k_in = g.degrees()
    xi = configuration_xi(k_out, k_in, g.directed, g.selfloops)
    return _spec(g, "configuration", xi, np.ones_like(xi), free_parameters=configuration_dof(g.n, g.directed))


def _block_ids(groups: np.ndarray, B: int, directed: bool) -> np.ndarray:
    gi, gj = np.meshgrid(groups, groups, indexing="ij")
    if directed:
        return gi * B + gj
    return np.minimum(gi, gj) * B + np.maximum(gi, gj)


def fit_block(g: MultiGraph, partition: Partition) -> ModelSpec:
    """Configuration Xi with one propensity per (unordered, if undirected) pair of groups"""
    if partition is None:
        raise PartitionError("the block model needs a partition")
    config = fit_configuration(g)
    groups = partition.group_indices(g)
    B = partition.B

    eligible = config.eligible()
    ids = _block_ids(groups, B, g.directed)
    counts = np.bincount(ids[eligible], weights=g.adjacency[eligible], minlength=B * B)
    capacity = np.bincount(ids[eligible], weights=config.xi[eligible], minlength=B * B)

    omega_blocks = np.ones(B * B)
    present = capacity > 0
    omega_blocks[present] = propensities_from_fill(counts[present], capacity[present])
    omega = np.where(eligible, omega_blocks[ids], 1.0)

    logger.info(f"Fitted block model with B={B} on n={g.n}, m={g.m}")
    return _spec(
        g,
        "block",
        config.xi,
        omega,
        free_parameters=config.free_parameters + block_dof(B, g.directed),
        partition=partition,
    )


def fit_full(g: MultiGraph) -> ModelSpec:
    """Saturated model whose expected adjacency reproduces the observation"""
    config = fit_configuration(g)
    eligible = config.eligible()
    omega = np.ones_like(config.xi)
    omega[eligible] = propensities_from_fill(g.adjacency[eligible], config.xi[eligible])
    return _spec(g, "full", config.xi, omega, free_parameters=g.cell_count() - 1)


def fit_custom(
    g: MultiGraph,
    free_parameters: int,
    xi: Optional[np.ndarray] = None,
    omega: Optional[np.ndarray] = None,
) -> ModelSpec:
    """User-supplied Xi and/or Omega; a missing Xi defaults to the configuration Xi"""
    if xi is None:
        xi = fit_configuration(g).xi
    xi = np.where(g.dyad_mask(), np.asarray(xi, dtype=float), 0.0)
    if omega is None:
        omega = np.ones_like(xi)
    return _spec(g, "custom", xi, omega, free_parameters=free_parameters)


def fit_model(
    kind: ModelKind,
    g: MultiGraph,
    partition: Optional[Partition] = None,
    xi: Optional[np.ndarray] = None,
    omega: Optional[np.ndarray] = None,
    free_parameters: Optional[int] = None,
) -> ModelSpec:
    match kind:
        case "regular":
            return fit_regular(g)
        case "configuration":
            return fit_configuration(g)
        case "block":
            return fit_block(g, partition)
        case "full":
            return fit_full(g)
        case "custom":
            if free_parameters is None:
                raise NestingError("a custom model must declare its free parameters")
            return fit_custom(g, free_parameters, xi=xi, omega=omega)
    raise NestingError(f"unknown model kind {kind!r}")


def degrees_of_freedom(model: ModelSpec) -> int:
    return model.free_parameters


def check_nested(null_kind: str, alt_kind: str) -> None:
    if null_kind not in NESTING_ORDER or alt_kind not in NESTING_ORDER:
        raise NestingError(f"cannot test {null_kind!r} against {alt_kind!r}: only fitted kinds nest")
    if NESTING_ORDER[null_kind] > NESTING_ORDER[alt_kind]:
        raise NestingError(f"{null_kind!r} is not nested in {alt_kind!r}")
