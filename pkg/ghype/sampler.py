"""Random multigraphs from a fitted gHypEG.

Edges are drawn one at a time from a biased urn: dyad (i, j) is picked with
probability proportional to Omega_ij * (Xi_ij - drawn_ij). A Fenwick tree over
the eligible dyads keeps each draw logarithmic in the number of dyads.
"""
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ghype.errors import CapacityError, GhypError, NumericsDomainError, ReplicateError, SamplingError
from ghype.fitting import configuration_dof, configuration_xi
from ghype.models.configs import SampleBatchConfig
from ghype.models.model_spec import ModelSpec
from network.multigraph import MultiGraph

logger = logging.getLogger(__name__)

MAX_DEGREE_RETRIES = 100


class CumulativeWeights:
    """Fenwick tree of nonnegative weights supporting point updates and prefix search"""

    def __init__(self, weights):
        self._weights = [float(w) for w in weights]
        self.rebuild()

    def rebuild(self) -> None:
        size = len(self._weights)
        tree = [0.0] + list(self._weights)
        for i in range(1, size + 1):
            parent = i + (i & -i)
            if parent <= size:
                tree[parent] += tree[i]
        self._tree = tree
        self._top = 1 << (size.bit_length() - 1) if size else 0

    def __len__(self) -> int:
        return len(self._weights)

    def weight(self, index: int) -> float:
        return self._weights[index]

    def total(self) -> float:
        size = len(self._weights)
        total, i = 0.0, size
        while i > 0:
            total += self._tree[i]
            i -= i & -i
        return total

    def set(self, index: int, value: float) -> None:
        delta = value - self._weights[index]
        self._weights[index] = value
        i = index + 1
        size = len(self._weights)
        while i <= size:
            self._tree[i] += delta
            i += i & -i

    def find(self, target: float) -> int:
        """Smallest index whose inclusive prefix sum exceeds `target`"""
        pos, step = 0, self._top
        size = len(self._weights)
        while step:
            nxt = pos + step
            if nxt <= size and self._tree[nxt] <= target:
                target -= self._tree[nxt]
                pos = nxt
            step >>= 1
        return min(pos, size - 1)


def derive_seed(master_seed: int, index: int) -> int:
    """64-bit seed of replicate `index`, a pure function of (master_seed, index)"""
    words = np.random.SeedSequence(master_seed, spawn_key=(index,)).generate_state(2, np.uint32)
    return (int(words[0]) << 32) | int(words[1])


def _draw(urn: CumulativeWeights, u: float) -> int:
    total = urn.total()
    k = urn.find(u * total) if total > 0 else -1
    if k >= 0 and urn.weight(k) > 0:
        return k

    # accumulated rounding in the tree; recompute the sums and search again
    urn.rebuild()
    total = urn.total()
    if total <= 0:
        raise SamplingError("urn exhausted before all edges were drawn")
    k = urn.find(u * total)
    if urn.weight(k) <= 0:
        k = next(i for i in range(len(urn) - 1, -1, -1) if urn.weight(i) > 0)
    return k


def sample_graph(model: ModelSpec, m: int, seed: int) -> MultiGraph:
    """Draw one multigraph with exactly m edges from `model`"""
    if m < 0:
        raise CapacityError(f"edge count must be nonnegative, got {m}")
    if m > model.xi_total + 1e-9:
        raise CapacityError(f"m={m} exceeds the total capacity {model.xi_total:.6g}")

    rows, cols = np.nonzero(model.eligible())
    remaining = model.xi[rows, cols].tolist()
    omega = model.omega[rows, cols].tolist()
    drawn = [0] * len(remaining)

    rng = np.random.default_rng(seed)
    uniforms = rng.random(m).tolist()
    urn = CumulativeWeights(o * r for o, r in zip(omega, remaining))

    for u in uniforms:
        k = _draw(urn, u)
        drawn[k] += 1
        remaining[k] -= 1.0
        urn.set(k, omega[k] * max(remaining[k], 0.0))

    counts = np.asarray(drawn, dtype=np.int64)
    used = counts > 0
    return MultiGraph.from_dyad_counts(
        model.n,
        rows[used],
        cols[used],
        counts[used],
        directed=model.directed,
        selfloops=model.selfloops,
        labels=model.labels,
    )


def sample_batch(model: ModelSpec, m: int, cfg: SampleBatchConfig) -> list[MultiGraph]:
    """`cfg.count` replicates in replicate order; results do not depend on `cfg.worker_hint`"""

    def replicate(index: int) -> MultiGraph:
        try:
            return sample_graph(model, m, derive_seed(cfg.master_seed, index))
        except GhypError as e:
            raise ReplicateError(index, e) from e

    logger.info(f"Sampling {cfg.count} replicates with m={m} on {cfg.worker_hint} workers")
    if cfg.worker_hint == 1:
        return [replicate(i) for i in range(cfg.count)]
    with ThreadPoolExecutor(max_workers=cfg.worker_hint) as executor:
        return list(executor.map(replicate, range(cfg.count)))


def geometric_configuration_model(n: int, target_m: int, seed: int) -> tuple[ModelSpec, int]:
    """Configuration model on a geometric degree sequence with mean 2 * target_m / n.

    Returns the model and the edge count round(sum(k) / 2). Undirected, no self-loops.
    """
    if n < 2:
        raise NumericsDomainError(f"need at least 2 vertices, got {n}")
    if target_m < 1:
        raise NumericsDomainError(f"target edge count must be positive, got {target_m}")

    rng = np.random.default_rng(seed)
    p = 1.0 / (1.0 + 2.0 * target_m / n)
    for attempt in range(MAX_DEGREE_RETRIES):
        k = rng.geometric(p, size=n) - 1
        total = int(k.sum())
        m = (total + 1) // 2
        xi = configuration_xi(k, k, directed=False, selfloops=False)
        if m == 0 or xi.sum() < m:
            logger.debug(f"Degenerate degree sequence on attempt {attempt}, redrawing")
            continue
        model = ModelSpec(
            kind="configuration",
            xi=xi,
            omega=np.ones_like(xi),
            directed=False,
            selfloops=False,
            labels=tuple(str(i) for i in range(n)),
            free_parameters=configuration_dof(n, directed=False),
        )
        return model, m
    raise SamplingError(f"no usable degree sequence after {MAX_DEGREE_RETRIES} draws")


def generate_geometric_cm_graph(n: int, target_m: int, seed: int) -> MultiGraph:
    model, m = geometric_configuration_model(n, target_m, seed)
    return sample_graph(model, m, derive_seed(seed, 0))
