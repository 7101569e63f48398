from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from ghype.errors import GraphFormatError, PartitionError


def dyad_mask(n: int, directed: bool, selfloops: bool) -> np.ndarray:
    """Boolean n x n mask of the cells that carry a dyad.

    Undirected graphs use the upper triangle (diagonal included only with self-loops).
    """
    if directed:
        mask = np.ones((n, n), dtype=bool)
        if not selfloops:
            np.fill_diagonal(mask, False)
        return mask
    return np.triu(np.ones((n, n), dtype=bool), k=0 if selfloops else 1)


def count_cells(n: int, directed: bool, selfloops: bool) -> int:
    if directed:
        return n * n if selfloops else n * (n - 1)
    return n * (n + 1) // 2 if selfloops else n * (n - 1) // 2


@dataclass(frozen=True, eq=False)
class MultiGraph:
    """Immutable multi-edge network: vertex labels plus an integer edge-count matrix.

    Undirected graphs store each unordered pair once, in the upper triangle.
    """

    adjacency: np.ndarray
    directed: bool
    selfloops: bool
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        a = np.array(self.adjacency, dtype=np.int64, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise GraphFormatError(f"adjacency must be square, got shape {a.shape}")
        if np.any(a < 0):
            raise GraphFormatError("edge counts must be nonnegative")
        if not self.directed and np.any(np.tril(a, k=-1)):
            raise GraphFormatError("undirected adjacency must be upper-triangular")
        if not self.selfloops and np.any(np.diag(a)):
            raise GraphFormatError("self-loops present but not allowed")

        labels = tuple(self.labels) if self.labels else tuple(str(i) for i in range(a.shape[0]))
        if len(labels) != a.shape[0]:
            raise GraphFormatError(f"{len(labels)} labels for {a.shape[0]} vertices")
        if len(set(labels)) != len(labels):
            raise GraphFormatError("vertex labels must be unique")

        a.setflags(write=False)
        object.__setattr__(self, "adjacency", a)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def m(self) -> int:
        return int(self.adjacency.sum())

    def dyad_mask(self) -> np.ndarray:
        return dyad_mask(self.n, self.directed, self.selfloops)

    def cell_count(self) -> int:
        return count_cells(self.n, self.directed, self.selfloops)

    def degrees(self) -> tuple[np.ndarray, np.ndarray]:
        """(out-degrees, in-degrees); undirected graphs return the same sequence twice"""
        a = self.adjacency
        if self.directed:
            return a.sum(axis=1), a.sum(axis=0)
        # a self-loop sits in both the row and the column sum, counting twice
        k = a.sum(axis=1) + a.sum(axis=0)
        return k, k

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown vertex {label!r}") from None

    def count(self, source: str, target: str) -> int:
        i, j = self.index_of(source), self.index_of(target)
        if not self.directed and i > j:
            i, j = j, i
        return int(self.adjacency[i, j])

    @classmethod
    def from_dyad_counts(
        cls,
        n: int,
        rows: np.ndarray,
        cols: np.ndarray,
        counts: np.ndarray,
        directed: bool,
        selfloops: bool,
        labels: tuple[str, ...] = (),
    ) -> "MultiGraph":
        a = np.zeros((n, n), dtype=np.int64)
        a[rows, cols] = counts
        return cls(a, directed=directed, selfloops=selfloops, labels=labels)


def degrees(g: MultiGraph) -> tuple[np.ndarray, np.ndarray]:
    return g.degrees()


def cell_count(g: MultiGraph) -> int:
    return g.cell_count()


@dataclass(frozen=True)
class Partition:
    """Assignment of every vertex label to a group label"""

    assignment: Mapping[str, str]

    def __post_init__(self):
        if not self.assignment:
            raise PartitionError("partition must assign at least one vertex")
        object.__setattr__(self, "assignment", dict(self.assignment))

    @property
    def groups(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(self.assignment.values()))

    @property
    def B(self) -> int:
        return len(self.groups)

    def group_indices(self, g: MultiGraph) -> np.ndarray:
        """Dense group index per vertex of `g`, in the graph's vertex order"""
        missing = [v for v in g.labels if v not in self.assignment]
        if missing:
            raise PartitionError(f"partition misses {len(missing)} vertices, e.g. {missing[0]!r}")
        extra = set(self.assignment) - set(g.labels)
        if extra:
            raise PartitionError(f"partition names {len(extra)} unknown vertices, e.g. {sorted(extra)[0]!r}")

        index = {group: r for r, group in enumerate(self.groups)}
        return np.array([index[self.assignment[v]] for v in g.labels], dtype=np.int64)

    def to_dict(self) -> dict[str, str]:
        return dict(self.assignment)
