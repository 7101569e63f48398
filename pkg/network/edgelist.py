import logging
from collections.abc import Iterable
from pathlib import Path
from typing import Optional, TextIO

import numpy as np

from ghype.errors import GraphFormatError
from network.multigraph import MultiGraph, Partition

logger = logging.getLogger(__name__)

ZKC_PATH = Path(__file__).parent / "data" / "zkc.tsv"


def _content_lines(stream: Iterable[str]):
    for line_number, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield line_number, line.split()


def load_edgelist(stream: Iterable[str], directed: bool, selfloops: Optional[bool] = None) -> MultiGraph:
    """Parse `source target [count] [timestamp]` lines into a MultiGraph.

    Repeated pairs accumulate; vertices are indexed in order of first appearance.
    Self-loops are allowed iff the data contains one, unless `selfloops` overrides it.
    """
    labels: dict[str, int] = {}
    counts: dict[tuple[int, int], int] = {}
    has_loop = False

    for line_number, parts in _content_lines(stream):
        if len(parts) < 2 or len(parts) > 4:
            raise GraphFormatError(f"expected 'source target [count]', got {len(parts)} fields", line_number)
        try:
            count = int(parts[2]) if len(parts) >= 3 else 1
        except ValueError:
            raise GraphFormatError(f"count {parts[2]!r} is not an integer", line_number) from None
        if count < 0:
            raise GraphFormatError(f"negative count {count}", line_number)

        i = labels.setdefault(parts[0], len(labels))
        j = labels.setdefault(parts[1], len(labels))
        if not directed and i > j:
            i, j = j, i
        if i == j and count > 0:
            if selfloops is False:
                raise GraphFormatError(f"self-loop on {parts[0]!r} but self-loops are disabled", line_number)
            has_loop = True
        counts[(i, j)] = counts.get((i, j), 0) + count

    n = len(labels)
    adjacency = np.zeros((n, n), dtype=np.int64)
    for (i, j), c in counts.items():
        adjacency[i, j] = c

    graph = MultiGraph(
        adjacency,
        directed=directed,
        selfloops=has_loop if selfloops is None else selfloops,
        labels=tuple(labels),
    )
    logger.info(f"Loaded graph: n={graph.n}, m={graph.m}, directed={directed}, selfloops={graph.selfloops}")
    return graph


def read_edgelist(path: str | Path, directed: bool, selfloops: Optional[bool] = None) -> MultiGraph:
    with open(path, "r", encoding="utf-8") as stream:
        return load_edgelist(stream, directed=directed, selfloops=selfloops)


def dump_edgelist(g: MultiGraph, stream: TextIO) -> None:
    """Write one `source target count` line per populated dyad"""
    rows, cols = np.nonzero(g.adjacency)
    for i, j in zip(rows.tolist(), cols.tolist()):
        stream.write(f"{g.labels[i]}\t{g.labels[j]}\t{int(g.adjacency[i, j])}\n")


def load_partition(stream: Iterable[str]) -> Partition:
    """Parse `vertex group` lines"""
    assignment: dict[str, str] = {}
    for line_number, parts in _content_lines(stream):
        if len(parts) != 2:
            raise GraphFormatError(f"expected 'vertex group', got {len(parts)} fields", line_number)
        vertex, group = parts
        if vertex in assignment and assignment[vertex] != group:
            raise GraphFormatError(f"vertex {vertex!r} assigned to two groups", line_number)
        assignment[vertex] = group
    return Partition(assignment)


def read_partition(path: str | Path) -> Partition:
    with open(path, "r", encoding="utf-8") as stream:
        return load_partition(stream)


def load_zkc() -> MultiGraph:
    """The bundled weighted Zachary karate club (undirected, no self-loops)"""
    return read_edgelist(ZKC_PATH, directed=False, selfloops=False)
