import io

import numpy as np
import pytest

from ghype.errors import GraphFormatError, PartitionError
from ghype.numerics import sample_skewness
from network.edgelist import dump_edgelist, load_edgelist, load_partition
from network.multigraph import MultiGraph, Partition, cell_count, count_cells, degrees

pytestmark = pytest.mark.unit


class TestMultiGraph:
    def test_defaults_and_counts(self):
        g = MultiGraph(np.array([[0, 2], [1, 0]]), directed=True, selfloops=False)
        assert g.labels == ("0", "1")
        assert g.n == 2
        assert g.m == 3
        assert g.count("1", "0") == 1

    def test_adjacency_is_read_only(self):
        g = MultiGraph(np.array([[0, 2], [1, 0]]), directed=True, selfloops=False)
        with pytest.raises(ValueError):
            g.adjacency[0, 1] = 5

    def test_rejects_lower_triangle_for_undirected(self):
        with pytest.raises(GraphFormatError):
            MultiGraph(np.array([[0, 0], [1, 0]]), directed=False, selfloops=False)

    def test_rejects_forbidden_selfloop(self):
        with pytest.raises(GraphFormatError):
            MultiGraph(np.array([[1, 0], [0, 0]]), directed=True, selfloops=False)

    @pytest.mark.parametrize(
        "directed, selfloops, expected",
        [(True, True, 16), (True, False, 12), (False, True, 10), (False, False, 6)],
    )
    def test_cell_count(self, directed, selfloops, expected):
        assert count_cells(4, directed, selfloops) == expected
        g = MultiGraph(np.zeros((4, 4), dtype=int), directed=directed, selfloops=selfloops)
        assert cell_count(g) == expected
        assert int(g.dyad_mask().sum()) == expected

    def test_undirected_degrees_count_selfloops_twice(self):
        g = MultiGraph(np.array([[1, 2], [0, 0]]), directed=False, selfloops=True)
        k_out, k_in = degrees(g)
        np.testing.assert_array_equal(k_out, [4, 2])
        np.testing.assert_array_equal(k_in, k_out)

    def test_directed_degrees(self, small_directed):
        k_out, k_in = small_directed.degrees()
        np.testing.assert_array_equal(k_out, [3, 4, 3])
        np.testing.assert_array_equal(k_in, [3, 3, 4])


class TestEdgeList:
    def test_accumulates_repeated_pairs(self):
        g = load_edgelist(io.StringIO("a b 2\nb a\n# comment\n\na c 3 1700000000\n"), directed=False)
        assert g.labels == ("a", "b", "c")
        assert g.count("a", "b") == 3
        assert g.count("c", "a") == 3
        assert g.m == 6
        assert not g.selfloops

    def test_directed_keeps_orientation(self):
        g = load_edgelist(io.StringIO("a b 2\nb a 1\n"), directed=True)
        assert g.count("a", "b") == 2
        assert g.count("b", "a") == 1

    def test_selfloop_detection(self):
        g = load_edgelist(io.StringIO("a a 1\na b 1\n"), directed=False)
        assert g.selfloops
        with pytest.raises(GraphFormatError):
            load_edgelist(io.StringIO("a a 1\n"), directed=False, selfloops=False)

    @pytest.mark.parametrize(
        "text, line",
        [("a b 1\nlonely\n", 2), ("a b x\n", 1), ("a b -1\n", 1), ("\na b 1 2 3\n", 2)],
    )
    def test_format_errors_carry_line_numbers(self, text, line):
        with pytest.raises(GraphFormatError) as excinfo:
            load_edgelist(io.StringIO(text), directed=True)
        assert excinfo.value.line_number == line
        assert str(excinfo.value).startswith(f"line {line}:")

    def test_dump_and_reload(self, two_block_graph):
        buffer = io.StringIO()
        dump_edgelist(two_block_graph, buffer)
        buffer.seek(0)
        reloaded = load_edgelist(buffer, directed=False)
        assert reloaded.labels == two_block_graph.labels
        np.testing.assert_array_equal(reloaded.adjacency, two_block_graph.adjacency)


class TestPartition:
    def test_group_indices(self, two_block_graph, two_block_partition):
        assert two_block_partition.B == 2
        np.testing.assert_array_equal(two_block_partition.group_indices(two_block_graph), [0, 0, 0, 1, 1, 1])

    def test_missing_vertex(self, two_block_graph):
        with pytest.raises(PartitionError):
            Partition({"a": "x", "b": "x"}).group_indices(two_block_graph)

    def test_unknown_vertex(self, two_block_graph, two_block_partition):
        assignment = {**two_block_partition.to_dict(), "zz": "left"}
        with pytest.raises(PartitionError):
            Partition(assignment).group_indices(two_block_graph)

    def test_conflicting_assignment(self):
        with pytest.raises(GraphFormatError):
            load_partition(io.StringIO("a x\na y\n"))


class TestKarateClub:
    def test_size(self, zkc):
        assert zkc.n == 34
        assert zkc.m == 231
        assert not zkc.directed
        assert not zkc.selfloops
        assert zkc.cell_count() == 561

    def test_degree_skewness(self, zkc):
        assert sample_skewness(zkc.degrees()[0]) == pytest.approx(1.456, abs=0.01)
