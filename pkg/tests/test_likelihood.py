import itertools
import math

import numpy as np
import pytest

from ghype.errors import CapacityError, GraphFormatError
from ghype.fitting import fit_configuration, fit_full, fit_regular
from ghype.likelihood import expected_counts, log_likelihood
from ghype.models.model_spec import ModelSpec
from network.multigraph import MultiGraph

pytestmark = pytest.mark.unit

LABELS = ("a", "b")


def two_dyad_model(xi: tuple[float, float], omega: tuple[float, float]) -> ModelSpec:
    return ModelSpec(
        kind="custom",
        xi=[[0.0, xi[0]], [xi[1], 0.0]],
        omega=[[1.0, omega[0]], [omega[1], 1.0]],
        directed=True,
        selfloops=False,
        labels=LABELS,
        free_parameters=1,
    )


def two_dyad_graph(a: int, b: int) -> MultiGraph:
    return MultiGraph(np.array([[0, a], [b, 0]]), directed=True, selfloops=False, labels=LABELS)


def random_graph(rng: np.random.Generator) -> MultiGraph:
    n = int(rng.integers(3, 21))
    directed = bool(rng.integers(2))
    selfloops = bool(rng.integers(2))
    mask = MultiGraph(np.zeros((n, n), dtype=int), directed, selfloops).dyad_mask()
    while True:
        adjacency = np.where(mask, rng.poisson(1.5, size=(n, n)), 0)
        if adjacency.sum() > 0:
            return MultiGraph(adjacency, directed=directed, selfloops=selfloops)


class TestWallenius:
    def test_two_balls(self):
        # one draw from an urn with a weight-2 ball and a weight-1 ball
        model = two_dyad_model((1, 1), (2, 1))
        assert math.exp(log_likelihood(model, two_dyad_graph(1, 0))) == pytest.approx(2 / 3, rel=1e-9)
        assert math.exp(log_likelihood(model, two_dyad_graph(0, 1))) == pytest.approx(1 / 3, rel=1e-9)

    def test_sequential_draws(self):
        # Pr(first draw on a, then a again) with Xi=(2, 1), Omega=(3, 1)
        model = two_dyad_model((2, 1), (3, 1))
        expected = (6 / 7) * (3 / 4)
        assert math.exp(log_likelihood(model, two_dyad_graph(2, 0))) == pytest.approx(expected, rel=1e-9)

    def test_normalization_over_all_two_vertex_models(self, quadrature):
        for xi in itertools.product(range(1, 6), repeat=2):
            for omega in [(1, 1), (2, 1), (5, 1)]:
                model = two_dyad_model(xi, omega)
                for m in range(1, min(6, sum(xi)) + 1):
                    total = sum(
                        math.exp(log_likelihood(model, two_dyad_graph(a, m - a), quadrature, method="wallenius"))
                        for a in range(max(0, m - xi[1]), min(xi[0], m) + 1)
                    )
                    assert total == pytest.approx(1.0, abs=1e-6), (xi, omega, m)

    def test_saturated_graph_has_probability_one(self):
        model = two_dyad_model((2, 3), (5, 1))
        assert log_likelihood(model, two_dyad_graph(2, 3)) == pytest.approx(0.0, abs=1e-12)

    def test_central_reduction(self, quadrature):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            g = random_graph(rng)
            model = fit_configuration(g)
            central = log_likelihood(model, g, quadrature, method="central")
            wallenius = log_likelihood(model, g, quadrature, method="wallenius")
            assert wallenius == pytest.approx(central, rel=1e-10, abs=1e-8)

    def test_auto_picks_central_for_uniform_omega(self, zkc):
        model = fit_regular(zkc)
        assert log_likelihood(model, zkc) == log_likelihood(model, zkc, method="central")

    def test_full_model_dominates(self, zkc):
        assert log_likelihood(fit_full(zkc), zkc) > log_likelihood(fit_configuration(zkc), zkc)


class TestCapacityAndShape:
    def test_count_above_capacity(self):
        model = two_dyad_model((1, 5), (1, 1))
        with pytest.raises(CapacityError):
            log_likelihood(model, two_dyad_graph(2, 0))

    def test_mismatched_graph(self, zkc, small_directed):
        with pytest.raises(GraphFormatError):
            log_likelihood(fit_regular(zkc), small_directed)


class TestExpectedCounts:
    def test_uniform_omega_is_proportional(self, small_directed):
        model = fit_configuration(small_directed)
        expected = expected_counts(model, 5)
        np.testing.assert_allclose(expected, model.xi * 5 / model.xi_total, rtol=1e-10)

    def test_boundaries(self, small_directed):
        model = fit_configuration(small_directed)
        np.testing.assert_array_equal(expected_counts(model, 0), np.zeros((3, 3)))
        total = int(model.xi_total)
        np.testing.assert_allclose(expected_counts(model, total), model.xi)
        with pytest.raises(CapacityError):
            expected_counts(model, total + 1)

    def test_sums_to_m_with_biased_omega(self):
        model = two_dyad_model((4, 4), (5, 1))
        expected = expected_counts(model, 3)
        assert expected.sum() == pytest.approx(3.0, rel=1e-12)
        assert expected[0, 1] > expected[1, 0]

    def test_approaches_multinomial_as_capacity_grows(self):
        omega = (3, 1)
        multinomial = np.array([3 / 4, 1 / 4]) * 2
        deviations = []
        for scale in (1, 100):
            expected = expected_counts(two_dyad_model((2 * scale, 2 * scale), omega), 2)
            deviations.append(np.abs(np.array([expected[0, 1], expected[1, 0]]) - multinomial).max())
        assert deviations[1] < deviations[0]
