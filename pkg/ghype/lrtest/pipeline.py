import logging
import time
from typing import Literal, Optional, TypedDict

from langgraph.graph import END, StateGraph

from ghype.config import DofRule
from ghype.errors import GhypError
from ghype.fitting import check_nested, fit_model
from ghype.lrtest.null_distribution import null_distribution
from ghype.lrtest.statistics import lr_statistic, nu_for, p_value_beta, p_value_chi2
from ghype.models.configs import QuadratureConfig
from ghype.models.model_spec import ModelKind, ModelSpec
from ghype.models.reports import Convention, NullDistribution, TestReport
from network.multigraph import MultiGraph, Partition

logger = logging.getLogger(__name__)


class LRTestState(TypedDict):
    command: str
    graph: MultiGraph
    null_kind: ModelKind
    alt_kind: ModelKind
    partition: Optional[Partition]
    s: int
    seed: int
    null_model: Optional[ModelSpec]
    alt_model: Optional[ModelSpec]
    lam: Optional[float]
    D: Optional[float]
    nu: Optional[int]
    null_distribution: Optional[NullDistribution]
    report: Optional[TestReport]
    timings_ms: dict[str, float]
    error: Optional[GhypError]


def describe_convention(g: MultiGraph, dof_rule: DofRule) -> Convention:
    if g.directed:
        dyads = "ordered pairs (i, j)" + ("" if g.selfloops else ", i != j")
    else:
        dyads = "unordered pairs i <= j" if g.selfloops else "unordered pairs i < j"
    return Convention(
        directedness="directed" if g.directed else "undirected",
        selfloops=g.selfloops,
        dof_rule=dof_rule,
        dyads=dyads,
    )


class LikelihoodRatioPipeline:
    """LangGraph workflow: fit both models, compute D, build the null, report p-values"""

    def __init__(
        self,
        quadrature: Optional[QuadratureConfig] = None,
        workers: int = 1,
        dof_rule: DofRule = "difference",
    ):
        self.quadrature = quadrature or QuadratureConfig()
        self.workers = workers
        self.dof_rule = dof_rule
        self.graph = self._build_graph()
        self.app = self.graph.compile()

    def _build_graph(self) -> StateGraph:
        workflow = StateGraph(LRTestState)

        workflow.add_node("fit_models", self._fit_models_node)
        workflow.add_node("compute_statistic", self._compute_statistic_node)
        workflow.add_node("build_null", self._build_null_node)
        workflow.add_node("evaluate", self._evaluate_node)

        workflow.set_entry_point("fit_models")
        workflow.add_edge("fit_models", "compute_statistic")

        workflow.add_conditional_edges(
            "compute_statistic",
            self._should_sample_null,
            {
                "build_null": "build_null",
                "evaluate": "evaluate",
            },
        )

        workflow.add_edge("build_null", "evaluate")
        workflow.add_edge("evaluate", END)

        return workflow

    @staticmethod
    def _should_sample_null(state: LRTestState) -> Literal["build_null", "evaluate"]:
        """Identical kinds give D = 0 without any sampling"""
        if state.get("error") is not None or state["null_kind"] == state["alt_kind"]:
            return "evaluate"
        return "build_null"

    @staticmethod
    def _timed(state: LRTestState, stage: str, started: float) -> dict[str, float]:
        return {**state["timings_ms"], stage: (time.perf_counter() - started) * 1000.0}

    def _fit_models_node(self, state: LRTestState) -> LRTestState:
        started = time.perf_counter()
        try:
            logger.info(f"Fitting {state['null_kind']} and {state['alt_kind']} models")
            if state["null_kind"] != state["alt_kind"]:
                check_nested(state["null_kind"], state["alt_kind"])
            g = state["graph"]
            null_model = fit_model(state["null_kind"], g, state["partition"])
            alt_model = fit_model(state["alt_kind"], g, state["partition"])
            return {
                **state,
                "null_model": null_model,
                "alt_model": alt_model,
                "timings_ms": self._timed(state, "fit", started),
            }
        except GhypError as e:
            logger.error(f"Model fitting failed: {e}")
            return {**state, "error": e}

    def _compute_statistic_node(self, state: LRTestState) -> LRTestState:
        if state.get("error") is not None:
            return state
        started = time.perf_counter()
        try:
            null_model, alt_model = state["null_model"], state["alt_model"]
            if state["null_kind"] == state["alt_kind"]:
                lam, D, nu = 1.0, 0.0, 1
            else:
                lam, D = lr_statistic(null_model, alt_model, state["graph"], self.quadrature)
                nu = nu_for(null_model, alt_model, self.dof_rule)
            logger.info(f"Observed D={D:.6g} (lambda={lam:.6g}), nu={nu}")
            return {
                **state,
                "lam": lam,
                "D": D,
                "nu": nu,
                "timings_ms": self._timed(state, "statistic", started),
            }
        except GhypError as e:
            logger.error(f"Likelihood-ratio statistic failed: {e}")
            return {**state, "error": e}

    def _build_null_node(self, state: LRTestState) -> LRTestState:
        started = time.perf_counter()
        try:
            nd = null_distribution(
                state["graph"],
                state["null_kind"],
                state["alt_kind"],
                s=state["s"],
                seed=state["seed"],
                partition=state["partition"],
                cfg=self.quadrature,
                workers=self.workers,
                null_model=state["null_model"],
                nu=state["nu"],
            )
            return {
                **state,
                "null_distribution": nd,
                "timings_ms": self._timed(state, "null_distribution", started),
            }
        except GhypError as e:
            logger.error(f"Null distribution failed: {e}")
            return {**state, "error": e}

    def _evaluate_node(self, state: LRTestState) -> LRTestState:
        if state.get("error") is not None:
            return state
        D, nu = state["D"], state["nu"]
        nd = state.get("null_distribution")
        p_beta = p_value_beta(D, nd) if nd is not None else 1.0
        p_chi2 = p_value_chi2(D, nu)
        logger.info(f"p_beta={p_beta:.6g}, p_chi2={p_chi2:.6g}")

        report = TestReport(
            command=state["command"],
            lambda_=state["lam"],
            log_lambda=-D / 2.0,
            D=D,
            p_beta=p_beta,
            p_chi2=p_chi2,
            alpha=nd.alpha if nd is not None else None,
            beta=nd.beta if nd is not None else None,
            M=nd.M if nd is not None else None,
            nu=nu,
            s=state["s"],
            seed=state["seed"],
            dropped_replicates=nd.dropped_replicates if nd is not None else 0,
            null_model=state["null_model"].summary(),
            alt_model=state["alt_model"].summary(),
            convention=describe_convention(state["graph"], self.dof_rule),
            timings_ms=state["timings_ms"],
            null_distribution=nd,
        )
        return {**state, "report": report}

    def run(
        self,
        g: MultiGraph,
        null_kind: ModelKind,
        alt_kind: ModelKind,
        s: int,
        seed: int,
        partition: Optional[Partition] = None,
        command: str = "test",
    ) -> TestReport:
        initial_state: LRTestState = {
            "command": command,
            "graph": g,
            "null_kind": null_kind,
            "alt_kind": alt_kind,
            "partition": partition,
            "s": s,
            "seed": seed,
            "null_model": None,
            "alt_model": None,
            "lam": None,
            "D": None,
            "nu": None,
            "null_distribution": None,
            "report": None,
            "timings_ms": {},
            "error": None,
        }
        final_state = self.app.invoke(initial_state)
        if final_state.get("error") is not None:
            raise final_state["error"]
        return final_state["report"]


def lr_test(
    g: MultiGraph,
    null_kind: ModelKind,
    alt_kind: ModelKind,
    s: int,
    seed: int,
    partition: Optional[Partition] = None,
    cfg: Optional[QuadratureConfig] = None,
    workers: int = 1,
    dof_rule: DofRule = "difference",
) -> TestReport:
    pipeline = LikelihoodRatioPipeline(cfg, workers=workers, dof_rule=dof_rule)
    return pipeline.run(g, null_kind, alt_kind, s, seed, partition, command="test")


def gof_test(
    g: MultiGraph,
    null_kind: ModelKind,
    s: int,
    seed: int,
    partition: Optional[Partition] = None,
    cfg: Optional[QuadratureConfig] = None,
    workers: int = 1,
    dof_rule: DofRule = "saturated",
) -> TestReport:
    """Likelihood-ratio test of `null_kind` against the full model"""
    pipeline = LikelihoodRatioPipeline(cfg, workers=workers, dof_rule=dof_rule)
    return pipeline.run(g, null_kind, "full", s, seed, partition, command="gof")
