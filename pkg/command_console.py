import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, TextIO

import numpy as np
from pydantic import ValidationError

from ghype.config import Settings, default_dof_rule, get_settings
from ghype.errors import GhypError, GraphFormatError
from ghype.experiments.case_studies import run_case_study
from ghype.experiments.plot_data import write_plot_data, write_samples_csv
from ghype.experiments.validation import ks_sweep
from ghype.fitting import fit_model
from ghype.lrtest.null_distribution import null_distribution
from ghype.lrtest.pipeline import gof_test, lr_test
from ghype.lrtest.statistics import nu_for
from ghype.models.configs import QuadratureConfig, RunConfig, SampleBatchConfig
from ghype.models.model_spec import ModelSpec
from ghype.models.reports import SCHEMA_VERSION
from ghype.numerics import sample_skewness
from ghype.sampler import derive_seed, sample_batch
from network.edgelist import dump_edgelist, read_edgelist, read_partition

logger = logging.getLogger(__name__)

KIND_ALIASES = {"config": "configuration"}
KIND_CHOICES = ["regular", "config", "configuration", "block", "full"]
CASE_STUDIES = ["regular-synthetic", "config-synthetic", "zkc-selection", "zkc-gof"]

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2


def _kind(value: str) -> str:
    return KIND_ALIASES.get(value, value)


def _sizes(value: str) -> list[int]:
    try:
        return [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}") from None


class CommandConsole:
    """Command-line front end: parses options, runs one command, maps errors to exit codes"""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.parser = self._build_parser()

    def _build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="ghype", description="Likelihood-ratio tests for multi-edge networks"
        )
        commands = parser.add_subparsers(dest="command", required=True)

        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--seed", type=int, help="master seed; generated and printed when omitted")
        common.add_argument("--out", type=Path, help="output path (stdout when omitted)")
        common.add_argument("--format", choices=["json", "csv"], dest="output_format")
        common.add_argument("--quad-tol", type=float, help="relative quadrature tolerance")
        common.add_argument("--threads", type=int, help="worker threads (default GHYP_THREADS)")
        common.add_argument("--verbose", "-v", action="store_true")

        graph = argparse.ArgumentParser(add_help=False)
        graph.add_argument("--graph", type=Path, dest="graph_path")
        direction = graph.add_mutually_exclusive_group()
        direction.add_argument("--directed", dest="directed", action="store_true")
        direction.add_argument("--undirected", dest="directed", action="store_false")
        graph.set_defaults(directed=False)
        graph.add_argument("--partition", type=Path, dest="partition_path")

        testing = argparse.ArgumentParser(add_help=False)
        testing.add_argument("--null", choices=KIND_CHOICES, default="regular", dest="null_kind")
        testing.add_argument("--samples", type=int, help="null-distribution size s")
        testing.add_argument(
            "--dof-rule",
            choices=["difference", "saturated"],
            help="chi2 degrees of freedom (default: saturated for gof, difference otherwise)",
        )
        testing.add_argument("--samples-csv", type=Path, help="also write the null D samples as CSV")
        testing.add_argument("--timings", action="store_true", help="include stage timings in the report")

        alternative = argparse.ArgumentParser(add_help=False)
        alternative.add_argument("--alt", choices=KIND_CHOICES, default="configuration", dest="alt_kind")

        commands.add_parser("test", parents=[common, graph, testing, alternative], help="model selection test")
        commands.add_parser("gof", parents=[common, graph, testing], help="goodness of fit against the full model")

        nulldist = commands.add_parser(
            "nulldist", parents=[common, graph, testing, alternative], help="histogram and fitted densities"
        )
        nulldist.add_argument("--bins", type=int, default=40)

        validate = commands.add_parser(
            "validate", parents=[common, graph, testing, alternative], help="KS sweep over sample sizes"
        )
        validate.add_argument("--sizes", type=_sizes, default=[250, 500, 1000, 2000])
        validate.add_argument("--reps", type=int, default=50)
        validate.add_argument("--reference-size", type=int, default=20_000)

        casestudy = commands.add_parser("casestudy", parents=[common], help="reproduce a case study")
        casestudy.add_argument("case_study", metavar="NAME", help=", ".join(CASE_STUDIES))
        casestudy.add_argument("--reps", type=int, default=200)
        casestudy.add_argument("--samples", type=int)

        sample = commands.add_parser("sample", parents=[common, graph], help="draw graphs from a fitted model")
        sample.add_argument("--null", choices=KIND_CHOICES, default="configuration", dest="null_kind")
        sample.add_argument("--model", type=Path, dest="model_path", help="ModelSpec JSON document")
        sample.add_argument("--count", type=int, default=1)
        sample.add_argument("--edges", type=int, help="edge count when sampling from --model")

        commands.add_parser("describe", parents=[common, graph], help="basic statistics of a graph")
        return parser

    def _configure_logging(self, verbose: bool) -> None:
        logging.basicConfig(
            level=logging.INFO if verbose else self.settings.log_level,
            format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            stream=sys.stderr,
        )

    @staticmethod
    def _generated_seed() -> int:
        seed = int(np.random.SeedSequence().generate_state(1, np.uint64)[0])
        print(f"seed: {seed}", file=sys.stderr)
        return seed

    def _run_config(self, args: argparse.Namespace) -> RunConfig:
        options = {key: value for key, value in vars(args).items() if value is not None}
        options.pop("verbose", None)
        for key in ("null_kind", "alt_kind"):
            if key in options:
                options[key] = _kind(options[key])

        tolerance = options.pop("quad_tol", None)
        quadrature = QuadratureConfig.from_settings(self.settings)
        if tolerance is not None:
            quadrature = quadrature.model_copy(update={"relative_tolerance": tolerance})

        options["quadrature"] = quadrature
        options["workers"] = options.pop("threads", self.settings.threads)
        options["output_path"] = options.pop("out", None)
        options.setdefault("samples", self.settings.samples)
        options.setdefault("dof_rule", self.settings.dof_rule or default_dof_rule(args.command))
        if args.command in ("validate", "nulldist"):
            options.setdefault("output_format", "csv")
        if options.get("seed") is None and args.command != "describe":
            options["seed"] = self._generated_seed()
        options.setdefault("seed", 0)
        return RunConfig(**options)

    def run(self, argv: Optional[list[str]] = None) -> int:
        args = self.parser.parse_args(argv)
        self._configure_logging(args.verbose)

        try:
            cfg = self._run_config(args)
            handler = getattr(self, f"cmd_{cfg.command}")
            return handler(cfg)
        except ValidationError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_USAGE
        except (GraphFormatError, OSError) as e:
            logger.error(f"Command failed: {e}")
            print(f"error: {e}", file=sys.stderr)
            return EXIT_IO
        except GhypError as e:
            logger.error(f"Command failed: {e}")
            print(f"error: {e}", file=sys.stderr)
            return EXIT_USAGE

    @staticmethod
    def _load_graph(cfg: RunConfig):
        g = read_edgelist(cfg.graph_path, directed=cfg.directed)
        partition = read_partition(cfg.partition_path) if cfg.partition_path else None
        return g, partition

    @staticmethod
    def _write(cfg: RunConfig, write) -> None:
        if cfg.output_path is None:
            write(sys.stdout)
            return
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as stream:
            write(stream)

    def _emit(self, cfg: RunConfig, document: dict[str, Any]) -> None:
        """Write a JSON document, or its scalar fields as a one-row CSV"""

        def write(stream: TextIO) -> None:
            if cfg.output_format == "csv":
                scalars = {k: v for k, v in document.items() if not isinstance(v, (dict, list))}
                writer = csv.DictWriter(stream, fieldnames=list(scalars), lineterminator="\n")
                writer.writeheader()
                writer.writerow(scalars)
            else:
                json.dump(document, stream, indent=2)
                stream.write("\n")

        self._write(cfg, write)

    def _report_command(self, cfg: RunConfig, gof: bool) -> int:
        g, partition = self._load_graph(cfg)
        options = dict(
            s=cfg.samples,
            seed=cfg.seed,
            partition=partition,
            cfg=cfg.quadrature,
            workers=cfg.workers,
            dof_rule=cfg.dof_rule,
        )
        if gof:
            report = gof_test(g, cfg.null_kind, **options)
        else:
            report = lr_test(g, cfg.null_kind, cfg.alt_kind, **options)

        document = report.to_json_dict()
        if not cfg.timings:
            document["timings_ms"] = {}
        self._emit(cfg, document)

        if cfg.samples_csv is not None and report.null_distribution is not None:
            with open(cfg.samples_csv, "w", encoding="utf-8", newline="") as stream:
                write_samples_csv(report.null_distribution, stream)
        return EXIT_OK

    def cmd_test(self, cfg: RunConfig) -> int:
        return self._report_command(cfg, gof=False)

    def cmd_gof(self, cfg: RunConfig) -> int:
        return self._report_command(cfg, gof=True)

    def cmd_nulldist(self, cfg: RunConfig) -> int:
        g, partition = self._load_graph(cfg)
        null_model = fit_model(cfg.null_kind, g, partition)
        nu = nu_for(null_model, fit_model(cfg.alt_kind, g, partition), cfg.dof_rule)
        nd = null_distribution(
            g,
            cfg.null_kind,
            cfg.alt_kind,
            s=cfg.samples,
            seed=cfg.seed,
            partition=partition,
            cfg=cfg.quadrature,
            workers=cfg.workers,
            null_model=null_model,
            nu=nu,
        )
        sidecar = write_plot_data(nd, cfg.output_path, bins=cfg.bins)
        if cfg.samples_csv is not None:
            with open(cfg.samples_csv, "w", encoding="utf-8", newline="") as stream:
                write_samples_csv(nd, stream)
        print(f"wrote {cfg.output_path} and {sidecar}", file=sys.stderr)
        return EXIT_OK

    def cmd_validate(self, cfg: RunConfig) -> int:
        g, partition = self._load_graph(cfg)
        rows = ks_sweep(
            g,
            cfg.null_kind,
            cfg.alt_kind,
            sizes=cfg.sizes,
            reps=cfg.reps,
            seed=cfg.seed,
            reference_size=cfg.reference_size,
            partition=partition,
            cfg=cfg.quadrature,
            workers=cfg.workers,
        )

        def write(stream: TextIO) -> None:
            if cfg.output_format == "json":
                json.dump(
                    {"schema_version": SCHEMA_VERSION, "seed": cfg.seed, "rows": [r.model_dump() for r in rows]},
                    stream,
                    indent=2,
                )
                stream.write("\n")
                return
            writer = csv.DictWriter(stream, fieldnames=list(rows[0].model_dump()), lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow(row.model_dump())

        self._write(cfg, write)
        return EXIT_OK

    def cmd_casestudy(self, cfg: RunConfig) -> int:
        summary = run_case_study(
            cfg.case_study, seed=cfg.seed, reps=cfg.reps, s=cfg.samples, cfg=cfg.quadrature, workers=cfg.workers
        )
        self._emit(cfg, summary.model_dump())
        return EXIT_OK

    def cmd_sample(self, cfg: RunConfig) -> int:
        if cfg.model_path is not None:
            with open(cfg.model_path, "r", encoding="utf-8") as stream:
                model = ModelSpec.from_document(json.load(stream))
            m = cfg.edges
        else:
            g, partition = self._load_graph(cfg)
            model = fit_model(cfg.null_kind, g, partition)
            m = cfg.edges if cfg.edges is not None else g.m

        batch = SampleBatchConfig(count=cfg.count, master_seed=cfg.seed, worker_hint=cfg.workers)
        graphs = sample_batch(model, m, batch)

        directory = cfg.output_path
        directory.mkdir(parents=True, exist_ok=True)
        width = len(str(cfg.count - 1))
        files = []
        for index, h in enumerate(graphs):
            name = f"replicate_{index:0{width}d}.tsv"
            with open(directory / name, "w", encoding="utf-8") as stream:
                dump_edgelist(h, stream)
            files.append({"file": name, "seed": derive_seed(cfg.seed, index)})

        manifest = {
            "schema_version": SCHEMA_VERSION,
            "master_seed": cfg.seed,
            "m": m,
            "model": model.summary(),
            "directed": model.directed,
            "selfloops": model.selfloops,
            "replicates": files,
        }
        with open(directory / "manifest.json", "w", encoding="utf-8") as stream:
            json.dump(manifest, stream, indent=2)
        print(f"wrote {len(files)} graphs to {directory}", file=sys.stderr)
        return EXIT_OK

    def cmd_describe(self, cfg: RunConfig) -> int:
        g, _ = self._load_graph(cfg)
        k_out, k_in = g.degrees()
        document = {
            "schema_version": SCHEMA_VERSION,
            "n": g.n,
            "m": g.m,
            "directed": g.directed,
            "selfloops": g.selfloops,
            "cells": g.cell_count(),
            "max_multiplicity": int(g.adjacency.max()) if g.n else 0,
            "degree_skewness": sample_skewness(k_out) if g.n >= 3 and np.ptp(k_out) > 0 else None,
        }
        if g.directed:
            document["in_degree_skewness"] = sample_skewness(k_in) if g.n >= 3 and np.ptp(k_in) > 0 else None
        self._emit(cfg, document)
        return EXIT_OK
