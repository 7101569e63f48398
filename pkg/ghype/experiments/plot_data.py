import csv
import json
from pathlib import Path
from typing import Any, TextIO

import numpy as np

from ghype.lrtest.statistics import validate_null
from ghype.models.reports import SCHEMA_VERSION, NullDistribution
from ghype.numerics import chi2_cdf, scaled_beta_cdf

HISTOGRAM_COLUMNS = ("bin_left", "bin_right", "empirical_density", "beta_density", "chi2_density")
DEFAULT_BINS = 40


def histogram_rows(nd: NullDistribution, bins: int = DEFAULT_BINS) -> list[dict[str, float]]:
    """Empirical density of the null samples with bin-averaged Beta and chi2 densities.

    Bins span [0, max sample]; the curves are (CDF(right) - CDF(left)) / width.
    """
    samples = np.asarray(nd.samples, dtype=float)
    upper = float(samples.max()) if samples.max() > 0 else nd.M
    empirical, edges = np.histogram(samples, bins=bins, range=(0.0, upper), density=True)
    widths = np.diff(edges)
    beta_cdf = scaled_beta_cdf(edges, nd.alpha, nd.beta, nd.M)
    chi2 = chi2_cdf(edges, nd.nu)

    return [
        {
            "bin_left": float(edges[i]),
            "bin_right": float(edges[i + 1]),
            "empirical_density": float(empirical[i]),
            "beta_density": float((beta_cdf[i + 1] - beta_cdf[i]) / widths[i]),
            "chi2_density": float((chi2[i + 1] - chi2[i]) / widths[i]),
        }
        for i in range(bins)
    ]


def write_histogram_csv(rows: list[dict[str, float]], stream: TextIO) -> None:
    writer = csv.DictWriter(stream, fieldnames=HISTOGRAM_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: repr(value) for key, value in row.items()})


def sidecar(nd: NullDistribution, bins: int) -> dict[str, Any]:
    beta_fit, chi2_fit = validate_null(nd)
    return {
        "schema_version": SCHEMA_VERSION,
        "alpha": nd.alpha,
        "beta": nd.beta,
        "M": nd.M,
        "nu": nd.nu,
        "s": nd.s,
        "seed": nd.seed,
        "bins": bins,
        "ks_beta": beta_fit.model_dump(),
        "ks_chi2": chi2_fit.model_dump(),
    }


def write_plot_data(nd: NullDistribution, csv_path: Path, bins: int = DEFAULT_BINS) -> Path:
    """Write the histogram CSV and a `.json` sidecar next to it; returns the sidecar path"""
    with open(csv_path, "w", encoding="utf-8", newline="") as stream:
        write_histogram_csv(histogram_rows(nd, bins), stream)
    sidecar_path = csv_path.with_suffix(".json")
    with open(sidecar_path, "w", encoding="utf-8") as stream:
        json.dump(sidecar(nd, bins), stream, indent=2)
    return sidecar_path


def write_samples_csv(nd: NullDistribution, stream: TextIO) -> None:
    """Single-column CSV of the null D samples"""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["D"])
    for value in nd.samples:
        writer.writerow([repr(float(value))])
