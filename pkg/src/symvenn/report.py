"""Census CSV plus a matplotlib summary figure for ``info --report``."""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

from .artifacts import CensusReport  # noqa: E402

CSV_FIELDS = ("k", "regions_per_cluster", "binom_over_n", "left_kpoints", "R_k")


def write_census_csv(report: CensusReport, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        writer.writeheader()
        writer.writerows(report.rows())


def plot_census(report: CensusReport, path: str) -> None:
    ks = list(range(1, report.n))
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.6), constrained_layout=True)
    ax = axes[0]
    ax.bar(ks, [report.region_counts[k] for k in ks], color="#6a9fb5", label="observed")
    ax.plot(ks, [report.expected_region_counts[k] for k in ks], "k.", ms=9, label="C(n,k)/n")
    ax.set_xlabel("k")
    ax.set_ylabel("k-regions per cluster")
    ax.legend(frameon=False)
    ax = axes[1]
    if report.left_kpoints:
        ax.bar(ks, [report.left_kpoints[k] for k in ks], color="#d28445", label="observed")
        ax.plot(ks, [report.expected_left_kpoints[k] for k in ks], "k.", ms=9, label="R_k")
        ax.legend(frameon=False)
    else:
        ax.text(0.5, 0.5, "no crosscut form", ha="center", va="center", transform=ax.transAxes)
    ax.set_xlabel("k")
    ax.set_ylabel("k-points left of crosscut")
    flags = (
        f"n={report.n}  crosscuts={report.crosscut_count}  "
        f"crosscut-symmetric={report.crosscut_symmetric}  polar={report.polar_symmetric}"
    )
    for ax in axes:
        ax.yaxis.set_major_locator(MaxNLocator(integer=True))
    fig.suptitle(flags, fontsize=9)
    # fixed metadata keeps the PNG byte-stable
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)


def write_report(report: CensusReport, outdir: str) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    csv_path = os.path.join(outdir, "census.csv")
    png_path = os.path.join(outdir, "census.png")
    write_census_csv(report, csv_path)
    plot_census(report, png_path)
    return [csv_path, png_path]
