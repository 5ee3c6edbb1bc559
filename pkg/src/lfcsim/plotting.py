"""Static SVG charts: frequency responses with grid-code threshold lines
and eigenvalue loci in the complex plane."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .gridcode import ThresholdTable
from .sim import Trace
from .stability import SweepReport

__all__ = ["frequency_chart", "locus_chart"]

_BAND_STYLES = ["--", "-.", ":"]


def frequency_chart(trace: Trace, table: ThresholdTable, path) -> None:
    """Per-area frequency plot with one pair of horizontal lines per
    threshold row (band floor and ceiling)."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    f = trace.frequency_hz
    for i, aid in enumerate(trace.area_ids):
        ax.plot(trace.time, f[:, i], label=f"area {aid}", linewidth=1.2)
    for k, row in enumerate(table.rows):
        style = _BAND_STYLES[k % len(_BAND_STYLES)]
        lo, hi = row.below[0], row.above[1]
        label = ("continuous" if row.limit_s is None
                 else f"{row.limit_s:.0f} s limit")
        ax.axhline(lo, color="gray", linestyle=style, linewidth=0.9,
                   label=label)
        ax.axhline(hi, color="gray", linestyle=style, linewidth=0.9)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("frequency [Hz]")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def locus_chart(report: SweepReport, path) -> None:
    """Eigenvalue progression in the complex plane; the spectrum at the
    first swept value is marked with stars, later points trace each branch."""
    fig, ax = plt.subplots(figsize=(6, 5))
    paired = report.paired_values
    n_branches = paired.shape[1]
    cmap = plt.get_cmap("viridis")
    for j in range(n_branches):
        branch = paired[:, j]
        ax.plot(branch.real, branch.imag, "-", linewidth=0.8,
                color=cmap(j / max(1, n_branches - 1)), alpha=0.7)
        ax.plot(branch.real[1:], branch.imag[1:], ".", markersize=3,
                color=cmap(j / max(1, n_branches - 1)))
    ax.plot(paired[0].real, paired[0].imag, "*", color="tab:blue",
            markersize=10, label="initial value")
    ax.axvline(0.0, color="red", linewidth=0.8, linestyle="--",
               label="stability boundary")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    title = f"sweep {report.parameter}"
    if report.critical_value is not None:
        title += f" (critical at {report.critical_value:.4g})"
    ax.set_title(title, fontsize=10)
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
