"""Result serialization: trace CSV, metrics report, locus CSV.

CSV files are UTF-8 with a header row, comma delimited, ``.`` decimal
separator.  Floats are written with ``repr``, whose shortest round-trip
representation reproduces the in-memory values exactly on re-parse.
"""

from __future__ import annotations

import csv

import numpy as np

from .gridcode import TraceMetrics
from .sim import Trace
from .stability import SweepReport

__all__ = [
    "trace_header",
    "write_trace_csv",
    "read_trace_csv",
    "format_metrics_report",
    "write_locus_csv",
]


def trace_header(trace: Trace) -> list[str]:
    cols = ["time_s"]
    for aid in trace.area_ids:
        cols += [f"df_hz_a{aid}", f"dp_tie_a{aid}", f"ace_a{aid}",
                 f"dp_c_a{aid}", f"dp_l_a{aid}"]
    for i, aid in enumerate(trace.area_ids):
        n_gen = trace.dp_m[i].shape[1]
        cols += [f"dp_m_a{aid}_g{k + 1}" for k in range(n_gen)]
        cols += [f"dp_g_a{aid}_g{k + 1}" for k in range(n_gen)]
    return cols


def _trace_matrix(trace: Trace) -> np.ndarray:
    blocks = [trace.time[:, None]]
    df_hz = trace.df_hz
    for i in range(len(trace.area_ids)):
        blocks.append(np.column_stack([
            df_hz[:, i], trace.dp_tie[:, i], trace.ace[:, i],
            trace.dp_c[:, i], trace.dp_l[:, i]]))
    for i in range(len(trace.area_ids)):
        blocks.append(trace.dp_m[i])
        blocks.append(trace.dp_g[i])
    return np.hstack(blocks)


def write_trace_csv(trace: Trace, path) -> None:
    data = _trace_matrix(trace)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(trace_header(trace))
        for row in data:
            writer.writerow([repr(float(v)) for v in row])


def read_trace_csv(path) -> tuple[list[str], np.ndarray]:
    """Header and full-precision value matrix of a trace CSV."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    return header, np.array(rows)


def format_metrics_report(per_area: dict[int, TraceMetrics],
                          verdict: str) -> str:
    """Structured text report; None metrics print as '-' like the result
    tables this mirrors."""

    def fmt(v, nd=3):
        return "-" if v is None else f"{v:.{nd}f}"

    lines = [f"verdict: {verdict}"]
    for aid, m in per_area.items():
        lines.append(f"[area {aid}]")
        lines.append(f"  steady_state_hz: {fmt(m.steady_state_hz)}")
        lines.append(f"  settling_time_s: {fmt(m.settling_time_s, 2)}")
        lines.append(f"  nadir_hz: {fmt(m.nadir_hz)}")
        lines.append(f"  nadir_time_s: {fmt(m.nadir_time_s, 2)}")
        lines.append(f"  zenith_hz: {fmt(m.zenith_hz)}")
        lines.append(f"  zenith_time_s: {fmt(m.zenith_time_s, 2)}")
        lines.append(f"  verdict: {m.verdict}")
    return "\n".join(lines) + "\n"


def write_locus_csv(report: SweepReport, path) -> None:
    """One row per (parameter value, eigenvalue index): value, index, real,
    imaginary, stable flag; eigenvalue indices track locus branches."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["parameter_value", "eig_index", "re", "im", "stable"])
        for p, paired in zip(report.locus, report.paired_values):
            for j, lam in enumerate(paired):
                writer.writerow([repr(p.value), j, repr(lam.real),
                                 repr(lam.imag), int(p.stable)])
