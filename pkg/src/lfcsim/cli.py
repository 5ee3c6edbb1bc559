"""Command-line entry points.

Verbs: ``simulate`` (run a scenario, write trace CSV / metrics report /
frequency SVG), ``stability`` (parameter sweep, write locus CSV / SVG),
``metrics`` (recompute metrics from a trace CSV) and ``validate-dataset``.

Exit codes: 0 success (including diverged-verdict runs), 2 configuration or
schema errors, 3 numerical failures.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import traceio
from .dataset import load_dataset, shipped_dataset_path
from .errors import ConvergenceError, DatasetError
from .gridcode import SAUDI_TABLE, load_threshold_table, metrics
from .plotting import frequency_chart, locus_chart
from .scenarios import SCENARIO_IDS, build_scenario
from .sim import simulate
from .stability import sweep_grid, sweep_parameter

__all__ = ["main"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _add_dataset_arg(p):
    p.add_argument("--dataset", type=Path, default=None,
                   help="dataset file (default: bundled ieee39-3area)")


def _load(args):
    return load_dataset(args.dataset if args.dataset is not None
                        else shipped_dataset_path())


def _thresholds(args):
    if args.thresholds is None:
        return SAUDI_TABLE
    return load_threshold_table(args.thresholds)


def _parse_sweep(spec: str):
    rest, sep3, n_str = spec.rpartition(":")
    rest, sep2, hi_str = rest.rpartition(":")
    param, sep1, lo_str = rest.rpartition(":")
    if not (sep1 and sep2 and sep3):
        raise DatasetError(
            f"bad --sweep spec {spec!r}; expected <param>@<target>:lo:hi:n")
    try:
        lo, hi, n = float(lo_str), float(hi_str), int(n_str)
    except ValueError as exc:
        raise DatasetError(f"bad --sweep numbers in {spec!r}: {exc}") from exc
    return param, lo, hi, n


def _cmd_simulate(args) -> int:
    ds = _load(args)
    table = _thresholds(args)
    if not 0.0 < args.dt <= 0.1:
        raise DatasetError(f"--dt must lie in (0, 0.1], got {args.dt}")
    system = ds.system_model(args.dt)
    scenario = build_scenario(args.scenario, ds)
    trace = simulate(system, scenario, args.duration)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    traceio.write_trace_csv(trace, out / "trace.csv")

    per_area = {}
    verdicts = []
    f = trace.frequency_hz
    for i, aid in enumerate(trace.area_ids):
        m = metrics(f[:, i], trace.time, table=table, diverged=trace.diverged)
        per_area[aid] = m
        verdicts.append(m.verdict)
    run_verdict = ("diverged" if trace.diverged
                   else "violation" if "violation" in verdicts
                   else "compliant")
    report = traceio.format_metrics_report(per_area, run_verdict)
    (out / "metrics.txt").write_text(report, encoding="utf-8")
    frequency_chart(trace, table, out / "frequency.svg")

    print(f"scenario {scenario.name or args.scenario}: verdict={run_verdict}"
          f" samples={trace.n_samples} end={trace.time[-1]:.2f}s")
    sys.stdout.write(report)
    print(f"artifacts written to {out}")
    return EXIT_OK


def _cmd_stability(args) -> int:
    ds = _load(args)
    net = ds.network_model()
    param, lo, hi, n = _parse_sweep(args.sweep)
    values = sweep_grid(lo, hi, n)
    report = sweep_parameter(net, param, values)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    traceio.write_locus_csv(report, out / "locus.csv")
    locus_chart(report, out / "locus.svg")

    stable_count = sum(p.stable for p in report.locus)
    print(f"sweep {param}: {len(report.locus)} points, "
          f"{stable_count} stable / {len(report.locus) - stable_count} "
          "unstable")
    if report.critical_value is None:
        print("no verdict flip inside the swept range")
    else:
        print(f"critical value: {report.critical_value:.6g}")
    print(f"artifacts written to {out}")
    return EXIT_OK


def _cmd_metrics(args) -> int:
    header, data = traceio.read_trace_csv(args.trace)
    table = _thresholds(args)
    time = data[:, header.index("time_s")]
    cols = [(c, i) for i, c in enumerate(header) if c.startswith("df_hz_a")]
    if not cols:
        raise DatasetError(f"{args.trace}: no df_hz_a* columns found")
    per_area = {}
    verdicts = []
    for name, idx in cols:
        aid = int(name.removeprefix("df_hz_a"))
        freq = args.nominal_hz + data[:, idx]
        m = metrics(freq, time, table=table)
        per_area[aid] = m
        verdicts.append(m.verdict)
    verdict = "violation" if "violation" in verdicts else "compliant"
    sys.stdout.write(traceio.format_metrics_report(per_area, verdict))
    return EXIT_OK


def _cmd_validate(args) -> int:
    path = args.dataset if args.dataset is not None else shipped_dataset_path()
    ds = load_dataset(path)
    net = ds.network_model()
    n_gen = sum(a.n_gen for a in ds.areas)
    print(f"dataset ok: {len(ds.areas)} areas, {n_gen} generators, "
          f"{len(ds.partition)} buses, {len(ds.branches)} branches, "
          f"{len(ds.loads)} loads")
    for a in ds.areas:
        lfc = [g.bus for g in a.generators if g.participation > 0]
        print(f"  area {a.area_id}: {a.n_gen} generators, "
              f"load {ds.area_load_pu(a.area_id):.4f} pu, LFC at bus "
              f"{','.join(map(str, lfc))}")
    ki_buses = [b for b, g in zip(net.gen_buses, net.k_i) if g > 0]
    print(f"  network: secondary control at buses "
          f"{','.join(map(str, ki_buses))}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lfcsim",
        description="Multi-area LFC simulation under load-altering attacks")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run an attack scenario")
    _add_dataset_arg(p_sim)
    p_sim.add_argument("--scenario", required=True,
                       help=f"one of {', '.join(SCENARIO_IDS)}")
    p_sim.add_argument("--dt", type=float, default=0.01,
                       help="step size in seconds (default 0.01)")
    p_sim.add_argument("--duration", type=float, default=420.0,
                       help="simulated seconds (default 420)")
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.add_argument("--thresholds", type=Path, default=None,
                       help="threshold table CSV (default: Saudi grid code)")
    p_sim.set_defaults(func=_cmd_simulate)

    p_st = sub.add_parser("stability", help="eigenvalue sweep of the "
                                            "attack-modified network")
    _add_dataset_arg(p_st)
    p_st.add_argument("--sweep", required=True,
                      help="sweep spec <param>@<target>:<lo>:<hi>:<n>, e.g. "
                           "K_LG@8,20:0:20:41 or D_G@34:1:50:25")
    p_st.add_argument("--out", required=True, help="output directory")
    p_st.set_defaults(func=_cmd_stability)

    p_m = sub.add_parser("metrics", help="grid-code metrics of a trace CSV")
    p_m.add_argument("trace", type=Path, help="trace CSV from simulate")
    p_m.add_argument("--thresholds", type=Path, default=None)
    p_m.add_argument("--nominal-hz", type=float, default=60.0)
    p_m.set_defaults(func=_cmd_metrics)

    p_v = sub.add_parser("validate-dataset", help="schema and invariant "
                                                  "check of a dataset")
    _add_dataset_arg(p_v)
    p_v.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DatasetError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
