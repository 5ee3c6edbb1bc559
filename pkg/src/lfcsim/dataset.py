"""Dataset ingestion and serialization.

A dataset is one YAML document holding the area-level LFC constants, the
bus-level network data (branch table, generator swing/control constants,
load assignments with vulnerable fractions), the bus-to-area partition and
per-area controller gains.  The shipped ``ieee39-3area`` dataset adapts the
public IEEE 39-bus case to a three-area split.

Loading validates the schema id, field types and the structural invariants
(connected branch graph, complete partition, participation factors summing
to one); violations raise :class:`DatasetError` naming the offending field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import yaml

from .control import PidGains
from .errors import DatasetError
from .model import AreaParams, GeneratorParams
from .network import NetworkModel, build_network_model
from .sim import SystemModel, build_system

__all__ = [
    "SCHEMA_ID",
    "NetGenerator",
    "LoadPoint",
    "Dataset",
    "load_dataset",
    "save_dataset",
    "shipped_dataset_path",
]

SCHEMA_ID = "lfc-laa-dataset/1"


@dataclass(frozen=True)
class NetGenerator:
    """Swing and control constants of one generator bus in the network
    model (units are model-level, not tied to the area-model pu base)."""

    bus: int
    inertia: float
    damping: float
    primary_gain: float
    integral_gain: float


@dataclass(frozen=True)
class LoadPoint:
    bus: int
    mw: float
    vulnerable_fraction: float = 1.0


@dataclass(frozen=True)
class Dataset:
    base_mva: float
    frequency_hz: float
    areas: tuple[AreaParams, ...]
    controllers: tuple[PidGains, ...]
    partition: dict[int, int]  # bus -> area id
    branch_base_mva: float
    branches: tuple[tuple[int, int, float], ...]
    net_generators: tuple[NetGenerator, ...]
    loads: tuple[LoadPoint, ...]
    frequency_sensors: dict[int, int] = field(default_factory=dict)

    @property
    def area_ids(self) -> tuple[int, ...]:
        return tuple(a.area_id for a in self.areas)

    @property
    def gen_buses(self) -> tuple[int, ...]:
        return tuple(g.bus for g in self.net_generators)

    def area_of(self, bus: int) -> int:
        try:
            return self.partition[bus]
        except KeyError as exc:
            raise DatasetError(f"bus {bus} is not in the partition") from exc

    def area_load_pu(self, area_id: int) -> float:
        """Total load of one area in pu on the system base."""
        return sum(ld.mw for ld in self.loads
                   if self.partition[ld.bus] == area_id) / self.base_mva

    def area_vulnerable_pu(self, area_id: int) -> float:
        return sum(ld.mw * ld.vulnerable_fraction for ld in self.loads
                   if self.partition[ld.bus] == area_id) / self.base_mva

    def system_model(self, dt: float) -> SystemModel:
        return build_system(list(self.areas), list(self.controllers), dt,
                            nominal_frequency=self.frequency_hz)

    def network_model(self) -> NetworkModel:
        return build_network_model(
            branches=list(self.branches),
            gen_buses=[g.bus for g in self.net_generators],
            inertia={g.bus: g.inertia for g in self.net_generators},
            damping={g.bus: g.damping for g in self.net_generators},
            primary_gain={g.bus: g.primary_gain for g in self.net_generators},
            integral_gain={g.bus: g.integral_gain
                           for g in self.net_generators},
            loads={ld.bus: ld.mw / self.branch_base_mva for ld in self.loads},
            sensors=dict(self.frequency_sensors))


def shipped_dataset_path() -> Path:
    """Location of the bundled ieee39-3area dataset."""
    return Path(resources.files("lfcsim").joinpath("data/ieee39_3area.yaml"))


def _need(mapping, key, where, kind=None):
    if key not in mapping:
        raise DatasetError(f"{where}: missing field {key!r}")
    value = mapping[key]
    if kind is not None and not isinstance(value, kind):
        raise DatasetError(f"{where}.{key}: expected {kind}, got "
                           f"{type(value).__name__}")
    return value


def _tie_coefficients(branches, partition, branch_base_mva, base_mva):
    """Per-area-pair synchronizing coefficients from the tie branches:
    sum of 1/x over crossing lines, rescaled to the system power base."""
    ties: dict[tuple[int, int], float] = {}
    for f, t, x in branches:
        af, at = partition[f], partition[t]
        if af != at:
            key = (min(af, at), max(af, at))
            ties[key] = ties.get(key, 0.0) + 1.0 / x
    scale = branch_base_mva / base_mva
    return {k: v * scale for k, v in ties.items()}


def load_dataset(path) -> Dataset:
    """Parse and validate a dataset file."""
    path = Path(path)
    try:
        with open(path) as fh:
            doc = yaml.safe_load(fh)
    except FileNotFoundError:
        raise DatasetError(f"dataset file {path} does not exist") from None
    except yaml.YAMLError as exc:
        raise DatasetError(f"{path}: not valid YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise DatasetError(f"{path}: top level must be a mapping")
    schema = _need(doc, "schema", str(path))
    if schema != SCHEMA_ID:
        raise DatasetError(f"{path}: unsupported schema {schema!r}, "
                           f"expected {SCHEMA_ID!r}")

    system = _need(doc, "system", "dataset", dict)
    base_mva = float(_need(system, "base_mva", "system"))
    freq = float(_need(system, "frequency_hz", "system"))
    if base_mva <= 0 or freq <= 0:
        raise DatasetError("system.base_mva and system.frequency_hz must be "
                           "positive")

    net = _need(doc, "network", "dataset", dict)
    branch_base = float(_need(net, "branch_base_mva", "network"))
    raw_branches = _need(net, "branches", "network", list)
    branches = []
    seen_buses: set[int] = set()
    for i, row in enumerate(raw_branches):
        where = f"network.branches[{i}]"
        if not (isinstance(row, list) and len(row) == 3):
            raise DatasetError(f"{where}: expected [from, to, x_pu]")
        f, t, x = int(row[0]), int(row[1]), float(row[2])
        if x <= 0:
            raise DatasetError(f"{where}: reactance must be positive")
        branches.append((f, t, x))
        seen_buses.update((f, t))
    if not branches:
        raise DatasetError("network.branches: empty branch list")

    partition_raw = _need(doc, "partition", "dataset", dict)
    partition = {int(b): int(a) for b, a in partition_raw.items()}
    missing = seen_buses - set(partition)
    if missing:
        raise DatasetError(
            f"partition: buses {sorted(missing)} are not assigned to an area")

    # connectivity of the branch graph over all partitioned buses
    adj: dict[int, set[int]] = {b: set() for b in partition}
    for f, t, _ in branches:
        adj[f].add(t)
        adj[t].add(f)
    stack = [next(iter(partition))]
    reached = set(stack)
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in reached:
                reached.add(nb)
                stack.append(nb)
    unreached = set(partition) - reached
    if unreached:
        raise DatasetError(f"network.branches: graph is disconnected; "
                           f"unreachable buses {sorted(unreached)}")

    raw_gens = _need(net, "generators", "network", list)
    net_gens = []
    for i, rec in enumerate(raw_gens):
        where = f"network.generators[{i}]"
        if not isinstance(rec, dict):
            raise DatasetError(f"{where}: expected a mapping")
        try:
            net_gens.append(NetGenerator(
                bus=int(_need(rec, "bus", where)),
                inertia=float(_need(rec, "inertia", where)),
                damping=float(_need(rec, "damping", where)),
                primary_gain=float(_need(rec, "primary_gain", where)),
                integral_gain=float(_need(rec, "integral_gain", where))))
        except (TypeError, ValueError) as exc:
            raise DatasetError(f"{where}: {exc}") from exc
    gen_bus_set = {g.bus for g in net_gens}
    if len(gen_bus_set) != len(net_gens):
        raise DatasetError("network.generators: duplicate generator bus")

    raw_loads = _need(net, "loads", "network", list)
    loads = []
    for i, rec in enumerate(raw_loads):
        where = f"network.loads[{i}]"
        if not isinstance(rec, dict):
            raise DatasetError(f"{where}: expected a mapping")
        frac = float(rec.get("vulnerable_fraction", 1.0))
        if not 0.0 <= frac <= 1.0:
            raise DatasetError(f"{where}.vulnerable_fraction: must lie in "
                               "[0, 1]")
        bus = int(_need(rec, "bus", where))
        if bus in gen_bus_set:
            raise DatasetError(f"{where}: bus {bus} is a generator bus")
        loads.append(LoadPoint(bus=bus, mw=float(_need(rec, "mw", where)),
                               vulnerable_fraction=frac))

    sensors_raw = net.get("frequency_sensors") or {}
    sensors = {int(lb): int(gb) for lb, gb in sensors_raw.items()}
    for lb, gb in sensors.items():
        if gb not in gen_bus_set:
            raise DatasetError(f"network.frequency_sensors[{lb}]: {gb} is "
                               "not a generator bus")

    tie_map = _tie_coefficients(branches, partition, branch_base, base_mva)

    raw_areas = _need(doc, "areas", "dataset", list)
    areas = []
    controllers = []
    for i, rec in enumerate(raw_areas):
        where = f"areas[{i}]"
        if not isinstance(rec, dict):
            raise DatasetError(f"{where}: expected a mapping")
        aid = int(_need(rec, "id", where))
        gens = []
        for j, g in enumerate(_need(rec, "generators", where, list)):
            gwhere = f"{where}.generators[{j}]"
            try:
                gp = GeneratorParams(
                    turbine_tc=float(_need(g, "turbine_tc", gwhere)),
                    governor_tc=float(_need(g, "governor_tc", gwhere)),
                    droop=float(_need(g, "droop", gwhere)),
                    participation=float(_need(g, "participation", gwhere)),
                    bus=int(_need(g, "bus", gwhere)))
            except ValueError as exc:
                raise DatasetError(f"{gwhere}: {exc}") from exc
            if gp.bus not in gen_bus_set:
                raise DatasetError(f"{gwhere}.bus: {gp.bus} has no network "
                                   "generator record")
            if partition.get(gp.bus) != aid:
                raise DatasetError(f"{gwhere}.bus: {gp.bus} is not "
                                   f"partitioned into area {aid}")
            gens.append(gp)
        ties = {other: t for (a, b), t in tie_map.items()
                for other in ((b,) if a == aid else (a,) if b == aid else ())}
        try:
            areas.append(AreaParams(
                damping=float(_need(rec, "damping", where)),
                inertia=float(_need(rec, "inertia", where)),
                generators=tuple(gens), tie_coefficients=ties, area_id=aid))
        except ValueError as exc:
            raise DatasetError(f"{where}: {exc}") from exc
        ctrl = _need(rec, "controller", where, dict)
        limit = ctrl.get("output_limit")
        try:
            controllers.append(PidGains(
                kp=float(ctrl.get("kp", 0.0)), ki=float(ctrl.get("ki", 0.0)),
                kd=float(ctrl.get("kd", 0.0)),
                output_limit=None if limit is None else float(limit),
                bias=float(ctrl.get("bias", 0.0))))
        except ValueError as exc:
            raise DatasetError(f"{where}.controller: {exc}") from exc

    if len({a.area_id for a in areas}) != len(areas):
        raise DatasetError("areas: duplicate area id")
    listed = {g.bus for a in areas for g in a.generators}
    unlisted = gen_bus_set - listed
    if unlisted:
        raise DatasetError(f"areas: generator buses {sorted(unlisted)} are "
                           "not assigned to any area")
    area_id_set = {a.area_id for a in areas}
    bad_targets = {a for a in partition.values() if a not in area_id_set}
    if bad_targets:
        raise DatasetError(f"partition: references unknown areas "
                           f"{sorted(bad_targets)}")

    return Dataset(base_mva=base_mva, frequency_hz=freq, areas=tuple(areas),
                   controllers=tuple(controllers), partition=partition,
                   branch_base_mva=branch_base, branches=tuple(branches),
                   net_generators=tuple(net_gens), loads=tuple(loads),
                   frequency_sensors=sensors)


def save_dataset(ds: Dataset, path) -> None:
    """Serialize a dataset back to YAML (field-for-field round trip)."""
    doc = {
        "schema": SCHEMA_ID,
        "system": {"base_mva": ds.base_mva, "frequency_hz": ds.frequency_hz},
        "areas": [
            {
                "id": a.area_id,
                "damping": a.damping,
                "inertia": a.inertia,
                "controller": {
                    "kp": c.kp, "ki": c.ki, "kd": c.kd,
                    "output_limit": c.output_limit, "bias": c.bias,
                },
                "generators": [
                    {"bus": g.bus, "turbine_tc": g.turbine_tc,
                     "governor_tc": g.governor_tc, "droop": g.droop,
                     "participation": g.participation}
                    for g in a.generators
                ],
            }
            for a, c in zip(ds.areas, ds.controllers)
        ],
        "partition": {b: ds.partition[b] for b in sorted(ds.partition)},
        "network": {
            "branch_base_mva": ds.branch_base_mva,
            "branches": [[f, t, x] for f, t, x in ds.branches],
            "generators": [
                {"bus": g.bus, "inertia": g.inertia, "damping": g.damping,
                 "primary_gain": g.primary_gain,
                 "integral_gain": g.integral_gain}
                for g in ds.net_generators
            ],
            "loads": [
                {"bus": ld.bus, "mw": ld.mw,
                 "vulnerable_fraction": ld.vulnerable_fraction}
                for ld in ds.loads
            ],
            "frequency_sensors": {b: ds.frequency_sensors[b]
                                  for b in sorted(ds.frequency_sensors)},
        },
    }
    with open(path, "w") as fh:
        yaml.safe_dump(doc, fh, sort_keys=False)
