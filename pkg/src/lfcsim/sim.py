"""Coupled N-area discrete-time LFC simulation with attack injection.

Each area is discretized independently (exact zero-order hold); the
cross-area coupling input v_i is evaluated from the neighbouring areas'
frequency deviations at the step start, giving an explicit one-step lag that
vanishes with dt.  Attacks enter through the load channel: timed level
schedules for static and multistep attacks, and a proportional frequency
feedback (d_i = -K_i * df_i after the engage time) for the dynamic attack.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .control import PidGains
from .model import AreaMatrices, AreaParams, build_area_matrices, compute_beta
from .numerics import zoh_discretize

__all__ = [
    "SystemArea",
    "SystemModel",
    "AttackScenario",
    "Trace",
    "build_system",
    "coupling_input",
    "simulate",
]

#: any state magnitude beyond this terminates a run with a diverged verdict
DIVERGENCE_THRESHOLD = 1e6

SCENARIO_KINDS = ("step", "multistep", "dlaa_feedback")


@dataclass(frozen=True)
class SystemArea:
    """One area of the assembled system: parameters, continuous blocks,
    zero-order-hold discretization and controller gains."""

    params: AreaParams
    gains: PidGains
    matrices: AreaMatrices
    ad: np.ndarray
    b1d: np.ndarray
    b2d: np.ndarray

    @property
    def beta(self) -> float:
        return float(self.matrices.c[0, 0])


@dataclass(frozen=True)
class SystemModel:
    areas: tuple[SystemArea, ...]
    tie: np.ndarray  # symmetric (na, na), zero diagonal
    dt: float
    nominal_frequency: float = 60.0

    @property
    def n_areas(self) -> int:
        return len(self.areas)

    @property
    def area_ids(self) -> tuple[int, ...]:
        return tuple(a.params.area_id for a in self.areas)


@dataclass(frozen=True)
class AttackScenario:
    """Timed load-manipulation schedule.

    ``schedule`` maps an area id to a piecewise-constant level sequence
    [(time_s, dp_load_pu), ...]; the level of the latest entry at or before
    t applies.  ``dlaa_gain`` (dlaa_feedback kind only) maps an area id to
    the proportional gain K of the feedback d = -K * df, engaged from
    ``engage_time`` (defaults to ``attack_start``) onward.
    """

    kind: str
    schedule: dict[int, tuple[tuple[float, float], ...]] = field(default_factory=dict)
    dlaa_gain: dict[int, float] = field(default_factory=dict)
    attack_start: float = 30.0
    engage_time: float | None = None
    name: str = ""

    def __post_init__(self):
        if self.kind not in SCENARIO_KINDS:
            raise ValueError(f"unknown scenario kind {self.kind!r}")
        if self.attack_start < 0:
            raise ValueError("attack_start must be >= 0")
        sched = {aid: tuple((float(t), float(v)) for t, v in entries)
                 for aid, entries in self.schedule.items()}
        object.__setattr__(self, "schedule", sched)
        for aid, entries in sched.items():
            times = [t for t, _ in entries]
            if any(b < a for a, b in zip(times, times[1:])):
                raise ValueError(f"schedule times for area {aid} must be "
                                 "nondecreasing")
        if self.dlaa_gain and self.kind != "dlaa_feedback":
            raise ValueError("dlaa_gain is only valid for dlaa_feedback")
        if any(k < 0 for k in self.dlaa_gain.values()):
            raise ValueError("dlaa gains must be >= 0")


@dataclass(frozen=True)
class Trace:
    """Time-indexed record of one run; all series share the time grid and
    the first sample is the all-zero state.

    Per-area 2-d arrays are (n_samples, n_areas); ``dp_m``/``dp_g`` hold one
    (n_samples, n_gen) array per area.  ``dp_l`` is the injected load
    including any feedback component.
    """

    time: np.ndarray
    area_ids: tuple[int, ...]
    nominal_frequency: float
    df_pu: np.ndarray
    dp_tie: np.ndarray
    ace: np.ndarray
    dp_c: np.ndarray
    dp_l: np.ndarray
    dp_m: tuple[np.ndarray, ...]
    dp_g: tuple[np.ndarray, ...]
    diverged: bool = False

    @property
    def df_hz(self) -> np.ndarray:
        return self.df_pu * self.nominal_frequency

    @property
    def frequency_hz(self) -> np.ndarray:
        return self.nominal_frequency + self.df_hz

    @property
    def n_samples(self) -> int:
        return self.time.shape[0]

    @property
    def diverged_time(self) -> float | None:
        return float(self.time[-1]) if self.diverged else None


def build_system(areas: list[AreaParams], gains: list[PidGains], dt: float,
                 nominal_frequency: float = 60.0) -> SystemModel:
    """Assemble and discretize the full system.

    Checks the system-wide tie symmetry invariant: the coefficient area i
    stores for neighbour j must equal the one j stores for i.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if len(gains) != len(areas):
        raise ValueError("need one PidGains per area")
    ids = [a.area_id for a in areas]
    if len(set(ids)) != len(ids):
        raise ValueError("area ids must be unique")
    index = {aid: k for k, aid in enumerate(ids)}

    na = len(areas)
    tie = np.zeros((na, na))
    for i, ap in enumerate(areas):
        for j_id, t_ij in ap.tie_coefficients.items():
            if j_id not in index:
                raise ValueError(f"area {ap.area_id} references unknown "
                                 f"neighbour {j_id}")
            j = index[j_id]
            back = areas[j].tie_coefficients.get(ap.area_id)
            if back is None or abs(back - t_ij) > 1e-12 * max(1.0, abs(t_ij)):
                raise ValueError(
                    f"tie coefficient between areas {ap.area_id} and {j_id} "
                    "is not symmetric")
            tie[i, j] = t_ij

    built = []
    for ap, g in zip(areas, gains):
        mats = build_area_matrices(ap)
        b = np.hstack([mats.b1, mats.b2])
        ad, bd = zoh_discretize(mats.a, b, dt)
        built.append(SystemArea(params=ap, gains=g, matrices=mats,
                                ad=ad, b1d=bd[:, :2].copy(),
                                b2d=bd[:, 2].copy()))
    return SystemModel(areas=tuple(built), tie=tie, dt=dt,
                       nominal_frequency=nominal_frequency)


def coupling_input(system: SystemModel, area_index: int,
                   df_prev: np.ndarray) -> float:
    """Neighbour coupling v_i: tie-weighted sum of the other areas' df."""
    df_prev = np.asarray(df_prev, dtype=float)
    if df_prev.shape[0] != system.n_areas:
        raise ValueError("df vector length must equal the area count")
    return float(system.tie[area_index] @ df_prev)


def _schedule_array(system: SystemModel, scenario: AttackScenario,
                    n_steps: int) -> np.ndarray:
    sched = np.zeros((n_steps + 1, system.n_areas))
    index = {aid: k for k, aid in enumerate(system.area_ids)}
    t = np.arange(n_steps + 1) * system.dt
    for aid, entries in scenario.schedule.items():
        if aid not in index:
            raise ValueError(f"scenario schedules unknown area {aid}")
        col = index[aid]
        level = np.zeros(n_steps + 1)
        for when, value in entries:
            level[t >= when - 1e-12] = value
        sched[:, col] = level
    return sched


def simulate(system: SystemModel, scenario: AttackScenario,
             duration: float) -> Trace:
    """Run the coupled discrete-time loop over ``duration`` seconds.

    A state magnitude beyond :data:`DIVERGENCE_THRESHOLD` terminates the run
    early; the returned trace is truncated at that step and flagged
    ``diverged`` instead of propagating overflow.
    """
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration}")
    dt = system.dt
    n_steps = max(1, int(round(duration / dt)))
    na = system.n_areas
    dims = np.array([a.params.state_dim for a in system.areas], dtype=np.int64)
    md = int(dims.max())

    ad = np.zeros((na, md, md))
    b1d = np.zeros((na, md, 2))
    b2d = np.zeros((na, md))
    for i, a in enumerate(system.areas):
        n = dims[i]
        ad[i, :n, :n] = a.ad
        b1d[i, :n] = a.b1d
        b2d[i, :n] = a.b2d

    beta = np.array([a.beta for a in system.areas])
    kp = np.array([a.gains.kp for a in system.areas])
    ki = np.array([a.gains.ki for a in system.areas])
    kd = np.array([a.gains.kd for a in system.areas])
    out_lim = np.array([np.inf if a.gains.output_limit is None
                        else a.gains.output_limit for a in system.areas])
    bias = np.array([a.gains.bias for a in system.areas])

    sched = _schedule_array(system, scenario, n_steps)
    gain = np.zeros(na)
    index = {aid: k for k, aid in enumerate(system.area_ids)}
    for aid, k_lg in scenario.dlaa_gain.items():
        if aid not in index:
            raise ValueError(f"scenario attacks unknown area {aid}")
        gain[index[aid]] = k_lg
    engage = scenario.engage_time
    if engage is None:
        engage = scenario.attack_start
    engage_step = int(round(engage / dt)) if scenario.dlaa_gain else n_steps + 1

    x, u, diverged_step = kernels.lfc_loop(
        ad, b1d, b2d, dims, system.tie, beta, sched, gain, engage_step,
        kp, ki, kd, out_lim, bias, dt, n_steps, DIVERGENCE_THRESHOLD)

    last = n_steps if diverged_step < 0 else diverged_step
    x = x[:last + 1]
    u = u[:last + 1]
    sched = sched[:last + 1]
    time = np.arange(last + 1) * dt

    df = x[:, :, 0].copy()
    dp_tie = x[:, :, 1].copy()
    ace = beta * df + dp_tie
    dp_l = sched.copy()
    if scenario.dlaa_gain:
        steps = np.arange(last + 1)
        mask = steps >= engage_step
        dp_l[mask] = sched[mask] - gain * df[mask]
    n_gen = [(int(d) - 2) // 2 for d in dims]
    dp_m = tuple(x[:, i, 2:2 + n_gen[i]].copy() for i in range(na))
    dp_g = tuple(x[:, i, 2 + n_gen[i]:2 + 2 * n_gen[i]].copy()
                 for i in range(na))
    return Trace(time=time, area_ids=system.area_ids,
                 nominal_frequency=system.nominal_frequency,
                 df_pu=df, dp_tie=dp_tie, ace=ace, dp_c=u, dp_l=dp_l,
                 dp_m=dp_m, dp_g=dp_g, diverged=diverged_step >= 0)
