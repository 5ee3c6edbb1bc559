"""Continuous-time per-area state-space model of load frequency control.

One control area aggregates an equivalent inertia/damping pair with ``n``
turbine-governor chains.  The area state vector is ordered

    [df, dp_tie, dp_m_1 .. dp_m_n, dp_g_1 .. dp_g_n]

with ``df`` the frequency deviation (pu), ``dp_tie`` the total tie-line power
deviation, ``dp_m`` the turbine mechanical power outputs and ``dp_g`` the
governor valve positions.  Every other module depends on this ordering.

Units are per-unit on a single system base; angles are radians.  Conversion
to Hz happens only in :mod:`lfcsim.gridcode`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GeneratorParams",
    "AreaParams",
    "AreaMatrices",
    "compute_beta",
    "tie_coefficient",
    "build_area_matrices",
    "ace",
]

ALPHA_SUM_TOL = 1e-9


@dataclass(frozen=True)
class GeneratorParams:
    """Turbine-governor constants of one generating unit.

    ``droop`` is the primary-control characteristic R in pu frequency per pu
    power on the system base; ``participation`` is the unit's share of the
    area's secondary-control correction (zero for units outside LFC).
    """

    turbine_tc: float
    governor_tc: float
    droop: float
    participation: float = 0.0
    bus: int | None = None

    def __post_init__(self):
        if self.turbine_tc <= 0:
            raise ValueError(f"turbine_tc must be > 0, got {self.turbine_tc}")
        if self.governor_tc <= 0:
            raise ValueError(f"governor_tc must be > 0, got {self.governor_tc}")
        if self.droop <= 0:
            raise ValueError(f"droop must be > 0, got {self.droop}")
        if not 0.0 <= self.participation <= 1.0:
            raise ValueError(
                f"participation must lie in [0, 1], got {self.participation}")


@dataclass(frozen=True)
class AreaParams:
    """Physical constants of one LFC area.

    ``tie_coefficients`` maps a neighbouring area id to the synchronizing
    torque coefficient T_ij (pu power per rad).  Symmetry of T across the
    system is the responsibility of the system builder, which owns both
    sides of every tie.
    """

    damping: float
    inertia: float
    generators: tuple[GeneratorParams, ...]
    tie_coefficients: dict[int, float] = field(default_factory=dict)
    area_id: int = 0

    def __post_init__(self):
        if self.damping < 0:
            raise ValueError(f"damping must be >= 0, got {self.damping}")
        if self.inertia <= 0:
            raise ValueError(f"inertia must be > 0, got {self.inertia}")
        object.__setattr__(self, "generators", tuple(self.generators))
        if len(self.generators) == 0:
            raise ValueError("an area needs at least one generator")
        total = sum(g.participation for g in self.generators)
        if abs(total - 1.0) > ALPHA_SUM_TOL:
            raise ValueError(
                f"participation factors must sum to 1, got {total!r}")

    @property
    def n_gen(self) -> int:
        return len(self.generators)

    @property
    def state_dim(self) -> int:
        return 2 + 2 * self.n_gen


@dataclass(frozen=True)
class AreaMatrices:
    """Continuous-time state-space blocks of one area.

    ``a`` is (2+2n) square, ``b1`` maps the disturbance input
    w = [dp_load, v] (local load change and neighbour coupling), ``b2`` maps
    the controller output and ``c`` produces the area control error.
    """

    a: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    c: np.ndarray


def compute_beta(area: AreaParams) -> float:
    """Frequency bias factor: damping plus the aggregate droop reciprocal."""
    return area.damping + sum(1.0 / g.droop for g in area.generators)


def tie_coefficient(v_i: float, v_j: float, x_ij: float,
                    delta_i0: float = 0.0, delta_j0: float = 0.0) -> float:
    """Synchronizing torque coefficient of a tie-line.

    ``v_i``, ``v_j`` are terminal voltage magnitudes (pu), ``x_ij`` the line
    reactance (pu) and ``delta_i0``/``delta_j0`` the equilibrium voltage
    angles (rad).
    """
    if x_ij == 0:
        raise ValueError("tie reactance must be nonzero")
    return abs(v_i) * abs(v_j) / x_ij * math.cos(delta_i0 - delta_j0)


def build_area_matrices(area: AreaParams) -> AreaMatrices:
    """Assemble the (A, B1, B2, C) blocks of one area.

    Entry layout (n generators, rows/cols 0..2n+1):
      row 0: frequency deviation; row 1: tie-line power;
      rows 2..n+1: turbines; rows n+2..2n+1: governors.
    """
    n = area.n_gen
    dim = area.state_dim
    two_h = 2.0 * area.inertia
    tie_sum = sum(area.tie_coefficients.values())

    a = np.zeros((dim, dim))
    a[0, 0] = -area.damping / two_h
    a[0, 1] = -1.0 / two_h
    a[1, 0] = 2.0 * math.pi * tie_sum
    for k, g in enumerate(area.generators):
        mrow = 2 + k
        grow = 2 + n + k
        a[0, mrow] = 1.0 / two_h
        a[mrow, mrow] = -1.0 / g.turbine_tc
        a[mrow, grow] = 1.0 / g.turbine_tc
        a[grow, 0] = -1.0 / (g.governor_tc * g.droop)
        a[grow, grow] = -1.0 / g.governor_tc

    b1 = np.zeros((dim, 2))
    b1[0, 0] = -1.0 / two_h
    b1[1, 1] = -2.0 * math.pi

    b2 = np.zeros((dim, 1))
    for k, g in enumerate(area.generators):
        b2[2 + n + k, 0] = g.participation / g.governor_tc

    c = np.zeros((1, dim))
    c[0, 0] = compute_beta(area)
    c[0, 1] = 1.0
    return AreaMatrices(a=a, b1=b1, b2=b2, c=c)


def ace(beta: float, df: float, dp_tie: float) -> float:
    """Area control error: beta * df + dp_tie."""
    return beta * df + dp_tie
