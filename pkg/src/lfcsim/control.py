"""Discrete-time LFC controller: PID on the area control error.

Sign convention: positive ACE (over-frequency or over-export) commands a
generation decrease, so the controller output is the negated PID sum.  The
pure-integral configuration (kp = kd = 0) matches the usual real-time AGC
setup; ``bias`` is an optional constant trim added to the output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["PidGains", "ControllerState", "controller_step"]


@dataclass(frozen=True)
class PidGains:
    kp: float = 0.0
    ki: float = 0.0
    kd: float = 0.0
    output_limit: float | None = None
    bias: float = 0.0

    def __post_init__(self):
        for name in ("kp", "ki", "kd"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.output_limit is not None and self.output_limit <= 0:
            raise ValueError("output_limit must be > 0 when set")

    @property
    def active(self) -> bool:
        return self.kp > 0 or self.ki > 0 or self.kd > 0


@dataclass(frozen=True)
class ControllerState:
    """Integrator and previous-error memory; all-zero at simulation start."""

    integral: float = 0.0
    previous_error: float = 0.0


def controller_step(gains: PidGains, state: ControllerState,
                    ace: float, dt: float) -> tuple[float, ControllerState]:
    """One controller update; returns (output, new state).

    Integral by rectangle rule, derivative by backward difference.
    Anti-windup: while the output is clamped at the limit the integrator
    does not accumulate.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    integral = state.integral + ace * dt
    derivative = (ace - state.previous_error) / dt
    out = -(gains.kp * ace + gains.ki * integral + gains.kd * derivative)
    out += gains.bias
    if gains.output_limit is not None and abs(out) > gains.output_limit:
        out = math.copysign(gains.output_limit, out)
        integral = state.integral
    return out, ControllerState(integral=integral, previous_error=ace)
