"""Eigenvalue-based stability study of the attack-modified network.

A sweep rebuilds the attack matrix for each value of one swept parameter
(attack gain at chosen load buses, or a generator's inertia, damping,
primary or secondary gain), computes the full spectrum and issues a
stable/unstable verdict.  The first verdict flip is refined to a critical
parameter value; countermeasure searches bisect for the minimal parameter
increase that restores stability under a fixed attack.

The swing-equation reference mode (uniform rotation of all angles) sits at
zero when no generator carries integral control; the default verdict
tolerance of 1e-9 masks it instead of deflating it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ConvergenceError
from .network import NetworkModel, attack_matrix, kron_reduce
from .numerics import Spectrum, eigenvalues

__all__ = [
    "STABILITY_TOL",
    "LocusPoint",
    "SweepReport",
    "stability_verdict",
    "sweep_parameter",
    "countermeasure_search",
    "sweep_grid",
    "parse_parameter_id",
]

STABILITY_TOL = 1e-9

#: search caps for countermeasure bisection, per parameter kind
SEARCH_CAPS = {"D_G": 50.0, "K_P": 50.0, "K_I": 1000.0, "M": 60.0, "K_LG": 0.0}

_PARAM_RE = re.compile(r"^(K_LG|D_G|K_P|K_I|M)@([0-9]+(?:,[0-9]+)*)$")


@dataclass(frozen=True)
class LocusPoint:
    value: float
    spectrum: Spectrum
    stable: bool


@dataclass(frozen=True)
class SweepReport:
    parameter: str
    locus: tuple[LocusPoint, ...]
    critical_value: float | None = None
    #: eigenvalues reordered so index i tracks one branch across the locus
    paired_values: np.ndarray | None = field(default=None, compare=False)


def stability_verdict(spectrum: Spectrum, tolerance: float = STABILITY_TOL) -> bool:
    """True when no eigenvalue's real part exceeds ``tolerance``."""
    if tolerance < 0:
        raise ValueError("tolerance must be >= 0")
    return spectrum.max_real() <= tolerance


def parse_parameter_id(parameter: str) -> tuple[str, tuple[int, ...]]:
    """Split a sweep target like ``"K_LG@8,20"`` or ``"D_G@34"`` into the
    parameter kind and the targeted bus ids."""
    m = _PARAM_RE.match(parameter)
    if not m:
        raise ValueError(
            f"cannot parse parameter id {parameter!r}; expected "
            "<K_LG|M|D_G|K_P|K_I>@<bus>[,<bus>...]")
    kind = m.group(1)
    buses = tuple(int(b) for b in m.group(2).split(","))
    if kind != "K_LG" and len(buses) != 1:
        raise ValueError(f"{kind} sweeps target exactly one generator bus")
    return kind, buses


def _apply_parameter(net: NetworkModel, kind: str, buses: tuple[int, ...],
                     value: float) -> NetworkModel:
    """Network with the swept parameter set to ``value`` (absolute for the
    attack gain, absolute per-generator constant otherwise)."""
    if kind == "K_LG":
        k_lg = net.k_lg.copy()
        for b in buses:
            try:
                k_lg[net.load_buses.index(b)] = value
            except ValueError as exc:
                raise ValueError(f"{b} is not a load bus") from exc
        return net.with_k_lg(k_lg)
    try:
        g = net.gen_buses.index(buses[0])
    except ValueError as exc:
        raise ValueError(f"{buses[0]} is not a generator bus") from exc
    fields = {"M": "m", "D_G": "d_g", "K_P": "k_p", "K_I": "k_i"}
    vec = getattr(net, fields[kind]).copy()
    vec[g] = value
    kwargs = dict(h_gg=net.h_gg, h_gl=net.h_gl, h_lg=net.h_lg, h_ll=net.h_ll,
                  m=net.m, d_g=net.d_g, k_p=net.k_p, k_i=net.k_i,
                  p_ls=net.p_ls, k_lg=net.k_lg, sensor_gen=net.sensor_gen,
                  gen_buses=net.gen_buses, load_buses=net.load_buses)
    kwargs[fields[kind]] = vec
    return NetworkModel(**kwargs)


def _spectrum_at(net: NetworkModel, kind: str, buses: tuple[int, ...],
                 value: float, ordering_seed: int = 0) -> Spectrum:
    modified = _apply_parameter(net, kind, buses, value)
    a_star = attack_matrix(kron_reduce(modified), modified.k_lg)
    return eigenvalues(a_star, ordering_seed=ordering_seed)


def _refine_crossing(evaluate, lo, m_lo, hi, m_hi, tolerance,
                     rel_tol=1e-3) -> float:
    """Root of max-real-part(value) - tolerance inside [lo, hi] by regula
    falsi with bisection safeguards, to ``rel_tol`` relative width."""
    f_lo = m_lo - tolerance
    f_hi = m_hi - tolerance
    for _ in range(200):
        span = hi - lo
        if span <= rel_tol * max(abs(hi), rel_tol):
            break
        if f_hi != f_lo:
            mid = lo - f_lo * span / (f_hi - f_lo)
            if not lo + 0.05 * span < mid < hi - 0.05 * span:
                mid = 0.5 * (lo + hi)
        else:
            mid = 0.5 * (lo + hi)
        f_mid = evaluate(mid) - tolerance
        if (f_mid > 0) == (f_hi > 0):
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def _pair_locus(spectra: list[Spectrum]) -> np.ndarray:
    """Reorder each spectrum to continue the branch of the previous one
    (optimal assignment on complex distance); returns (n_points, order)."""
    n = spectra[0].order
    out = np.zeros((len(spectra), n), dtype=complex)
    out[0] = spectra[0].values
    for k in range(1, len(spectra)):
        cost = np.abs(out[k - 1][:, None] - spectra[k].values[None, :])
        _, cols = linear_sum_assignment(cost)
        out[k] = spectra[k].values[cols]
    return out


def sweep_parameter(net: NetworkModel, parameter: str, values,
                    tolerance: float = STABILITY_TOL,
                    ordering_seed: int = 0) -> SweepReport:
    """Spectrum and verdict for each parameter value, in order.

    ``values`` must be nonempty and sorted ascending.  When the verdict
    flips between adjacent grid points the crossing is refined to 1e-3
    relative and reported as ``critical_value``.
    """
    values = [float(v) for v in values]
    if not values:
        raise ValueError("values must be nonempty")
    if any(b < a for a, b in zip(values, values[1:])):
        raise ValueError("values must be sorted ascending")
    kind, buses = parse_parameter_id(parameter)

    locus = []
    spectra = []
    for v in values:
        try:
            spec = _spectrum_at(net, kind, buses, v, ordering_seed)
        except ConvergenceError as exc:
            raise ConvergenceError(
                f"eigenvalue solve failed at {parameter}={v}: {exc}") from exc
        spectra.append(spec)
        locus.append(LocusPoint(value=v, spectrum=spec,
                                stable=stability_verdict(spec, tolerance)))

    critical = None
    for prev, cur in zip(locus, locus[1:]):
        if prev.stable != cur.stable:
            critical = _refine_crossing(
                lambda v: _spectrum_at(net, kind, buses, v,
                                       ordering_seed).max_real(),
                prev.value, prev.spectrum.max_real(),
                cur.value, cur.spectrum.max_real(), tolerance)
            break
    return SweepReport(parameter=parameter, locus=tuple(locus),
                       critical_value=critical,
                       paired_values=_pair_locus(spectra))


def sweep_grid(lo: float, hi: float, n: int) -> np.ndarray:
    """Sweep grid: log-spaced when the positive range spans more than two
    decades, linear otherwise."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return np.array([float(lo)])
    if lo > 0 and hi / lo > 100.0:
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def countermeasure_search(net: NetworkModel, attack_k_lg,
                          candidates, tolerance: float = STABILITY_TOL,
                          caps: dict[str, float] | None = None):
    """Minimal stabilizing value per candidate parameter id under a fixed
    attack, or None when even the search cap does not restore stability.

    ``attack_k_lg`` is the per-load-bus gain vector of the attack; the
    baseline with this attack must be unstable.  A candidate ``K_LG@...``
    entry searches downward to the gain removal point (always succeeds on a
    stable baseline).
    """
    attacked = net.with_k_lg(np.asarray(attack_k_lg, dtype=float))
    base_spec = eigenvalues(attack_matrix(kron_reduce(attacked),
                                          attacked.k_lg))
    if stability_verdict(base_spec, tolerance):
        raise ValueError("the supplied attack leaves the system stable; "
                         "nothing to counter")
    caps = {**SEARCH_CAPS, **(caps or {})}

    results = []
    for parameter in candidates:
        kind, buses = parse_parameter_id(parameter)
        if kind == "K_LG":
            # removing the attack restores the stable baseline
            value = 0.0
            spec = _spectrum_at(attacked, kind, buses, value)
            results.append((parameter,
                            value if stability_verdict(spec, tolerance)
                            else None))
            continue
        gi = attacked.gen_buses.index(buses[0])
        base_val = {"M": attacked.m, "D_G": attacked.d_g,
                    "K_P": attacked.k_p, "K_I": attacked.k_i}[kind][gi]
        cap = base_val + caps[kind]
        spec_cap = _spectrum_at(attacked, kind, buses, cap)
        if not stability_verdict(spec_cap, tolerance):
            results.append((parameter, None))
            continue
        lo, hi = base_val, cap
        m_lo = base_spec.max_real()
        m_hi = spec_cap.max_real()
        value = _refine_crossing(
            lambda v: _spectrum_at(attacked, kind, buses, v).max_real(),
            lo, m_lo, hi, m_hi, tolerance)
        # report the first value on the stable side of the bracket
        if _spectrum_at(attacked, kind, buses, value).max_real() > tolerance:
            value = value + 1e-3 * max(abs(value), 1e-3)
        results.append((parameter, float(value)))
    return results
