"""Bus-level network model for load-altering-attack analysis.

States are generator rotor angles (delta), load-bus voltage angles (theta)
and generator frequency deviations (omega).  The model is built in
descriptor form (singular mass matrix, the load-bus rows being algebraic
power balances), then reduced to an ordinary state space over [delta, omega]
by eliminating theta.  A dynamic attack feeds the vulnerable load at chosen
buses proportionally to a sensed generator frequency, which enters the
reduced system matrix and can move its eigenvalues.

Coupling uses lossless susceptance blocks: H entries are 1/X for connected
bus pairs and zero otherwise, with zero diagonals; the row-sum diagonals
supply the Laplacian structure where the equations need it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .sim import DIVERGENCE_THRESHOLD

__all__ = [
    "NetworkModel",
    "ReducedNetwork",
    "NetworkTrace",
    "row_sum_diag",
    "build_network_model",
    "build_descriptor",
    "kron_reduce",
    "attack_matrix",
    "simulate_network",
    "ac_injection",
    "nearest_generator_map",
]


def row_sum_diag(m) -> np.ndarray:
    """Diagonal matrix of row sums."""
    a = np.asarray(m, dtype=float)
    return np.diag(a.sum(axis=1))


@dataclass(frozen=True)
class NetworkModel:
    """Generator/load bus network with swing and control constants.

    ``h_*`` are the susceptance-coupling blocks (generator-generator,
    generator-load, load-generator, load-load); ``m``, ``d_g``, ``k_p`` and
    ``k_i`` are the per-generator inertia, damping, primary and secondary
    control diagonals (as vectors); ``p_ls`` is the secure load and ``k_lg``
    the dynamic-attack gain per load bus.  ``sensor_gen[l]`` is the index of
    the generator whose frequency the (potentially corrupted) load at bus l
    reacts to.
    """

    h_gg: np.ndarray
    h_gl: np.ndarray
    h_lg: np.ndarray
    h_ll: np.ndarray
    m: np.ndarray
    d_g: np.ndarray
    k_p: np.ndarray
    k_i: np.ndarray
    p_ls: np.ndarray
    k_lg: np.ndarray
    sensor_gen: np.ndarray
    gen_buses: tuple[int, ...] = ()
    load_buses: tuple[int, ...] = ()

    def __post_init__(self):
        ng, nl = self.n_gen, self.n_load
        if self.h_gg.shape != (ng, ng):
            raise ValueError("h_gg must be square over the generator buses")
        if self.h_gl.shape != (ng, nl) or self.h_lg.shape != (nl, ng):
            raise ValueError("h_gl/h_lg dimensions are inconsistent")
        if self.h_ll.shape != (nl, nl):
            raise ValueError("h_ll must be square over the load buses")
        if not np.array_equal(self.h_lg, self.h_gl.T):
            raise ValueError("h_lg must equal the transpose of h_gl")
        for name in ("d_g", "k_p", "k_i"):
            v = getattr(self, name)
            if v.shape != (ng,) or np.any(v < 0):
                raise ValueError(f"{name} must be a nonnegative vector over "
                                 "the generators")
        if self.m.shape != (ng,) or np.any(self.m <= 0):
            raise ValueError("m must be a positive vector over the generators")
        for name in ("p_ls", "k_lg"):
            v = getattr(self, name)
            if v.shape != (nl,):
                raise ValueError(f"{name} must be a vector over the load buses")
        if np.any(self.k_lg < 0):
            raise ValueError("k_lg must be nonnegative")
        if self.sensor_gen.shape != (nl,) or np.any(self.sensor_gen < 0) \
                or np.any(self.sensor_gen >= ng):
            raise ValueError("sensor_gen must map every load bus to a "
                             "generator index")

    @property
    def n_gen(self) -> int:
        return self.m.shape[0]

    @property
    def n_load(self) -> int:
        return self.p_ls.shape[0]

    def with_k_lg(self, k_lg: np.ndarray) -> "NetworkModel":
        return NetworkModel(
            h_gg=self.h_gg, h_gl=self.h_gl, h_lg=self.h_lg, h_ll=self.h_ll,
            m=self.m, d_g=self.d_g, k_p=self.k_p, k_i=self.k_i,
            p_ls=self.p_ls, k_lg=np.asarray(k_lg, dtype=float),
            sensor_gen=self.sensor_gen, gen_buses=self.gen_buses,
            load_buses=self.load_buses)


@dataclass(frozen=True)
class ReducedNetwork:
    """Ordinary state space over [delta, omega] after theta elimination.

    ``a_prime`` is 2n_gen square; ``b_prime`` maps per-load-bus power to the
    state derivatives; ``h_inv`` is the inverse of the load-bus reduction
    block, kept for attack-matrix assembly.
    """

    a_prime: np.ndarray
    b_prime: np.ndarray
    h_inv: np.ndarray
    sensor_gen: np.ndarray

    @property
    def n_gen(self) -> int:
        return self.a_prime.shape[0] // 2

    @property
    def n_load(self) -> int:
        return self.b_prime.shape[1]


@dataclass(frozen=True)
class NetworkTrace:
    time: np.ndarray
    delta: np.ndarray
    omega: np.ndarray
    diverged: bool = False


def nearest_generator_map(branches, gen_buses, load_buses) -> dict[int, int]:
    """Nearest generator bus (by hop count, ties to the lowest bus id) for
    every load bus; used as the default frequency-sensing assignment."""
    adj: dict[int, set[int]] = {}
    for f, t, *_ in branches:
        adj.setdefault(f, set()).add(t)
        adj.setdefault(t, set()).add(f)
    gens = set(gen_buses)
    result = {}
    for lb in load_buses:
        seen = {lb}
        frontier = deque([lb])
        found = None
        while frontier and found is None:
            level = sorted(frontier)
            frontier = deque()
            hits = [b for b in level if b in gens]
            if hits:
                found = min(hits)
                break
            for b in level:
                for nb in adj.get(b, ()):
                    if nb not in seen:
                        seen.add(nb)
                        frontier.append(nb)
        if found is None:
            raise ValueError(f"load bus {lb} is not connected to any "
                             "generator bus")
        result[lb] = found
    return result


def build_network_model(branches, gen_buses, inertia, damping, primary_gain,
                        integral_gain, loads, sensors=None) -> NetworkModel:
    """Assemble a :class:`NetworkModel` from branch and per-bus data.

    ``branches`` is an iterable of (from_bus, to_bus, reactance_pu);
    ``inertia``/``damping``/``primary_gain``/``integral_gain`` map generator
    bus ids to constants; ``loads`` maps load bus ids to secure load (pu).
    ``sensors`` optionally overrides the nearest-generator frequency-sensing
    default per load bus.
    """
    gen_buses = sorted(gen_buses)
    bus_set = set()
    for f, t, x in branches:
        if x == 0:
            raise ValueError(f"branch {f}-{t} has zero reactance")
        bus_set.update((f, t))
    bus_set.update(gen_buses)
    bus_set.update(loads)
    load_buses = sorted(b for b in bus_set if b not in set(gen_buses))
    ng, nl = len(gen_buses), len(load_buses)
    pos = {b: i for i, b in enumerate(gen_buses + load_buses)}

    h = np.zeros((ng + nl, ng + nl))
    for f, t, x in branches:
        w = 1.0 / x
        h[pos[f], pos[t]] += w
        h[pos[t], pos[f]] += w
    np.fill_diagonal(h, 0.0)

    def gen_vec(mapping, name):
        try:
            return np.array([float(mapping[b]) for b in gen_buses])
        except KeyError as exc:
            raise ValueError(f"{name} missing for generator bus {exc}") from exc

    p_ls = np.array([float(loads.get(b, 0.0)) for b in load_buses])
    sensor_map = nearest_generator_map(branches, gen_buses, load_buses)
    if sensors:
        for lb, gb in sensors.items():
            if lb not in sensor_map:
                raise ValueError(f"sensor assigned to unknown load bus {lb}")
            if gb not in set(gen_buses):
                raise ValueError(f"load bus {lb} senses unknown generator "
                                 f"bus {gb}")
            sensor_map[lb] = gb
    gidx = {b: i for i, b in enumerate(gen_buses)}
    sensor = np.array([gidx[sensor_map[b]] for b in load_buses], dtype=np.int64)

    return NetworkModel(
        h_gg=h[:ng, :ng].copy(), h_gl=h[:ng, ng:].copy(),
        h_lg=h[ng:, :ng].copy(), h_ll=h[ng:, ng:].copy(),
        m=gen_vec(inertia, "inertia"), d_g=gen_vec(damping, "damping"),
        k_p=gen_vec(primary_gain, "primary_gain"),
        k_i=gen_vec(integral_gain, "integral_gain"),
        p_ls=p_ls, k_lg=np.zeros(nl), sensor_gen=sensor,
        gen_buses=tuple(gen_buses), load_buses=tuple(load_buses))


def build_descriptor(net: NetworkModel):
    """Descriptor form (E, A, B) over [delta, theta, omega].

    The middle block row of E is zero: the load-bus angle equations are
    algebraic power balances, so E is singular by construction.
    """
    ng, nl = net.n_gen, net.n_load
    dim = 2 * ng + nl
    e = np.zeros((dim, dim))
    e[:ng, :ng] = np.eye(ng)
    e[ng + nl:, ng + nl:] = -np.diag(net.m)

    a = np.zeros((dim, dim))
    a[:ng, ng + nl:] = np.eye(ng)
    a[ng:ng + nl, :ng] = -net.h_lg
    a[ng:ng + nl, ng:ng + nl] = (row_sum_diag(net.h_lg)
                                 + row_sum_diag(net.h_ll) - net.h_ll)
    a[ng + nl:, :ng] = (np.diag(net.k_i) + row_sum_diag(net.h_gg)
                        - net.h_gg + row_sum_diag(net.h_gl))
    a[ng + nl:, ng:ng + nl] = -net.h_gl
    a[ng + nl:, ng + nl:] = np.diag(net.k_p) + np.diag(net.d_g)

    b = np.zeros((dim, nl))
    b[ng:ng + nl] = np.eye(nl)
    return e, a, b


def kron_reduce(net: NetworkModel) -> ReducedNetwork:
    """Eliminate the load-bus angles: theta = H_inv (H_LG delta - P_L).

    Returns the 2 n_gen order system over [delta, omega] whose load-power
    input channel acts through M^-1 H_GL H_inv on the omega block.
    """
    s = row_sum_diag(net.h_lg) + row_sum_diag(net.h_ll) - net.h_ll
    try:
        h_inv = np.linalg.inv(s)
    except np.linalg.LinAlgError as exc:
        raise ValueError(
            "load-bus reduction block H_LG^1 + H_LL^1 - H_LL is singular; "
            "check network connectivity") from exc

    ng = net.n_gen
    m_inv = 1.0 / net.m
    stiff = (net.h_gg - row_sum_diag(net.h_gg) - row_sum_diag(net.h_gl)
             + net.h_gl @ h_inv @ net.h_lg - np.diag(net.k_i))
    damp = np.diag(net.k_p + net.d_g)

    a = np.zeros((2 * ng, 2 * ng))
    a[:ng, ng:] = np.eye(ng)
    a[ng:, :ng] = m_inv[:, None] * stiff
    a[ng:, ng:] = -(m_inv[:, None] * damp)

    b = np.zeros((2 * ng, net.n_load))
    b[ng:] = m_inv[:, None] * (net.h_gl @ h_inv)
    return ReducedNetwork(a_prime=a, b_prime=b, h_inv=h_inv,
                          sensor_gen=net.sensor_gen.copy())


def _feedback_block(reduced: ReducedNetwork, k_lg: np.ndarray) -> np.ndarray:
    """The [0, -K] feedback matrix mapping [delta, omega] to per-load attack
    power; row l has -k_lg[l] in the sensed generator's omega column."""
    ng, nl = reduced.n_gen, reduced.n_load
    fb = np.zeros((nl, 2 * ng))
    fb[np.arange(nl), ng + reduced.sensor_gen] = -k_lg
    return fb


def attack_matrix(reduced: ReducedNetwork, k_lg) -> np.ndarray:
    """System matrix under dynamic attack: A* = A' + B' [0, -K_LG]."""
    k_lg = np.asarray(k_lg, dtype=float)
    if k_lg.shape != (reduced.n_load,):
        raise ValueError(f"k_lg must have one entry per load bus "
                         f"({reduced.n_load}), got shape {k_lg.shape}")
    return reduced.a_prime + reduced.b_prime @ _feedback_block(reduced, k_lg)


def simulate_network(a_star, b_in, p_ls, eps_schedule, dt: float,
                     duration: float, x0=None) -> NetworkTrace:
    """Fixed-step RK4 integration of x' = A* x + B_in (P_LS + eps(t)).

    ``eps_schedule`` maps a load index to a piecewise-constant level
    sequence [(time_s, pu), ...]; the input is held constant within each
    step.  Divergence terminates the run with a truncated, flagged trace.
    """
    if dt <= 0 or duration <= 0:
        raise ValueError("dt and duration must be positive")
    a_star = np.asarray(a_star, dtype=float)
    b_in = np.asarray(b_in, dtype=float)
    p_ls = np.asarray(p_ls, dtype=float)
    n_steps = max(1, int(round(duration / dt)))
    t = np.arange(n_steps) * dt

    load = np.tile(p_ls, (n_steps, 1))
    for li, entries in (eps_schedule or {}).items():
        level = np.zeros(n_steps)
        for when, value in entries:
            level[t >= when - 1e-12] = value
        load[:, li] += level
    u_steps = load @ b_in.T

    ng = a_star.shape[0] // 2
    x_init = np.zeros(a_star.shape[0]) if x0 is None else np.asarray(x0, float)
    x, diverged_step = kernels.rk4_lti_loop(a_star, u_steps, x_init, dt,
                                            DIVERGENCE_THRESHOLD)
    last = n_steps if diverged_step < 0 else diverged_step
    x = x[:last + 1]
    time = np.arange(last + 1) * dt
    return NetworkTrace(time=time, delta=x[:, :ng].copy(),
                        omega=x[:, ng:].copy(), diverged=diverged_step >= 0)


def ac_injection(i: int, u, theta, g, b) -> float:
    """Active power injected at bus i for given voltage magnitudes/angles
    and conductance/susceptance matrices."""
    u = np.asarray(u, dtype=float)
    theta = np.asarray(theta, dtype=float)
    g = np.asarray(g, dtype=float)
    b = np.asarray(b, dtype=float)
    n = u.shape[0]
    if theta.shape != (n,) or g.shape != (n, n) or b.shape != (n, n):
        raise ValueError("inconsistent dimensions for the injection "
                         "evaluation")
    dth = theta[i] - theta
    return float(u[i] * np.sum(u * (g[i] * np.cos(dth) + b[i] * np.sin(dth))))
