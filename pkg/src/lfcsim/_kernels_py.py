"""Pure-numpy fallback for the hot stepping loops.

Semantics are kept in lockstep with the compiled versions in
``_stepkernels.pyx``; the equivalence is covered by tests.  These loops run
one Python iteration per time step, which is the dominant cost of a
simulation when the extension is unavailable.
"""

from __future__ import annotations

import numpy as np


def lfc_loop(ad, b1d, b2d, dims, tie, beta, sched, dlaa_gain, engage_step,
             kp, ki, kd, out_lim, bias, dt, n_steps, div_threshold):
    """Advance the coupled multi-area LFC system over a fixed grid.

    Shapes: ``ad`` (na, md, md) with only the leading (dims[i], dims[i])
    block of area i meaningful, ``b1d`` (na, md, 2), ``b2d`` (na, md),
    ``sched`` (n_steps+1, na) load levels at each grid time, ``tie`` the
    symmetric coefficient matrix with zero diagonal.

    Returns ``(X, U, diverged_step)`` where X is (n_steps+1, na, md), U the
    controller outputs per grid time and diverged_step the first step index
    whose state magnitude crossed ``div_threshold`` (-1 if none).  Rows of
    X and U past a divergence are left at zero.
    """
    na = ad.shape[0]
    md = ad.shape[1]
    x = np.zeros((n_steps + 1, na, md))
    u = np.zeros((n_steps + 1, na))
    integ = np.zeros(na)
    prev = np.zeros(na)
    diverged = -1

    for k in range(n_steps + 1):
        df = x[k, :, 0]
        acev = beta * df + x[k, :, 1]

        tent = integ + acev * dt
        deriv = (acev - prev) / dt
        raw = -(kp * acev + ki * tent + kd * deriv) + bias
        clamped = np.abs(raw) > out_lim
        uk = np.where(clamped, np.copysign(out_lim, raw), raw)
        integ = np.where(clamped, integ, tent)
        prev = acev.copy()
        u[k] = uk

        if k == n_steps:
            break
        v = tie @ df
        d = sched[k].copy()
        if k >= engage_step:
            d -= dlaa_gain * df
        blown = False
        for i in range(na):
            n = dims[i]
            xi = ad[i, :n, :n] @ x[k, i, :n]
            xi += b1d[i, :n, 0] * d[i] + b1d[i, :n, 1] * v[i]
            xi += b2d[i, :n] * uk[i]
            x[k + 1, i, :n] = xi
            if np.abs(xi).max() > div_threshold:
                blown = True
        if blown:
            diverged = k + 1
            x[k + 2:] = 0.0
            break
    return x, u, diverged


def rk4_lti_loop(a, u_steps, x0, dt, div_threshold):
    """Classic fixed-step RK4 for ``x' = A x + u(t)`` with per-step constant u.

    ``u_steps`` is (n_steps, n); returns ``(X, diverged_step)`` with X of
    shape (n_steps+1, n).
    """
    n_steps = u_steps.shape[0]
    n = a.shape[0]
    x = np.zeros((n_steps + 1, n))
    x[0] = x0
    diverged = -1
    h = dt
    for k in range(n_steps):
        uk = u_steps[k]
        xk = x[k]
        k1 = a @ xk + uk
        k2 = a @ (xk + 0.5 * h * k1) + uk
        k3 = a @ (xk + 0.5 * h * k2) + uk
        k4 = a @ (xk + h * k3) + uk
        xn = xk + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        x[k + 1] = xn
        if np.abs(xn).max() > div_threshold:
            diverged = k + 1
            x[k + 2:] = 0.0
            break
    return x, diverged
