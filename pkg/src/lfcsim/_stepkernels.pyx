# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled stepping kernels; semantics mirror ``_kernels_py`` exactly.

The LFC loop advances every area's discretized state with the controller
and attack logic inlined; the RK4 loop integrates the reduced network
model.  Both run one C iteration per time step, which is what makes long
runs cheap compared to the Python fallback.
"""

import numpy as np

from libc.math cimport copysign, fabs


def lfc_loop(double[:, :, ::1] ad, double[:, :, ::1] b1d, double[:, ::1] b2d,
             long[::1] dims, double[:, ::1] tie, double[::1] beta,
             double[:, ::1] sched, double[::1] dlaa_gain, long engage_step,
             double[::1] kp, double[::1] ki, double[::1] kd,
             double[::1] out_lim, double[::1] bias, double dt, long n_steps,
             double div_threshold):
    cdef long na = ad.shape[0]
    cdef long md = ad.shape[1]
    x_arr = np.zeros((n_steps + 1, na, md))
    u_arr = np.zeros((n_steps + 1, na))
    cdef double[:, :, ::1] x = x_arr
    cdef double[:, ::1] u = u_arr
    cdef double[::1] integ = np.zeros(na)
    cdef double[::1] prev = np.zeros(na)
    cdef double[::1] acev = np.zeros(na)
    cdef double[::1] v = np.zeros(na)
    cdef double[::1] d = np.zeros(na)
    cdef long diverged = -1
    cdef long k, i, j, r, n
    cdef double tent, deriv, raw, uk, s, amax
    cdef bint blown

    for k in range(n_steps + 1):
        for i in range(na):
            acev[i] = beta[i] * x[k, i, 0] + x[k, i, 1]
            tent = integ[i] + acev[i] * dt
            deriv = (acev[i] - prev[i]) / dt
            raw = -(kp[i] * acev[i] + ki[i] * tent + kd[i] * deriv) + bias[i]
            if fabs(raw) > out_lim[i]:
                uk = copysign(out_lim[i], raw)
            else:
                uk = raw
                integ[i] = tent
            prev[i] = acev[i]
            u[k, i] = uk
        if k == n_steps:
            break
        for i in range(na):
            s = 0.0
            for j in range(na):
                s += tie[i, j] * x[k, j, 0]
            v[i] = s
            d[i] = sched[k, i]
            if k >= engage_step:
                d[i] -= dlaa_gain[i] * x[k, i, 0]
        blown = False
        for i in range(na):
            n = dims[i]
            amax = 0.0
            for r in range(n):
                s = 0.0
                for j in range(n):
                    s += ad[i, r, j] * x[k, i, j]
                s += b1d[i, r, 0] * d[i] + b1d[i, r, 1] * v[i]
                s += b2d[i, r] * u[k, i]
                x[k + 1, i, r] = s
                if fabs(s) > amax:
                    amax = fabs(s)
            if amax > div_threshold:
                blown = True
        if blown:
            diverged = k + 1
            x_arr[k + 2:] = 0.0
            break
    return x_arr, u_arr, diverged


def rk4_lti_loop(double[:, ::1] a, double[:, ::1] u_steps, double[::1] x0,
                 double dt, double div_threshold):
    cdef long n_steps = u_steps.shape[0]
    cdef long n = a.shape[0]
    x_arr = np.zeros((n_steps + 1, n))
    cdef double[:, ::1] x = x_arr
    cdef double[::1] k1 = np.zeros(n)
    cdef double[::1] k2 = np.zeros(n)
    cdef double[::1] k3 = np.zeros(n)
    cdef double[::1] k4 = np.zeros(n)
    cdef double[::1] xt = np.zeros(n)
    cdef long diverged = -1
    cdef long k, r, j
    cdef double s, xn, amax
    cdef double h = dt

    for r in range(n):
        x[0, r] = x0[r]
    for k in range(n_steps):
        for r in range(n):
            s = 0.0
            for j in range(n):
                s += a[r, j] * x[k, j]
            k1[r] = s + u_steps[k, r]
        for r in range(n):
            xt[r] = x[k, r] + 0.5 * h * k1[r]
        for r in range(n):
            s = 0.0
            for j in range(n):
                s += a[r, j] * xt[j]
            k2[r] = s + u_steps[k, r]
        for r in range(n):
            xt[r] = x[k, r] + 0.5 * h * k2[r]
        for r in range(n):
            s = 0.0
            for j in range(n):
                s += a[r, j] * xt[j]
            k3[r] = s + u_steps[k, r]
        for r in range(n):
            xt[r] = x[k, r] + h * k3[r]
        for r in range(n):
            s = 0.0
            for j in range(n):
                s += a[r, j] * xt[j]
            k4[r] = s + u_steps[k, r]
        amax = 0.0
        for r in range(n):
            xn = x[k, r] + (h / 6.0) * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r]
                                        + k4[r])
            x[k + 1, r] = xn
            if fabs(xn) > amax:
                amax = fabs(xn)
        if amax > div_threshold:
            diverged = k + 1
            x_arr[k + 2:] = 0.0
            break
    return x_arr, diverged
